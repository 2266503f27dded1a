#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "lecdc/cli.hpp"
#include "lecdc/model_core.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "lecdc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = lecdc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_count(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

const std::string kDay = fixtures::desk10_day().string();

}  // namespace

TEST_CASE("validate") {
    auto ok = run({"validate", kDay});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("valid") != std::string::npos);

    auto dir = fixtures::scratch_dir("cli_validate");
    auto b = fixtures::flat_case();
    b.community.battery_soc_min = 20.0;
    b.community.battery_soc_max = 10.0;
    lecdc::save_case(b, dir);
    auto bad = run({"validate", (dir / "case.json").string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("community.battery_soc_min") != std::string::npos);

    lecdc::save_case(fixtures::flat_case(), dir);
    fs::remove(dir / "system.csv");
    auto missing = run({"validate", (dir / "case.json").string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("system.csv") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("usage errors") {
    const std::string never = (fixtures::scratch_dir("cli_usage") / "out").string();
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"solve", kDay, "--scenario", "xyz", "--out", never}).code == 2);
    CHECK(run({"solve", kDay, "--mip-gap", "-1"}).code == 2);
    auto w = run({"simulate", kDay, "--window-days", "7", "--out", never});
    CHECK(w.code == 2);
    CHECK(w.err.find("does not divide") != std::string::npos);
    CHECK(run({"sensitivity", kDay, "--counts", "0", "--out", never}).code == 2);
    CHECK(run({"sensitivity", kDay, "--counts", "3,x", "--out", never}).code == 2);
    CHECK(run({"solve", kDay, "--solver", "nosuch", "--out", never}).code == 4);
}

TEST_CASE("solve writes records and a manifest") {
    auto dir = fixtures::scratch_dir("cli_solve");
    auto r = run({"solve", kDay, "--scenario", "tc-jp-afrr", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (auto f : {"system_series.csv", "household_series.csv", "delay_matrix.csv", "summary.json"})
        CHECK(fs::exists(dir / "tc-jp-afrr" / f));
    auto summary = nlohmann::json::parse(slurp(dir / "tc-jp-afrr" / "summary.json"));
    CHECK(summary.at("status") == "optimal");
    auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("command") == "solve");
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest.contains("version"));
    CHECK(manifest.at("solver").at("name") == "highs");
    CHECK(line_count(dir / "tc-jp-afrr" / "system_series.csv") == 25);
    CHECK(line_count(dir / "tc-jp-afrr" / "household_series.csv") == 1 + 24 * 10);

    // Same inputs, same bytes.
    auto again = fixtures::scratch_dir("cli_solve2");
    REQUIRE(run({"solve", kDay, "--scenario", "tc-jp-afrr", "--out", again.string()}).code == 0);
    for (auto f : {"system_series.csv", "household_series.csv", "delay_matrix.csv", "summary.json"})
        CHECK(slurp(dir / "tc-jp-afrr" / f) == slurp(again / "tc-jp-afrr" / f));
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("no pausing, no delays") {
    auto dir = fixtures::scratch_dir("cli_nc");
    REQUIRE(run({"solve", kDay, "--scenario", "nc", "--out", dir.string()}).code == 0);
    std::ifstream in(dir / "nc" / "delay_matrix.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) CHECK(std::stod(cell) == 0.0);
    }
    CHECK(rows == 24);
    fs::remove_all(dir);
}

TEST_CASE("emit-lp writes the model without solving") {
    auto dir = fixtures::scratch_dir("cli_lp");
    auto r = run({"solve", kDay, "--scenario", "all", "--emit-lp", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (auto s : {"nc", "tc", "tc-jp", "tc-jp-afrr"}) {
        CHECK(fs::exists(dir / s / "model.lp"));
        CHECK_FALSE(fs::exists(dir / s / "summary.json"));
    }
    auto text = slurp(dir / "tc-jp-afrr" / "model.lp");
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Binaries") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("infeasible case exits with 3") {
    auto dir = fixtures::scratch_dir("cli_infeasible");
    auto b = fixtures::flat_case(4);
    b.profiles.outdoor_temp.assign(4, -30.0);
    b.community.households[0].thermal.heat_rating = 0.0;
    lecdc::save_case(b, dir / "case");
    auto r = run({"solve", (dir / "case" / "case.json").string(), "--scenario", "tc", "--out", (dir / "out").string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("thermal") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate all scenarios on one day") {
    auto dir = fixtures::scratch_dir("cli_sim");
    auto r = run({"simulate", kDay, "--scenario", "all", "--window-days", "1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(dir / "metrics.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "metric,unit,nc,tc,tc-jp,tc-jp-afrr");
    CHECK(line_count(dir / "metrics.csv") == 11);
    CHECK(fs::exists(dir / "tc" / "window_00" / "summary.json"));
    auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics.size() == 4);
    fs::remove_all(dir);
}

TEST_CASE("sensitivity tables") {
    auto dir = fixtures::scratch_dir("cli_sens");
    auto one = run({"sensitivity", kDay, "--counts", "3", "--scenario", "tc", "--out", dir.string()});
    REQUIRE(one.code == 0);
    CHECK(line_count(dir / "sensitivity.csv") == 2);
    auto dup = run({"sensitivity", kDay, "--counts", "2,3,2", "--scenario", "tc", "--out", dir.string()});
    REQUIRE(dup.code == 0);
    CHECK(dup.err.find("duplicate") != std::string::npos);
    CHECK(line_count(dir / "sensitivity.csv") == 3);
    fs::remove_all(dir);
}

TEST_CASE("generate writes a loadable case") {
    auto dir = fixtures::scratch_dir("cli_gen");
    auto r = run({"generate", "--out", dir.string(), "--households", "3", "--days", "2", "--first-day", "30"});
    REQUIRE(r.code == 0);
    auto b = lecdc::load_case(dir / "case.json");
    CHECK(b.community.households.size() == 3);
    CHECK(b.grid.period_count == 48);
    CHECK(b.grid.start_index == 30 * 24);
    fs::remove_all(dir);
}
