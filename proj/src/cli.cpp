#include "lecdc/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csv.hpp"
#include "json.hpp"
#include "lecdc/coordinator.hpp"
#include "lecdc/sim_metrics.hpp"
#include "lecdc/solvers.hpp"
#include "lecdc/synthetic.hpp"

#ifndef LECDC_VERSION
#define LECDC_VERSION "dev"
#endif

namespace lecdc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised inside a command to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

struct Common {
    std::string case_path;
    std::string scenario;
    std::string solver;
    std::string out = "out";
    double time_limit = milp::kInf;
    double mip_gap = 1e-6;
};

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

int case_exit_code(CaseError::Kind kind) {
    switch (kind) {
        case CaseError::Kind::validation:
        case CaseError::Kind::length_mismatch: return kValidation;
        default: return kUsage;
    }
}

CaseBundle load(const std::string& path) {
    try {
        return load_case(path);
    } catch (const CaseError& e) {
        throw Exit{case_exit_code(e.kind()), e.what()};
    }
}

std::vector<ScenarioConfig> scenarios_for(const std::string& name, const CaseBundle& b) {
    if (name.empty()) return {b.scenario};
    if (name == "all")
        return {ScenarioConfig::nc(), ScenarioConfig::tc(), ScenarioConfig::tc_jp(), ScenarioConfig::tc_jp_afrr()};
    try {
        return {scenario_from_name(name)};
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, e.what()};
    }
}

std::unique_ptr<milp::SolverAdapter> adapter_for(const Common& c) {
    try {
        return milp::make_adapter(c.solver);
    } catch (const milp::SolverUnavailable& e) {
        throw Exit{kEnvironment, e.what()};
    }
}

WindowOptions window_options(const Common& c) {
    WindowOptions w;
    w.solve.time_limit_s = c.time_limit;
    w.solve.mip_gap = c.mip_gap;
    return w;
}

json manifest_base(const std::string& command, const Common& c, const std::string& solver_name) {
    return {{"command", command},
            {"case", c.case_path},
            {"scenario", c.scenario.empty() ? "case" : c.scenario},
            {"solver", {{"name", solver_name}, {"mip_gap", c.mip_gap},
                        {"time_limit_s", std::isfinite(c.time_limit) ? json(c.time_limit) : json(nullptr)}}},
            {"out", c.out},
            {"timestamp", utc_timestamp()},
            {"version", LECDC_VERSION}};
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Exit{kUsage, "cannot write " + path.string()};
    out << j.dump(2) << '\n';
}

json scenario_flags(const ScenarioConfig& s) {
    return {{"thermal_coupling", s.thermal_coupling}, {"job_pausing", s.job_pausing}, {"afrr", s.afrr}};
}

void print_not_solved(std::ostream& err, const std::string& what, const SolutionRecord& r) {
    err << what << ": " << milp::to_string(r.status) << '\n';
    if (!r.infeasible_families.empty()) {
        err << "  relaxing any of these constraint families restores feasibility:";
        for (const auto& f : r.infeasible_families) err << ' ' << f;
        err << '\n';
    } else if (r.status == milp::SolveStatus::infeasible) {
        err << "  no single constraint family explains the infeasibility\n";
    }
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    CaseBundle b;
    try {
        b = load_case_unchecked(path);
    } catch (const CaseError& e) {
        err << "error: " << e.what() << '\n';
        return case_exit_code(e.kind());
    }
    auto findings = validate_case(b);
    for (const auto& f : findings) out << f.field << ": " << f.message << '\n';
    if (findings.empty()) {
        out << path << ": valid (" << b.community.households.size() << " households, " << b.grid.period_count
            << " periods)\n";
        return kOk;
    }
    out << findings.size() << " finding(s)\n";
    return kValidation;
}

int cmd_solve(const Common& c, bool emit_lp_only, std::ostream& out, std::ostream& err) {
    CaseBundle b = load(c.case_path);
    auto scenarios = scenarios_for(c.scenario, b);
    fs::create_directories(c.out);
    json manifest = manifest_base("solve", c, emit_lp_only ? "none" : (c.solver.empty() ? "default" : c.solver));
    manifest["runs"] = json::array();

    if (emit_lp_only) {
        for (const auto& s : scenarios) {
            fs::path dir = fs::path(c.out) / scenario_name(s);
            fs::create_directories(dir);
            Assembly a = assemble(b, s);
            std::ofstream lp(dir / "model.lp");
            lp << milp::emit_lp(a.model);
            auto st = a.stats();
            out << scenario_name(s) << ": wrote " << (dir / "model.lp").string() << " (" << st.variables
                << " variables, " << st.binaries << " binaries, " << st.constraints << " constraints)\n";
            manifest["runs"].push_back({{"scenario", scenario_name(s)}, {"flags", scenario_flags(s)},
                                        {"lp", (dir / "model.lp").string()}});
        }
        write_json(manifest, fs::path(c.out) / "manifest.json");
        return kOk;
    }

    auto adapter = adapter_for(c);
    manifest["solver"]["name"] = adapter->name();
    int code = kOk;
    for (const auto& s : scenarios) {
        fs::path dir = fs::path(c.out) / scenario_name(s);
        SolutionRecord r = solve_window(b, s, *adapter, window_options(c));
        write_record(r, dir);
        for (const auto& w : r.warnings) err << "warning: " << w << '\n';
        manifest["runs"].push_back({{"scenario", scenario_name(s)}, {"flags", scenario_flags(s)},
                                    {"status", milp::to_string(r.status)}, {"solve_seconds", r.solve_seconds},
                                    {"mip_gap", r.mip_gap}, {"dir", dir.string()}});
        if (!r.optimal()) {
            print_not_solved(err, scenario_name(s), r);
            code = kNotSolved;
            continue;
        }
        out << scenario_name(s) << ": optimal, cost " << csv::format_number(r.objective_cost) << " EUR, "
            << std::fixed << std::setprecision(2) << r.solve_seconds << " s\n"
            << std::defaultfloat;
    }
    write_json(manifest, fs::path(c.out) / "manifest.json");
    return code;
}

int cmd_simulate(const Common& c, int window_days, std::ostream& out, std::ostream& err) {
    CaseBundle b = load(c.case_path);
    auto scenarios = scenarios_for(c.scenario, b);
    const int ppd = b.grid.periods_per_day();
    if (window_days < 1 || b.grid.period_count % (window_days * ppd) != 0)
        throw Exit{kUsage, "--window-days " + std::to_string(window_days) + " does not divide the horizon of " +
                               std::to_string(b.grid.period_count) + " periods"};
    auto adapter = adapter_for(c);
    fs::create_directories(c.out);
    json manifest = manifest_base("simulate", c, adapter->name());
    manifest["window_days"] = window_days;
    manifest["runs"] = json::array();

    std::vector<MetricsReport> reports;
    int code = kOk;
    for (const auto& s : scenarios) {
        const std::string name = scenario_name(s);
        fs::path dir = fs::path(c.out) / name;
        ChainOptions opts;
        opts.window = window_options(c);
        json windows = json::array();
        const int count = b.grid.period_count / (window_days * ppd);
        opts.on_window = [&](int k, const SolutionRecord& r) {
            std::ostringstream tag;
            tag << "window_" << std::setw(2) << std::setfill('0') << k;
            write_record(r, dir / tag.str());
            windows.push_back({{"window", k}, {"solve_seconds", r.solve_seconds}, {"mip_gap", r.mip_gap}});
            err << name << ": window " << k + 1 << "/" << count << " cost " << csv::format_number(r.objective_cost)
                << " (" << std::fixed << std::setprecision(1) << r.solve_seconds << " s)\n"
                << std::defaultfloat;
        };
        try {
            ChainResult res = run_chain(b, s, window_days, *adapter, opts);
            reports.push_back(res.report);
            manifest["runs"].push_back({{"scenario", name}, {"flags", scenario_flags(s)}, {"status", "optimal"},
                                        {"windows", windows}});
        } catch (const ChainError& e) {
            err << name << ": " << e.what() << '\n';
            manifest["runs"].push_back({{"scenario", name}, {"flags", scenario_flags(s)},
                                        {"status", milp::to_string(e.record().status)},
                                        {"failed_window", e.window()}, {"windows", windows}});
            code = kNotSolved;
        }
    }
    if (!reports.empty()) {
        write_metrics_table(reports, fs::path(c.out) / "metrics.csv");
        write_metrics_json(reports, fs::path(c.out) / "metrics.json");
        for (const auto& r : reports) {
            out << r.scenario << ": cost " << csv::format_number(r.op_cost) << " kEUR, HVAC "
                << csv::format_number(r.power_to_hvac) << " MWh, heat recovery "
                << csv::format_number(r.heat_recovery_ratio) << " %\n";
        }
    }
    write_json(manifest, fs::path(c.out) / "manifest.json");
    return code;
}

std::vector<int> parse_counts(const std::string& text) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            counts.push_back(v);
        } catch (const std::exception&) {
            throw Exit{kUsage, "--counts: not an integer: '" + item + "'"};
        }
    }
    return counts;
}

int cmd_sensitivity(const Common& c, const std::string& counts_text, int window_days, std::ostream& out,
                    std::ostream& err) {
    CaseBundle b = load(c.case_path);
    const int ppd = b.grid.periods_per_day();
    if (window_days < 0 || (window_days > 0 && b.grid.period_count % (window_days * ppd) != 0))
        throw Exit{kUsage, "--window-days " + std::to_string(window_days) + " does not divide the horizon of " +
                               std::to_string(b.grid.period_count) + " periods"};
    auto scenarios = scenarios_for(c.scenario, b);
    if (scenarios.size() != 1) throw Exit{kUsage, "sensitivity takes a single scenario"};
    std::vector<int> counts;
    try {
        std::vector<std::string> warnings;
        counts = normalize_counts(parse_counts(counts_text), &warnings);
        for (const auto& w : warnings) err << "warning: " << w << '\n';
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, e.what()};
    }
    auto adapter = adapter_for(c);
    fs::create_directories(c.out);
    json manifest = manifest_base("sensitivity", c, adapter->name());
    manifest["counts"] = counts;
    manifest["window_days"] = window_days;
    int code = kOk;
    try {
        SensitivityResult res = sensitivity_households(b, counts, scenarios[0], *adapter, window_days, ChainOptions{window_options(c), {}});
        write_sensitivity_table(res, fs::path(c.out) / "sensitivity.csv");
        for (const auto& r : res.rows) {
            out << r.count << " households: " << csv::format_number(r.cost_per_household) << " EUR per household\n";
        }
        manifest["status"] = "optimal";
    } catch (const ChainError& e) {
        err << "error: " << e.what() << '\n';
        manifest["status"] = milp::to_string(e.record().status);
        code = kNotSolved;
    }
    write_json(manifest, fs::path(c.out) / "manifest.json");
    return code;
}

int cmd_generate(const SyntheticOptions& o, const std::string& dir, std::ostream& out) {
    CaseBundle b;
    try {
        b = generate_case(o);
    } catch (const std::invalid_argument& e) {
        throw Exit{kUsage, e.what()};
    }
    save_case(b, dir);
    out << "wrote " << (fs::path(dir) / "case.json").string() << " (" << b.grid.period_count << " periods, "
        << b.community.households.size() << " households)\n";
    return kOk;
}

void add_common(CLI::App* sub, Common& c, bool with_scenario = true) {
    sub->add_option("case", c.case_path, "Case manifest (case.json)")->required();
    if (with_scenario)
        sub->add_option("--scenario", c.scenario, "nc, tc, tc-jp, tc-jp-afrr or all (default: from the case)");
    sub->add_option("--solver", c.solver, "highs or cbc (default: $LECDC_SOLVER, else highs)");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--time-limit", c.time_limit, "Solver time limit per window, seconds")->check(CLI::PositiveNumber);
    sub->add_option("--mip-gap", c.mip_gap, "Relative MIP gap")->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy community and data centre co-optimisation"};
    app.set_version_flag("--version", LECDC_VERSION);
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a case and print every finding");
    validate->add_option("case", validate_path, "Case manifest (case.json)")->required();

    Common solve_c;
    bool emit_lp_only = false;
    auto* solve = app.add_subcommand("solve", "Solve the case horizon as one window");
    add_common(solve, solve_c);
    solve->add_flag("--emit-lp", emit_lp_only, "Write the model in LP format and stop");

    Common sim_c;
    int window_days = 15;
    auto* simulate = app.add_subcommand("simulate", "Solve consecutive windows with state carryover");
    add_common(simulate, sim_c);
    simulate->add_option("--window-days", window_days, "Window length in days");

    Common sens_c;
    std::string counts = "5,10,20,40,80,100";
    auto* sensitivity = app.add_subcommand("sensitivity", "Sweep the number of households");
    add_common(sensitivity, sens_c);
    sensitivity->add_option("--counts", counts, "Comma-separated household counts");
    int sens_window_days = 0;
    sensitivity->add_option("--window-days", sens_window_days, "Window length in days (default: whole horizon)");

    SyntheticOptions gen;
    std::string gen_out = "data/desk10_year";
    auto* generate = app.add_subcommand("generate", "Write a synthetic case");
    generate->add_option("--out", gen_out, "Output directory");
    generate->add_option("--name", gen.name, "Case name");
    generate->add_option("--households", gen.households, "Number of households");
    generate->add_option("--first-day", gen.first_day, "First day of the year (0-359)");
    generate->add_option("--days", gen.days, "Horizon in days");
    generate->add_option("--seed", gen.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) return cmd_validate(validate_path, out, err);
        if (*solve) return cmd_solve(solve_c, emit_lp_only, out, err);
        if (*simulate) return cmd_simulate(sim_c, window_days, out, err);
        if (*sensitivity) return cmd_sensitivity(sens_c, counts, sens_window_days, out, err);
        if (*generate) return cmd_generate(gen, gen_out, out);
    } catch (const Exit& e) {
        err << "error: " << e.message << '\n';
        return e.code;
    } catch (const CaseError& e) {
        err << "error: " << e.what() << '\n';
        return case_exit_code(e.kind());
    } catch (const milp::SolverUnavailable& e) {
        err << "error: " << e.what() << '\n';
        return kEnvironment;
    } catch (const milp::SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kEnvironment;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << '\n';
        return kEnvironment;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace lecdc::cli
