#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "../csv.hpp"
#include "lecdc/solvers.hpp"

namespace lecdc::milp {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tail(const std::string& text, std::size_t lines) {
    std::size_t pos = text.size();
    for (std::size_t n = 0; n <= lines && pos != std::string::npos && pos > 0; ++n)
        pos = text.rfind('\n', pos - 1);
    return pos == std::string::npos ? text : text.substr(pos + 1);
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::atomic<int> run_counter{0};

}  // namespace

Solution parse_cbc_solution(const std::string& text, const Model& model) {
    Solution sol;
    std::istringstream in(text);
    std::string status_line;
    if (!std::getline(in, status_line)) {
        sol.log = "empty solution file";
        return sol;
    }
    sol.log = status_line;

    auto starts = [&](const char* prefix) { return status_line.rfind(prefix, 0) == 0; };
    bool values_meaningful = false;
    if (starts("Optimal")) {
        sol.status = SolveStatus::optimal;
        values_meaningful = true;
    } else if (starts("Infeasible") || starts("Integer infeasible")) {
        sol.status = SolveStatus::infeasible;
    } else if (starts("Unbounded")) {
        sol.status = SolveStatus::unbounded;
    } else if (starts("Stopped")) {
        sol.status = SolveStatus::limit;
        values_meaningful = status_line.find("no integer solution") == std::string::npos;
    } else {
        sol.status = SolveStatus::error;
        return sol;
    }

    auto objpos = status_line.find("objective value");
    if (objpos != std::string::npos) {
        std::istringstream obj(status_line.substr(objpos + 15));
        double v = 0.0;
        if (obj >> v) sol.objective = v + model.objective().constant();
    }
    if (!values_meaningful) return sol;

    std::unordered_map<std::string, std::int32_t> index;
    index.reserve(model.var_count());
    for (std::size_t j = 0; j < model.var_count(); ++j)
        index.emplace(lp_variable_name(model.var(static_cast<std::int32_t>(j)).name), static_cast<std::int32_t>(j));

    sol.values.assign(model.var_count(), 0.0);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string first, name, value;
        if (!(fields >> first)) continue;
        if (first == "**") fields >> first;
        if (!(fields >> name >> value)) continue;
        auto it = index.find(name);
        if (it == index.end()) continue;  // a row entry, when printing rows
        try {
            sol.values[it->second] = csv::parse_number(value);
        } catch (const std::exception&) {
            sol.status = SolveStatus::error;
            sol.log = "bad value for '" + name + "': " + value;
            return sol;
        }
    }
    return sol;
}

CbcFileAdapter::CbcFileAdapter(fs::path executable, fs::path work_dir)
    : executable_(std::move(executable)), work_dir_(std::move(work_dir)) {}

bool CbcFileAdapter::available() const {
    std::string cmd = shell_quote(executable_.string()) + " -quit > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

Solution CbcFileAdapter::run(const Model& model, const SolveOptions& options) {
    auto start = std::chrono::steady_clock::now();
    fs::path dir = work_dir_;
    bool temporary = dir.empty();
    if (temporary) {
        dir = fs::temp_directory_path() /
              ("lecdc_cbc_" + std::to_string(::getpid()) + "_" + std::to_string(run_counter++));
    }
    fs::create_directories(dir);
    const fs::path lp = dir / "model.lp", solution = dir / "model.sol", log = dir / "cbc.log";
    fs::remove(solution);
    {
        std::ofstream out(lp, std::ios::binary);
        out << emit_lp(model);
    }

    std::ostringstream cmd;
    cmd << shell_quote(executable_.string()) << ' ' << shell_quote(lp.string());
    if (std::isfinite(options.time_limit_s)) cmd << " sec " << options.time_limit_s;
    cmd << " ratio " << options.mip_gap << " integerT 1e-7 primalT 1e-9 solve solu "
        << shell_quote(solution.string()) << " > " << shell_quote(log.string()) << " 2>&1";
    int rc = std::system(cmd.str().c_str());

    Solution sol;
    if (rc != 0 || !fs::exists(solution)) {
        sol.log = "cbc exited with status " + std::to_string(rc) + "\n" + tail(read_file(log), 12);
    } else {
        sol = parse_cbc_solution(read_file(solution), model);
        if (sol.status == SolveStatus::error) sol.log += "\n" + tail(read_file(log), 12);
    }
    if (temporary) {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

std::unique_ptr<SolverAdapter> make_adapter(const std::string& requested) {
    std::string name = requested;
    if (name.empty()) {
        const char* env = std::getenv("LECDC_SOLVER");
        name = env && *env ? env : "highs";
    }
    if (name == "highs") return std::make_unique<HighsAdapter>();
    if (name == "cbc") {
        const char* env = std::getenv("LECDC_CBC_PATH");
        auto adapter = std::make_unique<CbcFileAdapter>(env && *env ? fs::path(env) : fs::path("cbc"));
        if (!adapter->available())
            throw SolverUnavailable("cbc executable not runnable (set LECDC_CBC_PATH)");
        return adapter;
    }
    throw SolverUnavailable("unknown solver adapter '" + name + "'");
}

}  // namespace lecdc::milp
