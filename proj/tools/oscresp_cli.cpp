// oscresp - verification suites and data export

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscresp/driven.hpp"
#include "oscresp/kernels.hpp"
#include "oscresp/serialize.hpp"
#include "oscresp/suites.hpp"
#include "oscresp/wick.hpp"

namespace {

using namespace oscresp;
using nlohmann::json;

constexpr int exit_pass = 0;
constexpr int exit_gating_failure = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

OscillatorParams parse_params(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double x = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) throw UsageError("--params: bad number '" + cell + "'");
        v.push_back(x);
    }
    if (v.size() != 3) throw UsageError("--params expects m,omega0,hbar");
    try {
        return make_params(v[0], v[1], v[2]);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--params: ") + e.what());
    }
}

std::string output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("OSCRESP_OUT_DIR"); env && *env) return env;
    return ".";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_verify(const std::string& suite, const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::string& out) {
    if (!is_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
    SuiteConfig config = default_config();
    if (!config_path.empty()) {
        json j;
        try {
            j = json::parse(io::read_file(config_path));
        } catch (const json::parse_error& e) {
            throw UsageError("config '" + config_path + "': " + e.what());
        }
        try {
            config = config_from_json(j);
        } catch (const std::invalid_argument& e) {
            throw UsageError("config '" + config_path + "': " + e.what());
        }
    }
    if (seed) config.seed = *seed;
    const SuiteReport report = run_suite(suite, config);
    const std::string path = (std::filesystem::path(output_dir(out)) / ("report_" + suite + ".json")).string();
    io::write_file(path, dump(report_to_json(report)));
    std::cout << format_table(report);
    std::cout << "report: " << path << "  wall time " << std::fixed << std::setprecision(3) << report.wall_time_s
              << " s\n";
    return report.all_gating_pass() ? exit_pass : exit_gating_failure;
}

int cmd_kernels(const std::string& params_text, std::size_t n, std::size_t bin, const std::string& kind,
                const std::string& format) {
    const auto p = parse_params(params_text);
    TimeGrid g;
    try {
        g = commensurate_grid(n, p.omega0, bin);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto k = osc_kernels(p, g);
    const Kernel* chosen = nullptr;
    if (kind == "retarded") chosen = &k.retarded;
    else if (kind == "contraction") chosen = &k.contraction;
    else if (kind == "feynman") chosen = &k.feynman;
    else throw UsageError("--kind must be retarded, contraction or feynman");
    if (format == "csv") io::write_csv(std::cout, *chosen);
    else std::cout << dump(io::to_json(*chosen));
    return exit_pass;
}

int cmd_drive(const std::string& current, double t_on, const std::string& params_text, std::size_t n, double dt) {
    const auto p = parse_params(params_text);
    DriveScenario sc;
    try {
        CurrentProfile profile = parse_current(current, p.omega0);
        profile.t_on = t_on;
        sc = make_scenario(p, make_grid(n, dt), profile);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto kernels = osc_kernels(p, sc.grid, GridMode::loose);
    const SampledSignal q = classical_displacement(sc, kernels.retarded);
    const auto ode = ode_oscillator(sc);
    const auto w = causal_window(sc);
    std::cout << "t,q_j,ode_q,abs_diff\n" << std::setprecision(17);
    for (std::size_t k = w.first; k < w.last; ++k) {
        std::cout << sc.grid.time(k) << ',' << q[k].real() << ',' << ode.q[k].real() << ','
                  << std::abs(q[k] - ode.q[k]) << '\n';
    }
    return exit_pass;
}

int cmd_wick(const std::string& text) {
    std::vector<fock::Factor> factors;
    try {
        factors = wick::parse_factors(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json terms = json::array();
    for (const auto& t : wick::hori_expand(factors)) {
        json pairs = json::array();
        json kinds = json::array();
        for (std::size_t i = 0; i < t.pairs.size(); ++i) {
            pairs.push_back({t.pairs[i].first, t.pairs[i].second});
            kinds.push_back(wick::kind_name(t.kinds[i]));
        }
        terms.push_back({{"pairs", pairs}, {"kinds", kinds}, {"rest", t.rest}, {"coefficient", t.coefficient}});
    }
    std::cout << dump(terms);
    return exit_pass;
}

int cmd_report(const std::string& path) {
    SuiteReport r;
    try {
        r = report_from_json(json::parse(io::read_file(path)));
    } catch (const json::parse_error& e) {
        throw UsageError("report '" + path + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError("report '" + path + "': " + e.what());
    }
    std::cout << "suite " << r.suite << ", schema " << r.schema_version << ", wall time " << r.wall_time_s << " s\n";
    std::cout << format_table(r);
    return r.all_gating_pass() ? exit_pass : exit_gating_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Response-function verification suites for the quantum harmonic oscillator"};
    app.require_subcommand(1);

    std::string suite;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    auto* verify = app.add_subcommand("verify", "Run a verification suite and write its JSON report");
    verify->add_option("suite", suite, "spectral, kernels, wick, functional, driven, charged, field or all")->required();
    verify->add_option("--config", config_path, "JSON config file");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--out", out, "Report directory (default: $OSCRESP_OUT_DIR or .)");

    std::string params = "1,1,1";
    std::size_t n = 256;
    std::size_t bin = 8;
    std::string kind = "retarded";
    std::string format = "csv";
    auto* kernels = app.add_subcommand("kernels", "Export an oscillator kernel on a commensurate grid");
    kernels->add_option("--params", params, "m,omega0,hbar");
    kernels->add_option("--n", n, "Grid size");
    kernels->add_option("--bin", bin, "DFT bin of omega0");
    kernels->add_option("--kind", kind, "retarded, contraction or feynman");
    kernels->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string current = "step:1.0";
    double t_on = 0.0;
    std::string drive_params = "1,1,1";
    std::size_t drive_n = 256;
    double dt = 0.02;
    auto* drive = app.add_subcommand("drive", "Driven trajectory: convolution against the ODE solution");
    drive->add_option("--current", current, "step:A, sine:A[:omega], spike:A or zero");
    drive->add_option("--t-on", t_on, "Onset time (on the grid, >= 0)");
    drive->add_option("--params", drive_params, "m,omega0,hbar");
    drive->add_option("--n", drive_n, "Grid size");
    drive->add_option("--dt", dt, "Time step");

    std::string factors;
    auto* wick_cmd = app.add_subcommand("wick", "Contraction expansion of a double-time-ordered product");
    wick_cmd->add_option("--factors", factors, "e.g. +t0.0,+t1.3,-t0.7")->required();

    std::string report_path;
    auto* report = app.add_subcommand("report", "Print a stored report");
    report->add_option("file", report_path, "Report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*verify) return cmd_verify(suite, config_path, seed, out);
        if (*kernels) return cmd_kernels(params, n, bin, kind, format);
        if (*drive) return cmd_drive(current, t_on, drive_params, drive_n, dt);
        if (*wick_cmd) return cmd_wick(factors);
        if (*report) return cmd_report(report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
