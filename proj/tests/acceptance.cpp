// acceptance - one PASS/FAIL line per acceptance criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oscresp/suites.hpp"

using namespace oscresp;

namespace {

struct Requirement {
    std::string prefix;  // check ids starting with this
    double tolerance;
    bool gating{true};
};

struct Timed {
    SuiteReport report;
    double seconds{0.0};
};

Timed timed_run(const std::string& suite) {
    const auto start = std::chrono::steady_clock::now();
    Timed t{run_suite(suite, default_config()), 0.0};
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

struct Outcome {
    bool pass{true};
    std::string detail;
};

// Re-judges the rows against the pinned tolerances; does not trust the report's pass flags.
Outcome judge(const SuiteReport& r, const std::vector<Requirement>& reqs) {
    Outcome out;
    for (const auto& req : reqs) {
        double worst = 0.0;
        std::size_t matched = 0;
        for (const auto& row : r.rows) {
            if (row.check_id.rfind(req.prefix, 0) != 0) continue;
            ++matched;
            if (std::isnan(row.residual) || row.residual > worst) worst = std::isnan(worst) ? worst : row.residual;
        }
        const bool ok = matched > 0 && worst <= req.tolerance;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s[%zu] %.3e/%.0e%s", out.detail.empty() ? "" : "; ", req.prefix.c_str(), matched,
                      worst, req.tolerance, req.gating ? (ok ? "" : " FAIL") : " (reported)");
        out.detail += buf;
        if (req.gating && !ok) out.pass = false;
    }
    return out;
}

// budget <= 0: no runtime limit.
bool report(int id, const Outcome& o, double seconds, double budget) {
    const bool fast = budget <= 0.0 || seconds < budget;
    const bool pass = o.pass && fast;
    char limit[64] = "";
    if (budget > 0.0) std::snprintf(limit, sizeof limit, " (limit %.0f s%s)", budget, fast ? "" : ", exceeded");
    std::printf("criterion %2d: %s  %s; runtime %.3f s%s\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), seconds, limit);
    std::fflush(stdout);
    return pass;
}

bool same_table(const SuiteReport& a, const SuiteReport& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        const bool same_residual = x.residual == y.residual || (std::isnan(x.residual) && std::isnan(y.residual));
        if (x.check_id != y.check_id || !same_residual || x.tolerance != y.tolerance || x.pass != y.pass) return false;
    }
    return true;
}

}  // namespace

int main() {
    int failures = 0;
    auto tally = [&](bool ok) { failures += ok ? 0 : 1; };

    const auto kernels = timed_run("kernels");
    tally(report(1,
                 judge(kernels.report, {{"kernels.retarded_from_contractions", 1e-10},
                                        {"kernels.commutator_decomposition", 1e-10},
                                        {"kernels.contraction_from_retarded", 1e-10},
                                        {"kernels.feynman_from_retarded", 1e-10},
                                        {"kernels.feynman_conjugate_from_retarded", 1e-10}}),
                 kernels.seconds, 1.0));

    const auto wick = timed_run("wick");
    tally(report(2, judge(wick.report, {{"wick.two_point.", 1e-12}}), wick.seconds, 1.0));
    tally(report(3, judge(wick.report, {{"wick.vacuum_four_point", 1e-11}, {"wick.randomized", 1e-9}}), wick.seconds, 30.0));

    const auto functional = timed_run("functional");
    tally(report(4,
                 judge(functional.report, {{"functional.response_equals_quadratic", 1e-10},
                                           {"functional.substitution_round_trip", 1e-12},
                                           {"functional.probes_zero_nyquist_clean", 1e-10}}),
                 functional.seconds, 5.0));

    const auto driven = timed_run("driven");
    tally(report(5, judge(driven.report, {{"driven.factorization.", 1e-9}, {"driven.ode_vs_convolution.", 1e-6}}),
                 driven.seconds, 10.0));

    tally(report(6,
                 judge(kernels.report, {{"kubo.commutator.", 1e-10}, {"kubo.qp_commutator", 1e-10}, {"kubo.canonical", 1e-10}}),
                 kernels.seconds, 0.0));

    const auto charged = timed_run("charged");
    tally(report(7,
                 judge(charged.report, {{"charged.particle_from_retarded", 1e-10},
                                        {"charged.antiparticle_from_retarded", 1e-10},
                                        {"charged.feynman_from_retarded", 1e-10},
                                        {"charged.feynman_adjoint_from_retarded", 1e-10},
                                        {"charged.retarded_two_definitions", 1e-10},
                                        {"charged.particle_anti_hermitian", 1e-10},
                                        {"charged.antiparticle_anti_hermitian", 1e-10},
                                        {"charged.doubled_substitution", 1e-10}}),
                 charged.seconds, 2.0));

    const auto field = timed_run("field");
    tally(report(8,
                 judge(field.report, {{"field.contraction_from_retarded", 1e-10}, {"field.feynman_from_retarded", 1e-10}}),
                 field.seconds, 0.0));

    tally(report(9,
                 judge(functional.report, {{"functional.weyl_two_point.", 1e-10},
                                           {"functional.weyl_kernel_rearrangement", 1e-10},
                                           {"functional.weyl_four_point.", 1e-10, false}}),
                 functional.seconds, 0.0));

    auto first = default_config();
    first.seed = 7;
    const auto start = std::chrono::steady_clock::now();
    const auto a = run_suite("all", first);
    const auto b = run_suite("all", first);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool same = same_table(a, b);
    Outcome det{same, "verify all --seed 7 twice: " + std::to_string(a.rows.size()) + " rows " +
                          (same ? "identical" : "DIFFER")};
    tally(report(10, det, seconds, 0.0));

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
