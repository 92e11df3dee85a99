// suites.cpp - named verification suites and their JSON reports

#include "oscresp/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oscresp/driven.hpp"
#include "oscresp/fock.hpp"
#include "oscresp/functional.hpp"
#include "oscresp/spectral.hpp"
#include "oscresp/wick.hpp"

namespace oscresp {

using nlohmann::json;

namespace {

constexpr cd I{0.0, 1.0};

using Rows = std::vector<CheckRow>;
using Task = std::function<Rows()>;
using Rng = std::mt19937_64;

Rng task_rng(const SuiteConfig& c, std::uint64_t stream) { return Rng(c.seed * 0x9E3779B97F4A7C15ULL + stream); }

CheckRow row(const SuiteConfig& c, std::string id, std::string eq, double residual, double tol, bool gating = true) {
    if (auto it = c.tolerances.find(id); it != c.tolerances.end()) tol = it->second;
    const bool pass = residual <= tol;  // NaN fails
    return CheckRow{std::move(id), std::move(eq), residual, tol, pass, gating};
}

Eigen::VectorXcd random_values(Rng& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(k) = cd{re, im};
    }
    return v;
}

Eigen::VectorXcd without_zero_nyquist(const Eigen::VectorXcd& v) {
    Eigen::VectorXcd spectrum = detail::dft(v);
    spectrum(0) = 0.0;
    spectrum(spectrum.size() / 2) = 0.0;
    return detail::idft(spectrum);
}

SampledSignal random_signal(Rng& rng, const TimeGrid& g, bool clean) {
    Eigen::VectorXcd v = random_values(rng, g.n);
    return SampledSignal(g, clean ? without_zero_nyquist(v) : v);
}

double max_abs(const Eigen::VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double relative(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

TimeGrid suite_grid(const SuiteConfig& c) { return commensurate_grid(c.n, c.params.omega0, c.bin); }

double fundamental(const TimeGrid& g) { return 2.0 * std::numbers::pi / g.period(); }

// ---------------------------------------------------------------- spectral

std::vector<Task> spectral_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        Rng rng = task_rng(c, 101);
        const TimeGrid g = suite_grid(c);
        const SampledSignal s = random_signal(rng, g, false);
        const auto parts = frequency_split(s);
        Rows rows;
        rows.push_back(row(c, "spectral.additivity", "s = s(+) + s(-)", max_abs_diff(parts.plus + parts.minus, s), 1e-14));

        const SampledSignal clean = random_signal(rng, g, true);
        const SampledSignal cp = frequency_plus(clean);
        rows.push_back(row(c, "spectral.projection", "(s(+))(+) = s(+)", max_abs_diff(frequency_plus(cp), cp), 1e-14));

        const Eigen::VectorXcd spectrum = detail::dft(s.values);
        const double n = static_cast<double>(g.n);
        const double shared = (std::norm(spectrum(0)) + std::norm(spectrum(spectrum.size() / 2))) / (2.0 * n);
        const double total = s.values.squaredNorm();
        const double parseval =
            std::abs(total - parts.plus.values.squaredNorm() - parts.minus.values.squaredNorm() - shared) / total;
        rows.push_back(row(c, "spectral.parseval", "|s|^2 = |s(+)|^2 + |s(-)|^2 + zero/Nyquist cross terms", parseval,
                           1e-12));

        rows.push_back(row(c, "spectral.time_reversal_swap", "[s(-t)](+) = s(-)(-t)",
                           max_abs_diff(frequency_plus(time_reversed(s)), time_reversed(parts.minus)), 1e-14));

        const SampledSignal real_s(g, s.values.real().cast<cd>());
        const auto real_parts = frequency_split(real_s);
        rows.push_back(row(c, "spectral.conjugation_swap", "s real: s(+)* = s(-)",
                           max_abs(real_parts.plus.values.conjugate() - real_parts.minus.values), 1e-14));
        return rows;
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 102);
        const TimeGrid g = suite_grid(c);
        const SampledSignal s = random_signal(rng, g, false);
        const Kernel k(g, random_values(rng, g.n));
        Rows rows;
        const SampledSignal direct = circular_convolve(k, s);
        const double shift = max_abs_diff(circular_convolve(frequency_plus(k), s), circular_convolve(k, frequency_plus(s))) /
                             std::max(1.0, max_abs(direct.values));
        rows.push_back(row(c, "spectral.split_shift", "K(+) * s = K * s(+)", shift, 1e-12));
        rows.push_back(row(c, "spectral.adjoint_involution", "(K^dagger)^dagger = K",
                           max_abs_diff(kernel_adjoint(kernel_adjoint(k)), k), 0.0));
        rows.push_back(row(c, "spectral.delta_identity", "delta * s = s", max_abs_diff(circular_convolve(delta_kernel(g), s), s),
                           1e-13));

        SampledSignal cosine(g);
        SampledSignal expected(g);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double wt = c.params.omega0 * g.time(i);
            cosine[i] = std::cos(wt);
            expected[i] = 0.5 * std::exp(-I * wt);
        }
        rows.push_back(row(c, "spectral.cosine_split", "cos(w t)(+) = exp(-i w t)/2",
                           max_abs_diff(frequency_plus(cosine), expected), 1e-14));
        return rows;
    });
    return tasks;
}

// ---------------------------------------------------------------- kernels

std::vector<Task> kernel_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        const TimeGrid g = suite_grid(c);
        const auto k = osc_kernels(c.params, g);
        Rows rows;
        rows.push_back(row(c, "kernels.retarded_from_contractions", "D_R(t) = D_F(t) - D(-t)",
                           max_abs_diff(retarded_from_contractions(k.feynman, k.contraction), k.retarded), 1e-10));
        rows.push_back(row(c, "kernels.commutator_decomposition", "D(t) - D(-t) = D_R(t) - D_R(-t)",
                           max_abs_diff(k.contraction - time_reversed(k.contraction), k.retarded - time_reversed(k.retarded)),
                           1e-10));
        rows.push_back(row(c, "kernels.contraction_from_retarded", "D(t) = D_R(+)(t) - D_R(-)(-t)",
                           max_abs_diff(contraction_from_retarded(k.retarded), k.contraction), 1e-10));
        rows.push_back(row(c, "kernels.feynman_from_retarded", "D_F(t) = D_R(+)(t) + D_R(+)(-t)",
                           max_abs_diff(feynman_from_retarded(k.retarded), k.feynman), 1e-10));
        rows.push_back(row(c, "kernels.feynman_conjugate_from_retarded", "D_F*(t) = D_R(-)(t) + D_R(-)(-t)",
                           max_abs_diff(feynman_conjugate_from_retarded(k.retarded), conjugated(k.feynman)), 1e-10));
        rows.push_back(row(c, "kernels.retarded_real", "Im D_R = 0", max_abs(k.retarded.values.imag().cast<cd>()), 1e-14));
        rows.push_back(row(c, "kernels.contraction_frequency_positive", "D(-) = 0",
                           max_abs(frequency_minus(k.contraction).values), 1e-12));
        return rows;
    });

    const std::vector<fock::StateSpec> states{fock::StateSpec::vacuum(), fock::StateSpec::coherent({0.5, 0.3}),
                                              fock::StateSpec::number(2)};
    for (std::size_t si = 0; si < states.size(); ++si) {
        tasks.push_back([c, si, state = states[si]] {
            Rng rng = task_rng(c, 200 + si);
            const TimeGrid g = suite_grid(c);
            const auto k = osc_kernels(c.params, g);
            const Kernel comm = commutator_kernel(k.retarded, c.params.hbar);
            const auto rho = fock::make_state(state, c.dim);
            std::uniform_int_distribution<long> index(0, static_cast<long>(g.n) - 1);
            double worst = 0.0;
            for (int trial = 0; trial < 10; ++trial) {
                long i = index(rng);
                long j = index(rng);
                while (std::abs(i - j) >= static_cast<long>(g.n / 2)) j = index(rng);
                const auto qi = fock::heisenberg_q(c.params, g.time(static_cast<std::size_t>(i)), c.dim);
                const auto qj = fock::heisenberg_q(c.params, g.time(static_cast<std::size_t>(j)), c.dim);
                const cd oracle = (rho.rho * (qi * qj - qj * qi)).trace();
                worst = std::max(worst, std::abs(oracle - comm[g.lag_index(i - j)]));
            }
            return Rows{row(c, "kubo.commutator." + state.describe(),
                            "<[q(t),q(t')]> = i hbar [D_R(t-t') - D_R(t'-t)]", worst, 1e-10)};
        });
    }
    tasks.push_back([c] {
        Rng rng = task_rng(c, 210);
        std::uniform_real_distribution<double> time(-5.0, 5.0);
        const auto block = static_cast<Eigen::Index>(c.dim - 1);
        double worst_qp = 0.0;
        double worst_equal = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const double t = time(rng);
            const double tp = time(rng);
            const auto q = fock::heisenberg_q(c.params, t, c.dim);
            const auto p = fock::heisenberg_p(c.params, tp, c.dim);
            const fock::Operator comm = q * p - p * q;
            const fock::Operator want = qp_commutator(c.params, t - tp) * fock::Operator::Identity(block, block);
            worst_qp = std::max(worst_qp, (comm.topLeftCorner(block, block) - want).cwiseAbs().maxCoeff());

            const auto pe = fock::heisenberg_p(c.params, t, c.dim);
            const fock::Operator equal = q * pe - pe * q;
            const fock::Operator canonical = I * c.params.hbar * fock::Operator::Identity(block, block);
            worst_equal = std::max(worst_equal, (equal.topLeftCorner(block, block) - canonical).cwiseAbs().maxCoeff());
        }
        return Rows{row(c, "kubo.qp_commutator", "[q(t),p(t')] = i hbar cos(w0 (t-t'))", worst_qp, 1e-10),
                    row(c, "kubo.canonical", "[q(t),p(t)] = i hbar", worst_equal, 1e-10)};
    });
    return tasks;
}

// ---------------------------------------------------------------- wick

std::vector<Task> wick_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        Rng rng = task_rng(c, 301);
        std::uniform_real_distribution<double> time(-5.0, 5.0);
        const auto vac = fock::make_state(fock::StateSpec::vacuum(), 20);
        const cd ihbar = I * c.params.hbar;
        double t_plus = 0.0;
        double plain = 0.0;
        double t_minus = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const double t = time(rng);
            const double tp = time(rng);
            using fock::Branch;
            auto avg = [&](fock::Ordering o, Branch b) {
                fock::OrderedProductSpec spec{{{fock::Observable::q, t, b}, {fock::Observable::q, tp, b}}, o, std::nullopt};
                return fock::ordered_average(vac, spec, c.params);
            };
            t_plus = std::max(t_plus, std::abs(avg(fock::Ordering::double_time, Branch::plus) -
                                               ihbar * osc_feynman(c.params, t - tp)));
            plain = std::max(plain, std::abs(avg(fock::Ordering::plain, Branch::none) -
                                             ihbar * osc_contraction(c.params, t - tp)));
            t_minus = std::max(t_minus, std::abs(avg(fock::Ordering::double_time, Branch::minus) +
                                                 ihbar * std::conj(osc_feynman(c.params, t - tp))));
        }
        return Rows{row(c, "wick.two_point.time_ordered", "<T+ q(t) q(t')> = i hbar D_F(t-t')", t_plus, 1e-12),
                    row(c, "wick.two_point.plain", "<q(t) q(t')> = i hbar D(t-t')", plain, 1e-12),
                    row(c, "wick.two_point.anti_time_ordered", "<T- q(t) q(t')> = -i hbar D_F*(t-t')", t_minus, 1e-12)};
    });
    tasks.push_back([c] {
        Rows rows;
        double pairing_error = 0.0;
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto all = wick::enumerate_pairings(2 * k);
            pairing_error = std::max(pairing_error, std::abs(static_cast<double>(wick::count_perfect(all)) -
                                                             static_cast<double>(wick::double_factorial_pairings(2 * k))));
        }
        rows.push_back(row(c, "wick.perfect_pairings", "#perfect pairings of 2k factors = (2k-1)!!", pairing_error, 0.0));

        double count_error = 0.0;
        for (std::size_t n = 1; n <= 3; ++n) {
            double factorial = 1.0;
            for (std::size_t i = 2; i <= n; ++i) factorial *= static_cast<double>(i);
            for (const auto& [pattern, count] : wick::delta_power_counts(6, n)) {
                count_error = std::max(count_error, std::abs(static_cast<double>(count) - factorial));
            }
        }
        rows.push_back(row(c, "wick.delta_power_counts", "Delta^n yields each n-pair pattern n! times", count_error, 0.0));

        const std::vector<fock::Factor> mixed{{fock::Observable::q, 0.0, fock::Branch::plus},
                                              {fock::Observable::q, 1.3, fock::Branch::plus},
                                              {fock::Observable::q, 0.7, fock::Branch::minus},
                                              {fock::Observable::q, 2.1, fock::Branch::minus}};
        double coefficient_error = 0.0;
        for (const auto& term : wick::hori_expand(mixed)) {
            coefficient_error = std::max(coefficient_error, std::abs(static_cast<double>(term.coefficient) - 1.0));
        }
        rows.push_back(row(c, "wick.unit_coefficients", "every contraction pattern enters with coefficient 1",
                           coefficient_error, 0.0));
        return rows;
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 303);
        std::uniform_real_distribution<double> time(-4.0, 4.0);
        const auto vac = fock::make_state(fock::StateSpec::vacuum(), c.dim);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> t(4);
            for (auto& x : t) x = time(rng);
            fock::OrderedProductSpec spec{fock::q_factors(t, fock::Branch::plus), fock::Ordering::double_time, std::nullopt};
            const cd lhs = fock::ordered_average(vac, spec, c.params);
            auto f = [&](int a, int b) { return osc_feynman(c.params, t[a] - t[b]); };
            const cd ihbar = I * c.params.hbar;
            const cd rhs = ihbar * ihbar * (f(0, 1) * f(2, 3) + f(0, 2) * f(1, 3) + f(0, 3) * f(1, 2));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return Rows{row(c, "wick.vacuum_four_point",
                        "<T+ q1 q2 q3 q4> = (i hbar)^2 [D_F12 D_F34 + D_F13 D_F24 + D_F14 D_F23]", worst, 1e-11)};
    });
    tasks.push_back([c] {
        const std::vector<fock::StateSpec> states{fock::StateSpec::vacuum(), fock::StateSpec::coherent({1.0, 0.0}),
                                                  fock::StateSpec::number(2)};
        std::vector<fock::FockState> rho;
        for (const auto& s : states) rho.push_back(fock::make_state(s, c.dim));
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng = task_rng(c, 400 + seed);
            std::uniform_real_distribution<double> time(-4.0, 4.0);
            std::uniform_int_distribution<int> coin(0, 1);
            std::uniform_int_distribution<std::size_t> count(2, 4);
            std::vector<fock::Factor> factors(count(rng));
            for (auto& f : factors) f = {fock::Observable::q, time(rng), coin(rng) ? fock::Branch::plus : fock::Branch::minus};
            for (const auto& r : rho) worst = std::max(worst, wick::verify_wick(r, factors, c.params).residual);
        }
        return Rows{row(c, "wick.randomized", "<T- ... T+ ...> = sum over contractions x <:rest:>", worst, 1e-9)};
    });
    return tasks;
}

// ---------------------------------------------------------------- functional

std::vector<Task> functional_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        Rng rng = task_rng(c, 501);
        const TimeGrid g = make_grid(64, suite_grid(c).dt * static_cast<double>(c.n) / 64.0);
        const double hbar = c.params.hbar;
        const auto k = osc_kernels(c.params, g, GridMode::loose);
        double round_trip = 0.0;
        double theorem = 0.0;
        double zero_nyquist = 0.0;
        double reality = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const ProbeSet ps{random_signal(rng, g, true), random_signal(rng, g, true)};
            zero_nyquist = std::max(zero_nyquist, probe_zero_nyquist_fraction(ps));
            const ProbeSet back = inverse_substitution(response_substitution(ps, hbar), hbar);
            round_trip = std::max({round_trip, max_abs_diff(back.eta_plus, ps.eta_plus),
                                   max_abs_diff(back.eta_minus, ps.eta_minus)});
            const cd quad = phi_vac_quadratic(ps, k.feynman, k.contraction, hbar).log;
            const cd resp = phi_vac_response(ps, k.retarded, hbar).log;
            theorem = std::max(theorem, relative(quad, resp));

            const ProbeSet mirrored{ps.eta_plus, SampledSignal(g, ps.eta_plus.values.conjugate())};
            const cd log = phi_vac_quadratic(mirrored, k.feynman, k.contraction, hbar).log;
            reality = std::max(reality, std::abs(log.imag()) / std::max(1.0, std::abs(log)));
        }
        return Rows{row(c, "functional.substitution_round_trip", "(eta, sigma) -> (eta_+, eta_-) -> (eta, sigma)",
                        round_trip, 1e-12),
                    row(c, "functional.probes_zero_nyquist_clean", "zero/Nyquist energy fraction of probes",
                        zero_nyquist, zero_nyquist_flag_level),
                    row(c, "functional.response_equals_quadratic",
                        "i hbar [-1/2 eta+ D_F eta+ + 1/2 eta- D_F* eta- + eta- D eta+] = eta D_R sigma", theorem, 1e-10),
                    row(c, "functional.real_for_conjugate_probes", "eta_- = eta_+*  =>  Phi real", reality, 1e-10)};
    });
    tasks.push_back([c] {
        const std::vector<fock::Spike> plus{{0.3, {0.4, 0.0}}, {1.1, {-0.25, 0.0}}};
        const std::vector<fock::Spike> minus{{0.8, {0.35, 0.0}}};
        const auto vac = fock::make_state(fock::StateSpec::vacuum(), c.dim);
        const auto coh = fock::make_state(fock::StateSpec::coherent({0.5, 0.0}), c.dim);
        const std::vector<fock::Spike> plus_c{{0.3, {0.2, 0.1}}, {1.1, {-0.15, 0.05}}};
        const std::vector<fock::Spike> minus_c{{0.8, {0.1, -0.2}}};
        return Rows{row(c, "functional.reality_taylor.vacuum", "Phi*(eta-, eta+) = Phi(eta+*, eta-*)",
                        fock::reality_check(vac, plus, minus, c.params, 4).residual, 1e-12),
                    row(c, "functional.reality_taylor.coherent", "Phi*(eta-, eta+) = Phi(eta+*, eta-*)",
                        fock::reality_check(coh, plus_c, minus_c, c.params, 4).residual, 1e-10)};
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 503);
        const TimeGrid g = suite_grid(c);
        const auto k = osc_kernels(c.params, g);
        auto scaled_probe = [&] { return SampledSignal(g, 0.05 * random_signal(rng, g, true).values); };
        const ProbeSet ps{scaled_probe(), scaled_probe()};
        CurrentProfile step{CurrentShape::step, 0.7, 0.0, c.params.omega0};
        const auto full = phi_full(ps, step.sample(g), fock::StateSpec::coherent({0.5, 0.2}), k, c.params);

        // Small spike probe so the order-6 Taylor remainder is negligible.
        SampledSignal eta = spike(g, g.time(g.n / 2 + 3), cd{0.03, 0.01});
        eta[g.n / 2 + 9] += cd{-0.02, 0.0} / g.dt;
        const auto coherent = fock::StateSpec::coherent({0.8, -0.3});
        const double phi_in_coherent =
            relative(phi_in(coherent, eta, c.params), phi_in_numeric(coherent, eta, c.params, 6, c.dim));

        // <1| :exp(c+ a^dag + c a): |1> = 1 + c+ c exactly.
        const double scale = c.params.q0() / std::sqrt(2.0);
        cd c_create{0.0, 0.0};
        cd c_annihilate{0.0, 0.0};
        for (std::size_t i = 0; i < g.n; ++i) {
            const cd phase = std::exp(-I * (c.params.omega0 * g.time(i)));
            c_annihilate += g.dt * eta[i] * scale * phase;
            c_create += g.dt * eta[i] * scale * std::conj(phase);
        }
        const double phi_in_fock =
            std::abs(phi_in(fock::StateSpec::number(1), eta, c.params, 4) - (1.0 + c_create * c_annihilate));
        return Rows{row(c, "functional.full_two_forms", "Phi_vac Phi_in Phi_cl(eta; j) = Phi_cl(eta; j + sigma) Phi_in",
                        full.residual, 1e-10),
                    row(c, "functional.phi_in_coherent_vs_fock", "<:exp(eta q):> = exp(eta q_in) for coherent states",
                        phi_in_coherent, 1e-8),
                    row(c, "functional.phi_in_number_state", "<1|:exp(eta q):|1> = 1 + c+ c", phi_in_fock, 1e-8)};
    });
    tasks.push_back([c] {
        const TimeGrid g = suite_grid(c);
        const auto k = osc_kernels(c.params, g);
        const SampledSignal zero(g);
        const std::vector<double> times{g.time(g.n / 2), g.time(g.n / 2 + 5), g.time(g.n / 2 + 11)};
        std::vector<ProbeSlot> slots;
        for (double t : times) {
            slots.push_back({t, fock::Branch::minus});
            slots.push_back({t, fock::Branch::plus});
        }
        const auto vac_state = fock::StateSpec::vacuum();
        const auto rho = fock::make_state(vac_state, c.dim);
        const auto form = moment_form(MomentKind::double_time, slots, zero, vac_state, k, c.params);
        double worst = 0.0;
        const std::vector<std::vector<std::size_t>> picks{{1, 3}, {0, 2}, {0, 3}, {1, 1}, {1, 3, 5, 5}, {0, 1, 2, 5}};
        for (const auto& pick : picks) {
            fock::OrderedProductSpec spec{{}, fock::Ordering::double_time, std::nullopt};
            for (auto s : pick) spec.factors.push_back({fock::Observable::q, slots[s].time, slots[s].branch});
            worst = std::max(worst, std::abs(fock::ordered_average(rho, spec, c.params) - moment_from_form(form, slots, pick)));
        }
        return Rows{row(c, "functional.vacuum_moments", "moments of Phi_vac = <T- ... T+ ...> in vacuum", worst, 1e-10)};
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 505);
        const TimeGrid g = suite_grid(c);
        const double hbar = c.params.hbar;
        const ProbeSet ps{random_signal(rng, g, true), random_signal(rng, g, true)};
        const CurrentPair normal{SampledSignal(g, hbar * ps.eta_plus.values), SampledSignal(g, hbar * ps.eta_minus.values),
                                 OrderingVariant::normal};
        const auto image = schwinger_map(normal, hbar);
        const auto rv = response_substitution(ps, hbar);
        const double normal_residual = std::max(max_abs_diff(image.kubo, rv.sigma), max_abs_diff(image.eta, rv.eta));

        const SampledSignal jp = random_signal(rng, g, false);
        const CurrentPair weyl{jp, SampledSignal(g, jp.values.conjugate()), OrderingVariant::weyl};
        const auto wimage = schwinger_map(weyl, hbar);
        const double weyl_real = std::max(max_abs(wimage.kubo.values.imag().cast<cd>()), max_abs(wimage.eta.values.imag().cast<cd>()));
        return Rows{row(c, "functional.schwinger_normal", "j+- = hbar eta+-  =>  j = sigma, hbar eta = -i (j+ - j-)",
                        normal_residual, 1e-12),
                    row(c, "functional.schwinger_weyl_real", "j- = j+*  =>  eta, j_W real", weyl_real, 1e-14)};
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 506);
        const TimeGrid g = suite_grid(c);
        const auto k = osc_kernels(c.params, g);
        double kernel = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            kernel = std::max(kernel, weyl_kernel_identity(random_signal(rng, g, true), k.contraction, k.retarded).residual);
        }
        Rows rows{row(c, "functional.weyl_kernel_rearrangement",
                      "eta D_R (eta(+) - eta(-)) = eta [D_R(+)(t) - D_R(-)(-t)] eta = eta D eta", kernel, 1e-10)};
        const std::vector<std::pair<std::string, fock::StateSpec>> states{
            {"vacuum", fock::StateSpec::vacuum()}, {"coherent", fock::StateSpec::coherent({1.0, 0.0})}};
        std::uniform_real_distribution<double> time(-3.0, 3.0);
        for (const auto& [name, state] : states) {
            double two = 0.0;
            double four = 0.0;
            for (int trial = 0; trial < 5; ++trial) {
                const double t2[] = {time(rng), time(rng)};
                two = std::max(two, weyl_moment_check(state, t2, c.params, c.dim).residual);
                const double t4[] = {time(rng), time(rng), time(rng), time(rng)};
                four = std::max(four, weyl_moment_check(state, t4, c.params, c.dim).residual);
            }
            const double t0[] = {0.0, 0.0};
            two = std::max(two, weyl_moment_check(state, t0, c.params, c.dim).residual);
            rows.push_back(row(c, "functional.weyl_two_point." + name,
                               "<W q(t) q(t')> = <:q q:> + (i hbar/2)[D(t-t') + D(t'-t)]", two, 1e-10));
            rows.push_back(row(c, "functional.weyl_four_point." + name,
                               "<W q q q q> = Gaussian moment of <:exp(eta q):> exp((i hbar/2) eta D eta)", four, 1e-10,
                               false));
        }
        return rows;
    });
    return tasks;
}

// ---------------------------------------------------------------- driven

TimeGrid drive_grid(const SuiteConfig& c) { return make_grid(c.drive_n, c.drive_dt); }

std::vector<Task> driven_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    const std::vector<std::pair<std::string, CurrentProfile>> currents{
        {"step", {CurrentShape::step, 1.0, 0.0, c.params.omega0}},
        {"sine", {CurrentShape::sine, 1.0, 0.0, c.params.omega0}}};
    const std::vector<std::pair<std::string, fock::StateSpec>> states{
        {"vacuum", fock::StateSpec::vacuum()}, {"coherent", fock::StateSpec::coherent({0.5, 0.0})}};

    for (const auto& [cname, profile] : currents) {
        for (const auto& [sname, state] : states) {
            tasks.push_back([c, cname, profile, sname, state] {
                const TimeGrid g = drive_grid(c);
                const auto sc = make_scenario(c.params, g, profile, state);
                const auto w = causal_window(sc);
                const std::size_t span = w.last - w.first;
                const std::vector<double> times{g.time(w.first + span / 7), g.time(w.first + span / 3),
                                                g.time(w.first + (4 * span) / 5)};
                const auto report = verify_driven_factorization(sc, times, 2, c.dim);
                double double_time = 0.0;
                double normal = 0.0;
                double weyl = 0.0;
                for (const auto& o : report.orders) {
                    double_time = std::max(double_time, o.double_time);
                    normal = std::max(normal, o.normal);
                    weyl = std::max(weyl, o.weyl);
                }
                const std::string id = "driven.factorization." + cname + "." + sname;
                return Rows{row(c, id + ".double_time", "<T- ... T+ ...>_j = moments of Phi(eta-, eta+) Phi_cl(eta; j)",
                                double_time, 1e-9),
                            row(c, id + ".normal", "<:q_j ... q_j:> = moments of Phi_in(eta) Phi_cl(eta; j)", normal, 1e-9),
                            row(c, id + ".weyl", "<W q_j ... q_j> = moments of Phi_W(eta) Phi_cl(eta; j)", weyl, 1e-9)};
            });
        }
    }
    for (const auto& [cname, profile] : currents) {
        tasks.push_back([c, cname, profile] {
            const TimeGrid g = drive_grid(c);
            const auto sc = make_scenario(c.params, g, profile);
            const auto kernels = osc_kernels(c.params, g, GridMode::loose);
            const SampledSignal q = classical_displacement(sc, kernels.retarded);
            const auto ode = ode_oscillator(sc, 1e-6);
            const auto w = causal_window(sc);
            double vs_ode = 0.0;
            double vs_analytic = 0.0;
            for (std::size_t k = w.first; k < w.last; ++k) {
                vs_ode = std::max(vs_ode, std::abs(q[k] - ode.q[k]));
                vs_analytic = std::max(vs_analytic, std::abs(ode.q[k] - analytic_displacement(sc, g.time(k))));
            }
            const double analytic_tol = cname == "step" ? 1e-8 : 1e-6;
            return Rows{row(c, "driven.ode_vs_convolution." + cname, "q_j = D_R * j solves q'' + w0^2 q = -j/m", vs_ode, 1e-6),
                        row(c, "driven.ode_vs_analytic." + cname, "RK4 solution = closed-form response from rest",
                            vs_analytic, analytic_tol)};
        });
    }
    tasks.push_back([c] {
        const TimeGrid g = drive_grid(c);
        const auto kernels = osc_kernels(c.params, g, GridMode::loose);
        const CurrentProfile step{CurrentShape::step, 1.0, 0.0, c.params.omega0};
        const auto sc = make_scenario(c.params, g, step);
        const SampledSignal q = classical_displacement(sc, kernels.retarded);
        const auto w = causal_window(sc);
        const double m = c.params.mass;
        const double w0 = c.params.omega0;

        // Trapezoid rule for -(1/(m w0)) * integral_0^t sin(w0 s) ds on the grid nodes.
        double trapezoid = 0.0;
        double reality = 0.0;
        for (std::size_t k = w.first; k < w.last; ++k) {
            const std::size_t steps = k - w.first;
            double sum = 0.0;
            for (std::size_t i = 1; i < steps; ++i) sum += std::sin(w0 * static_cast<double>(i) * g.dt);
            if (steps > 0) sum += 0.5 * std::sin(w0 * static_cast<double>(steps) * g.dt);
            trapezoid = std::max(trapezoid, std::abs(q[k] - cd{-g.dt * sum / (m * w0), 0.0}));
            reality = std::max(reality, std::abs(q[k].imag()));
        }

        // Perturb j after a cut inside the window; q_j before the cut must not move.
        const std::size_t cut = w.first + (w.last - w.first) / 2;
        DriveScenario perturbed = sc;
        for (std::size_t k = cut + 1; k < g.n; ++k) perturbed.current[k] += 0.3 * std::cos(0.7 * static_cast<double>(k));
        const SampledSignal qp = classical_displacement(perturbed, kernels.retarded);
        double causality = 0.0;
        for (std::size_t k = w.first; k <= cut; ++k) causality = std::max(causality, std::abs(qp[k] - q[k]));

        CurrentProfile sine{CurrentShape::sine, 1.0, 0.0, 0.6 * w0};
        const auto sc2 = make_scenario(c.params, g, sine);
        DriveScenario combo = sc;
        combo.current = cd{2.0, 0.0} * sc.current - cd{0.5, 0.0} * sc2.current;
        const SampledSignal lin = cd{2.0, 0.0} * q - cd{0.5, 0.0} * classical_displacement(sc2, kernels.retarded);
        const double linearity = max_abs_diff(classical_displacement(combo, kernels.retarded), lin);
        return Rows{row(c, "driven.convolution_vs_trapezoid", "q_j(t) = dt sum D_R(t-t') j(t') for a step", trapezoid, 1e-10),
                    row(c, "driven.displacement_real", "Im q_j = 0", reality, 1e-12),
                    row(c, "driven.causality", "q_j(t) independent of j(t' > t)", causality, 1e-14),
                    row(c, "driven.linearity", "q_{a j1 + b j2} = a q_j1 + b q_j2", linearity, 1e-13)};
    });
    return tasks;
}

// ---------------------------------------------------------------- charged

ChargedModeSet charged_modes(const TimeGrid& g) {
    const double f = fundamental(g);
    return ChargedModeSet{{{3 * f, 0.7}, {5 * f, 0.4}, {8 * f, 1.1}}, {{4 * f, 0.9}, {7 * f, 0.3}}};
}

std::vector<Task> charged_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        const TimeGrid g = suite_grid(c);
        const auto k = charged_field_kernels(charged_modes(g), g);
        const auto rec = charged_from_retarded(k.retarded);
        Rows rows;
        rows.push_back(row(c, "charged.particle_from_retarded", "D^A = D_R(+) - D_R^dagger(+)",
                           max_abs_diff(rec.particle, k.particle), 1e-10));
        rows.push_back(row(c, "charged.antiparticle_from_retarded", "D^B = D_R^dagger(-) - D_R(-)",
                           max_abs_diff(rec.antiparticle, k.antiparticle), 1e-10));
        rows.push_back(row(c, "charged.feynman_from_retarded", "D_F = D_R(+) + D_R^dagger(-)",
                           max_abs_diff(rec.feynman, k.feynman), 1e-10));
        rows.push_back(row(c, "charged.feynman_adjoint_from_retarded", "D_F^dagger = D_R^dagger(+) + D_R(-)",
                           max_abs_diff(rec.feynman_adjoint, k.feynman_adjoint), 1e-10));
        rows.push_back(row(c, "charged.retarded_two_definitions", "D_F - D^B = D_F^dagger - D^A^dagger",
                           max_abs_diff(k.retarded, charged_retarded_via_adjoint(k)), 1e-12));
        rows.push_back(row(c, "charged.particle_anti_hermitian", "D^A^dagger = -D^A",
                           max_abs_diff(kernel_adjoint(k.particle), cd{-1.0, 0.0} * k.particle), 1e-14));
        rows.push_back(row(c, "charged.antiparticle_anti_hermitian", "D^B^dagger = -D^B",
                           max_abs_diff(kernel_adjoint(k.antiparticle), cd{-1.0, 0.0} * k.antiparticle), 1e-14));
        rows.push_back(row(c, "charged.particle_frequency_positive", "D^A(+) = D^A",
                           max_abs_diff(frequency_plus(k.particle), k.particle), 1e-12));
        rows.push_back(row(c, "charged.antiparticle_frequency_negative", "D^B(-) = D^B",
                           max_abs_diff(frequency_minus(k.antiparticle), k.antiparticle), 1e-12));
        return rows;
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 702);
        const TimeGrid g = suite_grid(c);
        const auto k = charged_field_kernels(charged_modes(g), g);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const ChargedProbeSet ps{random_signal(rng, g, true), random_signal(rng, g, true), random_signal(rng, g, true),
                                     random_signal(rng, g, true)};
            worst = std::max(worst, charged_substitution_check(ps, k, c.params.hbar).residual);
        }
        return Rows{row(c, "charged.doubled_substitution",
                        "i hbar [-eb+ D_F e+ + eb- D_F^dagger e- + eb- D^A e+ + eb+ D^B e-] = eb D_R s + e D_R* sb",
                        worst, 1e-10)};
    });
    return tasks;
}

// ---------------------------------------------------------------- field

ModeSet field_modes(const TimeGrid& g, Rng& rng) {
    const double f = fundamental(g);
    ModeSet ms{2, 2, {}};
    std::normal_distribution<double> normal(0.0, 0.5);
    for (int bin : {5, 8, 11}) {
        FieldMode m{bin * f, Eigen::MatrixXcd(2, 2)};
        for (Eigen::Index a = 0; a < 2; ++a) {
            for (Eigen::Index b = 0; b < 2; ++b) {
                const double re = normal(rng);
                const double im = normal(rng);
                m.amplitude(a, b) = cd{re, im};
            }
        }
        ms.modes.push_back(std::move(m));
    }
    return ms;
}

std::vector<Task> field_tasks(const SuiteConfig& c) {
    std::vector<Task> tasks;
    tasks.push_back([c] {
        Rng rng = task_rng(c, 801);
        const TimeGrid g = suite_grid(c);
        const auto k = neutral_field_kernels(field_modes(g, rng), g);
        auto worst_over = [&](const KernelFamily& a, const KernelFamily& b) {
            double worst = 0.0;
            for (std::size_t s = 0; s < a.sites(); ++s) {
                for (std::size_t sp = 0; sp < a.sites(); ++sp) worst = std::max(worst, max_abs_diff(a.between(s, sp), b.between(s, sp)));
            }
            return worst;
        };
        double swap = 0.0;
        for (std::size_t s = 0; s < k.contraction.sites(); ++s) {
            for (std::size_t sp = 0; sp < k.contraction.sites(); ++sp) {
                swap = std::max(swap, max_abs_diff(time_reversed(k.contraction.between(sp, s)),
                                                   cd{-1.0, 0.0} * conjugated(k.contraction.between(s, sp))));
            }
        }
        return Rows{
            row(c, "field.retarded_from_contractions", "D_R,ss'(t) = D_F,ss'(t) - D_s's(-t)",
                worst_over(field_retarded_from_contractions(k.feynman, k.contraction), k.retarded), 1e-10),
            row(c, "field.contraction_from_retarded", "D_ss'(t) = D_R,ss'(+)(t) - D_R,s's(-)(-t)",
                worst_over(field_contraction_from_retarded(k.retarded), k.contraction), 1e-10),
            row(c, "field.feynman_from_retarded", "D_F,ss'(t) = D_R,ss'(+)(t) + D_R,s's(+)(-t)",
                worst_over(field_feynman_from_retarded(k.retarded), k.feynman), 1e-10),
            row(c, "field.swap_symmetry", "D_s's(-t) = -D_ss'(t)*", swap, 1e-14)};
    });
    tasks.push_back([c] {
        Rng rng = task_rng(c, 802);
        const TimeGrid g = suite_grid(c);
        const auto k = neutral_field_kernels(field_modes(g, rng), g);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            FieldProbeSet ps;
            for (std::size_t s = 0; s < k.retarded.sites(); ++s) {
                ps.eta_plus.push_back(random_signal(rng, g, true));
                ps.eta_minus.push_back(random_signal(rng, g, true));
            }
            worst = std::max(worst, relative(field_phi_vac_quadratic(ps, k, c.params.hbar).log,
                                             field_phi_vac_response(ps, k.retarded, c.params.hbar).log));
        }

        // One mode with amplitude 1/sqrt(2 m w0) on a single site is the oscillator.
        const auto& p = c.params;
        ModeSet single{1, 1, {FieldMode{p.omega0, Eigen::MatrixXcd::Constant(1, 1, 1.0 / std::sqrt(2.0 * p.mass * p.omega0))}}};
        const auto one = neutral_field_kernels(single, g);
        const auto osc = osc_kernels(p, g);
        const double reduce = std::max({max_abs_diff(one.contraction.between(0, 0), osc.contraction),
                                        max_abs_diff(one.feynman.between(0, 0), osc.feynman),
                                        max_abs_diff(one.retarded.between(0, 0), osc.retarded)});
        return Rows{row(c, "field.response_equals_quadratic", "sum_ss' quadratic form = sum_ss' eta_s D_R,ss' sigma_s'",
                        worst, 1e-10),
                    row(c, "field.single_mode_is_oscillator", "one mode, Q = 1/sqrt(2 m w0): field kernels = oscillator kernels",
                        reduce, 1e-14)};
    });
    return tasks;
}

std::vector<Task> tasks_for(const std::string& name, const SuiteConfig& c) {
    if (name == "spectral") return spectral_tasks(c);
    if (name == "kernels") return kernel_tasks(c);
    if (name == "wick") return wick_tasks(c);
    if (name == "functional") return functional_tasks(c);
    if (name == "driven") return driven_tasks(c);
    if (name == "charged") return charged_tasks(c);
    if (name == "field") return field_tasks(c);
    if (name == "all") {
        std::vector<Task> all;
        for (const auto& n : suite_names()) {
            if (n == "all") continue;
            auto part = tasks_for(n, c);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

template <class T>
T read_field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            throw std::invalid_argument("unknown config key '" + key + "' in " + where);
        }
    }
}

}  // namespace

SuiteConfig default_config() { return SuiteConfig{}; }

SuiteConfig config_from_json(const json& j) {
    reject_unknown(j, {"params", "grid", "dim", "seed", "drive", "tolerances"}, "config");
    SuiteConfig c;
    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown(p, {"mass", "omega0", "hbar"}, "params");
        c.params = make_params(read_field(p, "mass", c.params.mass), read_field(p, "omega0", c.params.omega0),
                               read_field(p, "hbar", c.params.hbar));
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"n", "bin"}, "grid");
        c.n = read_field(g, "n", c.n);
        c.bin = read_field(g, "bin", c.bin);
    }
    c.dim = read_field(j, "dim", c.dim);
    c.seed = read_field(j, "seed", c.seed);
    if (j.contains("drive")) {
        const auto& d = j.at("drive");
        reject_unknown(d, {"n", "dt"}, "drive");
        c.drive_n = read_field(d, "n", c.drive_n);
        c.drive_dt = read_field(d, "dt", c.drive_dt);
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw std::invalid_argument("tolerances must be an object of check id -> value");
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number() || !(value.get<double>() >= 0.0)) {
                throw std::invalid_argument("tolerance for '" + key + "' must be a non-negative number");
            }
            c.tolerances[key] = value.get<double>();
        }
    }
    commensurate_grid(c.n, c.params.omega0, c.bin);
    make_grid(c.drive_n, c.drive_dt);
    if (c.dim < 10) throw std::invalid_argument("dim must be at least 10");
    return c;
}

json config_to_json(const SuiteConfig& c) {
    json tol = json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    return json{{"params", {{"mass", c.params.mass}, {"omega0", c.params.omega0}, {"hbar", c.params.hbar}}},
                {"grid", {{"n", c.n}, {"bin", c.bin}}},
                {"dim", c.dim},
                {"seed", c.seed},
                {"drive", {{"n", c.drive_n}, {"dt", c.drive_dt}}},
                {"tolerances", tol}};
}

bool SuiteReport::all_gating_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass || !r.gating; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"spectral", "kernels", "wick", "functional", "driven", "charged", "field", "all"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const auto tasks = tasks_for(name, config);
    std::vector<std::future<Rows>> running;
    running.reserve(tasks.size());
    for (const auto& t : tasks) running.push_back(std::async(std::launch::async, t));

    SuiteReport report;
    report.suite = name;
    report.config = config_to_json(config);
    for (auto& f : running) {
        for (auto& r : f.get()) report.rows.push_back(std::move(r));
    }
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

json report_to_json(const SuiteReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"check_id", row.check_id}, {"paper_eq", row.paper_eq}, {"residual", row.residual},
                        {"tolerance", row.tolerance}, {"pass", row.pass}, {"gating", row.gating}});
    }
    return json{{"schema_version", r.schema_version}, {"suite", r.suite},       {"config", r.config},
                {"wall_time_s", r.wall_time_s},       {"rows", std::move(rows)}, {"all_gating_pass", r.all_gating_pass()}};
}

SuiteReport report_from_json(const json& j) {
    SuiteReport r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != report_schema_version) {
            throw std::invalid_argument("unsupported report schema version " + std::to_string(r.schema_version));
        }
        r.suite = j.at("suite").get<std::string>();
        r.config = j.at("config");
        r.wall_time_s = j.at("wall_time_s").get<double>();
        for (const auto& row : j.at("rows")) {
            // Residuals that overflowed to NaN/inf are stored as null.
            const double residual = row.at("residual").is_null() ? std::nan("") : row.at("residual").get<double>();
            r.rows.push_back(CheckRow{row.at("check_id").get<std::string>(), row.at("paper_eq").get<std::string>(),
                                      residual, row.at("tolerance").get<double>(), row.at("pass").get<bool>(),
                                      row.at("gating").get<bool>()});
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
    return r;
}

std::string format_table(const SuiteReport& r) {
    std::ostringstream os;
    std::size_t width = 8;
    for (const auto& row : r.rows) width = std::max(width, row.check_id.size());
    os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(12) << "residual" << "  "
       << std::setw(9) << "tolerance" << "  status\n";
    for (const auto& row : r.rows) {
        os << std::left << std::setw(static_cast<int>(width)) << row.check_id << "  " << std::scientific
           << std::setprecision(3) << std::setw(12) << row.residual << "  " << std::setw(9) << row.tolerance << "  "
           << (row.pass ? "pass" : "FAIL") << (row.gating ? "" : " (non-gating)") << '\n';
        os << std::defaultfloat;
    }
    return os.str();
}

}  // namespace oscresp
