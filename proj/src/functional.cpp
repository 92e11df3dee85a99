// functional.cpp - characteristic functionals, the response substitution and Gaussian moments

#include "oscresp/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oscresp/wick.hpp"

namespace oscresp {

namespace {

constexpr cd I{0.0, 1.0};

double scale_of(cd reference) { return std::max(1.0, std::abs(reference)); }

SampledSignal scaled(const SampledSignal& s, cd factor) { return SampledSignal(s.grid, factor * s.values); }

void add_spike(SampledSignal& s, double t, cd weight) { s[s.grid.index_of(t)] += weight / s.grid.dt; }

void require_analytic_state(const fock::StateSpec& state, const char* where) {
    if (!has_analytic_phi_in(state)) {
        throw std::invalid_argument(std::string(where) + ": only vacuum and coherent states have a Gaussian functional");
    }
}

cd log_phi_in_analytic(const fock::StateSpec& state, const SampledSignal& eta, const OscillatorParams& p) {
    if (state.kind == fock::StateKind::vacuum) return {0.0, 0.0};
    return grid_dot(eta, coherent_mean(p, state.alpha, eta.grid));
}

cd q_in_at(const fock::StateSpec& state, const OscillatorParams& p, double t) {
    if (state.kind == fock::StateKind::vacuum) return {0.0, 0.0};
    const cd phase = std::exp(-I * (p.omega0 * t));
    return p.q0() / std::sqrt(2.0) * (state.alpha * phase + std::conj(state.alpha) * std::conj(phase));
}

}  // namespace

ProbeSet make_probes(SampledSignal eta_plus, SampledSignal eta_minus) {
    require_same_grid(eta_plus.grid, eta_minus.grid, "probe set");
    return ProbeSet{std::move(eta_plus), std::move(eta_minus)};
}

ResponseVariables response_substitution(const ProbeSet& ps, double hbar) {
    require_same_grid(ps.eta_plus.grid, ps.eta_minus.grid, "response_substitution");
    SampledSignal eta = -I * (ps.eta_plus - ps.eta_minus);
    SampledSignal sigma = cd{hbar, 0.0} * (frequency_plus(ps.eta_plus) + frequency_minus(ps.eta_minus));
    return ResponseVariables{std::move(eta), std::move(sigma)};
}

ProbeSet inverse_substitution(const ResponseVariables& rv, double hbar) {
    require_same_grid(rv.eta.grid, rv.sigma.grid, "inverse_substitution");
    const auto parts = frequency_split(rv.eta);
    const SampledSignal source = scaled(rv.sigma, 1.0 / hbar);
    return ProbeSet{I * parts.minus + source, -I * parts.plus + source};
}

double probe_zero_nyquist_fraction(const ProbeSet& ps) {
    return std::max(zero_nyquist_fraction(ps.eta_plus.values), zero_nyquist_fraction(ps.eta_minus.values));
}

FunctionalValue from_log(cd log) { return FunctionalValue{log, std::exp(log)}; }

cd grid_dot(const SampledSignal& a, const SampledSignal& b) {
    require_same_grid(a.grid, b.grid, "grid_dot");
    return a.grid.dt * a.values.cwiseProduct(b.values).sum();
}

cd bilinear(const SampledSignal& a, const Kernel& k, const SampledSignal& b) {
    return grid_dot(a, circular_convolve(k, b));
}

FunctionalValue phi_vac_quadratic(const ProbeSet& ps, const Kernel& feynman, const Kernel& contraction, double hbar) {
    const cd plus_plus = bilinear(ps.eta_plus, feynman, ps.eta_plus);
    const cd minus_minus = bilinear(ps.eta_minus, conjugated(feynman), ps.eta_minus);
    const cd cross = bilinear(ps.eta_minus, contraction, ps.eta_plus);
    return from_log(I * hbar * (-0.5 * plus_plus + 0.5 * minus_minus + cross));
}

FunctionalValue phi_vac_response(const ProbeSet& ps, const Kernel& retarded, double hbar) {
    const auto rv = response_substitution(ps, hbar);
    return from_log(bilinear(rv.eta, retarded, rv.sigma));
}

FunctionalValue phi_cl(const SampledSignal& eta, const SampledSignal& j, const Kernel& retarded) {
    return from_log(grid_dot(eta, circular_convolve(retarded, j)));
}

SampledSignal coherent_mean(const OscillatorParams& p, cd alpha, const TimeGrid& g) {
    SampledSignal out(g);
    const double scale = p.q0() / std::sqrt(2.0);
    for (std::size_t k = 0; k < g.n; ++k) {
        const cd phase = std::exp(-I * (p.omega0 * g.time(k)));
        out[k] = scale * (alpha * phase + std::conj(alpha) * std::conj(phase));
    }
    return out;
}

bool has_analytic_phi_in(const fock::StateSpec& state) {
    return state.kind == fock::StateKind::vacuum || state.kind == fock::StateKind::coherent;
}

cd phi_in(const fock::StateSpec& state, const SampledSignal& eta, const OscillatorParams& p, int order,
          std::size_t dim) {
    if (has_analytic_phi_in(state)) return std::exp(log_phi_in_analytic(state, eta, p));
    return phi_in_numeric(state, eta, p, order, dim);
}

cd phi_in_numeric(const fock::StateSpec& state, const SampledSignal& eta, const OscillatorParams& p, int order,
                  std::size_t dim) {
    if (order < 0 || order > 6) throw std::invalid_argument("Phi_in expansion order must be in [0, 6]");
    const auto rho = fock::make_state(state, dim);
    const double scale = p.q0() / std::sqrt(2.0);
    cd c_create{0.0, 0.0};
    cd c_annihilate{0.0, 0.0};
    for (std::size_t k = 0; k < eta.size(); ++k) {
        const cd phase = std::exp(-I * (p.omega0 * eta.grid.time(k)));
        c_annihilate += eta[k] * scale * phase;
        c_create += eta[k] * scale * std::conj(phase);
    }
    c_annihilate *= eta.grid.dt;
    c_create *= eta.grid.dt;
    return fock::normal_exponential_average(rho, c_create, c_annihilate, order);
}

FullFunctional phi_full(const ProbeSet& ps, const SampledSignal& j, const fock::StateSpec& state,
                        const OscillatorKernels& k, const OscillatorParams& p, int order) {
    const auto rv = response_substitution(ps, p.hbar);
    const cd initial = phi_in(state, rv.eta, p, order);
    FullFunctional out;
    out.product = phi_vac_quadratic(ps, k.feynman, k.contraction, p.hbar).value * initial *
                  phi_cl(rv.eta, j, k.retarded).value;
    out.response_form = phi_cl(rv.eta, j + rv.sigma, k.retarded).value * initial;
    out.residual = std::abs(out.product - out.response_form) / scale_of(out.product);
    return out;
}

// ---------------------------------------------------------------- Gaussian moments

cd gaussian_moment(const GaussianForm& form, std::span<const std::size_t> slots) {
    if (slots.size() > 6) throw std::invalid_argument("Gaussian moments are supported up to order 6");
    const auto size = static_cast<std::size_t>(form.linear.size());
    for (auto s : slots) {
        if (s >= size) throw std::invalid_argument("moment slot out of range");
    }
    cd total{0.0, 0.0};
    for (const auto& pairing : wick::enumerate_pairings(slots.size())) {
        cd term{1.0, 0.0};
        for (const auto& [a, b] : pairing.pairs) {
            term *= form.quadratic(static_cast<Eigen::Index>(slots[a]), static_cast<Eigen::Index>(slots[b]));
        }
        for (auto a : pairing.rest) term *= form.linear(static_cast<Eigen::Index>(slots[a]));
        total += term;
    }
    return total;
}

GaussianForm extract_gaussian_form(const std::function<cd(const Eigen::VectorXcd&)>& log_f, std::size_t slots) {
    const auto n = static_cast<Eigen::Index>(slots);
    GaussianForm form{Eigen::MatrixXcd::Zero(n, n), Eigen::VectorXcd::Zero(n)};
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
    const cd f0 = log_f(w);
    std::vector<cd> up(slots);
    for (Eigen::Index a = 0; a < n; ++a) {
        w(a) = 1.0;
        up[static_cast<std::size_t>(a)] = log_f(w);
        w(a) = -1.0;
        const cd down = log_f(w);
        w(a) = 0.0;
        form.linear(a) = 0.5 * (up[static_cast<std::size_t>(a)] - down);
        form.quadratic(a, a) = up[static_cast<std::size_t>(a)] + down - 2.0 * f0;
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            w(a) = 1.0;
            w(b) = 1.0;
            const cd both = log_f(w);
            w(a) = 0.0;
            w(b) = 0.0;
            const cd q = both - up[static_cast<std::size_t>(a)] - up[static_cast<std::size_t>(b)] + f0;
            form.quadratic(a, b) = q;
            form.quadratic(b, a) = q;
        }
    }
    return form;
}

GaussianForm moment_form(MomentKind kind, std::span<const ProbeSlot> slots, const SampledSignal& j,
                         const fock::StateSpec& state, const OscillatorKernels& k, const OscillatorParams& p) {
    require_analytic_state(state, "moment_form");
    const TimeGrid& g = j.grid;
    for (const auto& s : slots) {
        const bool branched = s.branch != fock::Branch::none;
        if (branched != (kind == MomentKind::double_time)) {
            throw std::invalid_argument("probe slot branches must be set exactly for double-time moments");
        }
    }
    const Kernel weyl_kernel = kind == MomentKind::weyl ? cd{0.0, 0.5 * p.hbar} * k.contraction : Kernel(g);

    auto log_f = [&](const Eigen::VectorXcd& w) -> cd {
        if (kind == MomentKind::double_time) {
            ProbeSet ps{SampledSignal(g), SampledSignal(g)};
            for (std::size_t s = 0; s < slots.size(); ++s) {
                auto& target = slots[s].branch == fock::Branch::plus ? ps.eta_plus : ps.eta_minus;
                add_spike(target, slots[s].time, w(static_cast<Eigen::Index>(s)));
            }
            const SampledSignal eta = -I * (ps.eta_plus - ps.eta_minus);
            return phi_vac_quadratic(ps, k.feynman, k.contraction, p.hbar).log + log_phi_in_analytic(state, eta, p) +
                   phi_cl(eta, j, k.retarded).log;
        }
        SampledSignal eta(g);
        for (std::size_t s = 0; s < slots.size(); ++s) add_spike(eta, slots[s].time, w(static_cast<Eigen::Index>(s)));
        cd log = log_phi_in_analytic(state, eta, p) + phi_cl(eta, j, k.retarded).log;
        if (kind == MomentKind::weyl) log += bilinear(eta, weyl_kernel, eta);
        return log;
    };
    return extract_gaussian_form(log_f, slots.size());
}

cd moment_from_form(const GaussianForm& form, std::span<const ProbeSlot> slots, std::span<const std::size_t> picks) {
    cd sign{1.0, 0.0};
    for (auto s : picks) {
        if (s >= slots.size()) throw std::invalid_argument("moment pick out of range");
        if (slots[s].branch == fock::Branch::minus) sign *= -I;
        if (slots[s].branch == fock::Branch::plus) sign *= I;
    }
    return sign * gaussian_moment(form, picks);
}

// ---------------------------------------------------------------- current maps

SchwingerImage schwinger_map(const CurrentPair& cp, double hbar) {
    require_same_grid(cp.j_plus.grid, cp.j_minus.grid, "schwinger_map");
    SampledSignal eta = scaled(cp.j_plus - cp.j_minus, -I / hbar);
    switch (cp.variant) {
        case OrderingVariant::normal:
            return {std::move(eta), frequency_plus(cp.j_plus) + frequency_minus(cp.j_minus)};
        case OrderingVariant::weyl:
            return {std::move(eta), scaled(cp.j_plus + cp.j_minus, 0.5)};
        case OrderingVariant::antinormal:
            return {std::move(eta), frequency_minus(cp.j_plus) + frequency_plus(cp.j_minus)};
    }
    throw std::logic_error("unhandled ordering variant");
}

// ---------------------------------------------------------------- symmetric ordering

WeylKernelCheck weyl_kernel_identity(const SampledSignal& eta, const Kernel& contraction, const Kernel& retarded) {
    const auto eta_parts = frequency_split(eta);
    const auto kernel_parts = frequency_split(retarded);
    WeylKernelCheck out;
    out.response_form = bilinear(eta, retarded, eta_parts.plus - eta_parts.minus);
    out.rearranged = bilinear(eta, kernel_parts.plus - time_reversed(kernel_parts.minus), eta);
    out.contraction_form = bilinear(eta, contraction, eta);
    const double scale = scale_of(out.contraction_form);
    out.residual = std::max(std::abs(out.response_form - out.rearranged), std::abs(out.response_form - out.contraction_form)) /
                   scale;
    return out;
}

WeylMomentCheck weyl_moment_check(const fock::StateSpec& state, std::span<const double> times,
                                  const OscillatorParams& p, std::size_t dim) {
    require_analytic_state(state, "weyl_moment_check");
    if (times.size() > 6) throw std::invalid_argument("symmetric moments are supported up to order 6");
    const auto rho = fock::make_state(state, dim);
    fock::OrderedProductSpec spec{fock::q_factors(times), fock::Ordering::weyl, std::nullopt};

    const auto m = static_cast<Eigen::Index>(times.size());
    GaussianForm form{Eigen::MatrixXcd(m, m), Eigen::VectorXcd(m)};
    const cd half_ihbar = 0.5 * I * p.hbar;
    std::vector<std::size_t> picks;
    for (Eigen::Index a = 0; a < m; ++a) {
        const double ta = times[static_cast<std::size_t>(a)];
        form.linear(a) = q_in_at(state, p, ta);
        for (Eigen::Index b = 0; b < m; ++b) {
            const double tb = times[static_cast<std::size_t>(b)];
            form.quadratic(a, b) = half_ihbar * (osc_contraction(p, ta - tb) + osc_contraction(p, tb - ta));
        }
        picks.push_back(static_cast<std::size_t>(a));
    }
    WeylMomentCheck out;
    out.oracle = fock::ordered_average(rho, spec, p);
    out.predicted = gaussian_moment(form, picks);
    out.residual = std::abs(out.oracle - out.predicted);
    return out;
}

WeylFactorCheck weyl_factor_check(const SampledSignal& eta, const Kernel& contraction, const Kernel& retarded,
                                  const fock::StateSpec& state, double t1, double t2, const OscillatorParams& p,
                                  std::size_t dim) {
    WeylFactorCheck out;
    out.kernel = weyl_kernel_identity(eta, contraction, retarded);
    const double times[] = {t1, t2};
    out.two_point = weyl_moment_check(state, times, p, dim);
    out.residual = std::max(out.kernel.residual, out.two_point.residual);
    return out;
}

// ---------------------------------------------------------------- fields

namespace {

void require_field_probes(const FieldProbeSet& ps, std::size_t sites) {
    if (ps.eta_plus.size() != sites || ps.eta_minus.size() != sites) {
        throw std::invalid_argument("field probe set needs one probe per site on each branch");
    }
}

}  // namespace

FunctionalValue field_phi_vac_quadratic(const FieldProbeSet& ps, const FieldKernels& k, double hbar) {
    const std::size_t sites = k.feynman.sites();
    require_field_probes(ps, sites);
    cd sum{0.0, 0.0};
    for (std::size_t s = 0; s < sites; ++s) {
        for (std::size_t sp = 0; sp < sites; ++sp) {
            const Kernel& df = k.feynman.between(s, sp);
            sum += -0.5 * bilinear(ps.eta_plus[s], df, ps.eta_plus[sp]);
            sum += 0.5 * bilinear(ps.eta_minus[s], conjugated(df), ps.eta_minus[sp]);
            sum += bilinear(ps.eta_minus[s], k.contraction.between(s, sp), ps.eta_plus[sp]);
        }
    }
    return from_log(I * hbar * sum);
}

FunctionalValue field_phi_vac_response(const FieldProbeSet& ps, const KernelFamily& retarded, double hbar) {
    const std::size_t sites = retarded.sites();
    require_field_probes(ps, sites);
    std::vector<ResponseVariables> rv;
    for (std::size_t s = 0; s < sites; ++s) rv.push_back(response_substitution({ps.eta_plus[s], ps.eta_minus[s]}, hbar));
    cd sum{0.0, 0.0};
    for (std::size_t s = 0; s < sites; ++s) {
        for (std::size_t sp = 0; sp < sites; ++sp) sum += bilinear(rv[s].eta, retarded.between(s, sp), rv[sp].sigma);
    }
    return from_log(sum);
}

ChargedFormCheck charged_substitution_check(const ChargedProbeSet& ps, const ChargedKernels& k, double hbar) {
    cd quad{0.0, 0.0};
    quad += -1.0 * bilinear(ps.eta_bar_plus, k.feynman, ps.eta_plus);
    quad += bilinear(ps.eta_bar_minus, k.feynman_adjoint, ps.eta_minus);
    quad += bilinear(ps.eta_bar_minus, k.particle, ps.eta_plus);
    quad += bilinear(ps.eta_bar_plus, k.antiparticle, ps.eta_minus);

    const auto field = response_substitution({ps.eta_plus, ps.eta_minus}, hbar);
    const auto conjugate = response_substitution({ps.eta_bar_plus, ps.eta_bar_minus}, hbar);
    ChargedFormCheck out;
    out.quadratic = I * hbar * quad;
    out.response = bilinear(conjugate.eta, k.retarded, field.sigma) + bilinear(field.eta, conjugated(k.retarded), conjugate.sigma);
    out.residual = std::abs(out.quadratic - out.response) / scale_of(out.quadratic);
    return out;
}

}  // namespace oscresp
