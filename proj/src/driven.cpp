// driven.cpp - classical driven oscillator and the quantum/classical factorization checks

#include "oscresp/driven.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oscresp {

namespace {

std::vector<std::string> split_colon(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("malformed number '" + s + "' in " + context);
    }
    return v;
}

// Multisets of size `order` drawn from {0..slots-1}, as non-decreasing index lists.
template <class Visit>
void for_each_multiset(std::size_t slots, int order, Visit&& visit) {
    std::vector<std::size_t> picks(static_cast<std::size_t>(order), 0);
    auto recurse = [&](auto&& self, std::size_t pos, std::size_t from) -> void {
        if (pos == picks.size()) {
            visit(picks);
            return;
        }
        for (std::size_t s = from; s < slots; ++s) {
            picks[pos] = s;
            self(self, pos + 1, s);
        }
    };
    recurse(recurse, 0, 0);
}

}  // namespace

double CurrentProfile::value(double t) const {
    if (shape == CurrentShape::zero || shape == CurrentShape::spike || t < t_on) return 0.0;
    if (shape == CurrentShape::step) return amplitude;
    return amplitude * std::sin(omega * (t - t_on));
}

SampledSignal CurrentProfile::sample(const TimeGrid& g) const {
    SampledSignal out(g);
    if (shape == CurrentShape::zero) return out;
    const std::size_t onset = g.index_of(t_on);
    if (shape == CurrentShape::spike) {
        out[onset] = amplitude / g.dt;
        return out;
    }
    for (std::size_t k = onset; k < g.n; ++k) {
        const double s = static_cast<double>(k - onset) * g.dt;
        out[k] = shape == CurrentShape::step ? amplitude : amplitude * std::sin(omega * s);
    }
    if (shape == CurrentShape::step) out[onset] = 0.5 * amplitude;
    return out;
}

CurrentProfile parse_current(const std::string& text, double default_omega) {
    const auto parts = split_colon(text);
    if (parts.empty()) throw std::invalid_argument("empty current specification");
    CurrentProfile out;
    out.omega = default_omega;
    const std::string& kind = parts[0];
    if (kind == "zero") {
        if (parts.size() != 1) throw std::invalid_argument("'zero' current takes no arguments");
        return out;
    }
    if (kind == "step") out.shape = CurrentShape::step;
    else if (kind == "sine") out.shape = CurrentShape::sine;
    else if (kind == "spike") out.shape = CurrentShape::spike;
    else throw std::invalid_argument("unknown current shape '" + kind + "' (expected step, sine, spike or zero)");

    const std::size_t max_args = out.shape == CurrentShape::sine ? 3 : 2;
    if (parts.size() < 2 || parts.size() > max_args) {
        throw std::invalid_argument("current '" + text + "' has the wrong number of fields");
    }
    out.amplitude = parse_number(parts[1], "current amplitude");
    if (parts.size() == 3) out.omega = parse_number(parts[2], "current frequency");
    return out;
}

void DriveScenario::validate() const {
    require_same_grid(grid, current.grid, "drive scenario");
    if (profile.t_on < 0.0) throw std::invalid_argument("the drive must switch on at t >= 0");
    for (std::size_t k = 0; k < grid.n; ++k) {
        if (current[k].imag() != 0.0) throw std::invalid_argument("drive current must be real");
        if (grid.time(k) < -1e-9 * grid.dt && current[k] != cd{0.0, 0.0}) {
            throw std::invalid_argument("drive current must vanish before t = 0");
        }
    }
}

DriveScenario make_scenario(const OscillatorParams& p, const TimeGrid& g, const CurrentProfile& profile,
                            const fock::StateSpec& state) {
    DriveScenario sc{p, g, profile, profile.sample(g), state};
    sc.validate();
    return sc;
}

CausalWindow causal_window(const DriveScenario& sc) {
    const std::size_t first = sc.grid.index_of(sc.profile.t_on);
    return CausalWindow{first, std::min(sc.grid.n, first + sc.grid.n / 2)};
}

SampledSignal classical_displacement(const DriveScenario& sc, const Kernel& retarded) {
    sc.validate();
    return circular_convolve(retarded, sc.current);
}

OdeSolution ode_oscillator(const DriveScenario& sc, double max_error) {
    sc.validate();
    const auto& p = sc.params;
    const std::size_t first = sc.grid.index_of(sc.profile.t_on);
    const double w2 = p.omega0 * p.omega0;
    const double kick = sc.profile.shape == CurrentShape::spike ? -sc.profile.amplitude / p.mass : 0.0;

    auto integrate = [&](int substeps) {
        SampledSignal q(sc.grid);
        std::array<double, 2> y{0.0, kick};
        const double h = sc.grid.dt / substeps;
        auto rhs = [&](double t, const std::array<double, 2>& s) {
            return std::array<double, 2>{s[1], -w2 * s[0] - sc.profile.value(t) / p.mass};
        };
        for (std::size_t k = first; k < sc.grid.n; ++k) {
            q[k] = y[0];
            for (int sub = 0; sub < substeps; ++sub) {
                const double t = sc.profile.t_on + static_cast<double>(k - first) * sc.grid.dt + sub * h;
                const auto k1 = rhs(t, y);
                const auto k2 = rhs(t + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
                const auto k3 = rhs(t + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
                const auto k4 = rhs(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
                for (int c = 0; c < 2; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
            }
        }
        return q;
    };

    SampledSignal coarse = integrate(1);
    SampledSignal fine = integrate(2);
    const double estimate = max_abs_diff(coarse, fine) / 15.0;
    if (estimate > max_error) {
        throw std::runtime_error("ODE step too coarse: estimated error " + std::to_string(estimate) + " exceeds " +
                                 std::to_string(max_error));
    }
    return OdeSolution{std::move(fine), estimate};
}

double analytic_displacement(const DriveScenario& sc, double t) {
    const auto& p = sc.params;
    const auto& c = sc.profile;
    const double s = t - c.t_on;
    if (c.shape == CurrentShape::zero || s < 0.0) return 0.0;
    const double w = p.omega0;
    const double a = c.amplitude / p.mass;
    switch (c.shape) {
        case CurrentShape::step:
            return -a * (1.0 - std::cos(w * s)) / (w * w);
        case CurrentShape::spike:
            return -a * std::sin(w * s) / w;
        case CurrentShape::sine: {
            const double v = c.omega;
            if (std::abs(v - w) <= 1e-12 * w) return -a * (std::sin(w * s) - w * s * std::cos(w * s)) / (2.0 * w * w);
            return -a * (std::sin(v * s) - (v / w) * std::sin(w * s)) / (w * w - v * v);
        }
        case CurrentShape::zero:
            break;
    }
    return 0.0;
}

FactorizationReport verify_driven_factorization(const DriveScenario& sc, std::span<const double> probe_times,
                                                int max_order, std::size_t dim) {
    sc.validate();
    if (max_order < 1 || max_order > 4) throw std::invalid_argument("factorization moments are checked to order <= 4");
    if (!has_analytic_phi_in(sc.state)) {
        throw std::invalid_argument("factorization check needs a vacuum or coherent initial state");
    }
    const auto window = causal_window(sc);
    for (double t : probe_times) {
        const std::size_t k = sc.grid.index_of(t);
        if (k < window.first || k >= window.last) throw std::invalid_argument("probe time outside the causal window");
    }

    const auto kernels = osc_kernels(sc.params, sc.grid, GridMode::loose);
    const SampledSignal shift = classical_displacement(sc, kernels.retarded);
    const auto rho = fock::make_state(sc.state, dim);

    std::vector<ProbeSlot> branched;
    std::vector<ProbeSlot> plain;
    for (double t : probe_times) {
        branched.push_back({t, fock::Branch::minus});
        branched.push_back({t, fock::Branch::plus});
        plain.push_back({t, fock::Branch::none});
    }
    const auto dt_form = moment_form(MomentKind::double_time, branched, sc.current, sc.state, kernels, sc.params);
    const auto normal_form = moment_form(MomentKind::normal, plain, sc.current, sc.state, kernels, sc.params);
    const auto weyl_form = moment_form(MomentKind::weyl, plain, sc.current, sc.state, kernels, sc.params);

    auto residual_for = [&](const GaussianForm& form, const std::vector<ProbeSlot>& slots, fock::Ordering ordering,
                            int order) {
        double worst = 0.0;
        for_each_multiset(slots.size(), order, [&](const std::vector<std::size_t>& picks) {
            fock::OrderedProductSpec spec{{}, ordering, shift};
            for (auto s : picks) spec.factors.push_back({fock::Observable::q, slots[s].time, slots[s].branch});
            const cd oracle = fock::ordered_average(rho, spec, sc.params);
            worst = std::max(worst, std::abs(oracle - moment_from_form(form, slots, picks)));
        });
        return worst;
    };

    FactorizationReport report;
    for (int order = 1; order <= max_order; ++order) {
        OrderResidual row{order, residual_for(dt_form, branched, fock::Ordering::double_time, order),
                          residual_for(normal_form, plain, fock::Ordering::normal, order),
                          residual_for(weyl_form, plain, fock::Ordering::weyl, order)};
        report.max_residual = std::max({report.max_residual, row.double_time, row.normal, row.weyl});
        report.orders.push_back(row);
    }
    return report;
}

}  // namespace oscresp
