// kernels.cpp - oscillator, neutral-field and charged-field Green's functions

#include "oscresp/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oscresp {

namespace {

constexpr cd I{0.0, 1.0};

double step(double tau) {
    if (tau > 0.0) return 1.0;
    if (tau < 0.0) return 0.0;
    return 0.5;
}

double lag_time(const TimeGrid& g, std::size_t k) { return static_cast<double>(g.lag_of(k)) * g.dt; }

}  // namespace

double OscillatorParams::q0() const { return std::sqrt(hbar / (mass * omega0)); }
double OscillatorParams::p0() const { return std::sqrt(hbar * mass * omega0); }

OscillatorParams make_params(double mass, double omega0, double hbar) {
    if (!(mass > 0.0) || !(omega0 > 0.0) || !(hbar > 0.0)) {
        throw std::invalid_argument("oscillator mass, frequency and hbar must all be positive");
    }
    return OscillatorParams{mass, omega0, hbar};
}

bool is_commensurate(const TimeGrid& g, double omega) {
    const double bin = omega * g.period() / (2.0 * std::numbers::pi);
    const double nearest = std::round(bin);
    if (nearest < 1.0 || 2.0 * nearest >= static_cast<double>(g.n)) return false;
    return std::abs(bin - nearest) <= 1e-9 * nearest;
}

void require_commensurate(const TimeGrid& g, double omega, GridMode mode) {
    if (mode == GridMode::loose) return;
    if (!is_commensurate(g, omega)) {
        throw std::invalid_argument("frequency " + std::to_string(omega) +
                                    " is not on a DFT bin 0 < k < n/2 of the grid (use loose mode)");
    }
}

double osc_retarded(const OscillatorParams& p, double tau) {
    return -step(tau) * std::sin(p.omega0 * tau) / (p.mass * p.omega0);
}

cd osc_contraction(const OscillatorParams& p, double tau) {
    return -I * std::exp(-I * (p.omega0 * tau)) / (2.0 * p.mass * p.omega0);
}

cd osc_feynman(const OscillatorParams& p, double tau) {
    return step(tau) * osc_contraction(p, tau) + step(-tau) * osc_contraction(p, -tau);
}

OscillatorKernels osc_kernels(const OscillatorParams& p, const TimeGrid& g, GridMode mode) {
    require_commensurate(g, p.omega0, mode);
    OscillatorKernels out{Kernel(g), Kernel(g), Kernel(g)};
    for (std::size_t k = 0; k < g.n; ++k) {
        const double tau = lag_time(g, k);
        const double theta = step_at_lag(g, k);
        const cd forward = osc_contraction(p, tau);
        const cd backward = osc_contraction(p, -tau);
        out.contraction[k] = forward;
        out.feynman[k] = theta * forward + (1.0 - theta) * backward;
        out.retarded[k] = -theta * std::sin(p.omega0 * tau) / (p.mass * p.omega0);
    }
    return out;
}

Kernel retarded_from_contractions(const Kernel& feynman, const Kernel& contraction) {
    return feynman - time_reversed(contraction);
}

Kernel contraction_from_retarded(const Kernel& retarded) {
    const auto parts = frequency_split(retarded);
    return parts.plus - time_reversed(parts.minus);
}

Kernel feynman_from_retarded(const Kernel& retarded) {
    const auto plus = frequency_plus(retarded);
    return plus + time_reversed(plus);
}

Kernel feynman_conjugate_from_retarded(const Kernel& retarded) {
    const auto minus = frequency_minus(retarded);
    return minus + time_reversed(minus);
}

Kernel commutator_kernel(const Kernel& retarded, double hbar) {
    return (I * hbar) * (retarded - time_reversed(retarded));
}

cd qp_commutator(const OscillatorParams& p, double tau) {
    // d/dt' of -sin(w0 (t - t')) / (m w0) is cos(w0 tau) / m.
    const double derivative = std::cos(p.omega0 * tau) / p.mass;
    return I * p.hbar * p.mass * derivative;
}

Kernel qp_commutator_kernel(const OscillatorParams& p, const TimeGrid& g) {
    Kernel out(g);
    for (std::size_t k = 0; k < g.n; ++k) out[k] = qp_commutator(p, lag_time(g, k));
    return out;
}

// ---------------------------------------------------------------- neutral field

void ModeSet::validate() const {
    if (labels == 0 || points == 0) throw std::invalid_argument("mode set needs at least one label and point");
    for (const auto& m : modes) {
        if (!(m.omega > 0.0)) throw std::invalid_argument("mode frequencies must be positive");
        if (static_cast<std::size_t>(m.amplitude.rows()) != labels ||
            static_cast<std::size_t>(m.amplitude.cols()) != points) {
            throw std::invalid_argument("mode amplitude must be labels x points");
        }
    }
}

KernelFamily::KernelFamily(const TimeGrid& g, std::size_t labels, std::size_t points)
    : grid_(g), labels_(labels), points_(points), kernels_(labels * points * labels * points, Kernel(g)) {}

FieldKernels neutral_field_kernels(const ModeSet& modes, const TimeGrid& g, GridMode mode) {
    modes.validate();
    for (const auto& m : modes.modes) require_commensurate(g, m.omega, mode);

    const std::size_t sites = modes.sites();
    FieldKernels out{KernelFamily(g, modes.labels, modes.points), KernelFamily(g, modes.labels, modes.points),
                     KernelFamily(g, modes.labels, modes.points)};

    auto amplitude = [&](const FieldMode& m, std::size_t s) {
        return m.amplitude(static_cast<Eigen::Index>(s / modes.points), static_cast<Eigen::Index>(s % modes.points));
    };
    auto contraction = [&](std::size_t s, std::size_t sp, double tau) {
        cd sum{0.0, 0.0};
        for (const auto& m : modes.modes) {
            sum += std::exp(-I * (m.omega * tau)) * amplitude(m, s) * std::conj(amplitude(m, sp));
        }
        return -I * sum;
    };

    for (std::size_t s = 0; s < sites; ++s) {
        for (std::size_t sp = 0; sp < sites; ++sp) {
            Kernel& d = out.contraction.between(s, sp);
            Kernel& df = out.feynman.between(s, sp);
            Kernel& dr = out.retarded.between(s, sp);
            for (std::size_t k = 0; k < g.n; ++k) {
                const double tau = lag_time(g, k);
                const double theta = step_at_lag(g, k);
                const cd forward = contraction(s, sp, tau);
                const cd backward = contraction(sp, s, -tau);
                d[k] = forward;
                df[k] = theta * forward + (1.0 - theta) * backward;
                dr[k] = theta * (forward - backward);
            }
        }
    }
    return out;
}

KernelFamily field_retarded_from_contractions(const KernelFamily& feynman, const KernelFamily& contraction) {
    KernelFamily out(feynman.grid(), feynman.labels(), feynman.points());
    for (std::size_t s = 0; s < out.sites(); ++s) {
        for (std::size_t sp = 0; sp < out.sites(); ++sp) {
            out.between(s, sp) = feynman.between(s, sp) - time_reversed(contraction.between(sp, s));
        }
    }
    return out;
}

KernelFamily field_contraction_from_retarded(const KernelFamily& retarded) {
    KernelFamily out(retarded.grid(), retarded.labels(), retarded.points());
    for (std::size_t s = 0; s < out.sites(); ++s) {
        for (std::size_t sp = 0; sp < out.sites(); ++sp) {
            out.between(s, sp) = frequency_plus(retarded.between(s, sp)) -
                                 time_reversed(frequency_minus(retarded.between(sp, s)));
        }
    }
    return out;
}

KernelFamily field_feynman_from_retarded(const KernelFamily& retarded) {
    KernelFamily out(retarded.grid(), retarded.labels(), retarded.points());
    for (std::size_t s = 0; s < out.sites(); ++s) {
        for (std::size_t sp = 0; sp < out.sites(); ++sp) {
            out.between(s, sp) = frequency_plus(retarded.between(s, sp)) +
                                 time_reversed(frequency_plus(retarded.between(sp, s)));
        }
    }
    return out;
}

// ---------------------------------------------------------------- charged field

void ChargedModeSet::validate() const {
    if (particles.empty() && antiparticles.empty()) throw std::invalid_argument("charged mode set is empty");
    for (const auto* list : {&particles, &antiparticles}) {
        for (const auto& m : *list) {
            if (!(m.omega > 0.0) || !(m.weight > 0.0)) {
                throw std::invalid_argument("charged mode frequencies and weights must be positive");
            }
        }
    }
}

ChargedKernels charged_field_kernels(const ChargedModeSet& modes, const TimeGrid& g, GridMode mode) {
    modes.validate();
    for (const auto* list : {&modes.particles, &modes.antiparticles}) {
        for (const auto& m : *list) require_commensurate(g, m.omega, mode);
    }

    Kernel particle(g);
    Kernel antiparticle(g);
    Kernel feynman(g);
    Kernel retarded(g);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double tau = lag_time(g, k);
        cd a{0.0, 0.0};
        cd b{0.0, 0.0};
        for (const auto& m : modes.particles) a += m.weight * std::exp(-I * (m.omega * tau));
        for (const auto& m : modes.antiparticles) b += m.weight * std::exp(I * (m.omega * tau));
        a *= -I;
        b *= -I;
        const double theta = step_at_lag(g, k);
        particle[k] = a;
        antiparticle[k] = b;
        feynman[k] = theta * a + (1.0 - theta) * b;
        retarded[k] = theta * (a - b);
    }
    Kernel feynman_adjoint = kernel_adjoint(feynman);
    return ChargedKernels{std::move(particle), std::move(antiparticle), std::move(feynman),
                          std::move(feynman_adjoint), std::move(retarded)};
}

Kernel charged_retarded_via_adjoint(const ChargedKernels& k) {
    return k.feynman_adjoint - kernel_adjoint(k.particle);
}

ChargedReconstruction charged_from_retarded(const Kernel& retarded) {
    const auto direct = frequency_split(retarded);
    const auto adjoint = frequency_split(kernel_adjoint(retarded));
    return ChargedReconstruction{direct.plus - adjoint.plus, adjoint.minus - direct.minus,
                                 direct.plus + adjoint.minus, adjoint.plus + direct.minus};
}

}  // namespace oscresp
