// functional.hpp - characteristic functionals, the response substitution and Gaussian moments

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "oscresp/fock.hpp"
#include "oscresp/kernels.hpp"
#include "oscresp/spectral.hpp"

namespace oscresp {

// Probe amplitudes on the forward (plus) and backward (minus) branches.
struct ProbeSet {
    SampledSignal eta_plus;
    SampledSignal eta_minus;

    const TimeGrid& grid() const { return eta_plus.grid; }
};

ProbeSet make_probes(SampledSignal eta_plus, SampledSignal eta_minus);

struct ResponseVariables {
    SampledSignal eta;    // -i (eta_+ - eta_-)
    SampledSignal sigma;  // hbar (eta_+^(+) + eta_-^(-))
};

ResponseVariables response_substitution(const ProbeSet& ps, double hbar);
// eta_+ = i eta^(-) + sigma/hbar,  eta_- = -i eta^(+) + sigma/hbar
ProbeSet inverse_substitution(const ResponseVariables& rv, double hbar);

// Largest zero+Nyquist energy fraction over both probes; above 1e-10 the split is ambiguous.
double probe_zero_nyquist_fraction(const ProbeSet& ps);
inline constexpr double zero_nyquist_flag_level = 1e-10;

struct FunctionalValue {
    cd log;
    cd value;
};

FunctionalValue from_log(cd log);

// dt * sum_t a(t) b(t)
cd grid_dot(const SampledSignal& a, const SampledSignal& b);
// dt^2 * sum_{t,t'} a(t) K(t - t') b(t')
cd bilinear(const SampledSignal& a, const Kernel& k, const SampledSignal& b);

// log Phi = i hbar dt^2 sum [-1/2 eta_+ eta_+ D_F + 1/2 eta_- eta_- D_F* + eta_- eta_+ D]
FunctionalValue phi_vac_quadratic(const ProbeSet& ps, const Kernel& feynman, const Kernel& contraction, double hbar);
// log Phi = dt^2 sum eta(t) D_R(t - t') sigma(t')
FunctionalValue phi_vac_response(const ProbeSet& ps, const Kernel& retarded, double hbar);

// log Phi = dt sum eta q_j with q_j = D_R * j.
FunctionalValue phi_cl(const SampledSignal& eta, const SampledSignal& j, const Kernel& retarded);

// q_in(t) = (q0/sqrt 2)(alpha e^{-i w0 t} + conj(alpha) e^{i w0 t})
SampledSignal coherent_mean(const OscillatorParams& p, cd alpha, const TimeGrid& g);

// <: exp(dt sum eta q) :> for the initial state. Vacuum and coherent states are
// analytic; number and thermal states go through the Fock oracle to `order`.
cd phi_in(const fock::StateSpec& state, const SampledSignal& eta, const OscillatorParams& p, int order = 6,
          std::size_t dim = fock::default_dim);
// Always the Fock path, for any state.
cd phi_in_numeric(const fock::StateSpec& state, const SampledSignal& eta, const OscillatorParams& p, int order,
                  std::size_t dim = fock::default_dim);
bool has_analytic_phi_in(const fock::StateSpec& state);

struct FullFunctional {
    cd product;        // Phi_vac Phi_in Phi_cl(eta; j)
    cd response_form;  // Phi_cl(eta; j + sigma) Phi_in
    double residual{0.0};
};

FullFunctional phi_full(const ProbeSet& ps, const SampledSignal& j, const fock::StateSpec& state,
                        const OscillatorKernels& k, const OscillatorParams& p, int order = 6);

// ---------------------------------------------------------------- Gaussian moments

// log f(w) = 1/2 w.Q.w + L.w for weights w on a finite list of probe slots.
struct GaussianForm {
    Eigen::MatrixXcd quadratic;
    Eigen::VectorXcd linear;
};

// Mixed derivative d^m/dw_{s1}..dw_{sm} of exp(log f) at w = 0 (slots may repeat), m <= 6.
cd gaussian_moment(const GaussianForm& form, std::span<const std::size_t> slots);

// Reads Q and L off a log-functional by exact polarization; exact when log f is
// at most quadratic in the weights.
GaussianForm extract_gaussian_form(const std::function<cd(const Eigen::VectorXcd&)>& log_f, std::size_t slots);

// A spike probe slot. Branch plus/minus feeds eta_+/eta_-; none feeds eta directly.
struct ProbeSlot {
    double time{0.0};
    fock::Branch branch{fock::Branch::none};
};

enum class MomentKind { double_time, normal, weyl };

// Gaussian form of the functional generating `kind` averages of the shifted
// operator q(t) + q_j(t), for vacuum or coherent initial states.
GaussianForm moment_form(MomentKind kind, std::span<const ProbeSlot> slots, const SampledSignal& j,
                         const fock::StateSpec& state, const OscillatorKernels& k, const OscillatorParams& p);

// Average of the product of q factors at the picked slots. For double_time the
// derivative is multiplied by (-i)^m i^n (m minus picks, n plus picks).
cd moment_from_form(const GaussianForm& form, std::span<const ProbeSlot> slots, std::span<const std::size_t> picks);

// ---------------------------------------------------------------- current maps

enum class OrderingVariant { normal, weyl, antinormal };

struct CurrentPair {
    SampledSignal j_plus;
    SampledSignal j_minus;
    OrderingVariant variant{OrderingVariant::normal};
};

struct SchwingerImage {
    SampledSignal eta;   // -i (j_+ - j_-) / hbar
    SampledSignal kubo;  // physical c-number current for the variant
};

SchwingerImage schwinger_map(const CurrentPair& cp, double hbar);

// ---------------------------------------------------------------- symmetric ordering

struct WeylKernelCheck {
    cd response_form;     // dt^2 sum eta D_R (eta^(+) - eta^(-))
    cd rearranged;        // dt^2 sum eta [D_R^(+)(tau) - D_R^(-)(-tau)] eta
    cd contraction_form;  // dt^2 sum eta D eta
    double residual{0.0};
};

WeylKernelCheck weyl_kernel_identity(const SampledSignal& eta, const Kernel& contraction, const Kernel& retarded);

struct WeylMomentCheck {
    cd oracle;     // Fock symmetrized average
    cd predicted;  // normal moment from Phi_in plus the (i hbar/2)(D + D^T) pairings
    double residual{0.0};
};

// Two-point (gating) or higher (conjecture-level) symmetric moments; vacuum or coherent.
WeylMomentCheck weyl_moment_check(const fock::StateSpec& state, std::span<const double> times,
                                  const OscillatorParams& p, std::size_t dim = fock::default_dim);

struct WeylFactorCheck {
    WeylKernelCheck kernel;
    WeylMomentCheck two_point;
    double residual{0.0};
};

WeylFactorCheck weyl_factor_check(const SampledSignal& eta, const Kernel& contraction, const Kernel& retarded,
                                  const fock::StateSpec& state, double t1, double t2, const OscillatorParams& p,
                                  std::size_t dim = fock::default_dim);

// ---------------------------------------------------------------- fields

// One probe per site (mu, r) on each branch.
struct FieldProbeSet {
    std::vector<SampledSignal> eta_plus;
    std::vector<SampledSignal> eta_minus;
};

FunctionalValue field_phi_vac_quadratic(const FieldProbeSet& ps, const FieldKernels& k, double hbar);
FunctionalValue field_phi_vac_response(const FieldProbeSet& ps, const KernelFamily& retarded, double hbar);

// Probes for the charged field: the field couples to eta_pm, its conjugate to eta_bar_pm.
struct ChargedProbeSet {
    SampledSignal eta_plus;
    SampledSignal eta_minus;
    SampledSignal eta_bar_plus;
    SampledSignal eta_bar_minus;
};

struct ChargedFormCheck {
    cd quadratic;  // four-contraction form
    cd response;   // eta_bar D_R sigma + eta D_R* sigma_bar
    double residual{0.0};
};

ChargedFormCheck charged_substitution_check(const ChargedProbeSet& ps, const ChargedKernels& k, double hbar);

}  // namespace oscresp
