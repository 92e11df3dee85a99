// driven.hpp - classical driven oscillator and the quantum/classical factorization checks

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oscresp/fock.hpp"
#include "oscresp/functional.hpp"
#include "oscresp/kernels.hpp"
#include "oscresp/spectral.hpp"

namespace oscresp {

enum class CurrentShape { zero, step, sine, spike };

// j(t) switched on at t_on >= 0.
//   step:  amplitude * theta(t - t_on)
//   sine:  amplitude * sin(omega (t - t_on)) * theta(t - t_on)
//   spike: impulse of total weight `amplitude` at t_on
struct CurrentProfile {
    CurrentShape shape{CurrentShape::zero};
    double amplitude{0.0};
    double t_on{0.0};
    double omega{1.0};

    // Right-continuous analytic value; the spike has no pointwise value and returns 0.
    double value(double t) const;
    // Grid samples; the step takes theta(0) = 1/2 at onset, the spike is amplitude/dt.
    SampledSignal sample(const TimeGrid& g) const;
};

// "step:1.0", "sine:0.5" (omega defaults to w0), "sine:0.5:2.0", "spike:1.0", "zero".
CurrentProfile parse_current(const std::string& text, double default_omega);

struct DriveScenario {
    OscillatorParams params;
    TimeGrid grid;
    CurrentProfile profile;
    SampledSignal current;
    fock::StateSpec state;

    // j real and zero at every sample with t < 0.
    void validate() const;
};

DriveScenario make_scenario(const OscillatorParams& p, const TimeGrid& g, const CurrentProfile& profile,
                            const fock::StateSpec& state = fock::StateSpec::vacuum());

// Sample indices [first, last) from onset up to half a period later, where the
// circular convolution equals the linear one.
struct CausalWindow {
    std::size_t first{0};
    std::size_t last{0};
};

CausalWindow causal_window(const DriveScenario& sc);

// q_j = D_R * j on the grid.
SampledSignal classical_displacement(const DriveScenario& sc, const Kernel& retarded);

struct OdeSolution {
    SampledSignal q;
    // Step-halving estimate of the global error of q.
    double error_estimate{0.0};
};

// Fixed-step RK4 for q'' + w0^2 q = -j/m from rest, using the grid step and its
// half; the half-step solution is returned. Throws if the estimate exceeds max_error.
OdeSolution ode_oscillator(const DriveScenario& sc, double max_error = 1e-6);

// Closed-form response from rest for the step and sine profiles (zero for zero current).
double analytic_displacement(const DriveScenario& sc, double t);

struct OrderResidual {
    int order{0};
    double double_time{0.0};
    double normal{0.0};
    double weyl{0.0};
};

struct FactorizationReport {
    std::vector<OrderResidual> orders;
    double max_residual{0.0};
};

// Moments of the product functional Phi_vac Phi_in Phi_cl against Fock averages of
// the shifted operator q(t) + q_j(t), for every multiset of probe times up to
// `max_order` (<= 4). Probe times must lie in the causal window.
FactorizationReport verify_driven_factorization(const DriveScenario& sc, std::span<const double> probe_times,
                                                int max_order, std::size_t dim = fock::default_dim);

}  // namespace oscresp
