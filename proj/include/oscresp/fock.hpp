// fock.hpp - truncated number-basis operator algebra used as the brute-force oracle

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oscresp/kernels.hpp"
#include "oscresp/spectral.hpp"

namespace oscresp::fock {

using Operator = Eigen::MatrixXcd;

inline constexpr std::size_t default_dim = 40;
inline constexpr std::size_t max_factors = 8;

struct Ladder {
    Operator a;
    Operator adag;
};

// a(n-1, n) = sqrt(n); [a, adag] = 1 except in the last row/column.
Ladder ladder(std::size_t dim);

// Interaction-picture operators of the free oscillator:
//   q(t) = (q0/sqrt 2)(a e^{-i w0 t} + adag e^{i w0 t}),  p(t) = m dq/dt.
Operator heisenberg_q(const OscillatorParams& p, double t, std::size_t dim);
Operator heisenberg_p(const OscillatorParams& p, double t, std::size_t dim);

enum class StateKind { vacuum, coherent, number, thermal };

struct StateSpec {
    StateKind kind{StateKind::vacuum};
    cd alpha{0.0, 0.0};
    std::size_t quanta{0};
    double mean_occupation{0.0};

    static StateSpec vacuum() { return {}; }
    static StateSpec coherent(cd a) { return {StateKind::coherent, a, 0, 0.0}; }
    static StateSpec number(std::size_t n) { return {StateKind::number, {0.0, 0.0}, n, 0.0}; }
    static StateSpec thermal(double nbar) { return {StateKind::thermal, {0.0, 0.0}, 0, nbar}; }

    std::string describe() const;
};

struct FockState {
    Operator rho;
    // Probability mass the untruncated state has beyond the last level.
    double truncation_deficit{0.0};

    std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
    // Hermitian to 1e-12, unit trace to 1e-10, eigenvalues >= -1e-10.
    void validate() const;
};

// Throws when dim is too small for the truncated norm to stay within 1e-10.
FockState make_state(const StateSpec& spec, std::size_t dim = default_dim);

enum class Observable { q, p };
enum class Branch { none, plus, minus };
enum class Ordering { plain, double_time, normal, antinormal, weyl };

struct Factor {
    Observable observable{Observable::q};
    double time{0.0};
    Branch branch{Branch::none};
};

struct OrderedProductSpec {
    std::vector<Factor> factors;
    Ordering ordering{Ordering::plain};
    // c-number displacement added to every q factor, looked up at the factor time.
    std::optional<SampledSignal> shift;
};

// Tr[rho O] with O assembled according to spec.ordering:
//   plain       factors multiplied left to right as listed;
//   double_time minus-branch factors (earliest leftmost) to the left of the
//               plus-branch factors (latest leftmost); ties keep input order;
//   normal      every factor split into its a and adag parts, adag moved left;
//   antinormal  same split, a moved left;
//   weyl        equal-weight average over all orderings of the factors.
cd ordered_average(const FockState& state, const OrderedProductSpec& spec, const OscillatorParams& p);

// Convenience for q-only products.
std::vector<Factor> q_factors(std::span<const double> times, Branch branch = Branch::none);

// <: exp(c_create adag + c_annihilate a) :> expanded to total order <= `order`.
cd normal_exponential_average(const FockState& state, cd c_create, cd c_annihilate, int order);

struct Spike {
    double time{0.0};
    cd weight{0.0, 0.0};
};

// Characteristic functional of double-time-ordered averages for spike probes,
//   Phi = < T_- exp(i sum x_a q(t_a)) T_+ exp(-i sum y_b q(t_b)) >,
// Taylor-expanded to total degree <= order (order <= 6).
cd characteristic_taylor(const FockState& state, std::span<const Spike> eta_minus, std::span<const Spike> eta_plus,
                         const OscillatorParams& p, int order);

struct RealityCheck {
    cd phi;       // Phi(eta_-, eta_+)
    cd mirrored;  // Phi(eta_+^*, eta_-^*)
    double residual{0.0};
};

// |conj(Phi(eta_-, eta_+)) - Phi(eta_+^*, eta_-^*)| at the given Taylor order.
RealityCheck reality_check(const FockState& state, std::span<const Spike> eta_plus, std::span<const Spike> eta_minus,
                           const OscillatorParams& p, int order);

}  // namespace oscresp::fock
