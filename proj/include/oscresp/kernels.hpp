// kernels.hpp - oscillator, neutral-field and charged-field Green's functions

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "oscresp/spectral.hpp"

namespace oscresp {

struct OscillatorParams {
    double mass{1.0};
    double omega0{1.0};
    double hbar{1.0};

    double q0() const;  // sqrt(hbar / (m w0))
    double p0() const;  // sqrt(hbar m w0)
};

OscillatorParams make_params(double mass, double omega0, double hbar);

// strict: every frequency must sit on a DFT bin 0 < k < n/2.
// loose: anything goes; spectral identities then only hold approximately.
enum class GridMode { strict, loose };

bool is_commensurate(const TimeGrid& g, double omega);
void require_commensurate(const TimeGrid& g, double omega, GridMode mode);

// Closed forms at an exact lag, theta(0) = 1/2.
double osc_retarded(const OscillatorParams& p, double tau);  // D_R
cd osc_contraction(const OscillatorParams& p, double tau);   // D
cd osc_feynman(const OscillatorParams& p, double tau);       // D_F

struct OscillatorKernels {
    Kernel retarded;
    Kernel contraction;
    Kernel feynman;
};

OscillatorKernels osc_kernels(const OscillatorParams& p, const TimeGrid& g, GridMode mode = GridMode::strict);

// D_F(tau) - D(-tau)
Kernel retarded_from_contractions(const Kernel& feynman, const Kernel& contraction);
// D_R(+)(tau) - D_R(-)(-tau)
Kernel contraction_from_retarded(const Kernel& retarded);
// D_R(+)(tau) + D_R(+)(-tau)
Kernel feynman_from_retarded(const Kernel& retarded);
// D_R(-)(tau) + D_R(-)(-tau), the pointwise conjugate of the above for real D_R.
Kernel feynman_conjugate_from_retarded(const Kernel& retarded);

// i hbar [D_R(tau) - D_R(-tau)], the c-number value of [q(t), q(t - tau)].
Kernel commutator_kernel(const Kernel& retarded, double hbar);

// [q(t), p(t')] = i hbar m d/dt' [D_R(t - t') - D_R(t' - t)] = i hbar cos(w0 tau),
// obtained by differentiating the closed form of D_R.
cd qp_commutator(const OscillatorParams& p, double tau);
Kernel qp_commutator_kernel(const OscillatorParams& p, const TimeGrid& g);

// ---------------------------------------------------------------- neutral field

// One normal mode. amplitude(mu, r) is the mode function Q^k_mu(r).
struct FieldMode {
    double omega{0.0};
    Eigen::MatrixXcd amplitude;
};

struct ModeSet {
    std::size_t labels{0};
    std::size_t points{0};
    std::vector<FieldMode> modes;

    std::size_t sites() const { return labels * points; }
    void validate() const;
};

// Kernels K_{mu mu'}(r, r', tau) for every ordered pair of sites (mu, r).
class KernelFamily {
public:
    KernelFamily() = default;
    KernelFamily(const TimeGrid& g, std::size_t labels, std::size_t points);

    const TimeGrid& grid() const { return grid_; }
    std::size_t labels() const { return labels_; }
    std::size_t points() const { return points_; }
    std::size_t sites() const { return labels_ * points_; }
    std::size_t site(std::size_t mu, std::size_t r) const { return mu * points_ + r; }

    Kernel& between(std::size_t s, std::size_t s_prime) { return kernels_[s * sites() + s_prime]; }
    const Kernel& between(std::size_t s, std::size_t s_prime) const { return kernels_[s * sites() + s_prime]; }
    const Kernel& at(std::size_t mu, std::size_t r, std::size_t mu_prime, std::size_t r_prime) const {
        return between(site(mu, r), site(mu_prime, r_prime));
    }

private:
    TimeGrid grid_{};
    std::size_t labels_{0};
    std::size_t points_{0};
    std::vector<Kernel> kernels_;
};

struct FieldKernels {
    KernelFamily contraction;  // D
    KernelFamily feynman;      // D_F
    KernelFamily retarded;     // D_R
};

// D_{ss'}(tau) = -i sum_k exp(-i w_k tau) Q^k_s conj(Q^k_s'), the field commutator
// with i hbar divided out. hbar is applied by callers.
FieldKernels neutral_field_kernels(const ModeSet& modes, const TimeGrid& g, GridMode mode = GridMode::strict);

// D_R_{ss'}(tau) = D_F_{ss'}(tau) - D_{s's}(-tau)
KernelFamily field_retarded_from_contractions(const KernelFamily& feynman, const KernelFamily& contraction);
// D_{ss'}(tau) = D_R_{ss'}(+)(tau) - D_R_{s's}(-)(-tau)
KernelFamily field_contraction_from_retarded(const KernelFamily& retarded);
// D_F_{ss'}(tau) = D_R_{ss'}(+)(tau) + D_R_{s's}(+)(-tau)
KernelFamily field_feynman_from_retarded(const KernelFamily& retarded);

// ---------------------------------------------------------------- charged field

struct ChargedMode {
    double omega{0.0};
    double weight{0.0};
};

struct ChargedModeSet {
    std::vector<ChargedMode> particles;
    std::vector<ChargedMode> antiparticles;

    void validate() const;
};

struct ChargedKernels {
    Kernel particle;         // D^A, frequency-positive
    Kernel antiparticle;     // D^B, frequency-negative
    Kernel feynman;          // D_F
    Kernel feynman_adjoint;  // D_F^dagger
    Kernel retarded;         // D_R = D_F - D^B
};

// D^A = -i sum s_k exp(-i w_k tau), D^B = -i sum s_k exp(+i w_k tau).
// Pure-imaginary weights make both anti-Hermitian.
ChargedKernels charged_field_kernels(const ChargedModeSet& modes, const TimeGrid& g,
                                     GridMode mode = GridMode::strict);

// The second form of the retarded function, D_F^dagger - D^A^dagger.
Kernel charged_retarded_via_adjoint(const ChargedKernels& k);

// Everything rebuilt from D_R alone:
//   D^A = D_R(+) - D_R^dagger(+),   D^B = D_R^dagger(-) - D_R(-),
//   D_F = D_R(+) + D_R^dagger(-),   D_F^dagger = D_R^dagger(+) + D_R(-).
struct ChargedReconstruction {
    Kernel particle;
    Kernel antiparticle;
    Kernel feynman;
    Kernel feynman_adjoint;
};

ChargedReconstruction charged_from_retarded(const Kernel& retarded);

}  // namespace oscresp
