// spectral.hpp - periodic time grids, frequency-positive/negative split, circular convolution

#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace oscresp {

using cd = std::complex<double>;

// Uniform periodic grid. Sample k sits at t0 + k*dt, period n*dt.
struct TimeGrid {
    std::size_t n{0};
    double dt{0.0};
    double t0{0.0};

    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double period() const { return static_cast<double>(n) * dt; }
    // Index of the sample at t = 0 (also the tau = 0 slot of a kernel).
    std::size_t origin() const { return n / 2; }
    // Kernel slot for a signed lag of `offset` samples, wrapped periodically.
    std::size_t lag_index(long offset) const;
    // Signed lag in samples of kernel slot k, in [-n/2, n/2).
    long lag_of(std::size_t k) const { return static_cast<long>(k) - static_cast<long>(n / 2); }
    // Grid index of time t; throws if t is not on the grid within 1e-9*dt.
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid& other) const = default;
};

// Even n >= 4, dt > 0; window centred so both signs of tau are present.
TimeGrid make_grid(std::size_t n, double dt);

// Grid whose fundamental 2*pi/(n*dt) puts `omega` exactly on DFT bin `bin`.
TimeGrid commensurate_grid(std::size_t n, double omega, std::size_t bin);

// Periodic step with theta(0) = 1/2. The antipodal lag -n/2 is its own
// mirror image and also gets 1/2, so theta(k) + theta(-k) == 1 everywhere.
double step_at_lag(const TimeGrid& g, std::size_t k);

template <class Tag>
struct GridSeries {
    TimeGrid grid;
    Eigen::VectorXcd values;

    GridSeries() = default;
    GridSeries(const TimeGrid& g, Eigen::VectorXcd v);
    explicit GridSeries(const TimeGrid& g) : GridSeries(g, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.n))) {}

    cd operator[](std::size_t k) const { return values(static_cast<Eigen::Index>(k)); }
    cd& operator[](std::size_t k) { return values(static_cast<Eigen::Index>(k)); }
    std::size_t size() const { return grid.n; }
};

struct SignalTag {};
struct KernelTag {};

// Function of absolute time t on the grid.
using SampledSignal = GridSeries<SignalTag>;
// Function of the lag tau; slot k holds tau = t0 + k*dt = (k - n/2)*dt.
using Kernel = GridSeries<KernelTag>;

extern template struct GridSeries<SignalTag>;
extern template struct GridSeries<KernelTag>;

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where);

template <class Tag>
GridSeries<Tag> operator+(const GridSeries<Tag>& a, const GridSeries<Tag>& b) {
    require_same_grid(a.grid, b.grid, "series addition");
    return GridSeries<Tag>(a.grid, a.values + b.values);
}

template <class Tag>
GridSeries<Tag> operator-(const GridSeries<Tag>& a, const GridSeries<Tag>& b) {
    require_same_grid(a.grid, b.grid, "series subtraction");
    return GridSeries<Tag>(a.grid, a.values - b.values);
}

template <class Tag>
GridSeries<Tag> operator*(cd factor, const GridSeries<Tag>& a) {
    return GridSeries<Tag>(a.grid, factor * a.values);
}

template <class Tag>
double max_abs_diff(const GridSeries<Tag>& a, const GridSeries<Tag>& b) {
    require_same_grid(a.grid, b.grid, "max_abs_diff");
    if (a.values.size() == 0) return 0.0;
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

template <class Series>
struct FrequencyParts {
    Series plus;
    Series minus;
};

// plus keeps components exp(-i w t) with w > 0, minus those with w < 0.
// The zero and Nyquist bins are shared half/half so plus + minus == input.
FrequencyParts<SampledSignal> frequency_split(const SampledSignal& s);
FrequencyParts<Kernel> frequency_split(const Kernel& k);

SampledSignal frequency_plus(const SampledSignal& s);
SampledSignal frequency_minus(const SampledSignal& s);
Kernel frequency_plus(const Kernel& k);
Kernel frequency_minus(const Kernel& k);

// Fraction of the signal energy sitting in the zero and Nyquist bins.
double zero_nyquist_fraction(const Eigen::VectorXcd& values);

// out(t) = dt * sum_t' k(t - t') s(t'), indices wrapped periodically.
SampledSignal circular_convolve(const Kernel& k, const SampledSignal& s);

// tau -> -tau (t -> -t for signals; the grid is symmetric about zero).
Kernel time_reversed(const Kernel& k);
SampledSignal time_reversed(const SampledSignal& s);
// out(tau) = conj(k(-tau)).
Kernel kernel_adjoint(const Kernel& k);
Kernel conjugated(const Kernel& k);

// Discrete delta at tau = 0 (value 1/dt), the identity of circular_convolve.
Kernel delta_kernel(const TimeGrid& g);
// Discrete delta at time t (value weight/dt).
SampledSignal spike(const TimeGrid& g, double t, cd weight = 1.0);

namespace detail {
// Forward DFT X_m = sum_k v_k exp(-2 pi i m k / n) and its inverse.
Eigen::VectorXcd dft(const Eigen::VectorXcd& v);
Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum);
}  // namespace detail

}  // namespace oscresp
