// spectral.cpp - periodic time grids, frequency-positive/negative split, circular convolution

#include "oscresp/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace oscresp {

template <class Tag>
GridSeries<Tag>::GridSeries(const TimeGrid& g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.n) {
        throw std::invalid_argument("series length " + std::to_string(values.size()) +
                                    " does not match grid size " + std::to_string(grid.n));
    }
}

template struct GridSeries<SignalTag>;
template struct GridSeries<KernelTag>;

std::size_t TimeGrid::lag_index(long offset) const {
    const long len = static_cast<long>(n);
    long k = (offset + len / 2) % len;
    if (k < 0) k += len;
    return static_cast<std::size_t>(k);
}

std::size_t TimeGrid::index_of(double t) const {
    const double x = (t - t0) / dt;
    const double k = std::round(x);
    if (std::abs(x - k) > 1e-9 || k < 0.0 || k >= static_cast<double>(n)) {
        throw std::invalid_argument("time " + std::to_string(t) + " is not a grid sample");
    }
    return static_cast<std::size_t>(k);
}

TimeGrid make_grid(std::size_t n, double dt) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("grid size must be even and >= 4, got " + std::to_string(n));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("grid step must be positive and finite");
    }
    return TimeGrid{n, dt, -static_cast<double>(n) * dt / 2.0};
}

TimeGrid commensurate_grid(std::size_t n, double omega, std::size_t bin) {
    if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
    if (bin == 0 || 2 * bin >= n) {
        throw std::invalid_argument("bin must satisfy 0 < bin < n/2");
    }
    const double dt = 2.0 * std::numbers::pi * static_cast<double>(bin) / (static_cast<double>(n) * omega);
    return make_grid(n, dt);
}

double step_at_lag(const TimeGrid& g, std::size_t k) {
    const long lag = g.lag_of(k);
    if (lag == 0 || lag == -static_cast<long>(g.n / 2)) return 0.5;
    return lag > 0 ? 1.0 : 0.0;
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

namespace detail {

Eigen::VectorXcd dft(const Eigen::VectorXcd& v) {
    Eigen::FFT<double> fft;
    std::vector<cd> in(v.data(), v.data() + v.size());
    std::vector<cd> out;
    fft.fwd(out, in);
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum) {
    Eigen::FFT<double> fft;
    std::vector<cd> in(spectrum.data(), spectrum.data() + spectrum.size());
    std::vector<cd> out;
    fft.inv(out, in);
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace detail

namespace {

// Weight of DFT bin m in the frequency-positive part. Bin m carries
// exp(+2 pi i m k / n), i.e. physical frequency -2 pi m / T, so the
// frequency-positive half (exp(-i w t), w > 0) lives in m > n/2.
double plus_weight(std::size_t m, std::size_t n) {
    if (m == 0 || 2 * m == n) return 0.5;
    return 2 * m > n ? 1.0 : 0.0;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> split_values(const Eigen::VectorXcd& v) {
    const auto n = static_cast<std::size_t>(v.size());
    const Eigen::VectorXcd spectrum = detail::dft(v);
    Eigen::VectorXcd plus_spec(spectrum.size());
    for (std::size_t m = 0; m < n; ++m) {
        plus_spec(static_cast<Eigen::Index>(m)) = plus_weight(m, n) * spectrum(static_cast<Eigen::Index>(m));
    }
    Eigen::VectorXcd plus = detail::idft(plus_spec);
    Eigen::VectorXcd minus = v - plus;
    return {std::move(plus), std::move(minus)};
}

Eigen::VectorXcd reversed_values(const Eigen::VectorXcd& v) {
    const Eigen::Index n = v.size();
    Eigen::VectorXcd out(n);
    for (Eigen::Index k = 0; k < n; ++k) out(k) = v((n - k) % n);
    return out;
}

}  // namespace

FrequencyParts<SampledSignal> frequency_split(const SampledSignal& s) {
    auto [p, m] = split_values(s.values);
    return {SampledSignal(s.grid, std::move(p)), SampledSignal(s.grid, std::move(m))};
}

FrequencyParts<Kernel> frequency_split(const Kernel& k) {
    auto [p, m] = split_values(k.values);
    return {Kernel(k.grid, std::move(p)), Kernel(k.grid, std::move(m))};
}

SampledSignal frequency_plus(const SampledSignal& s) { return frequency_split(s).plus; }
SampledSignal frequency_minus(const SampledSignal& s) { return frequency_split(s).minus; }
Kernel frequency_plus(const Kernel& k) { return frequency_split(k).plus; }
Kernel frequency_minus(const Kernel& k) { return frequency_split(k).minus; }

double zero_nyquist_fraction(const Eigen::VectorXcd& values) {
    const Eigen::VectorXcd spectrum = detail::dft(values);
    const double total = spectrum.squaredNorm();
    if (total == 0.0) return 0.0;
    const Eigen::Index n = spectrum.size();
    return (std::norm(spectrum(0)) + std::norm(spectrum(n / 2))) / total;
}

SampledSignal circular_convolve(const Kernel& k, const SampledSignal& s) {
    require_same_grid(k.grid, s.grid, "circular_convolve");
    const std::size_t n = s.grid.n;
    // Re-index the kernel so slot m holds tau = m*dt (m = 0 first).
    Eigen::VectorXcd causal(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < n; ++m) {
        causal(static_cast<Eigen::Index>(m)) = k[s.grid.lag_index(static_cast<long>(m))];
    }
    const Eigen::VectorXcd product = detail::dft(causal).cwiseProduct(detail::dft(s.values));
    return SampledSignal(s.grid, s.grid.dt * detail::idft(product));
}

Kernel time_reversed(const Kernel& k) { return Kernel(k.grid, reversed_values(k.values)); }

SampledSignal time_reversed(const SampledSignal& s) { return SampledSignal(s.grid, reversed_values(s.values)); }

Kernel kernel_adjoint(const Kernel& k) { return Kernel(k.grid, reversed_values(k.values).conjugate()); }

Kernel conjugated(const Kernel& k) { return Kernel(k.grid, k.values.conjugate()); }

Kernel delta_kernel(const TimeGrid& g) {
    Kernel k(g);
    k[g.origin()] = 1.0 / g.dt;
    return k;
}

SampledSignal spike(const TimeGrid& g, double t, cd weight) {
    SampledSignal s(g);
    s[g.index_of(t)] = weight / g.dt;
    return s;
}

}  // namespace oscresp
