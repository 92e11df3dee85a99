#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "oscresp/spectral.hpp"

using namespace oscresp;
using oracle::I;

namespace {

Eigen::VectorXcd random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (auto& x : v) {
        const double re = normal(rng);
        x = cd{re, normal(rng)};
    }
    return v;
}

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction") {
    const TimeGrid g = make_grid(8, 0.5);
    CHECK(g.t0 == -2.0);
    CHECK(g.time(4) == 0.0);
    CHECK(g.origin() == 4);
    CHECK(g.period() == 4.0);
    CHECK(g.lag_index(0) == 4);
    CHECK(g.lag_index(-4) == 0);
    CHECK(g.lag_index(4) == 0);
    CHECK(g.lag_index(5) == 1);
    CHECK(g.lag_of(0) == -4);
    CHECK(g.index_of(1.5) == 7);
    CHECK_THROWS_AS(g.index_of(0.25), std::invalid_argument);
    CHECK_THROWS_AS(g.index_of(2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(7, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, -1.0), std::invalid_argument);
}

TEST_CASE("commensurate grid puts omega on the requested bin") {
    const TimeGrid g = commensurate_grid(256, 1.0, 8);
    CHECK(g.n == 256);
    CHECK(1.0 * g.period() / (2.0 * std::numbers::pi) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(commensurate_grid(256, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(commensurate_grid(256, 1.0, 128), std::invalid_argument);
    CHECK_THROWS_AS(commensurate_grid(256, -1.0, 8), std::invalid_argument);
}

TEST_CASE("step at lag is 1/2 at zero and at the antipodal lag") {
    const TimeGrid g = make_grid(16, 0.1);
    CHECK(step_at_lag(g, g.lag_index(0)) == 0.5);
    CHECK(step_at_lag(g, g.lag_index(-8)) == 0.5);
    CHECK(step_at_lag(g, g.lag_index(3)) == 1.0);
    CHECK(step_at_lag(g, g.lag_index(-3)) == 0.0);
    for (long k = -8; k < 8; ++k) CHECK(step_at_lag(g, g.lag_index(k)) + step_at_lag(g, g.lag_index(-k)) == 1.0);
}

TEST_CASE("series length must match the grid") {
    const TimeGrid g = make_grid(8, 0.1);
    CHECK_THROWS_AS(SampledSignal(g, Eigen::VectorXcd::Zero(7)), std::invalid_argument);
    CHECK_THROWS_AS(SampledSignal(g) + SampledSignal(make_grid(8, 0.2)), std::invalid_argument);
}

TEST_CASE("fft matches direct DFT") {
    const Eigen::VectorXcd v = random_vector(48, 1);
    CHECK(max_abs(detail::dft(v) - oracle::dft(v)) < 1e-12);
    CHECK(max_abs(detail::idft(detail::dft(v)) - v) < 1e-14);
}

TEST_CASE("frequency split matches direct bin masking") {
    const TimeGrid g = make_grid(64, 0.3);
    const SampledSignal s(g, random_vector(64, 2));
    const auto parts = frequency_split(s);
    CHECK(max_abs(parts.plus.values - oracle::positive_part(s.values)) < 1e-12);
    CHECK(max_abs_diff(parts.plus + parts.minus, s) < 1e-14);
}

TEST_CASE("split of exp(-i w t) and exp(+i w t)") {
    const TimeGrid g = commensurate_grid(64, 2.0, 5);
    SampledSignal pos(g);
    SampledSignal neg(g);
    for (std::size_t k = 0; k < g.n; ++k) {
        pos[k] = std::exp(-I * (2.0 * g.time(k)));
        neg[k] = std::exp(I * (2.0 * g.time(k)));
    }
    CHECK(max_abs_diff(frequency_plus(pos), pos) < 1e-14);
    CHECK(max_abs(frequency_minus(pos).values) < 1e-14);
    CHECK(max_abs_diff(frequency_minus(neg), neg) < 1e-14);
    CHECK(max_abs(frequency_plus(neg).values) < 1e-14);
}

TEST_CASE("constant signal splits half and half") {
    const TimeGrid g = make_grid(16, 0.1);
    const SampledSignal c(g, Eigen::VectorXcd::Constant(16, cd{3.0, 0.0}));
    CHECK(max_abs(frequency_plus(c).values - Eigen::VectorXcd::Constant(16, cd{1.5, 0.0})) < 1e-15);
    CHECK(zero_nyquist_fraction(c.values) == doctest::Approx(1.0));
}

TEST_CASE("circular convolution matches direct summation") {
    const TimeGrid g = make_grid(32, 0.2);
    const SampledSignal s(g, random_vector(32, 3));
    const Kernel k(g, random_vector(32, 4));
    CHECK(max_abs(circular_convolve(k, s).values - oracle::convolve(k, s)) < 1e-12);
}

TEST_CASE("delta kernel and spike") {
    const TimeGrid g = make_grid(32, 0.25);
    const SampledSignal s(g, random_vector(32, 5));
    CHECK(max_abs_diff(circular_convolve(delta_kernel(g), s), s) < 1e-14);
    const SampledSignal sp = spike(g, g.time(20), cd{2.0, 1.0});
    CHECK(sp[20] == cd{8.0, 4.0});
    CHECK(sp.values.sum() * g.dt == cd{2.0, 1.0});
    CHECK_THROWS_AS(spike(g, 0.1, 1.0), std::invalid_argument);

    // A spike at t' picks out k(t - t').
    const Kernel k(g, random_vector(32, 6));
    const SampledSignal picked = circular_convolve(k, spike(g, g.time(16)));
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(picked[i] - k[g.lag_index(static_cast<long>(i) - 16)]) < 1e-13);
}

TEST_CASE("reversal, adjoint and conjugation") {
    const TimeGrid g = make_grid(16, 0.1);
    const Kernel k(g, random_vector(16, 7));
    const Kernel r = time_reversed(k);
    for (long lag = -7; lag < 8; ++lag) CHECK(r[g.lag_index(lag)] == k[g.lag_index(-lag)]);
    CHECK(r[0] == k[0]);
    const Kernel a = kernel_adjoint(k);
    for (long lag = -8; lag < 8; ++lag) CHECK(a[g.lag_index(lag)] == std::conj(k[g.lag_index(-lag)]));
    CHECK(max_abs_diff(time_reversed(time_reversed(k)), k) == 0.0);
    CHECK(max_abs_diff(conjugated(conjugated(k)), k) == 0.0);
}
