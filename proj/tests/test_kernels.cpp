#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "oscresp/kernels.hpp"

using namespace oscresp;
using oracle::I;

namespace {

const OscillatorParams unit{1.0, 1.0, 1.0};
const OscillatorParams skewed{0.7, 1.9, 0.4};

double lag_time(const TimeGrid& g, std::size_t k) { return static_cast<double>(g.lag_of(k)) * g.dt; }

double family_diff(const KernelFamily& a, const KernelFamily& b) {
    double worst = 0.0;
    for (std::size_t s = 0; s < a.sites(); ++s) {
        for (std::size_t t = 0; t < a.sites(); ++t) worst = std::max(worst, max_abs_diff(a.between(s, t), b.between(s, t)));
    }
    return worst;
}

}  // namespace

TEST_CASE("oscillator parameters") {
    const auto p = make_params(2.0, 0.5, 0.3);
    CHECK(p.q0() == doctest::Approx(std::sqrt(0.3)));
    CHECK(p.p0() == doctest::Approx(std::sqrt(0.3)));
    CHECK(p.q0() * p.p0() == doctest::Approx(p.hbar));
    CHECK_THROWS_AS(make_params(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("closed forms") {
    for (double tau : {-2.3, -0.4, 0.0, 0.7, 3.1}) {
        for (const auto& p : {unit, skewed}) {
            CHECK(osc_retarded(p, tau) == doctest::Approx(oracle::retarded(p, tau)).epsilon(1e-15));
            CHECK(std::abs(osc_contraction(p, tau) - oracle::contraction(p, tau)) < 1e-15);
            CHECK(std::abs(osc_feynman(p, tau) - oracle::feynman(p, tau)) < 1e-15);
        }
    }
    // D_R(t) = -sin(t) theta(t) for m = w0 = 1.
    CHECK(osc_retarded(unit, 1.0) == doctest::Approx(-std::sin(1.0)));
    CHECK(osc_retarded(unit, -1.0) == 0.0);
    CHECK(std::abs(osc_contraction(unit, 0.0) - cd{0.0, -0.5}) < 1e-16);
}

TEST_CASE("commensurate grid check") {
    CHECK(is_commensurate(commensurate_grid(256, 1.0, 8), 1.0));
    CHECK_FALSE(is_commensurate(make_grid(256, 0.02), 1.0));
    CHECK_THROWS_AS(osc_kernels(unit, make_grid(256, 0.02)), std::invalid_argument);
    CHECK_NOTHROW(osc_kernels(unit, make_grid(256, 0.02), GridMode::loose));
}

TEST_CASE("sampled kernels agree with closed forms at every lag") {
    const TimeGrid g = commensurate_grid(128, skewed.omega0, 6);
    const auto k = osc_kernels(skewed, g);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double tau = lag_time(g, i);
        CHECK(std::abs(k.retarded[i] - oracle::retarded(skewed, tau)) < 1e-14);
        CHECK(std::abs(k.contraction[i] - oracle::contraction(skewed, tau)) < 1e-14);
        CHECK(std::abs(k.feynman[i] - oracle::feynman(skewed, tau)) < 1e-14);
    }
}

TEST_CASE("kernel identities on a commensurate grid") {
    for (const auto& p : {unit, skewed}) {
        const TimeGrid g = commensurate_grid(256, p.omega0, 8);
        const auto k = osc_kernels(p, g);
        CHECK(max_abs_diff(retarded_from_contractions(k.feynman, k.contraction), k.retarded) <= 1e-10);
        CHECK(max_abs_diff(k.contraction - time_reversed(k.contraction), k.retarded - time_reversed(k.retarded)) <= 1e-10);
        CHECK(max_abs_diff(contraction_from_retarded(k.retarded), k.contraction) <= 1e-10);
        CHECK(max_abs_diff(feynman_from_retarded(k.retarded), k.feynman) <= 1e-10);
        CHECK(max_abs_diff(feynman_conjugate_from_retarded(k.retarded), conjugated(k.feynman)) <= 1e-10);
    }
}

TEST_CASE("commutator kernel and qp commutator") {
    const TimeGrid g = commensurate_grid(64, 1.0, 4);
    const auto k = osc_kernels(unit, g);
    const Kernel c = commutator_kernel(k.retarded, 2.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double tau = lag_time(g, i);
        // i hbar [D_R(t) - D_R(-t)] = -i hbar sin(tau) for m = w0 = 1.
        CHECK(std::abs(c[i] - cd{0.0, -2.0 * std::sin(tau)}) < 1e-14);
    }
    const Kernel qp = qp_commutator_kernel(skewed, commensurate_grid(64, skewed.omega0, 4));
    CHECK(std::abs(qp[32] - I * skewed.hbar) < 1e-15);
    CHECK(std::abs(qp_commutator(skewed, 0.3) - I * skewed.hbar * std::cos(skewed.omega0 * 0.3)) < 1e-15);

    // m d/dt' [D_R(t - t') - D_R(t' - t)] by finite differences.
    const double t = 0.9;
    const double tp = 0.2;
    auto comm = [&](double s) { return osc_retarded(skewed, t - s) - osc_retarded(skewed, s - t); };
    const cd fd = I * skewed.hbar * skewed.mass * oracle::derivative(comm, tp, 1e-3);
    CHECK(std::abs(fd - qp_commutator(skewed, t - tp)) < 1e-10);
}

TEST_CASE("neutral field kernels") {
    const TimeGrid g = commensurate_grid(128, 1.0, 4);
    const double f = 1.0 / 4.0;
    ModeSet ms{2, 1, {}};
    ms.modes.push_back({3 * f, (Eigen::MatrixXcd(2, 1) << cd{0.4, 0.1}, cd{-0.2, 0.3}).finished()});
    ms.modes.push_back({7 * f, (Eigen::MatrixXcd(2, 1) << cd{0.1, -0.5}, cd{0.6, 0.0}).finished()});
    const auto k = neutral_field_kernels(ms, g);
    CHECK(k.contraction.sites() == 2);

    // D_{ss'}(tau) = -i sum exp(-i w tau) Q_s conj(Q_s').
    for (std::size_t i = 0; i < g.n; i += 7) {
        const double tau = lag_time(g, i);
        cd want{0.0, 0.0};
        for (const auto& m : ms.modes) want += -I * std::exp(-I * (m.omega * tau)) * m.amplitude(0, 0) * std::conj(m.amplitude(1, 0));
        CHECK(std::abs(k.contraction.between(0, 1)[i] - want) < 1e-14);
    }
    CHECK(family_diff(field_retarded_from_contractions(k.feynman, k.contraction), k.retarded) < 1e-10);
    CHECK(family_diff(field_contraction_from_retarded(k.retarded), k.contraction) < 1e-10);
    CHECK(family_diff(field_feynman_from_retarded(k.retarded), k.feynman) < 1e-10);

    ModeSet bad{2, 2, {{1.0, Eigen::MatrixXcd::Zero(2, 1)}}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    ModeSet off{1, 1, {{1.1, Eigen::MatrixXcd::Ones(1, 1)}}};
    CHECK_THROWS_AS(neutral_field_kernels(off, g), std::invalid_argument);
}

TEST_CASE("charged field kernels") {
    const TimeGrid g = commensurate_grid(128, 1.0, 4);
    const double f = 1.0 / 4.0;
    const ChargedModeSet ms{{{3 * f, 0.7}, {5 * f, 0.4}}, {{2 * f, 0.9}}};
    const auto k = charged_field_kernels(ms, g);
    CHECK(max_abs_diff(kernel_adjoint(k.particle), cd{-1.0, 0.0} * k.particle) < 1e-14);
    CHECK(max_abs_diff(kernel_adjoint(k.antiparticle), cd{-1.0, 0.0} * k.antiparticle) < 1e-14);
    CHECK(max_abs_diff(k.feynman_adjoint, kernel_adjoint(k.feynman)) < 1e-14);
    CHECK(max_abs_diff(k.retarded, charged_retarded_via_adjoint(k)) < 1e-12);
    const auto rec = charged_from_retarded(k.retarded);
    CHECK(max_abs_diff(rec.particle, k.particle) < 1e-10);
    CHECK(max_abs_diff(rec.antiparticle, k.antiparticle) < 1e-10);
    CHECK(max_abs_diff(rec.feynman, k.feynman) < 1e-10);
    CHECK(max_abs_diff(rec.feynman_adjoint, k.feynman_adjoint) < 1e-10);
    // Retarded: zero for tau < 0.
    for (std::size_t i = 1; i < g.n / 2; ++i) CHECK(std::abs(k.retarded[i]) < 1e-14);
}
