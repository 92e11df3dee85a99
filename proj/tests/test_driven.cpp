#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "oscresp/driven.hpp"

using namespace oscresp;

namespace {

const OscillatorParams unit{1.0, 1.0, 1.0};

DriveScenario scenario(const CurrentProfile& c, const TimeGrid& g, const OscillatorParams& p = unit,
                       const fock::StateSpec& s = fock::StateSpec::vacuum()) {
    return make_scenario(p, g, c, s);
}

}  // namespace

TEST_CASE("current parsing and sampling") {
    const auto step = parse_current("step:1.5", 1.0);
    CHECK(step.shape == CurrentShape::step);
    CHECK(step.amplitude == 1.5);
    const auto sine = parse_current("sine:0.5:2.0", 1.0);
    CHECK(sine.omega == 2.0);
    CHECK(parse_current("sine:0.5", 3.0).omega == 3.0);
    CHECK(parse_current("zero", 1.0).shape == CurrentShape::zero);
    CHECK(parse_current("spike:2", 1.0).shape == CurrentShape::spike);
    CHECK_THROWS_AS(parse_current("ramp:1", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_current("step:x", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_current("step", 1.0), std::invalid_argument);

    const TimeGrid g = make_grid(16, 0.5);
    const auto j = step.sample(g);
    CHECK(j[7] == 0.0);
    CHECK(j[8] == 0.75);
    CHECK(j[9] == 1.5);
    CHECK(step.value(0.0) == 1.5);
    CHECK(step.value(-0.1) == 0.0);
    const auto imp = CurrentProfile{CurrentShape::spike, 2.0, 1.0, 1.0}.sample(g);
    CHECK(imp[10] == 4.0);
    CHECK(imp.values.sum() == cd{4.0, 0.0});
}

TEST_CASE("scenario validation") {
    const TimeGrid g = make_grid(64, 0.1);
    CHECK_THROWS_AS(scenario({CurrentShape::step, 1.0, -0.5, 1.0}, g), std::invalid_argument);
    DriveScenario sc = scenario({CurrentShape::step, 1.0, 0.0, 1.0}, g);
    sc.current[3] = 1.0;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc.current[3] = 0.0;
    sc.current[40] = cd{1.0, 0.1};
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    const auto w = causal_window(scenario({CurrentShape::step, 1.0, 1.0, 1.0}, g));
    CHECK(w.first == 42);
    CHECK(w.last == 64);
}

TEST_CASE("zero current gives zero displacement") {
    const TimeGrid g = make_grid(128, 0.05);
    const auto sc = scenario({}, g);
    const auto k = osc_kernels(unit, g, GridMode::loose);
    CHECK(classical_displacement(sc, k.retarded).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ode_oscillator(sc).q.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("step response matches quadrature and closed form") {
    const TimeGrid g = make_grid(512, 0.01);
    const auto sc = scenario({CurrentShape::step, 1.0, 0.0, 1.0}, g);
    const auto k = osc_kernels(unit, g, GridMode::loose);
    const auto q = classical_displacement(sc, k.retarded);
    const auto w = causal_window(sc);
    for (std::size_t i = w.first; i < w.last; i += 17) {
        const double t = g.time(i);
        const long steps = static_cast<long>(i - w.first);
        const double trap = oracle::trapezoid([&](double s) { return -std::sin(t - s); }, 0.0, t, steps);
        CHECK(std::abs(q[i] - trap) < 1e-12);
        // Trapezoid error bound dt^2/12 * max|f''| * t.
        CHECK(std::abs(q[i].real() + (1.0 - std::cos(t))) <= g.dt * g.dt / 6.0 + 1e-15);
    }
}

TEST_CASE("spike current gives a scaled copy of the retarded kernel") {
    const TimeGrid g = make_grid(128, 0.05);
    const auto sc = scenario({CurrentShape::spike, 0.7, 0.5, 1.0}, g);
    const auto k = osc_kernels(unit, g, GridMode::loose);
    const auto q = classical_displacement(sc, k.retarded);
    const std::size_t on = g.index_of(0.5);
    for (std::size_t i = on; i < g.n; ++i) CHECK(std::abs(q[i] - 0.7 * k.retarded[g.lag_index(static_cast<long>(i - on))]) < 1e-14);
    const auto ode = ode_oscillator(sc);
    for (std::size_t i = on; i < g.n; i += 5) CHECK(std::abs(ode.q[i] - analytic_displacement(sc, g.time(i))) < 1e-8);
}

TEST_CASE("ode solver against closed forms") {
    const TimeGrid g = make_grid(2048, 0.005);
    const OscillatorParams p{1.3, 1.7, 1.0};
    for (const auto& c : {CurrentProfile{CurrentShape::step, 1.0, 0.0, p.omega0},
                          CurrentProfile{CurrentShape::sine, 0.8, 0.0, p.omega0},
                          CurrentProfile{CurrentShape::sine, 0.8, 0.0, 0.6}}) {
        const auto sc = scenario(c, g, p);
        const auto ode = ode_oscillator(sc);
        CHECK(ode.error_estimate < 1e-9);
        const auto w = causal_window(sc);
        double worst = 0.0;
        for (std::size_t i = w.first; i < w.last; ++i) worst = std::max(worst, std::abs(ode.q[i] - analytic_displacement(sc, g.time(i))));
        CHECK(worst <= 1e-8);
    }
    // Resonant growth: amplitude of q ~ t/(2 m w0^2) at late times.
    const auto res = scenario({CurrentShape::sine, 1.0, 0.0, 1.0}, g);
    const double t = 5.0;
    CHECK(analytic_displacement(res, t) == doctest::Approx(-(std::sin(t) - t * std::cos(t)) / 2.0));
    CHECK_THROWS_AS(ode_oscillator(scenario({CurrentShape::step, 1.0, 0.0, 1.0}, make_grid(64, 2.0))), std::runtime_error);
}

TEST_CASE("causality and linearity") {
    const TimeGrid g = make_grid(256, 0.02);
    const auto k = osc_kernels(unit, g, GridMode::loose);
    const auto sc = scenario({CurrentShape::sine, 1.0, 0.0, 0.8}, g);
    const auto q = classical_displacement(sc, k.retarded);
    auto late = sc;
    for (std::size_t i = 200; i < g.n; ++i) late.current[i] += 5.0;
    const auto ql = classical_displacement(late, k.retarded);
    for (std::size_t i = 128; i < 200; ++i) CHECK(std::abs(ql[i] - q[i]) <= 1e-14);
    CHECK(std::abs(ql[201] - q[201]) > 1e-6);
    CHECK(q.values.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("factorization of the driven functional") {
    const TimeGrid g = make_grid(256, 0.02);
    for (const auto& s : {fock::StateSpec::vacuum(), fock::StateSpec::coherent({0.5, 0.0})}) {
        const auto sc = scenario({CurrentShape::step, 1.0, 0.0, 1.0}, g, unit, s);
        const double times[] = {g.time(140), g.time(170), g.time(200)};
        const auto r = verify_driven_factorization(sc, times, 3);
        CHECK(r.orders.size() == 3);
        CHECK(r.max_residual <= 1e-9);
    }
    const auto zero = scenario({}, g);
    const double times[] = {g.time(130), g.time(150)};
    CHECK(verify_driven_factorization(zero, times, 2).max_residual <= 1e-10);
    const double outside[] = {g.time(20)};
    CHECK_THROWS_AS(verify_driven_factorization(zero, outside, 2), std::invalid_argument);
    CHECK_THROWS_AS(verify_driven_factorization(zero, times, 5), std::invalid_argument);
}

TEST_CASE("coherent first moment is q_in + q_j") {
    const TimeGrid g = make_grid(256, 0.02);
    const cd alpha{0.5, 0.0};
    const auto sc = scenario({CurrentShape::step, 1.0, 0.0, 1.0}, g, unit, fock::StateSpec::coherent(alpha));
    const auto k = osc_kernels(unit, g, GridMode::loose);
    const auto qj = classical_displacement(sc, k.retarded);
    const auto rho = fock::make_state(sc.state, 40);
    for (std::size_t i : {140u, 190u}) {
        const double t = g.time(i);
        const fock::OrderedProductSpec spec{{{fock::Observable::q, t, fock::Branch::none}}, fock::Ordering::plain, qj};
        const double qin = std::sqrt(2.0) * unit.q0() * 0.5 * std::cos(t);
        CHECK(std::abs(fock::ordered_average(rho, spec, unit) - (qin + qj[i])) < 1e-12);
    }
}
