#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "oscresp/fock.hpp"

using namespace oscresp;
using namespace oscresp::fock;
using oracle::I;

namespace {

const OscillatorParams unit{1.0, 1.0, 1.0};
const OscillatorParams skewed{0.7, 1.9, 0.4};

cd average(const FockState& s, std::vector<Factor> factors, Ordering o, const OscillatorParams& p = unit) {
    return ordered_average(s, OrderedProductSpec{std::move(factors), o, std::nullopt}, p);
}

Factor q(double t, Branch b = Branch::none) { return Factor{Observable::q, t, b}; }

}  // namespace

TEST_CASE("ladder operators") {
    const auto l2 = ladder(2);
    CHECK(l2.a(0, 1) == cd{1.0, 0.0});
    CHECK(l2.a.cwiseAbs().sum() == 1.0);
    const auto l = ladder(10);
    const Operator comm = l.a * l.adag - l.adag * l.a;
    CHECK((comm.topLeftCorner(9, 9) - Operator::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(comm(9, 9) - cd{-9.0, 0.0}) < 1e-14);
    CHECK((l.adag - l.a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(ladder(1), std::invalid_argument);
}

TEST_CASE("heisenberg operators") {
    const auto qt = heisenberg_q(skewed, 0.8, 12);
    CHECK((qt - qt.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const auto pt = heisenberg_p(skewed, 0.8, 12);
    CHECK((pt - pt.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    // p = m dq/dt
    auto qf = [&](double t) -> Operator { return heisenberg_q(skewed, t, 12); };
    const Operator fd = skewed.mass * oracle::derivative(qf, 0.8, 1e-3);
    CHECK((fd - pt).cwiseAbs().maxCoeff() < 1e-9);
    // Equal-time canonical commutator on the leading block.
    const Operator c = qt * pt - pt * qt;
    CHECK((c.topLeftCorner(11, 11) - I * skewed.hbar * Operator::Identity(11, 11)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("state construction") {
    for (const auto& spec : {StateSpec::vacuum(), StateSpec::coherent({0.8, -0.4}), StateSpec::number(3),
                             StateSpec::thermal(0.5)}) {
        const auto s = make_state(spec, 40);
        CHECK_NOTHROW(s.validate());
        CHECK(s.truncation_deficit <= 1e-10);
    }
    const auto l = ladder(40);
    const auto coh = make_state(StateSpec::coherent({0.8, -0.4}), 40);
    CHECK(std::abs((coh.rho * l.a).trace() - cd{0.8, -0.4}) < 1e-12);
    const auto th = make_state(StateSpec::thermal(0.5), 60);
    const auto big = ladder(60);
    CHECK(std::abs((th.rho * big.adag * big.a).trace() - 0.5) < 1e-9);
    const auto n3 = make_state(StateSpec::number(3), 10);
    CHECK(n3.rho(3, 3) == cd{1.0, 0.0});

    CHECK_THROWS_AS(make_state(StateSpec::coherent({3.0, 0.0}), 12), std::invalid_argument);
    CHECK_THROWS_AS(make_state(StateSpec::number(10), 10), std::invalid_argument);
    CHECK_THROWS_AS(make_state(StateSpec::thermal(5.0), 20), std::invalid_argument);
    CHECK(StateSpec::number(2).describe() == "fock(2)");
}

TEST_CASE("density-matrix validation") {
    FockState s{Operator::Identity(3, 3), 0.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.rho /= 3.0;
    CHECK_NOTHROW(s.validate());
    s.rho(0, 1) = cd{0.0, 0.1};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("orderings of two q factors in vacuum") {
    const auto vac = make_state(StateSpec::vacuum(), 20);
    const double q0sq = unit.q0() * unit.q0();
    const double t = 0.4;
    const double tp = -1.1;
    CHECK(std::abs(average(vac, {q(t), q(tp)}, Ordering::normal)) < 1e-15);
    const cd plain = average(vac, {q(t), q(tp)}, Ordering::plain);
    CHECK(std::abs(plain - 0.5 * q0sq * std::exp(-I * (t - tp))) < 1e-15);
    CHECK(std::abs(average(vac, {q(t), q(tp)}, Ordering::antinormal) - q0sq * std::cos(t - tp)) < 1e-15);
    CHECK(std::abs(average(vac, {q(t), q(tp)}, Ordering::weyl) - 0.5 * q0sq * std::cos(t - tp)) < 1e-15);
    // T+ puts the later time on the left, T- on the right.
    CHECK(std::abs(average(vac, {q(tp, Branch::plus), q(t, Branch::plus)}, Ordering::double_time) - plain) < 1e-15);
    CHECK(std::abs(average(vac, {q(t, Branch::minus), q(tp, Branch::minus)}, Ordering::double_time) - std::conj(plain)) <
          1e-15);
    // A minus factor always stands to the left of a plus factor.
    CHECK(std::abs(average(vac, {q(tp, Branch::plus), q(t, Branch::minus)}, Ordering::double_time) - plain) < 1e-15);
}

TEST_CASE("branch labels") {
    const auto vac = make_state(StateSpec::vacuum(), 10);
    CHECK_THROWS_AS(average(vac, {q(0.0), q(1.0)}, Ordering::double_time), std::invalid_argument);
    CHECK_THROWS_AS(average(vac, {q(0.0, Branch::plus)}, Ordering::plain), std::invalid_argument);
    CHECK_THROWS_AS(average(vac, std::vector<Factor>(9, q(0.0)), Ordering::plain), std::invalid_argument);
    CHECK(average(vac, {}, Ordering::plain) == cd{1.0, 0.0});
}

TEST_CASE("number and coherent state moments") {
    const double q0sq = skewed.q0() * skewed.q0();
    for (std::size_t n : {0u, 1u, 4u}) {
        const auto s = make_state(StateSpec::number(n), 20);
        CHECK(std::abs(average(s, {q(0.3), q(0.3)}, Ordering::plain, skewed) - q0sq * (static_cast<double>(n) + 0.5)) <
              1e-13);
        CHECK(std::abs(average(s, {q(0.3), q(0.3)}, Ordering::normal, skewed) - q0sq * static_cast<double>(n)) < 1e-13);
    }
    const cd alpha{0.6, 0.2};
    const auto coh = make_state(StateSpec::coherent(alpha), 40);
    const double t = 1.7;
    const double mean = std::sqrt(2.0) * skewed.q0() * (alpha * std::exp(-I * (skewed.omega0 * t))).real();
    CHECK(std::abs(average(coh, {q(t)}, Ordering::plain, skewed) - mean) < 1e-12);
    CHECK(std::abs(average(coh, {q(t), q(t)}, Ordering::normal, skewed) - mean * mean) < 1e-12);
    CHECK(std::abs(average(coh, {q(t), q(t)}, Ordering::weyl, skewed) - mean * mean - 0.5 * q0sq) < 1e-12);
}

TEST_CASE("shifted factors") {
    const TimeGrid g = make_grid(16, 0.25);
    SampledSignal shift(g);
    for (std::size_t k = 0; k < g.n; ++k) shift[k] = 0.1 * static_cast<double>(k);
    const auto vac = make_state(StateSpec::vacuum(), 20);
    const double t = g.time(10);
    const double tp = g.time(3);
    const cd bare = ordered_average(vac, {{q(t), q(tp)}, Ordering::plain, std::nullopt}, unit);
    const cd shifted = ordered_average(vac, {{q(t), q(tp)}, Ordering::plain, shift}, unit);
    CHECK(std::abs(shifted - bare - shift[10] * shift[3]) < 1e-14);
    for (auto o : {Ordering::normal, Ordering::weyl, Ordering::antinormal}) {
        const cd b = ordered_average(vac, {{q(t), q(tp)}, o, std::nullopt}, unit);
        const cd s = ordered_average(vac, {{q(t), q(tp)}, o, shift}, unit);
        CHECK(std::abs(s - b - shift[10] * shift[3]) < 1e-14);
    }
    CHECK_THROWS_AS(ordered_average(vac, {{q(0.1)}, Ordering::plain, shift}, unit), std::invalid_argument);
}

TEST_CASE("normal exponential average") {
    const auto vac = make_state(StateSpec::vacuum(), 20);
    CHECK(normal_exponential_average(vac, {0.3, 0.1}, {0.2, -0.4}, 6) == cd{1.0, 0.0});
    const cd alpha{0.5, -0.3};
    const auto coh = make_state(StateSpec::coherent(alpha), 40);
    const cd cc{0.02, 0.01};
    const cd ca{-0.03, 0.02};
    const cd exact = std::exp(cc * std::conj(alpha) + ca * alpha);
    CHECK(std::abs(normal_exponential_average(coh, cc, ca, 6) - exact) < 1e-12);
    const auto one = make_state(StateSpec::number(1), 10);
    CHECK(std::abs(normal_exponential_average(one, cc, ca, 4) - (1.0 + cc * ca)) < 1e-15);
}

TEST_CASE("characteristic Taylor series in vacuum") {
    const auto vac = make_state(StateSpec::vacuum(), 30);
    const double q0sq = unit.q0() * unit.q0();
    const std::vector<Spike> plus{{0.5, {0.2, 0.0}}};
    const std::vector<Spike> none;
    // <exp(-i y q)> = exp(-y^2 <q^2>/2) with <q^2> = q0^2/2.
    const cd phi = characteristic_taylor(vac, none, plus, unit, 6);
    CHECK(std::abs(phi - std::exp(-0.04 * q0sq / 4.0)) < 1e-9);
    // Identical probes on both branches cancel.
    const cd same = characteristic_taylor(vac, plus, plus, unit, 6);
    CHECK(std::abs(same - 1.0) < 1e-8);
    CHECK_THROWS_AS(characteristic_taylor(vac, none, plus, unit, 7), std::invalid_argument);
}

TEST_CASE("reality of the characteristic functional") {
    const auto th = make_state(StateSpec::thermal(0.3), 40);
    const std::vector<Spike> plus{{0.1, {0.2, 0.1}}, {0.9, {-0.1, 0.05}}};
    const std::vector<Spike> minus{{0.4, {0.15, -0.1}}};
    CHECK(reality_check(th, plus, minus, unit, 4).residual < 1e-12);
}
