// fock.cpp - truncated number-basis operator algebra used as the brute-force oracle

#include "oscresp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace oscresp::fock {

namespace {

constexpr cd I{0.0, 1.0};

// A factor written as ann * a + cre * adag + shift * 1.
struct LinearForm {
    cd ann;
    cd cre;
    cd shift;
};

LinearForm linear_form(const Factor& f, const OscillatorParams& p, const std::optional<SampledSignal>& shift) {
    const cd down = std::exp(-I * (p.omega0 * f.time));
    const cd up = std::exp(I * (p.omega0 * f.time));
    LinearForm out{};
    if (f.observable == Observable::q) {
        const double scale = p.q0() / std::sqrt(2.0);
        out.ann = scale * down;
        out.cre = scale * up;
        if (shift) out.shift = (*shift)[shift->grid.index_of(f.time)];
    } else {
        // p = m dq/dt
        const cd scale = -I * p.p0() / std::sqrt(2.0);
        out.ann = scale * down;
        out.cre = -scale * up;
    }
    return out;
}

Operator as_matrix(const LinearForm& f, const Ladder& l) {
    const auto dim = l.a.rows();
    return f.ann * l.a + f.cre * l.adag + f.shift * Operator::Identity(dim, dim);
}

cd trace_with(const FockState& s, const Operator& o) { return (s.rho * o).trace(); }

// Sum over all orderings of the factors, by dynamic programming over subsets:
// sum(T) = sum_{i in T} F_i * sum(T \ {i}).
Operator symmetrized_sum(const std::vector<Operator>& factors) {
    const std::size_t m = factors.size();
    const auto dim = factors.front().rows();
    std::vector<Operator> table(std::size_t{1} << m);
    table[0] = Operator::Identity(dim, dim);
    for (std::size_t mask = 1; mask < table.size(); ++mask) {
        Operator acc = Operator::Zero(dim, dim);
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (std::size_t{1} << i)) acc.noalias() += factors[i] * table[mask & ~(std::size_t{1} << i)];
        }
        table[mask] = std::move(acc);
    }
    return table.back();
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

// moments[k][l] = Tr[rho adag^k a^l] (normal) or Tr[rho a^l adag^k] (antinormal).
std::vector<std::vector<cd>> moment_table(const FockState& s, const Ladder& l, std::size_t max_power, bool normal) {
    const auto dim = l.a.rows();
    std::vector<Operator> apow{Operator::Identity(dim, dim)};
    std::vector<Operator> cpow{Operator::Identity(dim, dim)};
    for (std::size_t k = 1; k <= max_power; ++k) {
        apow.push_back(l.a * apow.back());
        cpow.push_back(l.adag * cpow.back());
    }
    std::vector<std::vector<cd>> table(max_power + 1, std::vector<cd>(max_power + 1));
    for (std::size_t k = 0; k <= max_power; ++k) {
        for (std::size_t j = 0; j + k <= max_power; ++j) {
            table[k][j] = normal ? trace_with(s, cpow[k] * apow[j]) : trace_with(s, apow[j] * cpow[k]);
        }
    }
    return table;
}

cd split_average(const FockState& s, const Ladder& l, const std::vector<LinearForm>& forms, bool normal) {
    const std::size_t m = forms.size();
    const auto table = moment_table(s, l, m, normal);
    // Expand the product over the three parts of every factor.
    cd total{0.0, 0.0};
    std::vector<int> choice(m, 0);
    while (true) {
        cd coeff{1.0, 0.0};
        std::size_t creators = 0;
        std::size_t annihilators = 0;
        for (std::size_t i = 0; i < m && coeff != cd{0.0, 0.0}; ++i) {
            switch (choice[i]) {
                case 0: coeff *= forms[i].ann; ++annihilators; break;
                case 1: coeff *= forms[i].cre; ++creators; break;
                default: coeff *= forms[i].shift; break;
            }
        }
        if (coeff != cd{0.0, 0.0}) total += coeff * table[creators][annihilators];
        std::size_t pos = 0;
        while (pos < m && ++choice[pos] == 3) choice[pos++] = 0;
        if (pos == m) break;
    }
    return total;
}

}  // namespace

Ladder ladder(std::size_t dim) {
    if (dim < 2) throw std::invalid_argument("Fock truncation dimension must be >= 2");
    const auto d = static_cast<Eigen::Index>(dim);
    Operator a = Operator::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Operator adag = a.adjoint();
    return {std::move(a), std::move(adag)};
}

Operator heisenberg_q(const OscillatorParams& p, double t, std::size_t dim) {
    const auto l = ladder(dim);
    return as_matrix(linear_form(Factor{Observable::q, t, Branch::none}, p, std::nullopt), l);
}

Operator heisenberg_p(const OscillatorParams& p, double t, std::size_t dim) {
    const auto l = ladder(dim);
    return as_matrix(linear_form(Factor{Observable::p, t, Branch::none}, p, std::nullopt), l);
}

std::string StateSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case StateKind::vacuum: os << "vacuum"; break;
        case StateKind::coherent: os << "coherent(" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i)"; break;
        case StateKind::number: os << "fock(" << quanta << ")"; break;
        case StateKind::thermal: os << "thermal(" << mean_occupation << ")"; break;
    }
    return os.str();
}

void FockState::validate() const {
    if (rho.rows() != rho.cols() || rho.rows() < 2) throw std::invalid_argument("density matrix must be square, dim >= 2");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - cd{1.0, 0.0}) > 1e-10) throw std::invalid_argument("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Operator> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("density matrix has negative eigenvalues");
}

FockState make_state(const StateSpec& spec, std::size_t dim) {
    if (dim < 2) throw std::invalid_argument("Fock truncation dimension must be >= 2");
    const auto d = static_cast<Eigen::Index>(dim);
    FockState state{Operator::Zero(d, d), 0.0};

    switch (spec.kind) {
        case StateKind::vacuum:
            state.rho(0, 0) = 1.0;
            break;
        case StateKind::number:
            if (spec.quanta >= dim) throw std::invalid_argument("number state does not fit the truncation");
            state.rho(static_cast<Eigen::Index>(spec.quanta), static_cast<Eigen::Index>(spec.quanta)) = 1.0;
            break;
        case StateKind::coherent: {
            const double n2 = std::norm(spec.alpha);
            if (static_cast<double>(dim) < n2 + 10.0 * std::sqrt(n2 + 1.0)) {
                throw std::invalid_argument("truncation too small for coherent state " + spec.describe());
            }
            Eigen::VectorXcd c(d);
            c(0) = std::exp(-n2 / 2.0);
            for (Eigen::Index n = 1; n < d; ++n) c(n) = c(n - 1) * spec.alpha / std::sqrt(static_cast<double>(n));
            state.truncation_deficit = std::max(0.0, 1.0 - c.squaredNorm());
            c /= c.norm();
            state.rho = c * c.adjoint();
            break;
        }
        case StateKind::thermal: {
            const double nbar = spec.mean_occupation;
            if (!(nbar >= 0.0)) throw std::invalid_argument("thermal occupation must be non-negative");
            const double ratio = nbar / (1.0 + nbar);
            state.truncation_deficit = std::pow(ratio, static_cast<double>(dim));
            double p = 1.0 / (1.0 + nbar);
            double total = 0.0;
            for (Eigen::Index n = 0; n < d; ++n, p *= ratio) {
                state.rho(n, n) = p;
                total += p;
            }
            state.rho /= total;
            break;
        }
    }
    if (state.truncation_deficit > 1e-10) {
        throw std::invalid_argument("truncated norm deficit " + std::to_string(state.truncation_deficit) +
                                    " exceeds 1e-10 for " + spec.describe());
    }
    return state;
}

std::vector<Factor> q_factors(std::span<const double> times, Branch branch) {
    std::vector<Factor> out;
    for (double t : times) out.push_back(Factor{Observable::q, t, branch});
    return out;
}

cd ordered_average(const FockState& state, const OrderedProductSpec& spec, const OscillatorParams& p) {
    const std::size_t m = spec.factors.size();
    if (m > max_factors) throw std::invalid_argument("ordered_average supports at most 8 factors");
    const bool needs_branch = spec.ordering == Ordering::double_time;
    for (const auto& f : spec.factors) {
        if (needs_branch && f.branch == Branch::none) {
            throw std::invalid_argument("double-time ordering needs a branch on every factor");
        }
        if (!needs_branch && f.branch != Branch::none) {
            throw std::invalid_argument("branch labels are only meaningful for double-time ordering");
        }
    }
    if (m == 0) return state.rho.trace();

    const auto l = ladder(state.dim());
    std::vector<LinearForm> forms;
    forms.reserve(m);
    for (const auto& f : spec.factors) forms.push_back(linear_form(f, p, spec.shift));

    switch (spec.ordering) {
        case Ordering::plain: {
            Operator prod = as_matrix(forms[0], l);
            for (std::size_t i = 1; i < m; ++i) prod = prod * as_matrix(forms[i], l);
            return trace_with(state, prod);
        }
        case Ordering::double_time: {
            std::vector<std::size_t> minus;
            std::vector<std::size_t> plus;
            for (std::size_t i = 0; i < m; ++i) (spec.factors[i].branch == Branch::minus ? minus : plus).push_back(i);
            auto time = [&](std::size_t i) { return spec.factors[i].time; };
            std::stable_sort(minus.begin(), minus.end(), [&](auto x, auto y) { return time(x) < time(y); });
            std::stable_sort(plus.begin(), plus.end(), [&](auto x, auto y) { return time(x) > time(y); });
            const auto dim = static_cast<Eigen::Index>(state.dim());
            Operator prod = Operator::Identity(dim, dim);
            for (auto i : minus) prod = prod * as_matrix(forms[i], l);
            for (auto i : plus) prod = prod * as_matrix(forms[i], l);
            return trace_with(state, prod);
        }
        case Ordering::normal:
            return split_average(state, l, forms, true);
        case Ordering::antinormal:
            return split_average(state, l, forms, false);
        case Ordering::weyl: {
            std::vector<Operator> mats;
            for (const auto& f : forms) mats.push_back(as_matrix(f, l));
            return trace_with(state, symmetrized_sum(mats)) / factorial(m);
        }
    }
    throw std::logic_error("unhandled ordering");
}

cd normal_exponential_average(const FockState& state, cd c_create, cd c_annihilate, int order) {
    if (order < 0) throw std::invalid_argument("expansion order must be non-negative");
    const auto l = ladder(state.dim());
    const auto table = moment_table(state, l, static_cast<std::size_t>(order), true);
    cd total{0.0, 0.0};
    for (int k = 0; k <= order; ++k) {
        for (int j = 0; j + k <= order; ++j) {
            total += std::pow(c_create, k) * std::pow(c_annihilate, j) * table[k][j] /
                     (factorial(static_cast<std::size_t>(k)) * factorial(static_cast<std::size_t>(j)));
        }
    }
    return total;
}

namespace {

// Calls visit(counts) for every vector of non-negative counts with sum <= budget.
template <class Visit>
void for_each_count_vector(std::size_t slots, int budget, Visit&& visit) {
    std::vector<int> counts(slots, 0);
    auto recurse = [&](auto&& self, std::size_t slot, int left) -> void {
        if (slot == slots) {
            visit(counts);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            counts[slot] = c;
            self(self, slot + 1, left - c);
        }
        counts[slot] = 0;
    };
    recurse(recurse, 0, budget);
}

}  // namespace

cd characteristic_taylor(const FockState& state, std::span<const Spike> eta_minus, std::span<const Spike> eta_plus,
                         const OscillatorParams& p, int order) {
    if (order < 0 || order > 6) throw std::invalid_argument("Taylor order must be in [0, 6]");
    const std::size_t slots = eta_minus.size() + eta_plus.size();
    cd total{0.0, 0.0};
    for_each_count_vector(slots, order, [&](const std::vector<int>& counts) {
        OrderedProductSpec spec;
        spec.ordering = Ordering::double_time;
        cd coeff{1.0, 0.0};
        for (std::size_t s = 0; s < slots; ++s) {
            const bool minus = s < eta_minus.size();
            const Spike& sp = minus ? eta_minus[s] : eta_plus[s - eta_minus.size()];
            const cd unit = minus ? I * sp.weight : -I * sp.weight;
            coeff *= std::pow(unit, counts[s]) / factorial(static_cast<std::size_t>(counts[s]));
            for (int c = 0; c < counts[s]; ++c) {
                spec.factors.push_back(Factor{Observable::q, sp.time, minus ? Branch::minus : Branch::plus});
            }
        }
        if (coeff == cd{0.0, 0.0}) return;
        total += coeff * ordered_average(state, spec, p);
    });
    return total;
}

RealityCheck reality_check(const FockState& state, std::span<const Spike> eta_plus, std::span<const Spike> eta_minus,
                           const OscillatorParams& p, int order) {
    auto conjugate_all = [](std::span<const Spike> in) {
        std::vector<Spike> out(in.begin(), in.end());
        for (auto& s : out) s.weight = std::conj(s.weight);
        return out;
    };
    const cd phi = characteristic_taylor(state, eta_minus, eta_plus, p, order);
    const auto new_minus = conjugate_all(eta_plus);
    const auto new_plus = conjugate_all(eta_minus);
    const cd mirrored = characteristic_taylor(state, new_minus, new_plus, p, order);
    return RealityCheck{phi, mirrored, std::abs(std::conj(phi) - mirrored)};
}

}  // namespace oscresp::fock
