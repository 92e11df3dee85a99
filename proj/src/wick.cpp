// wick.cpp - contraction combinatorics and the double-time Wick expansion

#include "oscresp/wick.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace oscresp::wick {

namespace {

constexpr cd I{0.0, 1.0};

void pair_up(std::vector<std::size_t>& open, std::size_t pos, Pairing& current, std::vector<Pairing>& out) {
    if (pos == open.size()) {
        Pairing p = current;
        std::sort(p.pairs.begin(), p.pairs.end());
        std::sort(p.rest.begin(), p.rest.end());
        out.push_back(std::move(p));
        return;
    }
    const std::size_t i = open[pos];
    if (i == static_cast<std::size_t>(-1)) {
        pair_up(open, pos + 1, current, out);
        return;
    }
    // i stays unpaired.
    current.rest.push_back(i);
    pair_up(open, pos + 1, current, out);
    current.rest.pop_back();
    // i pairs with a later open index.
    for (std::size_t q = pos + 1; q < open.size(); ++q) {
        const std::size_t j = open[q];
        if (j == static_cast<std::size_t>(-1)) continue;
        open[q] = static_cast<std::size_t>(-1);
        current.pairs.emplace_back(i, j);
        pair_up(open, pos + 1, current, out);
        current.pairs.pop_back();
        open[q] = j;
    }
}

void choose_pairs(std::vector<bool>& used, std::size_t left, std::vector<IndexPair>& chosen,
                  std::map<std::vector<IndexPair>, long>& counts) {
    if (left == 0) {
        auto key = chosen;
        std::sort(key.begin(), key.end());
        ++counts[key];
        return;
    }
    const std::size_t m = used.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (used[j]) continue;
            used[i] = used[j] = true;
            chosen.emplace_back(i, j);
            choose_pairs(used, left - 1, chosen, counts);
            chosen.pop_back();
            used[i] = used[j] = false;
        }
    }
}

}  // namespace

std::vector<Pairing> enumerate_pairings(std::size_t m) {
    if (m > max_pairing_factors) throw std::invalid_argument("pairing enumeration supports at most 10 factors");
    std::vector<std::size_t> open(m);
    for (std::size_t i = 0; i < m; ++i) open[i] = i;
    std::vector<Pairing> out;
    Pairing current;
    pair_up(open, 0, current, out);
    return out;
}

std::size_t count_perfect(std::span<const Pairing> pairings) {
    return static_cast<std::size_t>(
        std::count_if(pairings.begin(), pairings.end(), [](const Pairing& p) { return p.rest.empty(); }));
}

std::size_t double_factorial_pairings(std::size_t m) {
    if (m % 2 != 0) return 0;
    std::size_t out = 1;
    for (std::size_t k = m; k > 1; k -= 2) out *= k - 1;
    return out;
}

const char* kind_name(ContractionKind k) {
    switch (k) {
        case ContractionKind::F: return "F";
        case ContractionKind::Fstar: return "Fstar";
        case ContractionKind::cross: return "cross";
    }
    return "?";
}

std::vector<WickTerm> hori_expand(std::span<const fock::Factor> factors) {
    if (factors.size() > max_expansion_factors) throw std::invalid_argument("Wick expansion supports at most 8 factors");
    for (const auto& f : factors) {
        if (f.branch == fock::Branch::none) throw std::invalid_argument("Wick expansion needs branch-labelled factors");
    }
    std::vector<WickTerm> out;
    for (auto& pairing : enumerate_pairings(factors.size())) {
        WickTerm term;
        for (const auto& [i, j] : pairing.pairs) {
            const auto bi = factors[i].branch;
            const auto bj = factors[j].branch;
            if (bi != bj) {
                term.kinds.push_back(ContractionKind::cross);
            } else {
                term.kinds.push_back(bi == fock::Branch::plus ? ContractionKind::F : ContractionKind::Fstar);
            }
        }
        term.pairs = std::move(pairing.pairs);
        term.rest = std::move(pairing.rest);
        out.push_back(std::move(term));
    }
    return out;
}

std::map<std::vector<IndexPair>, long> delta_power_counts(std::size_t m, std::size_t n) {
    if (m > max_pairing_factors) throw std::invalid_argument("pairing enumeration supports at most 10 factors");
    std::map<std::vector<IndexPair>, long> counts;
    if (2 * n > m) return counts;
    std::vector<bool> used(m, false);
    std::vector<IndexPair> chosen;
    choose_pairs(used, n, chosen, counts);
    return counts;
}

cd contraction_value(ContractionKind kind, const fock::Factor& a, const fock::Factor& b, const OscillatorParams& p) {
    const cd ihbar = I * p.hbar;
    switch (kind) {
        case ContractionKind::F:
            return ihbar * osc_feynman(p, a.time - b.time);
        case ContractionKind::Fstar:
            return -ihbar * std::conj(osc_feynman(p, a.time - b.time));
        case ContractionKind::cross: {
            // The minus-branch operator always stands to the left.
            const auto& m = a.branch == fock::Branch::minus ? a : b;
            const auto& q = a.branch == fock::Branch::minus ? b : a;
            return ihbar * osc_contraction(p, m.time - q.time);
        }
    }
    throw std::logic_error("unhandled contraction kind");
}

WickCheck verify_wick(const fock::FockState& state, std::span<const fock::Factor> factors, const OscillatorParams& p) {
    if (factors.size() > 6) throw std::invalid_argument("Wick verification supports at most 6 factors");
    for (const auto& f : factors) {
        if (f.observable != fock::Observable::q) throw std::invalid_argument("Wick verification is for q factors");
    }
    const auto terms = hori_expand(factors);

    fock::OrderedProductSpec lhs_spec{{factors.begin(), factors.end()}, fock::Ordering::double_time, std::nullopt};
    WickCheck out;
    out.lhs = fock::ordered_average(state, lhs_spec, p);
    out.terms = terms.size();

    for (const auto& term : terms) {
        cd value = static_cast<double>(term.coefficient);
        for (std::size_t k = 0; k < term.pairs.size(); ++k) {
            value *= contraction_value(term.kinds[k], factors[term.pairs[k].first], factors[term.pairs[k].second], p);
        }
        if (value == cd{0.0, 0.0}) continue;
        fock::OrderedProductSpec rest{{}, fock::Ordering::normal, std::nullopt};
        for (auto i : term.rest) rest.factors.push_back(fock::Factor{fock::Observable::q, factors[i].time, fock::Branch::none});
        out.rhs += value * fock::ordered_average(state, rest, p);
    }
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

std::vector<fock::Factor> parse_factors(const std::string& text) {
    std::vector<fock::Factor> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        if (item.size() < 3 || (item[0] != '+' && item[0] != '-') || item[1] != 't') {
            throw std::invalid_argument("factor '" + item + "' is not of the form +t<time> or -t<time>");
        }
        std::size_t used = 0;
        double t = 0.0;
        try {
            t = std::stod(item.substr(2), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() - 2) throw std::invalid_argument("factor '" + item + "' has a malformed time");
        out.push_back(fock::Factor{fock::Observable::q, t, item[0] == '+' ? fock::Branch::plus : fock::Branch::minus});
    }
    if (out.empty()) throw std::invalid_argument("no factors given");
    return out;
}

}  // namespace oscresp::wick
