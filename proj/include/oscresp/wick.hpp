// wick.hpp - contraction combinatorics and the double-time Wick expansion

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscresp/fock.hpp"
#include "oscresp/kernels.hpp"

namespace oscresp::wick {

inline constexpr std::size_t max_pairing_factors = 10;
inline constexpr std::size_t max_expansion_factors = 8;

using IndexPair = std::pair<std::size_t, std::size_t>;

// A set of disjoint pairs (i < j, sorted) plus the unpaired indices.
struct Pairing {
    std::vector<IndexPair> pairs;
    std::vector<std::size_t> rest;
};

// Every partial pairing of m factors, the empty one included.
std::vector<Pairing> enumerate_pairings(std::size_t m);
std::size_t count_perfect(std::span<const Pairing> pairings);
// (m-1)!! for even m, 0 for odd m.
std::size_t double_factorial_pairings(std::size_t m);

// F: both on the plus branch (D_F), Fstar: both on minus (D_F*), cross: one of each (D).
enum class ContractionKind { F, Fstar, cross };
const char* kind_name(ContractionKind k);

struct WickTerm {
    std::vector<IndexPair> pairs;
    std::vector<ContractionKind> kinds;
    std::vector<std::size_t> rest;
    long coefficient{1};
};

// Expansion of a double-time-ordered product into contractions times normal products.
std::vector<WickTerm> hori_expand(std::span<const fock::Factor> factors);

// Applying the quadratic derivative operator n times to m factors: how often each
// n-pair pattern is produced (as an ordered sequence of pair choices).
std::map<std::vector<IndexPair>, long> delta_power_counts(std::size_t m, std::size_t n);

// Closed-form value of one contraction between factors a and b, including the i hbar:
//   F -> i hbar D_F,  Fstar -> -i hbar D_F*,  cross -> i hbar D(t_minus - t_plus).
cd contraction_value(ContractionKind kind, const fock::Factor& a, const fock::Factor& b, const OscillatorParams& p);

struct WickCheck {
    cd lhs;
    cd rhs;
    double residual{0.0};
    std::size_t terms{0};
};

// LHS: brute-force double-time average; RHS: sum over the expansion terms.
WickCheck verify_wick(const fock::FockState& state, std::span<const fock::Factor> factors,
                      const OscillatorParams& p);

// "+t0.0,+t1.3,-t0.7" -> q factors with branches.
std::vector<fock::Factor> parse_factors(const std::string& text);

}  // namespace oscresp::wick
