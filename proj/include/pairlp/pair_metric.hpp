#pragma once

// Symbol-pair domain primitives: the pair read vector pi(x), pair
// distance/weight, pairwise XOR, and the max-of-pair weight used by the
// fractional pair distance.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace pairlp {

using Bits = std::vector<std::uint8_t>;  // entries are 0/1

struct SymbolPair {
    std::uint8_t a{0};
    std::uint8_t b{0};
    friend bool operator==(const SymbolPair&, const SymbolPair&) = default;
    friend auto operator<=>(const SymbolPair&, const SymbolPair&) = default;
};

/// Index of a pair in the fixed order (0,0),(0,1),(1,0),(1,1). Cost tables,
/// tau blocks and the LP variable layout all use this order.
constexpr int pair_index(SymbolPair p) { return 2 * p.a + p.b; }

constexpr SymbolPair pair_from_index(int k) {
    return SymbolPair{static_cast<std::uint8_t>((k >> 1) & 1),
                      static_cast<std::uint8_t>(k & 1)};
}

using PairVector = std::vector<SymbolPair>;

/// Symbol-pair read vector pi(x) = ((x_0,x_1), (x_1,x_2), ..., (x_{n-1},x_0)).
/// Indices wrap modulo n.
inline PairVector pi(std::span<const std::uint8_t> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pi: need length >= 2");
    PairVector out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = SymbolPair{x[i], x[(i + 1) % n]};
    return out;
}

inline PairVector pi(const Bits& x) { return pi(std::span<const std::uint8_t>(x)); }

/// True when v[i].b == v[i+1 mod n].a for all i, as holds for every pi(x).
/// Received vectors need not satisfy this.
inline bool is_consistent(const PairVector& v) {
    if (v.size() < 2) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].b != v[(i + 1) % v.size()].a) return false;
    return true;
}

/// Hamming distance between two pair vectors (the pair-error count when one
/// of them is pi of the sent codeword).
inline int pair_distance(const PairVector& u, const PairVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("pair_distance: length mismatch");
    int d = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != v[i]) ++d;
    return d;
}

/// D_p(x,y) = |{i : (x_i,x_{i+1}) != (y_i,y_{i+1})}|.
inline int pair_distance(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pair_distance: length mismatch");
    return pair_distance(pi(x), pi(y));
}

inline int pair_distance(const Bits& x, const Bits& y) {
    return pair_distance(std::span<const std::uint8_t>(x), std::span<const std::uint8_t>(y));
}

/// W_p(x) = number of nonzero pairs of pi(x).
inline int pair_weight(std::span<const std::uint8_t> x) {
    const PairVector p = pi(x);
    int w = 0;
    for (const auto& q : p)
        if (q != SymbolPair{0, 0}) ++w;
    return w;
}

inline int pair_weight(const Bits& x) { return pair_weight(std::span<const std::uint8_t>(x)); }

inline int hamming_weight(std::span<const std::uint8_t> x) {
    int w = 0;
    for (auto b : x) w += (b != 0);
    return w;
}

/// Componentwise XOR of two pairs. Self-inverse.
constexpr SymbolPair pair_xor(SymbolPair p, SymbolPair q) {
    return SymbolPair{static_cast<std::uint8_t>(p.a ^ q.a),
                      static_cast<std::uint8_t>(p.b ^ q.b)};
}

/// Positionwise pair XOR of equal-length pair vectors; used to map a received
/// vector around a codeword to one around the all-zeros word.
inline PairVector pair_xor(const PairVector& u, const PairVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("pair_xor: length mismatch");
    PairVector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = pair_xor(u[i], v[i]);
    return out;
}

/// w_fp((a,b)) = max{a,b}. Defined on fractional pairs as well, because it is
/// evaluated on polytope points, not only on bit pairs.
inline double w_fp(double a, double b) {
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
        throw std::invalid_argument("w_fp: component out of [0,1]");
    return std::max(a, b);
}

inline double w_fp(SymbolPair p) { return w_fp(double(p.a), double(p.b)); }

/// W_fp(x) = sum_i max{x_i, x_{i+1 mod n}}. Equals W_p(x) on 0/1 vectors.
inline double fractional_pair_weight(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fractional_pair_weight: need length >= 2");
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += w_fp(x[i], x[(i + 1) % n]);
    return w;
}

}  // namespace pairlp
