#pragma once

// Probabilistic symbol-pair read channel: each position delivers the correct
// pair with probability 1-p and each of the three other pairs with
// probability p/3, independently across positions. Also builds the LP cost
// table lambda[i][(a,b)] = -ln p(y_i | (a,b)).
//
// RNG contract (pairlp/rng-v1): std::mt19937_64 seeded directly with the
// given seed; positions are visited in order 0..n-1 and consume exactly one
// 53-bit uniform draw each. mt19937_64 and this draw order are fixed by the
// C++ standard, so transmissions are bit-reproducible across platforms.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairlp/pair_metric.hpp"

namespace pairlp {

struct ChannelParams {
    double p;

    explicit ChannelParams(double pair_error_prob) : p(pair_error_prob) {
        if (!(p > 0.0) || !(p < 0.75))
            throw std::invalid_argument("ChannelParams: p must lie in (0, 3/4)");
    }

    double correct_cost() const { return -std::log1p(-p); }   // -ln(1-p)
    double wrong_cost() const { return -std::log(p / 3.0); }  // -ln(p/3)
};

namespace detail {
inline double uniform53(std::mt19937_64& g) {
    return double(g() >> 11) * 0x1.0p-53;
}
}  // namespace detail

/// Send codeword x through the channel; returns the received pair vector.
/// Deterministic given the seed (see the RNG contract above).
inline PairVector transmit(std::span<const std::uint8_t> x, ChannelParams params,
                           std::uint64_t seed) {
    const PairVector sent = pi(x);
    PairVector out(sent.size());
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < sent.size(); ++i) {
        const double u = detail::uniform53(rng);
        if (u < 1.0 - params.p) {
            out[i] = sent[i];
        } else {
            // The three wrong pairs, in ascending pair_index order.
            int w = static_cast<int>((u - (1.0 - params.p)) / (params.p / 3.0));
            if (w > 2) w = 2;
            const int correct = pair_index(sent[i]);
            int k = 0;
            for (int cand = 0; cand < 4; ++cand) {
                if (cand == correct) continue;
                if (k == w) { out[i] = pair_from_index(cand); break; }
                ++k;
            }
        }
    }
    return out;
}

inline PairVector transmit(const Bits& x, ChannelParams params, std::uint64_t seed) {
    return transmit(std::span<const std::uint8_t>(x), params, seed);
}

/// ln p(y | x) = sum_i ln p(y_i | pi(x)_i).
inline double log_likelihood(const PairVector& y, std::span<const std::uint8_t> x,
                             ChannelParams params) {
    const PairVector sent = pi(x);
    if (sent.size() != y.size()) throw std::invalid_argument("log_likelihood: length mismatch");
    const double ok = std::log1p(-params.p);
    const double bad = std::log(params.p / 3.0);
    double ll = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) ll += (y[i] == sent[i]) ? ok : bad;
    return ll;
}

inline double log_likelihood(const PairVector& y, const Bits& x, ChannelParams params) {
    return log_likelihood(y, std::span<const std::uint8_t>(x), params);
}

/// The lambda array: per position i and pair (a,b), the cost
/// -ln p(y_i | (a,b)). Raw natural-log values, no shifting.
class CostTable {
  public:
    explicit CostTable(int n) : lambda_(n) {
        if (n < 2) throw std::invalid_argument("CostTable: need n >= 2");
    }

    int length() const { return static_cast<int>(lambda_.size()); }

    double operator()(int i, int k) const { return lambda_[i][k]; }
    double& operator()(int i, int k) { return lambda_[i][k]; }
    double operator()(int i, SymbolPair p) const { return lambda_[i][pair_index(p)]; }

  private:
    std::vector<std::array<double, 4>> lambda_;
};

inline CostTable cost_table(const PairVector& y, ChannelParams params) {
    CostTable t(static_cast<int>(y.size()));
    const double ok = params.correct_cost();
    const double bad = params.wrong_cost();
    for (int i = 0; i < t.length(); ++i) {
        const int correct = pair_index(y[i]);
        for (int k = 0; k < 4; ++k) t(i, k) = (k == correct) ? ok : bad;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Pair-vector text format: one line of n whitespace-separated tokens "ab"
// with a,b in {0,1}. Used by the CLI decode command.

inline std::string format_pair_vector(const PairVector& y) {
    std::string s;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i) s += ' ';
        s += char('0' + y[i].a);
        s += char('0' + y[i].b);
    }
    return s;
}

inline PairVector parse_pair_vector(const std::string& line) {
    std::istringstream is(line);
    PairVector y;
    std::string tok;
    while (is >> tok) {
        if (tok.size() != 2 || (tok[0] != '0' && tok[0] != '1') ||
            (tok[1] != '0' && tok[1] != '1'))
            throw std::invalid_argument("parse_pair_vector: bad token '" + tok + "'");
        y.push_back(SymbolPair{static_cast<std::uint8_t>(tok[0] - '0'),
                               static_cast<std::uint8_t>(tok[1] - '0')});
    }
    if (y.size() < 2) throw std::invalid_argument("parse_pair_vector: need at least 2 pairs");
    return y;
}

}  // namespace pairlp
