#pragma once

// LP decoding for the symbol-pair read channel, the exhaustive ML reference
// decoder, and the relative-solution transform used by the
// codeword-independence argument.
//
// Decoding LP layout (fixed so active sets and regression goldens are
// stable): variables are x_0..x_{n-1} followed by the tau blocks
// tau[i][(0,0)],tau[i][(0,1)],tau[i][(1,0)],tau[i][(1,1)] for i = 0..n-1
// (5n variables, all bounded to [0,1]; tau[i][k] sits at index n + 4i + k).
// Constraint order: n sum-to-one equalities, then per position the two
// coupling equalities
//     x_i     = tau[i][(1,0)] + tau[i][(1,1)]
//     x_{i+1} = tau[i][(0,1)] + tau[i][(1,1)]   (index mod n)
// and finally the forbidden-set rows of Q(H). The box part of Q(H) lives in
// the variable bounds.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlp/channel.hpp"
#include "pairlp/linear_code.hpp"
#include "pairlp/lp_core.hpp"
#include "pairlp/pair_metric.hpp"
#include "pairlp/polytope.hpp"

namespace pairlp {

/// The tau side of a decoding-LP point: n x 4 values in [0,1], indexed like
/// CostTable.
class TauAssignment {
  public:
    explicit TauAssignment(int n) : tau_(n) {
        if (n < 2) throw std::invalid_argument("TauAssignment: need n >= 2");
        for (auto& block : tau_) block = {0.0, 0.0, 0.0, 0.0};
    }

    int length() const { return static_cast<int>(tau_.size()); }

    double operator()(int i, int k) const { return tau_[i][k]; }
    double& operator()(int i, int k) { return tau_[i][k]; }
    double operator()(int i, SymbolPair p) const { return tau_[i][pair_index(p)]; }

    /// T(x): the 0/1 indicator assignment of a bit vector.
    static TauAssignment indicator(std::span<const std::uint8_t> x) {
        const PairVector p = pi(x);
        TauAssignment t(static_cast<int>(x.size()));
        for (int i = 0; i < t.length(); ++i) t(i, pair_index(p[i])) = 1.0;
        return t;
    }

    static TauAssignment indicator(const Bits& x) {
        return indicator(std::span<const std::uint8_t>(x));
    }

    /// x_i = tau[i][(1,0)] + tau[i][(1,1)].
    std::vector<double> coupled_x() const {
        std::vector<double> x(tau_.size());
        for (std::size_t i = 0; i < tau_.size(); ++i) x[i] = tau_[i][2] + tau_[i][3];
        return x;
    }

    /// Bounds, sum-to-one and both coupling identities against x, within tol.
    bool is_consistent_with(std::span<const double> x, double tol = 1e-7) const {
        if (x.size() != tau_.size()) return false;
        const int n = length();
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int k = 0; k < 4; ++k) {
                if (tau_[i][k] < -tol || tau_[i][k] > 1.0 + tol) return false;
                sum += tau_[i][k];
            }
            if (std::abs(sum - 1.0) > tol) return false;
            if (std::abs(tau_[i][2] + tau_[i][3] - x[i]) > tol) return false;
            if (std::abs(tau_[i][1] + tau_[i][3] - x[(i + 1) % n]) > tol) return false;
        }
        return true;
    }

  private:
    std::vector<std::array<double, 4>> tau_;
};

inline double dot(const CostTable& lambda, const TauAssignment& tau) {
    if (lambda.length() != tau.length()) throw std::invalid_argument("dot: length mismatch");
    double acc = 0.0;
    for (int i = 0; i < lambda.length(); ++i)
        for (int k = 0; k < 4; ++k) acc += lambda(i, k) * tau(i, k);
    return acc;
}

struct DecodeOutcome {
    enum class Kind { Integral, Fractional, SolverError };

    Kind kind = Kind::SolverError;
    std::vector<double> x;       // x-part of the optimizer
    TauAssignment tau{2};        // tau-part
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool ml_certificate = false;
    Bits codeword;               // rounded x, only when Integral
    std::string message;         // solver-error detail

    bool integral() const { return kind == Kind::Integral; }
};

inline constexpr double kIntegralityTol = 1e-6;

/// The relaxed decoding LP over (x, tau); see the layout note above.
inline LpProblem<double> build_decoding_lp(const FundamentalPolytope& poly,
                                           const CostTable& lambda) {
    const int n = poly.dimension();
    if (lambda.length() != n)
        throw std::invalid_argument("build_decoding_lp: dimension mismatch");

    LpProblem<double> lp;
    for (int i = 0; i < n; ++i) lp.add_variable(0.0, 1.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k) lp.add_variable(0.0, 1.0, lambda(i, k));
    const auto tau_var = [n](int i, int k) { return n + 4 * i + k; };

    for (int i = 0; i < n; ++i)
        lp.add_constraint({{tau_var(i, 0), 1.0},
                           {tau_var(i, 1), 1.0},
                           {tau_var(i, 2), 1.0},
                           {tau_var(i, 3), 1.0}},
                          Relation::Eq, 1.0);
    for (int i = 0; i < n; ++i) {
        lp.add_constraint({{i, 1.0}, {tau_var(i, 2), -1.0}, {tau_var(i, 3), -1.0}},
                          Relation::Eq, 0.0);
        lp.add_constraint({{(i + 1) % n, 1.0}, {tau_var(i, 1), -1.0}, {tau_var(i, 3), -1.0}},
                          Relation::Eq, 0.0);
    }
    for (const auto& row : poly.rows()) {
        if (row.kind != PolytopeRow::Kind::Forbidden) continue;  // box = bounds
        lp.add_constraint(row.terms, Relation::LessEq, row.rhs);
    }
    return lp;
}

namespace detail {

inline DecodeOutcome interpret_lp_solution(const FundamentalPolytope& poly,
                                           const LpSolution<double>& sol) {
    const int n = poly.dimension();
    DecodeOutcome out;
    out.tau = TauAssignment(n);

    if (sol.status != LpStatus::Optimal) {
        out.kind = DecodeOutcome::Kind::SolverError;
        out.message = sol.status == LpStatus::Infeasible ? "LP reported infeasible"
                                                         : "LP reported unbounded";
        return out;
    }
    out.x.assign(sol.point.begin(), sol.point.begin() + n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k) out.tau(i, k) = sol.point[n + 4 * i + k];
    out.objective = sol.objective_value;

    double worst = 0.0;
    for (double v : out.x) worst = std::max(worst, std::min(v, 1.0 - v));
    if (worst <= kIntegralityTol) {
        Bits rounded(n);
        for (int i = 0; i < n; ++i) rounded[i] = out.x[i] > 0.5 ? 1 : 0;
        if (!is_codeword(poly.code(), rounded)) {
            // An integral-looking optimizer that fails the parity check is
            // numerical trouble, never a certificate.
            out.kind = DecodeOutcome::Kind::SolverError;
            out.message = "integral optimizer fails syndrome check";
            return out;
        }
        out.kind = DecodeOutcome::Kind::Integral;
        out.codeword = std::move(rounded);
        out.ml_certificate = true;
    } else {
        out.kind = DecodeOutcome::Kind::Fractional;
    }
    return out;
}

}  // namespace detail

/// Three-step LP decoder: build lambda from the received vector, solve the
/// relaxation, report Integral (with ML certificate) iff the x-part is
/// integral. Solver breakdown is surfaced as SolverError, never rounded over.
inline DecodeOutcome lp_decode(const FundamentalPolytope& poly, const PairVector& y,
                               ChannelParams params) {
    if (static_cast<int>(y.size()) != poly.dimension())
        throw std::invalid_argument("lp_decode: received length mismatch");
    const CostTable lambda = cost_table(y, params);
    const LpProblem<double> lp = build_decoding_lp(poly, lambda);
    try {
        const LpSolution<double> sol = solve(lp);
        return detail::interpret_lp_solution(poly, sol);
    } catch (const SimplexNumericalError& e) {
        DecodeOutcome out;
        out.kind = DecodeOutcome::Kind::SolverError;
        out.message = e.what();
        return out;
    }
}

struct MlResult {
    Bits codeword;
    double objective = 0.0;   // <lambda, T(codeword)>
    int pair_mismatches = 0;  // D_H(pi(codeword), y)
    bool tie = false;         // another codeword attains the same likelihood
};

/// Exhaustive ML decoding over a precomputed (lexicographically sorted)
/// codebook. The channel makes the ML objective a strictly increasing
/// function of the pair-mismatch count, so the argmin is computed in exact
/// integer arithmetic; ties break to the lexicographically smallest codeword.
inline MlResult ml_decode(const std::vector<Bits>& codebook, const PairVector& y,
                          ChannelParams params) {
    if (codebook.empty()) throw std::invalid_argument("ml_decode: empty codebook");
    const int n = static_cast<int>(codebook.front().size());
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("ml_decode: received length mismatch");

    int best_d = n + 1;
    const Bits* best = nullptr;
    bool tie = false;
    for (const Bits& cw : codebook) {
        const int d = pair_distance(pi(cw), y);
        if (d < best_d) {
            best_d = d;
            best = &cw;
            tie = false;
        } else if (d == best_d) {
            tie = true;
        }
    }
    MlResult r;
    r.codeword = *best;
    r.pair_mismatches = best_d;
    r.tie = tie;
    r.objective = double(n - best_d) * params.correct_cost() + double(best_d) * params.wrong_cost();
    return r;
}

inline MlResult ml_decode(const BinaryCode& code, const PairVector& y, ChannelParams params) {
    return ml_decode(enumerate_codewords(code), y, params);
}

/// Relative solution of (xf, tauf) with respect to codeword x:
/// taur[i][(a,b)] = tauf[i][(a,b) xor_p pi(x)_i], xr from the coupling rows.
/// Maps feasible points around x to feasible points around 0 and satisfies
/// xr_i = |xf_i - x_i|.
inline std::pair<std::vector<double>, TauAssignment> relative_solution(
    std::span<const double> xf, const TauAssignment& tauf, std::span<const std::uint8_t> x) {
    const int n = tauf.length();
    if (static_cast<int>(xf.size()) != n || static_cast<int>(x.size()) != n)
        throw std::invalid_argument("relative_solution: length mismatch");
    if (!tauf.is_consistent_with(xf))
        throw std::invalid_argument("relative_solution: infeasible input");

    const PairVector px = pi(x);
    TauAssignment taur(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k)
            taur(i, k) = tauf(i, pair_index(pair_xor(pair_from_index(k), px[i])));
    return {taur.coupled_x(), std::move(taur)};
}

inline std::pair<std::vector<double>, TauAssignment> relative_solution(
    std::span<const double> xf, const TauAssignment& tauf, const Bits& x) {
    return relative_solution(xf, tauf, std::span<const std::uint8_t>(x));
}

/// Both sides of the cost identity
///   <Lambda(y), tau_f - T(x)> = <Lambda(y xor_p pi(x)), tau_r - T(0)>.
inline std::pair<double, double> cost_identity_check(const PairVector& y,
                                                     std::span<const std::uint8_t> x,
                                                     std::span<const double> xf,
                                                     const TauAssignment& tauf,
                                                     ChannelParams params) {
    const int n = tauf.length();
    if (static_cast<int>(y.size()) != n || static_cast<int>(x.size()) != n)
        throw std::invalid_argument("cost_identity_check: length mismatch");

    const CostTable lam = cost_table(y, params);
    const TauAssignment tx = TauAssignment::indicator(x);
    const double lhs = dot(lam, tauf) - dot(lam, tx);

    const PairVector y0 = pair_xor(y, pi(x));
    const CostTable lam0 = cost_table(y0, params);
    const auto [xr, taur] = relative_solution(xf, tauf, x);
    const Bits zero(n, 0);
    const double rhs = dot(lam0, taur) - dot(lam0, TauAssignment::indicator(zero));
    return {lhs, rhs};
}

inline std::pair<double, double> cost_identity_check(const PairVector& y, const Bits& x,
                                                     const std::vector<double>& xf,
                                                     const TauAssignment& tauf,
                                                     ChannelParams params) {
    return cost_identity_check(y, std::span<const std::uint8_t>(x),
                               std::span<const double>(xf), tauf, params);
}

}  // namespace pairlp
