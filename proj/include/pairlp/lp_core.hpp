#pragma once

// Generic linear programs and a self-contained two-phase primal simplex that
// returns basic (vertex) optimal solutions.
//
// The solver works on a dense tableau with implicit variable bounds: every
// structural variable is shifted to [0, u] and a nonbasic variable at its
// upper bound is complemented (column negated) so that all nonbasic variables
// sit at zero. Pivoting uses the most-negative reduced cost with lowest-index
// tie-breaks, and switches to Bland's smallest-index anti-cycling rule after a
// run of degenerate pivots. All choices are index-based, so solves are
// deterministic for a fixed input.
//
// The same engine instantiated with an arbitrary-precision rational scalar
// (solve_exact) is the exact oracle mode used by tests; tolerances collapse
// to exact comparisons there.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pairlp {

using Rational = boost::multiprecision::cpp_rational;

enum class Relation : std::uint8_t { LessEq, Eq };

template <class T>
struct LinearTerm {
    int var;
    T coeff;
    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

template <class T>
struct LpConstraint {
    std::vector<LinearTerm<T>> terms;
    Relation rel = Relation::LessEq;
    T rhs{};
};

/// minimize objective . x  subject to the constraint rows and finite box
/// bounds lo <= x <= hi on every variable.
template <class T>
struct LpProblem {
    int num_vars = 0;
    std::vector<T> objective;
    std::vector<LpConstraint<T>> constraints;
    std::vector<std::pair<T, T>> bounds;

    int add_variable(T lo, T hi, T cost) {
        bounds.emplace_back(std::move(lo), std::move(hi));
        objective.push_back(std::move(cost));
        return num_vars++;
    }

    void add_constraint(std::vector<LinearTerm<T>> terms, Relation rel, T rhs) {
        constraints.push_back(LpConstraint<T>{std::move(terms), rel, std::move(rhs)});
    }

    void validate() const {
        if (num_vars <= 0) throw std::invalid_argument("LpProblem: no variables");
        if (static_cast<int>(objective.size()) != num_vars ||
            static_cast<int>(bounds.size()) != num_vars)
            throw std::invalid_argument("LpProblem: objective/bounds size mismatch");
        for (const auto& [lo, hi] : bounds)
            if (hi < lo) throw std::invalid_argument("LpProblem: bound lo > hi");
        for (const auto& c : constraints)
            for (const auto& t : c.terms)
                if (t.var < 0 || t.var >= num_vars)
                    throw std::invalid_argument("LpProblem: constraint index out of range");
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Thrown when pivoting exceeds the iteration cap or the final point fails
/// the feasibility recheck; decoding surfaces it as a SolverError outcome.
class SimplexNumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Identifiers in LpSolution::active_set: values < constraints.size() are
/// constraint rows; after that, nc + 2i encodes "lower bound of variable i"
/// and nc + 2i + 1 its upper bound.
template <class T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<T> point;
    T objective_value{};
    std::vector<int> active_set;
    long iterations = 0;
};

namespace lptol {

// Tolerances of the double path (project contract: feasibility 1e-9,
// tightness 1e-7). The rational path compares exactly.
template <class T>
struct Tol {
    static constexpr bool exact = true;
    static T feasibility() { return T(0); }
    static T tightness() { return T(0); }
    static T reduced_cost() { return T(0); }
    static T pivot() { return T(0); }
    static T degenerate() { return T(0); }
};

template <>
struct Tol<double> {
    static constexpr bool exact = false;
    static double feasibility() { return 1e-9; }
    static double tightness() { return 1e-7; }
    static double reduced_cost() { return 1e-9; }
    static double pivot() { return 1e-9; }
    static double degenerate() { return 1e-12; }
};

}  // namespace lptol

namespace detail {

template <class T>
T tabs(const T& v) {
    return v < T(0) ? T(-v) : v;
}

template <class T>
T dot_terms(const std::vector<LinearTerm<T>>& terms, std::span<const T> x) {
    T acc{};
    for (const auto& t : terms) acc += t.coeff * x[t.var];
    return acc;
}

/// Max violation of constraints and bounds at the point (0 if feasible).
template <class T>
T max_violation(const LpProblem<T>& p, std::span<const T> x) {
    T worst{};
    auto bump = [&worst](T v) {
        if (v > worst) worst = v;
    };
    for (const auto& c : p.constraints) {
        const T lhs = dot_terms<T>(c.terms, x);
        bump(lhs - c.rhs);
        if (c.rel == Relation::Eq) bump(c.rhs - lhs);
    }
    for (int i = 0; i < p.num_vars; ++i) {
        bump(p.bounds[i].first - x[i]);
        bump(x[i] - p.bounds[i].second);
    }
    return worst;
}

template <class T>
std::vector<int> active_set_at(const LpProblem<T>& p, std::span<const T> x,
                               const T& tight) {
    std::vector<int> act;
    const int nc = static_cast<int>(p.constraints.size());
    for (int r = 0; r < nc; ++r) {
        const T lhs = dot_terms<T>(p.constraints[r].terms, x);
        if (p.constraints[r].rel == Relation::Eq ||
            !(tabs<T>(lhs - p.constraints[r].rhs) > tight))
            act.push_back(r);
    }
    for (int i = 0; i < p.num_vars; ++i) {
        if (!(tabs<T>(x[i] - p.bounds[i].first) > tight)) act.push_back(nc + 2 * i);
        if (!(tabs<T>(x[i] - p.bounds[i].second) > tight)) act.push_back(nc + 2 * i + 1);
    }
    return act;
}

/// Rank of a dense matrix by Gaussian elimination with partial pivoting.
template <class T>
int matrix_rank(std::vector<std::vector<T>> rows, int cols, const T& eps) {
    int rank = 0;
    const int nr = static_cast<int>(rows.size());
    for (int c = 0; c < cols && rank < nr; ++c) {
        int sel = -1;
        T best{};
        for (int r = rank; r < nr; ++r) {
            const T mag = tabs<T>(rows[r][c]);
            if (sel < 0 || mag > best) { sel = r; best = mag; }
        }
        if (sel < 0 || !(best > eps)) continue;
        std::swap(rows[rank], rows[sel]);
        for (int r = 0; r < nr; ++r) {
            if (r == rank || rows[r][c] == T(0)) continue;
            const T f = rows[r][c] / rows[rank][c];
            for (int j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

template <class T>
class SimplexEngine {
    using Tol = lptol::Tol<T>;

  public:
    explicit SimplexEngine(const LpProblem<T>& p) : prob_(p) { p.validate(); }

    LpSolution<T> run() {
        build();
        phase1();
        if (status_ == LpStatus::Infeasible) {
            LpSolution<T> s;
            s.status = LpStatus::Infeasible;
            s.iterations = iterations_;
            return s;
        }
        cleanup_artificials();
        phase2();
        return extract();
    }

  private:
    const LpProblem<T>& prob_;

    int nv_ = 0;          // structural count
    int rows_ = 0;        // constraint rows
    int cols_ = 0;        // structural + slack/surplus + artificial columns
    int first_art_ = 0;
    std::vector<T> tab_;  // (rows_ + 2) x (cols_ + 1); rows_ is the phase-2
                          // cost row, rows_ + 1 the phase-1 cost row; the last
                          // column holds basic values (cost rows: -objective)
    std::vector<T> ub_;
    std::vector<char> has_ub_;
    std::vector<char> flipped_;
    std::vector<int> basis_;      // basic column per row
    std::vector<int> basis_row_;  // row of a basic column, -1 if nonbasic
    std::vector<char> dead_row_;  // redundant rows found in phase 1
    std::vector<char> dead_col_;
    LpStatus status_ = LpStatus::Optimal;
    long iterations_ = 0;
    long iteration_cap_ = 0;
    int stall_ = 0;
    bool bland_ = false;

    T* row(int r) { return tab_.data() + std::size_t(r) * (cols_ + 1); }
    T& rhs(int r) { return row(r)[cols_]; }

    void set_basic(int col, int r) {
        basis_[r] = col;
        basis_row_[col] = r;
    }

    void build() {
        nv_ = prob_.num_vars;
        rows_ = static_cast<int>(prob_.constraints.size());
        iteration_cap_ = 50L * (nv_ + rows_ + 10);

        // Shifted rhs b' = b - a.lo decides which rows need an artificial.
        std::vector<T> shifted(rows_);
        std::vector<char> negated(rows_, 0);
        int n_slack = 0, n_art = 0;
        for (int r = 0; r < rows_; ++r) {
            const auto& c = prob_.constraints[r];
            T b = c.rhs;
            for (const auto& t : c.terms) b -= t.coeff * prob_.bounds[t.var].first;
            if (b < T(0)) { negated[r] = 1; b = -b; }
            shifted[r] = std::move(b);
            if (c.rel == Relation::LessEq) ++n_slack;
            if (c.rel == Relation::Eq || negated[r]) ++n_art;
        }
        first_art_ = nv_ + n_slack;
        cols_ = first_art_ + n_art;

        tab_.assign(std::size_t(rows_ + 2) * (cols_ + 1), T{});
        ub_.assign(cols_, T{});
        has_ub_.assign(cols_, 0);
        flipped_.assign(cols_, 0);
        basis_.assign(rows_, -1);
        basis_row_.assign(cols_, -1);
        dead_row_.assign(rows_, 0);
        dead_col_.assign(cols_, 0);

        for (int j = 0; j < nv_; ++j) {
            ub_[j] = prob_.bounds[j].second - prob_.bounds[j].first;
            has_ub_[j] = 1;
        }

        int slack = nv_;
        int art = first_art_;
        for (int r = 0; r < rows_; ++r) {
            const auto& c = prob_.constraints[r];
            for (const auto& t : c.terms)
                row(r)[t.var] += negated[r] ? T(-t.coeff) : t.coeff;
            rhs(r) = shifted[r];
            if (c.rel == Relation::LessEq) {
                row(r)[slack] = negated[r] ? T(-1) : T(1);
                if (!negated[r]) set_basic(slack, r);
                ++slack;
            }
            if (c.rel == Relation::Eq || negated[r]) {
                row(r)[art] = T(1);
                set_basic(art, r);
                ++art;
            }
        }

        // Phase-2 reduced costs (initial basis has zero cost).
        for (int j = 0; j < nv_; ++j) row(rows_)[j] = prob_.objective[j];
        // Phase-1 reduced costs: sum of artificials priced out against the
        // rows where an artificial starts basic.
        T* c1 = row(rows_ + 1);
        for (int r = 0; r < rows_; ++r) {
            if (basis_[r] < first_art_) continue;
            const T* tr = row(r);
            for (int j = 0; j <= cols_; ++j) c1[j] -= tr[j];
            c1[basis_[r]] += T(1);
        }
    }

    // z_j := u_j - z_j (column complement). For a basic column, follow with
    // negate_row so the basic coefficient stays +1.
    void complement_column(int j) {
        const T& u = ub_[j];
        for (int r = 0; r < rows_ + 2; ++r) {
            T* tr = row(r);
            if (tr[j] != T(0)) {
                tr[cols_] -= tr[j] * u;
                tr[j] = -tr[j];
            }
        }
        flipped_[j] = !flipped_[j];
    }

    void negate_row(int r) {
        T* tr = row(r);
        for (int j = 0; j <= cols_; ++j)
            if (tr[j] != T(0)) tr[j] = -tr[j];
    }

    void pivot(int r, int s) {
        T* pr = row(r);
        if (pr[s] != T(1)) {
            const T inv = T(1) / pr[s];
            if constexpr (Tol::exact) {
                for (int j = 0; j <= cols_; ++j)
                    if (pr[j] != T(0)) pr[j] *= inv;
            } else {
                for (int j = 0; j <= cols_; ++j) pr[j] *= inv;
            }
            pr[s] = T(1);
        }
        for (int i = 0; i < rows_ + 2; ++i) {
            if (i == r) continue;
            T* ti = row(i);
            const T f = ti[s];
            if (f == T(0)) continue;
            if constexpr (Tol::exact) {
                for (int j = 0; j <= cols_; ++j)
                    if (pr[j] != T(0)) ti[j] -= f * pr[j];
            } else {
                for (int j = 0; j <= cols_; ++j) ti[j] -= f * pr[j];
            }
            ti[s] = T(0);
        }
        basis_row_[basis_[r]] = -1;
        set_basic(s, r);
    }

    bool better_leaving(int r, int cur) const {
        if (bland_) return basis_[r] < basis_[cur];
        const bool r_art = basis_[r] >= first_art_;
        const bool c_art = basis_[cur] >= first_art_;
        if (r_art != c_art) return r_art;  // drive artificials out first
        return basis_[r] < basis_[cur];
    }

    /// One simplex phase on the given cost row. Returns false on unbounded.
    bool iterate(int cost_row, bool phase_one) {
        const T eps_d = Tol::reduced_cost();
        const T eps_p = Tol::pivot();
        stall_ = 0;
        bland_ = false;
        for (;;) {
            if (++iterations_ > iteration_cap_)
                throw SimplexNumericalError("simplex: iteration cap exceeded");
            const T* c = row(cost_row);

            int enter = -1;
            T best{};
            for (int j = 0; j < cols_; ++j) {
                if (dead_col_[j] || basis_row_[j] >= 0) continue;
                if (!phase_one && j >= first_art_) continue;
                if (has_ub_[j] && ub_[j] == T(0)) continue;  // fixed variable
                if (c[j] < -eps_d) {
                    if (bland_) { enter = j; break; }
                    const T mag = -c[j];
                    if (enter < 0 || mag > best) { enter = j; best = mag; }
                }
            }
            if (enter < 0) return true;  // phase optimal

            // Ratio test: the entering variable moves up from zero by t.
            T best_t{};
            bool has_row_limit = false;
            int leave_row = -1;
            bool leave_at_ub = false;
            for (int r = 0; r < rows_; ++r) {
                if (dead_row_[r]) continue;
                const T a = row(r)[enter];
                T t{};
                bool at_ub = false;
                if (a > eps_p) {
                    t = rhs(r) > T(0) ? T(rhs(r) / a) : T(0);
                } else if (a < -eps_p && has_ub_[basis_[r]]) {
                    T room = ub_[basis_[r]] - rhs(r);
                    if (room < T(0)) room = T(0);
                    t = room / T(-a);
                    at_ub = true;
                } else {
                    continue;
                }
                if (!has_row_limit || t < best_t ||
                    (t == best_t && better_leaving(r, leave_row))) {
                    has_row_limit = true;
                    best_t = t;
                    leave_row = r;
                    leave_at_ub = at_ub;
                }
            }

            if (!has_row_limit && !has_ub_[enter]) {
                if (phase_one)
                    throw SimplexNumericalError("simplex: phase-1 unbounded");
                status_ = LpStatus::Unbounded;
                return false;
            }
            if (has_ub_[enter] && (!has_row_limit || ub_[enter] < best_t)) {
                complement_column(enter);  // bound flip; strict progress
                stall_ = 0;
                bland_ = false;
                continue;
            }

            if (!(best_t > Tol::degenerate())) {
                if (++stall_ > 64) bland_ = true;
            } else {
                stall_ = 0;
                bland_ = false;
            }
            if (leave_at_ub) {
                complement_column(basis_[leave_row]);
                negate_row(leave_row);
            }
            pivot(leave_row, enter);
        }
    }

    void phase1() {
        bool any_art = false;
        for (int r = 0; r < rows_; ++r) any_art |= (basis_[r] >= first_art_);
        if (any_art) iterate(rows_ + 1, true);
        T infeas = -row(rows_ + 1)[cols_];  // phase-1 objective value
        if (infeas < T(0)) infeas = T(0);
        const T lim = Tol::exact ? T(0) : T(Tol::tightness());
        if (infeas > lim) status_ = LpStatus::Infeasible;
    }

    void cleanup_artificials() {
        for (int r = 0; r < rows_; ++r) {
            if (basis_[r] < first_art_) continue;
            int piv_col = -1;
            for (int j = 0; j < first_art_; ++j) {
                if (basis_row_[j] >= 0 || dead_col_[j]) continue;
                if (tabs<T>(row(r)[j]) > Tol::pivot()) { piv_col = j; break; }
            }
            if (piv_col >= 0) {
                pivot(r, piv_col);
            } else {
                dead_row_[r] = 1;  // redundant constraint
            }
        }
        for (int j = first_art_; j < cols_; ++j) dead_col_[j] = 1;
    }

    void phase2() {
        if (!iterate(rows_, false)) return;  // unbounded
        status_ = LpStatus::Optimal;
    }

    LpSolution<T> extract() {
        LpSolution<T> s;
        s.iterations = iterations_;
        s.status = status_;
        if (status_ != LpStatus::Optimal) return s;

        s.point.assign(nv_, T{});
        for (int j = 0; j < nv_; ++j) {
            T z = basis_row_[j] >= 0 ? rhs(basis_row_[j]) : T(0);
            if (flipped_[j]) z = ub_[j] - z;
            if constexpr (!Tol::exact) {
                if (z < T(0)) z = T(0);
                if (z > ub_[j]) z = ub_[j];
            }
            s.point[j] = z + prob_.bounds[j].first;
        }
        s.objective_value = T{};
        for (int j = 0; j < nv_; ++j)
            s.objective_value += prob_.objective[j] * s.point[j];

        const T viol = max_violation<T>(prob_, s.point);
        const T lim = Tol::exact ? T(0) : T(Tol::tightness());
        if (viol > lim)
            throw SimplexNumericalError("simplex: optimum fails feasibility recheck");

        s.active_set = active_set_at<T>(prob_, s.point, Tol::tightness());
        return s;
    }
};

}  // namespace detail

/// Solve the LP. Optimal solutions are basic feasible solutions (polytope
/// vertices). Infeasible and Unbounded come back as statuses; numerical
/// breakdown (iteration cap, failed recheck) throws SimplexNumericalError.
template <class T>
LpSolution<T> solve(const LpProblem<T>& problem) {
    detail::SimplexEngine<T> engine(problem);
    return engine.run();
}

/// Exact rational simplex; the oracle mode for integrality and tie checks.
inline LpSolution<Rational> solve_exact(const LpProblem<Rational>& problem) {
    if (problem.num_vars > 200)
        throw std::length_error("solve_exact: num_vars exceeds guard (200)");
    return solve<Rational>(problem);
}

/// Exact conversion (doubles are dyadic rationals).
inline LpProblem<Rational> to_rational(const LpProblem<double>& p) {
    LpProblem<Rational> q;
    q.num_vars = p.num_vars;
    q.objective.reserve(p.objective.size());
    for (double c : p.objective) q.objective.emplace_back(c);
    for (const auto& [lo, hi] : p.bounds) q.bounds.emplace_back(Rational(lo), Rational(hi));
    for (const auto& c : p.constraints) {
        LpConstraint<Rational> rc;
        rc.rel = c.rel;
        rc.rhs = Rational(c.rhs);
        for (const auto& t : c.terms) rc.terms.push_back({t.var, Rational(t.coeff)});
        q.constraints.push_back(std::move(rc));
    }
    return q;
}

template <class T>
bool is_feasible(const LpProblem<T>& p, std::span<const T> x, const T& tol) {
    return !(detail::max_violation<T>(p, x) > tol);
}

/// Rank of the constraint/bound rows tight at the point. Throws if the point
/// is not feasible within the feasibility tolerance.
template <class T>
int active_rank(const LpProblem<T>& p, std::span<const T> x,
                T feas_tol = lptol::Tol<T>::feasibility(),
                T tight_tol = lptol::Tol<T>::tightness()) {
    p.validate();
    if (static_cast<int>(x.size()) != p.num_vars)
        throw std::invalid_argument("active_rank: point size mismatch");
    if (detail::max_violation<T>(p, x) > feas_tol)
        throw std::invalid_argument("active_rank: infeasible point");

    std::vector<std::vector<T>> rows;
    for (const auto& c : p.constraints) {
        const T lhs = detail::dot_terms<T>(c.terms, x);
        if (c.rel == Relation::Eq || !(detail::tabs<T>(lhs - c.rhs) > tight_tol)) {
            std::vector<T> r(p.num_vars, T{});
            for (const auto& t : c.terms) r[t.var] += t.coeff;
            rows.push_back(std::move(r));
        }
    }
    for (int i = 0; i < p.num_vars; ++i) {
        if (!(detail::tabs<T>(x[i] - p.bounds[i].first) > tight_tol) ||
            !(detail::tabs<T>(x[i] - p.bounds[i].second) > tight_tol)) {
            std::vector<T> r(p.num_vars, T{});
            r[i] = T(1);
            rows.push_back(std::move(r));
        }
    }
    const T rank_eps = lptol::Tol<T>::exact ? T(0) : T(1e-9);
    return detail::matrix_rank<T>(std::move(rows), p.num_vars, rank_eps);
}

/// Debug dump in the conventional LP text format.
template <class T>
void write_lp_format(const LpProblem<T>& p, std::ostream& os) {
    os << "Minimize\n obj:";
    for (int j = 0; j < p.num_vars; ++j) {
        if (p.objective[j] == T(0)) continue;
        const bool neg = p.objective[j] < T(0);
        os << (neg ? " - " : " + ") << (neg ? T(-p.objective[j]) : p.objective[j]) << " x" << j;
    }
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < p.constraints.size(); ++r) {
        os << " c" << r << ":";
        for (const auto& t : p.constraints[r].terms) {
            const bool neg = t.coeff < T(0);
            os << (neg ? " - " : " + ") << (neg ? T(-t.coeff) : t.coeff) << " x" << t.var;
        }
        os << (p.constraints[r].rel == Relation::Eq ? " = " : " <= ") << p.constraints[r].rhs
           << "\n";
    }
    os << "Bounds\n";
    for (int j = 0; j < p.num_vars; ++j)
        os << " " << p.bounds[j].first << " <= x" << j << " <= " << p.bounds[j].second << "\n";
    os << "End\n";
}

}  // namespace pairlp
