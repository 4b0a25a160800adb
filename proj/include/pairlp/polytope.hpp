#pragma once

// The fundamental polytope Q(H): box constraints 0 <= x_i <= 1 plus, for
// every check j and every odd-cardinality subset S of its support N(j), the
// forbidden-set inequality
//
//     sum_{i in S} x_i - sum_{i in N(j)\S} x_i <= |S| - 1.
//
// 2n + sum_j 2^{d_j - 1} constraints in total. Integral points of Q(H) are
// exactly the codewords; codes whose factor graph has cycles generally add
// fractional vertices.

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairlp/linear_code.hpp"
#include "pairlp/lp_core.hpp"

namespace pairlp {

struct PolytopeRow {
    enum class Kind : std::uint8_t { LowerBound, UpperBound, Forbidden };
    Kind kind;
    int var = -1;               // bound rows
    int check = -1;             // forbidden rows
    std::uint32_t subset = 0;   // mask over N(check); bit k <-> N(check)[k]
    std::vector<LinearTerm<double>> terms;  // row as "terms . x <= rhs"
    double rhs = 0.0;

    /// Human-readable source tag ("x3<=1", "chk2:S=0b0111").
    std::string source() const {
        if (kind == Kind::LowerBound) return "x" + std::to_string(var) + ">=0";
        if (kind == Kind::UpperBound) return "x" + std::to_string(var) + "<=1";
        std::string s = "chk" + std::to_string(check) + ":S=";
        for (int k = 31; k >= 0; --k)
            if (subset >> k) { for (int b = k; b >= 0; --b) s += char('0' + ((subset >> b) & 1)); break; }
        return s;
    }
};

class FundamentalPolytope {
  public:
    static constexpr int kMaxCheckWeight = 16;

    explicit FundamentalPolytope(const BinaryCode& code) : code_(code) {
        const int n = code.length();
        for (int i = 0; i < n; ++i) {
            PolytopeRow lo;
            lo.kind = PolytopeRow::Kind::LowerBound;
            lo.var = i;
            lo.terms = {{i, -1.0}};
            lo.rhs = 0.0;
            rows_.push_back(std::move(lo));
            PolytopeRow hi;
            hi.kind = PolytopeRow::Kind::UpperBound;
            hi.var = i;
            hi.terms = {{i, 1.0}};
            hi.rhs = 1.0;
            rows_.push_back(std::move(hi));
        }
        for (int j = 0; j < code.num_checks(); ++j) {
            const auto& nb = code.check(j);
            const int d = static_cast<int>(nb.size());
            if (d > kMaxCheckWeight)
                throw std::invalid_argument("FundamentalPolytope: check weight exceeds guard");
            for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << d); ++mask) {
                if ((std::popcount(mask) & 1) == 0) continue;
                PolytopeRow row;
                row.kind = PolytopeRow::Kind::Forbidden;
                row.check = j;
                row.subset = mask;
                row.terms.reserve(d);
                for (int k = 0; k < d; ++k)
                    row.terms.push_back({nb[k], (mask >> k) & 1 ? 1.0 : -1.0});
                row.rhs = double(std::popcount(mask)) - 1.0;
                rows_.push_back(std::move(row));
            }
        }
    }

    const BinaryCode& code() const { return code_; }
    int dimension() const { return code_.length(); }
    const std::vector<PolytopeRow>& rows() const { return rows_; }
    std::size_t constraint_count() const { return rows_.size(); }

    double slack(const PolytopeRow& row, std::span<const double> x) const {
        double lhs = 0.0;
        for (const auto& t : row.terms) lhs += t.coeff * x[t.var];
        return row.rhs - lhs;
    }

    bool contains(std::span<const double> x, double tol = 1e-9) const {
        if (static_cast<int>(x.size()) != dimension())
            throw std::invalid_argument("contains: point size mismatch");
        for (const auto& row : rows_)
            if (slack(row, x) < -tol) return false;
        return true;
    }

    /// A point of Q(H) is a vertex iff its tight constraints have rank n.
    bool is_vertex(std::span<const double> x, double tol = 1e-7) const {
        if (!contains(x, tol))
            throw std::invalid_argument("is_vertex: point not in polytope");
        return tight_rank(x, tol) == dimension();
    }

    int tight_rank(std::span<const double> x, double tol = 1e-7) const {
        std::vector<std::vector<double>> tight;
        for (const auto& row : rows_) {
            if (std::abs(slack(row, x)) <= tol) {
                std::vector<double> dense(dimension(), 0.0);
                for (const auto& t : row.terms) dense[t.var] += t.coeff;
                tight.push_back(std::move(dense));
            }
        }
        return detail::matrix_rank<double>(std::move(tight), dimension(), 1e-9);
    }

    /// Indices of the constraints the origin does not sit on: the n upper
    /// bounds and every forbidden row with |S| >= 3.
    std::vector<int> facet_candidates() const {
        std::vector<int> out;
        const std::vector<double> origin(dimension(), 0.0);
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (slack(rows_[r], origin) > 0.0) out.push_back(static_cast<int>(r));
        return out;
    }

    /// Brute-force vertex enumeration: unique solutions of n-subsets of
    /// constraint rows that lie in the polytope. Oracle for tiny codes.
    std::vector<std::vector<double>> enumerate_vertices(double dedup_tol = 1e-7) const {
        const int n = dimension();
        if (n > 10) throw std::length_error("enumerate_vertices: n exceeds guard (10)");
        const int nr = static_cast<int>(rows_.size());
        double subsets = 1.0;
        for (int i = 0; i < n; ++i) subsets *= double(nr - i) / double(i + 1);
        if (subsets > 4e7)
            throw std::length_error("enumerate_vertices: too many constraint subsets");

        std::vector<std::vector<double>> dense(nr, std::vector<double>(n + 1, 0.0));
        for (int r = 0; r < nr; ++r) {
            for (const auto& t : rows_[r].terms) dense[r][t.var] += t.coeff;
            dense[r][n] = rows_[r].rhs;
        }

        std::vector<std::vector<double>> found;
        std::vector<int> comb(n);
        for (int i = 0; i < n; ++i) comb[i] = i;
        std::vector<std::vector<double>> sys(n);
        std::vector<double> x(n);
        for (;;) {
            for (int i = 0; i < n; ++i) sys[i] = dense[comb[i]];
            if (solve_square(sys, x)) {
                for (double& c : x) {  // snap off solver fuzz
                    if (std::abs(c) < 1e-9) c = 0.0;
                    if (std::abs(c - 1.0) < 1e-9) c = 1.0;
                }
                if (contains(x, 1e-9)) {
                    bool dup = false;
                    for (const auto& v : found) {
                        bool same = true;
                        for (int i = 0; i < n; ++i)
                            if (std::abs(v[i] - x[i]) > dedup_tol) { same = false; break; }
                        if (same) { dup = true; break; }
                    }
                    if (!dup) found.push_back(x);
                }
            }
            // next combination
            int i = n - 1;
            while (i >= 0 && comb[i] == nr - n + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
        }
        std::sort(found.begin(), found.end());
        return found;
    }

  private:
    /// Gaussian elimination on an n x (n+1) system; false when singular.
    static bool solve_square(std::vector<std::vector<double>>& a, std::vector<double>& x) {
        const int n = static_cast<int>(x.size());
        for (int c = 0; c < n; ++c) {
            int sel = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(a[r][c]) > std::abs(a[sel][c])) sel = r;
            if (std::abs(a[sel][c]) < 1e-9) return false;
            std::swap(a[c], a[sel]);
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                const double f = a[r][c] / a[c][c];
                if (f == 0.0) continue;
                for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
            }
        }
        for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
        return true;
    }

    BinaryCode code_;
    std::vector<PolytopeRow> rows_;
};

}  // namespace pairlp
