#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pairlp/lp_core.hpp"

using namespace pairlp;

namespace {

// Brute-force LP oracle, independent of the simplex: enumerate all
// num_vars-subsets of {constraint rows at equality} u {bound rows}, solve the
// square systems, keep feasible points, take the best objective.
struct BruteResult {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> argmin;
};

bool solve_square(std::vector<std::vector<double>> a, std::vector<double>& x) {
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
            for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return true;
}

BruteResult brute_force_lp(const LpProblem<double>& p) {
    const int n = p.num_vars;
    std::vector<std::vector<double>> rows;  // dense [coeffs | rhs]
    for (const auto& c : p.constraints) {
        std::vector<double> r(n + 1, 0.0);
        for (const auto& t : c.terms) r[t.var] += t.coeff;
        r[n] = c.rhs;
        rows.push_back(std::move(r));
    }
    for (int i = 0; i < n; ++i) {
        std::vector<double> lo(n + 1, 0.0), hi(n + 1, 0.0);
        lo[i] = 1.0;
        lo[n] = p.bounds[i].first;
        hi[i] = 1.0;
        hi[n] = p.bounds[i].second;
        rows.push_back(std::move(lo));
        rows.push_back(std::move(hi));
    }

    BruteResult best;
    const int nr = static_cast<int>(rows.size());
    std::vector<int> comb(n);
    for (int i = 0; i < n; ++i) comb[i] = i;
    std::vector<double> x(n);
    for (;;) {
        std::vector<std::vector<double>> sys;
        for (int i = 0; i < n; ++i) sys.push_back(rows[comb[i]]);
        if (solve_square(sys, x) && is_feasible<double>(p, x, 1e-9)) {
            double obj = 0.0;
            for (int i = 0; i < n; ++i) obj += p.objective[i] * x[i];
            if (!best.feasible || obj < best.objective) {
                best.feasible = true;
                best.objective = obj;
                best.argmin = x;
            }
        }
        int i = n - 1;
        while (i >= 0 && comb[i] == nr - n + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
    }
    return best;
}

// All data lives on the 1/64 dyadic grid, so every double operation below is
// exact and the rational copy of the problem is consistent by construction.
LpProblem<double> random_feasible_lp(std::mt19937_64& rng) {
    LpProblem<double> p;
    const int n = 2 + int(rng() % 4);
    auto dyadic = [&rng](int lo64, int hi64) { return double(lo64 + int(rng() % (hi64 - lo64 + 1))) / 64.0; };
    for (int i = 0; i < n; ++i) p.add_variable(0.0, dyadic(32, 128), dyadic(-128, 128));
    // anchor point inside the box keeps the rows satisfiable
    std::vector<double> anchor(n);
    for (int i = 0; i < n; ++i) anchor[i] = dyadic(0, int(p.bounds[i].second * 64.0));
    const int nc = 2 + int(rng() % 6);
    for (int c = 0; c < nc; ++c) {
        std::vector<LinearTerm<double>> terms;
        double lhs = 0.0;
        for (int i = 0; i < n; ++i) {
            const int coeff = int(rng() % 5) - 2;
            if (coeff == 0) continue;
            terms.push_back({i, double(coeff)});
            lhs += coeff * anchor[i];
        }
        if (terms.empty()) {
            terms.push_back({0, 1.0});
            lhs = anchor[0];
        }
        const bool eq = rng() % 4 == 0;
        p.add_constraint(std::move(terms), eq ? Relation::Eq : Relation::LessEq,
                         eq ? lhs : lhs + dyadic(0, 64));
    }
    return p;
}

}  // namespace

TEST_CASE("one-variable box minimum") {
    LpProblem<double> p;
    p.add_variable(0.0, 1.0, 1.0);
    const auto s = solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.point[0] == 0.0);
    CHECK(s.objective_value == 0.0);
}

TEST_CASE("textbook simplex corner") {
    LpProblem<double> p;
    p.add_variable(0.0, 1.0, -1.0);
    p.add_variable(0.0, 1.0, -1.0);
    p.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::LessEq, 1.0);
    const auto s = solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK_THAT(s.objective_value, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    // deterministic tie rule: lowest-index entering variable first
    CHECK(s.point == std::vector<double>{1.0, 0.0});
}

TEST_CASE("infeasible LP is a status, not an exception") {
    LpProblem<double> p;
    p.add_variable(0.0, 1.0, 0.0);
    p.add_constraint({{0, 1.0}}, Relation::LessEq, -1.0);
    CHECK(solve(p).status == LpStatus::Infeasible);
}

TEST_CASE("redundant equalities terminate and solve") {
    LpProblem<double> p;
    p.add_variable(0.0, 2.0, 1.0);
    p.add_variable(0.0, 2.0, -1.0);
    p.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::Eq, 1.0);
    p.add_constraint({{0, 1.0}, {1, 1.0}}, Relation::Eq, 1.0);
    p.add_constraint({{0, 2.0}, {1, 2.0}}, Relation::Eq, 2.0);
    const auto s = solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK_THAT(s.objective_value, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK(s.point == std::vector<double>{0.0, 1.0});
}

TEST_CASE("degenerate cycling-prone LP terminates (Beale)") {
    // Beale's classic cycling example; Dantzig pivoting cycles without an
    // anti-cycling rule.
    LpProblem<double> p;
    const double big = 1e6;
    p.add_variable(0.0, big, -0.75);
    p.add_variable(0.0, big, 150.0);
    p.add_variable(0.0, big, -0.02);
    p.add_variable(0.0, big, 6.0);
    p.add_constraint({{0, 0.25}, {1, -60.0}, {2, -1.0 / 25}, {3, 9.0}}, Relation::LessEq, 0.0);
    p.add_constraint({{0, 0.5}, {1, -90.0}, {2, -1.0 / 50}, {3, 3.0}}, Relation::LessEq, 0.0);
    p.add_constraint({{2, 1.0}}, Relation::LessEq, 1.0);
    const auto s = solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK_THAT(s.objective_value, Catch::Matchers::WithinAbs(-0.05, 1e-9));
}

TEST_CASE("active rank examples") {
    for (int d : {2, 3, 5}) {
        LpProblem<double> p;
        for (int i = 0; i < d; ++i) p.add_variable(0.0, 1.0, 0.0);
        std::vector<double> corner(d, 1.0);
        std::vector<double> interior(d, 0.5);
        CHECK(active_rank<double>(p, corner) == d);
        CHECK(active_rank<double>(p, interior) == 0);
    }
    LpProblem<double> sq;
    sq.add_variable(0.0, 1.0, 0.0);
    sq.add_variable(0.0, 1.0, 0.0);
    const std::vector<double> edge_mid{0.0, 0.5};
    CHECK(active_rank<double>(sq, edge_mid) == 1);
    const std::vector<double> outside{-0.5, 0.5};
    CHECK_THROWS_AS(active_rank<double>(sq, outside), std::invalid_argument);
}

TEST_CASE("random LPs: simplex matches brute force and exact rational") {
    std::mt19937_64 rng(2718);
    int optimal_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const LpProblem<double> p = random_feasible_lp(rng);
        const BruteResult oracle = brute_force_lp(p);
        const auto s = solve(p);
        REQUIRE(s.status == LpStatus::Optimal);  // feasible by construction, box-bounded
        REQUIRE(oracle.feasible);
        ++optimal_seen;
        CAPTURE(trial);
        CHECK_THAT(s.objective_value, Catch::Matchers::WithinAbs(oracle.objective, 1e-7));

        // basic solution guarantee
        CHECK(active_rank<double>(p, s.point) == p.num_vars);

        // exact rational agreement
        const auto es = solve_exact(to_rational(p));
        REQUIRE(es.status == LpStatus::Optimal);
        CHECK_THAT(s.objective_value,
                   Catch::Matchers::WithinAbs(static_cast<double>(es.objective_value), 1e-7));

        // weak duality spot check at a feasible point
        std::vector<double> probe(p.num_vars);
        for (int i = 0; i < p.num_vars; ++i) probe[i] = oracle.argmin[i];
        double probe_obj = 0.0;
        for (int i = 0; i < p.num_vars; ++i) probe_obj += p.objective[i] * probe[i];
        CHECK(probe_obj >= s.objective_value - 1e-7);
    }
    CHECK(optimal_seen == 60);
}

TEST_CASE("determinism: identical problems give identical points") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const LpProblem<double> p = random_feasible_lp(rng);
        const auto a = solve(p);
        const auto b = solve(p);
        CHECK(a.point == b.point);
        CHECK(a.active_set == b.active_set);
    }
}

TEST_CASE("exact solver trivial cases and guard") {
    LpProblem<Rational> p;
    p.add_variable(Rational(0), Rational(1), Rational(1));
    const auto s = solve_exact(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.point[0] == Rational(0));

    LpProblem<Rational> q;
    for (int i = 0; i < 201; ++i) q.add_variable(Rational(0), Rational(1), Rational(1));
    CHECK_THROWS_AS(solve_exact(q), std::length_error);
}

TEST_CASE("exact solver: unbounded-status plumbing") {
    LpProblem<double> p;
    p.add_variable(0.0, 1.0, 0.0);
    p.add_constraint({{0, 1.0}}, Relation::LessEq, 2.0);
    const auto s = solve(p);
    CHECK(s.status == LpStatus::Optimal);  // bounds keep everything finite
}

TEST_CASE("lp format dump mentions every section") {
    LpProblem<double> p;
    p.add_variable(0.0, 1.0, 1.0);
    p.add_constraint({{0, 1.0}}, Relation::LessEq, 1.0);
    std::ostringstream os;
    write_lp_format(p, os);
    const std::string text = os.str();
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Bounds") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}
