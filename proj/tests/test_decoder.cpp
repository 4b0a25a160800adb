#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pairlp/decoder.hpp"

using namespace pairlp;

namespace {

const BinaryCode& rep3() {
    static const BinaryCode code(3, {{0, 1}, {1, 2}});
    return code;
}

const BinaryCode& cycle6() {
    static const BinaryCode code(6, {{0, 1, 2}, {0, 1, 3}, {2, 4, 5}, {3, 4, 5}});
    return code;
}

PairVector random_received(int n, std::mt19937_64& rng) {
    PairVector y(n);
    for (auto& q : y) q = pair_from_index(int(rng() % 4));
    return y;
}

Bits random_codeword(const std::vector<Bits>& basis, int n, std::mt19937_64& rng) {
    Bits x(n, 0);
    for (const Bits& b : basis)
        if (rng() & 1)
            for (int i = 0; i < n; ++i) x[i] ^= b[i];
    return x;
}

// random feasible point of the decoding LP: convex combination of codeword
// indicator points
std::pair<std::vector<double>, TauAssignment> random_feasible_point(
    const std::vector<Bits>& words, std::mt19937_64& rng) {
    const int n = static_cast<int>(words.front().size());
    const int picks = 2 + int(rng() % 3);
    std::vector<double> weights(picks);
    double total = 0.0;
    for (double& w : weights) {
        w = 1.0 + double(rng() % 1000);
        total += w;
    }
    TauAssignment tau(n);
    for (int t = 0; t < picks; ++t) {
        const Bits& cw = words[rng() % words.size()];
        const double w = weights[t] / total;
        const TauAssignment ind = TauAssignment::indicator(cw);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 4; ++k) tau(i, k) += w * ind(i, k);
    }
    std::vector<double> x = tau.coupled_x();
    return {std::move(x), std::move(tau)};
}

}  // namespace

TEST_CASE("decoding LP shape and counts") {
    const FundamentalPolytope poly(cycle6());
    const CostTable lambda = cost_table(PairVector(6, SymbolPair{0, 0}), ChannelParams(0.3));
    const LpProblem<double> lp = build_decoding_lp(poly, lambda);

    CHECK(lp.num_vars == 5 * 6);
    std::size_t eqs = 0, ineqs = 0;
    for (const auto& c : lp.constraints) (c.rel == Relation::Eq ? eqs : ineqs)++;
    CHECK(eqs == 3u * 6);
    // inequality rows + variable bound sides = |Q(H)| + 8n
    CHECK(ineqs + 2u * 6 == poly.constraint_count());
    CHECK(ineqs + 2u * lp.num_vars == poly.constraint_count() + 8u * 6);

    // objective weight sits on tau only
    for (int i = 0; i < 6; ++i) CHECK(lp.objective[i] == 0.0);
}

TEST_CASE("indicator points are feasible and price to the log likelihood") {
    std::mt19937_64 rng(17);
    const ChannelParams params(0.25);
    const FundamentalPolytope poly(cycle6());
    const auto words = enumerate_codewords(cycle6());
    for (int trial = 0; trial < 20; ++trial) {
        const PairVector y = random_received(6, rng);
        const CostTable lambda = cost_table(y, params);
        const LpProblem<double> lp = build_decoding_lp(poly, lambda);
        const Bits cw = words[rng() % words.size()];
        std::vector<double> point(lp.num_vars, 0.0);
        const TauAssignment ind = TauAssignment::indicator(cw);
        for (int i = 0; i < 6; ++i) point[i] = cw[i];
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 4; ++k) point[6 + 4 * i + k] = ind(i, k);
        CHECK(is_feasible<double>(lp, point, 1e-12));
        double obj = 0.0;
        for (int v = 0; v < lp.num_vars; ++v) obj += lp.objective[v] * point[v];
        CHECK_THAT(obj, Catch::Matchers::WithinAbs(-log_likelihood(y, cw, params), 1e-9));
    }
}

TEST_CASE("repetition-3 decodes its own transmissions") {
    const FundamentalPolytope poly(rep3());
    const ChannelParams params(0.3);
    const Bits zero(3, 0);
    const DecodeOutcome clean = lp_decode(poly, pi(zero), params);
    REQUIRE(clean.kind == DecodeOutcome::Kind::Integral);
    CHECK(clean.codeword == zero);
    CHECK(clean.ml_certificate);
}

TEST_CASE("repetition-3 corrects every single pair error") {
    const FundamentalPolytope poly(rep3());
    const ChannelParams params(0.3);
    const Bits zero(3, 0);
    for (int pos = 0; pos < 3; ++pos) {
        for (int k = 1; k < 4; ++k) {
            PairVector y = pi(zero);
            y[pos] = pair_from_index(k);
            const DecodeOutcome out = lp_decode(poly, y, params);
            CAPTURE(pos, k);
            REQUIRE(out.kind == DecodeOutcome::Kind::Integral);
            CHECK(out.codeword == zero);
        }
    }
}

TEST_CASE("cycle6 admits fractional decodes, some landing on fractional vertices") {
    const FundamentalPolytope poly(cycle6());
    const ChannelParams params(0.3);
    const auto words = enumerate_codewords(cycle6());
    std::mt19937_64 rng(23);
    int fractional_seen = 0, vertex_landings = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const PairVector y = random_received(6, rng);
        const DecodeOutcome out = lp_decode(poly, y, params);
        REQUIRE(out.kind != DecodeOutcome::Kind::SolverError);
        if (out.kind != DecodeOutcome::Kind::Fractional) continue;
        ++fractional_seen;
        CHECK_FALSE(out.ml_certificate);
        CHECK(poly.contains(out.x, 1e-7));
        // a fractional optimum undercuts or ties every codeword point
        CHECK(out.objective <= ml_decode(words, y, params).objective + 1e-9);
        if (poly.is_vertex(out.x)) {
            ++vertex_landings;
            for (double c : out.x)  // known half-integral vertex geometry
                CHECK((std::abs(c) < 1e-7 || std::abs(c - 0.5) < 1e-7 ||
                       std::abs(c - 1.0) < 1e-7));
        }
    }
    CHECK(fractional_seen >= 5);
    CHECK(vertex_landings >= 1);
}

TEST_CASE("ml decode basics") {
    const ChannelParams params(0.3);
    // noiseless transmissions decode to themselves
    std::mt19937_64 rng(31);
    const auto words = enumerate_codewords(cycle6());
    for (const Bits& cw : words) {
        const MlResult r = ml_decode(cycle6(), pi(cw), params);
        CHECK(r.codeword == cw);
        CHECK(r.pair_mismatches == 0);
    }

    // spec example: one pair error on each side of the ring
    const MlResult r = ml_decode(rep3(), PairVector{{1, 0}, {0, 0}, {0, 1}}, params);
    CHECK(r.codeword == Bits{0, 0, 0});
    CHECK(r.pair_mismatches == 2);
    CHECK_THAT(r.objective,
               Catch::Matchers::WithinAbs(-std::log(0.1 * 0.7 * 0.1), 1e-9));
}

TEST_CASE("integral LP outcomes match ML up to objective ties (certificate)") {
    std::mt19937_64 rng(37);
    const ChannelParams params(0.2);
    for (const BinaryCode& code : {cycle6(), gallager_ensemble(8, 3, 4, 2)}) {
        const FundamentalPolytope poly(code);
        const auto words = enumerate_codewords(code);
        for (int trial = 0; trial < 60; ++trial) {
            const PairVector y = random_received(code.length(), rng);
            const DecodeOutcome lp = lp_decode(poly, y, params);
            REQUIRE(lp.kind != DecodeOutcome::Kind::SolverError);
            const MlResult ml = ml_decode(words, y, params);
            if (lp.kind == DecodeOutcome::Kind::Integral) {
                CHECK_THAT(lp.objective, Catch::Matchers::WithinAbs(ml.objective, 1e-6));
                if (!ml.tie) CHECK(lp.codeword == ml.codeword);
            } else {
                // fractional optimum undercuts or ties every codeword
                CHECK(lp.objective <= ml.objective + 1e-9);
            }
        }
    }
}

TEST_CASE("cycle-free codes: integral outcomes match ML") {
    const BinaryCode tree(5, {{0, 1, 2}, {2, 3}, {3, 4}});
    const FundamentalPolytope poly(tree);
    const auto words = enumerate_codewords(tree);
    const ChannelParams params(0.3);
    std::mt19937_64 rng(41);
    int integral_seen = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const PairVector y = random_received(5, rng);
        const DecodeOutcome lp = lp_decode(poly, y, params);
        REQUIRE(lp.kind != DecodeOutcome::Kind::SolverError);
        if (lp.kind != DecodeOutcome::Kind::Integral) continue;
        ++integral_seen;
        const MlResult ml = ml_decode(words, y, params);
        CHECK_THAT(lp.objective, Catch::Matchers::WithinAbs(ml.objective, 1e-9));
        if (!ml.tie) CHECK(lp.codeword == ml.codeword);
    }
    CHECK(integral_seen >= 10);
}

TEST_CASE("regression: the tau chain admits non-vertex optima (Lemma 1 gap)") {
    // On this cycle-free code the relaxation is NOT exact: anti-correlated
    // tau blocks (tau_i = (0, 1/2, 1/2, 0)) with x = (1/2,...,1/2) form a
    // vertex of the full feasible region whose x-part is no vertex of Q(H),
    // and the optimum strictly undercuts every codeword.
    const BinaryCode tree(5, {{0, 1, 2}, {2, 3}, {3, 4}});
    const FundamentalPolytope poly(tree);
    const ChannelParams params(0.3);
    const PairVector y = parse_pair_vector("01 01 10 10 10");

    const DecodeOutcome out = lp_decode(poly, y, params);
    REQUIRE(out.kind == DecodeOutcome::Kind::Fractional);
    for (double v : out.x) CHECK_THAT(v, Catch::Matchers::WithinAbs(0.5, 1e-9));
    CHECK_FALSE(poly.is_vertex(out.x));

    // per position the anti-correlated block pays (A+B)/2
    const double expect = 5.0 * 0.5 * (params.correct_cost() + params.wrong_cost());
    CHECK_THAT(out.objective, Catch::Matchers::WithinAbs(expect, 1e-9));
    CHECK(out.objective < ml_decode(tree, y, params).objective - 0.5);

    // the solver still returned a vertex of the region it was given
    const LpProblem<double> lp = build_decoding_lp(poly, cost_table(y, params));
    const auto sol = solve(lp);
    CHECK(active_rank<double>(lp, sol.point) == lp.num_vars);
}

TEST_CASE("relative solution identities") {
    std::mt19937_64 rng(43);
    const auto words = enumerate_codewords(cycle6());
    const auto basis = codeword_basis(cycle6());
    const Bits zero(6, 0);

    // x = 0 is the identity transform
    for (int trial = 0; trial < 10; ++trial) {
        const auto [xf, tauf] = random_feasible_point(words, rng);
        const auto [xr, taur] = relative_solution(xf, tauf, zero);
        CHECK(xr == xf);
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 4; ++k) CHECK(taur(i, k) == tauf(i, k));
    }

    // the self-relative solution collapses to the zero indicator
    for (const Bits& cw : words) {
        std::vector<double> xf(cw.begin(), cw.end());
        const auto [xr, taur] = relative_solution(xf, TauAssignment::indicator(cw), cw);
        CHECK(xr == std::vector<double>(6, 0.0));
        for (int i = 0; i < 6; ++i) CHECK(taur(i, 0) == 1.0);
    }

    // involution, feasibility of the image, and |xf - x| coordinates
    const FundamentalPolytope poly(cycle6());
    for (int trial = 0; trial < 40; ++trial) {
        const auto [xf, tauf] = random_feasible_point(words, rng);
        const Bits x = random_codeword(basis, 6, rng);
        const auto [xr, taur] = relative_solution(xf, tauf, x);
        CHECK(taur.is_consistent_with(xr));
        CHECK(poly.contains(xr, 1e-9));
        for (int i = 0; i < 6; ++i)
            CHECK_THAT(xr[i], Catch::Matchers::WithinAbs(std::abs(xf[i] - x[i]), 1e-12));
        const auto [xb, taub] = relative_solution(xr, taur, x);
        for (int i = 0; i < 6; ++i) {
            CHECK_THAT(xb[i], Catch::Matchers::WithinAbs(xf[i], 1e-12));
            for (int k = 0; k < 4; ++k)
                CHECK_THAT(taub(i, k), Catch::Matchers::WithinAbs(tauf(i, k), 1e-12));
        }
    }

    TauAssignment bad(6);  // all-zero tau violates sum-to-one
    CHECK_THROWS_AS(relative_solution(std::vector<double>(6, 0.0), bad, zero),
                    std::invalid_argument);
}

TEST_CASE("cost identity of the relative solution") {
    std::mt19937_64 rng(47);
    const ChannelParams params(0.3);
    const auto words = enumerate_codewords(cycle6());
    const auto basis = codeword_basis(cycle6());
    const Bits zero(6, 0);

    for (int trial = 0; trial < 100; ++trial) {
        const auto [xf, tauf] = random_feasible_point(words, rng);
        const Bits x = random_codeword(basis, 6, rng);
        const PairVector y = random_received(6, rng);
        const auto [lhs, rhs] = cost_identity_check(y, x, xf, tauf, params);
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-9));
    }

    // xf = x makes both sides vanish
    for (const Bits& cw : words) {
        std::vector<double> xf(cw.begin(), cw.end());
        const PairVector y = random_received(6, rng);
        const auto [lhs, rhs] =
            cost_identity_check(y, cw, xf, TauAssignment::indicator(cw), params);
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(0.0, 1e-12));
        CHECK_THAT(rhs, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("optimal-gap equality across the relative transform (Theorem 2 route)") {
    std::mt19937_64 rng(53);
    const ChannelParams params(0.3);
    const FundamentalPolytope poly(cycle6());
    const auto basis = codeword_basis(cycle6());
    const Bits zero(6, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const Bits x = random_codeword(basis, 6, rng);
        const PairVector y = random_received(6, rng);
        const PairVector y0 = pair_xor(y, pi(x));

        const DecodeOutcome a = lp_decode(poly, y, params);
        const DecodeOutcome b = lp_decode(poly, y0, params);
        REQUIRE(a.kind != DecodeOutcome::Kind::SolverError);
        REQUIRE(b.kind != DecodeOutcome::Kind::SolverError);
        const double gap_x =
            a.objective - dot(cost_table(y, params), TauAssignment::indicator(x));
        const double gap_0 =
            b.objective - dot(cost_table(y0, params), TauAssignment::indicator(zero));
        CHECK_THAT(gap_x, Catch::Matchers::WithinAbs(gap_0, 1e-7));
    }
}

TEST_CASE("LP optima are vertices of the full feasible region") {
    // The solver guarantee: active rank 5n at every optimum. Integral
    // outcomes additionally project onto vertices of Q(H); fractional ones
    // may not (see the Lemma 1 regression above).
    std::mt19937_64 rng(59);
    const ChannelParams params(0.25);
    for (const BinaryCode& code : {cycle6(), gallager_ensemble(12, 3, 4, 8)}) {
        const FundamentalPolytope poly(code);
        for (int trial = 0; trial < 25; ++trial) {
            const PairVector y = random_received(code.length(), rng);
            const LpProblem<double> lp = build_decoding_lp(poly, cost_table(y, params));
            const auto sol = solve(lp);
            REQUIRE(sol.status == LpStatus::Optimal);
            CHECK(active_rank<double>(lp, sol.point) == lp.num_vars);

            const DecodeOutcome out = lp_decode(poly, y, params);
            REQUIRE(out.kind != DecodeOutcome::Kind::SolverError);
            CHECK(poly.contains(out.x, 1e-7));
            if (out.kind == DecodeOutcome::Kind::Integral) CHECK(poly.is_vertex(out.x));
        }
    }
}
