#pragma once

// Fractional distance and fractional pair distance lower bounds via the
// facet sweep: for every constraint of Q(H) that the origin does not sit on,
// minimize the objective over Q(H) with that constraint held at equality.
// The minimum over facets lower-bounds the vertex minimum. W_fp turns into a
// single LP per facet through epigraph variables w_i >= max{x_i, x_{i+1}}.
//
// Exact d_p / d_fp on tiny codes come from codeword and vertex enumeration.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "pairlp/linear_code.hpp"
#include "pairlp/lp_core.hpp"
#include "pairlp/pair_metric.hpp"
#include "pairlp/polytope.hpp"

namespace pairlp {

struct FacetMinimum {
    int row_index = -1;          // constraint index in FundamentalPolytope
    bool feasible = true;        // false: facet LP infeasible, skipped
    double min_wfp = std::numeric_limits<double>::quiet_NaN();
    double min_f = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> minimizer_wfp;  // x attaining min_wfp
};

struct DistanceReport {
    double d_f_lower = std::numeric_limits<double>::quiet_NaN();
    double d_fp_lower = std::numeric_limits<double>::quiet_NaN();
    std::optional<int> d_p_exact;
    std::optional<double> d_fp_exact;
    std::vector<FacetMinimum> per_facet;
    int skipped_facets = 0;
};

namespace detail {

/// min sum_i x_i over Q(H) with the facet row held at equality.
inline LpProblem<double> facet_lp_fractional(const FundamentalPolytope& poly, int facet_row) {
    const int n = poly.dimension();
    LpProblem<double> lp;
    for (int i = 0; i < n; ++i) lp.add_variable(0.0, 1.0, 1.0);
    for (const auto& row : poly.rows())
        if (row.kind == PolytopeRow::Kind::Forbidden)
            lp.add_constraint(row.terms, Relation::LessEq, row.rhs);
    const auto& facet = poly.rows().at(facet_row);
    lp.add_constraint(facet.terms, Relation::Eq, facet.rhs);
    return lp;
}

/// min sum_i w_i with w_i >= x_i, w_i >= x_{i+1 mod n}; the objective presses
/// every w_i onto the max, so the optimum equals min W_fp on the facet.
inline LpProblem<double> facet_lp_pair(const FundamentalPolytope& poly, int facet_row) {
    const int n = poly.dimension();
    LpProblem<double> lp;
    for (int i = 0; i < n; ++i) lp.add_variable(0.0, 1.0, 0.0);  // x
    for (int i = 0; i < n; ++i) lp.add_variable(0.0, 1.0, 1.0);  // w
    for (const auto& row : poly.rows())
        if (row.kind == PolytopeRow::Kind::Forbidden)
            lp.add_constraint(row.terms, Relation::LessEq, row.rhs);
    for (int i = 0; i < n; ++i) {
        lp.add_constraint({{i, 1.0}, {n + i, -1.0}}, Relation::LessEq, 0.0);
        lp.add_constraint({{(i + 1) % n, 1.0}, {n + i, -1.0}}, Relation::LessEq, 0.0);
    }
    const auto& facet = poly.rows().at(facet_row);
    lp.add_constraint(facet.terms, Relation::Eq, facet.rhs);
    return lp;
}

}  // namespace detail

/// Minimize both objectives over one facet. Infeasible facet LPs (redundant
/// constraints unreachable at equality) come back with feasible = false.
inline FacetMinimum minimize_over_facet(const FundamentalPolytope& poly, int facet_row) {
    FacetMinimum out;
    out.row_index = facet_row;

    const LpSolution<double> sf = solve(detail::facet_lp_fractional(poly, facet_row));
    if (sf.status != LpStatus::Optimal) {
        out.feasible = false;
        return out;
    }
    out.min_f = sf.objective_value;

    const LpSolution<double> sw = solve(detail::facet_lp_pair(poly, facet_row));
    if (sw.status != LpStatus::Optimal) {
        out.feasible = false;
        return out;
    }
    out.min_wfp = sw.objective_value;
    const int n = poly.dimension();
    out.minimizer_wfp.assign(sw.point.begin(), sw.point.begin() + n);
    return out;
}

/// Full facet sweep. Serial; callers that want parallelism split the facet
/// list themselves (each facet LP is independent).
inline DistanceReport facet_sweep(const FundamentalPolytope& poly) {
    const std::vector<int> facets = poly.facet_candidates();
    if (facets.empty()) throw std::invalid_argument("facet_sweep: no facet candidates");

    DistanceReport rep;
    rep.d_f_lower = std::numeric_limits<double>::infinity();
    rep.d_fp_lower = std::numeric_limits<double>::infinity();
    for (int f : facets) {
        FacetMinimum fm = minimize_over_facet(poly, f);
        if (fm.feasible) {
            rep.d_f_lower = std::min(rep.d_f_lower, fm.min_f);
            rep.d_fp_lower = std::min(rep.d_fp_lower, fm.min_wfp);
        } else {
            ++rep.skipped_facets;
        }
        rep.per_facet.push_back(std::move(fm));
    }
    return rep;
}

inline double fractional_distance_lb(const FundamentalPolytope& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (int f : poly.facet_candidates()) {
        const LpSolution<double> s = solve(detail::facet_lp_fractional(poly, f));
        if (s.status == LpStatus::Optimal) best = std::min(best, s.objective_value);
    }
    return best;
}

inline double fractional_pair_distance_lb(const FundamentalPolytope& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (int f : poly.facet_candidates()) {
        const LpSolution<double> s = solve(detail::facet_lp_pair(poly, f));
        if (s.status == LpStatus::Optimal) best = std::min(best, s.objective_value);
    }
    return best;
}

/// Exact (d_p, d_fp) by enumeration: d_p = min W_p over nonzero codewords,
/// d_fp = min W_fp over nonzero vertices of Q(H). Tiny codes only.
inline std::pair<int, double> exact_distances(const BinaryCode& code,
                                              const FundamentalPolytope& poly) {
    if (code.length() > 10)
        throw std::length_error("exact_distances: n exceeds guard (10)");
    if (code_dimension(code) > 20)
        throw std::length_error("exact_distances: dimension exceeds guard (20)");

    int d_p = code.length() + 1;
    for (const Bits& cw : enumerate_codewords(code)) {
        if (hamming_weight(cw) == 0) continue;
        d_p = std::min(d_p, pair_weight(cw));
    }

    double d_fp = std::numeric_limits<double>::infinity();
    for (const auto& v : poly.enumerate_vertices()) {
        double mass = 0.0;
        for (double c : v) mass += std::abs(c);
        if (mass <= 1e-7) continue;  // the origin
        d_fp = std::min(d_fp, fractional_pair_weight(v));
    }
    return {d_p, d_fp};
}

/// Distance CSV: one row per facet plus a trailing summary row.
inline void write_distance_csv(const FundamentalPolytope& poly, const DistanceReport& rep,
                               std::ostream& os) {
    os << "# pairlp-csv v1 kind=distance n=" << poly.dimension()
       << " m=" << poly.code().num_checks() << "\n";
    os << "facet,source,min_wfp,min_f\n";
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    for (const auto& fm : rep.per_facet) {
        os << fm.row_index << ',' << poly.rows()[fm.row_index].source() << ',';
        if (fm.feasible)
            os << fmt(fm.min_wfp) << ',' << fmt(fm.min_f) << '\n';
        else
            os << "skipped,skipped\n";
    }
    os << "summary,d_fp_lower=" << fmt(rep.d_fp_lower) << ';' << "d_f_lower=" << fmt(rep.d_f_lower);
    if (rep.d_p_exact) os << ";d_p_exact=" << *rep.d_p_exact;
    if (rep.d_fp_exact) os << ";d_fp_exact=" << fmt(*rep.d_fp_exact);
    os << ",skipped=" << rep.skipped_facets << ",\n";
}

}  // namespace pairlp
