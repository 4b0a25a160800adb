#pragma once

// Experiment runner: WER sweeps, distance-vs-length sweeps, the empirical
// codeword-independence check, config/seed management and CSV emission.
//
// Seed derivation (documented contract): job index t under master seed s uses
// derive_seed(s, t) = splitmix64(s + (t + 1) * 0x9E3779B97F4A7C15), so any
// trial is reproducible in isolation and trials may run in parallel on
// independent streams. Aggregation is order-independent (integer tallies into
// per-trial slots), so results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pairlp/channel.hpp"
#include "pairlp/decoder.hpp"
#include "pairlp/distance.hpp"
#include "pairlp/linear_code.hpp"
#include "pairlp/pair_metric.hpp"
#include "pairlp/polytope.hpp"

namespace pairlp {

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return detail::splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

namespace detail {

/// Run fn(job) for job = 0..count-1 on `threads` workers (0 = hardware).
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

struct ExperimentConfig {
    enum class Kind { Wer, Distance, DistanceSweep, Decode, GenCode, SymmetryCheck };

    Kind kind = Kind::Wer;
    std::string code_path;      // alist file; empty = generate from ensemble
    int n = 0;
    int var_degree = 3;
    int chk_degree = 4;
    std::uint64_t code_seed = 1;

    std::vector<double> p_grid;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::string out_path;       // empty or "-" = stdout
    bool use_lp = true;
    bool use_ml = false;
    bool random_codeword = false;  // default all-zeros transmission
    bool exact = false;            // distance: also enumerate exact values
    std::vector<int> lengths;      // distance sweep
    int samples = 20;
    long symmetry_samples = 1000;
    double p = 0.3;                // decode / symmetry-check
    int threads = 0;

    void validate() const {
        for (double q : p_grid)
            if (!(q > 0.0) || !(q < 0.75))
                throw std::invalid_argument("config: p grid values must lie in (0, 0.75)");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
    }
};

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

/// Flat key=value config text ('#' comments). Unknown keys are rejected.
inline void load_config_file(ExperimentConfig& cfg, std::istream& is) {
    static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&)>>
        setters = {
            {"code", [](ExperimentConfig& c, const std::string& v) { c.code_path = v; }},
            {"n", [](ExperimentConfig& c, const std::string& v) { c.n = std::stoi(v); }},
            {"var-deg", [](ExperimentConfig& c, const std::string& v) { c.var_degree = std::stoi(v); }},
            {"chk-deg", [](ExperimentConfig& c, const std::string& v) { c.chk_degree = std::stoi(v); }},
            {"code-seed", [](ExperimentConfig& c, const std::string& v) { c.code_seed = std::stoull(v); }},
            {"p", [](ExperimentConfig& c, const std::string& v) { c.p = std::stod(v); }},
            {"p-grid", [](ExperimentConfig& c, const std::string& v) { c.p_grid = parse_double_list(v); }},
            {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = std::stol(v); }},
            {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = std::stoull(v); }},
            {"out", [](ExperimentConfig& c, const std::string& v) { c.out_path = v; }},
            {"decoders", [](ExperimentConfig& c, const std::string& v) {
                 c.use_lp = v.find("lp") != std::string::npos;
                 c.use_ml = v.find("ml") != std::string::npos;
             }},
            {"random-codeword", [](ExperimentConfig& c, const std::string& v) { c.random_codeword = v == "1" || v == "true"; }},
            {"exact", [](ExperimentConfig& c, const std::string& v) { c.exact = v == "1" || v == "true"; }},
            {"lengths", [](ExperimentConfig& c, const std::string& v) { c.lengths = parse_int_list(v); }},
            {"samples", [](ExperimentConfig& c, const std::string& v) { c.samples = std::stoi(v); }},
            {"symmetry-samples", [](ExperimentConfig& c, const std::string& v) { c.symmetry_samples = std::stol(v); }},
            {"threads", [](ExperimentConfig& c, const std::string& v) { c.threads = std::stoi(v); }},
        };
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        const auto it = setters.find(key);
        if (it == setters.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(cfg, val);
    }
}

/// Load the code named by the config: alist file if given, else a Gallager
/// ensemble sample (n, var-deg, chk-deg, code-seed).
inline BinaryCode load_code(const ExperimentConfig& cfg) {
    if (!cfg.code_path.empty()) return read_alist_file(cfg.code_path);
    if (cfg.n <= 0) throw std::invalid_argument("config: need code=FILE or ensemble parameters");
    return gallager_ensemble(cfg.n, cfg.var_degree, cfg.chk_degree, cfg.code_seed);
}

// ---------------------------------------------------------------------------
// WER experiment

struct WerRecord {
    double p = 0.0;
    std::string decoder;
    long trials = 0;
    long word_errors = 0;     // = integral_wrong + fractional for the LP row
    double wer = 0.0;
    long ties = 0;            // trials whose likelihood argmin is non-unique
    long integral_wrong = 0;  // LP only
    long fractional = 0;      // LP only
    long solver_errors = 0;   // never expected; surfaced, not counted as WER
};

namespace detail {

struct TrialOutcome {
    std::uint8_t lp_fractional = 0;
    std::uint8_t lp_wrong = 0;
    std::uint8_t lp_solver_error = 0;
    std::uint8_t ml_wrong = 0;
    std::uint8_t tie = 0;
};

}  // namespace detail

/// Monte-Carlo word-error rates over the p grid. Per-trial sub-seeds:
/// stream 0 picks the transmitted codeword (random-codeword mode), stream 1
/// drives the channel.
inline std::vector<WerRecord> run_wer(const ExperimentConfig& cfg, const BinaryCode& code) {
    cfg.validate();
    if (cfg.p_grid.empty()) throw std::invalid_argument("run_wer: empty p grid");
    if (!cfg.use_lp && !cfg.use_ml) throw std::invalid_argument("run_wer: no decoder enabled");

    const FundamentalPolytope poly(code);
    std::vector<Bits> codebook;
    std::vector<Bits> basis;
    if (cfg.use_ml || cfg.random_codeword) {
        const int k = code_dimension(code);
        if (cfg.use_ml && k > 24)
            throw std::invalid_argument("run_wer: ML needs dimension <= 24");
        basis = codeword_basis(code);
        if (cfg.use_ml) codebook = enumerate_codewords(code);
    }

    std::vector<WerRecord> records;
    for (std::size_t pi_idx = 0; pi_idx < cfg.p_grid.size(); ++pi_idx) {
        const ChannelParams params(cfg.p_grid[pi_idx]);
        std::vector<detail::TrialOutcome> slots(cfg.trials);

        detail::parallel_for(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
            const std::uint64_t trial_seed =
                derive_seed(cfg.seed, pi_idx * static_cast<std::uint64_t>(cfg.trials) + t);
            Bits sent(code.length(), 0);
            if (cfg.random_codeword && !basis.empty()) {
                std::mt19937_64 rng(derive_seed(trial_seed, 0));
                for (const Bits& b : basis) {
                    if (rng() & 1)
                        for (std::size_t i = 0; i < sent.size(); ++i) sent[i] ^= b[i];
                }
            }
            const PairVector y = transmit(sent, params, derive_seed(trial_seed, 1));
            detail::TrialOutcome& out = slots[t];

            if (cfg.use_lp) {
                const DecodeOutcome lp = lp_decode(poly, y, params);
                switch (lp.kind) {
                    case DecodeOutcome::Kind::Fractional:
                        out.lp_fractional = 1;
                        break;
                    case DecodeOutcome::Kind::Integral:
                        out.lp_wrong = lp.codeword != sent;
                        break;
                    case DecodeOutcome::Kind::SolverError:
                        out.lp_solver_error = 1;
                        break;
                }
            }
            if (cfg.use_ml) {
                const MlResult ml = ml_decode(codebook, y, params);
                out.ml_wrong = ml.codeword != sent;
                out.tie = ml.tie;
            }
        });

        long ties = 0;
        for (const auto& s : slots) ties += s.tie;
        if (cfg.use_lp) {
            WerRecord r;
            r.p = cfg.p_grid[pi_idx];
            r.decoder = "lp";
            r.trials = cfg.trials;
            for (const auto& s : slots) {
                r.integral_wrong += s.lp_wrong;
                r.fractional += s.lp_fractional;
                r.solver_errors += s.lp_solver_error;
            }
            r.word_errors = r.integral_wrong + r.fractional;
            r.wer = double(r.word_errors) / double(r.trials);
            r.ties = ties;
            records.push_back(std::move(r));
        }
        if (cfg.use_ml) {
            WerRecord r;
            r.p = cfg.p_grid[pi_idx];
            r.decoder = "ml";
            r.trials = cfg.trials;
            for (const auto& s : slots) r.word_errors += s.ml_wrong;
            r.wer = double(r.word_errors) / double(r.trials);
            r.ties = ties;
            records.push_back(std::move(r));
        }
    }
    return records;
}

inline void write_wer_csv(const ExperimentConfig& cfg, const std::vector<WerRecord>& records,
                          std::ostream& os) {
    os << "# pairlp-csv v1 kind=wer seed=" << cfg.seed << " trials=" << cfg.trials
       << " tx=" << (cfg.random_codeword ? "random" : "zeros") << "\n";
    os << "p,decoder,trials,word_errors,wer,ties,integral_wrong,fractional,solver_errors\n";
    for (const auto& r : records) {
        os << detail::format_double(r.p) << ',' << r.decoder << ',' << r.trials << ','
           << r.word_errors << ',' << detail::format_double(r.wer) << ',' << r.ties << ','
           << r.integral_wrong << ',' << r.fractional << ',' << r.solver_errors << "\n";
    }
}

// ---------------------------------------------------------------------------
// Distance-vs-length sweep (the Fig. 1 experiment)

struct DistanceSweepRow {
    int n = 0;
    int samples = 0;
    double mean_d_f = 0.0;
    double mean_d_fp = 0.0;
    double ratio = 0.0;  // mean_d_fp / mean_d_f
    int skipped_facets = 0;
};

/// Sample `samples` ensemble codes per length and average both facet-sweep
/// lower bounds. Code for (length index li, sample s) uses seed
/// derive_seed(master, li * samples + s).
inline std::vector<DistanceSweepRow> run_distance_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.lengths.empty()) throw std::invalid_argument("run_distance_sweep: no lengths");

    struct Cell {
        double d_f = 0.0, d_fp = 0.0;
        int skipped = 0;
    };
    const std::size_t total = cfg.lengths.size() * static_cast<std::size_t>(cfg.samples);
    std::vector<Cell> cells(total);

    detail::parallel_for(total, cfg.threads, [&](std::size_t job) {
        const std::size_t li = job / cfg.samples;
        const BinaryCode code = gallager_ensemble(cfg.lengths[li], cfg.var_degree,
                                                  cfg.chk_degree, derive_seed(cfg.seed, job));
        const FundamentalPolytope poly(code);
        const DistanceReport rep = facet_sweep(poly);
        cells[job] = Cell{rep.d_f_lower, rep.d_fp_lower, rep.skipped_facets};
    });

    std::vector<DistanceSweepRow> rows;
    for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
        DistanceSweepRow row;
        row.n = cfg.lengths[li];
        row.samples = cfg.samples;
        for (int s = 0; s < cfg.samples; ++s) {
            const Cell& c = cells[li * cfg.samples + s];
            row.mean_d_f += c.d_f;
            row.mean_d_fp += c.d_fp;
            row.skipped_facets += c.skipped;
        }
        row.mean_d_f /= cfg.samples;
        row.mean_d_fp /= cfg.samples;
        row.ratio = row.mean_d_fp / row.mean_d_f;
        rows.push_back(row);
    }
    return rows;
}

inline void write_sweep_csv(const ExperimentConfig& cfg, const std::vector<DistanceSweepRow>& rows,
                            std::ostream& os) {
    os << "# pairlp-csv v1 kind=distance-sweep seed=" << cfg.seed
       << " var_deg=" << cfg.var_degree << " chk_deg=" << cfg.chk_degree << "\n";
    os << "n,samples,mean_d_f_lower,mean_d_fp_lower,ratio,skipped_facets\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.samples << ',' << detail::format_double(r.mean_d_f) << ','
           << detail::format_double(r.mean_d_fp) << ',' << detail::format_double(r.ratio) << ','
           << r.skipped_facets << "\n";
    }
}

// ---------------------------------------------------------------------------
// Codeword-independence (symmetry) check

struct SymmetryReport {
    long samples = 0;
    double max_loglik_dev = 0.0;   // | ln p(y|x) - ln p(y0|0) |
    double max_gap_dev = 0.0;      // LP optimal-gap mismatch
    bool involution_ok = true;     // (y0)0 == y on every sample
};

/// Sample (x in C, y uniform) pairs and verify the probability pairing and
/// the optimal-gap identity behind the all-zeros assumption.
inline SymmetryReport run_symmetry_check(const ExperimentConfig& cfg, const BinaryCode& code) {
    cfg.validate();
    if (code_dimension(code) > 16)
        throw std::invalid_argument("run_symmetry_check: dimension exceeds guard (16)");
    const ChannelParams params(cfg.p);
    const FundamentalPolytope poly(code);
    const std::vector<Bits> basis = codeword_basis(code);
    const int n = code.length();
    const Bits zero(n, 0);

    struct Dev {
        double ll = 0.0, gap = 0.0;
        bool involution = true;
    };
    std::vector<Dev> devs(cfg.symmetry_samples);

    detail::parallel_for(static_cast<std::size_t>(cfg.symmetry_samples), cfg.threads,
                         [&](std::size_t s) {
        std::mt19937_64 rng(derive_seed(cfg.seed, s));
        Bits x(n, 0);
        for (const Bits& b : basis)
            if (rng() & 1)
                for (int i = 0; i < n; ++i) x[i] ^= b[i];
        PairVector y(n);
        for (int i = 0; i < n; ++i) y[i] = pair_from_index(static_cast<int>(rng() % 4));

        const PairVector y0 = pair_xor(y, pi(x));
        Dev& d = devs[s];
        d.involution = pair_xor(y0, pi(x)) == y;
        d.ll = std::abs(log_likelihood(y, x, params) - log_likelihood(y0, zero, params));

        const DecodeOutcome a = lp_decode(poly, y, params);
        const DecodeOutcome b = lp_decode(poly, y0, params);
        if (a.kind == DecodeOutcome::Kind::SolverError || b.kind == DecodeOutcome::Kind::SolverError)
            throw std::runtime_error("run_symmetry_check: solver error");
        const double gap_x = a.objective - dot(cost_table(y, params), TauAssignment::indicator(x));
        const double gap_0 = b.objective - dot(cost_table(y0, params), TauAssignment::indicator(zero));
        d.gap = std::abs(gap_x - gap_0);
    });

    SymmetryReport rep;
    rep.samples = cfg.symmetry_samples;
    for (const auto& d : devs) {
        rep.max_loglik_dev = std::max(rep.max_loglik_dev, d.ll);
        rep.max_gap_dev = std::max(rep.max_gap_dev, d.gap);
        rep.involution_ok = rep.involution_ok && d.involution;
    }
    return rep;
}

}  // namespace pairlp
