// Command-line front end: code generation, single decodes, WER sweeps,
// distance computations and the codeword-independence check. Subcommand
// options may also come from a flat key=value config file via --config.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "pairlp/harness.hpp"

using namespace pairlp;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;

std::ofstream open_output(const std::string& path, std::ostream*& os) {
    std::ofstream file;
    if (path.empty() || path == "-") {
        os = &std::cout;
    } else {
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        os = &file;
    }
    return file;
}

void apply_config(ExperimentConfig& cfg, const std::string& path) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    load_config_file(cfg, f);
}

int cmd_gen_code(const ExperimentConfig& cfg) {
    const BinaryCode code = gallager_ensemble(cfg.n, cfg.var_degree, cfg.chk_degree, cfg.code_seed);
    std::ostream* os = nullptr;
    auto file = open_output(cfg.out_path, os);
    write_alist(code, *os);
    std::cerr << "generated n=" << code.length() << " m=" << code.num_checks()
              << " k=" << code_dimension(code) << "\n";
    return 0;
}

int cmd_decode(const ExperimentConfig& cfg, const std::string& rx_path, bool also_ml,
               const std::string& dump_lp) {
    const BinaryCode code = load_code(cfg);
    std::ifstream rx(rx_path);
    if (!rx) throw std::invalid_argument("cannot open received vector file: " + rx_path);
    std::string line, all;
    while (std::getline(rx, line)) all += line + ' ';
    const PairVector y = parse_pair_vector(all);
    if (static_cast<int>(y.size()) != code.length())
        throw std::invalid_argument("received vector length does not match the code");

    const ChannelParams params(cfg.p);
    const FundamentalPolytope poly(code);
    if (!dump_lp.empty()) {
        std::ofstream f(dump_lp);
        if (!f) throw std::invalid_argument("cannot open LP dump file: " + dump_lp);
        write_lp_format(build_decoding_lp(poly, cost_table(y, params)), f);
    }
    const DecodeOutcome out = lp_decode(poly, y, params);

    switch (out.kind) {
        case DecodeOutcome::Kind::Integral: {
            std::cout << "outcome: integral\ncodeword: ";
            for (auto b : out.codeword) std::cout << int(b);
            std::cout << "\nobjective: " << detail::format_double(out.objective)
                      << "\nml_certificate: true\n";
            break;
        }
        case DecodeOutcome::Kind::Fractional: {
            std::cout << "outcome: fractional\nx:";
            for (double v : out.x) std::cout << ' ' << detail::format_double(v);
            std::cout << "\nobjective: " << detail::format_double(out.objective)
                      << "\nml_certificate: false\n";
            break;
        }
        case DecodeOutcome::Kind::SolverError:
            std::cout << "outcome: solver-error\nmessage: " << out.message << "\n";
            return kExitSolver;
    }
    if (also_ml) {
        const MlResult ml = ml_decode(code, y, params);
        std::cout << "ml_codeword: ";
        for (auto b : ml.codeword) std::cout << int(b);
        std::cout << "\nml_objective: " << detail::format_double(ml.objective)
                  << "\nml_tie: " << (ml.tie ? "true" : "false") << "\n";
    }
    return 0;
}

int cmd_wer(const ExperimentConfig& cfg) {
    const BinaryCode code = load_code(cfg);
    const auto records = run_wer(cfg, code);
    std::ostream* os = nullptr;
    auto file = open_output(cfg.out_path, os);
    write_wer_csv(cfg, records, *os);
    long solver_errors = 0;
    for (const auto& r : records) solver_errors += r.solver_errors;
    if (solver_errors > 0) {
        std::cerr << "warning: " << solver_errors << " solver errors\n";
        return kExitSolver;
    }
    return 0;
}

int cmd_distance(const ExperimentConfig& cfg) {
    const BinaryCode code = load_code(cfg);
    const FundamentalPolytope poly(code);
    DistanceReport rep = facet_sweep(poly);
    if (cfg.exact) {
        const auto [dp, dfp] = exact_distances(code, poly);
        rep.d_p_exact = dp;
        rep.d_fp_exact = dfp;
    }
    std::ostream* os = nullptr;
    auto file = open_output(cfg.out_path, os);
    write_distance_csv(poly, rep, *os);
    std::cerr << "d_f_lower=" << rep.d_f_lower << " d_fp_lower=" << rep.d_fp_lower << "\n";
    return 0;
}

int cmd_distance_sweep(const ExperimentConfig& cfg) {
    const auto rows = run_distance_sweep(cfg);
    std::ostream* os = nullptr;
    auto file = open_output(cfg.out_path, os);
    write_sweep_csv(cfg, rows, *os);
    return 0;
}

int cmd_symmetry(const ExperimentConfig& cfg) {
    const BinaryCode code = load_code(cfg);
    const SymmetryReport rep = run_symmetry_check(cfg, code);
    std::cout << "samples: " << rep.samples
              << "\nmax_loglik_dev: " << detail::format_double(rep.max_loglik_dev)
              << "\nmax_gap_dev: " << detail::format_double(rep.max_gap_dev)
              << "\ninvolution_ok: " << (rep.involution_ok ? "true" : "false") << "\n";
    const bool ok =
        rep.involution_ok && rep.max_loglik_dev <= 1e-12 && rep.max_gap_dev <= 1e-7;
    return ok ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LP decoding toolkit for symbol-pair read channels"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path, rx_path, dump_lp;
    std::string p_grid_text, lengths_text, decoders = "lp";
    bool also_ml = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags override)");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    };
    auto add_code_source = [&](CLI::App* sub) {
        sub->add_option("--code", cfg.code_path, "parity-check matrix (alist file)");
        sub->add_option("--n", cfg.n, "ensemble code length");
        sub->add_option("--var-deg", cfg.var_degree, "ensemble variable degree");
        sub->add_option("--chk-deg", cfg.chk_degree, "ensemble check degree");
        sub->add_option("--code-seed", cfg.code_seed, "ensemble seed");
    };

    CLI::App* gen = app.add_subcommand("gen-code", "sample a Gallager-ensemble code");
    gen->add_option("--n", cfg.n, "code length")->required();
    gen->add_option("--var-deg", cfg.var_degree, "variable degree");
    gen->add_option("--chk-deg", cfg.chk_degree, "check degree");
    gen->add_option("--seed", cfg.code_seed, "ensemble seed");
    gen->add_option("--out", cfg.out_path, "output alist file")->required();
    add_common(gen);

    CLI::App* dec = app.add_subcommand("decode", "LP-decode one received pair vector");
    add_code_source(dec);
    dec->add_option("--rx", rx_path, "received pair vector file (tokens \"ab\")")->required();
    dec->add_option("--p", cfg.p, "pair-error probability");
    dec->add_flag("--ml", also_ml, "also run the exhaustive ML decoder");
    dec->add_option("--dump-lp", dump_lp, "dump the decoding LP in LP text format");
    add_common(dec);

    CLI::App* wer = app.add_subcommand("wer", "Monte-Carlo word-error-rate sweep");
    add_code_source(wer);
    wer->add_option("--p-grid", p_grid_text, "comma-separated pair-error probabilities");
    wer->add_option("--trials", cfg.trials, "trials per grid point");
    wer->add_option("--seed", cfg.seed, "master seed");
    wer->add_option("--out", cfg.out_path, "output CSV ('-' = stdout)");
    wer->add_option("--decoders", decoders, "subset of lp,ml (default lp)");
    wer->add_flag("--random-codeword", cfg.random_codeword,
                  "transmit random codewords instead of all-zeros");
    add_common(wer);

    CLI::App* dist = app.add_subcommand("distance", "facet-sweep distance lower bounds");
    add_code_source(dist);
    dist->add_flag("--exact", cfg.exact, "also enumerate exact d_p / d_fp (tiny codes)");
    dist->add_option("--out", cfg.out_path, "output CSV ('-' = stdout)");
    add_common(dist);

    CLI::App* sweep = app.add_subcommand("distance-sweep", "average bounds vs block length");
    sweep->add_option("--lengths", lengths_text, "comma-separated block lengths")->required();
    sweep->add_option("--samples", cfg.samples, "ensemble samples per length");
    sweep->add_option("--var-deg", cfg.var_degree, "variable degree");
    sweep->add_option("--chk-deg", cfg.chk_degree, "check degree");
    sweep->add_option("--seed", cfg.seed, "master seed");
    sweep->add_option("--out", cfg.out_path, "output CSV ('-' = stdout)");
    add_common(sweep);

    CLI::App* sym = app.add_subcommand("symmetry-check", "empirical codeword independence");
    add_code_source(sym);
    sym->add_option("--samples", cfg.symmetry_samples, "number of (x, y) samples");
    sym->add_option("--p", cfg.p, "pair-error probability");
    sym->add_option("--seed", cfg.seed, "master seed");
    add_common(sym);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config(cfg, config_path);
        if (!p_grid_text.empty()) cfg.p_grid = parse_double_list(p_grid_text);
        if (!lengths_text.empty()) cfg.lengths = parse_int_list(lengths_text);
        if (wer->parsed()) {
            cfg.use_lp = decoders.find("lp") != std::string::npos;
            cfg.use_ml = decoders.find("ml") != std::string::npos;
        }
        cfg.validate();

        if (gen->parsed()) return cmd_gen_code(cfg);
        if (dec->parsed()) return cmd_decode(cfg, rx_path, also_ml, dump_lp);
        if (wer->parsed()) return cmd_wer(cfg);
        if (dist->parsed()) return cmd_distance(cfg);
        if (sweep->parsed()) return cmd_distance_sweep(cfg);
        if (sym->parsed()) return cmd_symmetry(cfg);
    } catch (const SimplexNumericalError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
