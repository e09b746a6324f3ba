// Experiment driver: wires sources -> quantization -> sensing -> weights ->
// solvers into reproducible, seeded experiments.
//
//   mepcs generate    sample a source and quantize it to files
//   mepcs sense       measure a signal file with a seeded Gaussian matrix
//   mepcs recover     run one recovery instance and print its record
//   mepcs verify      run the verification suites (nonzero exit on failure)
//   mepcs sweep       recovery / robustness sweeps, CSV + optional SVG plot
//   mepcs converge    empirical-frequency convergence study
//   mepcs estimate-id conditional-entropy-over-b curve of a source
//
// Every command accepts --config FILE (key = value lines) and repeated
// --set key=value overrides; see README.md for the key reference.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mepcs/errors.hpp"
#include "mepcs/experiments.hpp"
#include "mepcs/io.hpp"
#include "mepcs/rng.hpp"
#include "mepcs/verify.hpp"

using namespace mepcs;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value experiment description");
    cmd->add_option("--set", opts.overrides, "override a config key (key=value), repeatable");
    cmd->add_option("--out", opts.out_dir, "output directory (default: $MEPCS_OUT_DIR or ./out)");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
}

KeyValueConfig load_kv(const CommonOpts& opts) {
    KeyValueConfig kv;
    if (!opts.config_path.empty()) kv = parse_config_file(opts.config_path);
    for (const std::string& assignment : opts.overrides) apply_config_override(kv, assignment);
    return kv;
}

ExperimentConfig load_experiment(const CommonOpts& opts) {
    ExperimentConfig cfg = experiment_from_config(load_kv(opts));
    if (opts.seed_given) cfg.master_seed = opts.seed;
    return cfg;
}

std::filesystem::path ensure_out_dir(const CommonOpts& opts) {
    const std::filesystem::path dir(opts.out_dir.empty() ? default_out_dir() : opts.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::strtoull(text.substr(pos, next - pos).c_str(), nullptr, 10));
        pos = next + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (std::size_t v : parse_size_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

const char* scheme_name(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::lmep: return "lmep";
        case WeightScheme::empirical_input: return "empirical-input";
        case WeightScheme::true_distribution: return "true-distribution";
        case WeightScheme::perturbed: return "perturbed";
        case WeightScheme::mismatched: return "mismatched";
    }
    return "?";
}

int cmd_generate(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_experiment(opts);
    cfg.source.validate();
    const std::filesystem::path dir = ensure_out_dir(opts);
    const std::vector<double> x = sample_source(cfg.source, cfg.n, cfg.master_seed);
    const QuantizedSequence xq = quantize_sequence(x, cfg.quant);
    write_signal(x, (dir / "signal.txt").string());
    write_signal(xq.values, (dir / "quantized.txt").string());
    std::printf("wrote %s and %s (n=%zu, b=%d, seed=%llu)\n",
                (dir / "signal.txt").string().c_str(), (dir / "quantized.txt").string().c_str(),
                cfg.n, cfg.quant.bits, static_cast<unsigned long long>(cfg.master_seed));
    return 0;
}

int cmd_sense(const CommonOpts& opts, const std::string& signal_path, std::size_t m, double rate,
              const std::string& matrix_out) {
    const ExperimentConfig cfg = load_experiment(opts);
    const std::filesystem::path dir = ensure_out_dir(opts);
    const std::vector<double> x = read_signal(signal_path);
    if (m == 0)
        m = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(rate * static_cast<double>(x.size()))));
    const SensingSystem a =
        generate_matrix(m, x.size(), cfg.master_seed, cfg.effective_lambda());
    write_signal(measure(a, x), (dir / "measurements.txt").string());
    if (!matrix_out.empty()) {
        std::ofstream out(matrix_out);
        for (std::size_t i = 0; i < a.m; ++i) {
            for (std::size_t j = 0; j < a.n; ++j)
                out << (j ? " " : "") << format_double(a.at(i, j));
            out << '\n';
        }
    }
    std::printf("wrote %s (m=%zu, n=%zu, seed=%llu)\n",
                (dir / "measurements.txt").string().c_str(), m, x.size(),
                static_cast<unsigned long long>(cfg.master_seed));
    return 0;
}

int cmd_recover(const CommonOpts& opts, double rate, int trial, const std::string& xhat_out,
                const std::string& trace_out) {
    ExperimentConfig cfg = load_experiment(opts);
    if (rate <= 0.0) rate = cfg.rates.empty() ? 0.7 : cfg.rates.front();
    if (!trace_out.empty()) cfg.schedule.record_trace = true;
    const RecoveryOutcome outcome = run_single_recovery(cfg, rate, trial);
    const SweepRow& row = outcome.row;
    std::printf("seed=%llu\n", static_cast<unsigned long long>(row.seed));
    std::printf("m=%zu\nn=%zu\nb=%d\nk=%d\n", row.m, row.n, cfg.quant.bits, cfg.k);
    std::printf("lambda=%s\n", format_double(cfg.effective_lambda()).c_str());
    std::printf("mode=%s\n", scheme_name(cfg.scheme));
    std::printf("cost=%s\n", format_double(row.cost).c_str());
    std::printf("structure=%s\n", format_double(row.structure).c_str());
    std::printf("residual=%s\n", format_double(row.residual).c_str());
    std::printf("normalized_error=%s\n", format_double(row.normalized_error).c_str());
    std::printf("success=%d\n", row.success ? 1 : 0);
    if (!xhat_out.empty()) write_signal(outcome.result.xhat.values, xhat_out);
    if (!trace_out.empty()) {
        std::ofstream out(trace_out);
        out << "step,coordinate,cost\n";
        for (const TraceEntry& t : outcome.result.trace)
            out << t.step << ',' << t.coordinate << ',' << format_double(t.cost) << '\n';
    }
    return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& only) {
    std::uint64_t seed = 1;
    if (!opts.config_path.empty()) seed = load_experiment(opts).master_seed;
    if (opts.seed_given) seed = opts.seed;
    int failures = 0;
    bool matched = false;
    for (const SuiteResult& result : run_all_suites(seed)) {
        if (!only.empty() && result.name != only) continue;
        matched = true;
        std::printf("%s  %s (%d/%d)%s%s\n", result.pass ? "PASS" : "FAIL", result.name.c_str(),
                    result.passed, result.total, result.detail.empty() ? "" : " ",
                    result.detail.c_str());
        if (!result.pass) ++failures;
    }
    if (!only.empty() && !matched) {
        std::fprintf(stderr, "error: unknown suite '%s'\n", only.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, bool plot) {
    const ExperimentConfig cfg = load_experiment(opts);
    const std::filesystem::path dir = ensure_out_dir(opts);
    const bool robustness =
        cfg.scheme == WeightScheme::perturbed || cfg.scheme == WeightScheme::mismatched;
    const SweepReport report =
        robustness && cfg.eps_w.size() > 1 ? run_robustness_sweep(cfg) : run_recovery_sweep(cfg);
    emit_report(report, (dir / "sweep.csv").string());
    if (plot) emit_success_plot_svg(report, (dir / "sweep.svg").string());
    for (const CellSummary& cell : report.summary)
        std::printf("rate=%-6s eps_w=%-6s success=%.3f mean_error=%.4f\n",
                    format_double(cell.rate).c_str(), format_double(cell.eps_w).c_str(),
                    cell.success_fraction, cell.mean_error);
    if (robustness && cfg.eps_w.size() > 1) {
        for (const RateThreshold& t : rate_thresholds(report)) {
            if (t.found)
                std::printf("threshold rate for eps_w=%s: %s\n",
                            format_double(t.eps_w).c_str(),
                            format_double(t.threshold_rate).c_str());
            else
                std::printf("threshold rate for eps_w=%s: not reached in the swept range\n",
                            format_double(t.eps_w).c_str());
        }
    }
    std::printf("wrote %s\n", (dir / "sweep.csv").string().c_str());
    return 0;
}

int cmd_converge(const CommonOpts& opts, const std::string& n_list) {
    const ExperimentConfig cfg = load_experiment(opts);
    const KeyValueConfig kv = load_kv(opts);
    std::string text = n_list;
    if (text.empty()) {
        auto it = kv.find("converge.n_list");
        text = it == kv.end() ? "100,1000,10000,100000" : it->second;
    }
    const std::vector<std::size_t> sizes = parse_size_list(text);
    const std::filesystem::path dir = ensure_out_dir(opts);
    const auto rows =
        run_convergence_study(cfg.source, cfg.quant, cfg.k, sizes, cfg.trials, cfg.master_seed);
    emit_convergence_table(rows, (dir / "convergence.csv").string());
    for (std::size_t n : sizes) {
        double total = 0.0;
        int count = 0;
        for (const auto& row : rows)
            if (row.n == n) {
                total += row.l1;
                ++count;
            }
        std::printf("n=%-8zu mean L1 deviation = %.5f over %d trials\n", n,
                    total / std::max(1, count), count);
    }
    std::printf("wrote %s\n", (dir / "convergence.csv").string().c_str());
    return 0;
}

int cmd_estimate_id(const CommonOpts& opts, const std::string& b_list) {
    const ExperimentConfig cfg = load_experiment(opts);
    const KeyValueConfig kv = load_kv(opts);
    std::string text = b_list;
    if (text.empty()) {
        auto it = kv.find("id.b_list");
        text = it == kv.end() ? "4,8,12,16" : it->second;
    }
    const std::vector<int> b_values = parse_int_list(text);
    const IdEstimate est = estimate_information_dimension(cfg.source, cfg.k, b_values);
    const std::filesystem::path dir = ensure_out_dir(opts);
    emit_id_table(est, (dir / "id.csv").string());
    for (std::size_t i = 0; i < est.b_values.size(); ++i)
        std::printf("b=%-3d H/b = %.6f\n", est.b_values[i], est.ratios[i]);
    std::printf("extrapolated information dimension: %.6f\n", est.extrapolated);
    std::printf("wrote %s\n", (dir / "id.csv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized compressed-sensing recovery experiments"};
    app.require_subcommand(1);

    CommonOpts generate_opts;
    CLI::App* generate = app.add_subcommand("generate", "sample a source and quantize it");
    add_common(generate, generate_opts);

    CommonOpts sense_opts;
    std::string signal_path, matrix_out;
    std::size_t sense_m = 0;
    double sense_rate = 0.7;
    CLI::App* sense = app.add_subcommand("sense", "measure a signal file");
    add_common(sense, sense_opts);
    sense->add_option("--signal", signal_path, "signal file (one real per line)")->required();
    sense->add_option("--m", sense_m, "number of measurements (overrides --rate)");
    sense->add_option("--rate", sense_rate, "sampling rate m/n");
    sense->add_option("--matrix-out", matrix_out, "also dump the dense matrix");

    CommonOpts recover_opts;
    double recover_rate = 0.0;
    int recover_trial = 0;
    std::string xhat_out, trace_out;
    CLI::App* recover = app.add_subcommand("recover", "run a single recovery instance");
    add_common(recover, recover_opts);
    recover->add_option("--rate", recover_rate, "sampling rate m/n");
    recover->add_option("--trial", recover_trial, "trial index (seed derivation)");
    recover->add_option("--xhat-out", xhat_out, "write the reconstruction");
    recover->add_option("--trace-out", trace_out, "write the accepted-move log");

    CommonOpts verify_opts;
    std::string verify_only;
    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    add_common(verify, verify_opts);
    verify->add_option("--suite", verify_only, "run only the named suite");

    CommonOpts sweep_opts;
    bool plot = false;
    CLI::App* sweep = app.add_subcommand("sweep", "recovery / robustness sweep");
    add_common(sweep, sweep_opts);
    sweep->add_flag("--plot", plot, "emit an SVG success plot");

    CommonOpts converge_opts;
    std::string n_list;
    CLI::App* converge = app.add_subcommand("converge", "empirical-frequency convergence study");
    add_common(converge, converge_opts);
    converge->add_option("--n-list", n_list, "comma-separated sequence lengths");

    CommonOpts id_opts;
    std::string b_list;
    CLI::App* estimate_id =
        app.add_subcommand("estimate-id", "conditional-entropy-over-b curve");
    add_common(estimate_id, id_opts);
    estimate_id->add_option("--b-list", b_list, "comma-separated quantization levels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(generate_opts);
        if (sense->parsed())
            return cmd_sense(sense_opts, signal_path, sense_m, sense_rate, matrix_out);
        if (recover->parsed())
            return cmd_recover(recover_opts, recover_rate, recover_trial, xhat_out, trace_out);
        if (verify->parsed()) return cmd_verify(verify_opts, verify_only);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, plot);
        if (converge->parsed()) return cmd_converge(converge_opts, n_list);
        if (estimate_id->parsed()) return cmd_estimate_id(id_opts, b_list);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
