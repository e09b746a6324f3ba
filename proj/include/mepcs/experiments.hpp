#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mepcs/solvers.hpp"
#include "mepcs/sources.hpp"

namespace mepcs {

enum class WeightScheme {
    lmep,               // minimize the entropy objective directly
    empirical_input,    // weights from the empirical law of the quantized input
    true_distribution,  // weights from the exact source law
    perturbed,          // base weights plus bounded sup-norm noise
    mismatched,         // weights from an externally supplied law
};

enum class SolverKind { exhaustive, anneal };

struct ExperimentConfig {
    SourceModel source;
    QuantSpec quant;
    int k = 0;
    std::size_t n = 96;
    std::vector<double> rates = {0.7};
    int trials = 50;
    SolverKind solver = SolverKind::anneal;
    AnnealSchedule schedule;
    WeightScheme scheme = WeightScheme::true_distribution;
    WeightScheme perturb_base = WeightScheme::true_distribution;
    std::vector<double> eps_w = {0.0};
    std::string q_file;       // mismatched scheme: path of the learned law
    double lambda = -1.0;     // <= 0 -> (log2 n)^(2r)
    double r = 1.5;
    double delta = 0.1;
    double success_threshold = -1.0;  // <= 0 -> 2^-b + 0.01
    std::uint64_t master_seed = 1;
    int threads = 1;

    void validate() const;
    double effective_lambda() const;
    double effective_threshold() const;
};

struct SweepRow {
    double rate = 0.0;
    double eps_w = 0.0;
    std::uint64_t seed = 0;  // per-trial instance seed
    std::size_t m = 0;
    std::size_t n = 0;
    int trial = 0;
    double normalized_error = 0.0;
    bool success = false;
    double cost = 0.0;
    double structure = 0.0;
    double residual = 0.0;
    double runtime_ms = 0.0;  // wall time; reported only in the summary block
};

struct CellSummary {
    double rate = 0.0;
    double eps_w = 0.0;
    int trials = 0;
    double success_fraction = 0.0;
    double mean_error = 0.0;
    double mean_runtime_ms = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;       // sorted by (rate, eps_w, seed)
    std::vector<CellSummary> summary;
};

// One solve per (rate, trial); every row is a pure function of the config
// and master seed. Trial seeds do not depend on the eps_w grid, so the
// eps_w = 0 column of a robustness sweep reproduces the recovery sweep.
SweepReport run_recovery_sweep(const ExperimentConfig& cfg);

// One cell of the sweep, with the full solver output. `rate` is matched
// against cfg.rates to derive the same seeds as the corresponding sweep row.
struct RecoveryOutcome {
    SweepRow row;
    RecoveryResult result;
};
RecoveryOutcome run_single_recovery(const ExperimentConfig& cfg, double rate, int trial);

// Grid over (rate, eps_w). Requires a perturbed or mismatched scheme.
SweepReport run_robustness_sweep(const ExperimentConfig& cfg);

struct RateThreshold {
    double eps_w = 0.0;
    double threshold_rate = 0.0;  // smallest swept rate reaching the level
    bool found = false;
};

std::vector<RateThreshold> rate_thresholds(const SweepReport& report,
                                           double success_level = 0.9);

struct ConvergenceRow {
    std::size_t n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double l1 = 0.0;  // order-k block deviation against the exact law
    double tv = 0.0;
    double kl_block_per_bit = 0.0;       // order-(k+1) full-block KL / b
    double kl_conditional_per_bit = 0.0;
    bool kl_infinite = false;
};

// Empirical-frequency convergence study: block-law deviation per n.
std::vector<ConvergenceRow> run_convergence_study(const SourceModel& model,
                                                  const QuantSpec& spec, int k,
                                                  std::span<const std::size_t> n_values,
                                                  int trials, std::uint64_t master_seed);

// CSV emission: fixed header, data rows, then a '#'-prefixed summary block.
void emit_report(const SweepReport& report, const std::string& path);
// Reads back the data rows (summary lines are skipped).
SweepReport parse_report(const std::string& path);

void emit_convergence_table(std::span<const ConvergenceRow> rows, const std::string& path);
void emit_id_table(const IdEstimate& estimate, const std::string& path);

// Success fraction vs rate, one polyline per eps_w value.
void emit_success_plot_svg(const SweepReport& report, const std::string& path);

// MEPCS_OUT_DIR if set, else "out".
std::string default_out_dir();

// Key-value experiment description ("key = value" lines, '#' comments).
using KeyValueConfig = std::map<std::string, std::string>;
KeyValueConfig parse_config_file(const std::string& path);
void apply_config_override(KeyValueConfig& cfg, const std::string& assignment);
ExperimentConfig experiment_from_config(const KeyValueConfig& cfg);

}  // namespace mepcs
