#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mepcs/empirical.hpp"
#include "mepcs/quantize.hpp"
#include "mepcs/sensing.hpp"
#include "mepcs/weights.hpp"

namespace mepcs {

enum class CostMode { lmep, amep };

// One recovery objective: structure term plus (lambda / n^2) * ||A u - y||^2
// over grid sequences. lmep scores structure with the conditional empirical
// entropy H_k; amep scores it with the linear functional sum w * p_{k+1}.
struct CostSpec {
    CostMode mode = CostMode::lmep;
    int k = 0;
    double lambda = 1.0;
    QuantSpec quant;
    SensingSystem sensing;
    std::vector<double> y;
    std::optional<WeightVector> weights;  // required for amep

    void validate() const;
};

struct TraceEntry {
    long long step = 0;
    std::size_t coordinate = 0;
    double cost = 0.0;
};

struct RecoveryResult {
    QuantizedSequence xhat;
    double cost = 0.0;
    double structure_term = 0.0;
    double residual_term = 0.0;
    std::vector<TraceEntry> trace;
    std::uint64_t seed = 0;
};

double lmep_cost(const QuantizedSequence& u, const CostSpec& spec);
double amep_cost(const QuantizedSequence& u, const CostSpec& spec);
double cost_value(const QuantizedSequence& u, const CostSpec& spec);

// Global minimizer by enumeration of the full sequence space (guarded at
// 2^24 candidates); ties broken toward the lexicographically smaller value
// sequence.
RecoveryResult solve_exhaustive(const CostSpec& spec);

struct AnnealSchedule {
    long long proposals = 0;       // 0 -> 200 * n
    long long cool_proposals = 0;  // geometric cooling horizon; 0 -> 200 * n
    int restarts = 4;
    double t0 = 1.0;      // bits
    double t_end = 1e-3;  // bits
    bool record_trace = false;
    std::vector<double> warm_start;  // initial state for the first restart; empty -> random
};

// Single-coordinate Metropolis annealing with incremental cost updates;
// deterministic given the seed. Returns the best state seen across restarts.
RecoveryResult solve_anneal(const CostSpec& spec, const AnnealSchedule& schedule,
                            std::uint64_t seed);

// (1 / sqrt(n)) * ||x - xhat||_2.
double normalized_error(std::span<const double> x, std::span<const double> xhat);

// Verifies that the minimizer of the linearized objective, with weights read
// off the entropy surface at the lmep minimizer, attains the lmep optimum.
struct EquivalenceReport {
    bool pass = false;
    double lmep_optimum = 0.0;
    double amep_argmin_lmep_cost = 0.0;
    QuantizedSequence lmep_argmin;
    QuantizedSequence amep_argmin;
    std::string message;
};

EquivalenceReport check_minimizer_equivalence(const CostSpec& lmep_spec);

// Verifies the two-sided bound between the minima of two linear objectives
// whose weights differ by at most eps in sup norm.
struct SandwichReport {
    bool pass = false;
    double f_at_fhat_argmin = 0.0;  // f evaluated at the perturbed argmin
    double f_optimum = 0.0;
    double eps = 0.0;
    std::string message;
};

SandwichReport check_sandwich_lemma(const CostSpec& amep_spec, double eps, std::uint64_t seed);

// Verifies that with weights read off the empirical law of the quantized
// input, the linearized minimizer's lmep cost is bounded by the lmep cost of
// the quantized input itself.
struct InputWeightReport {
    bool pass = false;
    double lmep_cost_at_argmin = 0.0;
    double lmep_cost_at_input = 0.0;
    std::string message;
};

InputWeightReport check_input_weight_bound(const CostSpec& lmep_spec,
                                           const QuantizedSequence& x_quantized);

}  // namespace mepcs
