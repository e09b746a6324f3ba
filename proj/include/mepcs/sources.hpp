#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mepcs/empirical.hpp"
#include "mepcs/quantize.hpp"

namespace mepcs {

// Mixture of an atom at zero and a uniform density on [lo, hi): each draw is
// 0 with probability 1-p and Unif[lo, hi) with probability p.
struct SparseIid {
    double p = 0.2;
    double lo = 0.0;
    double hi = 1.0;
};

// Stationary finite-state chain. States must sit exactly on the b-bit grid
// of whatever QuantSpec the chain is paired with, so quantization is the
// identity on them. `stationary` may be left empty; it is then computed from
// the transition matrix.
struct FiniteMarkov {
    std::vector<double> states;
    std::vector<std::vector<double>> transition;  // rows sum to 1
    std::vector<double> stationary;
};

struct SourceModel {
    std::variant<SparseIid, FiniteMarkov> model;

    bool is_sparse_iid() const { return std::holds_alternative<SparseIid>(model); }
    const SparseIid& sparse() const { return std::get<SparseIid>(model); }
    const FiniteMarkov& markov() const { return std::get<FiniteMarkov>(model); }

    void validate() const;  // throws ConfigError

    // Smallest interval containing the source support.
    double support_lo() const;
    double support_hi() const;
};

// Stationary law of the chain via damped power iteration.
std::vector<double> stationary_distribution(const FiniteMarkov& chain);

// Length-n draw, deterministic given the seed. The chain starts from its
// stationary law.
std::vector<double> sample_source(const SourceModel& model, std::size_t n, std::uint64_t seed);

// Exact law of order-`order` quantized blocks. For sparse-iid the per-symbol
// cell masses are closed-form; for a chain on grid states the chain law is
// returned directly. Zero-mass blocks are omitted.
TrueBlockDistribution true_block_distribution(const SourceModel& model, const QuantSpec& spec,
                                              int order);

struct IdEstimate {
    int k = 0;
    std::vector<int> b_values;
    std::vector<double> ratios;    // H([X_{k+1}]_b | [X^k]_b) / b per b
    double extrapolated = 0.0;     // ratio at the largest b
};

// Conditional-entropy-over-b curve whose b->inf limit is the information
// dimension of the process.
IdEstimate estimate_information_dimension(const SourceModel& model, int k,
                                          std::span<const int> b_values);

// True iff every nonzero block mass is at least f * |alphabet|^-order.
bool check_qmap_mass_condition(const TrueBlockDistribution& dist, double f);

}  // namespace mepcs
