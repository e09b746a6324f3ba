#pragma once

#include <cstdint>
#include <map>

#include "mepcs/empirical.hpp"

namespace mepcs {

// Per-block structure penalties in bits, indexed by order-(k+1) blocks.
// Blocks absent from the map (zero-probability conditionals, unseen
// contexts) implicitly carry `cap`.
struct WeightVector {
    int order = 1;
    Alphabet alphabet;
    std::map<Block, double> w;
    double cap = 0.0;

    double at(Block key) const {
        auto it = w.find(key);
        return it == w.end() ? cap : it->second;
    }
};

// Strictly larger than any -log2 conditional an empirical distribution with
// fewer than 2^32 windows can produce, so capped blocks never beat seen ones.
double default_weight_cap(int bits, int k);

// Supergradient of the conditional entropy at the given distribution:
// w = log2(context mass / block mass), capped where the block mass is zero.
WeightVector weights_from_empirical(const EmpiricalDistribution& d, double cap = -1.0);
WeightVector weights_from_pmf(const BlockPmf& d, const Alphabet& alphabet, double cap = -1.0);

// Bayesian weights: -log2 of the true conditional next-symbol probability.
WeightVector weights_from_distribution(const TrueBlockDistribution& dist, double cap = -1.0);

// Adds i.i.d. uniform noise in [-eps*b, eps*b] per stored block, clamped to
// [0, cap]; guarantees (1/b) * ||out - in||_inf <= eps.
WeightVector perturb_weights(const WeightVector& wv, double eps, int bits, std::uint64_t seed);

// (1/b) * max block |w1 - w2| (missing entries read as cap).
double weight_linf_distance(const WeightVector& w1, const WeightVector& w2, int bits);

struct KlWeightGap {
    double block_kl_per_bit = 0.0;        // (1/b) D(p_hat || q) over full blocks
    double conditional_kl_per_bit = 0.0;  // (1/b) context-averaged conditional KL
    bool infinite = false;
};

// Both divergence readings of a learned law q against the empirical law of
// the quantized input.
KlWeightGap conditional_kl_weight_gap(const EmpiricalDistribution& p_hat,
                                      const TrueBlockDistribution& q, int bits);

}  // namespace mepcs
