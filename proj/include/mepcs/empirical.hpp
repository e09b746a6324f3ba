#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "mepcs/quantize.hpp"

namespace mepcs {

// A length-`order` block packed into one integer, first symbol most
// significant, so numeric order on keys equals lexicographic order on
// blocks. `radix` is the alphabet size.
using Block = std::uint64_t;

Block pack_block(std::span<const std::uint32_t> symbols, std::size_t radix);
void unpack_block(Block key, int order, std::size_t radix, std::span<std::uint32_t> out);

// Number of packed blocks of a given order; throws TooLarge past 2^24.
std::uint64_t block_space_size(std::size_t radix, int order);

// Block frequencies of a sequence: counts over the n-order windows that end
// strictly before the final symbol, denominator `windows` = n - order.
struct EmpiricalDistribution {
    int order = 1;
    Alphabet alphabet;
    std::map<Block, long long> counts;
    long long windows = 0;

    double prob(Block key) const;
};

// An exact (model-derived or externally learned) block law.
struct TrueBlockDistribution {
    int order = 1;
    Alphabet alphabet;
    std::map<Block, double> probs;
};

// Order/alphabet-tagged pmf used by the generic information measures.
struct BlockPmf {
    int order = 1;
    std::size_t radix = 0;
    std::map<Block, double> p;
};

BlockPmf pmf_of(const EmpiricalDistribution& d);
BlockPmf pmf_of(const TrueBlockDistribution& d);

EmpiricalDistribution empirical_distribution(const QuantizedSequence& u, int order);
EmpiricalDistribution empirical_distribution(std::span<const std::uint32_t> idx,
                                             const Alphabet& alphabet, int order);

// Sum out the last symbol (order drops by one; same window denominator).
EmpiricalDistribution marginalize(const EmpiricalDistribution& d);
TrueBlockDistribution marginalize(const TrueBlockDistribution& d);
BlockPmf marginalize(const BlockPmf& d);
// Sum out the first symbol instead.
BlockPmf marginalize_first(const BlockPmf& d);

// Conditional entropy of the last symbol given the first order-1 symbols, in
// bits: for a distribution of order k+1 this is H_k. Contexts marginalized
// from the same counts, 0 log 0 = 0.
double conditional_empirical_entropy(const EmpiricalDistribution& d);
double conditional_entropy_bits(const BlockPmf& d);

// LZ78 incremental-parse code length in bits: phrase j costs
// ceil(log2 j) + ceil(log2 |alphabet|).
long long lz78_code_length(const QuantizedSequence& u);
long long lz78_code_length(std::span<const std::uint32_t> idx, std::size_t radix);

struct Deviation {
    double l1 = 0.0;
    double tv = 0.0;
};

Deviation total_variation(const BlockPmf& d1, const BlockPmf& d2);

struct KlDecomposition {
    double conditional_kl = 0.0;  // sum_ctx q2(ctx) * KL(q2(.|ctx) || q1(.|ctx)), bits
    double entropy = 0.0;         // H_k(q2), bits
    bool infinite = false;        // q2 not absolutely continuous w.r.t. q1 conditionals
};

// Splits sum q2 * (-log q1(.|.)) into conditional KL plus H_k(q2).
KlDecomposition conditional_kl_decomposition(const BlockPmf& q2, const BlockPmf& q1);

// Plain block KL D(p || q) in bits; +inf if p is not absolutely continuous
// w.r.t. q.
double block_kl(const BlockPmf& p, const BlockPmf& q);

}  // namespace mepcs
