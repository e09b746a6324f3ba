#include "mepcs/weights.hpp"

#include <algorithm>
#include <cmath>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"

namespace mepcs {

namespace {

void check_same_index_set(const WeightVector& a, const WeightVector& b) {
    if (a.order != b.order || a.alphabet.size() != b.alphabet.size())
        throw ShapeError("weight vectors disagree in order or alphabet");
}

}  // namespace

double default_weight_cap(int bits, int k) {
    return static_cast<double>(bits) * (k + 1) + 32.0;
}

WeightVector weights_from_empirical(const EmpiricalDistribution& d, double cap) {
    WeightVector wv;
    wv.order = d.order;
    wv.alphabet = d.alphabet;
    wv.cap = cap > 0.0 ? cap : default_weight_cap(d.alphabet.bits(), d.order - 1);
    const std::size_t radix = d.alphabet.size();
    std::map<Block, long long> context;
    if (d.order >= 2)
        for (const auto& [key, c] : d.counts) context[key / radix] += c;
    for (const auto& [key, c] : d.counts) {
        if (c == 0) continue;
        const long long ctx = d.order >= 2 ? context[key / radix] : d.windows;
        const double w = std::log2(static_cast<double>(ctx) / static_cast<double>(c));
        wv.w.emplace_hint(wv.w.end(), key, std::min(w, wv.cap));
    }
    return wv;
}

WeightVector weights_from_pmf(const BlockPmf& d, const Alphabet& alphabet, double cap) {
    WeightVector wv;
    wv.order = d.order;
    wv.alphabet = alphabet;
    wv.cap = cap > 0.0 ? cap : default_weight_cap(alphabet.bits(), d.order - 1);
    std::map<Block, double> context;
    if (d.order >= 2)
        for (const auto& [key, p] : d.p) context[key / d.radix] += p;
    for (const auto& [key, p] : d.p) {
        if (p <= 0.0) continue;
        const double ctx = d.order >= 2 ? context[key / d.radix] : 1.0;
        const double w = std::log2(ctx / p);
        wv.w.emplace_hint(wv.w.end(), key, std::clamp(w, 0.0, wv.cap));
    }
    return wv;
}

WeightVector weights_from_distribution(const TrueBlockDistribution& dist, double cap) {
    return weights_from_pmf(pmf_of(dist), dist.alphabet, cap);
}

WeightVector perturb_weights(const WeightVector& wv, double eps, int bits, std::uint64_t seed) {
    if (eps < 0.0) throw InvalidInput("perturb_weights: eps must be >= 0");
    WeightVector out = wv;
    if (eps == 0.0) return out;
    const double scale = eps * static_cast<double>(bits);
    Rng rng(seed);
    for (auto& [key, w] : out.w) {
        const double noise = rng.next_range(-scale, scale);
        w = std::clamp(w + noise, 0.0, out.cap);
    }
    return out;
}

double weight_linf_distance(const WeightVector& w1, const WeightVector& w2, int bits) {
    check_same_index_set(w1, w2);
    double d = 0.0;
    auto i1 = w1.w.begin();
    auto i2 = w2.w.begin();
    while (i1 != w1.w.end() || i2 != w2.w.end()) {
        double a, b;
        if (i2 == w2.w.end() || (i1 != w1.w.end() && i1->first < i2->first)) {
            a = i1->second;
            b = w2.cap;
            ++i1;
        } else if (i1 == w1.w.end() || i2->first < i1->first) {
            a = w1.cap;
            b = i2->second;
            ++i2;
        } else {
            a = i1->second;
            b = i2->second;
            ++i1;
            ++i2;
        }
        d = std::max(d, std::fabs(a - b));
    }
    return d / static_cast<double>(bits);
}

KlWeightGap conditional_kl_weight_gap(const EmpiricalDistribution& p_hat,
                                      const TrueBlockDistribution& q, int bits) {
    if (p_hat.order != q.order || p_hat.alphabet.size() != q.alphabet.size())
        throw ShapeError("conditional_kl_weight_gap: order or alphabet mismatch");
    const BlockPmf p = pmf_of(p_hat);
    const BlockPmf qq = pmf_of(q);
    KlWeightGap out;
    const double kl = block_kl(p, qq);
    const KlDecomposition dec = conditional_kl_decomposition(p, qq);
    out.infinite = std::isinf(kl) || dec.infinite;
    out.block_kl_per_bit = kl / static_cast<double>(bits);
    out.conditional_kl_per_bit = dec.conditional_kl / static_cast<double>(bits);
    return out;
}

}  // namespace mepcs
