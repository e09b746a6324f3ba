#include "mepcs/empirical.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mepcs/errors.hpp"

namespace mepcs {

namespace {

constexpr std::uint64_t kBlockSpaceGuard = std::uint64_t{1} << 24;

std::uint64_t pow_checked(std::size_t radix, int order) {
    std::uint64_t v = 1;
    for (int i = 0; i < order; ++i) {
        if (v > kBlockSpaceGuard / radix + 1) throw TooLarge("block space exceeds guard");
        v *= radix;
    }
    return v;
}

void check_same_shape(int o1, std::size_t r1, int o2, std::size_t r2) {
    if (o1 != o2 || r1 != r2)
        throw ShapeError("distributions disagree in order or alphabet");
}

int ceil_log2(std::uint64_t x) {
    return x <= 1 ? 0 : std::bit_width(x - 1);
}

}  // namespace

Block pack_block(std::span<const std::uint32_t> symbols, std::size_t radix) {
    Block key = 0;
    for (std::uint32_t s : symbols) key = key * radix + s;
    return key;
}

void unpack_block(Block key, int order, std::size_t radix, std::span<std::uint32_t> out) {
    for (int t = order - 1; t >= 0; --t) {
        out[t] = static_cast<std::uint32_t>(key % radix);
        key /= radix;
    }
}

std::uint64_t block_space_size(std::size_t radix, int order) {
    const std::uint64_t v = pow_checked(radix, order);
    if (v > kBlockSpaceGuard) throw TooLarge("block space exceeds guard");
    return v;
}

double EmpiricalDistribution::prob(Block key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(windows);
}

BlockPmf pmf_of(const EmpiricalDistribution& d) {
    BlockPmf out{d.order, d.alphabet.size(), {}};
    for (const auto& [key, c] : d.counts)
        out.p.emplace_hint(out.p.end(), key,
                           static_cast<double>(c) / static_cast<double>(d.windows));
    return out;
}

BlockPmf pmf_of(const TrueBlockDistribution& d) {
    return BlockPmf{d.order, d.alphabet.size(), d.probs};
}

EmpiricalDistribution empirical_distribution(const QuantizedSequence& u, int order) {
    const Alphabet alphabet = build_alphabet(u.spec);
    return empirical_distribution(to_indices(u, alphabet), alphabet, order);
}

EmpiricalDistribution empirical_distribution(std::span<const std::uint32_t> idx,
                                             const Alphabet& alphabet, int order) {
    if (order < 1) throw InvalidInput("empirical_distribution: order must be >= 1");
    const auto n = static_cast<long long>(idx.size());
    if (n <= order) throw InsufficientData("empirical_distribution: need n > order");
    block_space_size(alphabet.size(), order);  // guard

    EmpiricalDistribution d;
    d.order = order;
    d.alphabet = alphabet;
    d.windows = n - order;

    const std::size_t radix = alphabet.size();
    const std::uint64_t wrap = pow_checked(radix, order - 1);
    // Rolling window over starts 0 .. n-order-1: the window ending at the
    // final symbol is excluded.
    Block key = 0;
    for (long long i = 0; i < order; ++i) key = key * radix + idx[i];
    ++d.counts[key];
    for (long long s = 1; s < d.windows; ++s) {
        key = (key % wrap) * radix + idx[s + order - 1];
        ++d.counts[key];
    }
    return d;
}

EmpiricalDistribution marginalize(const EmpiricalDistribution& d) {
    if (d.order < 2) throw InvalidInput("marginalize: order must be >= 2");
    EmpiricalDistribution out;
    out.order = d.order - 1;
    out.alphabet = d.alphabet;
    out.windows = d.windows;
    const std::size_t radix = d.alphabet.size();
    for (const auto& [key, c] : d.counts) out.counts[key / radix] += c;
    return out;
}

TrueBlockDistribution marginalize(const TrueBlockDistribution& d) {
    if (d.order < 2) throw InvalidInput("marginalize: order must be >= 2");
    TrueBlockDistribution out;
    out.order = d.order - 1;
    out.alphabet = d.alphabet;
    const std::size_t radix = d.alphabet.size();
    for (const auto& [key, p] : d.probs) out.probs[key / radix] += p;
    return out;
}

BlockPmf marginalize(const BlockPmf& d) {
    if (d.order < 2) throw InvalidInput("marginalize: order must be >= 2");
    BlockPmf out{d.order - 1, d.radix, {}};
    for (const auto& [key, p] : d.p) out.p[key / d.radix] += p;
    return out;
}

BlockPmf marginalize_first(const BlockPmf& d) {
    if (d.order < 2) throw InvalidInput("marginalize_first: order must be >= 2");
    BlockPmf out{d.order - 1, d.radix, {}};
    const std::uint64_t wrap = pow_checked(d.radix, d.order - 1);
    for (const auto& [key, p] : d.p) out.p[key % wrap] += p;
    return out;
}

double conditional_empirical_entropy(const EmpiricalDistribution& d) {
    const std::size_t radix = d.alphabet.size();
    // Context counts from the same windows; exact integer ratios inside the
    // log keep this bit-identical with the weight table built from d.
    std::map<Block, long long> context;
    if (d.order >= 2)
        for (const auto& [key, c] : d.counts) context[key / radix] += c;

    double h = 0.0;
    for (const auto& [key, c] : d.counts) {
        if (c == 0) continue;
        const long long ctx = d.order >= 2 ? context[key / radix] : d.windows;
        h += (static_cast<double>(c) / static_cast<double>(d.windows)) *
             std::log2(static_cast<double>(ctx) / static_cast<double>(c));
    }
    return h;
}

double conditional_entropy_bits(const BlockPmf& d) {
    std::map<Block, double> context;
    if (d.order >= 2)
        for (const auto& [key, p] : d.p) context[key / d.radix] += p;

    double h = 0.0;
    for (const auto& [key, p] : d.p) {
        if (p <= 0.0) continue;
        const double ctx = d.order >= 2 ? context[key / d.radix] : 1.0;
        h += p * std::log2(ctx / p);
    }
    return h;
}

long long lz78_code_length(const QuantizedSequence& u) {
    const Alphabet alphabet = build_alphabet(u.spec);
    return lz78_code_length(to_indices(u, alphabet), alphabet.size());
}

long long lz78_code_length(std::span<const std::uint32_t> idx, std::size_t radix) {
    if (idx.empty()) throw InsufficientData("lz78_code_length: empty sequence");
    const long long symbol_bits = ceil_log2(radix);
    // Trie edges keyed by (node, symbol); node 0 is the root.
    std::unordered_map<std::uint64_t, std::uint64_t> edges;
    std::uint64_t next_node = 1;
    std::uint64_t node = 0;
    long long phrases = 0;
    long long bits = 0;

    auto emit = [&]() {
        ++phrases;
        bits += ceil_log2(static_cast<std::uint64_t>(phrases)) + symbol_bits;
    };

    for (std::uint32_t s : idx) {
        const std::uint64_t edge = node * radix + s;
        auto it = edges.find(edge);
        if (it != edges.end()) {
            node = it->second;
        } else {
            emit();
            edges.emplace(edge, next_node++);
            node = 0;
        }
    }
    if (node != 0) emit();  // trailing partial phrase
    return bits;
}

Deviation total_variation(const BlockPmf& d1, const BlockPmf& d2) {
    check_same_shape(d1.order, d1.radix, d2.order, d2.radix);
    double l1 = 0.0;
    auto i1 = d1.p.begin();
    auto i2 = d2.p.begin();
    while (i1 != d1.p.end() || i2 != d2.p.end()) {
        if (i2 == d2.p.end() || (i1 != d1.p.end() && i1->first < i2->first)) {
            l1 += std::fabs(i1->second);
            ++i1;
        } else if (i1 == d1.p.end() || i2->first < i1->first) {
            l1 += std::fabs(i2->second);
            ++i2;
        } else {
            l1 += std::fabs(i1->second - i2->second);
            ++i1;
            ++i2;
        }
    }
    return Deviation{l1, 0.5 * l1};
}

KlDecomposition conditional_kl_decomposition(const BlockPmf& q2, const BlockPmf& q1) {
    check_same_shape(q2.order, q2.radix, q1.order, q1.radix);
    const BlockPmf m2 = q2.order >= 2 ? marginalize(q2) : BlockPmf{};
    const BlockPmf m1 = q1.order >= 2 ? marginalize(q1) : BlockPmf{};
    auto ctx_prob = [&](const BlockPmf& m, Block ctx) {
        auto it = m.p.find(ctx);
        return it == m.p.end() ? 0.0 : it->second;
    };

    KlDecomposition out;
    out.entropy = conditional_entropy_bits(q2);
    for (const auto& [key, p2] : q2.p) {
        if (p2 <= 0.0) continue;
        const Block ctx = key / q2.radix;
        const double c2 = q2.order >= 2 ? ctx_prob(m2, ctx) : 1.0;
        const double c1 = q1.order >= 2 ? ctx_prob(m1, ctx) : 1.0;
        auto it = q1.p.find(key);
        const double p1 = it == q1.p.end() ? 0.0 : it->second;
        if (p1 <= 0.0 || c1 <= 0.0) {
            out.infinite = true;
            out.conditional_kl = std::numeric_limits<double>::infinity();
            return out;
        }
        out.conditional_kl += p2 * std::log2((p2 / c2) / (p1 / c1));
    }
    return out;
}

double block_kl(const BlockPmf& p, const BlockPmf& q) {
    check_same_shape(p.order, p.radix, q.order, q.radix);
    double kl = 0.0;
    for (const auto& [key, pp] : p.p) {
        if (pp <= 0.0) continue;
        auto it = q.p.find(key);
        const double qq = it == q.p.end() ? 0.0 : it->second;
        if (qq <= 0.0) return std::numeric_limits<double>::infinity();
        kl += pp * std::log2(pp / qq);
    }
    return kl;
}

}  // namespace mepcs
