#include <doctest.h>

#include <cmath>
#include <vector>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"
#include "mepcs/sources.hpp"
#include "mepcs/weights.hpp"

using namespace mepcs;

namespace {

const QuantSpec kBinary{1, 0.0, 1.0, true};

QuantizedSequence seq_01(const std::vector<int>& bits) {
    QuantizedSequence u;
    u.spec = kBinary;
    for (int b : bits) u.values.push_back(b ? 0.5 : 0.0);
    return u;
}

}  // namespace

TEST_CASE("weights from an empirical distribution") {
    // Alternating sequence: both seen transitions are deterministic.
    const EmpiricalDistribution d = empirical_distribution(seq_01({0, 1, 0, 1, 0}), 2);
    const WeightVector wv = weights_from_empirical(d);
    CHECK(wv.at(1) == 0.0);  // (0,1)
    CHECK(wv.at(2) == 0.0);  // (1,0)
    CHECK(wv.at(0) == wv.cap);
    CHECK(wv.at(3) == wv.cap);
    CHECK(wv.cap == default_weight_cap(1, 1));

    // Uniform pair counts: every weight is one bit.
    EmpiricalDistribution uniform;
    uniform.order = 2;
    uniform.alphabet = build_alphabet(kBinary);
    uniform.windows = 4;
    uniform.counts = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
    const WeightVector wu = weights_from_empirical(uniform);
    for (Block key = 0; key < 4; ++key) CHECK(wu.at(key) == doctest::Approx(1.0));

    // Point mass: zero weight on the seen block, cap elsewhere.
    const WeightVector wp =
        weights_from_empirical(empirical_distribution(seq_01({1, 1, 1, 1}), 2));
    CHECK(wp.at(3) == 0.0);
    CHECK(wp.at(0) == wp.cap);
}

TEST_CASE("weights from a true distribution") {
    SourceModel sparse;
    sparse.model = SparseIid{0.2, 0.0, 1.0};
    const TrueBlockDistribution law = true_block_distribution(sparse, kBinary, 1);
    const WeightVector wv = weights_from_distribution(law);
    CHECK(wv.at(0) == doctest::Approx(-std::log2(0.9)));
    CHECK(wv.at(1) == doctest::Approx(-std::log2(0.1)));

    SourceModel chain;
    FiniteMarkov c;
    c.states = {0.0, 0.5};
    c.transition = {{0.9, 0.1}, {0.1, 0.9}};
    chain.model = c;
    const QuantSpec spec{1, 0.0, 0.5, false};
    const WeightVector wc =
        weights_from_distribution(true_block_distribution(chain, spec, 2));
    CHECK(wc.at(0) == doctest::Approx(-std::log2(0.9)));  // (s, s)
    CHECK(wc.at(1) == doctest::Approx(-std::log2(0.1)));  // (s, s')

    // Uniform iid binary: every conditional is 1/2.
    SourceModel fair;
    fair.model = SparseIid{1.0, 0.0, 1.0};
    const WeightVector wf =
        weights_from_distribution(true_block_distribution(fair, kBinary, 2));
    for (Block key = 0; key < 4; ++key) CHECK(wf.at(key) == doctest::Approx(1.0));
}

TEST_CASE("weights are nonnegative and the entropy identity is exact") {
    Rng rng(314);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 5 + rng.next_below(60);
        std::vector<std::uint32_t> idx(n);
        for (auto& v : idx) v = static_cast<std::uint32_t>(rng.next_below(2));
        const int order = 1 + static_cast<int>(rng.next_below(3));
        if (n <= static_cast<std::size_t>(order)) continue;
        const EmpiricalDistribution d =
            empirical_distribution(idx, build_alphabet(kBinary), order);
        const WeightVector wv = weights_from_empirical(d);
        double dot = 0.0;
        for (const auto& [key, c] : d.counts) {
            CHECK(wv.at(key) >= 0.0);
            dot += (static_cast<double>(c) / static_cast<double>(d.windows)) * wv.at(key);
        }
        CHECK(dot == conditional_empirical_entropy(d));
    }
}

TEST_CASE("perturbation respects the normalized sup-norm ball") {
    const EmpiricalDistribution d = empirical_distribution(seq_01({0, 1, 1, 0, 1, 0, 0, 1}), 2);
    const WeightVector wv = weights_from_empirical(d);

    CHECK(perturb_weights(wv, 0.0, 4, 9).w == wv.w);

    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const double eps = rng.next_range(0.0, 0.5);
        const int b = 1 + static_cast<int>(rng.next_below(8));
        const WeightVector out = perturb_weights(wv, eps, b, rng.next_u64());
        CHECK(weight_linf_distance(out, wv, b) <= eps + 1e-15);
        for (const auto& [key, w] : out.w) {
            CHECK(w >= 0.0);
            CHECK(w <= out.cap);
            CHECK(std::fabs(w - wv.at(key)) <= eps * b + 1e-15);
        }
    }
}

TEST_CASE("sup-norm distance between weight tables") {
    const EmpiricalDistribution d = empirical_distribution(seq_01({0, 1, 1, 0, 1, 0}), 2);
    const WeightVector wv = weights_from_empirical(d);
    CHECK(weight_linf_distance(wv, wv, 4) == 0.0);

    WeightVector moved = wv;
    moved.w.begin()->second += 2.0;
    CHECK(weight_linf_distance(wv, moved, 4) == doctest::Approx(0.5));

    WeightVector other_order = wv;
    other_order.order = 3;
    CHECK_THROWS_AS(weight_linf_distance(wv, other_order, 4), ShapeError);
}

TEST_CASE("kl gap between empirical and learned laws") {
    SourceModel sparse;
    sparse.model = SparseIid{0.2, 0.0, 1.0};
    const QuantSpec spec{2, 0.0, 1.0, true};
    const TrueBlockDistribution law = true_block_distribution(sparse, spec, 1);

    // Exact match: zero divergence.
    EmpiricalDistribution match;
    match.order = 1;
    match.alphabet = law.alphabet;
    match.windows = 20;
    match.counts = {{0, 17}, {1, 1}, {2, 1}, {3, 1}};  // exactly (0.85, .05, .05, .05)
    const KlWeightGap exact = conditional_kl_weight_gap(match, law, spec.bits);
    CHECK(!exact.infinite);
    CHECK(exact.block_kl_per_bit == doctest::Approx(0.0).epsilon(1e-12));

    // Shrinks with the sample size.
    const auto gap_at = [&](std::size_t n, std::uint64_t seed) {
        const std::vector<double> x = sample_source(sparse, n, seed);
        const QuantizedSequence q = quantize_sequence(x, spec);
        return conditional_kl_weight_gap(empirical_distribution(q, 1), law, spec.bits)
            .block_kl_per_bit;
    };
    CHECK(gap_at(100000, 2) < gap_at(1000, 2));
    CHECK(gap_at(100000, 3) < gap_at(1000, 3));

    // Learned law missing observed support: flagged, not thrown.
    TrueBlockDistribution broken = law;
    broken.probs.erase(1);
    const KlWeightGap inf = conditional_kl_weight_gap(match, broken, spec.bits);
    CHECK(inf.infinite);
}
