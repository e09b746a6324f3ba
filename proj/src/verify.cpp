#include "mepcs/verify.hpp"

#include <cmath>
#include <sstream>

#include "mepcs/empirical.hpp"
#include "mepcs/errors.hpp"
#include "mepcs/quantize.hpp"
#include "mepcs/rng.hpp"
#include "mepcs/sensing.hpp"
#include "mepcs/solvers.hpp"
#include "mepcs/weights.hpp"

namespace mepcs {

namespace {

QuantSpec binary_unit_spec() { return QuantSpec{1, 0.0, 1.0, true}; }     // {0, 0.5}
QuantSpec ternary_unit_spec() { return QuantSpec{1, 0.0, 1.0, false}; }   // {0, 0.5, 1}

double default_lambda(std::size_t n) {
    return std::pow(std::log2(static_cast<double>(n)), 3.0);  // r = 1.5
}

// Random lmep instance on the binary alphabet: grid-valued signal, Gaussian
// measurements of it.
CostSpec random_small_instance(std::size_t n, std::size_t m, int k, std::uint64_t seed) {
    const QuantSpec quant = binary_unit_spec();
    const Alphabet alphabet = build_alphabet(quant);
    Rng rng(derive_seed(seed, 1));
    std::vector<std::uint32_t> idx(n);
    for (auto& v : idx) v = static_cast<std::uint32_t>(rng.next_below(alphabet.size()));
    const QuantizedSequence x = from_indices(idx, alphabet, quant);

    CostSpec spec;
    spec.mode = CostMode::lmep;
    spec.k = k;
    spec.lambda = default_lambda(n);
    spec.quant = quant;
    spec.sensing = generate_matrix(m, n, derive_seed(seed, 2), spec.lambda);
    spec.y = measure(spec.sensing, x.values);
    return spec;
}

// Random pmf of the given order: each block zeroed with probability 0.3,
// otherwise uniform in [0.01, 1); normalized. The mass floor keeps capped
// weights comfortably above every realizable -log2 conditional.
BlockPmf random_pmf(int order, std::size_t radix, Rng& rng) {
    const std::uint64_t space = block_space_size(radix, order);
    BlockPmf pmf{order, radix, {}};
    double total = 0.0;
    for (std::uint64_t key = 0; key < space; ++key) {
        if (rng.next_unit() < 0.3) continue;
        const double mass = 0.01 + 0.99 * rng.next_unit();
        pmf.p.emplace_hint(pmf.p.end(), key, mass);
        total += mass;
    }
    if (pmf.p.empty()) {
        pmf.p[rng.next_below(space)] = 1.0;
        return pmf;
    }
    for (auto& [key, p] : pmf.p) p /= total;
    return pmf;
}

BlockPmf random_full_support_pmf(int order, std::size_t radix, Rng& rng) {
    const std::uint64_t space = block_space_size(radix, order);
    BlockPmf pmf{order, radix, {}};
    double total = 0.0;
    for (std::uint64_t key = 0; key < space; ++key) {
        const double mass = 0.01 + 0.99 * rng.next_unit();
        pmf.p.emplace_hint(pmf.p.end(), key, mass);
        total += mass;
    }
    for (auto& [key, p] : pmf.p) p /= total;
    return pmf;
}

SuiteResult make_result(const std::string& name, int passed, int total, std::string detail = {}) {
    return SuiteResult{name, passed == total, passed, total, std::move(detail)};
}

}  // namespace

SuiteResult run_equivalence_suite(int instances, std::uint64_t seed) {
    int passed = 0;
    for (int i = 0; i < instances; ++i) {
        const std::size_t m = (i % 2 == 0) ? 2 : 4;
        const CostSpec spec =
            random_small_instance(6, m, 1, derive_seed(seed, 0xE0, static_cast<std::uint64_t>(i)));
        if (check_minimizer_equivalence(spec).pass) ++passed;
    }
    return make_result("minimizer-equivalence", passed, instances);
}

SuiteResult run_sandwich_suite(int instances, double eps, std::uint64_t seed) {
    int passed = 0;
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = derive_seed(seed, 0x5A, static_cast<std::uint64_t>(i));
        const std::size_t m = (i % 2 == 0) ? 2 : 4;
        CostSpec spec = random_small_instance(6, m, 1, s);
        spec.mode = CostMode::amep;
        // Arbitrary nonnegative weights over the full block space.
        WeightVector wv;
        wv.order = spec.k + 1;
        wv.alphabet = build_alphabet(spec.quant);
        wv.cap = default_weight_cap(spec.quant.bits, spec.k);
        Rng rng(derive_seed(s, 3));
        const std::uint64_t space = block_space_size(wv.alphabet.size(), wv.order);
        for (std::uint64_t key = 0; key < space; ++key)
            wv.w[key] = 4.0 * rng.next_unit();
        spec.weights = wv;
        if (check_sandwich_lemma(spec, eps, derive_seed(s, 4)).pass) ++passed;
    }
    return make_result("sandwich-bound", passed, instances);
}

SuiteResult run_concavity_suite(int cases, std::uint64_t seed) {
    int passed = 0;
    Rng rng(derive_seed(seed, 0xC0));
    for (int i = 0; i < cases; ++i) {
        const std::size_t radix = (i % 2 == 0) ? 2 : 3;
        const int k = i % 3;
        const QuantSpec quant = radix == 2 ? binary_unit_spec() : ternary_unit_spec();
        const Alphabet alphabet = build_alphabet(quant);
        const BlockPmf p = random_pmf(k + 1, radix, rng);
        const BlockPmf q = random_pmf(k + 1, radix, rng);
        const WeightVector wp = weights_from_pmf(p, alphabet);
        // <w_p, q - p> over the union of supports (absent masses are zero).
        double inner = 0.0;
        for (const auto& [key, mass] : q.p) inner += wp.at(key) * mass;
        for (const auto& [key, mass] : p.p) inner -= wp.at(key) * mass;
        const double lhs = conditional_entropy_bits(q);
        const double rhs = conditional_entropy_bits(p) + inner;
        if (lhs <= rhs + 1e-9) ++passed;
    }
    return make_result("entropy-concavity-bound", passed, cases);
}

SuiteResult run_kl_identity_suite(int cases, std::uint64_t seed) {
    int passed = 0;
    Rng rng(derive_seed(seed, 0x1D));
    for (int i = 0; i < cases; ++i) {
        const std::size_t radix = (i % 2 == 0) ? 2 : 3;
        const int k = i % 3;
        const BlockPmf q1 = random_full_support_pmf(k + 1, radix, rng);
        const BlockPmf q2 = random_pmf(k + 1, radix, rng);
        const KlDecomposition dec = conditional_kl_decomposition(q2, q1);
        if (dec.infinite) continue;
        // Independent evaluation of the weighted negative log conditional.
        const BlockPmf m1 = k >= 1 ? marginalize(q1) : BlockPmf{};
        double rhs = 0.0;
        for (const auto& [key, p2] : q2.p) {
            if (p2 <= 0.0) continue;
            const double cond =
                k >= 1 ? q1.p.at(key) / m1.p.at(key / radix) : q1.p.at(key);
            rhs += p2 * -std::log2(cond);
        }
        if (std::fabs(dec.conditional_kl + dec.entropy - rhs) <= 1e-10) ++passed;
    }
    return make_result("kl-decomposition-identity", passed, cases);
}

SuiteResult run_entropy_identity_suite(int cases, std::uint64_t seed) {
    int passed = 0;
    Rng rng(derive_seed(seed, 0xE1));
    for (int i = 0; i < cases; ++i) {
        const std::size_t radix = (i % 2 == 0) ? 2 : 3;
        const int k = i % 3;
        const QuantSpec quant = radix == 2 ? binary_unit_spec() : ternary_unit_spec();
        const Alphabet alphabet = build_alphabet(quant);
        const std::size_t n = k + 3 + rng.next_below(38);
        std::vector<std::uint32_t> idx(n);
        for (auto& v : idx) v = static_cast<std::uint32_t>(rng.next_below(radix));
        const EmpiricalDistribution d = empirical_distribution(idx, alphabet, k + 1);
        const WeightVector wv = weights_from_empirical(d);
        double dot = 0.0;
        for (const auto& [key, c] : d.counts)
            dot += (static_cast<double>(c) / static_cast<double>(d.windows)) * wv.at(key);
        // Identical floating-point sequence on both sides: equality is exact.
        if (dot == conditional_empirical_entropy(d)) ++passed;
    }
    return make_result("entropy-weights-identity", passed, cases);
}

SuiteResult run_quantization_suite(int cases, std::uint64_t seed) {
    int passed = 0;
    Rng rng(derive_seed(seed, 0x0B));
    for (int i = 0; i < cases; ++i) {
        const int b = 1 + static_cast<int>(rng.next_below(20));
        const double x = rng.next_range(-100.0, 100.0);
        const double qx = quantize_scalar(x, b);
        const double step = std::ldexp(1.0, -b);
        bool ok = qx <= x && x - qx < step;
        ok = ok && quantize_scalar(qx, b) == qx;
        const double y = rng.next_range(-100.0, 100.0);
        const double qy = quantize_scalar(y, b);
        ok = ok && (x <= y ? qx <= qy : qy <= qx);
        // Sequence bound on a random vector.
        const std::size_t len = 1 + rng.next_below(50);
        std::vector<double> v(len);
        for (auto& e : v) e = rng.next_range(0.0, 1.0);
        const QuantizedSequence qs = quantize_sequence(v, QuantSpec{b, 0.0, 1.0, true});
        double err = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            const double d = v[j] - qs.values[j];
            err += d * d;
        }
        ok = ok && std::sqrt(err) <= step * std::sqrt(static_cast<double>(len)) + 1e-15;
        if (ok) ++passed;
    }
    return make_result("quantization-bounds", passed, cases);
}

SuiteResult run_sigma_max_suite(int matrices, std::size_t n, std::size_t m, std::uint64_t seed) {
    int passed = 0;
    const double bound = std::sqrt(static_cast<double>(n)) + 2.0 * std::sqrt(static_cast<double>(m));
    for (int i = 0; i < matrices; ++i) {
        const SensingSystem a =
            generate_matrix(m, n, derive_seed(seed, 0x51, static_cast<std::uint64_t>(i)));
        if (max_singular_value(a) < bound) ++passed;
    }
    std::ostringstream detail;
    detail << "bound sqrt(n)+2 sqrt(m) = " << bound;
    return make_result("sigma-max-event", passed, matrices, detail.str());
}

SuiteResult run_oracle_agreement_suite(int instances, std::uint64_t seed) {
    int never_below = 0;
    int equal = 0;
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = derive_seed(seed, 0x0A, static_cast<std::uint64_t>(i));
        CostSpec spec = random_small_instance(8, 4, 1, s);
        const RecoveryResult exact = solve_exhaustive(spec);
        const RecoveryResult heur = solve_anneal(spec, AnnealSchedule{}, derive_seed(s, 5));
        if (heur.cost >= exact.cost - 1e-12) ++never_below;
        if (heur.cost <= exact.cost * (1.0 + 1e-9) + 1e-12) ++equal;
    }
    std::ostringstream detail;
    detail << "lower-bounded " << never_below << "/" << instances << ", attained " << equal << "/"
           << instances;
    SuiteResult res = make_result("anneal-oracle-agreement", 0, instances, detail.str());
    res.passed = equal;
    res.pass = never_below == instances && equal >= (instances * 9) / 10;
    return res;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
    std::vector<SuiteResult> out;
    out.push_back(run_equivalence_suite(100, derive_seed(seed, 101)));
    out.push_back(run_sandwich_suite(100, 0.25, derive_seed(seed, 102)));
    out.push_back(run_concavity_suite(1000, derive_seed(seed, 103)));
    out.push_back(run_kl_identity_suite(1000, derive_seed(seed, 104)));
    out.push_back(run_entropy_identity_suite(1000, derive_seed(seed, 105)));
    out.push_back(run_quantization_suite(1000, derive_seed(seed, 106)));
    out.push_back(run_sigma_max_suite(200, 100, 50, derive_seed(seed, 107)));
    out.push_back(run_oracle_agreement_suite(100, derive_seed(seed, 108)));
    return out;
}

}  // namespace mepcs
