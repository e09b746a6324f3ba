#include "mepcs/sources.hpp"

#include <algorithm>
#include <cmath>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"

namespace mepcs {

namespace {

constexpr double kRowSumTol = 1e-12;

void validate_sparse(const SparseIid& s) {
    if (!(s.p >= 0.0 && s.p <= 1.0)) throw ConfigError("sparse-iid: p must be in [0,1]");
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi))
        throw ConfigError("sparse-iid: requires finite lo < hi");
    if (s.lo > 0.0 || s.hi < 0.0) throw ConfigError("sparse-iid: support must contain 0");
}

void validate_markov(const FiniteMarkov& c) {
    const std::size_t s = c.states.size();
    if (s == 0) throw ConfigError("finite-markov: empty state set");
    if (c.transition.size() != s) throw ConfigError("finite-markov: transition must be square");
    for (const auto& row : c.transition) {
        if (row.size() != s) throw ConfigError("finite-markov: transition must be square");
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) throw ConfigError("finite-markov: negative transition probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > kRowSumTol)
            throw ConfigError("finite-markov: transition row does not sum to 1");
    }
    if (!c.stationary.empty() && c.stationary.size() != s)
        throw ConfigError("finite-markov: stationary law has wrong length");
}

std::size_t sample_categorical(std::span<const double> probs, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

// Per-symbol quantized law of the sparse-iid mixture: the atom at 0 plus the
// uniform mass of each grid cell intersected with [lo, hi).
std::vector<double> sparse_symbol_law(const SparseIid& s, const QuantSpec& spec,
                                      const Alphabet& alphabet) {
    const double step = std::ldexp(1.0, -spec.bits);
    const double width = s.hi - s.lo;
    std::vector<double> law(alphabet.size(), 0.0);
    double covered = 0.0;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        const double cell_lo = alphabet[i];
        const double cell_hi = cell_lo + step;
        const double overlap = std::min(cell_hi, s.hi) - std::max(cell_lo, s.lo);
        if (overlap > 0.0) {
            law[i] += s.p * overlap / width;
            covered += overlap;
        }
        if (cell_lo == 0.0) law[i] += 1.0 - s.p;
    }
    if (std::fabs(covered - width) > 1e-9 * width)
        throw ConfigError("true_block_distribution: quantizer interval does not cover the source");
    return law;
}

}  // namespace

void SourceModel::validate() const {
    if (is_sparse_iid())
        validate_sparse(sparse());
    else
        validate_markov(markov());
}

double SourceModel::support_lo() const {
    if (is_sparse_iid()) return sparse().lo;
    return *std::min_element(markov().states.begin(), markov().states.end());
}

double SourceModel::support_hi() const {
    if (is_sparse_iid()) return sparse().hi;
    return *std::max_element(markov().states.begin(), markov().states.end());
}

std::vector<double> stationary_distribution(const FiniteMarkov& chain) {
    validate_markov(chain);
    const std::size_t s = chain.states.size();
    std::vector<double> pi(s, 1.0 / static_cast<double>(s));
    std::vector<double> next(s, 0.0);
    // Iterate pi <- pi * (P + I)/2; the damping removes periodicity without
    // changing the fixed point.
    for (int iter = 0; iter < 200000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) next[j] += pi[i] * chain.transition[i][j];
        double diff = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            next[j] = 0.5 * (next[j] + pi[j]);
            diff += std::fabs(next[j] - pi[j]);
        }
        pi.swap(next);
        if (diff < 1e-15) return pi;
    }
    throw NumericError("stationary_distribution: power iteration did not converge");
}

std::vector<double> sample_source(const SourceModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n < 1) throw InvalidInput("sample_source: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    if (model.is_sparse_iid()) {
        const SparseIid& s = model.sparse();
        for (std::size_t i = 0; i < n; ++i) {
            const bool spike = rng.next_unit() >= s.p;
            out.push_back(spike ? 0.0 : rng.next_range(s.lo, s.hi));
        }
    } else {
        const FiniteMarkov& c = model.markov();
        const std::vector<double> pi =
            c.stationary.empty() ? stationary_distribution(c) : c.stationary;
        std::size_t state = sample_categorical(pi, rng.next_unit());
        out.push_back(c.states[state]);
        for (std::size_t i = 1; i < n; ++i) {
            state = sample_categorical(c.transition[state], rng.next_unit());
            out.push_back(c.states[state]);
        }
    }
    return out;
}

TrueBlockDistribution true_block_distribution(const SourceModel& model, const QuantSpec& spec,
                                              int order) {
    model.validate();
    spec.validate();
    if (order < 1) throw InvalidInput("true_block_distribution: order must be >= 1");
    const Alphabet alphabet = build_alphabet(spec);
    block_space_size(alphabet.size(), order);  // guard

    TrueBlockDistribution dist;
    dist.order = order;
    dist.alphabet = alphabet;

    if (model.is_sparse_iid()) {
        const std::vector<double> law = sparse_symbol_law(model.sparse(), spec, alphabet);
        std::vector<std::uint32_t> support;
        for (std::uint32_t i = 0; i < law.size(); ++i)
            if (law[i] > 0.0) support.push_back(i);
        // Product law over the support, enumerated with an odometer.
        std::vector<std::size_t> pos(static_cast<std::size_t>(order), 0);
        while (true) {
            double p = 1.0;
            Block key = 0;
            for (int t = 0; t < order; ++t) {
                const std::uint32_t sym = support[pos[t]];
                p *= law[sym];
                key = key * alphabet.size() + sym;
            }
            dist.probs.emplace(key, p);
            int t = order - 1;
            while (t >= 0 && ++pos[t] == support.size()) pos[t--] = 0;
            if (t < 0) break;
        }
    } else {
        const FiniteMarkov& c = model.markov();
        const std::vector<double> pi =
            c.stationary.empty() ? stationary_distribution(c) : c.stationary;
        std::vector<std::uint32_t> state_symbol(c.states.size());
        for (std::size_t i = 0; i < c.states.size(); ++i) {
            const double q = quantize_scalar(c.states[i], spec.bits);
            if (q != c.states[i])
                throw ConfigError("finite-markov: state not on the quantization grid");
            state_symbol[i] = static_cast<std::uint32_t>(alphabet.index_of(c.states[i]));
        }
        const std::size_t s = c.states.size();
        std::vector<std::size_t> pos(static_cast<std::size_t>(order), 0);
        while (true) {
            double p = pi[pos[0]];
            for (int t = 1; t < order; ++t) p *= c.transition[pos[t - 1]][pos[t]];
            if (p > 0.0) {
                Block key = 0;
                for (int t = 0; t < order; ++t) key = key * alphabet.size() + state_symbol[pos[t]];
                dist.probs[key] += p;
            }
            int t = order - 1;
            while (t >= 0 && ++pos[t] == s) pos[t--] = 0;
            if (t < 0) break;
        }
    }
    return dist;
}

IdEstimate estimate_information_dimension(const SourceModel& model, int k,
                                          std::span<const int> b_values) {
    if (k < 0) throw InvalidInput("estimate_information_dimension: k must be >= 0");
    if (b_values.empty()) throw InvalidInput("estimate_information_dimension: no b values");
    IdEstimate est;
    est.k = k;
    for (int b : b_values) {
        QuantSpec spec;
        spec.bits = b;
        spec.lo = model.support_lo();
        spec.hi = model.support_hi();
        // Sparse-iid draws from [lo, hi); chain states are themselves grid
        // points, so close the interval to include the top state.
        spec.hi_open = model.is_sparse_iid();
        const TrueBlockDistribution joint = true_block_distribution(model, spec, k + 1);
        const double h = conditional_entropy_bits(pmf_of(joint));
        est.b_values.push_back(b);
        est.ratios.push_back(h / static_cast<double>(b));
    }
    est.extrapolated = est.ratios.back();
    return est;
}

bool check_qmap_mass_condition(const TrueBlockDistribution& dist, double f) {
    const double floor_mass =
        f * std::pow(static_cast<double>(dist.alphabet.size()), -static_cast<double>(dist.order));
    for (const auto& [key, p] : dist.probs)
        if (p > 0.0 && p < floor_mass) return false;
    return true;
}

}  // namespace mepcs
