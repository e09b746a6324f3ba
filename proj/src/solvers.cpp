#include "mepcs/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"

namespace mepcs {

namespace {

constexpr std::uint64_t kSearchGuard = std::uint64_t{1} << 24;

std::uint64_t pow_guarded(std::size_t radix, std::size_t n, std::uint64_t guard) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (v > guard / radix) throw TooLarge("search space exceeds guard");
        v *= radix;
    }
    return v;
}

// Shared machinery for evaluating costs over index sequences with
// preallocated dense scratch.
class CostEngine {
public:
    explicit CostEngine(const CostSpec& spec)
        : spec_(spec),
          alphabet_(build_alphabet(spec.quant)),
          radix_(alphabet_.size()),
          order_(spec.k + 1),
          n_(spec.sensing.n),
          windows_(static_cast<long long>(n_) - order_),
          lam_n2_(spec.lambda / (static_cast<double>(n_) * static_cast<double>(n_))) {
        joint_space_ = pow_guarded(radix_, static_cast<std::size_t>(order_), kSearchGuard);
        ctx_space_ = joint_space_ / radix_;
        counts_.assign(joint_space_, 0);
        ctx_counts_.assign(ctx_space_, 0);
        values_.resize(radix_);
        for (std::size_t s = 0; s < radix_; ++s) values_[s] = alphabet_[s];
        if (spec.mode == CostMode::amep) {
            wdense_.resize(joint_space_);
            for (std::uint64_t key = 0; key < joint_space_; ++key)
                wdense_[key] = spec.weights->at(key);
        }
        col_norm_sq_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            double s = 0.0;
            for (double v : spec.sensing.column(j)) s += v * v;
            col_norm_sq_[j] = s;
        }
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t radix() const { return radix_; }
    std::size_t n() const { return n_; }

    // Rebuilds counts and the residual vector for `idx`; returns the cost.
    double load_state(std::span<const std::uint32_t> idx) {
        std::fill(counts_.begin(), counts_.end(), 0);
        std::fill(ctx_counts_.begin(), ctx_counts_.end(), 0);
        Block key = 0;
        const std::uint64_t wrap = joint_space_ / radix_;
        for (int t = 0; t < order_; ++t) key = key * radix_ + idx[t];
        bump_counts(key, +1);
        for (long long s = 1; s < windows_; ++s) {
            key = (key % wrap) * radix_ + idx[s + order_ - 1];
            bump_counts(key, +1);
        }
        residual_.assign(spec_.sensing.m, 0.0);
        for (std::size_t i = 0; i < spec_.sensing.m; ++i) residual_[i] = -spec_.y[i];
        for (std::size_t j = 0; j < n_; ++j) {
            const double xj = values_[idx[j]];
            if (xj == 0.0) continue;
            const std::span<const double> col = spec_.sensing.column(j);
            for (std::size_t i = 0; i < spec_.sensing.m; ++i) residual_[i] += xj * col[i];
        }
        rss_ = 0.0;
        for (double r : residual_) rss_ += r * r;
        structure_ = structure_from_counts();
        return structure_ + lam_n2_ * rss_;
    }

    // Cost change if coordinate `coord` switches to symbol `sym`, leaving
    // the engine in the *proposed* count state (call `commit` or `revert`).
    double propose(std::span<const std::uint32_t> idx, std::size_t coord, std::uint32_t sym) {
        pending_coord_ = coord;
        pending_sym_ = sym;
        pending_old_ = idx[coord];
        apply_window_counts(idx, coord, pending_old_, -1);
        apply_window_counts(idx, coord, sym, +1);
        const double new_structure = structure_from_counts();
        const double delta_value = values_[sym] - values_[pending_old_];
        const std::span<const double> col = spec_.sensing.column(coord);
        double dot = 0.0;
        for (std::size_t i = 0; i < spec_.sensing.m; ++i) dot += residual_[i] * col[i];
        pending_drss_ = 2.0 * delta_value * dot + delta_value * delta_value * col_norm_sq_[coord];
        pending_structure_ = new_structure;
        return (new_structure - structure_) + lam_n2_ * pending_drss_;
    }

    void commit(std::vector<std::uint32_t>& idx) {
        const double delta_value = values_[pending_sym_] - values_[pending_old_];
        const std::span<const double> col = spec_.sensing.column(pending_coord_);
        for (std::size_t i = 0; i < spec_.sensing.m; ++i) residual_[i] += delta_value * col[i];
        rss_ += pending_drss_;
        structure_ = pending_structure_;
        idx[pending_coord_] = pending_sym_;
    }

    void revert(std::span<const std::uint32_t> idx) {
        apply_window_counts(idx, pending_coord_, pending_sym_, -1);
        apply_window_counts(idx, pending_coord_, pending_old_, +1);
    }

    // Full evaluation without touching the incremental state.
    double evaluate(std::span<const std::uint32_t> idx, double* structure_out = nullptr,
                    double* residual_out = nullptr) const {
        double structure;
        if (spec_.mode == CostMode::lmep) {
            const EmpiricalDistribution d = empirical_distribution(idx, alphabet_, order_);
            structure = conditional_empirical_entropy(d);
        } else {
            const EmpiricalDistribution d = empirical_distribution(idx, alphabet_, order_);
            double t = 0.0;
            for (const auto& [key, c] : d.counts)
                t += (static_cast<double>(c) / static_cast<double>(d.windows)) *
                     spec_.weights->at(key);
            structure = t;
        }
        std::vector<double> x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = values_[idx[j]];
        const double resid = lam_n2_ * residual_norm_sq(spec_.sensing, x, spec_.y);
        if (structure_out) *structure_out = structure;
        if (residual_out) *residual_out = resid;
        return structure + resid;
    }

private:
    void bump_counts(Block key, long long d) {
        counts_[key] += d;
        if (order_ >= 2) ctx_counts_[key / radix_] += d;
    }

    // Windows of length `order_` covering `coord`, restricted to the starts
    // 0 .. windows_-1 that the empirical distribution actually counts.
    void apply_window_counts(std::span<const std::uint32_t> idx, std::size_t coord,
                             std::uint32_t sym, long long d) {
        const long long lo =
            std::max<long long>(0, static_cast<long long>(coord) - (order_ - 1));
        const long long hi = std::min<long long>(static_cast<long long>(coord), windows_ - 1);
        for (long long s = lo; s <= hi; ++s) {
            Block key = 0;
            for (int t = 0; t < order_; ++t) {
                const std::uint32_t v =
                    (static_cast<std::size_t>(s) + t == coord) ? sym : idx[s + t];
                key = key * radix_ + v;
            }
            bump_counts(key, d);
        }
    }

    double structure_from_counts() const {
        const double inv_w = 1.0 / static_cast<double>(windows_);
        double acc = 0.0;
        if (spec_.mode == CostMode::amep) {
            for (std::uint64_t key = 0; key < joint_space_; ++key) {
                const long long c = counts_[key];
                if (c != 0) acc += static_cast<double>(c) * inv_w * wdense_[key];
            }
        } else {
            for (std::uint64_t key = 0; key < joint_space_; ++key) {
                const long long c = counts_[key];
                if (c == 0) continue;
                const long long ctx = order_ >= 2 ? ctx_counts_[key / radix_] : windows_;
                acc += static_cast<double>(c) * inv_w *
                       std::log2(static_cast<double>(ctx) / static_cast<double>(c));
            }
        }
        return acc;
    }

    const CostSpec& spec_;
    Alphabet alphabet_;
    std::size_t radix_;
    int order_;
    std::size_t n_;
    long long windows_;
    double lam_n2_;
    std::uint64_t joint_space_ = 0;
    std::uint64_t ctx_space_ = 0;
    std::vector<long long> counts_;
    std::vector<long long> ctx_counts_;
    std::vector<double> values_;
    std::vector<double> wdense_;
    std::vector<double> col_norm_sq_;
    std::vector<double> residual_;
    double rss_ = 0.0;
    double structure_ = 0.0;

    std::size_t pending_coord_ = 0;
    std::uint32_t pending_sym_ = 0;
    std::uint32_t pending_old_ = 0;
    double pending_drss_ = 0.0;
    double pending_structure_ = 0.0;
};

RecoveryResult finish_result(const CostEngine& engine, const CostSpec& spec,
                             std::span<const std::uint32_t> idx, std::uint64_t seed,
                             std::vector<TraceEntry> trace) {
    RecoveryResult out;
    double structure = 0.0, residual = 0.0;
    out.cost = engine.evaluate(idx, &structure, &residual);
    out.structure_term = structure;
    out.residual_term = residual;
    out.xhat = from_indices(idx, engine.alphabet(), spec.quant);
    out.trace = std::move(trace);
    out.seed = seed;
    return out;
}

}  // namespace

void CostSpec::validate() const {
    quant.validate();
    if (k < 0) throw InvalidInput("CostSpec: k must be >= 0");
    if (!(lambda > 0.0)) throw InvalidInput("CostSpec: lambda must be positive");
    if (sensing.m < 1 || sensing.n < 1) throw InvalidInput("CostSpec: empty sensing system");
    if (y.size() != sensing.m) throw ShapeError("CostSpec: y length must equal m");
    if (static_cast<long long>(sensing.n) <= k + 1)
        throw InsufficientData("CostSpec: need n > k + 1");
    if (mode == CostMode::amep) {
        if (!weights) throw InvalidInput("CostSpec: amep mode requires weights");
        if (weights->order != k + 1)
            throw ShapeError("CostSpec: weights order must equal k + 1");
        if (weights->alphabet != build_alphabet(quant))
            throw ShapeError("CostSpec: weights alphabet must match the solver alphabet");
    }
}

double lmep_cost(const QuantizedSequence& u, const CostSpec& spec) {
    if (spec.mode != CostMode::lmep) throw InvalidInput("lmep_cost: spec mode is not lmep");
    return cost_value(u, spec);
}

double amep_cost(const QuantizedSequence& u, const CostSpec& spec) {
    if (spec.mode != CostMode::amep) throw InvalidInput("amep_cost: spec mode is not amep");
    return cost_value(u, spec);
}

double cost_value(const QuantizedSequence& u, const CostSpec& spec) {
    spec.validate();
    if (u.size() != spec.sensing.n) throw ShapeError("cost_value: sequence length != n");
    const Alphabet alphabet = build_alphabet(spec.quant);
    const std::vector<std::uint32_t> idx = to_indices(u, alphabet);
    const EmpiricalDistribution d = empirical_distribution(idx, alphabet, spec.k + 1);
    double structure;
    if (spec.mode == CostMode::lmep) {
        structure = conditional_empirical_entropy(d);
    } else {
        double t = 0.0;
        for (const auto& [key, c] : d.counts)
            t += (static_cast<double>(c) / static_cast<double>(d.windows)) *
                 spec.weights->at(key);
        structure = t;
    }
    const double lam_n2 =
        spec.lambda / (static_cast<double>(u.size()) * static_cast<double>(u.size()));
    return structure + lam_n2 * residual_norm_sq(spec.sensing, u.values, spec.y);
}

RecoveryResult solve_exhaustive(const CostSpec& spec) {
    spec.validate();
    CostEngine engine(spec);
    const std::size_t n = engine.n();
    const std::size_t radix = engine.radix();
    pow_guarded(radix, n, kSearchGuard);

    std::vector<std::uint32_t> idx(n, 0);
    std::vector<std::uint32_t> best = idx;
    double best_cost = engine.evaluate(idx);
    // Odometer with the rightmost coordinate least significant enumerates
    // value sequences in ascending lexicographic order, so the first strict
    // minimum is the lexicographically smallest minimizer.
    while (true) {
        int t = static_cast<int>(n) - 1;
        while (t >= 0 && ++idx[t] == radix) idx[t--] = 0;
        if (t < 0) break;
        const double cost = engine.evaluate(idx);
        if (cost < best_cost) {
            best_cost = cost;
            best = idx;
        }
    }
    return finish_result(engine, spec, best, 0, {});
}

RecoveryResult solve_anneal(const CostSpec& spec, const AnnealSchedule& schedule,
                            std::uint64_t seed) {
    spec.validate();
    if (schedule.restarts < 1) throw InvalidInput("solve_anneal: restarts must be >= 1");
    CostEngine engine(spec);
    const std::size_t n = engine.n();
    const std::size_t radix = engine.radix();
    const long long proposals =
        schedule.proposals > 0 ? schedule.proposals : 200 * static_cast<long long>(n);
    const long long cool =
        schedule.cool_proposals > 0 ? schedule.cool_proposals : 200 * static_cast<long long>(n);
    // The cooling horizon is independent of the proposal budget: a longer
    // run extends the frozen phase instead of re-stretching the schedule, so
    // a budget prefix is reproduced exactly.
    const double decay = (schedule.t0 > 0.0 && cool > 1)
                             ? std::pow(schedule.t_end / schedule.t0,
                                        1.0 / static_cast<double>(cool - 1))
                             : 1.0;

    std::vector<std::uint32_t> best_idx;
    double best_cost = 0.0;
    std::vector<TraceEntry> best_trace;
    bool have_best = false;

    std::vector<std::uint32_t> warm;
    if (!schedule.warm_start.empty()) {
        if (schedule.warm_start.size() != n)
            throw ShapeError("solve_anneal: warm start has wrong length");
        const QuantizedSequence ws = quantize_sequence(schedule.warm_start, spec.quant);
        warm = to_indices(ws, engine.alphabet());
    }

    std::vector<std::uint32_t> idx(n);
    for (int restart = 0; restart < schedule.restarts; ++restart) {
        Rng rng(derive_seed(seed, 0xA22EA1u, static_cast<std::uint64_t>(restart)));
        if (restart == 0 && !warm.empty()) {
            idx = warm;
        } else {
            for (std::size_t j = 0; j < n; ++j)
                idx[j] = static_cast<std::uint32_t>(rng.next_below(radix));
        }
        double cost = engine.load_state(idx);
        std::vector<std::uint32_t> run_best = idx;
        double run_best_cost = cost;
        std::vector<TraceEntry> trace;

        double temperature = schedule.t0;
        for (long long step = 0; step < proposals; ++step) {
            const std::size_t coord = static_cast<std::size_t>(rng.next_below(n));
            const std::uint32_t sym = static_cast<std::uint32_t>(rng.next_below(radix));
            if (sym != idx[coord]) {
                const double delta = engine.propose(idx, coord, sym);
                bool accept = delta <= 0.0;
                if (!accept && temperature > 0.0)
                    accept = rng.next_unit() < std::exp(-delta / temperature);
                if (accept) {
                    engine.commit(idx);
                    cost += delta;
                    if (schedule.record_trace) trace.push_back({step, coord, cost});
                    if (cost < run_best_cost) {
                        run_best_cost = cost;
                        run_best = idx;
                    }
                } else {
                    engine.revert(idx);
                }
            }
            temperature = std::max(schedule.t_end, temperature * decay);
        }
        if (!have_best || run_best_cost < best_cost) {
            have_best = true;
            best_cost = run_best_cost;
            best_idx = run_best;
            best_trace = std::move(trace);
        }
    }
    return finish_result(engine, spec, best_idx, seed, std::move(best_trace));
}

double normalized_error(std::span<const double> x, std::span<const double> xhat) {
    if (x.size() != xhat.size()) throw ShapeError("normalized_error: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xhat[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(x.size()));
}

EquivalenceReport check_minimizer_equivalence(const CostSpec& lmep_spec) {
    if (lmep_spec.mode != CostMode::lmep)
        throw InvalidInput("check_minimizer_equivalence: spec mode must be lmep");
    EquivalenceReport report;
    const RecoveryResult lmep = solve_exhaustive(lmep_spec);
    report.lmep_argmin = lmep.xhat;
    report.lmep_optimum = lmep.cost;

    const EmpiricalDistribution d = empirical_distribution(lmep.xhat, lmep_spec.k + 1);
    CostSpec amep_spec = lmep_spec;
    amep_spec.mode = CostMode::amep;
    amep_spec.weights = weights_from_empirical(d);
    const RecoveryResult amep = solve_exhaustive(amep_spec);
    report.amep_argmin = amep.xhat;
    report.amep_argmin_lmep_cost = lmep_cost(amep.xhat, lmep_spec);

    report.pass = std::fabs(report.amep_argmin_lmep_cost - report.lmep_optimum) <= 1e-10;
    if (!report.pass)
        report.message = "linearized minimizer does not attain the lmep optimum";
    return report;
}

SandwichReport check_sandwich_lemma(const CostSpec& amep_spec, double eps, std::uint64_t seed) {
    if (amep_spec.mode != CostMode::amep)
        throw InvalidInput("check_sandwich_lemma: spec mode must be amep");
    if (eps < 0.0) throw InvalidInput("check_sandwich_lemma: eps must be >= 0");
    SandwichReport report;
    report.eps = eps;

    const RecoveryResult base = solve_exhaustive(amep_spec);
    report.f_optimum = base.cost;

    CostSpec jittered = amep_spec;
    // bits = 1 makes the raw sup-norm move at most eps.
    jittered.weights = perturb_weights(*amep_spec.weights, eps, 1, seed);
    const RecoveryResult other = solve_exhaustive(jittered);
    report.f_at_fhat_argmin = amep_cost(other.xhat, amep_spec);

    const bool lower = report.f_optimum <= report.f_at_fhat_argmin + 1e-12;
    const bool upper = report.f_at_fhat_argmin <= report.f_optimum + 2.0 * eps + 1e-12;
    report.pass = lower && upper;
    if (!report.pass) report.message = "sandwich bound violated";
    return report;
}

InputWeightReport check_input_weight_bound(const CostSpec& lmep_spec,
                                           const QuantizedSequence& x_quantized) {
    if (lmep_spec.mode != CostMode::lmep)
        throw InvalidInput("check_input_weight_bound: spec mode must be lmep");
    InputWeightReport report;
    const EmpiricalDistribution d = empirical_distribution(x_quantized, lmep_spec.k + 1);
    CostSpec amep_spec = lmep_spec;
    amep_spec.mode = CostMode::amep;
    amep_spec.weights = weights_from_empirical(d);
    const RecoveryResult amep = solve_exhaustive(amep_spec);
    report.lmep_cost_at_argmin = lmep_cost(amep.xhat, lmep_spec);
    report.lmep_cost_at_input = lmep_cost(x_quantized, lmep_spec);
    report.pass = report.lmep_cost_at_argmin <= report.lmep_cost_at_input + 1e-10;
    if (!report.pass) report.message = "input-weight minimizer exceeds the input's lmep cost";
    return report;
}

}  // namespace mepcs
