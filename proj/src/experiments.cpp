#include "mepcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "mepcs/errors.hpp"
#include "mepcs/io.hpp"
#include "mepcs/rng.hpp"

namespace mepcs {

namespace {

constexpr std::uint64_t kTrialTag = 0x7121A1u;
constexpr std::uint64_t kConvergenceTag = 0xC0BB1Eu;

struct CellKey {
    std::size_t rate_idx;
    std::size_t eps_idx;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Weights that do not depend on the trial are built once per sweep.
struct SharedWeights {
    WeightVector true_weights;
    bool have_true = false;
    WeightVector file_weights;
    bool have_file = false;
};

SharedWeights build_shared_weights(const ExperimentConfig& cfg) {
    SharedWeights shared;
    const bool base_true = cfg.scheme == WeightScheme::true_distribution ||
                           (cfg.scheme == WeightScheme::perturbed &&
                            cfg.perturb_base == WeightScheme::true_distribution);
    if (base_true) {
        shared.true_weights = weights_from_distribution(
            true_block_distribution(cfg.source, cfg.quant, cfg.k + 1));
        shared.have_true = true;
    }
    const bool base_file = cfg.scheme == WeightScheme::mismatched ||
                           (cfg.scheme == WeightScheme::perturbed &&
                            cfg.perturb_base == WeightScheme::mismatched);
    if (base_file) {
        const Alphabet alphabet = build_alphabet(cfg.quant);
        shared.file_weights =
            weights_from_distribution(read_distribution(cfg.q_file, alphabet));
        shared.have_file = true;
    }
    return shared;
}

RecoveryOutcome run_trial(const ExperimentConfig& cfg, const SharedWeights& shared, double rate,
                          std::size_t rate_idx, double eps, std::size_t eps_idx, int trial) {
    const auto t_start = std::chrono::steady_clock::now();

    // Seeds hang off (master, rate, trial) only, so the eps grid reuses the
    // same instances and eps = 0 reproduces the plain recovery sweep.
    const std::uint64_t instance_seed =
        derive_seed(cfg.master_seed, kTrialTag, rate_idx, static_cast<std::uint64_t>(trial));
    const std::uint64_t source_seed = derive_seed(instance_seed, 1);
    const std::uint64_t matrix_seed = derive_seed(instance_seed, 2);
    const std::uint64_t solver_seed = derive_seed(instance_seed, 3);
    const std::uint64_t perturb_seed = derive_seed(instance_seed, 4, eps_idx);

    const std::vector<double> x = sample_source(cfg.source, cfg.n, source_seed);
    const QuantizedSequence xq = quantize_sequence(x, cfg.quant);
    const std::size_t m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(rate * static_cast<double>(cfg.n))));

    CostSpec spec;
    spec.k = cfg.k;
    spec.lambda = cfg.effective_lambda();
    spec.quant = cfg.quant;
    spec.sensing = generate_matrix(m, cfg.n, matrix_seed, spec.lambda);
    spec.y = measure(spec.sensing, x);

    WeightScheme scheme = cfg.scheme;
    WeightScheme base = cfg.perturb_base;
    if (scheme == WeightScheme::mismatched && eps > 0.0) {
        scheme = WeightScheme::perturbed;
        base = WeightScheme::mismatched;
    }
    if (scheme == WeightScheme::lmep) {
        spec.mode = CostMode::lmep;
    } else {
        spec.mode = CostMode::amep;
        auto base_weights = [&](WeightScheme which) -> WeightVector {
            switch (which) {
                case WeightScheme::true_distribution:
                    return shared.true_weights;
                case WeightScheme::mismatched:
                    return shared.file_weights;
                case WeightScheme::empirical_input:
                    return weights_from_empirical(empirical_distribution(xq, cfg.k + 1));
                default:
                    throw ConfigError("invalid perturbation base scheme");
            }
        };
        if (scheme == WeightScheme::perturbed)
            spec.weights =
                perturb_weights(base_weights(base), eps, cfg.quant.bits, perturb_seed);
        else
            spec.weights = base_weights(scheme);
    }

    RecoveryOutcome out;
    out.result = cfg.solver == SolverKind::exhaustive
                     ? solve_exhaustive(spec)
                     : solve_anneal(spec, cfg.schedule, solver_seed);

    SweepRow& row = out.row;
    row.rate = rate;
    row.eps_w = eps;
    row.seed = instance_seed;
    row.m = m;
    row.n = cfg.n;
    row.trial = trial;
    row.normalized_error = normalized_error(x, out.result.xhat.values);
    row.success = row.normalized_error < cfg.effective_threshold();
    row.cost = out.result.cost;
    row.structure = out.result.structure_term;
    row.residual = out.result.residual_term;
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t_start)
                         .count();
    return out;
}

SweepReport run_grid(const ExperimentConfig& cfg, std::span<const double> eps_values) {
    cfg.validate();
    const SharedWeights shared = build_shared_weights(cfg);

    struct Task {
        std::size_t rate_idx;
        std::size_t eps_idx;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t ri = 0; ri < cfg.rates.size(); ++ri)
        for (std::size_t ei = 0; ei < eps_values.size(); ++ei)
            for (int t = 0; t < cfg.trials; ++t) tasks.push_back({ri, ei, t});

    std::vector<SweepRow> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());
    auto run_one = [&](std::size_t i) {
        const Task& t = tasks[i];
        try {
            rows[i] = run_trial(cfg, shared, cfg.rates[t.rate_idx], t.rate_idx,
                                eps_values[t.eps_idx], t.eps_idx, t.trial)
                          .row;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                run_one(i);
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i].empty()) continue;
        throw ConfigError("sweep cell (rate " + std::to_string(cfg.rates[tasks[i].rate_idx]) +
                          ", eps " + std::to_string(eps_values[tasks[i].eps_idx]) + ", trial " +
                          std::to_string(tasks[i].trial) + ") failed: " + errors[i]);
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.rate != b.rate) return a.rate < b.rate;
        if (a.eps_w != b.eps_w) return a.eps_w < b.eps_w;
        return a.seed < b.seed;
    });

    SweepReport report;
    report.rows = std::move(rows);
    // Per-cell summaries in the same (rate, eps_w) order as the rows.
    std::size_t i = 0;
    while (i < report.rows.size()) {
        std::size_t j = i;
        std::vector<double> errors, runtimes;
        int successes = 0;
        while (j < report.rows.size() && report.rows[j].rate == report.rows[i].rate &&
               report.rows[j].eps_w == report.rows[i].eps_w) {
            errors.push_back(report.rows[j].normalized_error);
            runtimes.push_back(report.rows[j].runtime_ms);
            successes += report.rows[j].success ? 1 : 0;
            ++j;
        }
        CellSummary cell;
        cell.rate = report.rows[i].rate;
        cell.eps_w = report.rows[i].eps_w;
        cell.trials = static_cast<int>(j - i);
        cell.success_fraction = static_cast<double>(successes) / static_cast<double>(j - i);
        cell.mean_error = mean_of(errors);
        cell.mean_runtime_ms = mean_of(runtimes);
        report.summary.push_back(cell);
        i = j;
    }
    return report;
}

}  // namespace

void ExperimentConfig::validate() const {
    source.validate();
    quant.validate();
    if (k < 0) throw ConfigError("config: k must be >= 0");
    if (n <= static_cast<std::size_t>(k) + 1) throw ConfigError("config: need n > k + 1");
    if (rates.empty()) throw ConfigError("config: rates must be nonempty");
    for (double r_ : rates)
        if (!(r_ > 0.0 && r_ <= 1.0)) throw ConfigError("config: rates must lie in (0, 1]");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (scheme == WeightScheme::mismatched && q_file.empty())
        throw ConfigError("config: mismatched scheme needs a q_file");
    if (scheme == WeightScheme::perturbed && perturb_base == WeightScheme::mismatched &&
        q_file.empty())
        throw ConfigError("config: mismatched perturbation base needs a q_file");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

double ExperimentConfig::effective_lambda() const {
    if (lambda > 0.0) return lambda;
    const double log2n = std::log2(static_cast<double>(n));
    return std::pow(log2n, 2.0 * r);
}

double ExperimentConfig::effective_threshold() const {
    if (success_threshold > 0.0) return success_threshold;
    return std::ldexp(1.0, -quant.bits) + 0.01;
}

SweepReport run_recovery_sweep(const ExperimentConfig& cfg) {
    const double eps = cfg.eps_w.empty() ? 0.0 : cfg.eps_w.front();
    const double grid[1] = {eps};
    return run_grid(cfg, grid);
}

RecoveryOutcome run_single_recovery(const ExperimentConfig& cfg, double rate, int trial) {
    cfg.validate();
    const SharedWeights shared = build_shared_weights(cfg);
    std::size_t rate_idx = 0;
    for (std::size_t i = 0; i < cfg.rates.size(); ++i)
        if (cfg.rates[i] == rate) rate_idx = i;
    const double eps = cfg.eps_w.empty() ? 0.0 : cfg.eps_w.front();
    return run_trial(cfg, shared, rate, rate_idx, eps, 0, trial);
}

SweepReport run_robustness_sweep(const ExperimentConfig& cfg) {
    if (cfg.scheme != WeightScheme::perturbed && cfg.scheme != WeightScheme::mismatched)
        throw ConfigError("robustness sweep requires a perturbed or mismatched scheme");
    if (cfg.eps_w.empty()) throw ConfigError("robustness sweep requires an eps_w grid");
    return run_grid(cfg, cfg.eps_w);
}

std::vector<RateThreshold> rate_thresholds(const SweepReport& report, double success_level) {
    std::vector<RateThreshold> out;
    for (const CellSummary& cell : report.summary) {
        auto it = std::find_if(out.begin(), out.end(), [&](const RateThreshold& t) {
            return t.eps_w == cell.eps_w;
        });
        if (it == out.end()) {
            out.push_back({cell.eps_w, 0.0, false});
            it = out.end() - 1;
        }
        if (!it->found && cell.success_fraction >= success_level) {
            it->threshold_rate = cell.rate;
            it->found = true;
        }
    }
    return out;
}

std::vector<ConvergenceRow> run_convergence_study(const SourceModel& model,
                                                  const QuantSpec& spec, int k,
                                                  std::span<const std::size_t> n_values,
                                                  int trials, std::uint64_t master_seed) {
    model.validate();
    spec.validate();
    if (k < 0) throw InvalidInput("run_convergence_study: k must be >= 0");
    const int cmp_order = std::max(k, 1);
    const TrueBlockDistribution law_k = true_block_distribution(model, spec, cmp_order);
    const TrueBlockDistribution law_k1 = true_block_distribution(model, spec, k + 1);
    const BlockPmf law_k_pmf = pmf_of(law_k);

    std::vector<ConvergenceRow> rows;
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        const std::size_t n = n_values[ni];
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t seed =
                derive_seed(master_seed, kConvergenceTag, ni, static_cast<std::uint64_t>(t));
            const std::vector<double> x = sample_source(model, n, seed);
            const QuantizedSequence xq = quantize_sequence(x, spec);
            ConvergenceRow row;
            row.n = n;
            row.trial = t;
            row.seed = seed;
            const Deviation dev =
                total_variation(pmf_of(empirical_distribution(xq, cmp_order)), law_k_pmf);
            row.l1 = dev.l1;
            row.tv = dev.tv;
            const KlWeightGap gap = conditional_kl_weight_gap(
                empirical_distribution(xq, k + 1), law_k1, spec.bits);
            row.kl_block_per_bit = gap.block_kl_per_bit;
            row.kl_conditional_per_bit = gap.conditional_kl_per_bit;
            row.kl_infinite = gap.infinite;
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {
const char* kReportHeader =
    "rate,eps_w,seed,m,n,trial,normalized_error,success,cost,structure,residual";
}

void emit_report(const SweepReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << kReportHeader << '\n';
    for (const SweepRow& r : report.rows) {
        out << format_double(r.rate) << ',' << format_double(r.eps_w) << ',' << r.seed << ','
            << r.m << ',' << r.n << ',' << r.trial << ',' << format_double(r.normalized_error)
            << ',' << (r.success ? 1 : 0) << ',' << format_double(r.cost) << ','
            << format_double(r.structure) << ',' << format_double(r.residual) << '\n';
    }
    for (const CellSummary& c : report.summary) {
        out << "# summary,rate=" << format_double(c.rate) << ",eps_w=" << format_double(c.eps_w)
            << ",trials=" << c.trials
            << ",success_fraction=" << format_double(c.success_fraction)
            << ",mean_error=" << format_double(c.mean_error)
            << ",mean_runtime_ms=" << format_double(c.mean_runtime_ms) << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

SweepReport parse_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader)
        throw Error("unexpected report header in " + path);
    SweepReport report;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string field;
        SweepRow r;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw Error("short report row in " + path);
            return field;
        };
        r.rate = std::strtod(next().c_str(), nullptr);
        r.eps_w = std::strtod(next().c_str(), nullptr);
        r.seed = std::strtoull(next().c_str(), nullptr, 10);
        r.m = std::strtoull(next().c_str(), nullptr, 10);
        r.n = std::strtoull(next().c_str(), nullptr, 10);
        r.trial = static_cast<int>(std::strtol(next().c_str(), nullptr, 10));
        r.normalized_error = std::strtod(next().c_str(), nullptr);
        r.success = next() == "1";
        r.cost = std::strtod(next().c_str(), nullptr);
        r.structure = std::strtod(next().c_str(), nullptr);
        r.residual = std::strtod(next().c_str(), nullptr);
        report.rows.push_back(r);
    }
    return report;
}

void emit_convergence_table(std::span<const ConvergenceRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << "n,trial,seed,l1,tv,kl_block_per_bit,kl_conditional_per_bit\n";
    for (const ConvergenceRow& r : rows) {
        out << r.n << ',' << r.trial << ',' << r.seed << ',' << format_double(r.l1) << ','
            << format_double(r.tv) << ',';
        if (r.kl_infinite)
            out << "inf,inf";
        else
            out << format_double(r.kl_block_per_bit) << ','
                << format_double(r.kl_conditional_per_bit);
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

void emit_id_table(const IdEstimate& estimate, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << "b,ratio\n";
    for (std::size_t i = 0; i < estimate.b_values.size(); ++i)
        out << estimate.b_values[i] << ',' << format_double(estimate.ratios[i]) << '\n';
    out << "# extrapolated," << format_double(estimate.extrapolated) << '\n';
    if (!out) throw Error("write failed: " + path);
}

void emit_success_plot_svg(const SweepReport& report, const std::string& path) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double width = 640, height = 420;
    const double ml = 60, mr = 150, mt = 20, mb = 50;
    double rate_lo = 1e300, rate_hi = -1e300;
    std::vector<double> eps_values;
    for (const CellSummary& c : report.summary) {
        rate_lo = std::min(rate_lo, c.rate);
        rate_hi = std::max(rate_hi, c.rate);
        if (std::find(eps_values.begin(), eps_values.end(), c.eps_w) == eps_values.end())
            eps_values.push_back(c.eps_w);
    }
    std::sort(eps_values.begin(), eps_values.end());
    if (report.summary.empty()) {
        rate_lo = 0.0;
        rate_hi = 1.0;
    }
    if (rate_hi == rate_lo) {
        rate_lo -= 0.05;
        rate_hi += 0.05;
    }
    auto sx = [&](double rate) {
        return ml + (rate - rate_lo) / (rate_hi - rate_lo) * (width - ml - mr);
    };
    auto sy = [&](double frac) { return mt + (1.0 - frac) * (height - mt - mb); };

    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Axes and y grid.
    for (int i = 0; i <= 4; ++i) {
        const double frac = 0.25 * i;
        out << "<line x1=\"" << sx(rate_lo) << "\" y1=\"" << sy(frac) << "\" x2=\""
            << sx(rate_hi) << "\" y2=\"" << sy(frac)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(frac) + 4
            << "\" text-anchor=\"end\">" << format_double(frac) << "</text>\n";
    }
    for (double rate : {rate_lo, 0.5 * (rate_lo + rate_hi), rate_hi}) {
        out << "<text x=\"" << sx(rate) << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\">" << format_double(rate) << "</text>\n";
    }
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << width - mr << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << ml << "\" y2=\"" << mt
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << 0.5 * (ml + width - mr) << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">sampling rate m/n</text>\n";
    out << "<text x=\"15\" y=\"" << 0.5 * height
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << 0.5 * height
        << ")\">success fraction</text>\n";
    // One curve per eps_w.
    for (std::size_t e = 0; e < eps_values.size(); ++e) {
        const char* color = kColors[e % (sizeof kColors / sizeof kColors[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const CellSummary& c : report.summary)
            if (c.eps_w == eps_values[e])
                out << sx(c.rate) << ',' << sy(c.success_fraction) << ' ';
        out << "\"/>\n";
        for (const CellSummary& c : report.summary)
            if (c.eps_w == eps_values[e])
                out << "<circle cx=\"" << sx(c.rate) << "\" cy=\"" << sy(c.success_fraction)
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << width - mr + 12 << "\" y=\"" << mt + 16 * (e + 1)
            << "\" fill=\"" << color << "\">eps_w = " << format_double(eps_values[e])
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw Error("write failed: " + path);
}

std::string default_out_dir() {
    const char* env = std::getenv("MEPCS_OUT_DIR");
    return env && *env ? env : "out";
}

KeyValueConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    KeyValueConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) cfg[key] = value;
    }
    return cfg;
}

void apply_config_override(KeyValueConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: " + assignment);
    cfg[assignment.substr(0, eq)] = assignment.substr(eq + 1);
}

namespace {

std::string get_str(const KeyValueConfig& cfg, const std::string& key,
                    const std::string& fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

double get_double(const KeyValueConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : std::strtod(it->second.c_str(), nullptr);
}

long long get_int(const KeyValueConfig& cfg, const std::string& key, long long fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : std::strtoll(it->second.c_str(), nullptr, 10);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) out.push_back(std::strtod(token.c_str(), nullptr));
    return out;
}

}  // namespace

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg) {
    ExperimentConfig out;

    const std::string kind = get_str(cfg, "source.kind", "sparse-iid");
    if (kind == "sparse-iid") {
        SparseIid s;
        s.p = get_double(cfg, "source.p", 0.2);
        s.lo = get_double(cfg, "source.lo", 0.0);
        s.hi = get_double(cfg, "source.hi", 1.0);
        out.source.model = s;
    } else if (kind == "finite-markov") {
        FiniteMarkov c;
        c.states = parse_list(get_str(cfg, "source.states", "0,0.5"));
        const std::string rows = get_str(cfg, "source.transition", "0.9,0.1;0.1,0.9");
        std::istringstream ss(rows);
        std::string row;
        while (std::getline(ss, row, ';')) c.transition.push_back(parse_list(row));
        const std::string pi = get_str(cfg, "source.stationary", "");
        if (!pi.empty()) c.stationary = parse_list(pi);
        out.source.model = c;
    } else {
        throw ConfigError("unknown source.kind: " + kind);
    }

    out.quant.bits = static_cast<int>(get_int(cfg, "quant.b", 3));
    out.quant.lo = get_double(cfg, "quant.lo", out.source.support_lo());
    out.quant.hi = get_double(cfg, "quant.hi", out.source.support_hi());
    out.quant.hi_open =
        get_int(cfg, "quant.hi_open", out.source.is_sparse_iid() ? 1 : 0) != 0;

    out.k = static_cast<int>(get_int(cfg, "k", 0));
    out.n = static_cast<std::size_t>(get_int(cfg, "n", 96));
    out.rates = parse_list(get_str(cfg, "rates", "0.7"));
    out.trials = static_cast<int>(get_int(cfg, "trials", 50));

    const std::string solver = get_str(cfg, "solver", "anneal");
    if (solver == "anneal")
        out.solver = SolverKind::anneal;
    else if (solver == "exhaustive")
        out.solver = SolverKind::exhaustive;
    else
        throw ConfigError("unknown solver: " + solver);
    out.schedule.restarts = static_cast<int>(get_int(cfg, "solver.restarts", 4));
    out.schedule.proposals = get_int(cfg, "solver.proposals", 0);
    out.schedule.cool_proposals = get_int(cfg, "solver.cool", 0);
    out.schedule.t0 = get_double(cfg, "solver.t0", 1.0);
    out.schedule.t_end = get_double(cfg, "solver.t_end", 1e-3);
    out.schedule.record_trace = get_int(cfg, "solver.trace", 0) != 0;

    const std::string scheme = get_str(cfg, "weights", "true-distribution");
    auto parse_scheme = [](const std::string& s) {
        if (s == "lmep") return WeightScheme::lmep;
        if (s == "empirical-input") return WeightScheme::empirical_input;
        if (s == "true-distribution") return WeightScheme::true_distribution;
        if (s == "perturbed") return WeightScheme::perturbed;
        if (s == "mismatched") return WeightScheme::mismatched;
        throw ConfigError("unknown weight scheme: " + s);
    };
    out.scheme = parse_scheme(scheme);
    out.perturb_base = parse_scheme(get_str(cfg, "weights.base", "true-distribution"));
    out.eps_w = parse_list(get_str(cfg, "weights.eps", "0"));
    out.q_file = get_str(cfg, "weights.q_file", "");

    out.lambda = get_double(cfg, "lambda", -1.0);
    out.r = get_double(cfg, "r", 1.5);
    out.delta = get_double(cfg, "delta", 0.1);
    out.success_threshold = get_double(cfg, "success_threshold", -1.0);
    out.master_seed = static_cast<std::uint64_t>(get_int(cfg, "seed", 1));
    out.threads = static_cast<int>(get_int(cfg, "threads", 1));
    return out;
}

}  // namespace mepcs
