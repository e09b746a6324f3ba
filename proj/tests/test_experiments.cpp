#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "mepcs/errors.hpp"
#include "mepcs/experiments.hpp"
#include "mepcs/io.hpp"

using namespace mepcs;

namespace {

ExperimentConfig tiny_sweep_config() {
    ExperimentConfig cfg;
    cfg.source.model = SparseIid{0.2, 0.0, 1.0};
    cfg.quant = QuantSpec{1, 0.0, 1.0, true};
    cfg.k = 0;
    cfg.n = 6;
    cfg.rates = {0.5, 1.0};
    cfg.trials = 4;
    cfg.solver = SolverKind::exhaustive;
    cfg.scheme = WeightScheme::true_distribution;
    cfg.lambda = 400.0;
    cfg.master_seed = 91;
    return cfg;
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/mepcs_test_") + name;
}

bool rows_equal(const SweepRow& a, const SweepRow& b) {
    return a.rate == b.rate && a.eps_w == b.eps_w && a.seed == b.seed && a.m == b.m &&
           a.n == b.n && a.trial == b.trial && a.normalized_error == b.normalized_error &&
           a.success == b.success && a.cost == b.cost;
}

std::string data_section(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream rows;
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') rows << line << '\n';
    return rows.str();
}

}  // namespace

TEST_CASE("sweep is deterministic and order-independent") {
    const ExperimentConfig cfg = tiny_sweep_config();
    const SweepReport a = run_recovery_sweep(cfg);
    const SweepReport b = run_recovery_sweep(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(rows_equal(a.rows[i], b.rows[i]));

    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    const SweepReport c = run_recovery_sweep(threaded);
    REQUIRE(a.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(rows_equal(a.rows[i], c.rows[i]));
}

TEST_CASE("trial seeds are distinct across the grid") {
    const SweepReport report = run_recovery_sweep(tiny_sweep_config());
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        for (std::size_t j = i + 1; j < report.rows.size(); ++j)
            CHECK(report.rows[i].seed != report.rows[j].seed);
}

TEST_CASE("full-rate grid-valued instances always succeed") {
    ExperimentConfig cfg = tiny_sweep_config();
    // Grid-valued source: a chain whose states are grid points.
    FiniteMarkov chain;
    chain.states = {0.0, 0.5};
    chain.transition = {{0.9, 0.1}, {0.1, 0.9}};
    cfg.source.model = chain;
    cfg.quant = QuantSpec{1, 0.0, 0.5, false};
    cfg.rates = {1.0};
    cfg.trials = 5;
    cfg.lambda = 1e6;
    cfg.scheme = WeightScheme::true_distribution;
    const SweepReport report = run_recovery_sweep(cfg);
    REQUIRE(report.summary.size() == 1);
    CHECK(report.summary[0].success_fraction == 1.0);
    for (const SweepRow& row : report.rows) CHECK(row.normalized_error == 0.0);
}

TEST_CASE("zero perturbation column reproduces the recovery sweep") {
    ExperimentConfig recovery = tiny_sweep_config();
    ExperimentConfig robust = recovery;
    robust.scheme = WeightScheme::perturbed;
    robust.perturb_base = WeightScheme::true_distribution;
    robust.eps_w = {0.0, 0.1};

    const SweepReport base = run_recovery_sweep(recovery);
    const SweepReport grid = run_robustness_sweep(robust);
    std::vector<SweepRow> zeros;
    for (const SweepRow& row : grid.rows)
        if (row.eps_w == 0.0) zeros.push_back(row);
    REQUIRE(zeros.size() == base.rows.size());
    for (std::size_t i = 0; i < zeros.size(); ++i) CHECK(rows_equal(zeros[i], base.rows[i]));
}

TEST_CASE("anneal and exhaustive sweeps agree at guard scale") {
    ExperimentConfig cfg = tiny_sweep_config();
    cfg.n = 8;
    cfg.rates = {0.5};
    cfg.trials = 20;
    cfg.solver = SolverKind::exhaustive;
    const SweepReport exact = run_recovery_sweep(cfg);
    cfg.solver = SolverKind::anneal;
    const SweepReport heur = run_recovery_sweep(cfg);
    CHECK(std::fabs(exact.summary[0].success_fraction - heur.summary[0].success_fraction) <=
          0.1);
}

TEST_CASE("success is monotone in rate and eps up to one inversion") {
    ExperimentConfig cfg = tiny_sweep_config();
    cfg.rates = {0.2, 0.5, 0.8, 1.0};
    cfg.trials = 12;
    cfg.scheme = WeightScheme::perturbed;
    cfg.perturb_base = WeightScheme::true_distribution;
    cfg.eps_w = {0.0, 0.05, 0.1, 0.2};
    const SweepReport report = run_robustness_sweep(cfg);

    for (double eps : cfg.eps_w) {
        int inversions = 0;
        double prev = -1.0;
        for (double rate : cfg.rates) {
            double frac = -1.0;
            for (const CellSummary& c : report.summary)
                if (c.rate == rate && c.eps_w == eps) frac = c.success_fraction;
            REQUIRE(frac >= 0.0);
            if (prev >= 0.0 && frac < prev) ++inversions;
            prev = frac;
        }
        CHECK(inversions <= 1);
    }
    for (double rate : cfg.rates) {
        int inversions = 0;
        double prev = -1.0;
        for (double eps : cfg.eps_w) {
            double frac = -1.0;
            for (const CellSummary& c : report.summary)
                if (c.rate == rate && c.eps_w == eps) frac = c.success_fraction;
            if (prev >= 0.0 && frac > prev) ++inversions;
            prev = frac;
        }
        CHECK(inversions <= 1);
    }
}

TEST_CASE("output directory honors the environment override") {
    ::setenv("MEPCS_OUT_DIR", "/tmp/mepcs_env_dir", 1);
    CHECK(default_out_dir() == "/tmp/mepcs_env_dir");
    ::unsetenv("MEPCS_OUT_DIR");
    CHECK(default_out_dir() == "out");
}

TEST_CASE("robustness sweep demands a compatible scheme") {
    ExperimentConfig cfg = tiny_sweep_config();
    cfg.eps_w = {0.0, 0.1};
    CHECK_THROWS_AS(run_robustness_sweep(cfg), ConfigError);
}

TEST_CASE("report emission round trip and byte-identical data rows") {
    const SweepReport report = run_recovery_sweep(tiny_sweep_config());
    const std::string p1 = tmp_path("report1.csv");
    const std::string p2 = tmp_path("report2.csv");
    emit_report(report, p1);
    const SweepReport again = run_recovery_sweep(tiny_sweep_config());
    emit_report(again, p2);
    CHECK(data_section(p1) == data_section(p2));

    const SweepReport parsed = parse_report(p1);
    REQUIRE(parsed.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < parsed.rows.size(); ++i)
        CHECK(rows_equal(parsed.rows[i], report.rows[i]));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("empty report emits only the header") {
    const std::string path = tmp_path("empty.csv");
    emit_report(SweepReport{}, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("rate,", 0) == 0);
    CHECK(!std::getline(in, line));
    std::remove(path.c_str());
}

TEST_CASE("rate thresholds pick the smallest passing rate per eps") {
    SweepReport report;
    report.summary = {
        {0.2, 0.0, 50, 0.10, 0.3, 1.0}, {0.4, 0.0, 50, 0.95, 0.1, 1.0},
        {0.6, 0.0, 50, 1.00, 0.0, 1.0}, {0.2, 0.1, 50, 0.05, 0.4, 1.0},
        {0.4, 0.1, 50, 0.60, 0.2, 1.0}, {0.6, 0.1, 50, 0.92, 0.1, 1.0},
    };
    const std::vector<RateThreshold> t = rate_thresholds(report, 0.9);
    REQUIRE(t.size() == 2);
    CHECK(t[0].eps_w == 0.0);
    CHECK(t[0].found);
    CHECK(t[0].threshold_rate == 0.4);
    CHECK(t[1].eps_w == 0.1);
    CHECK(t[1].threshold_rate == 0.6);
}

TEST_CASE("convergence study: deterministic source has zero deviation") {
    SourceModel constant;
    FiniteMarkov chain;
    chain.states = {0.0, 0.5};
    chain.transition = {{1.0, 0.0}, {0.0, 1.0}};
    chain.stationary = {1.0, 0.0};
    constant.model = chain;
    const QuantSpec spec{1, 0.0, 0.5, false};
    const std::vector<std::size_t> sizes{50, 500};
    const auto rows = run_convergence_study(constant, spec, 1, sizes, 3, 5);
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        CHECK(row.l1 == 0.0);
        CHECK(row.kl_block_per_bit == 0.0);
    }
}

TEST_CASE("convergence study shrinks with n for a mixing chain") {
    SourceModel model;
    FiniteMarkov chain;
    chain.states = {0.0, 0.5};
    chain.transition = {{0.9, 0.1}, {0.1, 0.9}};
    model.model = chain;
    const QuantSpec spec{1, 0.0, 0.5, false};
    const std::vector<std::size_t> sizes{100, 100000};
    const auto rows = run_convergence_study(model, spec, 1, sizes, 20, 77);
    double small_n = 0.0, large_n = 0.0;
    for (const auto& row : rows)
        (row.n == 100 ? small_n : large_n) += row.l1;
    CHECK(large_n / 20.0 < small_n / 20.0);
    for (const auto& row : rows)
        if (row.n == 100000) CHECK(row.l1 < 0.05);
}

TEST_CASE("svg plot emission") {
    const SweepReport report = run_recovery_sweep(tiny_sweep_config());
    const std::string path = tmp_path("plot.svg");
    emit_success_plot_svg(report, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = ss.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("success fraction") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("config files parse with overrides") {
    const std::string path = tmp_path("config.cfg");
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "source.kind = sparse-iid\n";
        out << "source.p = 0.3\n";
        out << "n = 48\n";
        out << "rates = 0.2,0.5,0.8\n";
        out << "k = 1\n";
        out << "quant.b = 2\n";
        out << "solver = exhaustive\n";
        out << "weights = empirical-input\n";
        out << "seed = 1234\n";
    }
    KeyValueConfig kv = parse_config_file(path);
    apply_config_override(kv, "n=24");
    const ExperimentConfig cfg = experiment_from_config(kv);
    CHECK(cfg.source.sparse().p == 0.3);
    CHECK(cfg.n == 24);
    CHECK(cfg.rates == std::vector<double>{0.2, 0.5, 0.8});
    CHECK(cfg.k == 1);
    CHECK(cfg.quant.bits == 2);
    CHECK(cfg.quant.hi_open);  // sparse-iid default
    CHECK(cfg.solver == SolverKind::exhaustive);
    CHECK(cfg.scheme == WeightScheme::empirical_input);
    CHECK(cfg.master_seed == 1234);
    CHECK_NOTHROW(cfg.validate());
    std::remove(path.c_str());
}

TEST_CASE("config validation rejects bad settings") {
    ExperimentConfig cfg = tiny_sweep_config();
    cfg.rates = {1.5};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_sweep_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_sweep_config();
    cfg.scheme = WeightScheme::mismatched;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no q_file
}

TEST_CASE("single recovery matches the corresponding sweep row") {
    const ExperimentConfig cfg = tiny_sweep_config();
    const SweepReport report = run_recovery_sweep(cfg);
    const RecoveryOutcome outcome = run_single_recovery(cfg, 1.0, 2);
    bool found = false;
    for (const SweepRow& row : report.rows)
        if (row.rate == 1.0 && row.trial == 2) {
            found = true;
            CHECK(rows_equal(row, outcome.row));
        }
    CHECK(found);
}

TEST_CASE("signal and block table files round trip") {
    const std::string path = tmp_path("signal.txt");
    const std::vector<double> x{0.0, -1.25, 0.6875, 3.0, 1e-9};
    write_signal(x, path);
    CHECK(read_signal(path) == x);
    std::remove(path.c_str());

    SourceModel sparse;
    sparse.model = SparseIid{0.2, 0.0, 1.0};
    const QuantSpec spec{2, 0.0, 1.0, true};
    const TrueBlockDistribution law = true_block_distribution(sparse, spec, 2);
    const std::string table = tmp_path("law.txt");
    write_distribution(law, table);
    const TrueBlockDistribution back = read_distribution(table, law.alphabet);
    CHECK(back.order == 2);
    REQUIRE(back.probs.size() == law.probs.size());
    for (const auto& [key, p] : law.probs) CHECK(back.probs.at(key) == p);
    std::remove(table.c_str());
}

TEST_CASE("weight tables round trip through the block-table format") {
    SourceModel sparse;
    sparse.model = SparseIid{0.2, 0.0, 1.0};
    const QuantSpec spec{2, 0.0, 1.0, true};
    const WeightVector wv =
        weights_from_distribution(true_block_distribution(sparse, spec, 2));
    const std::string path = tmp_path("weights.txt");
    write_weights(wv, path);
    const WeightVector back = read_weights(path, wv.alphabet);
    CHECK(back.order == wv.order);
    CHECK(back.cap == wv.cap);
    REQUIRE(back.w.size() == wv.w.size());
    for (const auto& [key, w] : wv.w) CHECK(back.w.at(key) == w);
    std::remove(path.c_str());
}

TEST_CASE("mismatched weights come from a distribution file") {
    SourceModel sparse;
    sparse.model = SparseIid{0.2, 0.0, 1.0};
    ExperimentConfig cfg = tiny_sweep_config();
    const std::string table = tmp_path("qfile.txt");
    // Learn a deliberately wrong law: p = 0.4 instead of 0.2.
    SourceModel wrong;
    wrong.model = SparseIid{0.4, 0.0, 1.0};
    write_distribution(true_block_distribution(wrong, cfg.quant, 1), table);
    cfg.scheme = WeightScheme::mismatched;
    cfg.q_file = table;
    cfg.trials = 2;
    const SweepReport report = run_recovery_sweep(cfg);
    CHECK(report.rows.size() == 4);
    std::remove(table.c_str());
}
