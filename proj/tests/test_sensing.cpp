#include <doctest.h>

#include <cmath>
#include <vector>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"
#include "mepcs/sensing.hpp"

using namespace mepcs;

namespace {

SensingSystem manual_matrix(std::size_t m, std::size_t n, const std::vector<double>& row_major) {
    SensingSystem a;
    a.m = m;
    a.n = n;
    a.data.resize(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a.data[j * m + i] = row_major[i * n + j];
    return a;
}

}  // namespace

TEST_CASE("matrix generation is deterministic per seed") {
    const SensingSystem a = generate_matrix(13, 17, 42);
    const SensingSystem b = generate_matrix(13, 17, 42);
    CHECK(a.data == b.data);
    const SensingSystem c = generate_matrix(13, 17, 43);
    CHECK(a.data != c.data);
}

TEST_CASE("matrix entries look standard normal") {
    const SensingSystem a = generate_matrix(200, 200, 7);
    double mean = 0.0;
    for (double v : a.data) mean += v;
    mean /= static_cast<double>(a.data.size());
    double var = 0.0;
    for (double v : a.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(a.data.size() - 1);
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("measure basics") {
    const SensingSystem a = generate_matrix(6, 9, 3);
    const std::vector<double> zero(9, 0.0);
    for (double v : measure(a, zero)) CHECK(v == 0.0);

    const SensingSystem eye = manual_matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const std::vector<double> x{0.25, -1.5, 3.0};
    CHECK(measure(eye, x) == x);

    // Scaling by two is exact in binary floating point.
    Rng rng(5);
    std::vector<double> u(9);
    for (auto& v : u) v = rng.next_range(-1.0, 1.0);
    std::vector<double> u2 = u;
    for (auto& v : u2) v *= 2.0;
    const std::vector<double> y1 = measure(a, u);
    const std::vector<double> y2 = measure(a, u2);
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y2[i] == 2.0 * y1[i]);

    CHECK_THROWS_AS(measure(a, x), ShapeError);
}

TEST_CASE("residual norm matches a double-loop oracle") {
    Rng rng(12);
    const SensingSystem a = generate_matrix(8, 14, 99);
    std::vector<double> u(14), y(8);
    for (auto& v : u) v = rng.next_range(-1.0, 1.0);
    for (auto& v : y) v = rng.next_range(-1.0, 1.0);

    double oracle = 0.0;
    for (std::size_t i = 0; i < a.m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.n; ++j) row += a.at(i, j) * u[j];
        oracle += (row - y[i]) * (row - y[i]);
    }
    CHECK(residual_norm_sq(a, u, y) == doctest::Approx(oracle).epsilon(1e-10));

    const std::vector<double> exact = measure(a, u);
    CHECK(residual_norm_sq(a, u, exact) == 0.0);
}

TEST_CASE("largest singular value on known matrices") {
    const SensingSystem eye = manual_matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    CHECK(max_singular_value(eye) == doctest::Approx(1.0).epsilon(1e-8));
    const SensingSystem diag = manual_matrix(2, 2, {3, 0, 0, 1});
    CHECK(max_singular_value(diag) == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("operator norm bounds random measurements") {
    Rng rng(31);
    const SensingSystem a = generate_matrix(20, 30, 17);
    const double sigma = max_singular_value(a);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> u(30);
        double norm = 0.0;
        for (auto& v : u) {
            v = rng.next_range(-1.0, 1.0);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        const std::vector<double> y = measure(a, u);
        double ynorm = 0.0;
        for (double v : y) ynorm += v * v;
        ynorm = std::sqrt(ynorm);
        CHECK(ynorm <= sigma * norm * (1.0 + 1e-8));
    }
}

TEST_CASE("spectral event holds on sampled Gaussian matrices") {
    const double bound = std::sqrt(100.0) + 2.0 * std::sqrt(50.0);
    for (int i = 0; i < 20; ++i) {
        const SensingSystem a = generate_matrix(50, 100, derive_seed(1000, i));
        CHECK(max_singular_value(a) < bound);
    }
}
