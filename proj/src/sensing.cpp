#include "mepcs/sensing.hpp"

#include <cmath>

#include "mepcs/errors.hpp"
#include "mepcs/rng.hpp"

namespace mepcs {

SensingSystem generate_matrix(std::size_t m, std::size_t n, std::uint64_t seed, double lambda) {
    if (m < 1 || n < 1) throw InvalidInput("generate_matrix: m and n must be >= 1");
    if (!(lambda > 0.0)) throw InvalidInput("generate_matrix: lambda must be positive");
    SensingSystem a;
    a.m = m;
    a.n = n;
    a.seed = seed;
    a.lambda = lambda;
    a.data.resize(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a.data[j * m + i] = gaussian_at(seed, i * n + j);
    return a;
}

std::vector<double> measure(const SensingSystem& a, std::span<const double> x) {
    if (x.size() != a.n) throw ShapeError("measure: x has wrong length");
    std::vector<double> y(a.m, 0.0);
    for (std::size_t j = 0; j < a.n; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const std::span<const double> col = a.column(j);
        for (std::size_t i = 0; i < a.m; ++i) y[i] += xj * col[i];
    }
    return y;
}

double residual_norm_sq(const SensingSystem& a, std::span<const double> u,
                        std::span<const double> y) {
    if (y.size() != a.m) throw ShapeError("residual_norm_sq: y has wrong length");
    const std::vector<double> au = measure(a, u);
    double s = 0.0;
    for (std::size_t i = 0; i < a.m; ++i) {
        const double d = au[i] - y[i];
        s += d * d;
    }
    return s;
}

double max_singular_value(const SensingSystem& a, double rel_tol, int max_iters) {
    if (a.m < 1 || a.n < 1) throw InvalidInput("max_singular_value: empty matrix");
    std::vector<double> v(a.n);
    // Deterministic, slightly tilted start so it is not orthogonal to the
    // top singular vector of simple diagonal test matrices.
    for (std::size_t j = 0; j < a.n; ++j) v[j] = 1.0 + 1e-3 * static_cast<double>(j);
    std::vector<double> w(a.m);
    double sigma_prev = 0.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        // w = A v
        for (std::size_t i = 0; i < a.m; ++i) w[i] = 0.0;
        for (std::size_t j = 0; j < a.n; ++j) {
            const double vj = v[j];
            const std::span<const double> col = a.column(j);
            for (std::size_t i = 0; i < a.m; ++i) w[i] += vj * col[i];
        }
        // v = A^T w
        for (std::size_t j = 0; j < a.n; ++j) {
            const std::span<const double> col = a.column(j);
            double s = 0.0;
            for (std::size_t i = 0; i < a.m; ++i) s += col[i] * w[i];
            v[j] = s;
        }
        double vnorm = 0.0;
        for (double x : v) vnorm += x * x;
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) return 0.0;
        for (double& x : v) x /= vnorm;
        // After normalization ||A^T A v|| converges to sigma_max^2.
        const double sigma = std::sqrt(vnorm);
        if (iter > 0 && std::fabs(sigma - sigma_prev) <= rel_tol * sigma) return sigma;
        sigma_prev = sigma;
    }
    throw NumericError("max_singular_value: power iteration did not converge");
}

}  // namespace mepcs
