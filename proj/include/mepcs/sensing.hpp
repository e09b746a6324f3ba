#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mepcs {

// Dense m x n measurement matrix with i.i.d. N(0,1) entries, stored
// column-major (the solvers walk columns). Entry (i, j) is generated from
// the counter i*n + j of the seed's stream, so the fill order is immaterial.
struct SensingSystem {
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double lambda = 1.0;
    std::vector<double> data;  // column-major, data[j*m + i]

    double at(std::size_t i, std::size_t j) const { return data[j * m + i]; }
    std::span<const double> column(std::size_t j) const {
        return std::span<const double>(data).subspan(j * m, m);
    }
};

SensingSystem generate_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                              double lambda = 1.0);

// y = A x.
std::vector<double> measure(const SensingSystem& a, std::span<const double> x);

// ||A u - y||^2.
double residual_norm_sq(const SensingSystem& a, std::span<const double> u,
                        std::span<const double> y);

// Largest singular value by power iteration on A^T A.
double max_singular_value(const SensingSystem& a, double rel_tol = 1e-8, int max_iters = 100000);

}  // namespace mepcs
