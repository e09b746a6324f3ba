#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mepcs {

struct SuiteResult {
    std::string name;
    bool pass = false;
    int passed = 0;
    int total = 0;
    std::string detail;
};

// Exact finite-n equivalence of the entropy objective and its linearization
// with weights read off the entropy surface at the entropy minimizer.
SuiteResult run_equivalence_suite(int instances, std::uint64_t seed);

// Two-sided bound between minima of linear objectives whose weights differ
// by at most eps in sup norm.
SuiteResult run_sandwich_suite(int instances, double eps, std::uint64_t seed);

// First-order concavity bound of the conditional entropy over random
// distribution pairs (binary/ternary alphabets, k in {0,1,2}).
SuiteResult run_concavity_suite(int cases, std::uint64_t seed);

// Decomposition of sum q2 * (-log q1(.|.)) into conditional KL plus entropy.
SuiteResult run_kl_identity_suite(int cases, std::uint64_t seed);

// sum p * w(p) equals the conditional empirical entropy, bit-exactly.
SuiteResult run_entropy_identity_suite(int cases, std::uint64_t seed);

// Resolution, idempotence, monotonicity, and the sequence error bound of
// the quantizer.
SuiteResult run_quantization_suite(int cases, std::uint64_t seed);

// sigma_max(A) < sqrt(n) + 2 sqrt(m) over seeded Gaussian matrices.
SuiteResult run_sigma_max_suite(int matrices, std::size_t n, std::size_t m, std::uint64_t seed);

// Annealing never beats the exhaustive optimum and usually attains it.
SuiteResult run_oracle_agreement_suite(int instances, std::uint64_t seed);

// All of the above at their standard sizes.
std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

}  // namespace mepcs
