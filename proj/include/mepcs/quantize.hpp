#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mepcs {

// Bounded source interval plus the number of fractional bits kept by the
// quantizer. `hi_open` marks a half-open interval [lo, hi); the default is
// the closed interval [lo, hi].
struct QuantSpec {
    int bits = 1;
    double lo = 0.0;
    double hi = 1.0;
    bool hi_open = false;

    void validate() const;  // throws InvalidInput
};

// Keep the integer part and truncate the fractional part to `bits` binary
// digits (grid step 2^-bits, rounding toward -inf). Dyadic rationals use
// their terminating expansion, so the map is idempotent.
double quantize_scalar(double x, int bits);

// The finite symbol set reachable by quantizing the source interval:
// consecutive grid points i * 2^-bits, sorted ascending.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(int bits, std::int64_t first_index, std::size_t count);

    std::size_t size() const { return count_; }
    int bits() const { return bits_; }
    double operator[](std::size_t i) const;

    // Exact inverse of operator[]; throws DomainError for off-grid or
    // out-of-range values.
    std::size_t index_of(double value) const;
    bool contains(double value) const;

    bool operator==(const Alphabet& other) const = default;

private:
    int bits_ = 1;
    std::int64_t first_index_ = 0;  // lowest grid index, value = first_index * 2^-bits
    std::size_t count_ = 0;
};

Alphabet build_alphabet(const QuantSpec& spec);

// A sequence whose entries all lie on the quantization grid of `spec`.
struct QuantizedSequence {
    std::vector<double> values;
    QuantSpec spec;

    std::size_t size() const { return values.size(); }
};

// Elementwise quantization. Entries must lie inside the source interval.
QuantizedSequence quantize_sequence(std::span<const double> x, const QuantSpec& spec);

// Map a grid-valued sequence to alphabet indices (throws DomainError if a
// value is off the alphabet).
std::vector<std::uint32_t> to_indices(const QuantizedSequence& u, const Alphabet& alphabet);
QuantizedSequence from_indices(std::span<const std::uint32_t> idx, const Alphabet& alphabet,
                               const QuantSpec& spec);

}  // namespace mepcs
