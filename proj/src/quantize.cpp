#include "mepcs/quantize.hpp"

#include <cmath>
#include <limits>

#include "mepcs/errors.hpp"

namespace mepcs {

namespace {

// Largest grid index magnitude we allow; keeps x * 2^bits inside the range
// where doubles represent integers exactly.
constexpr double kMaxScaled = 9007199254740992.0;  // 2^53

std::int64_t floor_scaled(double x, int bits) {
    const double scaled = std::ldexp(x, bits);
    if (std::fabs(scaled) >= kMaxScaled)
        throw InvalidInput("quantize: |x| * 2^bits exceeds exact integer range");
    return static_cast<std::int64_t>(std::floor(scaled));
}

std::int64_t ceil_scaled(double x, int bits) {
    const double scaled = std::ldexp(x, bits);
    if (std::fabs(scaled) >= kMaxScaled)
        throw InvalidInput("quantize: |x| * 2^bits exceeds exact integer range");
    return static_cast<std::int64_t>(std::ceil(scaled));
}

}  // namespace

void QuantSpec::validate() const {
    if (bits < 1) throw InvalidInput("QuantSpec: bits must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidInput("QuantSpec: interval endpoints must be finite");
    if (!(lo < hi)) throw InvalidInput("QuantSpec: requires lo < hi");
}

double quantize_scalar(double x, int bits) {
    if (bits < 1) throw InvalidInput("quantize_scalar: bits must be >= 1");
    if (!std::isfinite(x)) throw InvalidInput("quantize_scalar: x must be finite");
    // Scaled integer arithmetic: floor(x * 2^b) / 2^b. ldexp and the final
    // division are exact, so repeated application is a fixed point.
    return std::ldexp(static_cast<double>(floor_scaled(x, bits)), -bits);
}

Alphabet::Alphabet(int bits, std::int64_t first_index, std::size_t count)
    : bits_(bits), first_index_(first_index), count_(count) {}

double Alphabet::operator[](std::size_t i) const {
    return std::ldexp(static_cast<double>(first_index_ + static_cast<std::int64_t>(i)), -bits_);
}

std::size_t Alphabet::index_of(double value) const {
    const double scaled = std::ldexp(value, bits_);
    const double rounded = std::nearbyint(scaled);
    if (scaled != rounded) throw DomainError("Alphabet: value is not on the quantization grid");
    const std::int64_t idx = static_cast<std::int64_t>(rounded) - first_index_;
    if (idx < 0 || idx >= static_cast<std::int64_t>(count_))
        throw DomainError("Alphabet: value outside the alphabet range");
    return static_cast<std::size_t>(idx);
}

bool Alphabet::contains(double value) const {
    const double scaled = std::ldexp(value, bits_);
    if (scaled != std::nearbyint(scaled)) return false;
    const std::int64_t idx = static_cast<std::int64_t>(scaled) - first_index_;
    return idx >= 0 && idx < static_cast<std::int64_t>(count_);
}

Alphabet build_alphabet(const QuantSpec& spec) {
    spec.validate();
    const std::int64_t i_lo = floor_scaled(spec.lo, spec.bits);
    // For a half-open interval the supremum attainable grid point is the one
    // strictly below hi; for a closed interval hi itself quantizes in.
    const std::int64_t i_hi =
        spec.hi_open ? ceil_scaled(spec.hi, spec.bits) - 1 : floor_scaled(spec.hi, spec.bits);
    if (i_hi < i_lo) throw InvalidInput("build_alphabet: empty alphabet");
    const std::int64_t count = i_hi - i_lo + 1;
    if (count > (std::int64_t{1} << 26)) throw TooLarge("build_alphabet: alphabet too large");
    return Alphabet(spec.bits, i_lo, static_cast<std::size_t>(count));
}

QuantizedSequence quantize_sequence(std::span<const double> x, const QuantSpec& spec) {
    spec.validate();
    QuantizedSequence out;
    out.spec = spec;
    out.values.reserve(x.size());
    for (double v : x) {
        if (!std::isfinite(v)) throw InvalidInput("quantize_sequence: non-finite entry");
        const bool above = spec.hi_open ? (v >= spec.hi) : (v > spec.hi);
        if (v < spec.lo || above)
            throw DomainError("quantize_sequence: entry outside the source interval");
        out.values.push_back(quantize_scalar(v, spec.bits));
    }
    return out;
}

std::vector<std::uint32_t> to_indices(const QuantizedSequence& u, const Alphabet& alphabet) {
    std::vector<std::uint32_t> idx;
    idx.reserve(u.size());
    for (double v : u.values) idx.push_back(static_cast<std::uint32_t>(alphabet.index_of(v)));
    return idx;
}

QuantizedSequence from_indices(std::span<const std::uint32_t> idx, const Alphabet& alphabet,
                               const QuantSpec& spec) {
    QuantizedSequence out;
    out.spec = spec;
    out.values.reserve(idx.size());
    for (std::uint32_t i : idx) {
        if (i >= alphabet.size()) throw DomainError("from_indices: index out of range");
        out.values.push_back(alphabet[i]);
    }
    return out;
}

}  // namespace mepcs
