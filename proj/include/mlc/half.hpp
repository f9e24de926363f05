#pragma once

#include <cstdint>

namespace mlc {

/// IEEE 754 binary16, stored as its bit pattern.
struct Half {
    std::uint16_t bits = 0;

    bool operator==(const Half &) const = default;
};

constexpr double kHalfMax = 65504.0;

/// Round-to-nearest-even conversion. Out-of-range magnitudes saturate to
/// +-65504 and NaN maps to +0, so the result is always finite.
Half to_half(double x) noexcept;

/// Exact widening.
double to_double(Half h) noexcept;

} // namespace mlc
