#include "mlc/half.hpp"

#include <cmath>

namespace mlc {

namespace {

// Round a non-negative double to the nearest integer, ties to even.
double round_even(double v) noexcept {
    const double fl = std::floor(v);
    const double diff = v - fl;
    if (diff > 0.5)
        return fl + 1.0;
    if (diff < 0.5)
        return fl;
    return std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
}

} // namespace

Half to_half(double x) noexcept {
    if (std::isnan(x))
        return {};
    const std::uint16_t sign = std::signbit(x) ? 0x8000u : 0u;
    const double mag = std::fabs(x);
    if (mag >= kHalfMax)
        return {static_cast<std::uint16_t>(sign | 0x7BFFu)};

    // Subnormal range: units of 2^-24. A result of 1024 is the smallest
    // normal, whose encoding happens to be 0x0400 as well.
    if (mag < 0x1p-14) {
        const auto q = static_cast<std::uint16_t>(round_even(std::ldexp(mag, 24)));
        return {static_cast<std::uint16_t>(sign | q)};
    }

    int exp = 0;
    std::frexp(mag, &exp); // mag = f * 2^exp, f in [0.5, 1)
    int e = exp - 1;       // mag in [2^e, 2^(e+1))
    double m = round_even(std::ldexp(mag, 10 - e));
    if (m == 2048.0) {
        m = 1024.0;
        ++e;
    }
    if (e > 15)
        return {static_cast<std::uint16_t>(sign | 0x7BFFu)};
    const auto biased = static_cast<std::uint16_t>(e + 15);
    return {static_cast<std::uint16_t>(sign | (biased << 10) | (static_cast<std::uint16_t>(m) - 1024u))};
}

double to_double(Half h) noexcept {
    const bool negative = (h.bits & 0x8000u) != 0;
    const int biased = (h.bits >> 10) & 0x1F;
    const int mant = h.bits & 0x3FF;
    double v;
    if (biased == 0)
        v = std::ldexp(static_cast<double>(mant), -24);
    else if (biased == 31)
        v = mant ? NAN : INFINITY;
    else
        v = std::ldexp(static_cast<double>(mant + 1024), biased - 25);
    return negative ? -v : v;
}

} // namespace mlc
