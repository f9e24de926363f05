#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "mlc/half.hpp"

using namespace mlc;

namespace {

// Every finite binary16 value, decoded from the bit pattern by definition.
double decode_by_definition(std::uint16_t bits) {
    const int sign = bits >> 15 ? -1 : 1;
    const int exp = (bits >> 10) & 0x1F;
    const int frac = bits & 0x3FF;
    if (exp == 0)
        return sign * std::ldexp(frac, -24);
    return sign * std::ldexp(1024 + frac, exp - 25);
}

// Nearest finite binary16 by scanning all patterns; ties pick the even mantissa.
std::uint16_t nearest_by_scan(double x) {
    std::uint16_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::uint32_t b = 0; b < 0x10000; ++b) {
        if (((b >> 10) & 0x1F) == 0x1F)
            continue;
        const double v = decode_by_definition(static_cast<std::uint16_t>(b));
        const double err = std::fabs(v - x);
        if (err < best_err || (err == best_err && (b & 1) == 0 && (best & 1) == 1)) {
            best_err = err;
            best = static_cast<std::uint16_t>(b);
        }
    }
    return best;
}

} // namespace

TEST_SUITE("half") {

TEST_CASE("exact values") {
    CHECK(to_double(to_half(0.0)) == 0.0);
    CHECK(to_double(to_half(1.0)) == 1.0);
    CHECK(to_double(to_half(-2.0)) == -2.0);
    CHECK(to_double(to_half(0.1)) == 0.0999755859375);
}

TEST_CASE("clamping and NaN") {
    CHECK(to_double(to_half(1e6)) == 65504.0);
    CHECK(to_double(to_half(-1e6)) == -65504.0);
    CHECK(to_double(to_half(std::numeric_limits<double>::infinity())) == 65504.0);
    CHECK(to_double(to_half(65519.0)) == 65504.0);
    CHECK(to_half(std::nan("")).bits == 0);
}

TEST_CASE("widening matches the format definition for every finite pattern") {
    for (std::uint32_t b = 0; b < 0x10000; ++b) {
        if (((b >> 10) & 0x1F) == 0x1F)
            continue;
        const Half h{static_cast<std::uint16_t>(b)};
        REQUIRE(to_double(h) == decode_by_definition(h.bits));
        // requantizing a dequantized value is idempotent (except -0 may fold)
        const Half back = to_half(to_double(h));
        REQUIRE(to_double(back) == to_double(h));
    }
}

TEST_CASE("round to nearest even against a scan") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(rng() % 30) - 20);
        REQUIRE(to_double(to_half(x)) == decode_by_definition(nearest_by_scan(x)));
    }
    // halfway between 1 and the next value rounds to even (1)
    CHECK(to_double(to_half(1.0 + std::ldexp(1.0, -11))) == 1.0);
    CHECK(to_double(to_half(1.0 + 3 * std::ldexp(1.0, -11))) == 1.0 + std::ldexp(1.0, -9));
    // subnormal halfway
    CHECK(to_double(to_half(std::ldexp(1.0, -25))) == 0.0);
    CHECK(to_double(to_half(std::ldexp(3.0, -25))) == std::ldexp(1.0, -23));
}

}
