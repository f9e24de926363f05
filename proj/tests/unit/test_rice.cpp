#include "doctest.h"

#include <random>
#include <string>

#include "mlc/error.hpp"
#include "mlc/rice.hpp"

using namespace mlc;
using namespace mlc::rice;

namespace {

std::string bit_string(const BitWriter &w) {
    std::string s;
    for (std::uint64_t i = 0; i < w.bit_count(); ++i)
        s += (w.bytes()[i / 8] >> (7 - i % 8)) & 1 ? '1' : '0';
    return s;
}

// Independent scan, written without the library's helpers.
std::uint64_t cost(const std::vector<std::int32_t> &v, unsigned r) {
    std::uint64_t total = 0;
    for (auto n : v) {
        const std::int64_t z = n >= 0 ? 2 * static_cast<std::int64_t>(n) : -2 * static_cast<std::int64_t>(n) - 1;
        total += 1 + r + (z >> r);
    }
    return total;
}

} // namespace

TEST_SUITE("rice") {

TEST_CASE("zigzag examples") {
    CHECK(zigzag(0) == 0);
    CHECK(zigzag(-1) == 1);
    CHECK(zigzag(1) == 2);
    CHECK(zigzag(-2) == 3);
    CHECK(zigzag(2) == 4);
    CHECK(zigzag(-32768) == 65535);
    CHECK(zigzag(INT32_MIN) == 0xFFFFFFFFu);
    CHECK(zigzag(INT32_MAX) == 0xFFFFFFFEu);
}

TEST_CASE("zigzag bijection on samples of the 32-bit range") {
    std::mt19937 rng(1);
    for (int i = 0; i < 200000; ++i) {
        const auto n = static_cast<std::int32_t>(rng());
        REQUIRE(unzigzag(zigzag(n)) == n);
    }
    for (std::int64_t n = -70000; n < 70000; ++n)
        REQUIRE(unzigzag(zigzag(static_cast<std::int32_t>(n))) == n);
}

TEST_CASE("rice_length examples") {
    CHECK(rice_length(0, 0) == 1);
    CHECK(rice_length(3, 2) == 4);
    CHECK(rice_length(-1, 0) == 2);
}

TEST_CASE("codeword bit strings") {
    BitWriter w;
    rice_encode(0, 0, w);
    CHECK(bit_string(w) == "0");
    BitWriter w2;
    rice_encode(3, 2, w2);
    CHECK(bit_string(w2) == "1010");
}

TEST_CASE("emitted length equals rice_length and is monotone") {
    for (unsigned r = 0; r <= kMaxParam; ++r) {
        std::uint64_t previous = 0;
        for (std::int32_t m = 0; m < 3000; ++m) {
            // visit in zigzag order: 0, -1, 1, -2, ...
            const std::int32_t n = unzigzag(static_cast<std::uint32_t>(m));
            BitWriter w;
            rice_encode(n, r, w);
            REQUIRE(w.bit_count() == rice_length(n, r));
            REQUIRE(rice_length(n, r) >= previous);
            previous = rice_length(n, r);
        }
    }
}

TEST_CASE("round trip mixed parameters") {
    std::mt19937 rng(2);
    std::vector<std::pair<std::int32_t, unsigned>> items;
    BitWriter w;
    for (int i = 0; i < 20000; ++i) {
        const unsigned r = rng() % (kMaxParam + 1);
        const auto n = static_cast<std::int32_t>(static_cast<std::int32_t>(rng()) >> (rng() % 14 + 12));
        items.emplace_back(n, r);
        rice_encode(n, r, w);
    }
    w.put_bits(0x2A, 6);
    const auto bytes = std::move(w).take();
    BitReader rd(bytes);
    for (auto [n, r] : items)
        REQUIRE(rice_decode(rd, r) == n);
    CHECK(rd.get_bits(6) == 0x2A);
}

TEST_CASE("bit writer and reader") {
    BitWriter w;
    w.put_bits(0b101, 3);
    w.put_ones(10);
    w.put_bit(false);
    w.put_bits(0xDEADBEEFCAFEull, 48);
    CHECK(w.bit_count() == 62);
    w.align();
    CHECK(w.bit_count() == 64);
    BitReader r(w.bytes());
    CHECK(r.get_bits(3) == 0b101);
    CHECK(r.get_unary() == 10);
    CHECK(r.get_bits(48) == 0xDEADBEEFCAFEull);
    CHECK(r.get_bits(2) == 0);
    CHECK_THROWS_AS(r.get_bit(), StreamError);
}

TEST_CASE("truncated source throws with frame index") {
    BitWriter w;
    rice_encode(5000, 0, w);
    auto bytes = std::move(w).take();
    bytes.resize(bytes.size() / 2);
    BitReader r(bytes, 7);
    try {
        rice_decode(r, 0);
        FAIL("expected error");
    } catch (const StreamError &e) {
        CHECK(e.frame() == 7);
    }
}

TEST_CASE("parameter search examples") {
    std::vector<std::int32_t> zeros(100, 0);
    auto z = best_rice_param(zeros);
    CHECK(z.param == 0);
    CHECK(z.bits == 100);

    std::vector<std::int32_t> thousand(50, 1000);
    auto t = best_rice_param(thousand);
    CHECK(t.param == 10);
    CHECK(t.bits == 12 * 50);

    CHECK_THROWS_AS(best_rice_param({}), Error);
}

TEST_CASE("parameter search matches an exhaustive scan") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::geometric_distribution<int> geo(1.0 / (1 + static_cast<double>(rng() % 5000)));
        std::vector<std::int32_t> v(1 + rng() % 600);
        for (auto &x : v)
            x = (rng() & 1) ? geo(rng) : -geo(rng);
        unsigned best_r = 0;
        std::uint64_t best = cost(v, 0);
        for (unsigned r = 1; r <= 20; ++r)
            if (cost(v, r) < best) {
                best = cost(v, r);
                best_r = r;
            }
        const auto got = best_rice_param(v);
        REQUIRE(got.param == best_r);
        REQUIRE(got.bits == best);
        REQUIRE(got.bits == total_length(v, got.param));
    }
}

}
