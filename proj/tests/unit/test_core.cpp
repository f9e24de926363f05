#include "doctest.h"
#include "helpers.hpp"

#include <limits>

#include "mlc/core.hpp"
#include "mlc/error.hpp"

using namespace mlc;

TEST_SUITE("core") {

TEST_CASE("normalize") {
    CHECK(normalize(0) == 0.0);
    CHECK(normalize(-32768) == -1.0);
    CHECK(normalize(16384) == 0.5);
    // injective and exactly invertible over the 16-bit range
    for (int s = -32768; s <= 32767; ++s)
        REQUIRE(round_half_away(normalize(s) * 32768.0) == s);
}

TEST_CASE("round_half_away") {
    CHECK(round_half_away(0.0) == 0);
    CHECK(round_half_away(2.5) == 3);
    CHECK(round_half_away(-2.5) == -3);
    CHECK(round_half_away(1.49999) == 1);
    CHECK(round_half_away(-0.5) == -1);
    CHECK(round_half_away(1e30) == std::numeric_limits<std::int32_t>::max());
    CHECK(round_half_away(-1e30) == std::numeric_limits<std::int32_t>::min());
    CHECK(round_half_away(std::nan("")) == 0);
}

TEST_CASE("clamp16") {
    CHECK(clamp16(40000) == 32767);
    CHECK(clamp16(-40000) == -32768);
    CHECK(clamp16(-5) == -5);
}

TEST_CASE("layouts") {
    CHECK(layout_for_channels(1) == Layout::Mono);
    CHECK(layout_for_channels(2) == Layout::Stereo20);
    CHECK(layout_for_channels(5) == Layout::Surround50);
    CHECK(layout_channels(Layout::Surround50) == 5);
    CHECK_THROWS_AS(layout_for_channels(3), Error);
}

TEST_CASE("SampleBlock construction") {
    SampleBlock b(2, 3, 48000, {1, 2, 3, 4, 5, 6});
    CHECK(b.at(1, 0) == 4);
    CHECK(b.sample_rate() == 48000);
    CHECK_THROWS_AS(SampleBlock(2, 3, 48000, {1, 2, 3}), Error);
    CHECK_THROWS_AS(MixPair(SampleBlock(2, 3), SampleBlock(5, 4)), Error);
}

TEST_CASE("ITU downmix examples") {
    SampleBlock zero(5, 16);
    auto d = itu_downmix_5to2(zero);
    CHECK(d.channels() == 2);
    CHECK(d == SampleBlock(2, 16));

    SampleBlock left(5, 1);
    left.at(0, 0) = 1000;
    d = itu_downmix_5to2(left);
    CHECK(d.at(0, 0) == 414);
    CHECK(d.at(1, 0) == 0);

    SampleBlock centre(5, 1);
    centre.at(2, 0) = 1000;
    d = itu_downmix_5to2(centre);
    CHECK(d.at(0, 0) == 293);
    CHECK(d.at(1, 0) == 293);

    CHECK_THROWS_AS(itu_downmix_5to2(SampleBlock(2, 4)), Error);
}

TEST_CASE("ITU downmix extremes stay in range") {
    SampleBlock hi(5, 2);
    for (std::size_t c = 0; c < 5; ++c) {
        hi.at(c, 0) = 32767;
        hi.at(c, 1) = -32768;
    }
    auto d = itu_downmix_5to2(hi);
    CHECK(d.at(0, 0) == 32767);
    CHECK(d.at(0, 1) == -32768);
}

TEST_CASE("ITU downmix L/R symmetry") {
    const auto up = testutil::noise_block(5, 500, 11);
    SampleBlock swapped = up;
    for (std::size_t t = 0; t < up.length(); ++t) {
        std::swap(swapped.at(0, t), swapped.at(1, t));
        std::swap(swapped.at(3, t), swapped.at(4, t));
    }
    const auto a = itu_downmix_5to2(up);
    const auto b = itu_downmix_5to2(swapped);
    for (std::size_t t = 0; t < up.length(); ++t) {
        REQUIRE(a.at(0, t) == b.at(1, t));
        REQUIRE(a.at(1, t) == b.at(0, t));
    }
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio(8, SampleBlock(1, 1)) == 0.5);
    const SampleBlock b(5, 1000);
    CHECK(compression_ratio(16ull * 5 * 1000, b) == 1.0);
    try {
        compression_ratio(8, SampleBlock(2, 0));
        FAIL("expected error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UndefinedRatio);
    }
}

}
