#include "doctest.h"
#include "helpers.hpp"

#include <cstring>
#include <filesystem>

#include "mlc/error.hpp"
#include "mlc/io.hpp"

using namespace mlc;

namespace {

void put16(std::vector<std::uint8_t> &b, std::uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back(v >> 8);
}
void put32(std::vector<std::uint8_t> &b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        b.push_back((v >> (8 * i)) & 0xFF);
}

// Minimal RIFF/WAVE writer kept independent of the library.
std::vector<std::uint8_t> make_wav(std::uint16_t channels, std::uint16_t bits, const std::vector<std::int32_t> &interleaved,
                                   bool extra_chunk = false) {
    const std::uint32_t bytes_per = bits / 8;
    const std::uint32_t data_size = static_cast<std::uint32_t>(interleaved.size()) * bytes_per;
    std::vector<std::uint8_t> b;
    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    put32(b, 36 + data_size + (extra_chunk ? 14 : 0));
    b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(b, 16);
    put16(b, 1);
    put16(b, channels);
    put32(b, 44100);
    put32(b, 44100 * channels * bytes_per);
    put16(b, static_cast<std::uint16_t>(channels * bytes_per));
    put16(b, bits);
    if (extra_chunk) {
        b.insert(b.end(), {'L', 'I', 'S', 'T'});
        put32(b, 5);
        b.insert(b.end(), {1, 2, 3, 4, 5, 0});
    }
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    put32(b, data_size);
    for (auto s : interleaved)
        for (std::uint32_t i = 0; i < bytes_per; ++i)
            b.push_back((static_cast<std::uint32_t>(s) >> (8 * i)) & 0xFF);
    return b;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("deinterleave") {
    const auto wav = io::parse_wav(make_wav(2, 16, {1, 2, 3, 4}));
    CHECK(wav.block.channels() == 2);
    CHECK(wav.block.length() == 2);
    CHECK(wav.block.at(0, 0) == 1);
    CHECK(wav.block.at(0, 1) == 3);
    CHECK(wav.block.at(1, 0) == 2);
    CHECK(wav.block.at(1, 1) == 4);
}

TEST_CASE("unknown chunks are skipped with padding") {
    const auto wav = io::parse_wav(make_wav(1, 16, {-5, 7, -32768}, true));
    CHECK(wav.block.at(0, 2) == -32768);
}

TEST_CASE("24-bit input is unsupported") {
    try {
        io::parse_wav(make_wav(2, 24, {1, 2}));
        FAIL("expected error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
}

TEST_CASE("5.1 drops the LFE") {
    std::vector<std::int32_t> frames;
    for (int t = 0; t < 3; ++t)
        for (int c = 0; c < 6; ++c)
            frames.push_back(100 * c + t);
    const auto wav = io::parse_wav(make_wav(6, 16, frames));
    CHECK(wav.info.channels == 6);
    REQUIRE(wav.block.channels() == 5);
    CHECK(wav.block.at(2, 1) == 201);
    CHECK(wav.block.at(3, 1) == 401);
    CHECK(wav.block.at(4, 2) == 502);
}

TEST_CASE("unsupported channel counts and malformed files") {
    CHECK_THROWS_AS(io::parse_wav(make_wav(3, 16, {1, 2, 3})), Error);
    auto bytes = make_wav(2, 16, {1, 2, 3, 4});
    bytes.resize(30);
    CHECK_THROWS_AS(io::parse_wav(bytes), Error);
    std::vector<std::uint8_t> junk(64, 0x41);
    CHECK_THROWS_AS(io::parse_wav(junk), Error);
}

TEST_CASE("serialise and parse round trip") {
    for (std::size_t channels : {1u, 2u, 5u}) {
        const auto block = testutil::noise_block(channels, 777, channels);
        const auto bytes = io::serialize_wav(block);
        CHECK(bytes.size() == 44 + 2 * channels * 777);
        const auto back = io::parse_wav(bytes);
        CHECK(back.block == block);
    }
}

TEST_CASE("5.0 is written in L R C Ls Rs order") {
    SampleBlock block(5, 1);
    for (std::size_t c = 0; c < 5; ++c)
        block.at(c, 0) = static_cast<std::int16_t>(c + 1);
    const auto bytes = io::serialize_wav(block);
    for (std::size_t c = 0; c < 5; ++c)
        CHECK(bytes[44 + 2 * c] == c + 1);
}

TEST_CASE("zero length file") {
    const auto bytes = io::serialize_wav(SampleBlock(2, 0));
    CHECK(bytes.size() == 44);
    const auto back = io::parse_wav(bytes);
    CHECK(back.block.channels() == 2);
    CHECK(back.block.empty());
}

TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "mlc_io_test";
    std::filesystem::create_directories(dir);
    const auto block = testutil::noise_block(5, 100, 9);
    io::write_wav(dir / "x.wav", block);
    CHECK(io::read_wav(dir / "x.wav").block == block);
    try {
        io::read_wav(dir / "missing.wav");
        FAIL("expected error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::Io);
    }
    std::filesystem::remove_all(dir);
}

}
