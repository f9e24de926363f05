#include "doctest.h"
#include "helpers.hpp"

#include <random>

#include "mlc/codec.hpp"
#include "mlc/error.hpp"

using namespace mlc;
using namespace mlc::codec;

namespace {

MixCoding coding(ModelKind kind, bool svd, unsigned downmix_channels = 0, unsigned order = 8) {
    return MixCoding{ModelSpec::make(kind, downmix_channels, order), svd};
}

std::vector<MixInput> hierarchy(const SampleBlock &up, ModelKind kind, bool svd) {
    const auto down = itu_downmix_5to2(up);
    const bool dmx = kind == ModelKind::SepDmx || kind == ModelKind::JointDmx;
    return {MixInput{down, coding(ModelKind::Sep, false)}, MixInput{up, coding(kind, svd, dmx ? 2 : 0)}};
}

} // namespace

TEST_SUITE("codec") {

TEST_CASE("header round trip") {
    ContainerHeader h;
    h.sample_rate = 48000;
    h.frame_size = 1000;
    h.total_samples = 123456789;
    h.mixes.push_back(MixHeader{Layout::Stereo20, coding(ModelKind::Sep, false)});
    h.mixes.push_back(MixHeader{Layout::Surround50, coding(ModelKind::JointDmx, true, 2, 12)});
    h.mixes[1].coding.model.delta = 0.25;
    const auto bytes = write_header(h);
    CHECK(bytes.size() == h.byte_size());
    const auto back = read_header(bytes);
    CHECK(back.sample_rate == 48000);
    CHECK(back.frame_size == 1000);
    CHECK(back.total_samples == 123456789);
    REQUIRE(back.mixes.size() == 2);
    CHECK(back.mixes[1].coding.model == h.mixes[1].coding.model);
    CHECK(back.mixes[1].coding.svd);
    CHECK(back.frame_count() == (123456789 + 999) / 1000);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(read_header(bad), StreamError);
    CHECK_THROWS_AS(read_header(std::span(bytes).first(10)), StreamError);
}

TEST_CASE("all models round trip in a hierarchy") {
    const auto up = testutil::correlated_block(5, 9000, 1);
    for (auto kind : {ModelKind::Sep, ModelKind::Joint, ModelKind::SepDmx, ModelKind::JointDmx})
        for (bool svd : {false, true}) {
            CAPTURE(model_name(kind));
            CAPTURE(svd);
            const auto mixes = hierarchy(up, kind, svd);
            const auto enc = encode_container(mixes, 4096);
            const auto dec = decode_container(enc.bytes);
            REQUIRE(dec.mixes.size() == 2);
            CHECK(dec.mixes[0] == mixes[0].audio);
            CHECK(dec.mixes[1] == up);
            CHECK(enc.header_bits + enc.mix_bits[0] + enc.mix_bits[1] == enc.total_bits());
        }
}

TEST_CASE("standalone stereo stream") {
    const auto stereo = testutil::correlated_block(2, 5000, 2);
    const std::vector<MixInput> mixes{{stereo, coding(ModelKind::Sep, false)}};
    const auto enc = encode_container(mixes);
    const auto dec = decode_container(enc.bytes);
    REQUIRE(dec.mixes.size() == 1);
    CHECK(dec.mixes[0] == stereo);
    CHECK(compression_ratio(enc.total_bits(), stereo) < 0.9);
}

TEST_CASE("empty input gives a header-only stream") {
    const std::vector<MixInput> mixes{{SampleBlock(2, 0), coding(ModelKind::Sep, false)},
                                      {SampleBlock(5, 0), coding(ModelKind::JointDmx, true, 2)}};
    const auto enc = encode_container(mixes);
    CHECK(enc.bytes.size() == kHeaderFixedBytes + 2 * kHeaderMixBytes);
    const auto dec = decode_container(enc.bytes);
    REQUIRE(dec.mixes.size() == 2);
    CHECK(dec.mixes[0].empty());
    CHECK(dec.mixes[1].channels() == 5);
}

TEST_CASE("frame sizes and short last frame") {
    const auto up = testutil::correlated_block(5, 1000, 3);
    for (std::uint32_t frame : {8u, 13u, 256u, 999u, 1000u, 1001u}) {
        const auto mixes = hierarchy(up, ModelKind::JointDmx, true);
        const auto enc = encode_container(mixes, frame);
        const auto trace = inspect_container(enc.bytes);
        CHECK(trace.chunks.size() == 2 * ((1000 + frame - 1) / frame));
        CHECK(decode_container(enc.bytes).mixes[1] == up);
    }
    CHECK_THROWS_AS(encode_container(hierarchy(up, ModelKind::Sep, false), 4), Error);
}

TEST_CASE("mismatched inputs are rejected") {
    const auto up = testutil::correlated_block(5, 100, 4);
    std::vector<MixInput> first_dmx{{up, coding(ModelKind::JointDmx, false, 2)}};
    CHECK_THROWS_AS(encode_container(first_dmx), Error);
    std::vector<MixInput> lengths{{SampleBlock(2, 50), coding(ModelKind::Sep, false)},
                                  {up, coding(ModelKind::Joint, false)}};
    CHECK_THROWS_AS(encode_container(lengths), Error);
    std::vector<MixInput> wrong_d{{SampleBlock(2, 100), coding(ModelKind::Sep, false)},
                                  {up, coding(ModelKind::SepDmx, false, 1)}};
    CHECK_THROWS_AS(encode_container(wrong_d), Error);
}

TEST_CASE("silence costs about one bit per sample") {
    const SampleBlock up(5, 3 * 4096);
    const auto rows = measure(up);
    for (const auto &row : rows) {
        CHECK(row.upmix_ratio < 0.1);
        CHECK(row.total_ratio < 0.1);
    }
    const auto enc = encode_container(hierarchy(up, ModelKind::Joint, true));
    for (const auto &c : inspect_container(enc.bytes).chunks) {
        CHECK_FALSE(c.svd_mode);
        CHECK(c.escaped == 0);
    }
}

TEST_CASE("noise escapes to verbatim") {
    // no downmix here: the ITU downmix of noise would partly predict it
    const auto up = testutil::noise_block(5, 2 * 4096, 5);
    const auto mixes = hierarchy(up, ModelKind::Joint, true);
    const auto enc = encode_container(mixes);
    const auto trace = inspect_container(enc.bytes);
    std::size_t escaped = 0;
    for (const auto &c : trace.chunks)
        if (c.mix == 1)
            escaped += c.escaped;
    CHECK(escaped == 10);
    CHECK(compression_ratio(enc.mix_bits[1], up) <= 1.05);
    CHECK(decode_container(enc.bytes).mixes[1] == up);
}

TEST_CASE("projection mode is picked for correlated residuals and never costs more") {
    const auto up = testutil::correlated_block(5, 4 * 4096, 6);
    const SampleBlock *none = nullptr;
    std::size_t svd_frames = 0;
    for (std::size_t f = 0; f < 4; ++f) {
        const auto span = FrameSpan::make(f * 4096, (f + 1) * 4096, 8);
        const auto with = encode_frame(up, none, span, coding(ModelKind::Joint, true));
        const auto without = encode_frame(up, none, span, coding(ModelKind::Joint, false));
        CHECK(measure_chunk(with).body() <= measure_chunk(without).body());
        svd_frames += with.svd_mode;
        if (with.svd_mode) {
            CHECK(with.projection.has_value());
            CHECK(measure_chunk(with).body() < measure_chunk(without).body());
        }
    }
    CHECK(svd_frames > 0);
}

TEST_CASE("chunk serialisation is self-delimiting") {
    const auto up = testutil::correlated_block(5, 3000, 7);
    const auto down = itu_downmix_5to2(up);
    const auto c = coding(ModelKind::JointDmx, true, 2);
    const auto span = FrameSpan::make(0, 3000, 8);
    const auto chunk = encode_frame(up, &down, span, c);
    const auto body = write_chunk(chunk);
    const auto bits = measure_chunk(chunk);
    CHECK(body.size() * 8 == bits.body());
    ChunkBits read_bits;
    const auto back = read_chunk(body, 5, span, c.model, 0, &read_bits);
    CHECK(read_bits.body() == bits.body());
    CHECK(back.streams == chunk.streams);
    CHECK(back.warmup == chunk.warmup);

    auto longer = body;
    longer.push_back(0);
    CHECK_THROWS_AS(read_chunk(longer, 5, span, c.model, 3), StreamError);
    auto shorter = body;
    shorter.pop_back();
    CHECK_THROWS_AS(read_chunk(shorter, 5, span, c.model, 3), StreamError);
}

TEST_CASE("corrupt streams report the frame") {
    const auto up = testutil::correlated_block(5, 5 * 1024, 8);
    const auto enc = encode_container(hierarchy(up, ModelKind::JointDmx, true), 1024);
    const auto trace = inspect_container(enc.bytes);

    SUBCASE("truncated") {
        for (std::size_t cut : {std::size_t{3}, std::size_t{40}, enc.bytes.size() / 2, enc.bytes.size() - 1}) {
            const std::span<const std::uint8_t> part(enc.bytes.data(), cut);
            CHECK_THROWS_AS(decode_container(part), StreamError);
        }
    }
    SUBCASE("length prefix of frame 2") {
        std::size_t offset = trace.header.byte_size();
        for (const auto &c : trace.chunks) {
            if (c.frame == 2 && c.mix == 1)
                break;
            offset += 4 + c.byte_length;
        }
        auto bytes = enc.bytes;
        bytes[offset] ^= 0x01;
        try {
            decode_container(bytes);
            FAIL("expected error");
        } catch (const StreamError &e) {
            CHECK(e.frame() == 2);
        }
    }
    SUBCASE("trailing garbage") {
        auto bytes = enc.bytes;
        bytes.push_back(0);
        CHECK_THROWS_AS(decode_container(bytes), StreamError);
    }
}

TEST_CASE("single bit flips never break the decoder") {
    const auto up = testutil::correlated_block(5, 2000, 9);
    const auto enc = encode_container(hierarchy(up, ModelKind::JointDmx, true), 512);
    std::mt19937_64 rng(10);
    int detected = 0;
    for (int i = 0; i < 300; ++i) {
        auto bytes = enc.bytes;
        const std::size_t bit = rng() % (bytes.size() * 8);
        bytes[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        try {
            const auto dec = decode_container(bytes);
            REQUIRE(dec.mixes.size() == 2);
            REQUIRE(dec.mixes[1].channels() == 5);
        } catch (const Error &) {
            ++detected;
        }
    }
    CHECK(detected > 0);
}

TEST_CASE("inspection matches the stream") {
    const auto up = testutil::correlated_block(5, 10000, 11);
    const auto enc = encode_container(hierarchy(up, ModelKind::JointDmx, true));
    const auto trace = inspect_container(enc.bytes);
    REQUIRE(trace.chunks.size() == 6);
    std::uint64_t total = trace.header.byte_size() * 8;
    for (std::size_t i = 0; i < trace.chunks.size(); ++i) {
        const auto &c = trace.chunks[i];
        CHECK(c.mix == i % 2);
        CHECK(c.frame == i / 2);
        CHECK(c.bits.body() == 8ull * c.byte_length);
        CHECK((c.frame == 0) == (c.bits.warmup > 0));
        total += 32 + c.bits.body();
    }
    CHECK(total == enc.total_bits());
}

TEST_CASE("measure rows") {
    const auto up = testutil::correlated_block(5, 8192, 12);
    const auto rows = measure(up);
    const auto configs = measure_configs();
    REQUIRE(rows.size() == 6);
    REQUIRE(configs.size() == 6);
    const char *names[] = {"SEP", "JOINT", "JOINT+SVD", "SEP_DMX+SVD", "JOINT_DMX", "JOINT_DMX+SVD"};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(rows[i].name == names[i]);
        CHECK(rows[i].upmix_ratio > 0.0);
        CHECK(rows[i].upmix_ratio <= 1.1);
        CHECK(rows[i].total_ratio > 0.0);
        CHECK(rows[i].total_ratio <= 1.1);
    }

    // total = (bits of the 2.0 and 5.0 mixes + header) / (16 * 7 * N)
    const auto enc = encode_container(hierarchy(up, ModelKind::JointDmx, true));
    CHECK(rows[5].total_ratio == doctest::Approx(static_cast<double>(enc.total_bits()) / (16.0 * 7 * 8192)));
    CHECK(rows[5].upmix_ratio == doctest::Approx(static_cast<double>(enc.mix_bits[1]) / (16.0 * 5 * 8192)));

    CHECK_THROWS_AS(measure(SampleBlock(2, 100)), Error);
}

}
