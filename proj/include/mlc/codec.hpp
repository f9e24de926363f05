#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlc/core.hpp"
#include "mlc/model.hpp"
#include "mlc/transform.hpp"

namespace mlc::codec {

constexpr std::uint32_t kDefaultFrameSize = 4096;
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderFixedBytes = 24;
constexpr std::size_t kHeaderMixBytes = 16;
constexpr unsigned kCoefficientBits = 16;
constexpr unsigned kLengthPrefixBits = 32;

/// How one mix is coded.
struct MixCoding {
    ModelSpec model;
    bool svd = false; // evaluate the projection mode per frame
};

/// Serialised per-frame payload, before bit packing.
struct FrameChunk {
    bool svd_mode = false;
    std::vector<std::uint8_t> escaped;                   // per channel
    std::vector<std::int16_t> warmup;                    // channel-major, first frame only
    CoefficientSet coefficients;                         // empty list for escaped channels
    std::optional<transform::ProjectionMatrix> projection;
    std::vector<unsigned> rice_params;                   // one per coded stream
    std::vector<std::vector<std::int16_t>> verbatim;     // escaped channels, ascending
    std::vector<std::vector<std::int32_t>> streams;      // coded channels or projected columns

    std::size_t channels() const noexcept { return escaped.size(); }
};

/// Bit accounting of one chunk body (the 32-bit length prefix excluded).
struct ChunkBits {
    std::uint64_t flags = 0;
    std::uint64_t warmup = 0;
    std::uint64_t coefficients = 0;
    std::uint64_t projection = 0;
    std::uint64_t rice_params = 0;
    std::uint64_t payload = 0;
    std::uint64_t padding = 0;

    std::uint64_t side_info() const noexcept { return flags + coefficients + projection + rice_params; }
    std::uint64_t body() const noexcept {
        return flags + warmup + coefficients + projection + rice_params + payload + padding;
    }
};

ChunkBits measure_chunk(const FrameChunk &chunk);

/// Solve, quantize, predict, optionally project, and pick the smaller of
/// the evaluated modes. Channels whose coded size would exceed raw size are
/// escaped to verbatim samples.
FrameChunk encode_frame(const SampleBlock &mix, const SampleBlock *downmix, const FrameSpan &span,
                        const MixCoding &coding);

/// Reconstructs [span.begin, span.end) of `mix` from a chunk.
void decode_frame(const FrameChunk &chunk, SampleBlock &mix, const SampleBlock *downmix,
                  const FrameSpan &span, const MixCoding &coding);

std::vector<std::uint8_t> write_chunk(const FrameChunk &chunk);

/// Parses one chunk body. The layout parameters come from the container
/// header; `frame` is used for error messages.
FrameChunk read_chunk(std::span<const std::uint8_t> body, std::size_t channels, const FrameSpan &span,
                      const ModelSpec &model, std::int64_t frame, ChunkBits *bits = nullptr);

struct MixHeader {
    Layout layout = Layout::Stereo20;
    MixCoding coding;
};

struct ContainerHeader {
    std::uint8_t version = kVersion;
    std::uint32_t sample_rate = 44100;
    std::uint8_t bit_depth = 16;
    std::uint32_t frame_size = kDefaultFrameSize;
    std::uint64_t total_samples = 0;
    std::vector<MixHeader> mixes; // lowest in the hierarchy first

    std::uint64_t frame_count() const noexcept {
        return (total_samples + frame_size - 1) / frame_size;
    }
    std::size_t byte_size() const noexcept { return kHeaderFixedBytes + kHeaderMixBytes * mixes.size(); }
};

std::vector<std::uint8_t> write_header(const ContainerHeader &header);
ContainerHeader read_header(std::span<const std::uint8_t> bytes);

struct MixInput {
    SampleBlock audio;
    MixCoding coding;
};

struct EncodedStream {
    std::vector<std::uint8_t> bytes;
    std::uint64_t header_bits = 0;
    std::vector<std::uint64_t> mix_bits; // chunk bits per mix, length prefixes included

    std::uint64_t total_bits() const noexcept { return bytes.size() * 8u; }
};

/// Header followed by frame-interleaved chunks. DMX models use the
/// preceding mix as their downmix.
EncodedStream encode_container(std::span<const MixInput> mixes,
                               std::uint32_t frame_size = kDefaultFrameSize);

struct DecodedContainer {
    ContainerHeader header;
    std::vector<SampleBlock> mixes;
};

DecodedContainer decode_container(std::span<const std::uint8_t> bytes);

struct ChunkTrace {
    std::size_t mix = 0;
    std::uint64_t frame = 0;
    std::uint32_t byte_length = 0;
    bool svd_mode = false;
    std::size_t escaped = 0;
    ChunkBits bits;
};

struct ContainerTrace {
    ContainerHeader header;
    std::vector<ChunkTrace> chunks;
};

/// Parses the whole stream (including a full decode) and records the bit
/// accounting of every chunk.
ContainerTrace inspect_container(std::span<const std::uint8_t> bytes);

/// One row of the ratio comparison.
struct RatioRow {
    std::string name;
    ModelKind kind = ModelKind::Sep;
    bool svd = false;
    double upmix_ratio = 0.0;
    double total_ratio = 0.0;
};

struct MeasureOptions {
    std::uint32_t frame_size = kDefaultFrameSize;
    unsigned order = kDefaultOrder;
    std::optional<double> delta; // model default when unset
};

/// Configurations compared by measure(), in report order.
struct MeasureConfig {
    const char *name;
    ModelKind kind;
    bool svd;
};
std::span<const MeasureConfig> measure_configs() noexcept;

/// Codes a 5.0 upmix together with its ITU 2.0 downmix (coded with Sep) in
/// every configuration. Upmix ratio counts the upmix chunks only; total
/// ratio counts the whole stream against 7 raw channels.
std::vector<RatioRow> measure(const SampleBlock &upmix, const MeasureOptions &options = {});

} // namespace mlc::codec
