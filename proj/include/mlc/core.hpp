#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlc/error.hpp"

namespace mlc {

/// Channel layouts the codec knows about. The numeric value is the channel
/// count and is what the container stores.
enum class Layout : std::uint8_t {
    Mono = 1,
    Stereo20 = 2,
    Surround50 = 5, // L, R, C, Ls, Rs
};

std::size_t layout_channels(Layout layout) noexcept;
Layout layout_for_channels(std::size_t channels);
const char *layout_name(Layout layout) noexcept;

/// Planar 16-bit PCM, channel-major.
class SampleBlock {
public:
    SampleBlock() = default;
    SampleBlock(std::size_t channels, std::size_t length, std::uint32_t sample_rate = 44100);
    SampleBlock(std::size_t channels, std::size_t length, std::uint32_t sample_rate,
                std::vector<std::int16_t> planar);

    std::size_t channels() const noexcept { return channels_; }
    std::size_t length() const noexcept { return length_; }
    std::uint32_t sample_rate() const noexcept { return sample_rate_; }
    bool empty() const noexcept { return length_ == 0; }

    std::span<const std::int16_t> channel(std::size_t c) const {
        return {data_.data() + c * length_, length_};
    }
    std::span<std::int16_t> channel(std::size_t c) {
        return {data_.data() + c * length_, length_};
    }

    std::int16_t at(std::size_t c, std::size_t t) const { return data_[c * length_ + t]; }
    std::int16_t &at(std::size_t c, std::size_t t) { return data_[c * length_ + t]; }

    std::span<const std::int16_t> planar() const noexcept { return data_; }

    bool operator==(const SampleBlock &other) const = default;

private:
    std::size_t channels_ = 0;
    std::size_t length_ = 0;
    std::uint32_t sample_rate_ = 44100;
    std::vector<std::int16_t> data_;
};

/// A downmix and the upmix it accompanies.
struct MixPair {
    SampleBlock downmix;
    SampleBlock upmix;

    MixPair(SampleBlock down, SampleBlock up);
};

constexpr double kSampleScale = 32768.0;

/// Maps a 16-bit sample into [-1, 1). Exact: the divisor is a power of two.
constexpr double normalize(std::int32_t sample) noexcept { return sample / kSampleScale; }

/// sign(x) * floor(|x| + 0.5), saturated to the int32 range.
std::int32_t round_half_away(double x) noexcept;

std::int16_t clamp16(std::int64_t v) noexcept;

/// ITU 5.0 -> 2.0 downmix with centre/surround gains 1/sqrt(2) and
/// overall normalisation 1 / (1 + sqrt(2)), so no input can overflow.
SampleBlock itu_downmix_5to2(const SampleBlock &upmix);

/// compressed_bits / (16 * C * N).
double compression_ratio(std::uint64_t compressed_bits, const SampleBlock &original);

} // namespace mlc
