#include "mlc/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace mlc {

std::size_t layout_channels(Layout layout) noexcept { return static_cast<std::size_t>(layout); }

Layout layout_for_channels(std::size_t channels) {
    switch (channels) {
    case 1: return Layout::Mono;
    case 2: return Layout::Stereo20;
    case 5: return Layout::Surround50;
    default:
        throw Error(ErrorCode::Layout,
                    "no layout with " + std::to_string(channels) + " channels");
    }
}

const char *layout_name(Layout layout) noexcept {
    switch (layout) {
    case Layout::Mono: return "mono";
    case Layout::Stereo20: return "2.0";
    case Layout::Surround50: return "5.0";
    }
    return "?";
}

SampleBlock::SampleBlock(std::size_t channels, std::size_t length, std::uint32_t sample_rate)
    : channels_(channels), length_(length), sample_rate_(sample_rate),
      data_(channels * length, 0) {
    if (channels == 0)
        throw Error(ErrorCode::InvalidArgument, "sample block needs at least one channel");
}

SampleBlock::SampleBlock(std::size_t channels, std::size_t length, std::uint32_t sample_rate,
                         std::vector<std::int16_t> planar)
    : channels_(channels), length_(length), sample_rate_(sample_rate), data_(std::move(planar)) {
    if (channels == 0)
        throw Error(ErrorCode::InvalidArgument, "sample block needs at least one channel");
    if (data_.size() != channels * length)
        throw Error(ErrorCode::InvalidArgument, "planar data size does not match channels x length");
}

MixPair::MixPair(SampleBlock down, SampleBlock up) : downmix(std::move(down)), upmix(std::move(up)) {
    if (downmix.length() != upmix.length())
        throw Error(ErrorCode::InvalidArgument, "downmix and upmix lengths differ");
    if (downmix.sample_rate() != upmix.sample_rate())
        throw Error(ErrorCode::InvalidArgument, "downmix and upmix sample rates differ");
}

std::int32_t round_half_away(double x) noexcept {
    if (std::isnan(x))
        return 0;
    const double r = std::round(x);
    if (r >= static_cast<double>(std::numeric_limits<std::int32_t>::max()))
        return std::numeric_limits<std::int32_t>::max();
    if (r <= static_cast<double>(std::numeric_limits<std::int32_t>::min()))
        return std::numeric_limits<std::int32_t>::min();
    return static_cast<std::int32_t>(r);
}

std::int16_t clamp16(std::int64_t v) noexcept {
    return static_cast<std::int16_t>(std::clamp<std::int64_t>(v, -32768, 32767));
}

SampleBlock itu_downmix_5to2(const SampleBlock &upmix) {
    if (upmix.channels() != layout_channels(Layout::Surround50))
        throw Error(ErrorCode::Layout, "ITU downmix expects a 5.0 block (L, R, C, Ls, Rs)");

    constexpr double a = 0.70710678118654752;
    const double g = 1.0 / (1.0 + 2.0 * a);
    const auto mix = [&](std::int32_t front, std::int32_t centre, std::int32_t surround) {
        const double v = g * (front + a * centre + a * surround);
        return static_cast<std::int16_t>(round_half_away(std::clamp(v, -32768.0, 32767.0)));
    };

    SampleBlock out(2, upmix.length(), upmix.sample_rate());
    for (std::size_t t = 0; t < upmix.length(); ++t) {
        out.at(0, t) = mix(upmix.at(0, t), upmix.at(2, t), upmix.at(3, t));
        out.at(1, t) = mix(upmix.at(1, t), upmix.at(2, t), upmix.at(4, t));
    }
    return out;
}

double compression_ratio(std::uint64_t compressed_bits, const SampleBlock &original) {
    if (original.length() == 0)
        throw Error(ErrorCode::UndefinedRatio, "compression ratio of an empty block is undefined");
    return static_cast<double>(compressed_bits) /
           (16.0 * static_cast<double>(original.channels()) * static_cast<double>(original.length()));
}

} // namespace mlc
