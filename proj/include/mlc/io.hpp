#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mlc/core.hpp"

namespace mlc::io {

struct WavInfo {
    std::uint16_t channels = 0;        // as stored in the file
    std::uint32_t sample_rate = 44100;
    std::uint16_t bits_per_sample = 16;
    std::uint64_t frames = 0;
};

struct WavData {
    WavInfo info;
    SampleBlock block; // 5.1 input arrives here as 5.0 (LFE dropped)
};

/// Accepts 16-bit PCM with 1, 2, 5 or 6 channels. For 6 channels the LFE
/// (index 3 in L, R, C, LFE, Ls, Rs order) is dropped.
WavData parse_wav(std::span<const std::uint8_t> bytes);
WavData read_wav(const std::filesystem::path &path);

std::vector<std::uint8_t> serialize_wav(const SampleBlock &block);
void write_wav(const std::filesystem::path &path, const SampleBlock &block);

} // namespace mlc::io
