#pragma once

#include <cstdint>

#include "mlc/core.hpp"

namespace mlc::corpus {

struct CorpusOptions {
    double seconds = 10.0;
    std::uint32_t sample_rate = 44100;
};

/// Deterministic synthetic 5.0 item: a diffuse bed plus panned coloured
/// sources and tones, a mild per-channel AR colouration and low-level
/// independent noise. Same (seed, index) always yields the same samples.
SampleBlock generate_item(std::uint64_t seed, std::uint32_t index, const CorpusOptions &options = {});

/// Pearson correlation between two channels of a block.
double channel_correlation(const SampleBlock &block, std::size_t a, std::size_t b);

} // namespace mlc::corpus
