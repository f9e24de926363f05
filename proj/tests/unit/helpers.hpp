#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mlc/core.hpp"

namespace testutil {

inline mlc::SampleBlock noise_block(std::size_t channels, std::size_t length, std::uint64_t seed,
                                    int amplitude = 32767) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-amplitude - 1, amplitude);
    mlc::SampleBlock block(channels, length);
    for (std::size_t c = 0; c < channels; ++c)
        for (auto &s : block.channel(c))
            s = static_cast<std::int16_t>(std::clamp(dist(rng), -32768, 32767));
    return block;
}

// AR(2)-coloured source mixed into every channel with per-channel gains,
// plus a little independent noise.
inline mlc::SampleBlock correlated_block(std::size_t channels, std::size_t length, std::uint64_t seed,
                                         double level = 6000.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    mlc::SampleBlock block(channels, length);
    double y1 = 0.0, y2 = 0.0;
    std::vector<double> gain(channels);
    for (auto &v : gain)
        v = 0.4 + 0.6 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t t = 0; t < length; ++t) {
        const double y = 1.6 * y1 - 0.8 * y2 + g(rng);
        y2 = y1;
        y1 = y;
        for (std::size_t c = 0; c < channels; ++c) {
            const double v = level * 0.1 * gain[c] * y + 3.0 * g(rng);
            block.at(c, t) = mlc::clamp16(mlc::round_half_away(v));
        }
    }
    return block;
}

} // namespace testutil
