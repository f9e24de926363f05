#include "mlc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace mlc::corpus {

namespace {

constexpr std::size_t kChannels = 5;

// Speaker azimuths in degrees, in L, R, C, Ls, Rs order.
constexpr std::array<double, kChannels> kAzimuth{-30.0, 30.0, 0.0, -110.0, 110.0};

class Noise {
public:
    explicit Noise(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (spare_) {
            spare_ = false;
            return cached_;
        }
        const double u1 = std::max(uniform(), 0x1p-60);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * std::numbers::pi * u2);
        spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    bool spare_ = false;
    double cached_ = 0.0;
};

// Resonant AR(2) noise with unit-ish variance.
std::vector<double> coloured_source(Noise &rng, std::size_t n, double radius, double angle) {
    const double a1 = 2.0 * radius * std::cos(angle);
    const double a2 = -radius * radius;
    std::vector<double> out(n);
    double y1 = 0.0, y2 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double y = rng.gaussian() + a1 * y1 + a2 * y2;
        out[t] = y;
        y2 = y1;
        y1 = y;
    }
    double energy = 0.0;
    for (const double v : out)
        energy += v * v;
    const double scale = n ? 1.0 / std::sqrt(energy / static_cast<double>(n) + 1e-30) : 1.0;
    for (double &v : out)
        v *= scale;
    return out;
}

// Constant-power pairwise panning between the two nearest speakers, plus a
// little spill into every channel.
std::array<double, kChannels> pan_gains(double azimuth, double spill) {
    std::array<std::size_t, kChannels> order{3, 0, 2, 1, 4}; // Ls, L, C, R, Rs by angle
    std::array<double, kChannels> g;
    g.fill(spill);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const double lo = kAzimuth[order[i]];
        const double hi = kAzimuth[order[i + 1]];
        if (azimuth >= lo && azimuth <= hi) {
            const double x = (azimuth - lo) / (hi - lo) * std::numbers::pi / 2.0;
            g[order[i]] += std::cos(x);
            g[order[i + 1]] += std::sin(x);
            break;
        }
    }
    return g;
}

} // namespace

SampleBlock generate_item(std::uint64_t seed, std::uint32_t index, const CorpusOptions &options) {
    const auto n = static_cast<std::size_t>(std::llround(options.seconds * options.sample_rate));
    Noise rng(seed * 0x9E3779B97F4A7C15ull + index + 1);

    std::vector<std::vector<double>> mix(kChannels, std::vector<double>(n, 0.0));

    // Diffuse bed: one coloured source in every channel.
    {
        const auto bed = coloured_source(rng, n, rng.uniform(0.97, 0.995), rng.uniform(0.01, 0.05) * std::numbers::pi);
        const double level = rng.uniform(0.6, 1.0);
        for (std::size_t c = 0; c < kChannels; ++c) {
            const double g = level * rng.uniform(0.5, 1.0);
            for (std::size_t t = 0; t < n; ++t)
                mix[c][t] += g * bed[t];
        }
    }

    // Panned sources with distinct spectra.
    const int sources = 2 + static_cast<int>(rng.uniform() * 2.0);
    for (int s = 0; s < sources; ++s) {
        auto src = coloured_source(rng, n, rng.uniform(0.95, 0.995), rng.uniform(0.03, 0.3) * std::numbers::pi);
        // A tone with slow tremolo rides on some sources.
        if (rng.uniform() < 0.6) {
            const double f = rng.uniform(80.0, 2000.0) / options.sample_rate * 2.0 * std::numbers::pi;
            const double am = rng.uniform(0.1, 2.0) / options.sample_rate * 2.0 * std::numbers::pi;
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double level = rng.uniform(0.3, 1.0);
            for (std::size_t t = 0; t < n; ++t)
                src[t] += level * (0.6 + 0.4 * std::sin(am * t)) * std::sin(f * t + phase);
        }
        const auto g = pan_gains(rng.uniform(-110.0, 110.0), rng.uniform(0.05, 0.2));
        const double level = rng.uniform(0.4, 1.0);
        for (std::size_t c = 0; c < kChannels; ++c)
            for (std::size_t t = 0; t < n; ++t)
                mix[c][t] += level * g[c] * src[t];
    }

    // Per-channel one-pole colouration.
    for (std::size_t c = 0; c < kChannels; ++c) {
        const double a = rng.uniform(-0.2, 0.4);
        double prev = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            prev = mix[c][t] + a * prev;
            mix[c][t] = prev;
        }
    }

    double peak = 1e-12;
    for (const auto &ch : mix)
        for (const double v : ch)
            peak = std::max(peak, std::fabs(v));
    const double scale = rng.uniform(0.35, 0.7) * 32767.0 / peak;
    const double noise_lsb = rng.uniform(1.0, 4.0);

    SampleBlock block(kChannels, n, options.sample_rate);
    for (std::size_t c = 0; c < kChannels; ++c)
        for (std::size_t t = 0; t < n; ++t) {
            const double v = mix[c][t] * scale + noise_lsb * rng.gaussian();
            block.at(c, t) = static_cast<std::int16_t>(round_half_away(std::clamp(v, -32768.0, 32767.0)));
        }
    return block;
}

double channel_correlation(const SampleBlock &block, std::size_t a, std::size_t b) {
    const std::size_t n = block.length();
    if (n == 0)
        return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        ma += block.at(a, t);
        mb += block.at(b, t);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double da = block.at(a, t) - ma;
        const double db = block.at(b, t) - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

} // namespace mlc::corpus
