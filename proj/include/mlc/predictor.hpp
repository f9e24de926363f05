#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlc/core.hpp"
#include "mlc/model.hpp"

namespace mlc {

/// Integer prediction residuals for the predictable part of one frame.
struct ResidualBlock {
    std::size_t channels = 0;
    std::size_t length = 0;
    std::vector<std::int32_t> data; // channel-major

    ResidualBlock() = default;
    ResidualBlock(std::size_t c, std::size_t n) : channels(c), length(n), data(c * n, 0) {}

    std::span<const std::int32_t> channel(std::size_t c) const { return {data.data() + c * length, length}; }
    std::span<std::int32_t> channel(std::size_t c) { return {data.data() + c * length, length}; }
    std::int32_t at(std::size_t c, std::size_t t) const { return data[c * length + t]; }
    std::int32_t &at(std::size_t c, std::size_t t) { return data[c * length + t]; }

    bool operator==(const ResidualBlock &) const = default;
};

namespace predictor {

/// Sum of coeff[i] * context[i], accumulated left to right in double,
/// scaled back to the 16-bit domain and rounded half away from zero.
/// The encoder and decoder must both go through this function; the build
/// disables floating-point contraction so the result is reproducible.
std::int32_t predict_sample(std::span<const double> context, std::span<const double> coeffs);

/// e_c(t) = s_c(t) - prediction for every predictable t of the frame.
/// Predictions are clamped to the 16-bit sample range before subtraction.
ResidualBlock compute_residuals(const SampleBlock &mix, const SampleBlock *downmix,
                                const FrameSpan &span, const CoefficientSet &coeffs,
                                const ModelSpec &model);

/// Inverse of compute_residuals. Writes samples [span.predictable, span.end)
/// of `mix` in increasing time order; earlier samples must already be
/// decoded. Channels flagged in `skip` are left untouched (they are expected
/// to be filled already).
void reconstruct_frame(const ResidualBlock &residuals, SampleBlock &mix, const SampleBlock *downmix,
                       const FrameSpan &span, const CoefficientSet &coeffs, const ModelSpec &model,
                       std::span<const std::uint8_t> skip = {});

} // namespace predictor
} // namespace mlc
