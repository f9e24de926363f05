#include "mlc/predictor.hpp"

#include <string>

namespace mlc::predictor {

namespace {

struct Plan {
    std::vector<std::vector<Regressor>> layouts; // per channel
    std::vector<std::vector<double>> coeffs;     // per channel, dequantized
};

Plan make_plan(const SampleBlock &mix, const SampleBlock *downmix, const FrameSpan &span,
               const CoefficientSet &coeffs, const ModelSpec &model,
               std::span<const std::uint8_t> skip) {
    model.validate();
    if (span.end > mix.length() || span.begin > span.end)
        throw Error(ErrorCode::InvalidArgument, "frame span outside the mix");
    if (model.uses_downmix()) {
        if (downmix == nullptr || downmix->length() != mix.length() ||
            downmix->channels() != model.downmix_channels)
            throw Error(ErrorCode::InvalidArgument, "downmix missing or mismatched");
    }
    if (coeffs.per_channel.size() != mix.channels())
        throw Error(ErrorCode::InvalidArgument, "coefficient set does not match channel count");

    Plan plan;
    plan.layouts.resize(mix.channels());
    plan.coeffs.resize(mix.channels());
    for (std::size_t c = 0; c < mix.channels(); ++c) {
        if (!skip.empty() && skip[c])
            continue;
        plan.layouts[c] = regressor_layout(model, mix.channels(), c);
        plan.coeffs[c] = coeffs.dequantized(c);
        if (plan.coeffs[c].size() != plan.layouts[c].size())
            throw Error(ErrorCode::InvalidArgument,
                        "channel " + std::to_string(c) + ": coefficient count mismatch");
    }
    return plan;
}

void fill_context(const std::vector<Regressor> &layout, const SampleBlock &mix,
                  const SampleBlock *downmix, std::size_t t, std::vector<double> &ctx) {
    ctx.resize(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const Regressor &r = layout[i];
        ctx[i] = r.downmix ? normalize(downmix->at(r.channel, t)) : normalize(mix.at(r.channel, t - r.lag));
    }
}

std::int32_t prediction16(std::span<const double> ctx, std::span<const double> coeffs) {
    return clamp16(predict_sample(ctx, coeffs));
}

} // namespace

std::int32_t predict_sample(std::span<const double> context, std::span<const double> coeffs) {
    if (context.size() != coeffs.size())
        throw Error(ErrorCode::InvalidArgument, "context and coefficient lengths differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double term = coeffs[i] * context[i];
        acc = acc + term;
    }
    return round_half_away(acc * kSampleScale);
}

ResidualBlock compute_residuals(const SampleBlock &mix, const SampleBlock *downmix,
                                const FrameSpan &span, const CoefficientSet &coeffs,
                                const ModelSpec &model) {
    const Plan plan = make_plan(mix, downmix, span, coeffs, model, {});
    ResidualBlock out(mix.channels(), span.coded());
    std::vector<double> ctx;
    for (std::size_t c = 0; c < mix.channels(); ++c) {
        for (std::size_t t = span.predictable; t < span.end; ++t) {
            fill_context(plan.layouts[c], mix, downmix, t, ctx);
            out.at(c, t - span.predictable) = mix.at(c, t) - prediction16(ctx, plan.coeffs[c]);
        }
    }
    return out;
}

void reconstruct_frame(const ResidualBlock &residuals, SampleBlock &mix, const SampleBlock *downmix,
                       const FrameSpan &span, const CoefficientSet &coeffs, const ModelSpec &model,
                       std::span<const std::uint8_t> skip) {
    if (!skip.empty() && skip.size() != mix.channels())
        throw Error(ErrorCode::InvalidArgument, "skip mask does not match channel count");
    const Plan plan = make_plan(mix, downmix, span, coeffs, model, skip);
    if (residuals.channels != mix.channels() || residuals.length != span.coded())
        throw Error(ErrorCode::InvalidArgument, "residual block does not match the frame");

    std::vector<double> ctx;
    // Time-major: a joint model reads every channel's past.
    for (std::size_t t = span.predictable; t < span.end; ++t) {
        for (std::size_t c = 0; c < mix.channels(); ++c) {
            if (!skip.empty() && skip[c])
                continue;
            fill_context(plan.layouts[c], mix, downmix, t, ctx);
            const std::int64_t v = std::int64_t{residuals.at(c, t - span.predictable)} +
                                   prediction16(ctx, plan.coeffs[c]);
            if (v < -32768 || v > 32767)
                throw Error(ErrorCode::Stream, "reconstructed sample outside the 16-bit range");
            mix.at(c, t) = static_cast<std::int16_t>(v);
        }
    }
}

} // namespace mlc::predictor
