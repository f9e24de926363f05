#include "mlc/model.hpp"

#include <algorithm>
#include <string>
#include <string_view>

#include "mlc/error.hpp"

namespace mlc {

const char *model_name(ModelKind kind) noexcept {
    switch (kind) {
    case ModelKind::Sep: return "sep";
    case ModelKind::Joint: return "joint";
    case ModelKind::SepDmx: return "sep-dmx";
    case ModelKind::JointDmx: return "joint-dmx";
    }
    return "?";
}

ModelKind parse_model(const char *name) {
    const std::string_view n(name);
    if (n == "sep") return ModelKind::Sep;
    if (n == "joint") return ModelKind::Joint;
    if (n == "sep-dmx") return ModelKind::SepDmx;
    if (n == "joint-dmx") return ModelKind::JointDmx;
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(n) + "'");
}

ModelSpec ModelSpec::make(ModelKind kind, unsigned downmix_channels, unsigned order) {
    ModelSpec m;
    m.kind = kind;
    m.order = order;
    m.downmix_channels = downmix_channels;
    m.delta = kind == ModelKind::Sep ? 0.0 : kDefaultDelta;
    return m;
}

std::size_t ModelSpec::coefficient_count(std::size_t channels) const noexcept {
    const std::size_t lags = is_joint() ? std::size_t{order} * channels : order;
    return lags + (uses_downmix() ? downmix_channels : 0);
}

void ModelSpec::validate() const {
    if (order < 1 || order > kMaxOrder)
        throw Error(ErrorCode::InvalidArgument,
                    "prediction order must be in [1, " + std::to_string(kMaxOrder) + "]");
    if (uses_downmix() && downmix_channels == 0)
        throw Error(ErrorCode::InvalidArgument,
                    std::string(model_name(kind)) + " needs at least one downmix channel");
    if (!uses_downmix() && downmix_channels != 0)
        throw Error(ErrorCode::InvalidArgument,
                    std::string(model_name(kind)) + " takes no downmix channels");
    if (!(delta >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "regularization weight must be non-negative");
}

std::vector<Regressor> regressor_layout(const ModelSpec &model, std::size_t channels,
                                        std::size_t target) {
    std::vector<Regressor> out;
    out.reserve(model.coefficient_count(channels));
    const auto add_lags = [&](std::size_t c) {
        for (std::uint32_t k = 1; k <= model.order; ++k)
            out.push_back({false, static_cast<std::uint32_t>(c), k});
    };
    if (model.is_joint()) {
        for (std::size_t c = 0; c < channels; ++c)
            add_lags(c);
    } else {
        add_lags(target);
    }
    if (model.uses_downmix())
        for (std::uint32_t d = 0; d < model.downmix_channels; ++d)
            out.push_back({true, d, 0});
    return out;
}

std::vector<double> CoefficientSet::dequantized(std::size_t channel) const {
    const auto &q = per_channel.at(channel);
    std::vector<double> out(q.size());
    std::transform(q.begin(), q.end(), out.begin(), to_double);
    return out;
}

FrameSpan FrameSpan::make(std::size_t begin, std::size_t end, unsigned order) noexcept {
    return {begin, end, std::max(begin, std::min<std::size_t>(order, end))};
}

} // namespace mlc
