#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mlc/half.hpp"

namespace mlc {

/// The four prediction models:
///   Sep      - each channel from its own past p samples
///   Joint    - each channel from the past p samples of every channel
///   SepDmx   - Sep plus the current samples of every downmix channel
///   JointDmx - Joint plus the current samples of every downmix channel
enum class ModelKind : std::uint8_t { Sep = 0, Joint = 1, SepDmx = 2, JointDmx = 3 };

const char *model_name(ModelKind kind) noexcept;
ModelKind parse_model(const char *name);

constexpr unsigned kDefaultOrder = 8;
constexpr unsigned kMaxOrder = 32;
constexpr double kDefaultDelta = 1e-4;

struct ModelSpec {
    ModelKind kind = ModelKind::Sep;
    unsigned order = kDefaultOrder;
    unsigned downmix_channels = 0;
    double delta = 0.0;

    /// Defaults: p = 8, delta = 0 for Sep and 1e-4 otherwise.
    static ModelSpec make(ModelKind kind, unsigned downmix_channels = 0,
                          unsigned order = kDefaultOrder);

    bool uses_downmix() const noexcept {
        return kind == ModelKind::SepDmx || kind == ModelKind::JointDmx;
    }
    bool is_joint() const noexcept {
        return kind == ModelKind::Joint || kind == ModelKind::JointDmx;
    }

    /// Coefficients per target channel: p, pC, p + D or pC + D.
    std::size_t coefficient_count(std::size_t channels) const noexcept;

    /// Throws InvalidArgument when the invariants do not hold.
    void validate() const;

    bool operator==(const ModelSpec &) const = default;
};

/// One column of the design matrix. Lagged samples come from the mix being
/// coded (lag >= 1); downmix regressors always use lag 0.
struct Regressor {
    bool downmix = false;
    std::uint32_t channel = 0;
    std::uint32_t lag = 0;

    bool operator==(const Regressor &) const = default;
};

/// Canonical regressor order for one target channel: source channel
/// ascending, lag ascending, then downmix channels ascending.
std::vector<Regressor> regressor_layout(const ModelSpec &model, std::size_t channels,
                                        std::size_t target);

/// Quantized prediction parameters, one list per target channel.
/// An empty list marks a channel that was stored verbatim.
struct CoefficientSet {
    std::vector<std::vector<Half>> per_channel;

    std::vector<double> dequantized(std::size_t channel) const;
};

/// A frame [begin, end) of a mix. Rows before `predictable` have no full
/// prediction context (only possible in the stream's first frame).
struct FrameSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t predictable = 0;

    static FrameSpan make(std::size_t begin, std::size_t end, unsigned order) noexcept;

    std::size_t length() const noexcept { return end - begin; }
    std::size_t warmup() const noexcept { return predictable - begin; }
    std::size_t coded() const noexcept { return end - predictable; }
};

} // namespace mlc
