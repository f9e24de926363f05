#pragma once

#include <cstddef>
#include <vector>

#include "mlc/half.hpp"
#include "mlc/predictor.hpp"

namespace mlc::transform {

/// K x K binary16 matrix, row-major. Columns are the right singular
/// vectors of a residual block, strongest first.
struct ProjectionMatrix {
    std::size_t size = 0;
    std::vector<Half> entries;

    static ProjectionMatrix identity(std::size_t k);

    double at(std::size_t row, std::size_t col) const { return to_double(entries[row * size + col]); }

    bool operator==(const ProjectionMatrix &) const = default;
};

/// Right singular vectors of the N x K residual matrix, each column signed
/// so that its largest-magnitude entry (lowest row on ties) is positive,
/// then quantized to binary16. Throws NotApplicable for K < 2.
ProjectionMatrix fit_projection(const ResidualBlock &residuals);

/// Integer-reversible realisation of t = e * Q.
///
/// Q^T is factored into Givens rotations (plus a diagonal sign matrix) with
/// plain IEEE arithmetic, so the encoder and decoder derive the identical
/// network from the transmitted binary16 matrix. Each rotation is applied as
/// three rounded lifting steps, which makes the map exactly invertible on
/// integers for any finite Q.
class LiftingNetwork {
public:
    explicit LiftingNetwork(const ProjectionMatrix &q);

    std::size_t size() const noexcept { return size_; }

    void forward(std::int64_t *x) const;
    void inverse(std::int64_t *x) const;

private:
    struct Rotation {
        std::uint32_t i = 0;
        std::uint32_t j = 0;
        bool negate = false;
        double shear = 0.0; // (c - 1) / s, |shear| <= 1
        double sine = 0.0;
    };

    std::size_t size_ = 0;
    std::vector<std::uint8_t> flip_;
    std::vector<Rotation> rotations_; // in application order for forward()
};

/// Projects every time sample of the residual block.
ResidualBlock forward_project(const ResidualBlock &residuals, const ProjectionMatrix &q);

/// Exact inverse of forward_project.
ResidualBlock inverse_project(const ResidualBlock &projected, const ProjectionMatrix &q);

} // namespace mlc::transform
