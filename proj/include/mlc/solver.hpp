#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mlc/core.hpp"
#include "mlc/model.hpp"

namespace mlc::solver {

constexpr double kRcond = 1e-12;

/// Least-squares problem in the normalised [-1, 1) domain. Each column of
/// `targets` is one target channel; all share the regressor matrix.
struct DesignSystem {
    Eigen::MatrixXd regressors; // rows: predictable samples, cols: canonical order
    Eigen::MatrixXd targets;    // rows x target count
};

/// Builds the system for one target channel. `downmix` must be present iff
/// the model uses it, and must cover the same sample range as `mix`.
/// Samples of `mix` before `span.begin` act as history.
DesignSystem build_design_system(const SampleBlock &mix, const SampleBlock *downmix,
                                 const FrameSpan &span, const ModelSpec &model,
                                 std::size_t target_channel);

/// Joint models share one regressor matrix across targets; this builds it
/// once with every channel as a target column.
DesignSystem build_joint_system(const SampleBlock &mix, const SampleBlock *downmix,
                                const FrameSpan &span, const ModelSpec &model);

/// Minimum-norm least squares via SVD, singular values below
/// kRcond * sigma_max treated as zero. Result is cols x targets.
Eigen::MatrixXd solve_plain(const DesignSystem &system);

/// Solves (S'S + delta I) a = S's in the least-squares sense.
Eigen::MatrixXd solve_regularized(const DesignSystem &system, double delta);

/// Plain solve when delta is zero, regularised otherwise.
Eigen::MatrixXd solve(const DesignSystem &system, double delta);

std::vector<Half> quantize_coefficients(std::span<const double> alpha);
std::vector<Half> quantize_coefficients(const Eigen::VectorXd &alpha);

} // namespace mlc::solver
