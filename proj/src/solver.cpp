#include "mlc/solver.hpp"

#include <algorithm>

namespace mlc::solver {

namespace {

void check_inputs(const SampleBlock &mix, const SampleBlock *downmix, const FrameSpan &span,
                  const ModelSpec &model) {
    model.validate();
    if (span.end > mix.length() || span.begin > span.end)
        throw Error(ErrorCode::InvalidArgument, "frame span outside the mix");
    if (model.uses_downmix()) {
        if (downmix == nullptr)
            throw Error(ErrorCode::InvalidArgument,
                        std::string(model_name(model.kind)) + " requires a downmix");
        if (downmix->length() != mix.length())
            throw Error(ErrorCode::InvalidArgument, "downmix length differs from the mix");
        if (downmix->channels() != model.downmix_channels)
            throw Error(ErrorCode::InvalidArgument, "downmix channel count differs from the model");
    }
}

Eigen::MatrixXd build_regressors(const SampleBlock &mix, const SampleBlock *downmix,
                                 const FrameSpan &span, const std::vector<Regressor> &layout) {
    const auto rows = static_cast<Eigen::Index>(span.coded());
    Eigen::MatrixXd S(rows, static_cast<Eigen::Index>(layout.size()));
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const Regressor &r = layout[j];
        const auto src = r.downmix ? downmix->channel(r.channel) : mix.channel(r.channel);
        const std::size_t first = span.predictable - r.lag;
        for (Eigen::Index i = 0; i < rows; ++i)
            S(i, static_cast<Eigen::Index>(j)) = normalize(src[first + static_cast<std::size_t>(i)]);
    }
    return S;
}

Eigen::VectorXd target_column(const SampleBlock &mix, const FrameSpan &span, std::size_t c) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(span.coded()));
    const auto src = mix.channel(c);
    for (Eigen::Index i = 0; i < s.size(); ++i)
        s(i) = normalize(src[span.predictable + static_cast<std::size_t>(i)]);
    return s;
}

Eigen::MatrixXd svd_solve(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B) {
    if (A.cols() == 0 || A.rows() == 0)
        return Eigen::MatrixXd::Zero(A.cols(), B.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRcond);
    return svd.solve(B);
}

} // namespace

DesignSystem build_design_system(const SampleBlock &mix, const SampleBlock *downmix,
                                 const FrameSpan &span, const ModelSpec &model,
                                 std::size_t target_channel) {
    check_inputs(mix, downmix, span, model);
    if (target_channel >= mix.channels())
        throw Error(ErrorCode::InvalidArgument, "target channel out of range");
    const auto layout = regressor_layout(model, mix.channels(), target_channel);
    return {build_regressors(mix, downmix, span, layout), target_column(mix, span, target_channel)};
}

DesignSystem build_joint_system(const SampleBlock &mix, const SampleBlock *downmix,
                                const FrameSpan &span, const ModelSpec &model) {
    check_inputs(mix, downmix, span, model);
    if (!model.is_joint())
        throw Error(ErrorCode::InvalidArgument, "shared design matrix needs a joint model");
    DesignSystem sys;
    sys.regressors = build_regressors(mix, downmix, span, regressor_layout(model, mix.channels(), 0));
    sys.targets.resize(static_cast<Eigen::Index>(span.coded()),
                       static_cast<Eigen::Index>(mix.channels()));
    for (std::size_t c = 0; c < mix.channels(); ++c)
        sys.targets.col(static_cast<Eigen::Index>(c)) = target_column(mix, span, c);
    return sys;
}

Eigen::MatrixXd solve_plain(const DesignSystem &system) {
    return svd_solve(system.regressors, system.targets);
}

Eigen::MatrixXd solve_regularized(const DesignSystem &system, double delta) {
    if (!(delta >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "regularization weight must be non-negative");
    const Eigen::MatrixXd &S = system.regressors;
    if (S.cols() == 0)
        return Eigen::MatrixXd::Zero(0, system.targets.cols());
    Eigen::MatrixXd gram = S.transpose() * S;
    gram.diagonal().array() += delta;
    const Eigen::MatrixXd rhs = S.transpose() * system.targets;
    return svd_solve(gram, rhs);
}

Eigen::MatrixXd solve(const DesignSystem &system, double delta) {
    return delta == 0.0 ? solve_plain(system) : solve_regularized(system, delta);
}

std::vector<Half> quantize_coefficients(std::span<const double> alpha) {
    std::vector<Half> out(alpha.size());
    std::transform(alpha.begin(), alpha.end(), out.begin(), to_half);
    return out;
}

std::vector<Half> quantize_coefficients(const Eigen::VectorXd &alpha) {
    return quantize_coefficients(std::span<const double>(alpha.data(), static_cast<std::size_t>(alpha.size())));
}

} // namespace mlc::solver
