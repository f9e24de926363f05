#include "mlc/transform.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "mlc/core.hpp"

namespace mlc::transform {

ProjectionMatrix ProjectionMatrix::identity(std::size_t k) {
    ProjectionMatrix q{k, std::vector<Half>(k * k, to_half(0.0))};
    for (std::size_t i = 0; i < k; ++i)
        q.entries[i * k + i] = to_half(1.0);
    return q;
}

ProjectionMatrix fit_projection(const ResidualBlock &residuals) {
    const std::size_t k = residuals.channels;
    if (k < 2)
        throw Error(ErrorCode::NotApplicable, "projection needs at least two channels");
    if (residuals.length == 0)
        throw Error(ErrorCode::InvalidArgument, "projection of an empty residual block");

    Eigen::MatrixXd e(static_cast<Eigen::Index>(residuals.length), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t t = 0; t < residuals.length; ++t)
            e(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = residuals.at(c, t);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinV);
    Eigen::MatrixXd v = svd.matrixV();

    for (Eigen::Index col = 0; col < v.cols(); ++col) {
        Eigen::Index pivot = 0;
        for (Eigen::Index row = 1; row < v.rows(); ++row)
            if (std::fabs(v(row, col)) > std::fabs(v(pivot, col)))
                pivot = row;
        if (v(pivot, col) < 0.0)
            v.col(col) *= -1.0;
    }

    ProjectionMatrix q{k, std::vector<Half>(k * k)};
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            q.entries[i * k + j] = to_half(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    return q;
}

LiftingNetwork::LiftingNetwork(const ProjectionMatrix &q) : size_(q.size), flip_(q.size, 0) {
    if (q.entries.size() != q.size * q.size)
        throw Error(ErrorCode::InvalidArgument, "projection matrix is not square");

    // a = Q^T, reduced to upper-triangular form by Givens rotations G:
    //   G_m ... G_1 a = R  =>  a ~= G_1^T ... G_m^T diag(sign(R)).
    const std::size_t k = size_;
    std::vector<double> a(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a[i * k + j] = q.at(j, i);

    std::vector<Rotation> found;
    for (std::size_t col = 0; col + 1 < k; ++col) {
        for (std::size_t row = col + 1; row < k; ++row) {
            const double x = a[col * k + col];
            const double y = a[row * k + col];
            if (y == 0.0)
                continue;
            const double r = std::sqrt(x * x + y * y);
            const double c = x / r;
            const double s = y / r;
            for (std::size_t l = 0; l < k; ++l) {
                const double top = a[col * k + l];
                const double bottom = a[row * k + l];
                a[col * k + l] = c * top + s * bottom;
                a[row * k + l] = c * bottom - s * top;
            }
            // G^T rotates (x_col, x_row) by [[c, -s], [s, c]]. Angles past
            // +-pi/2 are folded into a negation so the shear stays bounded.
            Rotation rot;
            rot.i = static_cast<std::uint32_t>(col);
            rot.j = static_cast<std::uint32_t>(row);
            rot.negate = c < 0.0;
            const double cc = rot.negate ? -c : c;
            const double ss = rot.negate ? -s : s;
            rot.shear = (cc - 1.0) / ss;
            rot.sine = ss;
            found.push_back(rot);
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        flip_[i] = a[i * k + i] < 0.0 ? 1 : 0;

    rotations_.assign(found.rbegin(), found.rend());
}

void LiftingNetwork::forward(std::int64_t *x) const {
    for (std::size_t i = 0; i < size_; ++i)
        if (flip_[i])
            x[i] = -x[i];
    for (const Rotation &rot : rotations_) {
        std::int64_t &u = x[rot.i];
        std::int64_t &w = x[rot.j];
        if (rot.negate) {
            u = -u;
            w = -w;
        }
        u += round_half_away(rot.shear * static_cast<double>(w));
        w += round_half_away(rot.sine * static_cast<double>(u));
        u += round_half_away(rot.shear * static_cast<double>(w));
    }
}

void LiftingNetwork::inverse(std::int64_t *x) const {
    for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) {
        const Rotation &rot = *it;
        std::int64_t &u = x[rot.i];
        std::int64_t &w = x[rot.j];
        u -= round_half_away(rot.shear * static_cast<double>(w));
        w -= round_half_away(rot.sine * static_cast<double>(u));
        u -= round_half_away(rot.shear * static_cast<double>(w));
        if (rot.negate) {
            u = -u;
            w = -w;
        }
    }
    for (std::size_t i = 0; i < size_; ++i)
        if (flip_[i])
            x[i] = -x[i];
}

namespace {

template <typename Step>
ResidualBlock apply(const ResidualBlock &in, const ProjectionMatrix &q, Step step) {
    if (in.channels != q.size)
        throw Error(ErrorCode::InvalidArgument, "projection size does not match residual channels");
    const LiftingNetwork net(q);
    ResidualBlock out(in.channels, in.length);
    std::vector<std::int64_t> x(in.channels);
    for (std::size_t t = 0; t < in.length; ++t) {
        for (std::size_t c = 0; c < in.channels; ++c)
            x[c] = in.at(c, t);
        step(net, x.data());
        for (std::size_t c = 0; c < in.channels; ++c) {
            if (x[c] > INT32_MAX || x[c] < INT32_MIN)
                throw Error(ErrorCode::Stream, "projected value outside the 32-bit range");
            out.at(c, t) = static_cast<std::int32_t>(x[c]);
        }
    }
    return out;
}

} // namespace

ResidualBlock forward_project(const ResidualBlock &residuals, const ProjectionMatrix &q) {
    return apply(residuals, q, [](const LiftingNetwork &n, std::int64_t *x) { n.forward(x); });
}

ResidualBlock inverse_project(const ResidualBlock &projected, const ProjectionMatrix &q) {
    return apply(projected, q, [](const LiftingNetwork &n, std::int64_t *x) { n.inverse(x); });
}

} // namespace mlc::transform
