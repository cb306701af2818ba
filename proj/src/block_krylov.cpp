#include "tensorfun/block_krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tensorfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

std::string to_string(InnerProductKind kind) {
    return kind == InnerProductKind::classical ? "classical" : "global";
}

InnerProductKind parse_inner_product_kind(const std::string& name) {
    if (name == "classical")
        return InnerProductKind::classical;
    if (name == "global")
        return InnerProductKind::global;
    throw ValidationError("unknown inner product scheme '" + name + "'");
}

InnerProductScheme::InnerProductScheme(InnerProductKind kind, Index block_width)
    : kind_(kind), s_(block_width) {
    if (s_ < 1)
        throw DimensionError("InnerProductScheme: block width must be positive");
}

Matrix InnerProductScheme::ip_coefficients(const BlockVector& x,
                                           const BlockVector& y) const {
    if (x.rows() != y.rows() || x.cols() != s_ || y.cols() != s_)
        throw DimensionError("ip: block vectors are not conformal");
    if (kind_ == InnerProductKind::classical)
        return x.matrix().adjoint() * y.matrix();
    // tr(X^* Y) without forming X^* Y.
    const Scalar tr = (x.matrix().conjugate().array() * y.matrix().array()).sum();
    return Matrix::Constant(1, 1, tr / static_cast<double>(s_));
}

Matrix InnerProductScheme::ip(const BlockVector& x, const BlockVector& y) const {
    return expand(ip_coefficients(x, y));
}

Matrix InnerProductScheme::expand(const Matrix& c) const {
    if (kind_ == InnerProductKind::classical)
        return c;
    return c(0, 0) * Matrix::Identity(s_, s_);
}

BlockVector InnerProductScheme::times(const BlockVector& v, const Matrix& c) const {
    if (kind_ == InnerProductKind::classical)
        return {v.matrix() * c, v.block_height()};
    return {v.matrix() * c(0, 0), v.block_height()};
}

InnerProductScheme::Normalized InnerProductScheme::normalize(const BlockVector& x,
                                                             double zero_threshold) const {
    if (x.cols() != s_)
        throw DimensionError("normalize: block vector has the wrong width");
    const double norm = x.matrix().norm();
    if (!(norm > zero_threshold) || norm == 0.0)
        throw BreakdownError("normalize: block vector is numerically zero (||X||_F = " +
                                 std::to_string(norm) + ")",
                             0);

    if (kind_ == InnerProductKind::global) {
        const double scale = norm / std::sqrt(static_cast<double>(s_));
        return {BlockVector(x.matrix() / scale, x.block_height()),
                Matrix::Constant(1, 1, Scalar(scale))};
    }

    if (x.rows() < s_)
        throw BreakdownError("normalize: fewer rows than columns", 0);
    Eigen::HouseholderQR<Matrix> qr(x.matrix());
    Matrix r = qr.matrixQR().topRows(s_).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Matrix>(r).singularValues();
    if (sv(s_ - 1) <= static_cast<double>(s_) * kEps * sv(0))
        throw BreakdownError("normalize: block vector is numerically rank deficient "
                             "(sigma_min/sigma_max = " +
                                 std::to_string(sv(s_ - 1) / sv(0)) + ")",
                             0);
    Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), s_);
    for (Index i = 0; i < s_; ++i) {
        const double a = std::abs(r(i, i));
        const Scalar phase = a == 0.0 ? Scalar(1.0) : r(i, i) / a;
        r.row(i) *= std::conj(phase);
        q.col(i) *= phase;
        r(i, i) = r(i, i).real();
    }
    return {BlockVector(std::move(q), x.block_height()), std::move(r)};
}

BlockArnoldiDecomposition::BlockArnoldiDecomposition(InnerProductScheme scheme,
                                                     std::vector<BlockVector> basis,
                                                     Matrix hessenberg, Matrix normalization,
                                                     std::optional<int> breakdown_step)
    : scheme_(scheme), basis_(std::move(basis)), hessenberg_(std::move(hessenberg)),
      normalization_(std::move(normalization)), breakdown_(breakdown_step),
      steps_(static_cast<int>(hessenberg_.cols() / scheme.coefficient_size())) {}

Matrix BlockArnoldiDecomposition::basis_matrix(int k) const {
    const Index rows = basis_.front().rows(), s = scheme_.block_width();
    Matrix v(rows, s * k);
    for (int j = 0; j < k; ++j)
        v.middleCols(j * s, s) = basis_[static_cast<std::size_t>(j)].matrix();
    return v;
}

Matrix BlockArnoldiDecomposition::hessenberg() const {
    const Index n = hessenberg_.cols();
    return hessenberg_.topRows(n);
}

Matrix BlockArnoldiDecomposition::tail() const {
    const Index c = scheme_.coefficient_size();
    return hessenberg_.bottomRightCorner(c, c);
}

Matrix BlockArnoldiDecomposition::block_hessenberg() const {
    const Matrix h = hessenberg();
    if (scheme_.kind() == InnerProductKind::classical)
        return h;
    const Index s = scheme_.block_width();
    Matrix out = Matrix::Zero(h.rows() * s, h.cols() * s);
    for (Index i = 0; i < h.rows(); ++i)
        for (Index j = 0; j < h.cols(); ++j)
            out.block(i * s, j * s, s, s).diagonal().setConstant(h(i, j));
    return out;
}

double BlockArnoldiDecomposition::arnoldi_residual(const BlockOperator& a) const {
    const Index s = scheme_.block_width();
    const Matrix vm = basis_matrix(steps_);
    Matrix av(vm.rows(), vm.cols());
    for (int k = 0; k < steps_; ++k)
        av.middleCols(k * s, s) = a(basis_[static_cast<std::size_t>(k)]).matrix();
    Matrix r = av - vm * block_hessenberg();
    if (basis_.size() > static_cast<std::size_t>(steps_))
        r.rightCols(s) -= basis_.back().matrix() * scheme_.expand(tail());
    return r.norm();
}

double BlockArnoldiDecomposition::orthonormality_error() const {
    const Index s = scheme_.block_width();
    double worst = 0.0;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = i; j < basis_.size(); ++j) {
            Matrix g = scheme_.ip(basis_[i], basis_[j]);
            if (i == j)
                g -= Matrix::Identity(s, s);
            worst = std::max(worst, g.norm());
        }
    return worst;
}

BlockVector BlockArnoldiDecomposition::combine(const Matrix& y) const {
    const Index c = scheme_.coefficient_size();
    const Index k = y.rows() / c;
    if (y.rows() % c != 0 || k > static_cast<Index>(basis_.size()))
        throw DimensionError("combine: coefficient block does not match the basis");
    const BlockVector& v0 = basis_.front();
    Matrix out = Matrix::Zero(v0.rows(), scheme_.kind() == InnerProductKind::classical
                                             ? y.cols()
                                             : v0.cols() * y.cols());
    for (Index j = 0; j < k; ++j) {
        const Matrix& vj = basis_[static_cast<std::size_t>(j)].matrix();
        if (scheme_.kind() == InnerProductKind::classical) {
            out.noalias() += vj * y.middleRows(j * c, c);
        } else {
            for (Index col = 0; col < y.cols(); ++col)
                out.middleCols(col * vj.cols(), vj.cols()) += y(j, col) * vj;
        }
    }
    return {std::move(out), v0.block_height()};
}

BlockArnoldiDecomposition block_arnoldi(const BlockOperator& a, const BlockVector& b,
                                        const InnerProductScheme& scheme, int m,
                                        const ArnoldiOptions& options) {
    if (m < 1)
        throw DimensionError("block_arnoldi: m must be at least 1");
    if (b.cols() != scheme.block_width())
        throw DimensionError("block_arnoldi: block width does not match the scheme");
    if (scheme.kind() == InnerProductKind::classical && m * b.cols() > b.rows())
        throw DimensionError("block_arnoldi: m*s = " + std::to_string(m * b.cols()) +
                             " exceeds the dimension " + std::to_string(b.rows()));

    const Index c = scheme.coefficient_size();
    const double rows_sqrt = std::sqrt(static_cast<double>(b.rows()));

    auto first = scheme.normalize(b);
    std::vector<BlockVector> basis;
    basis.reserve(static_cast<std::size_t>(m) + 1);
    basis.push_back(std::move(first.q));
    Matrix h = Matrix::Zero((m + 1) * c, m * c);
    double norm_estimate = options.operator_norm;

    for (int k = 0; k < m; ++k) {
        const BlockVector& vk = basis[static_cast<std::size_t>(k)];
        BlockVector w = a(vk);
        if (w.rows() != vk.rows() || w.cols() != vk.cols())
            throw DimensionError("block_arnoldi: operator changed the block shape");
        const double vk_norm = vk.matrix().norm();
        if (options.operator_norm <= 0.0)
            norm_estimate = std::max(norm_estimate, rows_sqrt * w.matrix().norm() / vk_norm);

        for (int pass = 0; pass <= options.reorthogonalization_passes; ++pass) {
            for (int j = 0; j <= k; ++j) {
                const BlockVector& vj = basis[static_cast<std::size_t>(j)];
                const Matrix hjk = scheme.ip_coefficients(vj, w);
                w.matrix() -= scheme.times(vj, hjk).matrix();
                h.block(j * c, k * c, c, c) += hjk;
            }
        }

        try {
            auto next = scheme.normalize(w, kEps * norm_estimate * vk_norm);
            h.block((k + 1) * c, k * c, c, c) = next.scale;
            basis.push_back(std::move(next.q));
        } catch (const BreakdownError&) {
            Matrix truncated = Matrix::Zero((k + 2) * c, (k + 1) * c);
            truncated.topRows((k + 1) * c) = h.topLeftCorner((k + 1) * c, (k + 1) * c);
            return {scheme, std::move(basis), std::move(truncated), std::move(first.scale),
                    k + 1};
        }
    }
    return {scheme, std::move(basis), std::move(h), std::move(first.scale), std::nullopt};
}

}  // namespace tensorfun
