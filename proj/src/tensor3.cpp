#include "tensorfun/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tensorfun/spectral.hpp"

namespace tensorfun {

Tensor3::Tensor3(Index n1, Index n2, Index p) : n1_(n1), n2_(n2), p_(p) {
    if (n1 < 0 || n2 < 0 || p < 0)
        throw DimensionError("Tensor3: negative dimension");
    data_.assign(static_cast<std::size_t>(n1 * n2 * p), Scalar(0.0));
}

Tensor3 Tensor3::from_slices(const std::vector<Matrix>& slices) {
    if (slices.empty())
        throw DimensionError("Tensor3::from_slices: no slices");
    const Index n1 = slices.front().rows();
    const Index n2 = slices.front().cols();
    Tensor3 t(n1, n2, static_cast<Index>(slices.size()));
    for (Index k = 0; k < t.depth(); ++k) {
        const auto& s = slices[static_cast<std::size_t>(k)];
        if (s.rows() != n1 || s.cols() != n2)
            throw DimensionError("Tensor3::from_slices: slice " +
                                 std::to_string(k) + " has a different shape");
        t.slice(k) = s;
    }
    return t;
}

Tensor3 Tensor3::from_real_slices(const std::vector<RealMatrix>& slices) {
    std::vector<Matrix> c;
    c.reserve(slices.size());
    for (const auto& s : slices)
        c.push_back(to_complex(s));
    return from_slices(c);
}

Eigen::Map<Matrix> Tensor3::slice(Index k) {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
}

Eigen::Map<const Matrix> Tensor3::slice(Index k) const {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
}

double Tensor3::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_)
        s += std::norm(z);
    return std::sqrt(s);
}

double Tensor3::max_imag() const {
    double m = 0.0;
    for (const auto& z : data_)
        m = std::max(m, std::abs(z.imag()));
    return m;
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
    if (!same_shape(other))
        throw DimensionError("Tensor3: shape mismatch in +");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
    if (!same_shape(other))
        throw DimensionError("Tensor3: shape mismatch in -");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

Tensor3& Tensor3::operator*=(Scalar alpha) {
    for (auto& z : data_)
        z *= alpha;
    return *this;
}

bool Tensor3::operator==(const Tensor3& other) const {
    return same_shape(other) && data_ == other.data_;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(Scalar alpha, Tensor3 a) { return a *= alpha; }

BlockVector::BlockVector(Matrix data, Index block_height)
    : data_(std::move(data)), block_height_(block_height) {
    if (block_height_ <= 0 || data_.rows() % block_height_ != 0)
        throw DimensionError("BlockVector: " + std::to_string(data_.rows()) +
                             " rows are not divisible by block height " +
                             std::to_string(block_height_));
}

BlockVector BlockVector::zero(Index block_height, Index block_count, Index cols) {
    return {Matrix::Zero(block_height * block_count, cols), block_height};
}

FDiagonalTensor FDiagonalTensor::from_tensor(const Tensor3& t) {
    if (t.rows() != t.cols())
        throw DimensionError("FDiagonalTensor: faces must be square");
    Matrix tubes(t.rows(), t.depth());
    for (Index k = 0; k < t.depth(); ++k)
        for (Index j = 0; j < t.cols(); ++j)
            for (Index i = 0; i < t.rows(); ++i) {
                if (i == j)
                    tubes(i, k) = t(i, i, k);
                else if (t(i, j, k) != Scalar(0.0))
                    throw DimensionError("FDiagonalTensor: slice " +
                                         std::to_string(k) + " is not diagonal");
            }
    return FDiagonalTensor(std::move(tubes));
}

Tensor3 FDiagonalTensor::tube(Index i) const {
    Tensor3 t(1, 1, depth());
    for (Index k = 0; k < depth(); ++k)
        t(0, 0, k) = tubes_(i, k);
    return t;
}

Tensor3 FDiagonalTensor::to_tensor() const {
    Tensor3 t(size(), size(), depth());
    for (Index k = 0; k < depth(); ++k)
        for (Index i = 0; i < size(); ++i)
            t(i, i, k) = tubes_(i, k);
    return t;
}

Matrix to_complex(const RealMatrix& m) { return m.cast<Scalar>(); }

BlockVector unfold(const Tensor3& a) {
    Matrix v(a.rows() * a.depth(), a.cols());
    for (Index k = 0; k < a.depth(); ++k)
        v.middleRows(k * a.rows(), a.rows()) = a.slice(k);
    return {std::move(v), std::max<Index>(a.rows(), 1)};
}

Tensor3 fold(const Matrix& v, Index p) {
    if (p <= 0 || v.rows() % p != 0)
        throw DimensionError("fold: " + std::to_string(v.rows()) +
                             " rows are not divisible by p = " + std::to_string(p));
    const Index n = v.rows() / p;
    Tensor3 t(n, v.cols(), p);
    for (Index k = 0; k < p; ++k)
        t.slice(k) = v.middleRows(k * n, n);
    return t;
}

Tensor3 fold(const BlockVector& v, Index p) { return fold(v.matrix(), p); }

Matrix bcirc(const Tensor3& a) {
    const Index n1 = a.rows(), n2 = a.cols(), p = a.depth();
    Matrix m(n1 * p, n2 * p);
    for (Index bi = 0; bi < p; ++bi)
        for (Index bj = 0; bj < p; ++bj)
            m.block(bi * n1, bj * n2, n1, n2) = a.slice(((bi - bj) % p + p) % p);
    return m;
}

BlockVector block_unit_vector(Index k, Index n, Index p) {
    if (k < 1 || k > p)
        throw DimensionError("block_unit_vector: k = " + std::to_string(k) +
                             " outside 1.." + std::to_string(p));
    BlockVector e = BlockVector::zero(n, p, n);
    e.block(k - 1).setIdentity();
    return e;
}

Tensor3 identity_tensor(Index n, Index p) {
    if (n < 1 || p < 1)
        throw DimensionError("identity_tensor: n and p must be positive");
    Tensor3 t(n, n, p);
    t.slice(0).setIdentity();
    return t;
}

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
    if (a.cols() != b.rows() || a.depth() != b.depth())
        throw DimensionError("t_product: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + "x" +
                             std::to_string(a.depth()) + " * " +
                             std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()) + "x" +
                             std::to_string(b.depth()));
    const Index p = a.depth();
    Tensor3 c(a.rows(), b.cols(), p);
    // C^(i) = sum_j A^((i - j) mod p) B^(j)
    for (Index i = 0; i < p; ++i) {
        auto ci = c.slice(i);
        for (Index j = 0; j < p; ++j)
            ci.noalias() += a.slice(((i - j) % p + p) % p) * b.slice(j);
    }
    return c;
}

Tensor3 t_transpose(const Tensor3& a) {
    const Index p = a.depth();
    Tensor3 t(a.cols(), a.rows(), p);
    for (Index k = 0; k < p; ++k)
        t.slice(k) = a.slice((p - k) % p).adjoint();
    return t;
}

Tensor3 t_power(const Tensor3& a, int j) {
    if (a.rows() != a.cols())
        throw DimensionError("t_power: faces must be square");
    if (j < 0)
        throw DimensionError("t_power: negative exponent");
    Tensor3 r = identity_tensor(a.rows(), a.depth());
    for (int i = 0; i < j; ++i)
        r = t_product(a, r);
    return r;
}

Tensor3 lateral_slice(const Tensor3& a, Index j) {
    if (j < 0 || j >= a.cols())
        throw DimensionError("lateral_slice: column " + std::to_string(j) + " out of range");
    Tensor3 t(a.rows(), 1, a.depth());
    for (Index k = 0; k < a.depth(); ++k)
        t.slice(k) = a.slice(k).col(j);
    return t;
}

Tensor3 shift_slices(const Tensor3& a, Index shift) {
    const Index p = a.depth();
    Tensor3 t(a.rows(), a.cols(), p);
    for (Index k = 0; k < p; ++k)
        t.slice(((k + shift) % p + p) % p) = a.slice(k);
    return t;
}

std::vector<RealMatrix> cast_real(const Tensor3& t, double rel_tol) {
    const double norm = t.frobenius_norm();
    const double imag = t.max_imag();
    if (imag > rel_tol * norm)
        throw RealCastError("cast_real: max |Im| = " + std::to_string(imag) +
                            " exceeds " + std::to_string(rel_tol) + " * ||T||_F");
    std::vector<RealMatrix> out;
    out.reserve(static_cast<std::size_t>(t.depth()));
    for (Index k = 0; k < t.depth(); ++k)
        out.push_back(t.slice(k).real());
    return out;
}

namespace {

bool is_diagonal(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Scalar(0.0))
                return false;
    return true;
}

}  // namespace

TensorEigen t_eig_facewise(const Tensor3& a) {
    if (a.rows() != a.cols())
        throw DimensionError("t_eig_facewise: faces must be square");
    const Index n = a.rows(), p = a.depth();
    const FaceDiagonalization fd = face_diagonalize(a);

    std::vector<Matrix> x_faces, xinv_faces;
    Matrix eig_tubes(n, p);
    x_faces.reserve(static_cast<std::size_t>(p));
    xinv_faces.reserve(static_cast<std::size_t>(p));
    for (Index k = 0; k < p; ++k) {
        const Matrix& face = fd.face(k);
        if (is_diagonal(face)) {
            x_faces.push_back(Matrix::Identity(n, n));
            xinv_faces.push_back(Matrix::Identity(n, n));
            eig_tubes.col(k) = face.diagonal();
            continue;
        }
        Eigen::ComplexEigenSolver<Matrix> es(face);
        if (es.info() != Eigen::Success)
            throw DecompositionError("t_eig_facewise: eigensolver failed on face " +
                                     std::to_string(k));
        Eigen::PartialPivLU<Matrix> lu(es.eigenvectors());
        const double rcond = lu.rcond();
        if (!(rcond > 1e-13))
            throw DecompositionError(
                "t_eig_facewise: Fourier face " + std::to_string(k) +
                " is numerically defective (rcond of eigenvectors " +
                std::to_string(rcond) + ")");
        x_faces.push_back(es.eigenvectors());
        xinv_faces.push_back(lu.inverse());
        eig_tubes.col(k) = es.eigenvalues();
    }

    // Eigenvalue tubes are transformed back the same way as the faces.
    std::vector<Matrix> d_faces;
    d_faces.reserve(static_cast<std::size_t>(p));
    for (Index k = 0; k < p; ++k)
        d_faces.push_back(eig_tubes.col(k).asDiagonal());
    Tensor3 d = inverse_face_transform(d_faces);

    return {inverse_face_transform(x_faces), FDiagonalTensor::from_tensor(d),
            inverse_face_transform(xinv_faces)};
}

}  // namespace tensorfun
