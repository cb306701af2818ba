#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tensorfun/errors.hpp"

namespace tensorfun {

using Scalar = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/**
 * Dense third-order tensor of size n1 x n2 x p.
 *
 * Storage is slice-major: the frontal slices A(:,:,k) are contiguous and
 * each slice is column-major, so slice(k) is a zero-copy Eigen view.
 */
class Tensor3 {
public:
    Tensor3() = default;

    /// Zero tensor.
    Tensor3(Index n1, Index n2, Index p);

    /// Stacks the given frontal slices, which must all share one shape.
    static Tensor3 from_slices(const std::vector<Matrix>& slices);

    /// Embeds real frontal slices.
    static Tensor3 from_real_slices(const std::vector<RealMatrix>& slices);

    Index rows() const noexcept { return n1_; }
    Index cols() const noexcept { return n2_; }
    Index depth() const noexcept { return p_; }
    Index size() const noexcept { return n1_ * n2_ * p_; }

    Scalar& operator()(Index i, Index j, Index k) {
        return data_[offset(i, j, k)];
    }
    const Scalar& operator()(Index i, Index j, Index k) const {
        return data_[offset(i, j, k)];
    }

    /// Frontal slice k (0-based).
    Eigen::Map<Matrix> slice(Index k);
    Eigen::Map<const Matrix> slice(Index k) const;

    std::span<Scalar> data() noexcept { return data_; }
    std::span<const Scalar> data() const noexcept { return data_; }

    bool same_shape(const Tensor3& other) const noexcept {
        return n1_ == other.n1_ && n2_ == other.n2_ && p_ == other.p_;
    }

    double frobenius_norm() const;
    /// Largest |Im| over all entries.
    double max_imag() const;

    Tensor3& operator+=(const Tensor3& other);
    Tensor3& operator-=(const Tensor3& other);
    Tensor3& operator*=(Scalar alpha);

    bool operator==(const Tensor3& other) const;

private:
    std::size_t offset(Index i, Index j, Index k) const {
        return static_cast<std::size_t>(k * n1_ * n2_ + j * n1_ + i);
    }

    Index n1_ = 0;
    Index n2_ = 0;
    Index p_ = 0;
    std::vector<Scalar> data_;
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(Scalar alpha, Tensor3 a);

/**
 * Tall block column of p blocks, each of height n (an np x s matrix).
 * Holds unfold(B), E_k and the Krylov basis blocks.
 */
class BlockVector {
public:
    BlockVector() = default;
    BlockVector(Matrix data, Index block_height);

    static BlockVector zero(Index block_height, Index block_count, Index cols);

    const Matrix& matrix() const noexcept { return data_; }
    Matrix& matrix() noexcept { return data_; }

    Index block_height() const noexcept { return block_height_; }
    Index block_count() const noexcept {
        return block_height_ == 0 ? 0 : data_.rows() / block_height_;
    }
    Index rows() const noexcept { return data_.rows(); }
    Index cols() const noexcept { return data_.cols(); }

    /// Block k (0-based), an n x s view.
    auto block(Index k) { return data_.middleRows(k * block_height_, block_height_); }
    auto block(Index k) const {
        return data_.middleRows(k * block_height_, block_height_);
    }

private:
    Matrix data_;
    Index block_height_ = 0;
};

/**
 * Tensor whose frontal slices are all diagonal. Tube d_i = D(i,i,:) is row i
 * of tubes().
 */
class FDiagonalTensor {
public:
    FDiagonalTensor() = default;
    /// tubes is n x p.
    explicit FDiagonalTensor(Matrix tubes) : tubes_(std::move(tubes)) {}

    /// Extracts the diagonal tubes; throws if any off-diagonal entry is nonzero.
    static FDiagonalTensor from_tensor(const Tensor3& t);

    Index size() const noexcept { return tubes_.rows(); }
    Index depth() const noexcept { return tubes_.cols(); }
    const Matrix& tubes() const noexcept { return tubes_; }
    /// d_i as a 1 x 1 x p tensor.
    Tensor3 tube(Index i) const;
    Tensor3 to_tensor() const;

private:
    Matrix tubes_;
};

Matrix to_complex(const RealMatrix& m);

BlockVector unfold(const Tensor3& a);
Tensor3 fold(const BlockVector& v, Index p);
Tensor3 fold(const Matrix& v, Index p);
Matrix bcirc(const Tensor3& a);
/// E_k with 1-based k: the k-th n x n block is the identity.
BlockVector block_unit_vector(Index k, Index n, Index p);

Tensor3 identity_tensor(Index n, Index p);
Tensor3 t_product(const Tensor3& a, const Tensor3& b);
Tensor3 t_transpose(const Tensor3& a);
/// A^j under the t-product, with A^0 = I.
Tensor3 t_power(const Tensor3& a, int j);
/// Lateral slice A(:, j, :) as an n1 x 1 x p tensor.
Tensor3 lateral_slice(const Tensor3& a, Index j);
/// Circularly shifts the frontal slices down by `shift` positions.
Tensor3 shift_slices(const Tensor3& a, Index shift);

/// Real part of t; throws RealCastError when max |Im| > tol * ||t||_F.
std::vector<RealMatrix> cast_real(const Tensor3& t, double rel_tol = 1e-10);

struct TensorEigen {
    Tensor3 vectors;
    FDiagonalTensor values;
    Tensor3 inverse_vectors;
};

/// A = X * D * X^{-1} with D f-diagonal, built from the Fourier-domain faces.
TensorEigen t_eig_facewise(const Tensor3& a);

}  // namespace tensorfun
