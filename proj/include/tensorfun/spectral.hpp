#pragma once

#include <vector>

#include "tensorfun/dense_function.hpp"
#include "tensorfun/tensor3.hpp"

namespace tensorfun {

/**
 * The Fourier-domain faces D_1..D_p of bcirc(A):
 *
 *   (F_p (x) I_n) bcirc(A) (F_p^* (x) I_n) = blockdiag(D_1, ..., D_p)
 *
 * with F_p the unitary DFT, omega = exp(-2 pi i / p). Faces are stored in
 * natural FFT-bin order (face(0) is the sum of all frontal slices).
 */
class FaceDiagonalization {
public:
    FaceDiagonalization() = default;
    explicit FaceDiagonalization(std::vector<Matrix> faces);

    Index size() const noexcept { return n_; }
    Index dft_size() const noexcept { return static_cast<Index>(faces_.size()); }
    const Matrix& face(Index k) const { return faces_[static_cast<std::size_t>(k)]; }
    const std::vector<Matrix>& faces() const noexcept { return faces_; }

    /// blockdiag(D_1, ..., D_p) as a dense np x np matrix.
    Matrix block_diagonal() const;

private:
    std::vector<Matrix> faces_;
    Index n_ = 0;
};

/// Unnormalized DFT of every tube fiber; face k of the result is
/// sum_j A^(j) omega^(j k). Works for any n1 x n2 x p.
std::vector<Matrix> face_transform(const Tensor3& a);
/// Inverse of face_transform.
Tensor3 inverse_face_transform(const std::vector<Matrix>& faces);

/// Requires square faces.
FaceDiagonalization face_diagonalize(const Tensor3& a);

/// Dense (F_p (x) I_n) with the unitary 1/sqrt(p) scaling; test oracle only.
Matrix dft_block_matrix(Index n, Index p);

/// bcirc(a) * x without forming bcirc(a).
BlockVector apply_bcirc(const Tensor3& a, const BlockVector& x);

/**
 * Reusable x -> bcirc(A) x. The Fourier faces are computed once; p < 4
 * falls back to the direct block-circulant convolution.
 */
class BcircOperator {
public:
    explicit BcircOperator(Tensor3 a);

    BlockVector operator()(const BlockVector& x) const;

    Index block_height() const noexcept { return a_.rows(); }
    Index block_count() const noexcept { return a_.depth(); }
    /// ||bcirc(A)||_F = sqrt(p) ||A||_F.
    double frobenius_norm() const;
    const Tensor3& tensor() const noexcept { return a_; }

private:
    Tensor3 a_;
    std::vector<Matrix> faces_;
    bool use_fft_;
};

/// x -> blockdiag(D_1, ..., D_p) x, the Fourier-domain form of bcirc(A).
class FourierFaceOperator {
public:
    explicit FourierFaceOperator(FaceDiagonalization faces);

    BlockVector operator()(const BlockVector& x) const;

    double frobenius_norm() const;
    const FaceDiagonalization& faces() const noexcept { return faces_; }

private:
    FaceDiagonalization faces_;
};

/// (F_p (x) I_n) x with the unnormalized DFT, on the block rows of x.
BlockVector to_fourier(const BlockVector& x);
/// Inverse of to_fourier.
BlockVector from_fourier(const BlockVector& x);

/**
 * f(A) * B evaluated face by face: transform the tubes of B, multiply each
 * Fourier face by funm(f, D_k), transform back. Faces are evaluated
 * independently (concurrently when hardware allows) into fixed slots.
 */
Tensor3 t_function_facewise(const ScalarFunction& f, const Tensor3& a, const Tensor3& b);

/// f(D_k) for every Fourier face (the building block of the above).
std::vector<Matrix> face_functions(const ScalarFunction& f, const FaceDiagonalization& d);

/// Union of the eigenvalues of all Fourier faces, i.e. spec(bcirc(A)),
/// in face order.
std::vector<Scalar> spectrum_bcirc(const Tensor3& a);

}  // namespace tensorfun
