#include "tensorfun/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "parallel.hpp"

namespace tensorfun {

FaceDiagonalization::FaceDiagonalization(std::vector<Matrix> faces)
    : faces_(std::move(faces)) {
    if (!faces_.empty())
        n_ = faces_.front().rows();
    for (const auto& f : faces_)
        if (f.rows() != n_ || f.cols() != n_)
            throw DimensionError("FaceDiagonalization: faces must be n x n");
}

Matrix FaceDiagonalization::block_diagonal() const {
    const Index p = dft_size();
    Matrix m = Matrix::Zero(n_ * p, n_ * p);
    for (Index k = 0; k < p; ++k)
        m.block(k * n_, k * n_, n_, n_) = face(k);
    return m;
}

std::vector<Matrix> face_transform(const Tensor3& a) {
    Tensor3 t = a;
    detail::tube_fft(t.data(), a.rows() * a.cols(), a.depth(), false);
    std::vector<Matrix> faces;
    faces.reserve(static_cast<std::size_t>(a.depth()));
    for (Index k = 0; k < a.depth(); ++k)
        faces.emplace_back(t.slice(k));
    return faces;
}

Tensor3 inverse_face_transform(const std::vector<Matrix>& faces) {
    Tensor3 t = Tensor3::from_slices(faces);
    detail::tube_fft(t.data(), t.rows() * t.cols(), t.depth(), true);
    return t;
}

FaceDiagonalization face_diagonalize(const Tensor3& a) {
    if (a.rows() != a.cols())
        throw DimensionError("face_diagonalize: faces must be square");
    return FaceDiagonalization(face_transform(a));
}

Matrix dft_block_matrix(Index n, Index p) {
    Matrix f(p, p);
    for (Index j = 0; j < p; ++j)
        for (Index k = 0; k < p; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(p)),
                                 -2.0 * std::numbers::pi * static_cast<double>((j * k) % p) /
                                     static_cast<double>(p));
    Matrix m = Matrix::Zero(n * p, n * p);
    for (Index j = 0; j < p; ++j)
        for (Index k = 0; k < p; ++k)
            m.block(j * n, k * n, n, n) = f(j, k) * Matrix::Identity(n, n);
    return m;
}

namespace {

void check_block_vector(const Tensor3& a, const BlockVector& x) {
    if (x.block_height() != a.cols() || x.block_count() != a.depth())
        throw DimensionError("apply_bcirc: block vector has " +
                             std::to_string(x.block_count()) + " blocks of height " +
                             std::to_string(x.block_height()) + ", expected " +
                             std::to_string(a.depth()) + " of height " +
                             std::to_string(a.cols()));
}

BlockVector convolve_direct(const Tensor3& a, const BlockVector& x) {
    const Index p = a.depth();
    BlockVector y = BlockVector::zero(a.rows(), p, x.cols());
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j)
            y.block(i).noalias() += a.slice(((i - j) % p + p) % p) * x.block(j);
    return y;
}

BlockVector apply_faces(const std::vector<Matrix>& faces, Index out_rows,
                        const BlockVector& x) {
    const Index p = static_cast<Index>(faces.size());
    Tensor3 xt = fold(x, p);
    detail::tube_fft(xt.data(), xt.rows() * xt.cols(), p, false);
    Tensor3 yt(out_rows, x.cols(), p);
    for (Index k = 0; k < p; ++k)
        yt.slice(k).noalias() = faces[static_cast<std::size_t>(k)] * xt.slice(k);
    detail::tube_fft(yt.data(), yt.rows() * yt.cols(), p, true);
    return unfold(yt);
}

}  // namespace

BlockVector apply_bcirc(const Tensor3& a, const BlockVector& x) {
    check_block_vector(a, x);
    if (a.depth() < 4)
        return convolve_direct(a, x);
    return apply_faces(face_transform(a), a.rows(), x);
}

BcircOperator::BcircOperator(Tensor3 a) : a_(std::move(a)), use_fft_(a_.depth() >= 4) {
    if (use_fft_)
        faces_ = face_transform(a_);
}

BlockVector BcircOperator::operator()(const BlockVector& x) const {
    check_block_vector(a_, x);
    if (!use_fft_)
        return convolve_direct(a_, x);
    return apply_faces(faces_, a_.rows(), x);
}

double BcircOperator::frobenius_norm() const {
    return std::sqrt(static_cast<double>(a_.depth())) * a_.frobenius_norm();
}

FourierFaceOperator::FourierFaceOperator(FaceDiagonalization faces)
    : faces_(std::move(faces)) {}

BlockVector FourierFaceOperator::operator()(const BlockVector& x) const {
    const Index n = faces_.size(), p = faces_.dft_size();
    if (x.block_height() != n || x.block_count() != p)
        throw DimensionError("FourierFaceOperator: block vector shape mismatch");
    BlockVector y = BlockVector::zero(n, p, x.cols());
    for (Index k = 0; k < p; ++k)
        y.block(k).noalias() = faces_.face(k) * x.block(k);
    return y;
}

double FourierFaceOperator::frobenius_norm() const {
    double s = 0.0;
    for (const auto& f : faces_.faces())
        s += f.squaredNorm();
    return std::sqrt(s);
}

BlockVector to_fourier(const BlockVector& x) {
    const Index p = x.block_count();
    Tensor3 t = fold(x, p);
    detail::tube_fft(t.data(), t.rows() * t.cols(), p, false);
    return unfold(t);
}

BlockVector from_fourier(const BlockVector& x) {
    const Index p = x.block_count();
    Tensor3 t = fold(x, p);
    detail::tube_fft(t.data(), t.rows() * t.cols(), p, true);
    return unfold(t);
}

std::vector<Matrix> face_functions(const ScalarFunction& f, const FaceDiagonalization& d) {
    std::vector<Matrix> out(static_cast<std::size_t>(d.dft_size()));
    detail::parallel_for(out.size(), [&](std::size_t k) {
        try {
            out[k] = funm(f, d.face(static_cast<Index>(k)));
        } catch (const FunctionError& e) {
            throw FunctionError("Fourier face " + std::to_string(k) + ": " + e.what());
        }
    });
    return out;
}

Tensor3 t_function_facewise(const ScalarFunction& f, const Tensor3& a, const Tensor3& b) {
    if (a.rows() != a.cols())
        throw DimensionError("t_function_facewise: faces of A must be square");
    if (b.rows() != a.cols() || b.depth() != a.depth())
        throw DimensionError("t_function_facewise: B is not conformal with A");
    const FaceDiagonalization d = face_diagonalize(a);
    const std::vector<Matrix> fd = face_functions(f, d);
    std::vector<Matrix> bhat = face_transform(b);
    for (std::size_t k = 0; k < bhat.size(); ++k)
        bhat[k] = fd[k] * bhat[k];
    return inverse_face_transform(bhat);
}

std::vector<Scalar> spectrum_bcirc(const Tensor3& a) {
    const FaceDiagonalization d = face_diagonalize(a);
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(a.rows() * a.depth()));
    for (Index k = 0; k < d.dft_size(); ++k) {
        Eigen::ComplexEigenSolver<Matrix> es(d.face(k), false);
        if (es.info() != Eigen::Success)
            throw DecompositionError("spectrum_bcirc: eigensolver failed on face " +
                                     std::to_string(k));
        for (Index i = 0; i < es.eigenvalues().size(); ++i)
            out.push_back(es.eigenvalues()(i));
    }
    return out;
}

}  // namespace tensorfun
