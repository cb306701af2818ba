#pragma once

// Seeded generators and independent reference implementations for tests.
// Nothing here calls into the code paths it is used to check.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tensorfun/tensor3.hpp"

namespace testsupport {

using tensorfun::Index;
using tensorfun::Matrix;
using tensorfun::RealMatrix;
using tensorfun::Scalar;
using tensorfun::Tensor3;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    Index integer(Index lo, Index hi) {
        return std::uniform_int_distribution<Index>(lo, hi)(engine_);
    }
    Scalar complex() { return {normal(), normal()}; }

    Matrix matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i)
                m(i, j) = complex();
        return m;
    }
    RealMatrix real_matrix(Index rows, Index cols) {
        RealMatrix m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i)
                m(i, j) = normal();
        return m;
    }
    Tensor3 tensor(Index n1, Index n2, Index p, double scale = 1.0) {
        Tensor3 t(n1, n2, p);
        for (auto& z : t.data())
            z = scale * complex();
        return t;
    }
    Tensor3 real_tensor(Index n1, Index n2, Index p, double scale = 1.0) {
        Tensor3 t(n1, n2, p);
        for (auto& z : t.data())
            z = scale * normal();
        return t;
    }
    Tensor3 symmetric_tensor(Index n, Index p, double scale = 1.0) {
        Tensor3 t(n, n, p);
        for (Index k = 0; k < p; ++k) {
            const RealMatrix r = real_matrix(n, n);
            const RealMatrix s = 0.5 * scale * (r + r.transpose());
            for (Index j = 0; j < n; ++j)
                for (Index i = 0; i < n; ++i)
                    t(i, j, k) = s(i, j);
        }
        return t;
    }
    Tensor3 fdiagonal_tensor(Index n, Index p, double scale = 1.0) {
        Tensor3 t(n, n, p);
        for (Index k = 0; k < p; ++k)
            for (Index i = 0; i < n; ++i)
                t(i, i, k) = scale * complex();
        return t;
    }
    /// Unitary matrix from the QR factor of a Gaussian matrix.
    Matrix unitary(Index n) {
        Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
        return qr.householderQ() * Matrix::Identity(n, n);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline double rel_err(const Matrix& x, const Matrix& ref) {
    const double r = ref.norm();
    return (x - ref).norm() / (r > 0 ? r : 1.0);
}

inline double rel_err(const Tensor3& x, const Tensor3& ref) {
    double diff = 0.0, base = 0.0;
    for (std::size_t i = 0; i < x.data().size(); ++i) {
        diff += std::norm(x.data()[i] - ref.data()[i]);
        base += std::norm(ref.data()[i]);
    }
    return std::sqrt(diff) / (base > 0 ? std::sqrt(base) : 1.0);
}

/// Block (i, j) of bcirc(A) is slice (i - j) mod p, built entry by entry.
inline Matrix bcirc_oracle(const Tensor3& a) {
    const Index n1 = a.rows(), n2 = a.cols(), p = a.depth();
    Matrix m(n1 * p, n2 * p);
    for (Index bi = 0; bi < p; ++bi)
        for (Index bj = 0; bj < p; ++bj) {
            const Index k = ((bi - bj) % p + p) % p;
            for (Index i = 0; i < n1; ++i)
                for (Index j = 0; j < n2; ++j)
                    m(bi * n1 + i, bj * n2 + j) = a(i, j, k);
        }
    return m;
}

inline Matrix unfold_oracle(const Tensor3& a) {
    Matrix m(a.rows() * a.depth(), a.cols());
    for (Index k = 0; k < a.depth(); ++k)
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                m(k * a.rows() + i, j) = a(i, j, k);
    return m;
}

inline Tensor3 fold_oracle(const Matrix& m, Index p) {
    const Index n1 = m.rows() / p;
    Tensor3 t(n1, m.cols(), p);
    for (Index k = 0; k < p; ++k)
        for (Index i = 0; i < n1; ++i)
            for (Index j = 0; j < m.cols(); ++j)
                t(i, j, k) = m(k * n1 + i, j);
    return t;
}

inline Tensor3 t_product_oracle(const Tensor3& a, const Tensor3& b) {
    return fold_oracle(bcirc_oracle(a) * unfold_oracle(b), a.depth());
}

/// f(M) = X f(Lambda) X^-1 from a dense eigendecomposition; valid for
/// diagonalizable M with a well-conditioned eigenvector matrix.
template <class F>
Matrix funm_eig_oracle(const Matrix& m, F f) {
    Eigen::ComplexEigenSolver<Matrix> es(m);
    const Matrix& x = es.eigenvectors();
    Matrix fx = x;
    for (Index j = 0; j < m.rows(); ++j)
        fx.col(j) *= f(es.eigenvalues()(j));
    return fx * x.inverse();
}

/// Dense f(bcirc(A)) E_1 ... folded back, with the eigendecomposition oracle.
template <class F>
Tensor3 t_function_oracle(const Tensor3& a, const Tensor3& b, F f) {
    return fold_oracle(funm_eig_oracle(bcirc_oracle(a), f) * unfold_oracle(b), a.depth());
}

/// Eigenvalues sorted by (real, imag) after rounding away noise below 1e-9,
/// so that multisets can be compared elementwise.
inline std::vector<Scalar> sorted_spectrum(std::vector<Scalar> v) {
    std::sort(v.begin(), v.end(), [](Scalar a, Scalar b) {
        if (std::abs(a.real() - b.real()) > 1e-9)
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

inline std::vector<Scalar> eigenvalues(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

/// Greedy nearest matching of two multisets; returns the largest distance.
inline double multiset_distance(std::vector<Scalar> a, std::vector<Scalar> b) {
    if (a.size() != b.size())
        return INFINITY;
    double worst = 0.0;
    for (const auto& z : a) {
        auto best = b.begin();
        for (auto it = b.begin(); it != b.end(); ++it)
            if (std::abs(*it - z) < std::abs(*best - z))
                best = it;
        worst = std::max(worst, std::abs(*best - z));
        b.erase(best);
    }
    return worst;
}

/// Circulant matrix whose first column is the tube c.
inline Matrix circulant(const std::vector<Scalar>& c) {
    const Index p = static_cast<Index>(c.size());
    Matrix m(p, p);
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j)
            m(i, j) = c[static_cast<std::size_t>(((i - j) % p + p) % p)];
    return m;
}

}  // namespace testsupport
