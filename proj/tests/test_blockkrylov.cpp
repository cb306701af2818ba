#include <doctest.h>

#include "support.hpp"
#include "tensorfun/block_krylov.hpp"
#include "tensorfun/spectral.hpp"

using namespace tensorfun;
using testsupport::rel_err;
using testsupport::Rng;

namespace {

BlockOperator dense_operator(const Matrix& m) {
    return [m](const BlockVector& x) { return BlockVector(m * x.matrix(), x.block_height()); };
}

// Plain Arnoldi with modified Gram-Schmidt, run twice per step.
Matrix scalar_arnoldi(const Matrix& a, const Vector& b, int m, double& beta) {
    std::vector<Vector> v{b / b.norm()};
    beta = b.norm();
    Matrix h = Matrix::Zero(m + 1, m);
    for (int k = 0; k < m; ++k) {
        Vector w = a * v[k];
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) {
                const Scalar c = v[j].dot(w);
                w -= c * v[j];
                h(j, k) += c;
            }
        h(k + 1, k) = w.norm();
        v.push_back(w / w.norm());
    }
    return h;
}

}  // namespace

TEST_CASE("inner products") {
    Rng rng(41);
    const BlockVector x(rng.matrix(12, 3), 4);
    const BlockVector y(rng.matrix(12, 3), 4);

    const InnerProductScheme cl(InnerProductKind::classical, 3);
    CHECK(rel_err(cl.ip(x, y), x.matrix().adjoint() * y.matrix()) <= 1e-15);
    CHECK(cl.coefficient_size() == 3);

    const InnerProductScheme gl(InnerProductKind::global, 3);
    const Scalar tr = (x.matrix().adjoint() * y.matrix()).trace() / 3.0;
    CHECK(rel_err(gl.ip(x, y), tr * Matrix::Identity(3, 3)) <= 1e-15);
    CHECK(gl.coefficient_size() == 1);
    CHECK(std::abs(gl.ip_coefficients(x, y)(0, 0) - tr) <= 1e-14 * std::abs(tr));

    CHECK(parse_inner_product_kind("global") == InnerProductKind::global);
    CHECK(to_string(InnerProductKind::classical) == "classical");
    CHECK_THROWS_AS(parse_inner_product_kind("block"), ValidationError);
    CHECK_THROWS_AS(InnerProductScheme(InnerProductKind::classical, 0), DimensionError);
}

TEST_CASE("normalization returns an orthonormal block and its scale") {
    Rng rng(42);
    const BlockVector x(rng.matrix(15, 3), 5);
    for (auto kind : {InnerProductKind::classical, InnerProductKind::global}) {
        CAPTURE(to_string(kind));
        const InnerProductScheme s(kind, 3);
        const auto n = s.normalize(x);
        CHECK(rel_err(s.ip(n.q, n.q), Matrix::Identity(3, 3)) <= 1e-14);
        CHECK(rel_err(s.times(n.q, n.scale).matrix(), x.matrix()) <= 1e-14);
        if (kind == InnerProductKind::classical) {
            const Matrix r = n.scale;
            CHECK(r.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
            for (Index i = 0; i < 3; ++i) {
                CHECK(r(i, i).real() >= 0.0);
                CHECK(r(i, i).imag() == 0.0);
            }
        } else {
            CHECK(std::abs(n.scale(0, 0) - x.matrix().norm() / std::sqrt(3.0)) <= 1e-14);
        }
    }
}

TEST_CASE("normalization detects rank deficiency") {
    Rng rng(43);
    Matrix m = rng.matrix(10, 3);
    m.col(2) = m.col(0) + 2.0 * m.col(1);
    const InnerProductScheme cl(InnerProductKind::classical, 3);
    CHECK_THROWS_AS(cl.normalize(BlockVector(m, 5)), BreakdownError);
    const InnerProductScheme gl(InnerProductKind::global, 3);
    CHECK_NOTHROW(gl.normalize(BlockVector(m, 5)));
    CHECK_THROWS_AS(gl.normalize(BlockVector(Matrix::Zero(10, 3), 5)), BreakdownError);
}

TEST_CASE("Arnoldi relation and orthonormality") {
    Rng rng(44);
    const Tensor3 a = rng.tensor(8, 8, 8);
    const BcircOperator op(a);
    const BlockOperator apply = [&](const BlockVector& x) { return op(x); };
    const BlockVector b(rng.matrix(64, 2), 8);
    for (auto kind : {InnerProductKind::classical, InnerProductKind::global}) {
        CAPTURE(to_string(kind));
        const InnerProductScheme s(kind, 2);
        const auto d = block_arnoldi(apply, b, s, 5);
        CHECK(d.steps() == 5);
        CHECK_FALSE(d.invariant());
        CHECK(d.basis().size() == 6);
        CHECK(d.arnoldi_residual(apply) <= 1e-12 * op.frobenius_norm());
        CHECK(d.orthonormality_error() <= 1e-12);
        CHECK(rel_err(s.times(d.basis()[0], d.normalization()).matrix(), b.matrix()) <= 1e-14);
        const Matrix h = d.hessenberg();
        const Index c = s.coefficient_size();
        for (Index j = 0; j < h.cols(); ++j)
            for (Index i = j + c + 1; i < h.rows(); ++i)
                CHECK(h(i, j) == Scalar(0.0));
    }
}

TEST_CASE("global Arnoldi equals scalar Arnoldi on the vectorized problem") {
    Rng rng(45);
    const Matrix a = rng.matrix(12, 12);
    const Matrix b = rng.matrix(12, 3);
    const InnerProductScheme gl(InnerProductKind::global, 3);
    const auto d = block_arnoldi(dense_operator(a), BlockVector(b, 4), gl, 6);

    Matrix big = Matrix::Zero(36, 36);
    for (Index j = 0; j < 3; ++j)
        big.block(12 * j, 12 * j, 12, 12) = a;
    const Vector vecb = b.reshaped();
    double beta = 0.0;
    const Matrix h = scalar_arnoldi(big, vecb, 6, beta);

    Matrix stacked = Matrix::Zero(7, 6);
    stacked.topRows(6) = d.hessenberg();
    stacked(6, 5) = d.tail()(0, 0);
    CHECK(rel_err(stacked, h) <= 1e-12);
    CHECK(std::abs(d.normalization()(0, 0) - beta / std::sqrt(3.0)) <= 1e-13 * beta);
}

TEST_CASE("invariant subspace ends the process early") {
    Rng rng(46);
    const Matrix a = 2.5 * Matrix::Identity(9, 9);
    const BlockVector b(rng.matrix(9, 2), 3);
    for (auto kind : {InnerProductKind::classical, InnerProductKind::global}) {
        const InnerProductScheme s(kind, 2);
        const auto d = block_arnoldi(dense_operator(a), b, s, 3);
        REQUIRE(d.invariant());
        CHECK(*d.breakdown_step() == 1);
        CHECK(d.steps() == 1);
        CHECK(d.tail().norm() == 0.0);
        CHECK(rel_err(d.block_hessenberg(), 2.5 * Matrix::Identity(2, 2)) <= 1e-14);
    }
}

TEST_CASE("Arnoldi argument checks") {
    Rng rng(47);
    const Matrix a = rng.matrix(6, 6);
    const BlockVector b(rng.matrix(6, 2), 3);
    const InnerProductScheme cl(InnerProductKind::classical, 2);
    CHECK_THROWS_AS(block_arnoldi(dense_operator(a), b, cl, 0), DimensionError);
    CHECK_THROWS_AS(block_arnoldi(dense_operator(a), b, cl, 4), DimensionError);
    CHECK_THROWS_AS(block_arnoldi(dense_operator(a), b, InnerProductScheme(InnerProductKind::classical, 3), 2),
                    DimensionError);
    CHECK_THROWS_AS(block_arnoldi(dense_operator(a), BlockVector(Matrix::Zero(6, 2), 3), cl, 2),
                    BreakdownError);
}
