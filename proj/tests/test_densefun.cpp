#include <doctest.h>

#include "support.hpp"
#include "tensorfun/dense_function.hpp"

using namespace tensorfun;
using testsupport::funm_eig_oracle;
using testsupport::rel_err;
using testsupport::Rng;

namespace {

Matrix random_normal_matrix(Rng& rng, Index n, double scale) {
    const Matrix u = rng.unitary(n);
    Vector lambda(n);
    for (Index i = 0; i < n; ++i)
        lambda(i) = scale * rng.complex();
    return u * lambda.asDiagonal() * u.adjoint();
}

Matrix well_conditioned_similarity(Rng& rng, Index n) {
    return Matrix::Identity(n, n) + 0.2 * rng.matrix(n, n) / std::sqrt(double(n));
}

}  // namespace

TEST_CASE("expm closed forms") {
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-15);

    Matrix d = Matrix::Zero(2, 2);
    d(1, 1) = std::log(2.0);
    const Matrix ed = expm(d);
    CHECK(std::abs(ed(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(ed(1, 1) - 2.0) < 1e-15);
    CHECK(std::abs(ed(0, 1)) == 0.0);

    // circulant [[1,2],[2,1]] has eigenvalues 3 and -1
    Matrix c(2, 2);
    c << 1.0, 2.0, 2.0, 1.0;
    const Matrix ec = expm(c);
    const double diag = (std::exp(3.0) + std::exp(-1.0)) / 2;
    const double off = (std::exp(3.0) - std::exp(-1.0)) / 2;
    CHECK(std::abs(ec(0, 0) - diag) <= 1e-14 * diag);
    CHECK(std::abs(ec(1, 1) - diag) <= 1e-14 * diag);
    CHECK(std::abs(ec(0, 1) - off) <= 1e-14 * diag);
    CHECK(std::abs(ec(1, 0) - off) <= 1e-14 * diag);
}

TEST_CASE("expm of a nonnormal matrix matches frozen reference values") {
    Matrix m(3, 3);
    m << 1.0, 2.0, 0.0, 0.0, -1.0, 3.0, 0.5, 0.0, 0.2;
    // tests/oracles/frozen_values.py
    const double ref[] = {3.452882877877306,  2.632293969240967,  3.6490851100229285,
                          0.9122712775057318, 0.8205889086363398, 2.488806909852279,
                          1.0229820033125343, 0.608180851670488,  1.8161116725772513};
    const Matrix e = expm(m);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            CHECK(std::abs(e(i, j) - ref[i * 3 + j]) <= 1e-13 * 3.65);
}

TEST_CASE("expm is accurate on normal matrices with large norm") {
    Rng rng(21);
    for (double scale : {0.1, 3.0, 20.0}) {
        const Matrix m = random_normal_matrix(rng, 6, scale);
        const Matrix ref = funm_eig_oracle(m, [](Scalar z) { return std::exp(z); });
        CHECK(rel_err(expm(m), ref) <= 1e-12);
    }
}

TEST_CASE("expm errors") {
    CHECK_THROWS_AS(expm(Matrix::Zero(2, 3)), DimensionError);
    Matrix big = Matrix::Identity(2, 2) * 1e5;
    CHECK_THROWS_AS(expm(big), FunctionError);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad), FunctionError);
}

TEST_CASE("funm basic cases") {
    Rng rng(22);
    const Matrix m = rng.matrix(4, 4);
    CHECK(rel_err(funm(ScalarFunction::identity(), m), m) <= 1e-14);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const Matrix inv = funm(ScalarFunction::inverse(), d);
    CHECK(std::abs(inv(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(inv(1, 1) - 0.25) < 1e-15);

    CHECK_THROWS_AS(funm(ScalarFunction::inverse(), Matrix::Zero(3, 3)), FunctionError);
    CHECK_THROWS_AS(funm(ScalarFunction::exp(), Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("Schur-Parlett exp agrees with expm on normal matrices") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix m = random_normal_matrix(rng, 5, 1.0);
        CHECK(rel_err(schur_parlett(ScalarFunction::exp(), m), expm(m)) <= 1e-11);
    }
}

TEST_CASE("Schur-Parlett handles clustered and repeated eigenvalues") {
    SUBCASE("Jordan block") {
        Matrix j(2, 2);
        j << 1.0, 1.0, 0.0, 1.0;
        // exp(J) = e [[1, 1], [0, 1]]
        const Matrix e = schur_parlett(ScalarFunction::exp(), j);
        CHECK(std::abs(e(0, 0) - std::exp(1.0)) < 1e-14);
        CHECK(std::abs(e(0, 1) - std::exp(1.0)) < 1e-14);
        CHECK(std::abs(e(1, 0)) < 1e-14);
    }
    SUBCASE("two clusters") {
        Rng rng(24);
        const Matrix u = rng.unitary(6);
        Vector lambda(6);
        lambda << 1.0, 1.01, 1.02, -2.0, -2.03, 0.5;
        const Matrix m = u * lambda.asDiagonal() * u.adjoint();
        CHECK(rel_err(schur_parlett(ScalarFunction::exp(), m), expm(m)) <= 1e-12);
    }
    SUBCASE("user function without a derivative") {
        Rng rng(25);
        const Matrix m = random_normal_matrix(rng, 4, 0.5);
        const auto cosine = ScalarFunction::generic("cos", [](Scalar z) { return std::cos(z); });
        const Matrix ref = funm_eig_oracle(m, [](Scalar z) { return std::cos(z); });
        CHECK(rel_err(funm(cosine, m), ref) <= 1e-11);
    }
}

TEST_CASE("sqrt matches frozen reference values and squares back") {
    Matrix s(3, 3);
    s << 4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0;
    // tests/oracles/frozen_values.py
    const double ref[] = {1.9807091316411674,    0.2757818852999875, -0.027123561227698156,
                          0.27578188529998754,   1.6778036851134814, 0.3300290077553838,
                          -0.027123561227698094, 0.33002900775538385, 1.3748982385857964};
    const Matrix r = funm(ScalarFunction::sqrt(), s);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            CHECK(std::abs(r(i, j) - ref[i * 3 + j]) <= 1e-13);
    CHECK(rel_err(r * r, s) <= 1e-13);
}

TEST_CASE("polynomial functions are exact") {
    Rng rng(26);
    const Matrix m = rng.matrix(5, 5);
    const auto q = ScalarFunction::polynomial({0.0, 2.0, 1.0});  // z^2 + 2z
    CHECK(rel_err(funm(q, m), m * m + 2.0 * m) <= 1e-12);
}

TEST_CASE("funm properties") {
    Rng rng(27);
    const ScalarFunction fs[] = {ScalarFunction::exp(), ScalarFunction::inverse(),
                                 ScalarFunction::sqrt()};
    for (const auto& f : fs) {
        CAPTURE(f.name());
        // spectrum kept in the right half plane so that sqrt is smooth
        Matrix m = random_normal_matrix(rng, 5, 0.5);
        m.diagonal().array() += 3.0;
        const Matrix fm = funm(f, m);

        const Matrix x = well_conditioned_similarity(rng, 5);
        const Matrix similar = funm(f, x * m * x.inverse());
        CHECK(rel_err(similar, x * fm * x.inverse()) <= 1e-10);

        CHECK(rel_err(funm(f, m.transpose()), fm.transpose()) <= 1e-12);

        CHECK((fm * m - m * fm).norm() <= 1e-12 * m.norm() * fm.norm());

        std::vector<Scalar> expected;
        for (const auto& z : testsupport::eigenvalues(m))
            expected.push_back(f(z));
        CHECK(testsupport::multiset_distance(testsupport::eigenvalues(fm), expected) <= 1e-10);
    }
}

TEST_CASE("scalar functions") {
    CHECK(ScalarFunction::from_name("exp").kind() == ScalarFunction::Kind::exp);
    CHECK(ScalarFunction::from_name("inverse").kind() == ScalarFunction::Kind::inverse);
    CHECK(ScalarFunction::from_name("sqrt").kind() == ScalarFunction::Kind::sqrt);
    CHECK_THROWS_AS(ScalarFunction::from_name("log"), ValidationError);

    const auto e = ScalarFunction::exp();
    CHECK(std::abs(e.taylor_coefficient(0.0, 3) - 1.0 / 6.0) < 1e-15);
    const auto g = ScalarFunction::generic("exp-noderiv", [](Scalar z) { return std::exp(z); });
    CHECK_FALSE(g.has_derivative());
    CHECK(std::abs(g.taylor_coefficient(Scalar(0.3, 0.1), 4) -
                   std::exp(Scalar(0.3, 0.1)) / 24.0) < 1e-13);
}
