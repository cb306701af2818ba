#include "tensorfun/dense_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace tensorfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

bool is_finite(Scalar z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double norm1(const Matrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

ScalarFunction ScalarFunction::exp() {
    return {Kind::exp, "exp", [](Scalar z) { return std::exp(z); },
            [](Scalar z, int) { return std::exp(z); }};
}

ScalarFunction ScalarFunction::inverse() {
    return {Kind::inverse, "inverse", [](Scalar z) { return 1.0 / z; },
            [](Scalar z, int k) {
                // (-1)^k k! / z^(k+1)
                Scalar r = 1.0 / z;
                for (int j = 1; j <= k; ++j)
                    r *= -static_cast<double>(j) / z;
                return r;
            }};
}

ScalarFunction ScalarFunction::sqrt() {
    return {Kind::sqrt, "sqrt", [](Scalar z) { return std::sqrt(z); },
            [](Scalar z, int k) {
                // d^k/dz^k z^(1/2) = (1/2)(1/2 - 1)...(1/2 - k + 1) z^(1/2 - k)
                Scalar r = std::sqrt(z);
                for (int j = 0; j < k; ++j)
                    r *= (0.5 - j) / z;
                return r;
            }};
}

ScalarFunction ScalarFunction::generic(std::string name,
                                       std::function<Scalar(Scalar)> f,
                                       Derivative derivative) {
    return {Kind::generic, std::move(name), std::move(f), std::move(derivative)};
}

ScalarFunction ScalarFunction::polynomial(std::vector<Scalar> coeffs) {
    auto value = [coeffs](Scalar z) {
        Scalar r = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            r = r * z + *it;
        return r;
    };
    auto derivative = [coeffs](Scalar z, int k) {
        // sum_{j >= k} j!/(j-k)! a_j z^(j-k), Horner in z.
        Scalar r = 0.0;
        for (int j = static_cast<int>(coeffs.size()) - 1; j >= k; --j) {
            double falling = 1.0;
            for (int i = 0; i < k; ++i)
                falling *= j - i;
            r = r * z + falling * coeffs[static_cast<std::size_t>(j)];
        }
        return r;
    };
    ScalarFunction f(Kind::generic, "polynomial", value, derivative);
    f.poly_ = std::move(coeffs);
    return f;
}

ScalarFunction ScalarFunction::identity() {
    ScalarFunction f = polynomial({0.0, 1.0});
    f.name_ = "identity";
    return f;
}

ScalarFunction ScalarFunction::from_name(const std::string& name) {
    if (name == "exp")
        return exp();
    if (name == "inverse" || name == "inv")
        return inverse();
    if (name == "sqrt")
        return sqrt();
    if (name == "identity")
        return identity();
    throw ValidationError("unknown function '" + name + "'");
}

Scalar ScalarFunction::taylor_coefficient(Scalar z, int k, double radius) const {
    if (derivative_) {
        double fact = 1.0;
        for (int j = 2; j <= k; ++j)
            fact *= j;
        return derivative_(z, k) / fact;
    }
    // Trapezoid rule on the Cauchy integral over |w - z| = radius.
    constexpr int kNodes = 64;
    Scalar acc = 0.0;
    for (int j = 0; j < kNodes; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / kNodes;
        const Scalar w = std::polar(1.0, theta);
        acc += value_(z + radius * w) * std::pow(std::conj(w), k);
    }
    return acc / (kNodes * std::pow(radius, k));
}

Matrix expm(const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("expm: matrix is not square");
    const Index n = m.rows();
    if (n == 0)
        return m;

    constexpr double theta13 = 5.371920351148152;
    constexpr double b[] = {64764752532480000.0, 32382376266240000.0,
                            7771770303897600.0,  1187353796428800.0,
                            129060195264000.0,   10559470521600.0,
                            670442572800.0,      33522128640.0,
                            1323241920.0,        40840800.0,
                            960960.0,            16380.0,
                            182.0,               1.0};

    double norm = norm1(m);
    if (!std::isfinite(norm))
        throw FunctionError("expm: non-finite input");
    // exp(M) = e^mu exp(M - mu I); keep the shift only when it helps.
    const Scalar mu = m.trace() / static_cast<double>(n);
    Matrix shifted = m;
    shifted.diagonal().array() -= mu;
    const double shifted_norm = norm1(shifted);
    const bool use_shift = shifted_norm < norm;
    if (use_shift)
        norm = shifted_norm;
    int s = 0;
    if (norm > theta13)
        s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Matrix a = (use_shift ? shifted : m) / std::ldexp(1.0, s);

    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                          b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                     b[4] * a4 + b[2] * a2 + b[0] * id;
    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i)
        r = r * r;
    if (use_shift)
        r *= std::exp(mu);
    if (!all_finite(r))
        throw FunctionError("expm: overflow (||M||_1 = " + std::to_string(norm1(m)) + ")");
    return r;
}

Matrix funm(const ScalarFunction& f, const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("funm: matrix is not square");
    switch (f.kind()) {
    case ScalarFunction::Kind::exp:
        return expm(m);
    case ScalarFunction::Kind::inverse: {
        Eigen::PartialPivLU<Matrix> lu(m);
        const double rcond = m.size() == 0 ? 1.0 : lu.rcond();
        if (!(rcond > static_cast<double>(m.rows()) * kEps))
            throw FunctionError("funm: inverse of a singular matrix (rcond " +
                                std::to_string(rcond) + ")");
        return lu.inverse();
    }
    default:
        return schur_parlett(f, m);
    }
}

namespace {

// Rotation [c s; -conj(s) c] mapping (f, g) to (r, 0), c real.
void make_rotation(Scalar f, Scalar g, double& c, Scalar& s) {
    if (g == Scalar(0.0)) {
        c = 1.0;
        s = 0.0;
    } else if (f == Scalar(0.0)) {
        c = 0.0;
        s = std::conj(g) / std::abs(g);
    } else {
        const double af = std::abs(f);
        const double norm = std::hypot(af, std::abs(g));
        c = af / norm;
        s = (f / af) * std::conj(g) / norm;
    }
}

// Swaps the adjacent diagonal entries k, k+1 of the upper triangular t and
// updates the unitary factor q so that q t q^* is unchanged.
void swap_schur(Matrix& t, Matrix& q, Index k) {
    const Index n = t.rows();
    const Scalar t11 = t(k, k), t22 = t(k + 1, k + 1);
    double c;
    Scalar s;
    make_rotation(t(k, k + 1), t22 - t11, c, s);
    for (Index j = k + 2; j < n; ++j) {
        const Scalar x = t(k, j), y = t(k + 1, j);
        t(k, j) = c * x + s * y;
        t(k + 1, j) = c * y - std::conj(s) * x;
    }
    const Scalar sc = std::conj(s);
    for (Index i = 0; i < k; ++i) {
        const Scalar x = t(i, k), y = t(i, k + 1);
        t(i, k) = c * x + sc * y;
        t(i, k + 1) = c * y - s * x;
    }
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
    for (Index i = 0; i < n; ++i) {
        const Scalar x = q(i, k), y = q(i, k + 1);
        q(i, k) = c * x + sc * y;
        q(i, k + 1) = c * y - s * x;
    }
}

// Cluster labels: transitive closure of |l_i - l_j| <= tol, numbered by
// first appearance along the diagonal.
std::vector<int> cluster_eigenvalues(const Vector& ev, double tol) {
    const auto n = static_cast<std::size_t>(ev.size());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(ev(static_cast<Index>(i)) - ev(static_cast<Index>(j))) <= tol)
                parent[find(i)] = find(j);

    std::vector<int> label(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (root_label[r] < 0)
            root_label[r] = next++;
        label[i] = root_label[r];
    }
    return label;
}

Matrix taylor_block(const ScalarFunction& f, const Matrix& t, int max_terms) {
    const Index n = t.rows();
    const Scalar sigma = t.diagonal().mean();
    const Matrix shifted = t - sigma * Matrix::Identity(n, n);
    double spread = 0.0;
    for (Index i = 0; i < n; ++i)
        spread = std::max(spread, std::abs(t(i, i) - sigma));
    const double radius = std::max(0.5, 2.0 * spread);

    Matrix result = Matrix::Zero(n, n);
    Matrix power = Matrix::Identity(n, n);
    int small_terms = 0;
    for (int k = 0; k <= max_terms; ++k) {
        const Scalar coeff = f.taylor_coefficient(sigma, k, radius);
        if (!is_finite(coeff))
            throw FunctionError("funm: " + f.name() + " derivative of order " +
                                std::to_string(k) + " is not finite at " +
                                std::to_string(sigma.real()) + "+" +
                                std::to_string(sigma.imag()) + "i");
        const Matrix term = coeff * power;
        result += term;
        const double tn = term.norm();
        small_terms = tn <= kEps * result.norm() ? small_terms + 1 : 0;
        if (k + 1 >= n && small_terms >= 2)
            return result;
        power = power * shifted;
        if (power.norm() == 0.0)
            return result;
    }
    throw FunctionError("funm: Taylor series for " + f.name() +
                        " did not converge in " + std::to_string(max_terms) +
                        " terms on a cluster of " + std::to_string(n) +
                        " eigenvalues");
}

// Solves a x - x b = c for upper triangular a, b with disjoint spectra.
Matrix triangular_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
    Matrix x(c.rows(), c.cols());
    for (Index j = 0; j < c.cols(); ++j) {
        Vector rhs = c.col(j);
        for (Index l = 0; l < j; ++l)
            rhs += b(l, j) * x.col(l);
        Matrix shifted = a;
        shifted.diagonal().array() -= b(j, j);
        x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    return x;
}

}  // namespace

Matrix schur_parlett(const ScalarFunction& f, const Matrix& m,
                     const SchurParlettOptions& options) {
    if (m.rows() != m.cols())
        throw DimensionError("schur_parlett: matrix is not square");
    const Index n = m.rows();
    if (n == 0)
        return m;
    if (!m.allFinite())
        throw FunctionError("schur_parlett: non-finite input");

    Eigen::ComplexSchur<Matrix> schur(m);
    if (schur.info() != Eigen::Success)
        throw FunctionError("schur_parlett: Schur factorization failed");
    Matrix t = schur.matrixT().triangularView<Eigen::Upper>();
    Matrix q = schur.matrixU();

    // Bubble the diagonal into contiguous clusters.
    std::vector<int> label = cluster_eigenvalues(t.diagonal(), options.cluster_tolerance);
    for (std::size_t pass = 0; pass < label.size(); ++pass) {
        bool swapped = false;
        for (std::size_t k = 0; k + 1 < label.size(); ++k) {
            if (label[k] > label[k + 1]) {
                swap_schur(t, q, static_cast<Index>(k));
                std::swap(label[k], label[k + 1]);
                swapped = true;
            }
        }
        if (!swapped)
            break;
    }

    std::vector<Index> start;
    for (std::size_t k = 0; k < label.size(); ++k)
        if (k == 0 || label[k] != label[k - 1])
            start.push_back(static_cast<Index>(k));
    start.push_back(n);
    const std::size_t blocks = start.size() - 1;
    auto size_of = [&](std::size_t b) { return start[b + 1] - start[b]; };

    Matrix ft = Matrix::Zero(n, n);
    for (std::size_t b = 0; b < blocks; ++b) {
        const Index s0 = start[b], len = size_of(b);
        if (len == 1) {
            const Scalar v = f(t(s0, s0));
            if (!is_finite(v))
                throw FunctionError("funm: " + f.name() + " is not finite at eigenvalue " +
                                    std::to_string(t(s0, s0).real()) + "+" +
                                    std::to_string(t(s0, s0).imag()) + "i");
            ft(s0, s0) = v;
        } else {
            ft.block(s0, s0, len, len) = taylor_block(
                f, t.block(s0, s0, len, len).triangularView<Eigen::Upper>(),
                options.max_taylor_terms);
        }
    }

    // Block Parlett recurrence, one block column at a time, bottom up.
    for (std::size_t j = 1; j < blocks; ++j) {
        const Index sj = start[j], nj = size_of(j);
        for (std::size_t ii = j; ii-- > 0;) {
            const Index si = start[ii], ni = size_of(ii);
            Matrix rhs = ft.block(si, si, ni, ni) * t.block(si, sj, ni, nj) -
                         t.block(si, sj, ni, nj) * ft.block(sj, sj, nj, nj);
            for (std::size_t k = ii + 1; k < j; ++k) {
                const Index sk = start[k], nk = size_of(k);
                rhs += ft.block(si, sk, ni, nk) * t.block(sk, sj, nk, nj) -
                       t.block(si, sk, ni, nk) * ft.block(sk, sj, nk, nj);
            }
            ft.block(si, sj, ni, nj) =
                triangular_sylvester(t.block(si, si, ni, ni), t.block(sj, sj, nj, nj), rhs);
        }
    }

    Matrix result = q * ft * q.adjoint();
    if (!all_finite(result))
        throw FunctionError("funm: " + f.name() + " produced non-finite values");
    return result;
}

}  // namespace tensorfun
