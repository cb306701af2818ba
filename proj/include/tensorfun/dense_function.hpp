#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tensorfun/tensor3.hpp"

namespace tensorfun {

/**
 * A scalar function f together with its derivatives, applied to matrices
 * through funm().
 *
 * The built-in exp, inverse and sqrt carry closed-form derivatives. A
 * generic function may supply its own derivative evaluator; without one,
 * Taylor coefficients are recovered from a Cauchy integral on a small
 * circle, which assumes f is analytic there.
 */
class ScalarFunction {
public:
    enum class Kind { exp, inverse, sqrt, generic };

    /// derivative(z, k) returns f^(k)(z).
    using Derivative = std::function<Scalar(Scalar, int)>;

    static ScalarFunction exp();
    static ScalarFunction inverse();
    /// Principal branch.
    static ScalarFunction sqrt();
    static ScalarFunction generic(std::string name, std::function<Scalar(Scalar)> f,
                                  Derivative derivative = {});
    /// sum_k coeffs[k] z^k, tagged generic, with exact derivatives.
    static ScalarFunction polynomial(std::vector<Scalar> coeffs);
    /// z -> z.
    static ScalarFunction identity();

    /// Parses "exp", "inverse", "sqrt" or "identity".
    static ScalarFunction from_name(const std::string& name);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }
    /// Coefficients when this is a polynomial, empty otherwise.
    const std::vector<Scalar>& polynomial_coefficients() const noexcept {
        return poly_;
    }

    Scalar operator()(Scalar z) const { return value_(z); }
    /// f^(k)(z)/k!, using the Cauchy-integral fallback when no derivative
    /// evaluator is known. `radius` is the fallback circle radius.
    Scalar taylor_coefficient(Scalar z, int k, double radius = 0.5) const;

private:
    ScalarFunction(Kind kind, std::string name, std::function<Scalar(Scalar)> value,
                   Derivative derivative)
        : kind_(kind), name_(std::move(name)), value_(std::move(value)),
          derivative_(std::move(derivative)) {}

    Kind kind_;
    std::string name_;
    std::function<Scalar(Scalar)> value_;
    Derivative derivative_;
    std::vector<Scalar> poly_;
};

/// Matrix exponential: scaling and squaring with the degree-13 diagonal
/// Pade approximant.
Matrix expm(const Matrix& m);

/// f(M). Dispatches exp to expm and inverse to an LU inverse; everything
/// else goes through schur_parlett().
Matrix funm(const ScalarFunction& f, const Matrix& m);

struct SchurParlettOptions {
    /// Eigenvalues closer than this share a diagonal block.
    double cluster_tolerance = 0.1;
    int max_taylor_terms = 25;
};

/// f(M) through a reordered complex Schur form and the block Parlett
/// recurrence; clustered blocks use a Taylor series about the block mean.
Matrix schur_parlett(const ScalarFunction& f, const Matrix& m,
                     const SchurParlettOptions& options = {});

}  // namespace tensorfun
