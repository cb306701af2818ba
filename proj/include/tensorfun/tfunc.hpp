#pragma once

#include <string>

#include "tensorfun/bfomfom.hpp"
#include "tensorfun/dense_function.hpp"
#include "tensorfun/spectral.hpp"
#include "tensorfun/tensor3.hpp"

namespace tensorfun {

enum class Backend {
    /// dense when n*p <= 200, facewise when n <= 500, krylov otherwise
    automatic,
    /// funm on the materialized bcirc(A)
    dense,
    /// funm on each Fourier face
    facewise,
    /// restarted B(FOM)^2 on x -> bcirc(A) x
    krylov,
    /// restarted B(FOM)^2 on the block diagonal Fourier operator
    krylov_fourier,
};

std::string to_string(Backend backend);
Backend parse_backend(const std::string& name);

struct TFunctionOptions {
    Backend backend = Backend::automatic;
    InnerProductKind scheme = InnerProductKind::classical;
    RestartOptions restart;
};

/// The backend `automatic` resolves to for an n x n x p tensor.
Backend select_backend(const ScalarFunction& f, Index n, Index p);

/// f(A) * B = fold(f(bcirc(A)) unfold(B)).
Tensor3 t_function(const ScalarFunction& f, const Tensor3& a, const Tensor3& b,
                   const TFunctionOptions& options = {});

/// f(A) = fold(f(bcirc(A)) E_1).
Tensor3 t_function_of(const ScalarFunction& f, const Tensor3& a,
                      const TFunctionOptions& options = {});

/// exp(A t) * B.
Tensor3 t_exp(const Tensor3& a, double t, const Tensor3& b,
              const TFunctionOptions& options = {});

/// f(A) = X * f(D) * X^-1, with f(D) assembled from the tube functions
/// f(d_i) of the tensor eigendecomposition.
Tensor3 t_function_eig(const ScalarFunction& f, const Tensor3& a);

}  // namespace tensorfun
