#include "tensorfun/tfunc.hpp"

#include <algorithm>
#include <cmath>

namespace tensorfun {

std::string to_string(Backend backend) {
    switch (backend) {
    case Backend::automatic:
        return "auto";
    case Backend::dense:
        return "dense";
    case Backend::facewise:
        return "facewise";
    case Backend::krylov:
        return "krylov";
    case Backend::krylov_fourier:
        return "krylov-fourier";
    }
    return "unknown";
}

Backend parse_backend(const std::string& name) {
    if (name == "auto")
        return Backend::automatic;
    if (name == "dense")
        return Backend::dense;
    if (name == "facewise")
        return Backend::facewise;
    if (name == "krylov")
        return Backend::krylov;
    if (name == "krylov-fourier")
        return Backend::krylov_fourier;
    throw ValidationError("unknown backend '" + name + "'");
}

Backend select_backend(const ScalarFunction& f, Index n, Index p) {
    (void)f;
    if (n * p <= 200)
        return Backend::dense;
    if (n <= 500)
        return Backend::facewise;
    return Backend::krylov;
}

namespace {

void check_spectrum(const ScalarFunction& f, const Tensor3& a) {
    for (const Scalar& z : spectrum_bcirc(a)) {
        const Scalar v = f(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw FunctionError(f.name() + " is not defined at eigenvalue " +
                                std::to_string(z.real()) + "+" +
                                std::to_string(z.imag()) + "i of bcirc(A)");
    }
}

Tensor3 run_krylov(const ScalarFunction& f, const Tensor3& a, const Tensor3& b,
                   const TFunctionOptions& options, bool fourier) {
    const Index p = a.depth();
    BlockVector rhs = unfold(b);
    const InnerProductScheme scheme(options.scheme, rhs.cols());
    RestartOptions restart = options.restart;
    if (options.scheme == InnerProductKind::classical)
        restart.m = static_cast<int>(
            std::clamp<Index>(rhs.rows() / rhs.cols(), 1, restart.m));

    if (fourier) {
        const FourierFaceOperator op(face_diagonalize(a));
        restart.arnoldi.operator_norm = op.frobenius_norm();
        const BlockOperator apply = [&op](const BlockVector& x) { return op(x); };
        const RestartResult r = restarted_bfomfom(f, apply, to_fourier(rhs), scheme, restart);
        return fold(from_fourier(r.approximation), p);
    }
    const BcircOperator op(a);
    restart.arnoldi.operator_norm = op.frobenius_norm();
    const BlockOperator apply = [&op](const BlockVector& x) { return op(x); };
    const RestartResult r = restarted_bfomfom(f, apply, rhs, scheme, restart);
    return fold(r.approximation, p);
}

}  // namespace

Tensor3 t_function(const ScalarFunction& f, const Tensor3& a, const Tensor3& b,
                   const TFunctionOptions& options) {
    if (a.rows() != a.cols())
        throw DimensionError("t_function: faces of A must be square");
    if (b.rows() != a.rows() || b.depth() != a.depth())
        throw DimensionError("t_function: B is not conformal with A");

    const Index n = a.rows(), p = a.depth();
    Backend backend = options.backend;
    if (backend == Backend::automatic)
        backend = select_backend(f, n, p);
    if (n * p <= 200)
        check_spectrum(f, a);

    try {
        switch (backend) {
        case Backend::dense:
            return fold(funm(f, bcirc(a)) * unfold(b).matrix(), p);
        case Backend::facewise:
            return t_function_facewise(f, a, b);
        case Backend::krylov:
            return run_krylov(f, a, b, options, false);
        case Backend::krylov_fourier:
            return run_krylov(f, a, b, options, true);
        case Backend::automatic:
            break;
        }
    } catch (const FunctionError& e) {
        throw FunctionError("[" + to_string(backend) + "] " + e.what());
    } catch (const DecompositionError& e) {
        throw DecompositionError("[" + to_string(backend) + "] " + e.what());
    }
    throw Error("t_function: unresolved backend");
}

Tensor3 t_function_of(const ScalarFunction& f, const Tensor3& a,
                      const TFunctionOptions& options) {
    return t_function(f, a, identity_tensor(a.rows(), a.depth()), options);
}

Tensor3 t_exp(const Tensor3& a, double t, const Tensor3& b, const TFunctionOptions& options) {
    return t_function(ScalarFunction::exp(), Scalar(t) * a, b, options);
}

Tensor3 t_function_eig(const ScalarFunction& f, const Tensor3& a) {
    const TensorEigen eig = t_eig_facewise(a);
    const Index n = a.rows(), p = a.depth();
    const Tensor3 unit = identity_tensor(1, p);
    Matrix f_tubes(n, p);
    for (Index i = 0; i < n; ++i) {
        const Tensor3 fd = t_function_facewise(f, eig.values.tube(i), unit);
        for (Index k = 0; k < p; ++k)
            f_tubes(i, k) = fd(0, 0, k);
    }
    const Tensor3 fdiag = FDiagonalTensor(std::move(f_tubes)).to_tensor();
    return t_product(t_product(eig.vectors, fdiag), eig.inverse_vectors);
}

}  // namespace tensorfun
