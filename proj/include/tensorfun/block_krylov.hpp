#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tensorfun/tensor3.hpp"

namespace tensorfun {

/// The linear operator A acting on np x s block vectors.
using BlockOperator = std::function<BlockVector(const BlockVector&)>;

enum class InnerProductKind { classical, global };

std::string to_string(InnerProductKind kind);
InnerProductKind parse_inner_product_kind(const std::string& name);

/**
 * Block inner product <<X, Y>> and scaling quotient N(X).
 *
 *   classical:  <<X, Y>> = X^* Y,                N(X) = R of X = QR
 *   global:     <<X, Y>> = tr(X^* Y)/s * I_s,    N(X) = ||X||_F/sqrt(s) * I_s
 *
 * Global coefficients are multiples of I_s; coefficient_size() is the size
 * of the matrices actually stored (s for classical, 1 for global).
 */
class InnerProductScheme {
public:
    InnerProductScheme(InnerProductKind kind, Index block_width);

    InnerProductKind kind() const noexcept { return kind_; }
    Index block_width() const noexcept { return s_; }
    Index coefficient_size() const noexcept {
        return kind_ == InnerProductKind::classical ? s_ : 1;
    }

    /// Full s x s value of <<x, y>>.
    Matrix ip(const BlockVector& x, const BlockVector& y) const;
    /// <<x, y>> in stored form (coefficient_size() square).
    Matrix ip_coefficients(const BlockVector& x, const BlockVector& y) const;

    struct Normalized {
        BlockVector q;
        /// N(x), coefficient_size() square.
        Matrix scale;
    };

    /**
     * x = q * N(x) with <<q, q>> = I. Classical N(x) is upper triangular with
     * a nonnegative real diagonal. Throws BreakdownError (step 0) when x is
     * numerically rank deficient (classical: sigma_min <= s eps sigma_max)
     * or when ||x||_F <= zero_threshold.
     */
    Normalized normalize(const BlockVector& x, double zero_threshold = 0.0) const;

    /// v * c with c in stored coefficient form.
    BlockVector times(const BlockVector& v, const Matrix& c) const;
    /// Expands a stored coefficient to its s x s value.
    Matrix expand(const Matrix& c) const;

private:
    InnerProductKind kind_;
    Index s_;
};

struct ArnoldiOptions {
    /// Estimate of ||A||_F for the breakdown test; <= 0 means estimate it
    /// from the observed ||A V_k||_F.
    double operator_norm = 0.0;
    /// Number of extra Gram-Schmidt passes.
    int reorthogonalization_passes = 1;
};

/**
 * Result of m block Arnoldi steps:
 *
 *   A [V_1 .. V_m] = [V_1 .. V_m] H_m + V_{m+1} H_{m+1,m} E_m^*
 *
 * Coefficients are kept in stored form: classical blocks are s x s, global
 * blocks are scalars (the Kronecker factor of H (x) I_s).
 */
class BlockArnoldiDecomposition {
public:
    BlockArnoldiDecomposition(InnerProductScheme scheme, std::vector<BlockVector> basis,
                              Matrix hessenberg, Matrix normalization,
                              std::optional<int> breakdown_step);

    const InnerProductScheme& scheme() const noexcept { return scheme_; }
    /// Completed steps (m, or fewer after a breakdown).
    int steps() const noexcept { return steps_; }
    /// Step at which normalization failed; the tail is then zero and the
    /// basis spans an invariant subspace to working precision.
    std::optional<int> breakdown_step() const noexcept { return breakdown_; }
    bool invariant() const noexcept { return breakdown_.has_value(); }

    /// V_1..V_{steps+1} (V_{steps+1} absent after breakdown).
    const std::vector<BlockVector>& basis() const noexcept { return basis_; }
    /// [V_1 | ... | V_k] as an np x ks matrix.
    Matrix basis_matrix(int k) const;

    /// Square part H_m in stored form (steps*c square).
    Matrix hessenberg() const;
    /// H_{m+1,m} in stored form (zero after breakdown).
    Matrix tail() const;
    /// B = N(input) in stored form.
    const Matrix& normalization() const noexcept { return normalization_; }
    /// H_m with every stored coefficient expanded to s x s.
    Matrix block_hessenberg() const;

    /// ||A V_m - V_m H_m - V_{m+1} H_{m+1,m} E_m^*||_F.
    double arnoldi_residual(const BlockOperator& a) const;
    /// max_{i != j} ||<<V_i, V_j>>||_F and max_i ||<<V_i, V_i>> - I||_F.
    double orthonormality_error() const;

    /// sum_j V_j y_j for a stacked coefficient column y (steps*c rows, c cols).
    BlockVector combine(const Matrix& y) const;

private:
    InnerProductScheme scheme_;
    std::vector<BlockVector> basis_;
    Matrix hessenberg_;  // (steps+1)c x steps c
    Matrix normalization_;
    std::optional<int> breakdown_;
    int steps_;
};

/// m steps of block Arnoldi with modified block Gram-Schmidt and
/// reorthogonalization. A breakdown at step k >= 1 ends the process
/// early; a rank-deficient starting block throws BreakdownError.
BlockArnoldiDecomposition block_arnoldi(const BlockOperator& a, const BlockVector& b,
                                        const InnerProductScheme& scheme, int m,
                                        const ArnoldiOptions& options = {});

}  // namespace tensorfun
