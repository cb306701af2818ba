#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tensorfun/block_krylov.hpp"
#include "tensorfun/dense_function.hpp"

namespace tensorfun {

/**
 * Discrete resolvent expansion f(z) ~= sum_j weights[j] / (nodes[j] - z).
 *
 * For z^-1 this is the single exact pole (node 0, weight -1). For exp it is
 * the midpoint rule applied to the Cauchy integral over a left-opening
 * parabola z(u) = c - mu u^2 + 2 i mu u, u in [-U, U].
 */
struct QuadratureRule {
    std::vector<Scalar> nodes;
    std::vector<Scalar> weights;
};

/// Parabola enclosing every value in `ritz` with a 10% padding of the
/// imaginary extent and a margin of 1 to the right of the rightmost value.
struct ParabolicContour {
    double apex = 0.0;       // c, the rightmost point
    double curvature = 1.0;  // mu
    double half_length = 1.0;  // U

    static ParabolicContour enclosing(std::span<const Scalar> ritz);
    Scalar point(double u) const;
    Scalar derivative(double u) const;
    /// True when z lies strictly inside (to the left of) the parabola.
    bool encloses(Scalar z) const;
};

QuadratureRule exp_quadrature(const ParabolicContour& contour, int nodes);
QuadratureRule inverse_quadrature();

/// F_m = V_m f(H_m) E_1 B after m block Arnoldi steps. A breakdown ends the
/// process early and the exact k-step result is returned.
BlockVector bfomfom_single(const ScalarFunction& f, const BlockOperator& a,
                           const BlockVector& b, const InnerProductScheme& scheme, int m,
                           const ArnoldiOptions& arnoldi = {});

struct CycleRecord {
    int cycle = 0;
    /// ||Delta^(k)||_F; cycle 1 records ||F^(1)||_F.
    double update_norm = 0.0;
    /// ||Delta^(k)||_F / ||F^(k+1)||_F.
    double relative_update = 0.0;
    /// Quadrature nodes accepted for this cycle's update (0 for cycle 1, 1
    /// for the inverse).
    int quadrature_nodes = 0;
    double wall_time_ms = 0.0;
    /// Filled by the caller's observer when an oracle is available.
    double true_relative_error = -1.0;
};

enum class RestartStatus { converged, not_converged, quadrature_saturated };

std::string to_string(RestartStatus status);

struct RestartResult {
    BlockVector approximation;
    std::vector<CycleRecord> history;
    RestartStatus status = RestartStatus::converged;
    int cycles() const noexcept { return static_cast<int>(history.size()); }
};

struct RestartOptions {
    int m = 5;
    double tol = 1e-12;
    int max_cycles = 50;
    int initial_nodes = 32;
    int max_nodes = 4096;
    ArnoldiOptions arnoldi;
    /// Called after every cycle with the record (mutable, so the observer can
    /// fill true_relative_error) and the current approximation.
    std::function<void(CycleRecord&, const BlockVector&)> observer;
};

/// Restarted run that stopped without meeting the tolerance; carries the
/// best iterate and the full history.
class RestartError : public Error {
public:
    RestartError(const std::string& what, RestartResult partial)
        : Error(what), partial_(std::move(partial)) {}
    const RestartResult& partial() const noexcept { return partial_; }

private:
    RestartResult partial_;
};

class NonConvergenceError : public RestartError {
public:
    using RestartError::RestartError;
};

/// The error update needed more than max_nodes quadrature nodes.
class QuadratureSaturationError : public RestartError {
public:
    QuadratureSaturationError(const std::string& what, RestartResult partial, int cycle)
        : RestartError(what, std::move(partial)), cycle_(cycle) {}
    int cycle() const noexcept { return cycle_; }

private:
    int cycle_;
};

/**
 * Restarted B(FOM)^2 for f in {exp, inverse}.
 *
 * Cycle 1 computes F^(1) = V f(H) E_1 B. Each later cycle runs block
 * Arnoldi from the previous V_{m+1} and adds the error update
 *
 *   Delta^(k) = V^(k+1) sum_j w_j (t_j - H^(k+1))^-1 E_1 B^(k+1) C^(k)(t_j),
 *   C^(k)(t)  = prod_l  H^(l)_{m+1,m} E_m^* (t - H^(l))^-1 E_1 B^(l),
 *
 * with the quadrature (t_j, w_j) refined by doubling until the approximations
 * F^(k) + Delta^(k) from two successive rules differ by at most tol/10
 * relative to the finer one. The contour is kept from cycle
 * to cycle while it still encloses every Ritz value seen so far, and the
 * chains C(t_j) at its nodes are cached. Stops when
 * ||Delta^(k)||_F / ||F^(k+1)||_F <= tol.
 *
 * Throws QuadratureSaturationError or NonConvergenceError, both carrying
 * the partial result.
 */
RestartResult restarted_bfomfom(const ScalarFunction& f, const BlockOperator& a,
                                const BlockVector& b, const InnerProductScheme& scheme,
                                const RestartOptions& options);

}  // namespace tensorfun
