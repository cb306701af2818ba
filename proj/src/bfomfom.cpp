#include "tensorfun/bfomfom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace tensorfun {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Schur data of one cycle's Hessenberg H = Q T Q^*, reduced to what the
// error function needs.
struct CycleFactors {
    Matrix t;
    Matrix q;
    Matrix right;  // Q^* E_1 B
    Matrix left;   // H_{m+1,m} E_m^* Q
};

CycleFactors factorize(const BlockArnoldiDecomposition& d) {
    const Index c = d.scheme().coefficient_size();
    Eigen::ComplexSchur<Matrix> schur(d.hessenberg());
    if (schur.info() != Eigen::Success)
        throw FunctionError("restarted_bfomfom: Schur factorization of H failed");
    CycleFactors f;
    f.t = schur.matrixT().triangularView<Eigen::Upper>();
    f.q = schur.matrixU();
    f.right = f.q.topRows(c).adjoint() * d.normalization();
    f.left = d.tail() * f.q.bottomRows(c);
    return f;
}

// (z I - T)^-1 R for upper triangular T.
Matrix shifted_solve(const Matrix& t, Scalar z, const Matrix& r) {
    Matrix shifted = -t;
    shifted.diagonal().array() += z;
    return shifted.triangularView<Eigen::Upper>().solve(r);
}

// Midpoint node j of an N-interval rule sits at u = -U + (2j + 1) U / N;
// the reduced fraction (2j + 1) / 2N identifies it across cycles.
struct NodeKey {
    long long num;
    long long den;
    auto operator<=>(const NodeKey&) const = default;
};

NodeKey node_key(long long j, long long intervals) {
    long long num = 2 * j + 1, den = 2 * intervals;
    while (den % 2 == 0 && num % 2 == 0) {
        num /= 2;
        den /= 2;
    }
    return {num, den};
}

// Chains C^(k-1)(t_j) at contour nodes, extended by one factor per cycle as
// long as the contour is unchanged. The solve that forms a node's update term
// also yields the node's next chain factor, which is kept for the next cycle.
// Nodes beyond the memory budget are evaluated without being stored.
class ChainCache {
public:
    static constexpr std::size_t budget_bytes = std::size_t{96} << 20;

    void reset(const ParabolicContour& contour) {
        contour_ = contour;
        entries_.clear();
        bytes_ = 0;
    }
    const ParabolicContour& contour() const { return contour_; }

    /// density * (z - T)^-1 R C^(k-1)(z) for the current cycle's factors.
    Matrix term(NodeKey key, Scalar z, Scalar density, const std::vector<CycleFactors>& history,
                const CycleFactors& current, Index c) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            const std::size_t size = 2 * static_cast<std::size_t>(c * c) * sizeof(Scalar);
            if (bytes_ + size > budget_bytes) {
                Entry scratch(Matrix::Identity(c, c));
                extend(scratch, z, history);
                return density * shifted_solve(current.t, z, current.right * scratch.chain);
            }
            bytes_ += size;
            it = entries_.emplace(key, Entry(Matrix::Identity(c, c))).first;
        }
        Entry& e = it->second;
        extend(e, z, history);
        const Matrix solved = shifted_solve(current.t, z, current.right * e.chain);
        e.next = current.left * solved;
        e.next_valid = true;
        return density * solved;
    }

private:
    struct Entry {
        explicit Entry(Matrix initial) : chain(std::move(initial)) {}
        Matrix chain;
        std::size_t applied = 0;
        // left * (z - T)^-1 right * chain for history[applied], once known.
        Matrix next;
        bool next_valid = false;
    };

    static void extend(Entry& e, Scalar z, const std::vector<CycleFactors>& history) {
        if (e.next_valid && e.applied < history.size()) {
            e.chain = std::move(e.next);
            ++e.applied;
        }
        e.next_valid = false;
        for (; e.applied < history.size(); ++e.applied) {
            const auto& h = history[e.applied];
            e.chain = h.left * shifted_solve(h.t, z, h.right * e.chain);
        }
    }

    ParabolicContour contour_;
    std::map<NodeKey, Entry> entries_;
    std::size_t bytes_ = 0;
};

// Node and integrand weight exp(z) z'(u) / (2 pi i) at midpoint j of an
// N-interval rule on [-U, U].
struct ContourSample {
    Scalar z;
    Scalar density;
};

ContourSample sample(const ParabolicContour& contour, long long j, long long intervals) {
    const double u = -contour.half_length + contour.half_length * (2 * j + 1) / intervals;
    const Scalar z = contour.point(u);
    return {z, std::exp(z) * contour.derivative(u) / Scalar(0.0, 2.0 * std::numbers::pi)};
}

bool meets_enclosing_conditions(const ParabolicContour& p, std::span<const Scalar> ritz) {
    const double reach = p.apex - p.curvature * p.half_length * p.half_length;
    for (const auto& z : ritz) {
        const double dx = p.apex - z.real();
        const double y = 1.1 * std::abs(z.imag());
        if (dx < 1.0 || y * y > 2.0 * dx * p.curvature || z.real() - 40.0 < reach - 1e-9)
            return false;
    }
    return true;
}

}  // namespace

ParabolicContour ParabolicContour::enclosing(std::span<const Scalar> ritz) {
    ParabolicContour p;
    if (ritz.empty()) {
        p.apex = 1.0;
        p.curvature = 1.0;
        p.half_length = std::sqrt(40.0);
        return p;
    }
    double right = ritz.front().real(), left = right;
    for (const auto& z : ritz) {
        right = std::max(right, z.real());
        left = std::min(left, z.real());
    }
    p.apex = right + 1.0;
    // At height y the parabola sits at apex - y^2/(4 mu); require it to pass
    // at most halfway between each padded Ritz value and the apex.
    double mu = 1.0;
    for (const auto& z : ritz) {
        const double y = 1.1 * std::abs(z.imag());
        const double dx = p.apex - z.real();
        mu = std::max(mu, y * y / (2.0 * dx));
    }
    p.curvature = mu;
    // Truncate where exp has decayed by e^-40 below the apex and the contour
    // has passed the leftmost Ritz value.
    const double depth = std::max(40.0, p.apex - left + 40.0);
    p.half_length = std::sqrt(depth / mu);
    return p;
}

Scalar ParabolicContour::point(double u) const {
    return {apex - curvature * u * u, 2.0 * curvature * u};
}

Scalar ParabolicContour::derivative(double u) const {
    return {-2.0 * curvature * u, 2.0 * curvature};
}

bool ParabolicContour::encloses(Scalar z) const {
    return z.real() < apex - z.imag() * z.imag() / (4.0 * curvature);
}

QuadratureRule exp_quadrature(const ParabolicContour& contour, int nodes) {
    QuadratureRule rule;
    const double h = 2.0 * contour.half_length / nodes;
    for (int j = 0; j < nodes; ++j) {
        const auto [z, density] = sample(contour, j, nodes);
        rule.nodes.push_back(z);
        rule.weights.push_back(h * density);
    }
    return rule;
}

QuadratureRule inverse_quadrature() {
    return {{Scalar(0.0)}, {Scalar(-1.0)}};
}

BlockVector bfomfom_single(const ScalarFunction& f, const BlockOperator& a,
                           const BlockVector& b, const InnerProductScheme& scheme, int m,
                           const ArnoldiOptions& arnoldi) {
    const auto d = block_arnoldi(a, b, scheme, m, arnoldi);
    const Index c = scheme.coefficient_size();
    const Matrix fh = funm(f, d.hessenberg());
    return d.combine(fh.leftCols(c) * d.normalization());
}

std::string to_string(RestartStatus status) {
    switch (status) {
    case RestartStatus::converged:
        return "converged";
    case RestartStatus::not_converged:
        return "not_converged";
    case RestartStatus::quadrature_saturated:
        return "saturated";
    }
    return "unknown";
}

RestartResult restarted_bfomfom(const ScalarFunction& f, const BlockOperator& a,
                                const BlockVector& b, const InnerProductScheme& scheme,
                                const RestartOptions& options) {
    const bool is_exp = f.kind() == ScalarFunction::Kind::exp;
    if (!is_exp && f.kind() != ScalarFunction::Kind::inverse)
        throw ValidationError("restarted_bfomfom: restarts are implemented for exp and "
                              "inverse only, not '" +
                              f.name() + "'");
    if (!(options.tol > 0.0))
        throw ValidationError("restarted_bfomfom: tol must be positive");
    if (options.m < 1 || options.max_cycles < 1)
        throw ValidationError("restarted_bfomfom: m and max_cycles must be positive");
    if (options.initial_nodes < 1 || options.max_nodes < 2 * options.initial_nodes)
        throw ValidationError("restarted_bfomfom: invalid quadrature node limits");

    const Index c = scheme.coefficient_size();

    RestartResult result;
    auto record_cycle = [&](CycleRecord rec) {
        if (options.observer)
            options.observer(rec, result.approximation);
        result.history.push_back(rec);
    };

    auto start = Clock::now();
    auto first = block_arnoldi(a, b, scheme, options.m, options.arnoldi);
    result.approximation =
        first.combine(funm(f, first.hessenberg()).leftCols(c) * first.normalization());
    const double first_norm = result.approximation.matrix().norm();
    if (!std::isfinite(first_norm))
        throw FunctionError("restarted_bfomfom: first cycle produced non-finite values");
    record_cycle({1, first_norm, 1.0, 0, elapsed_ms(start)});
    if (first.invariant()) {
        result.history.back().relative_update = 0.0;
        return result;
    }

    std::vector<CycleFactors> history;
    std::vector<Scalar> ritz;
    history.push_back(factorize(first));
    for (Index i = 0; i < history.back().t.rows(); ++i)
        ritz.push_back(history.back().t(i, i));
    BlockVector next_start = first.basis().back();
    ChainCache cache;

    for (int cycle = 2; cycle <= options.max_cycles; ++cycle) {
        start = Clock::now();
        auto d = block_arnoldi(a, next_start, scheme, options.m, options.arnoldi);
        CycleFactors current = factorize(d);
        for (Index i = 0; i < current.t.rows(); ++i)
            ritz.push_back(current.t(i, i));

        Matrix y;
        int used_nodes = 1;
        if (is_exp) {
            if (cycle == 2 || !meets_enclosing_conditions(cache.contour(), ritz))
                cache.reset(ParabolicContour::enclosing(ritz));
            const auto& contour = cache.contour();
            auto term = [&](long long j, long long intervals) {
                const auto [z, density] = sample(contour, j, intervals);
                return cache.term(node_key(j, intervals), z, density, history, current, c);
            };
            auto rule_sum = [&](long long nodes) {
                Matrix sum = term(0, nodes);
                for (long long j = 1; j < nodes; ++j)
                    sum += term(j, nodes);
                return Matrix((2.0 * contour.half_length / nodes) * sum);
            };
            long long n = options.initial_nodes;
            Matrix coarse = rule_sum(n);
            for (;;) {
                Matrix fine = rule_sum(2 * n);
                // compare the two candidate approximations F^(k) + V y
                const Matrix candidate =
                    result.approximation.matrix() + d.combine(current.q * fine).matrix();
                const double diff = d.combine(current.q * (fine - coarse)).matrix().norm();
                if (std::isfinite(diff) && diff <= 0.1 * options.tol * candidate.norm()) {
                    y = current.q * fine;
                    used_nodes = static_cast<int>(2 * n);
                    break;
                }
                if (2 * n >= options.max_nodes) {
                    result.status = RestartStatus::quadrature_saturated;
                    throw QuadratureSaturationError(
                        "restarted_bfomfom: error update in cycle " + std::to_string(cycle) +
                            " needs more than " + std::to_string(options.max_nodes) +
                            " quadrature nodes",
                        std::move(result), cycle);
                }
                n *= 2;
                coarse = std::move(fine);
            }
        } else {
            Matrix chain = Matrix::Identity(c, c);
            for (const auto& h : history)
                chain = h.left * shifted_solve(h.t, 0.0, h.right * chain);
            y = -(current.q * shifted_solve(current.t, 0.0, current.right * chain));
        }

        const BlockVector delta = d.combine(y);
        result.approximation.matrix() += delta.matrix();
        const double update = delta.matrix().norm();
        const double rel = update / result.approximation.matrix().norm();
        if (!std::isfinite(rel))
            throw FunctionError("restarted_bfomfom: non-finite update in cycle " +
                                std::to_string(cycle));
        record_cycle({cycle, update, rel, used_nodes, elapsed_ms(start)});

        if (d.invariant() || rel <= options.tol)
            return result;
        history.push_back(std::move(current));
        next_start = d.basis().back();
    }

    result.status = RestartStatus::not_converged;
    const double last = result.history.back().relative_update;
    throw NonConvergenceError("restarted_bfomfom: no convergence in " +
                                  std::to_string(options.max_cycles) +
                                  " cycles (last relative update " + std::to_string(last) +
                                  ")",
                              std::move(result));
}

}  // namespace tensorfun
