#pragma once

#include <cstdint>
#include <vector>

#include "tensorfun/tfunc.hpp"

namespace tensorfun {

enum class LayerSemantics { multilayer, temporal };

/**
 * n x n x p adjacency tensor of an undirected, unweighted multilayer or
 * temporal network: every frontal slice is symmetric, binary and has a
 * zero diagonal. Construction validates these and reports the first
 * offending (i, j, k), 1-based.
 */
class AdjacencyTensor {
public:
    explicit AdjacencyTensor(Tensor3 tensor,
                             LayerSemantics semantics = LayerSemantics::multilayer);

    const Tensor3& tensor() const noexcept { return tensor_; }
    LayerSemantics semantics() const noexcept { return semantics_; }
    Index nodes() const noexcept { return tensor_.rows(); }
    Index layers() const noexcept { return tensor_.depth(); }

private:
    Tensor3 tensor_;
    LayerSemantics semantics_;
};

/// exp(A) as real slices, shared by batch communicability/centrality queries.
class Communicability {
public:
    explicit Communicability(const AdjacencyTensor& a, Backend backend = Backend::automatic);

    /// exp(A)_{ijk}, 0-based.
    double at(Index i, Index j, Index k) const;
    /// Diagonal entry of the first frontal slice of exp(A), exp(A)_{ii1}.
    /// It is defined for every node and equals exp(A)_{ii} when p = 1.
    double centrality(Index i) const;
    std::vector<double> centralities() const;

    struct Ranked {
        Index node;
        double value;
    };
    /// Nodes by descending centrality; ties broken by ascending index.
    std::vector<Ranked> ranking() const;

    const std::vector<RealMatrix>& exponential() const noexcept { return exp_; }

private:
    std::vector<RealMatrix> exp_;
};

/// exp(A)_{ijk} with 0-based indices.
double communicability(const AdjacencyTensor& a, Index i, Index j, Index k,
                       Backend backend = Backend::automatic);
/// exp(A)_{ii1}; see Communicability::centrality.
double centrality(const AdjacencyTensor& a, Index i, Backend backend = Backend::automatic);

/// Seeded random tensor: every face an independent symmetric, zero-diagonal
/// binary matrix with edge probability `density`.
AdjacencyTensor random_network_tensor(Index n, Index p, double density, std::uint64_t seed);

}  // namespace tensorfun
