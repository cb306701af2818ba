#include "tensorfun/netcomm.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace tensorfun {

namespace {

std::string position(Index i, Index j, Index k) {
    return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ", " +
           std::to_string(k + 1) + ")";
}

void check_index(const char* what, Index i, Index bound) {
    if (i < 0 || i >= bound)
        throw DimensionError(std::string(what) + " index " + std::to_string(i) +
                             " outside 0.." + std::to_string(bound - 1));
}

}  // namespace

AdjacencyTensor::AdjacencyTensor(Tensor3 tensor, LayerSemantics semantics)
    : tensor_(std::move(tensor)), semantics_(semantics) {
    if (tensor_.rows() != tensor_.cols())
        throw ValidationError("adjacency tensor faces must be square");
    for (Index k = 0; k < tensor_.depth(); ++k)
        for (Index j = 0; j < tensor_.cols(); ++j)
            for (Index i = 0; i < tensor_.rows(); ++i) {
                const Scalar v = tensor_(i, j, k);
                if (v != Scalar(0.0) && v != Scalar(1.0))
                    throw ValidationError("adjacency entry at " + position(i, j, k) +
                                          " is not 0 or 1");
                if (i == j && v != Scalar(0.0))
                    throw ValidationError("self loop at " + position(i, j, k));
                if (v != tensor_(j, i, k))
                    throw ValidationError("face " + std::to_string(k + 1) +
                                          " is not symmetric at " + position(i, j, k));
            }
}

Communicability::Communicability(const AdjacencyTensor& a, Backend backend) {
    TFunctionOptions options;
    options.backend = backend;
    exp_ = cast_real(t_function_of(ScalarFunction::exp(), a.tensor(), options));
}

double Communicability::at(Index i, Index j, Index k) const {
    const Index n = exp_.front().rows();
    check_index("node", i, n);
    check_index("node", j, n);
    check_index("layer", k, static_cast<Index>(exp_.size()));
    return exp_[static_cast<std::size_t>(k)](i, j);
}

double Communicability::centrality(Index i) const { return at(i, i, 0); }

std::vector<double> Communicability::centralities() const {
    const Index n = exp_.front().rows();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = centrality(i);
    return out;
}

std::vector<Communicability::Ranked> Communicability::ranking() const {
    const std::vector<double> c = centralities();
    std::vector<Ranked> r;
    r.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        r.push_back({static_cast<Index>(i), c[i]});
    std::stable_sort(r.begin(), r.end(),
                     [](const Ranked& x, const Ranked& y) { return x.value > y.value; });
    return r;
}

double communicability(const AdjacencyTensor& a, Index i, Index j, Index k, Backend backend) {
    check_index("node", i, a.nodes());
    check_index("node", j, a.nodes());
    check_index("layer", k, a.layers());
    return Communicability(a, backend).at(i, j, k);
}

double centrality(const AdjacencyTensor& a, Index i, Backend backend) {
    check_index("node", i, a.nodes());
    return Communicability(a, backend).centrality(i);
}

AdjacencyTensor random_network_tensor(Index n, Index p, double density, std::uint64_t seed) {
    if (n < 2 || p < 1)
        throw ValidationError("random_network_tensor: need n >= 2 and p >= 1");
    if (!(density > 0.0 && density < 1.0))
        throw ValidationError("random_network_tensor: density must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    // 53 random bits, so the stream is identical across standard libraries.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Tensor3 t(n, n, p);
    for (Index k = 0; k < p; ++k)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < j; ++i)
                if (uniform() < density)
                    t(i, j, k) = t(j, i, k) = 1.0;
    return AdjacencyTensor(std::move(t));
}

}  // namespace tensorfun
