#include <doctest.h>

#include "support.hpp"
#include "tensorfun/netcomm.hpp"

using namespace tensorfun;

namespace {

AdjacencyTensor toy_network() {
    // 3 nodes; layer 1 links 1-2, layer 2 links 2-3
    Tensor3 t(3, 3, 2);
    t(0, 1, 0) = t(1, 0, 0) = 1.0;
    t(1, 2, 1) = t(2, 1, 1) = 1.0;
    return AdjacencyTensor(std::move(t));
}

std::string message_of(const Tensor3& t) {
    try {
        AdjacencyTensor a(t);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("empty network has unit centralities") {
    const Communicability c(AdjacencyTensor(Tensor3(4, 4, 3)));
    for (double v : c.centralities())
        CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.at(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single layer reduces to the matrix exponential") {
    Tensor3 t(3, 3, 1);
    t(0, 1, 0) = t(1, 0, 0) = 1.0;
    const Communicability c{AdjacencyTensor(t)};
    // exp([[0,1],[1,0]]) = [[cosh 1, sinh 1], [sinh 1, cosh 1]]
    CHECK(std::abs(c.centrality(0) - std::cosh(1.0)) <= 1e-15);
    CHECK(std::abs(c.at(0, 1, 0) - std::sinh(1.0)) <= 1e-15);
    CHECK(std::abs(c.centrality(2) - 1.0) <= 1e-15);
}

TEST_CASE("toy network matches frozen reference values") {
    const AdjacencyTensor a = toy_network();
    // tests/oracles/frozen_values.py
    const double ref[2][3][3] = {
        {{1.5890917783042855, 1.368298872008591, 0.0},
         {1.368298872008591, 2.178183556608571, 0.0},
         {0.0, 0.0, 1.5890917783042855}},
        {{0.0, 0.0, 0.5890917783042854},
         {0.0, 0.0, 1.3682988720085907},
         {0.5890917783042855, 1.3682988720085907, 0.0}}};
    for (auto backend : {Backend::dense, Backend::facewise}) {
        const Communicability c(a, backend);
        for (Index k = 0; k < 2; ++k)
            for (Index i = 0; i < 3; ++i)
                for (Index j = 0; j < 3; ++j)
                    CHECK(std::abs(c.at(i, j, k) - ref[k][i][j]) <= 1e-14);
    }
    CHECK(std::abs(communicability(a, 1, 2, 1) - 1.3682988720085907) <= 1e-14);
    CHECK(std::abs(centrality(a, 1) - 2.178183556608571) <= 1e-14);

    // nodes 1 and 3 tie; the lower index ranks first
    const auto ranked = Communicability(a).ranking();
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].node == 1);
    CHECK(ranked[1].node == 0);
    CHECK(ranked[2].node == 2);
}

TEST_CASE("index checks") {
    const AdjacencyTensor a = toy_network();
    CHECK_THROWS_AS(communicability(a, 3, 0, 0), DimensionError);
    CHECK_THROWS_AS(communicability(a, 0, 0, 2), DimensionError);
    CHECK_THROWS_AS(centrality(a, -1), DimensionError);
}

TEST_CASE("adjacency validation reports the first bad entry") {
    Tensor3 weighted(3, 3, 2);
    weighted(0, 2, 1) = weighted(2, 0, 1) = 2.0;
    CHECK(message_of(weighted) == "adjacency entry at (3, 1, 2) is not 0 or 1");

    Tensor3 loop(3, 3, 1);
    loop(1, 1, 0) = 1.0;
    CHECK(message_of(loop) == "self loop at (2, 2, 1)");

    Tensor3 directed(3, 3, 2);
    directed(0, 1, 1) = 1.0;
    CHECK(message_of(directed) == "face 2 is not symmetric at (2, 1, 2)");

    CHECK_THROWS_AS(AdjacencyTensor(Tensor3(2, 3, 1)), ValidationError);
}

TEST_CASE("random networks are valid and reproducible") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto a = random_network_tensor(12, 3, 0.3, seed);
        CHECK(a.nodes() == 12);
        CHECK(a.layers() == 3);
    }
    const auto x = random_network_tensor(30, 4, 0.2, 7);
    const auto y = random_network_tensor(30, 4, 0.2, 7);
    const auto z = random_network_tensor(30, 4, 0.2, 8);
    CHECK(x.tensor() == y.tensor());
    CHECK_FALSE(x.tensor() == z.tensor());

    double edges = 0.0;
    for (const auto& v : x.tensor().data())
        edges += v.real();
    const double expected = 0.2 * 30 * 29 * 4;  // both triangles
    CHECK(std::abs(edges - expected) <= 0.15 * expected);

    CHECK_THROWS_AS(random_network_tensor(1, 3, 0.2, 1), ValidationError);
    CHECK_THROWS_AS(random_network_tensor(5, 3, 1.0, 1), ValidationError);
}
