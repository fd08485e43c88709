#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "currents/graph.hpp"
#include "currents/graph_gen.hpp"

using namespace currents;

namespace {

FamilySpec spec_for(const std::string& family, int n,
                    ConductanceMode mode = ConductanceMode::unit, std::uint64_t seed = 7) {
    FamilySpec spec;
    spec.family = family;
    spec.n = n;
    spec.mode = mode;
    spec.seed = seed;
    return spec;
}

std::multiset<std::pair<int, int>> edge_pairs(const WeightedMultigraph& g) {
    std::multiset<std::pair<int, int>> pairs;
    for (const Edge& e : g.edges()) pairs.insert({e.tail, e.head});
    return pairs;
}

}  // namespace

TEST_CASE("splitmix64 reproduces its published sequence") {
    SplitMix64 zero(0);
    CHECK(zero.next() == 0xe220a8397b1dcdafULL);
    CHECK(zero.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(zero.next() == 0x06c45d188009454fULL);

    SplitMix64 seven(7);
    CHECK(seven.next() == 0x63cbe1e459320dd7ULL);
    CHECK(seven.next() == 0x044c3cd7f43c661cULL);
    CHECK(seven.next() == 0xe6984080bab12a02ULL);

    SplitMix64 beagle(42);
    CHECK(beagle.next() == 0xbdd732262feb6e95ULL);
    CHECK(beagle.next() == 0x28efe333b266f103ULL);
    CHECK(beagle.next() == 0x47526757130f9f52ULL);
}

TEST_CASE("splitmix64 doubles use the top 53 bits") {
    SplitMix64 rng(7);
    CHECK(rng.next_double() == 0.3898297483912715);
    CHECK(rng.next_double() == 0.01678829452815611);
    CHECK(rng.next_double() == 0.9007606806068834);
    CHECK(rng.next_double() == 0.5829302930280781);
}

TEST_CASE("hash_label is FNV-1a") {
    CHECK(hash_label("") == 0xcbf29ce484222325ULL);
    CHECK(hash_label("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hash_label("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("derive_seed composes the hash with one generator step") {
    CHECK(derive_seed(7, "x") == SplitMix64(7 ^ hash_label("x")).next());
    CHECK(derive_seed(7, "x") == 0xbdc542ea21c8f8bfULL);
    CHECK(derive_seed(7, "y") == 0xf5212bfd55b26b61ULL);
    CHECK(derive_seed(7, "x") != derive_seed(8, "x"));
}

TEST_CASE("structural families have the expected shape") {
    const WeightedMultigraph path = generate(spec_for("path", 5));
    CHECK(path.vertex_count() == 5);
    CHECK(path.edge_count() == 4);
    CHECK(edge_pairs(path) ==
          std::multiset<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});

    const WeightedMultigraph cycle = generate(spec_for("cycle", 5));
    CHECK(cycle.edge_count() == 5);
    CHECK(edge_pairs(cycle).count({4, 0}) == 1);

    const WeightedMultigraph star = generate(spec_for("star", 6));
    CHECK(star.edge_count() == 5);
    for (const Edge& e : star.edges()) CHECK(e.tail == 0);

    const WeightedMultigraph complete = generate(spec_for("complete", 5));
    CHECK(complete.edge_count() == 10);

    const WeightedMultigraph grid = generate(spec_for("grid2d", 9));
    CHECK(grid.vertex_count() == 9);
    CHECK(grid.edge_count() == 12);

    const WeightedMultigraph cube = generate(spec_for("hypercube", 8));
    CHECK(cube.edge_count() == 12);
    for (const Edge& e : cube.edges()) {
        const int diff = e.tail ^ e.head;
        CHECK((diff & (diff - 1)) == 0);
    }

    for (const char* family : {"path", "cycle", "star", "complete", "grid2d", "hypercube"}) {
        CHECK(generate(spec_for(family, family == std::string("grid2d") ? 16 : 8))
                  .unit_conductance());
    }
}

TEST_CASE("generate rejects invalid specs") {
    CHECK_THROWS_AS(generate(spec_for("path", 1)), generation_error);
    CHECK_THROWS_AS(generate(spec_for("cycle", 2)), generation_error);
    CHECK_THROWS_AS(generate(spec_for("grid2d", 10)), generation_error);
    CHECK_THROWS_AS(generate(spec_for("grid2d", 1)), generation_error);
    CHECK_THROWS_AS(generate(spec_for("hypercube", 12)), generation_error);
    CHECK_THROWS_AS(generate(spec_for("mystery", 8)), generation_error);
}

TEST_CASE("gnp is deterministic per seed and connected") {
    FamilySpec spec = spec_for("gnp", 16);
    spec.p = 0.3;
    const WeightedMultigraph a = generate(spec);
    const WeightedMultigraph b = generate(spec);
    CHECK(edge_pairs(a) == edge_pairs(b));
    CHECK(is_connected(a.vertex_count(), a.edges()));

    spec.seed = 8;
    const WeightedMultigraph c = generate(spec);
    CHECK(edge_pairs(a) != edge_pairs(c));
}

TEST_CASE("gnp with p = 1 is the complete graph") {
    FamilySpec spec = spec_for("gnp", 6);
    spec.p = 1.0;
    CHECK(generate(spec).edge_count() == 15);
}

TEST_CASE("gnp validates p and gives up after repeated disconnection") {
    FamilySpec spec = spec_for("gnp", 8);
    spec.p = 0.0;
    CHECK_THROWS_AS(generate(spec), generation_error);
    spec.p = 1.5;
    CHECK_THROWS_AS(generate(spec), generation_error);
    spec.p = 1e-9;
    CHECK_THROWS_AS(generate(spec), generation_error);
}

TEST_CASE("seeded conductances are log-uniform in range and reproducible") {
    FamilySpec spec = spec_for("cycle", 12, ConductanceMode::seeded);
    const WeightedMultigraph a = generate(spec);
    CHECK_FALSE(a.unit_conductance());
    for (const Edge& e : a.edges()) {
        CHECK(e.conductance >= 1e-3);
        CHECK(e.conductance <= 1e3);
    }

    const WeightedMultigraph b = generate(spec);
    for (int e = 0; e < a.edge_count(); ++e) {
        CHECK(a.edge(e).conductance == b.edge(e).conductance);
    }

    spec.seed = 9;
    const WeightedMultigraph c = generate(spec);
    bool any_differ = false;
    for (int e = 0; e < a.edge_count(); ++e) {
        any_differ = any_differ || a.edge(e).conductance != c.edge(e).conductance;
    }
    CHECK(any_differ);

    // The topology is untouched by the conductance mode.
    CHECK(edge_pairs(a) == edge_pairs(generate(spec_for("cycle", 12))));
}

TEST_CASE("seeded_conductance stays inside its window") {
    SplitMix64 rng(123);
    for (int i = 0; i < 1000; ++i) {
        const double c = seeded_conductance(rng);
        CHECK(c >= 1e-3);
        CHECK(c <= 1e3);
    }
}

TEST_CASE("parallel gadget stacks unit edges plus one big edge") {
    FamilySpec spec;
    spec.family = "parallel_gadget";
    spec.m = 5;
    spec.big = 500.0;
    const WeightedMultigraph g = generate(spec);
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 5);
    for (int e = 0; e < 4; ++e) CHECK(g.edge(e).conductance == 1.0);
    CHECK(g.edge(4).conductance == 500.0);

    spec.m = 1;
    CHECK_THROWS_AS(generate(spec), generation_error);
    spec.m = 5;
    spec.big = 0.0;
    CHECK_THROWS_AS(generate(spec), generation_error);
}

TEST_CASE("random_weighted always draws conductances") {
    FamilySpec spec = spec_for("random_weighted", 10);
    spec.p = 0.4;
    const WeightedMultigraph g = generate(spec);
    CHECK_FALSE(g.unit_conductance());
    CHECK(is_connected(g.vertex_count(), g.edges()));

    // Same seed, explicit seeded mode: identical graph.
    spec.mode = ConductanceMode::seeded;
    const WeightedMultigraph h = generate(spec);
    CHECK(edge_pairs(g) == edge_pairs(h));
    for (int e = 0; e < g.edge_count(); ++e) {
        CHECK(g.edge(e).conductance == h.edge(e).conductance);
    }
}
