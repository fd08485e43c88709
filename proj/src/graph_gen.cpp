#include "currents/graph_gen.hpp"

#include <cmath>
#include <vector>

namespace currents {

std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : label) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    SplitMix64 rng(seed ^ hash_label(label));
    return rng.next();
}

double seeded_conductance(SplitMix64& rng) {
    return std::pow(10.0, 6.0 * rng.next_double() - 3.0);
}

namespace {

int require_square(int n) {
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (k * k != n) {
        throw generation_error("grid2d needs a perfect-square vertex count, got " +
                               std::to_string(n));
    }
    return k;
}

int require_power_of_two(int n) {
    int d = 0;
    int v = n;
    while (v > 1 && v % 2 == 0) {
        v /= 2;
        ++d;
    }
    if (v != 1 || d < 1) {
        throw generation_error("hypercube needs a power-of-two vertex count, got " +
                               std::to_string(n));
    }
    return d;
}

std::vector<Edge> structural_edges(const FamilySpec& spec) {
    const int n = spec.n;
    std::vector<Edge> edges;
    if (spec.family == "path") {
        if (n < 2) throw generation_error("path needs n >= 2");
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    } else if (spec.family == "cycle") {
        if (n < 3) throw generation_error("cycle needs n >= 3");
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
        edges.push_back({n - 1, 0, 1.0});
    } else if (spec.family == "star") {
        if (n < 2) throw generation_error("star needs n >= 2");
        for (int i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
    } else if (spec.family == "complete") {
        if (n < 2) throw generation_error("complete needs n >= 2");
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
        }
    } else if (spec.family == "grid2d") {
        const int k = require_square(n);
        if (k < 2) throw generation_error("grid2d needs n >= 4");
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
                const int v = r * k + c;
                if (c + 1 < k) edges.push_back({v, v + 1, 1.0});
                if (r + 1 < k) edges.push_back({v, v + k, 1.0});
            }
        }
    } else if (spec.family == "hypercube") {
        const int d = require_power_of_two(n);
        for (int v = 0; v < n; ++v) {
            for (int bit = 0; bit < d; ++bit) {
                const int u = v ^ (1 << bit);
                if (u > v) edges.push_back({v, u, 1.0});
            }
        }
    } else {
        throw generation_error("unknown graph family '" + spec.family + "'");
    }
    return edges;
}

WeightedMultigraph generate_gnp(const FamilySpec& spec) {
    const int n = spec.n;
    if (n < 2) throw generation_error("gnp needs n >= 2");
    if (!(spec.p > 0.0) || !(spec.p <= 1.0)) {
        throw generation_error("gnp needs edge probability in (0, 1]");
    }
    SplitMix64 rng(derive_seed(spec.seed, "gnp;structure"));
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.next_double() < spec.p) edges.push_back({i, j, 1.0});
            }
        }
        if (!edges.empty() && is_connected(n, edges)) {
            return build_graph(edges, n);
        }
    }
    throw generation_error("gnp stayed disconnected after 100 attempts (n = " +
                           std::to_string(n) + ", p = " + std::to_string(spec.p) + ")");
}

WeightedMultigraph generate_gadget(const FamilySpec& spec) {
    if (spec.m < 2) throw generation_error("parallel_gadget needs m >= 2");
    if (!(spec.big > 0.0)) throw generation_error("parallel_gadget needs big > 0");
    std::vector<Edge> edges(static_cast<std::size_t>(spec.m), Edge{0, 1, 1.0});
    edges.back().conductance = spec.big;
    return build_graph(edges, 2);
}

WeightedMultigraph with_seeded_conductances(const WeightedMultigraph& g, const FamilySpec& spec) {
    SplitMix64 rng(derive_seed(spec.seed, spec.family + ";conductances"));
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.conductance = seeded_conductance(rng);
    return build_graph(edges, g.vertex_count());
}

}  // namespace

WeightedMultigraph generate(const FamilySpec& spec) {
    if (spec.family == "parallel_gadget") {
        return generate_gadget(spec);
    }
    if (spec.family == "gnp" || spec.family == "random_weighted") {
        FamilySpec inner = spec;
        inner.family = "gnp";
        WeightedMultigraph g = generate_gnp(inner);
        const bool seeded = spec.family == "random_weighted" || spec.mode == ConductanceMode::seeded;
        return seeded ? with_seeded_conductances(g, inner) : g;
    }
    WeightedMultigraph g = build_graph(structural_edges(spec), spec.n);
    return spec.mode == ConductanceMode::seeded ? with_seeded_conductances(g, spec) : g;
}

}  // namespace currents
