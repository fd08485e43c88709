#ifndef CURRENTS_GRAPH_GEN_HPP
#define CURRENTS_GRAPH_GEN_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "currents/graph.hpp"

namespace currents {

struct generation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// splitmix64. The exact sequence is part of the external replay contract:
/// reports name the seed, and any reimplementation of this generator must
/// reproduce the same graphs.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// FNV-1a over the label bytes.
std::uint64_t hash_label(std::string_view label);

/// Stream seed for a named purpose: one splitmix64 step of seed ^ FNV-1a(label).
/// Keeps structurally different draws (edges vs conductances vs test vectors)
/// on independent streams under one user-facing seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

enum class ConductanceMode { unit, seeded };

/// Log-uniform conductance in [1e-3, 1e3] from one uniform draw.
double seeded_conductance(SplitMix64& rng);

struct FamilySpec {
    std::string family;
    int n = 0;
    int m = 0;
    double p = 0.3;
    double big = 0.0;
    ConductanceMode mode = ConductanceMode::unit;
    std::uint64_t seed = 0;
};

/// Families: path, cycle, star, complete, grid2d (n a perfect square),
/// hypercube (n a power of two), gnp (resampled until connected, at most 100
/// attempts), parallel_gadget (2 vertices, m-1 unit edges plus one of
/// conductance big), random_weighted (gnp with conductances always seeded).
WeightedMultigraph generate(const FamilySpec& spec);

}  // namespace currents

#endif
