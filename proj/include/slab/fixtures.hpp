#pragma once

#include <cstdint>
#include <vector>

#include "slab/billiard.hpp"
#include "slab/staeckel.hpp"

namespace slab {

/// Deterministic uniform generator: identical output on every platform for a
/// given seed (53-bit mantissa draw from a fixed 64-bit engine).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    int sign() { return (next() & 1u) ? 1 : -1; }

private:
    std::uint64_t next() {  // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

/// Separable-coordinate data with psi_i(t) = t over disjoint intervals;
/// certified Riemannian on [0.5,1]x[1.5,2]x[2.5,3].
StaeckelData vandermonde_linear();

/// Constant-coefficient data, g = diag(1/3, 1/3, 1).
StaeckelData constant_data();

/// Constant-coefficient data whose metric is exactly the Euclidean one.
StaeckelData flat_data();

/// Seeded degree-2 perturbation of the linear separable data, re-drawn until
/// the certification grid passes. Deterministic in the seed.
StaeckelData random_quadratic(std::uint64_t seed);

/// Random phase point: position uniform in the (slightly shrunk) box,
/// momenta uniform in [-1,1].
PhasePoint random_phase_point(const StaeckelData& data, Rng& rng, double shrink = 0.1);

/// Six coordinate walls placed `inset` fraction inside the working box.
std::vector<Wall> inset_walls(const WorkingBox& box, double inset = 0.08);

/// Start state for billiard runs: center of the wall-bounded domain, momenta
/// drawn from the rng and rescaled to H = 1/2.
PhasePoint billiard_start(const StaeckelData& data, Rng& rng);

}  // namespace slab
