#include "slab/fixtures.hpp"

#include <cmath>
#include <stdexcept>

#include "slab/dynamics.hpp"

namespace slab {

StaeckelData vandermonde_linear() {
    WorkingBox box;
    box.range = {{{0.5, 1.0}, {1.5, 2.0}, {2.5, 3.0}}};
    const Poly1 t({0.0, 1.0});
    return vandermonde(t, t, t, box);
}

StaeckelData constant_data() {
    StaeckelData data;
    data.rows[0] = {Poly1({1.0}), Poly1({1.0}), Poly1({1.0})};
    data.rows[1] = {Poly1({-1.0}), Poly1({-2.0}), Poly1({-4.0})};
    data.rows[2] = {Poly1({1.0}), Poly1({3.0}), Poly1({9.0})};
    data.box.range = {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
    return data;
}

StaeckelData flat_data() {
    StaeckelData data;
    data.rows[0] = {Poly1({3.0}), Poly1({3.0}), Poly1({3.0})};
    data.rows[1] = {Poly1({-3.0}), Poly1({-6.0}), Poly1({-12.0})};
    data.rows[2] = {Poly1({1.0}), Poly1({3.0}), Poly1({9.0})};
    data.box.range = {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
    return data;
}

StaeckelData random_quadratic(std::uint64_t seed) {
    Rng rng(seed);
    const StaeckelData base = vandermonde_linear();
    for (int attempt = 0; attempt < 200; ++attempt) {
        StaeckelData data = base;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                Poly1 bump({rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                            rng.uniform(-0.05, 0.05)});
                data.rows[i][k] = data.rows[i][k] + bump;
            }
        if (certify(data, 8).ok) return data;
    }
    throw std::runtime_error("random_quadratic: no certified draw after 200 attempts");
}

PhasePoint random_phase_point(const StaeckelData& data, Rng& rng, double shrink) {
    PhasePoint p;
    for (int i = 0; i < 3; ++i) {
        const double lo = data.box.lo(i), hi = data.box.hi(i);
        const double pad = shrink * (hi - lo);
        p.pos[i] = rng.uniform(lo + pad, hi - pad);
    }
    for (int i = 0; i < 3; ++i) p.mom[i] = rng.uniform(-1.0, 1.0);
    return p;
}

std::vector<Wall> inset_walls(const WorkingBox& box, double inset) {
    std::vector<Wall> walls;
    for (int i = 0; i < 3; ++i) {
        const double pad = inset * (box.hi(i) - box.lo(i));
        walls.push_back({i, box.lo(i) + pad, +1});
        walls.push_back({i, box.hi(i) - pad, -1});
    }
    return walls;
}

PhasePoint billiard_start(const StaeckelData& data, Rng& rng) {
    PhasePoint p;
    for (int i = 0; i < 3; ++i)
        p.pos[i] = 0.5 * (data.box.lo(i) + data.box.hi(i));
    for (int i = 0; i < 3; ++i) {
        p.mom[i] = rng.uniform(-1.0, 1.0);
        if (std::abs(p.mom[i]) < 0.2) p.mom[i] = p.mom[i] < 0.0 ? -0.2 : 0.2;
    }
    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const double h = H.value(p);
    const double s = std::sqrt(0.5 / h);
    for (int i = 0; i < 3; ++i) p.mom[i] *= s;
    return p;
}

}  // namespace slab
