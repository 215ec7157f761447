#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "slab/fixtures.hpp"
#include "slab/staeckel.hpp"
#include "slab/webs.hpp"

using namespace slab;

namespace {

Vec3 box_center(const WorkingBox& box) {
    return {0.5 * (box.lo(0) + box.hi(0)), 0.5 * (box.lo(1) + box.hi(1)),
            0.5 * (box.lo(2) + box.hi(2))};
}

double gdot(const DiagonalField& g, const Vec3& a, const Vec3& b) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += g.coeff[i].v * a[i] * b[i];
    return acc;
}

WorkingBox unit_box() {
    WorkingBox b;
    b.range = {{{0.5, 1.5}, {1.5, 2.5}, {2.5, 3.5}}};
    return b;
}

}  // namespace

TEST_CASE("web directions solve the pencil equations") {
    const StaeckelData data = vandermonde_linear();
    const Vec3 p = box_center(data.box);
    const auto lm = pencil_parameters(data, p, {1.0, 1.0, 1.0});
    const WebDirectionSet ws = web_directions(data, p, lm[0], lm[1]);

    const DiagonalField g = metric(data, p);
    const IntegralPair I = integrals(data, p);
    const double rscale = 1.0 + std::abs(lm[0]) + std::abs(lm[1]);
    for (int k = 0; k < 4; ++k) {
        const Vec3& tau = ws.tau[k];
        CHECK(gdot(g, tau, tau) == doctest::Approx(1.0).epsilon(1e-12));
        double i2 = 0.0, i3 = 0.0;
        for (int i = 0; i < 3; ++i) {
            i2 += I.I2.coeff[i].v * tau[i] * tau[i];
            i3 += I.I3.coeff[i].v * tau[i] * tau[i];
        }
        CHECK(std::abs(i2 - lm[0]) <= 1e-10 * rscale);
        CHECK(std::abs(i3 - lm[1]) <= 1e-10 * rscale);
    }
    // the four directions are pairwise non-collinear
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            CHECK(std::abs(gdot(g, ws.tau[a], ws.tau[b])) < 1.0 - 1e-6);
}

TEST_CASE("pencil parameter preconditions") {
    const StaeckelData data = vandermonde_linear();
    const Vec3 p = box_center(data.box);
    CHECK_THROWS_AS(pencil_parameters(data, p, {0.0, 0.0, 0.0}), std::invalid_argument);
    // sign-mixed pencil factors violate the realness condition
    CHECK_THROWS_AS(web_directions(constant_data(), {0.0, 0.0, 0.0}, 0.0, 0.0),
                    std::domain_error);
}

TEST_CASE("coordinate reflections permute the directions") {
    const StaeckelData data = vandermonde_linear();
    const Vec3 p = box_center(data.box);
    const auto lm = pencil_parameters(data, p, {1.0, 1.0, 1.0});
    const WebDirectionSet ws = web_directions(data, p, lm[0], lm[1]);
    const ReflectionReport rep = reflection_permutes(data, ws);
    CHECK(rep.max_angle_mismatch <= 1e-9);
    // sign-pair bookkeeping: reflection in the plane of axis i flips e_k, e_l
    // or both, in the pattern of the direction components
    const std::array<std::array<int, 4>, 3> expected{{
        {2, 3, 0, 1},  // x-reflection: (e_k, e_l) -> (-e_k, e_l)
        {1, 0, 3, 2},  // y-reflection: (e_k, e_l) -> (e_k, -e_l)
        {3, 2, 1, 0},  // z-reflection: (e_k, e_l) -> (-e_k, -e_l)
    }};
    for (int axis = 0; axis < 3; ++axis)
        for (int k = 0; k < 4; ++k) CHECK(rep.perm[axis][k] == expected[axis][k]);
    // each row is an involution
    for (int axis = 0; axis < 3; ++axis)
        for (int k = 0; k < 4; ++k) CHECK(rep.perm[axis][rep.perm[axis][k]] == k);
}

TEST_CASE("abelian relations of the four-web") {
    const StaeckelData data = vandermonde_linear();
    const Vec3 c = box_center(data.box);
    const auto lm = pencil_parameters(data, c, {1.0, 1.0, 1.0});
    const auto rels = abelian_relations_a1_a2(data, lm[0], lm[1], 1, 1);

    Rng rng(202);
    int checked = 0;
    for (int n = 0; n < 60 && checked < 25; ++n) {
        Vec3 p;
        for (int i = 0; i < 3; ++i) {
            const double w = data.box.hi(i) - data.box.lo(i);
            p[i] = c[i] + 0.2 * w * (rng.uniform01() - 0.5);
        }
        WebDirectionSet ws;
        try {
            ws = web_directions(data, p, lm[0], lm[1]);
        } catch (const std::domain_error&) {
            continue;  // outside the realness region of these parameters
        }
        ++checked;
        for (const AbelianRelation& rel : rels) {
            double scale = 0.0;
            for (int i = 0; i < 4; ++i) {
                const Vec3 s = rel.sigma[i].at(p);
                for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(s[j]));
            }
            // the four forms sum to zero
            for (int j = 0; j < 3; ++j) {
                double sum = 0.0;
                for (int i = 0; i < 4; ++i) sum += rel.sigma[i].at(p)[j];
                CHECK(std::abs(sum) <= 1e-13 * scale);
            }
            // sigma_i vanishes on the i-th coordinate foliation
            for (int i = 0; i < 3; ++i) {
                const Vec3 s = rel.sigma[i].at(p);
                for (int j = 0; j < 3; ++j)
                    if (j != i) CHECK(s[j] == 0.0);
            }
            // sigma_4 annihilates the curve direction tau_(1,1)
            CHECK(std::abs(rel.sigma[3].on(p, ws.tau[0])) <= 1e-10 * scale);
        }
    }
    CHECK(checked >= 25);

    // the two relations are independent: their curve forms are not collinear
    const Vec3 s1 = rels[0].sigma[3].at(c), s2 = rels[1].sigma[3].at(c);
    const Vec3 cross{s1[1] * s2[2] - s1[2] * s2[1], s1[2] * s2[0] - s1[0] * s2[2],
                     s1[0] * s2[1] - s1[1] * s2[0]};
    const double n1 = std::sqrt(s1[0] * s1[0] + s1[1] * s1[1] + s1[2] * s1[2]);
    const double n2 = std::sqrt(s2[0] * s2[0] + s2[1] * s2[1] + s2[2] * s2[2]);
    const double nc =
        std::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
    CHECK(nc > 1e-3 * n1 * n2);
}

TEST_CASE("grid rank of simple three-webs") {
    GridWebSpec spec;
    spec.box = unit_box();
    spec.grid_n = 6;
    spec.surfaces = {true, true, false};

    spec.curve_field = [](const Vec3&) { return Vec3{1.0, -1.0, 0.0}; };
    const RankReport r1 = estimate_web_rank(spec);
    CHECK(r1.rank == 1);
    REQUIRE(r1.basis.size() == 1);
    // the relation is u = v = const: all stacked samples equal
    const auto& b = r1.basis[0];
    for (double x : b) CHECK(x == doctest::Approx(b[0]).epsilon(1e-8));

    // recovered span matches the sampled analytic relation
    auto one = [](double) { return 1.0; };
    const std::vector<double> analytic = sample_relation(spec, one, one, one);
    CHECK(span_angle(r1.basis, {analytic}) <= 1e-7);

    // a twisted field admits no separated relation at all
    spec.curve_field = [](const Vec3& p) { return Vec3{p[2], 1.0, 0.0}; };
    CHECK(estimate_web_rank(spec).rank == 0);
}

TEST_CASE("rank estimator preconditions") {
    GridWebSpec spec;
    spec.box = unit_box();
    spec.grid_n = 6;
    spec.curve_field = [](const Vec3&) { return Vec3{1.0, -1.0, 0.5}; };

    GridWebSpec coarse = spec;
    coarse.grid_n = 3;
    CHECK_THROWS_AS(estimate_web_rank(coarse), std::invalid_argument);

    GridWebSpec empty = spec;
    empty.surfaces = {false, false, false};
    CHECK_THROWS_AS(estimate_web_rank(empty), std::invalid_argument);

    // a participating foliation whose component vanishes identically is a
    // degenerate web
    GridWebSpec degen = spec;
    degen.curve_field = [](const Vec3&) { return Vec3{1.0, 0.0, 1.0}; };
    CHECK_THROWS_AS(estimate_web_rank(degen), std::invalid_argument);

    // the field vanishes at the low-x corner nodes
    GridWebSpec vanish = spec;
    vanish.curve_field = [](const Vec3& p) {
        const double s = p[0] - 0.5;
        return Vec3{s, -s, 0.5 * s};
    };
    CHECK_THROWS_AS(estimate_web_rank(vanish), std::invalid_argument);

    CHECK_THROWS_AS(span_angle({}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("connection of hexagonal three-webs") {
    GridWebSpec spec;
    spec.box = unit_box();
    spec.surfaces = {true, true, false};

    // constant field: flat coframe, zero connection and curvature
    spec.curve_field = [](const Vec3&) { return Vec3{1.0, -1.0, 1.0}; };
    ConnectionReport rep = connection_and_curvature(spec, {1.0, 2.0, 3.0}, 1e-3);
    CHECK(rep.connection_exists);
    CHECK(rep.existence_residual <= 1e-9);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(rep.gamma[j]) <= 1e-9);
    CHECK(rep.curvature_norm <= 1e-6);

    // z-dependent third component only tilts the third coframe leg; the web
    // stays hexagonal
    spec.curve_field = [](const Vec3& p) { return Vec3{1.0, -1.0, 1.0 + 0.5 * p[2]}; };
    rep = connection_and_curvature(spec, {1.0, 2.0, 3.0}, 1e-3);
    CHECK(rep.connection_exists);
    CHECK(rep.curvature_norm <= 1e-6);
}

TEST_CASE("connection obstruction and degenerate coframe") {
    GridWebSpec spec;
    spec.box = unit_box();
    spec.surfaces = {true, true, false};

    // z-dependence of the y-component produces a w2^w3 term that no pair
    // (gamma, web structure) can absorb
    spec.curve_field = [](const Vec3& p) { return Vec3{1.0, 1.0 + 0.5 * p[2], 0.0}; };
    const ConnectionReport rep = connection_and_curvature(spec, {1.0, 2.0, 3.0}, 1e-3);
    CHECK_FALSE(rep.connection_exists);
    CHECK(rep.existence_residual > 1e-3);

    spec.curve_field = [](const Vec3&) { return Vec3{0.0, 1.0, 1.0}; };
    CHECK_THROWS_AS(connection_and_curvature(spec, {1.0, 2.0, 3.0}, 1e-3),
                    std::invalid_argument);
}
