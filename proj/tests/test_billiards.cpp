#include <doctest.h>

#include <cmath>

#include "confocal/billiards.hpp"
#include "confocal/rng.hpp"
#include "confocal/threads.hpp"

using namespace confocal;

namespace {
const std::array<double, 3> AX{3.0, 2.0, 1.0};
const ConfocalFamily F3({3.0, 2.0, 1.0});
const ConfocalFamily F2({2.0, 1.0});
}

TEST_CASE("tangent lines from an exterior point: four lines, verified spectra") {
    EllipticPoint p;
    p.u = {2.6, 1.2, 0.1}; // exterior to u2_0 = 1.5 and u3_0 = 0.5
    const Vec x = to_cartesian(F3, p);
    const auto lines = tangent_lines_from_point(F3, x, 1.5, 0.5);
    REQUIRE(lines.size() == 4);
    for (const auto& l : lines) {
        CHECK(std::abs(l.dir.norm() - 1.0) < 1e-12);
        const auto s = tangency_spectrum(F3, l);
        REQUIRE(s.values.size() == 2);
        CHECK(std::abs(s.values[0].z - 0.5) < 1e-8);
        CHECK(std::abs(s.values[1].z - 1.5) < 1e-8);
    }

    // pairwise related by reflections in the three principal tangent planes
    const EllipticPoint ep = to_elliptic(F3, x);
    int paired = 0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b)
            for (int k = 0; k < 3; ++k) {
                const Vec n = normal_hat(F3, ep.u[std::size_t(k)], x, 1e-6);
                const Vec r = reflect(lines[a].dir, n);
                if ((r - lines[b].dir).norm() < 1e-9 || (r + lines[b].dir).norm() < 1e-9)
                    ++paired;
            }
    CHECK(paired >= 6); // each pair related through exactly one tangent plane

    CHECK_THROWS_AS(tangent_lines_from_point(F3, x, 1.5, 1.5), ConeDegeneracyError);

    // interior point has no real tangents
    EllipticPoint inside;
    inside.u = {2.6, 1.2, 0.8}; // u3 > u3_0: inside the ellipsoid
    CHECK_THROWS_AS(tangent_lines_from_point(F3, to_cartesian(F3, inside), 1.5, 0.5),
                    NoRealTangentError);
}

TEST_CASE("2D tangent lines via pole-polar") {
    Vec x(2);
    x << 2.0, 1.1;
    const auto tl = tangent_lines_2d(F2, x, 0.0);
    REQUIRE(tl.size() == 2);
    for (const auto& [line, T] : tl) {
        CHECK(std::abs(eval_Q(F2, 0.0, T)) < 1e-12);
        // the chord x -> T is tangent at T: direction orthogonal to the normal
        const Vec n = normal_hat(F2, 0.0, T, 1e-9);
        CHECK(std::abs(line.dir.dot(n)) < 1e-10);
    }
    Vec inside(2);
    inside << 0.3, 0.2;
    CHECK_THROWS_AS(tangent_lines_2d(F2, inside, 0.0), NoRealTangentError);
}

TEST_CASE("Darboux polygon: reference configuration closes with correct counts") {
    const ClosureResult sol = solve_closure(AX, 0.5, WindingCounts(4, 6, 12),
                                            ClosureMode::darboux2);
    REQUIRE(sol.found);

    EllipticPoint start_ep;
    start_ep.u = {2.61, 1.07, sol.u3_1};
    const Vec start = to_cartesian(F3, start_ep);
    const DarbouxPolygon poly = build_polygon(AX, start, sol.u2_0, 0.5, sol.u3_1, 12);
    CHECK(poly.closed);
    const double diameter = 2 * std::sqrt(AX[0] - sol.u3_1);
    CHECK(poly.closure_gap < 1e-8 * diameter);
    CHECK(poly.direction_gap < 1e-8);
    CHECK(poly.measured.n == 4);
    CHECK(poly.measured.nprime == 6);
    CHECK(poly.x1_crossings == poly.measured.n);      // alternation audit
    CHECK(poly.x3_crossings == poly.measured.nprime); // alternation audit

    // perimeter equals the closed-form value
    CharacteristicRadical rad(AX, sol.u2_0, 0.5);
    const double formula =
        perimeter_formula(rad, sol.u3_1, WindingCounts(4, 6, 12), PerimeterVariant::darb);
    CHECK(std::abs(poly.perimeter - formula) < 1e-9 * formula);

    // both closure conditions hold with the measured counts
    const auto [r1, r2] = darboux_residuals(rad, sol.u3_1, poly.measured);
    CHECK(std::abs(r1) < 1e-8);
    CHECK(std::abs(r2) < 1e-8);

    // every chord is tangent to exactly the two declared quadrics
    for (std::size_t i = 0; i + 1 < poly.vertices.size(); ++i) {
        const Vec d = poly.directions[i];
        const auto s = tangency_spectrum(F3, Line(poly.vertices[i], d));
        REQUIRE(s.values.size() == 2);
        CHECK(std::abs(s.values[0].z - 0.5) < 1e-7);
        CHECK(std::abs(s.values[1].z - sol.u2_0) < 1e-7);
    }

    // reflection predicate at interior vertices
    for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i) {
        const Vec n = normal_hat(F3, sol.u3_1, poly.vertices[i], 1e-7);
        const Vec r = reflect(poly.directions[i - 1], n);
        CHECK((r - poly.directions[i]).norm() < 1e-8);
    }
}

TEST_CASE("Darboux polygon: perimeter invariant under start perturbation") {
    const ClosureResult sol = solve_closure(AX, 0.5, WindingCounts(4, 6, 12),
                                            ClosureMode::darboux2);
    REQUIRE(sol.found);
    SplitMix64 rng(41);
    std::vector<double> perims;
    for (int i = 0; i < 8; ++i) {
        EllipticPoint ep;
        ep.u = {AX[1] + (AX[0] - AX[1]) * rng.uniform(0.2, 0.8),
                AX[2] + (sol.u2_0 - AX[2]) * rng.uniform(0.2, 0.8), sol.u3_1};
        const DarbouxPolygon poly =
            build_polygon(AX, to_cartesian(F3, ep), sol.u2_0, 0.5, sol.u3_1, 12);
        CHECK(poly.closed);
        perims.push_back(poly.perimeter);
    }
    const double mn = *std::min_element(perims.begin(), perims.end());
    const double mx = *std::max_element(perims.begin(), perims.end());
    CHECK((mx - mn) / mn < 1e-9);
}

TEST_CASE("Chasles 2D: Poncelet triangle search and perimeter constancy") {
    const auto z = find_poncelet_parameter(F2, 3, -8.0, -0.02);
    REQUIRE(z.has_value());
    std::vector<double> perims;
    for (int i = 0; i < 16; ++i) {
        const double th0 = 2 * M_PI * i / 16;
        const Chasles2D poly = chasles_polygon_2d(F2, {*z, *z, *z}, th0);
        CHECK(poly.closed);
        CHECK(poly.closure_gap < 1e-9);
        CHECK(poly.base_tangency_residual < 1e-10);
        perims.push_back(poly.perimeter);
    }
    const double mn = *std::min_element(perims.begin(), perims.end());
    const double mx = *std::max_element(perims.begin(), perims.end());
    CHECK((mx - mn) / mn < 1e-8);
}

TEST_CASE("Chasles 2D: collapsing confocal ellipse shrinks the chord") {
    // z -> 0^-: the vertex ellipse collapses onto the base ellipse
    double prev_len = 1e300;
    for (double z : {-0.5, -0.1, -0.01, -0.001}) {
        const Chasles2D poly = chasles_polygon_2d(F2, {z}, 0.7);
        const double len = (poly.vertices[0] - poly.tangency_points[0]).norm();
        CHECK(len < prev_len);
        prev_len = len;
    }
    CHECK(prev_len < 0.05);
}

TEST_CASE("dualization: Poncelet triangle, twice, and iterated") {
    const auto z = find_poncelet_parameter(F2, 3, -8.0, -0.02);
    REQUIRE(z.has_value());
    const Chasles2D poly = chasles_polygon_2d(F2, {*z, *z, *z}, 0.45);
    REQUIRE(poly.closed);
    std::vector<Vec> verts(poly.vertices.begin(), poly.vertices.begin() + 3);
    std::vector<Vec> tangs;
    for (int j = 0; j < 3; ++j) tangs.push_back(poly.tangency_points[std::size_t(j + 1)]);

    const DualizeResult d1 = dualize_polygon(F2, verts, tangs, *z, 0.0);
    CHECK(d1.closed);
    CHECK(std::abs(d1.perimeter - poly.perimeter) < 1e-8 * poly.perimeter);
    CHECK(d1.tangency_residual < 1e-9);
    CHECK(d1.reflection_residual < 1e-9);

    // dualizing twice gives a polygon satisfying all predicates again
    const DualizeResult d2 = dualize_polygon(F2, d1.vertices, d1.tangency_points, *z, 0.0);
    CHECK(d2.closed);
    CHECK(std::abs(d2.perimeter - poly.perimeter) < 1e-8 * poly.perimeter);

    // iteration: perimeters all equal over 10 steps
    std::vector<Vec> cv = verts, ct = tangs;
    for (int it = 0; it < 10; ++it) {
        const DualizeResult d = dualize_polygon(F2, cv, ct, *z, 0.0);
        CHECK(std::abs(d.perimeter - poly.perimeter) < 1e-6 * poly.perimeter);
        CHECK(d.tangency_residual < 1e-6);
        cv = d.vertices;
        ct = d.tangency_points;
    }
}

TEST_CASE("dualization of the 3D Darboux polygon") {
    const ClosureResult sol = solve_closure(AX, 0.5, WindingCounts(4, 6, 12),
                                            ClosureMode::darboux2);
    REQUIRE(sol.found);
    EllipticPoint ep;
    ep.u = {2.55, 1.11, sol.u3_1};
    const DarbouxPolygon poly =
        build_polygon(AX, to_cartesian(F3, ep), sol.u2_0, 0.5, sol.u3_1, 12);
    REQUIRE(poly.closed);
    std::vector<Vec> verts(poly.vertices.begin(), poly.vertices.begin() + 12);
    const DualizeResult d =
        dualize_polygon(F3, verts, poly.ellipsoid_tangency, sol.u3_1, 0.5);
    CHECK(d.closed);
    CHECK(d.tangency_residual < 1e-6);
    CHECK(d.reflection_residual < 1e-6);
    CHECK(std::abs(d.perimeter - poly.perimeter) < 1e-6 * poly.perimeter);
}


TEST_CASE("single-vertex Chasles step reproduces the Graves vertex") {
    const double a1 = 2.0, a2 = 1.0;
    const auto zopt = find_poncelet_parameter(F2, 3, -8.0, -0.02);
    const double z = zopt ? *zopt : -1.0;
    for (double th0 : {0.3, 1.7, 3.9}) {
        const Chasles2D poly = chasles_polygon_2d(F2, {z}, th0);
        REQUIRE(poly.vertices.size() >= 1);
        const Vec& v0 = poly.vertices[0];
        // pen angle of the vertex on the z-ellipse
        const double thp = std::atan2(v0(1) / std::sqrt(a2 - z), v0(0) / std::sqrt(a1 - z));
        const GravesVertex gv = graves_vertex(a1, a2, z, thp);
        // the construction's incoming/outgoing tangency angles match the closed forms
        auto norm_angle = [](double t) {
            while (t < 0) t += 2 * M_PI;
            while (t >= 2 * M_PI) t -= 2 * M_PI;
            return t;
        };
        const double in_t = norm_angle(poly.thetas[0]);
        const double out_t = norm_angle(poly.thetas[1]);
        const double g1 = norm_angle(gv.theta1), g2n = norm_angle(gv.theta2);
        const bool match =
            (std::abs(in_t - g1) < 1e-9 && std::abs(out_t - g2n) < 1e-9) ||
            (std::abs(in_t - g2n) < 1e-9 && std::abs(out_t - g1) < 1e-9);
        CHECK(match);
        // reflection at the vertex in the z-ellipse
        Vec d_in = v0 - poly.tangency_points[0];
        d_in /= d_in.norm();
        Vec d_out = poly.tangency_points[1] - v0;
        d_out /= d_out.norm();
        const Vec n = normal_hat(F2, z, v0, 1e-8);
        CHECK((reflect(d_in, n) - d_out).norm() < 1e-9);
    }
}
