#include "confocal/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confocal {

namespace {

// du^k/ds factors of the common-tangent line flow at elliptic coordinates u
std::array<double, 3> line_flow_du(const CharacteristicRadical& rad,
                                   const std::array<double, 3>& u,
                                   const std::array<int, 3>& eps) {
    const double D3 = (u[0] - u[1]) * (u[0] - u[2]) * (u[1] - u[2]);
    const double s1 = std::sqrt(std::max(rad.delta(u[0]), 0.0));
    const double s2 = std::sqrt(std::max(rad.delta(u[1]), 0.0));
    const double s3 = std::sqrt(std::max(rad.delta(u[2]), 0.0));
    return {2.0 * eps[0] * s1 * (u[1] - u[2]) / D3, 2.0 * eps[1] * s2 * (u[0] - u[2]) / D3,
            2.0 * eps[2] * s3 * (u[0] - u[1]) / D3};
}

} // namespace

Line tangent_line_branch(const ConfocalFamily& f, const Vec& x, double z1p,
                         double z2p, const std::array<int, 3>& eps) {
    if (f.dim() != 3) throw Error("tangent_line_branch: 3D family required");
    CharacteristicRadical rad({f.axes[0], f.axes[1], f.axes[2]}, z1p, z2p);
    const EllipticPoint ep = to_elliptic(f, x);
    const auto du = line_flow_du(rad, ep.u, eps);
    Vec v(3);
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k)
            acc += du[std::size_t(k)] / (f.axes[std::size_t(j)] - ep.u[std::size_t(k)]);
        v(j) = -0.5 * x(j) * acc;
    }
    const double n = v.norm();
    if (n < 1e-12) throw NoRealTangentError("tangent_line_branch: degenerate direction");
    return Line(x, v / n);
}

std::vector<Line> tangent_lines_from_point(const ConfocalFamily& f, const Vec& x,
                                           double z1p, double z2p) {
    if (f.dim() != 3) throw Error("tangent_lines_from_point: 3D family required");
    if (std::abs(z1p - z2p) < f.eps_sep)
        throw ConeDegeneracyError("tangent_lines_from_point: coincident tangent quadrics");
    const double u2_0 = std::max(z1p, z2p), u3_0 = std::min(z1p, z2p);
    CharacteristicRadical rad({f.axes[0], f.axes[1], f.axes[2]}, u2_0, u3_0);
    const EllipticPoint ep = to_elliptic(f, x);
    // exterior to both fixed quadrics: Delta(u^2), Delta(u^3) >= 0
    if (rad.delta(ep.u[1]) < 0 || rad.delta(ep.u[2]) < 0)
        throw NoRealTangentError("tangent_lines_from_point: point not exterior to both quadrics");

    std::vector<Line> out;
    for (int e2 : {1, -1})
        for (int e3 : {1, -1}) {
            const Line l = tangent_line_branch(f, x, u2_0, u3_0, {1, e2, e3});
            bool dup = false;
            for (const auto& other : out)
                if ((other.dir - l.dir).norm() < 1e-10 || (other.dir + l.dir).norm() < 1e-10)
                    dup = true;
            if (!dup) out.push_back(l);
        }
    return out;
}

std::vector<std::pair<Line, Vec>> tangent_lines_2d(const ConfocalFamily& f,
                                                   const Vec& x, double zp) {
    if (f.dim() != 2) throw Error("tangent_lines_2d: 2D family required");
    const double A = f.axes[0] - zp, B = f.axes[1] - zp;
    if (!(A > 0 && B > 0)) throw PoleError("tangent_lines_2d: zp beyond axes");
    const double c1 = x(0) / std::sqrt(A), c2 = x(1) / std::sqrt(B);
    const double R = std::hypot(c1, c2);
    if (R <= 1.0) throw NoRealTangentError("tangent_lines_2d: point not exterior");
    const double phase = std::atan2(c2, c1);
    const double half = std::acos(1.0 / R);
    std::vector<std::pair<Line, Vec>> out;
    for (double tau : {phase + half, phase - half}) {
        Vec T(2);
        T << std::sqrt(A) * std::cos(tau), std::sqrt(B) * std::sin(tau);
        Vec d = T - x;
        out.emplace_back(Line(x, d / d.norm()), T);
    }
    return out;
}

namespace {

// x^j(t) = 0 crossing of a segment, if inside (t0, t1)
bool plane_crossing(const Vec& base, const Vec& dir, int j, double t0, double t1,
                    double* t_out = nullptr) {
    if (std::abs(dir(j)) < 1e-15) return false;
    const double t = -base(j) / dir(j);
    if (t > t0 + 1e-11 && t < t1 - 1e-11) {
        if (t_out) *t_out = t;
        return true;
    }
    return false;
}

// tangency parameter of the segment with Q_z, if the contact is interior
bool segment_tangency(const ConfocalFamily& f, double z, const Vec& base, const Vec& dir,
                      double t0, double t1, double* t_out = nullptr) {
    double A = 0.0, B = 0.0, C = -1.0;
    for (int j = 0; j < f.dim(); ++j) {
        const double d = f.axes[std::size_t(j)] - z;
        A += dir(j) * dir(j) / d;
        B += base(j) * dir(j) / d;
        C += base(j) * base(j) / d;
    }
    if (std::abs(A) < 1e-15) return false;
    const double disc = B * B - A * C;
    if (std::abs(disc) > 1e-7 * (std::abs(B * B) + std::abs(A * C) + 1e-30)) return false;
    const double t = -B / A;
    if (t > t0 + 1e-11 && t < t1 - 1e-11) {
        if (t_out) *t_out = t;
        return true;
    }
    return false;
}

} // namespace

DarbouxPolygon build_polygon(const std::array<double, 3>& axes, const Vec& start,
                             double u2_0, double u3_0, double u3_1, int steps,
                             const std::array<int, 3>& first_branch) {
    if (!(u3_1 < u3_0)) throw RangeError("build_polygon: u3_1 < u3_0 required");
    ConfocalFamily f({axes[0], axes[1], axes[2]});
    DarbouxPolygon poly;
    poly.axes = axes;
    poly.u2_0 = u2_0;
    poly.u3_0 = u3_0;
    poly.u3_1 = u3_1;

    // start must lie on the vertex ellipsoid
    if (std::abs(eval_Q(f, u3_1, start)) > 1e-8)
        throw OffQuadricError("build_polygon: start not on the vertex ellipsoid");

    Vec x = start;
    Line chord = tangent_line_branch(f, x, u2_0, u3_0, first_branch);
    Vec d = chord.dir;

    poly.vertices.push_back(x);
    poly.directions.push_back(d);
    double perimeter = 0.0;
    int n_x1 = 0, n_x2 = 0, n_x3 = 0, n_tang = 0;

    for (int step = 0; step < steps; ++step) {
        const auto hits = intersect_line_quadric(f, u3_1, Line(x, d));
        // t = 0 is the current vertex; take the forward root
        double t_next = 0.0;
        bool found = false;
        for (const auto& [t, pt] : hits)
            if (t > 1e-9) {
                t_next = t;
                found = true;
            }
        if (!found) throw NoRealTangentError("build_polygon: chord does not return to the vertex quadric");

        if (plane_crossing(x, d, 0, 0, t_next)) ++n_x1;
        if (plane_crossing(x, d, 1, 0, t_next)) ++n_x2;
        if (plane_crossing(x, d, 2, 0, t_next)) ++n_x3;
        if (segment_tangency(f, u2_0, x, d, 0, t_next)) ++n_tang;
        double t_ell = 0.0;
        if (segment_tangency(f, u3_0, x, d, -1e300, 1e300, &t_ell))
            poly.ellipsoid_tangency.push_back(x + t_ell * d);
        else
            poly.ellipsoid_tangency.push_back(x + 0.5 * t_next * d); // should not happen

        const Vec xn = x + t_next * d;
        perimeter += t_next;

        // branch by continuity: specular reflection of the incoming direction
        const Vec r = reflect(d, normal_hat(f, u3_1, xn));
        double best = -2.0;
        Vec best_dir = r;
        for (int e2 : {1, -1})
            for (int e3 : {1, -1}) {
                const Line cand = tangent_line_branch(f, xn, u2_0, u3_0, {1, e2, e3});
                for (double sgn : {1.0, -1.0}) {
                    const double sc = sgn * cand.dir.dot(r);
                    if (sc > best) {
                        best = sc;
                        best_dir = sgn * cand.dir;
                    }
                }
            }
        x = xn;
        d = best_dir;
        poly.vertices.push_back(x);
        poly.directions.push_back(d);
    }

    poly.perimeter = perimeter;
    poly.closure_gap = (poly.vertices.back() - poly.vertices.front()).norm();
    poly.direction_gap = (poly.directions.back() - poly.directions.front()).norm();
    double diameter = 2.0 * std::sqrt(axes[0] - u3_1);
    poly.closed = poly.closure_gap < 1e-6 * diameter;
    // minimal p: reject closure occurring already at a proper divisor
    for (int k = 1; k < steps; ++k) {
        if (steps % k != 0) continue;
        const double gap_k = (poly.vertices[std::size_t(k)] - poly.vertices.front()).norm();
        const double dgap_k = (poly.directions[std::size_t(k)] - poly.directions.front()).norm();
        if (gap_k < 1e-6 * diameter && dgap_k < 1e-6) poly.minimal = false;
    }
    if (!poly.minimal) poly.closed = false;
    poly.measured = WindingCounts();
    poly.measured.n = n_x2;
    poly.measured.nprime = n_tang;
    poly.measured.m = steps;
    poly.x1_crossings = n_x1;
    poly.x3_crossings = n_x3;
    return poly;
}

Chasles2D chasles_polygon_2d(const ConfocalFamily& f2, const std::vector<double>& zs,
                             double theta0) {
    if (f2.dim() != 2) throw Error("chasles_polygon_2d: 2D family required");
    for (double z : zs)
        if (!(z < 0)) throw RangeError("chasles_polygon_2d: all z_j < 0 required");
    const double a1 = f2.axes[0], a2 = f2.axes[1];
    const std::size_t p = zs.size();

    Chasles2D out;
    auto base_point = [&](double th) {
        Vec v(2);
        v << std::sqrt(a1) * std::cos(th), std::sqrt(a2) * std::sin(th);
        return v;
    };
    auto base_tangent = [&](double th) {
        Vec v(2);
        v << -std::sqrt(a1) * std::sin(th), std::sqrt(a2) * std::cos(th);
        return Vec(v / v.norm());
    };

    double theta = theta0;
    out.thetas.push_back(theta);
    out.tangency_points.push_back(base_point(theta));
    Vec T = base_point(theta);
    Vec d = base_tangent(theta);

    double worst_tang = 0.0;
    for (std::size_t j = 0; j < p + 1; ++j) {
        const double z = zs[j % p];
        // forward intersection of the tangent line with the z-ellipse
        const auto hits = intersect_line_quadric(f2, z, Line(T, d));
        if (hits.empty()) throw NoRealTangentError("chasles_polygon_2d: chord misses the ellipse");
        double t_next = hits.back().first; // the forward root (T is interior)
        if (t_next <= 0) throw NoRealTangentError("chasles_polygon_2d: no forward intersection");
        const Vec v = T + t_next * d;
        out.vertices.push_back(v);
        if (j == p) break; // closure test vertex only

        // second tangent from v: pick the tangency point != current T
        const auto tl = tangent_lines_2d(f2, v, 0.0);
        const Vec T_in = T;
        const auto& pick = ((tl[0].second - T_in).norm() > (tl[1].second - T_in).norm())
                               ? tl[0]
                               : tl[1];
        T = pick.second;
        // orient forward: tangency parameter positive along the chord
        Vec nd = pick.first.dir;
        if ((T - v).dot(nd) < 0) nd = -nd;
        d = nd;
        // unwrapped tangency angle
        double th_new = std::atan2(T(1) / std::sqrt(a2), T(0) / std::sqrt(a1));
        while (th_new < theta) th_new += 2 * M_PI;
        theta = th_new;
        out.thetas.push_back(theta);
        out.tangency_points.push_back(T);
        // tangency defect of the new chord against the base ellipse
        double A = 0, B = 0, C = -1;
        for (int k = 0; k < 2; ++k) {
            A += nd(k) * nd(k) / f2.axes[std::size_t(k)];
            B += v(k) * nd(k) / f2.axes[std::size_t(k)];
            C += v(k) * v(k) / f2.axes[std::size_t(k)];
        }
        worst_tang = std::max(worst_tang, std::abs(B * B - A * C));
    }
    out.base_tangency_residual = worst_tang;

    for (std::size_t j = 0; j + 1 < out.vertices.size(); ++j)
        out.perimeter += (out.vertices[j + 1] - out.vertices[j]).norm();
    out.closure_gap = (out.vertices.back() - out.vertices.front()).norm();
    out.closed = out.closure_gap < 1e-6 * 2.0 * std::sqrt(a1 - zs[0]);
    return out;
}

std::optional<double> find_poncelet_parameter(const ConfocalFamily& f2, int p,
                                              double z_lo, double z_hi) {
    auto advance = [&](double z) {
        std::vector<double> zs(std::size_t(p), z);
        const Chasles2D poly = chasles_polygon_2d(f2, zs, 0.37);
        return poly.thetas[std::size_t(p)] - poly.thetas[0] - 2 * M_PI;
    };
    double lo = z_lo, hi = z_hi;
    double flo = advance(lo), fhi = advance(hi);
    if (flo * fhi > 0) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = advance(mid);
        if (std::abs(hi - lo) < 1e-14) break;
        if (flo * fm <= 0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

DualizeResult dualize_polygon(const ConfocalFamily& f,
                              const std::vector<Vec>& vertices,
                              const std::vector<Vec>& tangency_points,
                              double vertex_z, double caustic_z) {
    const std::size_t p = vertices.size();
    if (p < 2 || tangency_points.size() != p)
        throw HypothesisError("dualize_polygon: need matching vertex/tangency lists");
    const int d = f.dim();

    // Ivory scalings between the caustic quadric and the vertex quadric
    Vec up(d), down(d);
    for (int j = 0; j < d; ++j) {
        const double aj = f.axes[std::size_t(j)];
        up(j) = std::sqrt((aj - vertex_z) / (aj - caustic_z));
        down(j) = 1.0 / up(j);
    }

    DualizeResult out;
    // output arrays keep the input convention: tangency_points[j] lies on the
    // side vertices[j] -> vertices[j+1]
    for (std::size_t j = 0; j < p; ++j) {
        out.vertices.push_back(Vec(tangency_points[j].cwiseProduct(up)));
        out.tangency_points.push_back(Vec(vertices[(j + 1) % p].cwiseProduct(down)));
    }

    // verify: each new side contains the Ivory image of the old vertex and is
    // tangent to the caustic there; reflection holds at the new vertices
    double worst_tang = 0.0, worst_refl = 0.0;
    std::vector<Vec> dirs(p);
    for (std::size_t j = 0; j < p; ++j) {
        const Vec& A = out.vertices[j];
        const Vec& B = out.vertices[(j + 1) % p];
        Vec dir = B - A;
        const double len = dir.norm();
        out.perimeter += len;
        dir /= len;
        dirs[j] = dir;
        const Vec& T = out.tangency_points[j];
        // distance of T from the side line
        const Vec w = T - A;
        const Vec perp = w - w.dot(dir) * dir;
        worst_tang = std::max(worst_tang, perp.norm() / std::max(1.0, len));
        // tangency of the side to the caustic quadric
        double qa = 0, qb = 0, qc = -1;
        for (int k = 0; k < d; ++k) {
            const double den = f.axes[std::size_t(k)] - caustic_z;
            qa += dir(k) * dir(k) / den;
            qb += A(k) * dir(k) / den;
            qc += A(k) * A(k) / den;
        }
        worst_tang = std::max(worst_tang, std::abs(qb * qb - qa * qc));
    }
    for (std::size_t j = 0; j < p; ++j) {
        const Vec& v = out.vertices[j];
        const Vec d_in = dirs[(j + p - 1) % p];
        const Vec d_out = dirs[j];
        Vec n(d);
        for (int k = 0; k < f.dim(); ++k) n(k) = v(k) / (f.axes[std::size_t(k)] - vertex_z);
        worst_refl = std::max(worst_refl, (reflect(d_in, n) - d_out).norm());
    }
    out.tangency_residual = worst_tang;
    out.reflection_residual = worst_refl;
    out.closure_gap = 0.0; // cyclic by construction
    out.closed = worst_refl < 1e-6 && worst_tang < 1e-6;
    return out;
}

} // namespace confocal
