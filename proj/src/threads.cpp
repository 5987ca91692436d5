#include "confocal/threads.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confocal {

namespace {

double wrap_near(double angle, double center) {
    while (angle < center - M_PI) angle += 2 * M_PI;
    while (angle > center + M_PI) angle -= 2 * M_PI;
    return angle;
}

} // namespace

GravesVertex graves_vertex(double a1, double a2, double z, double theta0) {
    if (!(a1 > a2 && a2 > 0)) throw Error("graves_vertex: a1 > a2 > 0 required");
    if (!(z < 0)) throw RangeError("graves_vertex: z < 0 required");
    const double c0 = std::cos(theta0), s0 = std::sin(theta0);
    const double al = std::sqrt(1.0 - z / a1), be = std::sqrt(1.0 - z / a2);
    const double mu = s0 * s0 / a2 + c0 * c0 / a1;
    const double rho = std::sqrt(-z * mu);
    const double den = 1.0 - z * mu;

    GravesVertex v;
    v.a1 = a1;
    v.a2 = a2;
    v.z = z;
    v.theta0 = theta0;
    double th[2];
    for (int j = 1; j <= 2; ++j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0; // -(-1)^j
        const double cj = (c0 * al + sgn * s0 * be * rho) / den;
        const double sj = (s0 * be - sgn * c0 * al * rho) / den;
        th[j - 1] = wrap_near(std::atan2(sj, cj), theta0);
    }
    v.theta1 = std::min(th[0], th[1]);
    v.theta2 = std::max(th[0], th[1]);

    // tangency-configuration residual for both angles
    double worst = 0.0;
    for (double t : {v.theta1, v.theta2})
        worst = std::max(worst,
                         std::abs(c0 * al * std::cos(t) + s0 * be * std::sin(t) - 1.0));
    v.tc_residual = worst;

    // collinearity of x_z^1, x_0^0, x_z^2
    const double xz1x = std::sqrt(a1 - z) * std::cos(v.theta1),
                 xz1y = std::sqrt(a2 - z) * std::sin(v.theta1);
    const double xz2x = std::sqrt(a1 - z) * std::cos(v.theta2),
                 xz2y = std::sqrt(a2 - z) * std::sin(v.theta2);
    const double x0x = std::sqrt(a1) * c0, x0y = std::sqrt(a2) * s0;
    v.collinearity_residual =
        std::abs((xz1x - x0x) * (xz2y - x0y) - (xz1y - x0y) * (xz2x - x0x)) /
        std::max(1.0, std::hypot(xz1x - x0x, xz1y - x0y) * std::hypot(xz2x - x0x, xz2y - x0y));
    return v;
}

double graves_excess(double a1, double a2, double z, double theta0) {
    const GravesVertex v = graves_vertex(a1, a2, z, theta0);
    const double chord = std::hypot(std::sqrt(a1 - z) * (std::cos(v.theta1) - std::cos(v.theta2)),
                                    std::sqrt(a2 - z) * (std::sin(v.theta1) - std::sin(v.theta2)));
    const double arc = integrate_smooth(
        [&](double th) {
            const double st = std::sin(th), ct = std::cos(th);
            return std::sqrt(a1 * st * st + a2 * ct * ct);
        },
        v.theta1, v.theta2);
    return chord - arc;
}

namespace {

struct ArcMeasures {
    const CharacteristicRadical& rad;

    double u1_of(double chi) const {
        const double s = std::sin(chi);
        return rad.axes[1] + (rad.axes[0] - rad.axes[1]) * s * s;
    }
    // dA1/dchi and ds/dchi along the curvature line (u^2, u^3) = (u2_0, u3_0)
    double action_density(double chi) const {
        const double u = u1_of(chi);
        const double g1 = (u - rad.u2_0) * (u - rad.u3_0) * (u - rad.axes[2]);
        return 2.0 * (u - rad.u3_0) / std::sqrt(g1);
    }
    double length_density(double chi) const {
        const double u = u1_of(chi);
        const double g1 = (u - rad.u2_0) * (u - rad.u3_0) * (u - rad.axes[2]);
        return (u - rad.u2_0) * (u - rad.u3_0) / std::sqrt(g1);
    }
    Vec point(double chi, int branch) const {
        GeodesicState st;
        st.phi1 = chi;
        st.phi2 = branch > 0 ? 0.5 * M_PI : -0.5 * M_PI;
        return geodesic_cartesian(rad, st);
    }
};

// advance along the curvature line from chi by the given action, in direction sgn
double chi_for_action(const ArcMeasures& am, double chi0, int sgn, double action,
                      double tol = 1e-12) {
    if (action < 0) throw Error("chi_for_action: negative action");
    if (action == 0) return chi0;
    auto measure = [&](double dchi) {
        return integrate_smooth([&](double t) { return am.action_density(t); }, chi0,
                                chi0 + sgn * dchi) *
               sgn;
    };
    double hi = 0.5;
    while (measure(hi) < action) {
        hi *= 2.0;
        if (hi > 64 * M_PI) throw Error("chi_for_action: action out of range");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (measure(mid) < action) lo = mid;
        else hi = mid;
        if (hi - lo < tol) break;
    }
    return chi0 + sgn * 0.5 * (lo + hi);
}

struct LegTrace {
    Line line;
    double t_ell = 0.0;     // pen -> ellipsoid tangency
    double t_hyp = 0.0;     // hyperboloid tangency parameter (may be off-segment)
    bool early_touch = false;
    Vec touch_point;        // where the continued geodesic reaches u^2 = u2_0
    GeodesicState touch_state;
    double geo_length = 0.0;
    std::vector<Vec> geo_polyline;
    int x3_crossings = 0;
    int x1_events = 0, x2_events = 0;
    double junction_dot = 0.0;
};

LegTrace trace_leg(const ConfocalFamily& f, const CharacteristicRadical& rad,
                   const Vec& pen, const std::array<int, 3>& eps) {
    LegTrace leg{Line(Vec::Zero(3), Vec::Unit(3, 0))};
    leg.line = tangent_line_branch(f, pen, rad.u2_0, rad.u3_0, eps);

    // tangency parameters along the line
    auto tangency = [&](double zq, double& t) {
        double A = 0, B = 0, C = -1;
        for (int j = 0; j < 3; ++j) {
            const double den = f.axes[std::size_t(j)] - zq;
            A += leg.line.dir(j) * leg.line.dir(j) / den;
            B += leg.line.base(j) * leg.line.dir(j) / den;
            C += leg.line.base(j) * leg.line.base(j) / den;
        }
        t = -B / A;
        return std::abs(B * B - A * C);
    };
    const double disc_e = tangency(rad.u3_0, leg.t_ell);
    const double disc_h = tangency(rad.u2_0, leg.t_hyp);
    if (disc_e > 1e-7 || leg.t_ell <= 0)
        throw Error("trace_leg: leg not tangent to the ellipsoid ahead of the pen");
    (void)disc_h;
    leg.early_touch = (leg.t_hyp > 1e-10 && leg.t_hyp < leg.t_ell - 1e-10);

    const Vec T = leg.line.base + leg.t_ell * leg.line.dir;

    // continue as a geodesic until the first caustic touch
    GeodesicState st = geodesic_start_from_direction(rad, T, leg.line.dir);
    leg.junction_dot = geodesic_tangent(rad, st).dot(leg.line.dir);
    GeodesicOptions opts;
    opts.stop_at_caustic_touch = 1;
    GeodesicPath path = integrate_geodesic(rad, st, 1e4, opts);
    leg.touch_state = path.end;
    leg.touch_point = geodesic_cartesian(rad, path.end);
    leg.geo_length = path.end.s - st.s;
    for (const auto& s : path.states) leg.geo_polyline.push_back(geodesic_cartesian(rad, s));
    for (const auto& ev : path.events) {
        if (ev.kind == GeodesicEventKind::u2_at_a3) ++leg.x3_crossings;
        if (ev.kind == GeodesicEventKind::u1_at_a1) ++leg.x1_events;
        if (ev.kind == GeodesicEventKind::u1_at_a2) ++leg.x2_events;
    }
    return leg;
}

int branch_of(const Vec& x) { return x(2) >= 0 ? 1 : -1; }

} // namespace

StaudeThread assemble_staude_thread(const std::array<double, 3>& axes, double u2_0,
                                    double u3_0, double u3_1, double azimuth) {
    if (!(axes[1] > u2_0 && u2_0 > axes[2] && axes[2] > u3_0 && u3_0 > u3_1))
        throw RangeError("assemble_staude_thread: need a2 > u2_0 > a3 > u3_0 > u3_1");
    ConfocalFamily f({axes[0], axes[1], axes[2]});
    CharacteristicRadical rad(axes, u2_0, u3_0);

    StaudeThread th;
    th.axes = axes;
    th.u2_0 = u2_0;
    th.u3_0 = u3_0;
    th.u3_1 = u3_1;
    th.half_turn = half_turn_criterion(rad);

    // predicted curvature slack: 2 x the closure residual at (n, n', m) = (2,2,1)
    const std::vector<double> ku{-u3_0, 1.0};
    const double rho = 2.0 * hyperelliptic(rad, ku, axes[1], axes[0]) -
                       2.0 * hyperelliptic(rad, ku, axes[2], u2_0) +
                       hyperelliptic(rad, ku, u3_1, u3_0);
    th.slack_predicted = 2.0 * rho;
    if (th.slack_predicted < -1e-9) {
        std::ostringstream os;
        os << "assemble_staude_thread: required curvature slack " << th.slack_predicted
           << " negative (half-turn criterion " << th.half_turn
           << "); thread impossible for this pen position";
        throw InfeasibleThreadError(os.str());
    }

    // pen in general position on {u^3 = u3_1}
    EllipticPoint pep;
    pep.u = {axes[1] + (axes[0] - axes[1]) * (0.5 + 0.35 * std::sin(azimuth)),
             axes[2] + (u2_0 - axes[2]) * (0.5 + 0.35 * std::cos(azimuth)), u3_1};
    pep.sigma = {1, 1, 1};
    th.pen = to_cartesian(f, pep);

    // two rectilinear legs; the pair is related by the reflection in the
    // tangent plane of the pen ellipsoid (the vertex reflection at the pen)
    LegTrace legA = trace_leg(f, rad, th.pen, {1, 1, 1});
    LegTrace legB = trace_leg(f, rad, th.pen, {-1, -1, 1});

    const int brA = branch_of(legA.touch_point), brB = branch_of(legB.touch_point);
    const ArcMeasures am{rad};
    th.early_touch_a = legA.early_touch;
    th.early_touch_b = legB.early_touch;

    th.junction_residual = std::max(1.0 - legA.junction_dot, 1.0 - legB.junction_dot);

    auto piece_line = [&](const LegTrace& leg, bool reversed) {
        ThreadSegment seg;
        seg.kind = SegmentKind::rectilinear;
        seg.length = leg.t_ell;
        const Vec T = leg.line.base + leg.t_ell * leg.line.dir;
        if (reversed) {
            seg.polyline = {T, leg.line.base};
        } else {
            seg.polyline = {leg.line.base, T};
        }
        return seg;
    };
    auto piece_geo = [&](const LegTrace& leg, bool reversed) {
        ThreadSegment seg;
        seg.kind = SegmentKind::geodesic;
        seg.length = leg.geo_length;
        seg.polyline = leg.geo_polyline;
        if (reversed) std::reverse(seg.polyline.begin(), seg.polyline.end());
        return seg;
    };
    auto piece_arc = [&](double chi0, double chi1, int branch) {
        ThreadSegment seg;
        seg.kind = SegmentKind::curvature;
        seg.length = std::abs(
            integrate_smooth([&](double t) { return am.length_density(t); }, chi0, chi1));
        const int N = 64;
        for (int i = 0; i <= N; ++i)
            seg.polyline.push_back(am.point(chi0 + (chi1 - chi0) * i / N, branch));
        return seg;
    };

    // --- joining structure ---
    const int sgn = legA.touch_state.eta1; // chi travel direction on the arcs
    double measured_action = 0.0;
    int arc_x2 = 0; // crossings of {x^2 = 0} during arcs (chi through multiples of pi)
    auto count_arc_x2 = [&](double c0, double c1) {
        const double lo = std::min(c0, c1), hi = std::max(c0, c1);
        long k = long(std::ceil(lo / M_PI - 1e-12));
        for (; k * M_PI < hi - 1e-12; ++k)
            if (k * M_PI > lo + 1e-12) ++arc_x2;
    };

    th.pieces.push_back(piece_line(legA, false));
    th.pieces.push_back(piece_geo(legA, false));

    int x3_join = 0, x1_join = 0, x2_join = 0;
    if (brA != brB) {
        // base topology: arc on branch A, joining geodesic, arc on branch B
        const double chiA0 = legA.touch_state.phi1;
        const double chiA1 = chi_for_action(am, chiA0, sgn, 0.5 * th.slack_predicted);
        th.pieces.push_back(piece_arc(chiA0, chiA1, brA));
        count_arc_x2(chiA0, chiA1);
        measured_action += std::abs(integrate_smooth(
            [&](double t) { return am.action_density(t); }, chiA0, chiA1));

        // joining geodesic departs tangентially at chiA1
        GeodesicState dep = legA.touch_state;
        dep.phi1 = chiA1;
        GeodesicOptions jo;
        jo.stop_at_caustic_touch = 1;
        GeodesicPath join = integrate_geodesic(rad, dep, 1e4, jo);
        ThreadSegment seg;
        seg.kind = SegmentKind::geodesic;
        seg.length = join.end.s - dep.s;
        for (const auto& s : join.states) seg.polyline.push_back(geodesic_cartesian(rad, s));
        th.pieces.push_back(seg);
        for (const auto& ev : join.events) {
            if (ev.kind == GeodesicEventKind::u2_at_a3) ++x3_join;
            if (ev.kind == GeodesicEventKind::u1_at_a1) ++x1_join;
            if (ev.kind == GeodesicEventKind::u1_at_a2) ++x2_join;
        }

        // arc on branch B from the landing to leg B's touch point
        const double chiL = join.end.phi1;
        const double chiB = legB.touch_state.phi1;
        // forward distance in the travel direction, mod 2 pi
        double fwd = sgn * (chiB - chiL);
        fwd -= 2 * M_PI * std::floor(fwd / (2 * M_PI));
        // near-zero forward gaps are genuine zero-length arcs
        if (fwd > 2 * M_PI - 1e-9) fwd -= 2 * M_PI;
        const double chiB0 = chiL, chiB1 = chiL + sgn * fwd;
        if (fwd < -1e-9)
            throw InfeasibleThreadError("assemble_staude_thread: backward curvature arc required");
        th.pieces.push_back(piece_arc(chiB0, chiB1, brB));
        count_arc_x2(chiB0, chiB1);
        measured_action += std::abs(integrate_smooth(
            [&](double t) { return am.action_density(t); }, chiB0, chiB1));
    } else {
        // early-touch variant: single arc connects the two landings directly
        const double chiA = legA.touch_state.phi1;
        const double chiB = legB.touch_state.phi1;
        double fwd = sgn * (chiB - chiA);
        fwd -= 2 * M_PI * std::floor(fwd / (2 * M_PI));
        th.pieces.push_back(piece_arc(chiA, chiA + sgn * fwd, brA));
        count_arc_x2(chiA, chiA + sgn * fwd);
        measured_action += std::abs(integrate_smooth(
            [&](double t) { return am.action_density(t); }, chiA, chiA + sgn * fwd));
    }

    th.pieces.push_back(piece_geo(legB, true));
    th.pieces.push_back(piece_line(legB, true));
    th.arc_action_total = measured_action;

    for (const auto& seg : th.pieces) th.total_length += seg.length;

    // winding audits: tangency touches of u2_0 and plane crossings
    int n_tang = (brA != brB) ? 2 : 1; // arcs are the touch regions
    n_tang += (legA.early_touch ? 1 : 0) + (legB.early_touch ? 1 : 0);
    int n_x3 = legA.x3_crossings + legB.x3_crossings + x3_join;
    for (const LegTrace* leg : {&legA, &legB}) {
        double t;
        Vec b = leg->line.base, d = leg->line.dir;
        if (std::abs(d(2)) > 1e-15) {
            t = -b(2) / d(2);
            if (t > 1e-11 && t < leg->t_ell - 1e-11) ++n_x3;
        }
    }
    th.measured.nprime = n_tang;
    th.measured.m = 1;
    // n: crossings of {x^2 = 0} over the loop (lines + geodesics + arcs)
    int n_x2 = legA.x2_events + legB.x2_events + x2_join;
    for (const LegTrace* leg : {&legA, &legB}) {
        Vec b = leg->line.base, d = leg->line.dir;
        if (std::abs(d(1)) > 1e-15) {
            const double t = -b(1) / d(1);
            if (t > 1e-11 && t < leg->t_ell - 1e-11) ++n_x2;
        }
    }
    th.measured.n = n_x2 + arc_x2;
    (void)n_x3;
    return th;
}

FocalThread staude_degenerate_thread(const std::array<double, 3>& axes, double u3_1,
                                     double theta) {
    const double a1 = axes[0], a2 = axes[1], a3 = axes[2];
    if (!(u3_1 < a3)) throw RangeError("staude_degenerate_thread: u3_1 < a3 required");
    // focal ellipse vertices on the e1 axis are the foci of the focal hyperbola
    const double AE = std::sqrt(a1 - a3); // focal-ellipse semi-major

    FocalThread th;
    th.pen = Vec(3);
    th.pen << std::sqrt(a1 - u3_1) * std::cos(theta), 0.0,
        std::sqrt(a3 - u3_1) * std::sin(theta);
    if (th.pen(0) <= 1e-9)
        throw RangeError("staude_degenerate_thread: pen must face the + hyperbola branch");
    th.near_vertex = Vec(3);
    th.near_vertex << AE, 0.0, 0.0;
    th.far_vertex = Vec(3);
    th.far_vertex << -AE, 0.0, 0.0;

    // taut bend: intersection of the segment [pen, F+] with the + branch
    // x1^2/(a1-a2) - x3^2/(a2-a3) = 1 in the plane x2 = 0; when the pen lies
    // on the convex side of the branch the segment reaches the focus without
    // touching the hyperbola and the thread turns at the focal-ellipse vertex
    const Vec d = th.near_vertex - th.pen;
    double qa = d(0) * d(0) / (a1 - a2) - d(2) * d(2) / (a2 - a3);
    double qb = th.pen(0) * d(0) / (a1 - a2) - th.pen(2) * d(2) / (a2 - a3);
    double qc = th.pen(0) * th.pen(0) / (a1 - a2) - th.pen(2) * th.pen(2) / (a2 - a3) - 1.0;
    double t_bend = 1e300;
    if (std::abs(qa) < 1e-14) {
        const double r = -0.5 * qc / qb;
        if (r > 1e-12 && r < 1.0) t_bend = r;
    } else {
        const double disc = qb * qb - qa * qc;
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            for (double r : {(-qb - s) / qa, (-qb + s) / qa})
                if (r > 1e-12 && r < 1.0 && r < t_bend) t_bend = r;
        }
    }
    th.broken = (t_bend != 1e300);

    auto line_piece = [](const Vec& from, const Vec& to) {
        ThreadSegment seg;
        seg.kind = SegmentKind::rectilinear;
        seg.length = (to - from).norm();
        seg.polyline = {from, to};
        return seg;
    };
    if (th.broken) {
        th.bend = th.pen + t_bend * d;
        th.hyperbola_residual = std::abs(th.bend(0) * th.bend(0) / (a1 - a2) -
                                         th.bend(2) * th.bend(2) / (a2 - a3) - 1.0);
        // broken side: pen -> bend -> far vertex; return side closes the loop
        th.pieces.push_back(line_piece(th.pen, th.bend));
        th.pieces.push_back(line_piece(th.bend, th.far_vertex));
        th.pieces.push_back(line_piece(th.far_vertex, th.pen));
    } else {
        // classical picture: turn at the near vertex, slide along the disk axis
        th.bend = th.near_vertex;
        th.pieces.push_back(line_piece(th.pen, th.near_vertex));
        th.pieces.push_back(line_piece(th.near_vertex, th.far_vertex));
        th.pieces.push_back(line_piece(th.far_vertex, th.pen));
    }
    for (const auto& seg : th.pieces) th.total_length += seg.length;
    th.string_invariant =
        (th.pen - th.near_vertex).norm() + (th.pen - th.far_vertex).norm();
    return th;
}

double mixed_thread_length(const CharacteristicRadical& rad, double u3_1,
                           const WindingCounts& w,
                           const std::vector<CurvatureBudget>& budgets, bool absorb,
                           double closure_tol) {
    const std::vector<double> ku{-rad.u3_0, 1.0};
    // skeleton closure condition + signed arc actions
    const double K1 = hyperelliptic(rad, ku, rad.axes[1], rad.axes[0]);
    const double K2 = hyperelliptic(rad, ku, rad.axes[2], rad.u2_0);
    const double J3 = (w.m > 0) ? hyperelliptic(rad, ku, u3_1, rad.u3_0) : 0.0;
    const double beta_required = 2.0 * (w.n * K1 - w.nprime * K2 + w.m * J3);

    double beta_given = 0.0;
    for (const auto& b : budgets) {
        if (!(b.u_lo >= rad.axes[1] - 1e-12 && b.u_hi <= rad.axes[0] + 1e-12 && b.u_lo <= b.u_hi))
            throw RangeError("mixed_thread_length: budget interval outside [a2, a1]");
        beta_given += b.orientation * hyperelliptic(rad, ku, b.u_lo, b.u_hi);
    }
    const double free_action = beta_required - beta_given;
    if (!absorb && std::abs(free_action) > closure_tol) {
        std::ostringstream os;
        os << "mixed_thread_length: closure residual " << free_action
           << " cannot be absorbed (no free curvature piece)";
        throw ClosureResidualError(os.str());
    }

    // invariant length: every piece kind obeys the same length form
    const std::vector<double> wk = poly_mul({-rad.u2_0, 1.0}, {-rad.u3_0, 1.0});
    const double L1 = hyperelliptic(rad, wk, rad.axes[1], rad.axes[0]);
    const double L2 = hyperelliptic(rad, wk, rad.axes[2], rad.u2_0);
    const double L3 = (w.m > 0) ? hyperelliptic(rad, wk, u3_1, rad.u3_0) : 0.0;
    return w.n * L1 - w.nprime * L2 + w.m * L3;
}

} // namespace confocal
