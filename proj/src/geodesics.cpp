#include "confocal/geodesics.hpp"

#include <cmath>
#include <sstream>

namespace confocal {

namespace {

double g1_of(const CharacteristicRadical& r, double u) {
    return (u - r.u2_0) * (u - r.u3_0) * (u - r.axes[2]);
}
double g2_of(const CharacteristicRadical& r, double u) {
    return (u - r.u3_0) * (r.axes[0] - u) * (r.axes[1] - u);
}

struct Rhs {
    const CharacteristicRadical& rad;

    // y = (phi1, phi2); eta folded into the state sign
    std::array<double, 2> operator()(const std::array<double, 2>& y, int eta1,
                                     int eta2) const {
        const double a1 = rad.axes[0], a2 = rad.axes[1], a3 = rad.axes[2];
        const double s1 = std::sin(y[0]), s2 = std::sin(y[1]);
        const double u1 = a2 + (a1 - a2) * s1 * s1;
        const double u2 = a3 + (rad.u2_0 - a3) * s2 * s2;
        const double D3 = (u1 - u2) * (u1 - rad.u3_0) * (u2 - rad.u3_0);
        const double dp1 = eta1 * std::sqrt(std::max(g1_of(rad, u1), 0.0)) * (u2 - rad.u3_0) / D3;
        const double dp2 = eta2 * std::sqrt(std::max(g2_of(rad, u2), 0.0)) * (u1 - rad.u3_0) / D3;
        return {dp1, dp2};
    }
};

// Dormand-Prince 5(4) step; returns 5th-order solution and error estimate.
void dopri_step(const Rhs& f, int e1, int e2, const std::array<double, 2>& y, double h,
                std::array<double, 2>& out, double& err) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1c = 71.0 / 57600, e3c = -71.0 / 16695, e4c = 71.0 / 1920,
                        e5c = -17253.0 / 339200, e6c = 22.0 / 525, e7c = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;

    auto ax = [&](const std::array<double, 2>& yy) { return f(yy, e1, e2); };
    const auto k1 = ax(y);
    const auto k2 = ax({y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]});
    const auto k3 = ax({y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                        y[1] + h * (a31 * k1[1] + a32 * k2[1])});
    const auto k4 = ax({y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                        y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])});
    const auto k5 = ax({y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
                        y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])});
    const auto k6 =
        ax({y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
            y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])});
    out = {y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
           y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
    const auto k7 = ax(out);
    const double err0 = h * (e1c * k1[0] + e3c * k3[0] + e4c * k4[0] + e5c * k5[0] +
                             e6c * k6[0] + e7c * k7[0]);
    const double err1 = h * (e1c * k1[1] + e3c * k3[1] + e4c * k4[1] + e5c * k5[1] +
                             e6c * k6[1] + e7c * k7[1]);
    err = std::max(std::abs(err0), std::abs(err1));
}

} // namespace

double GeodesicState::u1(const CharacteristicRadical& rad) const {
    const double s = std::sin(phi1);
    return rad.axes[1] + (rad.axes[0] - rad.axes[1]) * s * s;
}
double GeodesicState::u2(const CharacteristicRadical& rad) const {
    const double s = std::sin(phi2);
    return rad.axes[2] + (rad.u2_0 - rad.axes[2]) * s * s;
}

SignState GeodesicState::signs() const {
    SignState st;
    const double s2p1 = std::sin(2 * phi1), s2p2 = std::sin(2 * phi2);
    st.eps = {eta1 * (s2p1 >= 0 ? 1 : -1), eta2 * (s2p2 >= 0 ? 1 : -1), 1};
    st.sigma = {std::cos(phi1) >= 0 ? 1 : -1, std::sin(phi1) >= 0 ? 1 : -1,
                std::sin(phi2) >= 0 ? 1 : -1};
    return st;
}

Vec geodesic_cartesian(const CharacteristicRadical& rad, const GeodesicState& st) {
    const double a1 = rad.axes[0], a2 = rad.axes[1], a3 = rad.axes[2];
    const double u1 = st.u1(rad), u2 = st.u2(rad);
    Vec x(3);
    x(0) = std::cos(st.phi1) * std::sqrt((a1 - u2) * (a1 - rad.u3_0) / (a1 - a3));
    x(1) = std::sin(st.phi1) * std::sqrt((a2 - u2) * (a2 - rad.u3_0) / (a2 - a3));
    x(2) = std::sin(st.phi2) *
           std::sqrt((u1 - a3) * (rad.u2_0 - a3) * (a3 - rad.u3_0) / ((a1 - a3) * (a2 - a3)));
    return x;
}

Vec geodesic_tangent(const CharacteristicRadical& rad, const GeodesicState& st) {
    // analytic d x / d s through the phi parametrization
    const double a1 = rad.axes[0], a2 = rad.axes[1], a3 = rad.axes[2];
    const double u1 = st.u1(rad), u2 = st.u2(rad);
    const Rhs f{rad};
    const auto dp = f({st.phi1, st.phi2}, st.eta1, st.eta2);
    const double du2_dp2 = (rad.u2_0 - a3) * std::sin(2 * st.phi2);
    const double du1_dp1 = (a1 - a2) * std::sin(2 * st.phi1);
    Vec v(3);
    // x1 = cos(phi1) * sqrt((a1 - u2)(a1 - u30)/(a1 - a3))
    const double r1 = std::sqrt((a1 - u2) * (a1 - rad.u3_0) / (a1 - a3));
    v(0) = -std::sin(st.phi1) * r1 * dp[0] +
           std::cos(st.phi1) * (-(a1 - rad.u3_0) / (a1 - a3)) * du2_dp2 * dp[1] / (2 * r1);
    const double r2 = std::sqrt((a2 - u2) * (a2 - rad.u3_0) / (a2 - a3));
    v(1) = std::cos(st.phi1) * r2 * dp[0] +
           std::sin(st.phi1) * (-(a2 - rad.u3_0) / (a2 - a3)) * du2_dp2 * dp[1] / (2 * r2);
    const double c3 = (rad.u2_0 - a3) * (a3 - rad.u3_0) / ((a1 - a3) * (a2 - a3));
    const double r3 = std::sqrt((u1 - a3) * c3);
    v(2) = std::cos(st.phi2) * r3 * dp[1] +
           std::sin(st.phi2) * c3 * du1_dp1 * dp[0] / (2 * r3);
    return v;
}

GeodesicState geodesic_start_from_u(const CharacteristicRadical& rad, double u1,
                                    double u2, const SignState& signs) {
    const double a1 = rad.axes[0], a2 = rad.axes[1], a3 = rad.axes[2];
    if (!(u1 >= a2 - 1e-14 && u1 <= a1 + 1e-14 && u2 >= a3 - 1e-14 && u2 <= rad.u2_0 + 1e-14))
        throw RangeError("geodesic_start_from_u: (u1, u2) outside chart");
    const double s1 = std::sqrt(std::clamp((u1 - a2) / (a1 - a2), 0.0, 1.0));
    const double s2 = std::sqrt(std::clamp((u2 - a3) / (rad.u2_0 - a3), 0.0, 1.0));
    double base1 = std::asin(s1);
    // quadrant of phi1 from (sigma1, sigma2) = (sign cos, sign sin)
    double phi1;
    if (signs.sigma[0] >= 0 && signs.sigma[1] >= 0) phi1 = base1;
    else if (signs.sigma[0] < 0 && signs.sigma[1] >= 0) phi1 = M_PI - base1;
    else if (signs.sigma[0] < 0 && signs.sigma[1] < 0) phi1 = M_PI + base1;
    else phi1 = 2 * M_PI - base1;
    // phi2 with sign(sin phi2) = sigma3, cos phi2 > 0 representative
    double phi2 = signs.sigma[2] >= 0 ? std::asin(s2) : -std::asin(s2);

    GeodesicState st;
    st.phi1 = phi1;
    st.phi2 = phi2;
    // eta from desired eps: eps_k = eta_k sign(sin 2 phi_k)
    const double sg1 = std::sin(2 * phi1) >= 0 ? 1.0 : -1.0;
    const double sg2 = std::sin(2 * phi2) >= 0 ? 1.0 : -1.0;
    st.eta1 = int(signs.eps[0] * sg1);
    st.eta2 = int(signs.eps[1] * sg2);
    if (st.eta1 == 0) st.eta1 = 1;
    if (st.eta2 == 0) st.eta2 = 1;
    return st;
}

GeodesicState geodesic_start_from_direction(const CharacteristicRadical& rad,
                                            const Vec& point, const Vec& dir,
                                            double tol) {
    // membership check
    double q = -1.0;
    for (int j = 0; j < 3; ++j) q += point(j) * point(j) / (rad.axes[std::size_t(j)] - rad.u3_0);
    if (std::abs(q) > tol) throw OffQuadricError("geodesic_start_from_direction: point not on surface");

    // elliptic data of the surface point
    ConfocalFamily fam({rad.axes[0], rad.axes[1], rad.axes[2]});
    const Vec xs = point;
    // u1, u2 from the two non-surface roots of the cubic
    EllipticPoint ep;
    {
        // solve cubic but with u3 pinned at u3_0 numerically robust: use to_elliptic
        ep = to_elliptic(fam, xs);
    }
    SignState s;
    s.sigma = ep.sigma;
    GeodesicState best;
    double best_dot = -2.0;
    for (int e1 : {1, -1})
        for (int e2 : {1, -1}) {
            s.eps = {e1, e2, 1};
            GeodesicState st = geodesic_start_from_u(rad, ep.u[0], ep.u[1], s);
            const Vec v = geodesic_tangent(rad, st);
            const double d = v.dot(dir) / v.norm();
            if (d > best_dot) {
                best_dot = d;
                best = st;
            }
        }
    if (best_dot < 1.0 - 1e-5)
        throw HypothesisError("geodesic_start_from_direction: direction not in the tangent flow");
    return best;
}

GeodesicPath integrate_geodesic(const CharacteristicRadical& rad,
                                const GeodesicState& start, double length,
                                const GeodesicOptions& opts) {
    GeodesicPath path;
    path.states.push_back(start);

    const Rhs f{rad};
    GeodesicState cur = start;
    double h = std::min(opts.max_step, 1e-3);
    int caustic_touches = 0;

    auto next_target = [](double phi, int eta) {
        // next multiple of pi/2 strictly ahead in direction eta
        const double q = phi / (M_PI / 2);
        double k = eta > 0 ? std::floor(q + 1e-12) + 1 : std::ceil(q - 1e-12) - 1;
        return k * (M_PI / 2);
    };

    int guard = 0;
    while (cur.s < start.s + length - 1e-14) {
        if (++guard > 2000000) throw StiffnessError("integrate_geodesic: step guard tripped");
        h = std::min({h, opts.max_step, start.s + length - cur.s});
        std::array<double, 2> y{cur.phi1, cur.phi2}, ynew{};
        double err = 0.0;
        dopri_step(f, cur.eta1, cur.eta2, y, h, ynew, err);
        if (err > opts.atol) {
            h *= std::max(0.2, 0.9 * std::pow(opts.atol / err, 0.2));
            continue;
        }

        // event localization: does this step cross a pi/2 boundary?
        const double t1 = next_target(cur.phi1, cur.eta1);
        const double t2 = next_target(cur.phi2, cur.eta2);
        const bool c1 = (cur.eta1 > 0) ? (ynew[0] >= t1) : (ynew[0] <= t1);
        const bool c2 = (cur.eta2 > 0) ? (ynew[1] >= t2) : (ynew[1] <= t2);
        double phi1_stop = 0.0;
        bool cstop = false;
        if (opts.stop_at_phi1_advance > 0) {
            phi1_stop = path.states.front().phi1 + cur.eta1 * opts.stop_at_phi1_advance;
            cstop = (cur.eta1 > 0) ? (ynew[0] >= phi1_stop) : (ynew[0] <= phi1_stop);
        }

        if (c1 || c2 || cstop) {
            // choose the earliest crossing; bisect the step size onto it
            int which; // 0: phi1 event, 1: phi2 event, 2: phi1-advance stop
            double target;
            const double d1 = c1 ? std::abs(t1 - cur.phi1) : 1e300;
            const double d2 = c2 ? std::abs(t2 - cur.phi2) : 1e300;
            const double ds = cstop ? std::abs(phi1_stop - cur.phi1) : 1e300;
            // compare in units of expected step fraction via linear estimate
            const auto dp = f(y, cur.eta1, cur.eta2);
            const double f1 = c1 ? d1 / std::max(std::abs(dp[0]), 1e-300) : 1e300;
            const double f2 = c2 ? d2 / std::max(std::abs(dp[1]), 1e-300) : 1e300;
            const double fs = cstop ? ds / std::max(std::abs(dp[0]), 1e-300) : 1e300;
            if (f1 <= f2 && f1 <= fs) { which = 0; target = t1; }
            else if (f2 <= fs) { which = 1; target = t2; }
            else { which = 2; target = phi1_stop; }

            double lo = 0.0, hi = h;
            std::array<double, 2> yev = ynew;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                std::array<double, 2> ym{};
                double e2 = 0.0;
                dopri_step(f, cur.eta1, cur.eta2, y, mid, ym, e2);
                const double val = (which == 1) ? ym[1] : ym[0];
                const int eta = (which == 1) ? cur.eta2 : cur.eta1;
                if ((eta > 0 && val >= target) || (eta < 0 && val <= target)) hi = mid;
                else lo = mid;
                yev = ym;
                if (hi - lo < 1e-15 * std::max(1.0, h)) break;
            }
            const double hev = 0.5 * (lo + hi);
            std::array<double, 2> ym{};
            double e2 = 0.0;
            dopri_step(f, cur.eta1, cur.eta2, y, hev, ym, e2);
            // pin the targeted angle exactly
            if (which == 1) ym[1] = target; else ym[0] = target;

            cur.phi1 = ym[0];
            cur.phi2 = ym[1];
            cur.s += hev;
            path.states.push_back(cur);

            if (which == 2) {
                path.end = cur;
                return path;
            }
            GeodesicEvent ev;
            ev.s = cur.s;
            const double q = target / (M_PI / 2);
            const long k = std::lround(q);
            const bool half = (k % 2 != 0); // odd multiple of pi/2
            if (which == 0)
                ev.kind = half ? GeodesicEventKind::u1_at_a1 : GeodesicEventKind::u1_at_a2;
            else
                ev.kind = half ? GeodesicEventKind::u2_at_caustic : GeodesicEventKind::u2_at_a3;
            path.events.push_back(ev);
            if (ev.kind == GeodesicEventKind::u2_at_caustic &&
                ++caustic_touches == opts.stop_at_caustic_touch) {
                path.end = cur;
                return path;
            }
            continue;
        }

        cur.phi1 = ynew[0];
        cur.phi2 = ynew[1];
        cur.s += h;
        path.states.push_back(cur);
        if (err > 0) h *= std::min(5.0, 0.9 * std::pow(opts.atol / err, 0.2));
    }
    path.end = cur;
    return path;
}

namespace {

// unfolded action primitive over phi for the u1 cycle (weight u - u3_0)
double action_primitive_1(const CharacteristicRadical& rad, double phi) {
    const std::vector<double> w{-rad.u3_0, 1.0};
    const double K = hyperelliptic(rad, w, rad.axes[1], rad.axes[0]);
    const double q = phi / (M_PI / 2);
    const double k = std::floor(q);
    const double s = std::sin(phi);
    const double u1 = rad.axes[1] + (rad.axes[0] - rad.axes[1]) * s * s;
    const long ki = long(k);
    double partial;
    if (((ki % 2) + 2) % 2 == 0) // rising quarter: a2 -> a1
        partial = hyperelliptic(rad, w, rad.axes[1], u1);
    else // falling quarter: a1 -> a2
        partial = hyperelliptic(rad, w, u1, rad.axes[0]);
    return k * K + partial;
}

double action_primitive_2(const CharacteristicRadical& rad, double phi) {
    const std::vector<double> w{-rad.u3_0, 1.0};
    const double K = hyperelliptic(rad, w, rad.axes[2], rad.u2_0);
    const double q = phi / (M_PI / 2);
    const double k = std::floor(q);
    const double s = std::sin(phi);
    const double u2 = rad.axes[2] + (rad.u2_0 - rad.axes[2]) * s * s;
    const long ki = long(k);
    double partial;
    if (((ki % 2) + 2) % 2 == 0)
        partial = hyperelliptic(rad, w, rad.axes[2], u2);
    else
        partial = hyperelliptic(rad, w, u2, rad.u2_0);
    return k * K + partial;
}

} // namespace

double phi1_action(const CharacteristicRadical& rad, double phi_from, double phi_to) {
    return action_primitive_1(rad, phi_to) - action_primitive_1(rad, phi_from);
}

double jacobi_constant(const CharacteristicRadical& rad, const GeodesicState& from,
                       const GeodesicState& to) {
    const double A1 = from.eta1 * (action_primitive_1(rad, to.phi1) - action_primitive_1(rad, from.phi1));
    const double A2 = from.eta2 * (action_primitive_2(rad, to.phi2) - action_primitive_2(rad, from.phi2));
    return A1 - A2;
}

double phi_function(const CharacteristicRadical& rad, const EllipticPoint& p,
                    const std::array<int, 3>& eps, const EllipticPoint& basepoint) {
    const std::vector<double> P = poly_mul({-rad.u2_0, 1.0}, {-rad.u3_0, 1.0});
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double lo = basepoint.u[std::size_t(k)], hi = p.u[std::size_t(k)];
        double seg = hyperelliptic(rad, P, lo, hi);
        if (k == 1) seg = -seg; // |f_2| = -f_2 on (a3, u2_0)
        total += 0.5 * eps[std::size_t(k)] * seg;
    }
    return total;
}

double grad_phi_norm2(const CharacteristicRadical& rad, const std::array<double, 3>& u) {
    // sum_k (u^k - u2_0)(u^k - u3_0) / prod_{j != k} (u^k - u^j)
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        double denom = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != k) denom *= (u[std::size_t(k)] - u[std::size_t(j)]);
        total += (u[std::size_t(k)] - rad.u2_0) * (u[std::size_t(k)] - rad.u3_0) / denom;
    }
    return total;
}

ClosedGeodesicReport closed_geodesic_check(const std::array<double, 3>& axes,
                                           double u3_0, double u2_0,
                                           const WindingCounts& w,
                                           double residual_tol) {
    if (w.m != 0) throw Error("closed_geodesic_check: m must be 0");
    CharacteristicRadical rad(axes, u2_0, u3_0);
    const std::vector<double> ku{-u3_0, 1.0};
    ClosedGeodesicReport rep;
    rep.residual = w.n * hyperelliptic(rad, ku, axes[1], axes[0]) -
                   w.nprime * hyperelliptic(rad, ku, axes[2], u2_0);
    if (std::abs(rep.residual) > residual_tol) return rep;

    rep.closure_attempted = true;
    const std::vector<double> uku = poly_mul({0.0, 1.0}, ku);
    rep.predicted_length = w.n * hyperelliptic(rad, uku, axes[1], axes[0]) -
                           w.nprime * hyperelliptic(rad, uku, axes[2], u2_0);

    GeodesicState start;
    start.phi1 = 0.3;
    start.phi2 = 0.7;
    start.eta1 = start.eta2 = 1;
    GeodesicOptions opts;
    opts.stop_at_phi1_advance = w.n * M_PI;
    GeodesicPath path = integrate_geodesic(rad, start, 4.0 * rep.predicted_length, opts);
    rep.measured_length = path.end.s - start.s;
    rep.closure_gap =
        (geodesic_cartesian(rad, path.end) - geodesic_cartesian(rad, start)).norm();
    rep.phi2_cycle_error = std::abs(std::abs(path.end.phi2 - start.phi2) - w.nprime * M_PI);
    return rep;
}

double umbilic_opposite_gap(const std::array<double, 3>& axes, double u3_0,
                            double dir_angle, double max_length) {
    const double a1 = axes[0], a2 = axes[1], a3 = axes[2];
    if (!(u3_0 < a3)) throw RangeError("umbilic_opposite_gap: u3_0 < a3 required");
    // umbilics of {u^3 = u3_0}: u^1 = u^2 = a2
    Eigen::Vector3d x0;
    x0(0) = std::sqrt((a1 - a2) * (a1 - a2) * (a1 - u3_0) / ((a1 - a2) * (a1 - a3)));
    x0(1) = 0.0;
    x0(2) = std::sqrt((a2 - a3) * (a2 - a3) * (a3 - u3_0) / ((a1 - a3) * (a2 - a3)));
    const Eigen::Vector3d target = -x0;

    Eigen::Vector3d hdiag;
    for (int j = 0; j < 3; ++j) hdiag(j) = 1.0 / (axes[std::size_t(j)] - u3_0);
    auto gradG = [&](const Eigen::Vector3d& x) {
        return Eigen::Vector3d(2 * x.cwiseProduct(hdiag));
    };

    // tangent frame at the umbilic
    Eigen::Vector3d n = gradG(x0).normalized();
    Eigen::Vector3d t1 = n.cross(Eigen::Vector3d::UnitY()).normalized();
    Eigen::Vector3d t2 = n.cross(t1).normalized();
    Eigen::Vector3d v = (std::cos(dir_angle) * t1 + std::sin(dir_angle) * t2).normalized();

    auto acc = [&](const Eigen::Vector3d& x, const Eigen::Vector3d& xd) {
        const Eigen::Vector3d g = gradG(x);
        const double lam = -(2.0 * xd.cwiseProduct(hdiag).dot(xd)) / g.squaredNorm();
        return Eigen::Vector3d(lam * g);
    };

    // classic RK4 with projection; fine fixed step; the minimum distance is
    // measured against the polyline segments (second order in the step)
    const double h = 2e-4;
    Eigen::Vector3d x = x0, xd = v;
    double best = 1e300;
    for (double s = 0.0; s < max_length; s += h) {
        const Eigen::Vector3d xp = x;
        const Eigen::Vector3d k1x = xd, k1v = acc(x, xd);
        const Eigen::Vector3d k2x = xd + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, xd + 0.5 * h * k1v);
        const Eigen::Vector3d k3x = xd + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, xd + 0.5 * h * k2v);
        const Eigen::Vector3d k4x = xd + h * k3v, k4v = acc(x + h * k3x, xd + h * k3v);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        xd += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        // project back to the surface and unit speed
        double G = -1.0;
        for (int j = 0; j < 3; ++j) G += x(j) * x(j) * hdiag(j);
        const Eigen::Vector3d g = gradG(x);
        x -= G / g.squaredNorm() * g;
        xd -= xd.dot(g) / g.squaredNorm() * g;
        xd.normalize();
        const Eigen::Vector3d seg = x - xp;
        const double t = std::clamp((target - xp).dot(seg) / seg.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (xp + t * seg - target).norm());
    }
    return best;
}

} // namespace confocal
