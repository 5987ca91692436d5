#include "confocal/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confocal/polyroots.hpp"
#include "confocal/quadrature.hpp"

namespace confocal {

void check_interlacing(const ConfocalFamily& f, const EllipticPoint& p) {
    if (f.dim() != 3) throw Error("elliptic coordinates: 3D family required");
    const double a1 = f.axes[0], a2 = f.axes[1], a3 = f.axes[2];
    const double e = f.eps_sep;
    const bool ok = a1 - p.u[0] > e && p.u[0] - a2 > e && a2 - p.u[1] > e &&
                    p.u[1] - a3 > e && a3 - p.u[2] > e;
    if (!ok) {
        std::ostringstream os;
        os << "interlacing a1>u1>a2>u2>a3>u3 violated: u = (" << p.u[0] << ", "
           << p.u[1] << ", " << p.u[2] << ")";
        throw InterlacingError(os.str());
    }
}

Vec to_cartesian(const ConfocalFamily& f, const EllipticPoint& p) {
    check_interlacing(f, p);
    Vec x(3);
    for (int j = 0; j < 3; ++j) {
        const double aj = f.axes[std::size_t(j)];
        double num = 1.0, den = 1.0;
        for (int k = 0; k < 3; ++k) {
            num *= (aj - p.u[std::size_t(k)]);
            if (k != j) den *= (aj - f.axes[std::size_t(k)]);
        }
        const double r = num / den;
        x(j) = p.sigma[std::size_t(j)] * std::sqrt(std::max(r, 0.0));
    }
    return x;
}

EllipticPoint to_elliptic(const ConfocalFamily& f, const Vec& x) {
    if (f.dim() != 3) throw Error("to_elliptic: 3D family required");
    for (int j = 0; j < 3; ++j)
        if (std::abs(x(j)) < f.eps_sep)
            throw CoordinatePlaneError("to_elliptic: point on coordinate plane; use boundary_chart");

    // cleared cubic: sum_j x_j^2 prod_{k!=j}(a_k - u) - prod_k(a_k - u) = 0
    const std::vector<double> a{f.axes[0], f.axes[1], f.axes[2]};
    std::vector<double> P(4, 0.0);
    {
        // -prod_k (a_k - u) = (u - a1)(u - a2)(u - a3)
        const auto full = poly_monic_roots(a);
        for (std::size_t k = 0; k < 4; ++k) P[k] += full[k];
        for (int j = 0; j < 3; ++j) {
            std::vector<double> others;
            for (int k = 0; k < 3; ++k)
                if (k != j) others.push_back(a[std::size_t(k)]);
            const auto pj = poly_monic_roots(others); // (u - a_k)(u - a_l) = prod (a_k - u)
            for (std::size_t k = 0; k < 3; ++k) P[k] += x(j) * x(j) * pj[k];
        }
    }
    auto roots = poly_real_roots(P);
    if (roots.size() != 3) throw Error("to_elliptic: cubic must have three real roots");
    EllipticPoint p;
    p.u = {roots[2], roots[1], roots[0]}; // descending
    for (int j = 0; j < 3; ++j) p.sigma[std::size_t(j)] = x(j) >= 0 ? 1 : -1;
    check_interlacing(f, p);
    return p;
}

std::array<double, 3> metric_coeffs(const ConfocalFamily& f, const EllipticPoint& p) {
    check_interlacing(f, p);
    std::array<double, 3> h{};
    for (int k = 0; k < 3; ++k) {
        double num = 1.0, den = 4.0;
        for (int j = 0; j < 3; ++j) {
            if (j != k) num *= (p.u[std::size_t(k)] - p.u[std::size_t(j)]);
            den *= (f.axes[std::size_t(j)] - p.u[std::size_t(k)]);
        }
        h[std::size_t(k)] = num / den;
    }
    return h;
}

Vec boundary_chart(const ConfocalFamily& f, BoundaryChartKind which,
                   const std::array<double, 3>& free_u, const std::array<int, 3>& sigma) {
    const double a1 = f.axes[0], a2 = f.axes[1], a3 = f.axes[2];
    const double u1 = free_u[0], u2 = free_u[1], u3 = free_u[2];
    auto comp = [&](double num1, double num2, double den) { return num1 * num2 / den; };
    auto sq = [&](int j, double v) {
        if (v < -1e-12) throw RangeError("boundary_chart: free coordinate out of range");
        return sigma[std::size_t(j)] * std::sqrt(std::max(v, 0.0));
    };
    auto in_range = [&](double v, double lo, double hi) {
        if (!(v >= lo - 1e-12 && v <= hi + 1e-12))
            throw RangeError("boundary_chart: free coordinate out of range");
    };
    Vec x(3);
    switch (which) {
        case BoundaryChartKind::u1_to_a1: // plane {x1 = 0}
            in_range(u2, a3, a2); in_range(u3, -1e300, a3);
            x(0) = 0.0;
            x(1) = sq(1, comp(a2 - u2, a2 - u3, a2 - a3));
            x(2) = sq(2, comp(a3 - u2, a3 - u3, a3 - a2));
            return x;
        case BoundaryChartKind::u1_to_a2: // convex region of the focal hyperbola, {x2 = 0}
            in_range(u2, a3, a2); in_range(u3, -1e300, a3);
            x(0) = sq(0, comp(a1 - u2, a1 - u3, a1 - a3));
            x(1) = 0.0;
            x(2) = sq(2, comp(a3 - u2, a3 - u3, a3 - a1));
            return x;
        case BoundaryChartKind::u2_to_a2: // concave region of the focal hyperbola, {x2 = 0}
            in_range(u1, a2, a1); in_range(u3, -1e300, a3);
            x(0) = sq(0, comp(a1 - u1, a1 - u3, a1 - a3));
            x(1) = 0.0;
            x(2) = sq(2, comp(a3 - u1, a3 - u3, a3 - a1));
            return x;
        case BoundaryChartKind::u2_to_a3: // concave region of the focal ellipse, {x3 = 0}
            in_range(u1, a2, a1); in_range(u3, -1e300, a3);
            x(0) = sq(0, comp(a1 - u1, a1 - u3, a1 - a2));
            x(1) = sq(1, comp(a2 - u1, a2 - u3, a2 - a1));
            x(2) = 0.0;
            return x;
        case BoundaryChartKind::u3_to_a3: // convex region of the focal ellipse, {x3 = 0}
            in_range(u1, a2, a1); in_range(u2, a3, a2);
            x(0) = sq(0, comp(a1 - u1, a1 - u2, a1 - a2));
            x(1) = sq(1, comp(a2 - u1, a2 - u2, a2 - a1));
            x(2) = 0.0;
            return x;
        case BoundaryChartKind::focal_hyperbola: // u1 -> a2 <- u2
            in_range(u3, -1e300, a3);
            x(0) = sq(0, comp(a1 - a2, a1 - u3, a1 - a3));
            x(1) = 0.0;
            x(2) = sq(2, comp(a3 - a2, a3 - u3, a3 - a1));
            return x;
        case BoundaryChartKind::focal_ellipse: // u2 -> a3 <- u3
            in_range(u1, a2, a1);
            x(0) = sq(0, comp(a1 - u1, a1 - a3, a1 - a2));
            x(1) = sq(1, comp(a2 - u1, a2 - a3, a2 - a1));
            x(2) = 0.0;
            return x;
    }
    throw Error("boundary_chart: bad kind");
}

} // namespace confocal
