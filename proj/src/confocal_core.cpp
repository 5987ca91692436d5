#include "confocal/confocal_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confocal/polyroots.hpp"

namespace confocal {

static void validate_axes(const std::vector<double>& axes, double eps_sep) {
    if (axes.size() < 2 || axes.size() > 3)
        throw Error("ConfocalFamily: dimension must be 2 or 3");
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (!(axes[j] > 0)) throw Error("ConfocalFamily: axes must be positive");
        if (j > 0 && !(axes[j - 1] - axes[j] > eps_sep))
            throw SeparationError("ConfocalFamily: axes not strictly decreasing");
    }
}

ConfocalFamily::ConfocalFamily(std::initializer_list<double> a, double eps)
    : axes(a), eps_sep(eps) {
    validate_axes(axes, eps_sep);
}

ConfocalFamily::ConfocalFamily(std::vector<double> a, double eps)
    : axes(std::move(a)), eps_sep(eps) {
    validate_axes(axes, eps_sep);
}

Line::Line(Vec base_, Vec dir_) : base(std::move(base_)), dir(std::move(dir_)) {
    if (base.size() != dir.size()) throw Error("Line: base/dir size mismatch");
    if (std::abs(dir.norm() - 1.0) > 1e-12) {
        const double n = dir.norm();
        if (n == 0.0) throw Error("Line: zero direction");
        dir /= n;
    }
}

static void pole_guard(const ConfocalFamily& f, double z) {
    for (double a : f.axes)
        if (std::abs(a - z) < f.eps_sep) {
            std::ostringstream os;
            os << "z=" << z << " within eps_sep of axis " << a;
            throw PoleError(os.str());
        }
}

double eval_Q(const ConfocalFamily& f, double z, const Vec& x) {
    pole_guard(f, z);
    double s = -1.0;
    for (int j = 0; j < f.dim(); ++j) s += x(j) * x(j) / (f.axes[std::size_t(j)] - z);
    return s;
}

Vec normal_hat(const ConfocalFamily& f, double z, const Vec& x, double tol) {
    const double q = eval_Q(f, z, x);
    if (std::abs(q) > tol) {
        std::ostringstream os;
        os << "normal_hat: point off quadric, |Q| = " << std::abs(q);
        throw OffQuadricError(os.str());
    }
    Vec n(f.dim());
    for (int j = 0; j < f.dim(); ++j) n(j) = x(j) / (f.axes[std::size_t(j)] - z);
    return n;
}

Vec reflect(const Vec& dir, const Vec& normal) {
    const double nn = normal.norm();
    if (nn == 0.0) throw ZeroNormalError("reflect: zero normal");
    const Vec nh = normal / nn;
    return dir - 2.0 * dir.dot(nh) * nh;
}

// t-quadratic coefficients of Q_z(base + t dir): A t^2 + 2 B t + C.
static void line_quadratic(const ConfocalFamily& f, double z, const Line& line,
                           double& A, double& B, double& C) {
    A = 0.0; B = 0.0; C = -1.0;
    for (int j = 0; j < f.dim(); ++j) {
        const double d = f.axes[std::size_t(j)] - z;
        A += line.dir(j) * line.dir(j) / d;
        B += line.base(j) * line.dir(j) / d;
        C += line.base(j) * line.base(j) / d;
    }
}

std::vector<std::pair<double, Vec>> intersect_line_quadric(const ConfocalFamily& f,
                                                           double z, const Line& line) {
    pole_guard(f, z);
    double A, B, C;
    line_quadratic(f, z, line, A, B, C);
    std::vector<double> ts;
    const double scale = std::abs(A) + std::abs(B) + std::abs(C);
    if (std::abs(A) < 1e-14 * scale) {
        if (std::abs(B) > 0) ts.push_back(-C / (2 * B));
    } else {
        const double disc = B * B - A * C;
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            ts.push_back((-B - s) / A);
            ts.push_back((-B + s) / A);
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<std::pair<double, Vec>> out;
    for (double t : ts) out.emplace_back(t, Vec(line.base + t * line.dir));
    return out;
}

TangencySpectrum tangency_spectrum(const ConfocalFamily& f, const Line& line,
                                   double tol) {
    const int n = f.dim() - 1; // number of tangent quadrics for a generic line

    // Cleared discriminant G(z) = (B^2 - A C) * prod_j(a_j - z) is a polynomial
    // of degree <= n; sample at n+2 points and fit (one excess node to audit
    // that the degree-(n+1) coefficient vanishes).
    const double amin = f.axes.back(), amax = f.axes.front();
    const double width = (amax - amin) + line.base.squaredNorm() + 1.0;
    const int m = n + 2;
    std::vector<double> zs, gs;
    for (int i = 0; i < m; ++i) {
        // Chebyshev nodes over a window around the axes, nudged off poles
        double z = 0.5 * (amin - width + amax + width) +
                   0.5 * (2 * width + amax - amin) * std::cos(M_PI * (2.0 * i + 1) / (2.0 * m));
        bool near_pole = true;
        while (near_pole) {
            near_pole = false;
            for (double a : f.axes)
                if (std::abs(a - z) < 1e-6) { z += 3e-6; near_pole = true; }
        }
        double A, B, C;
        line_quadratic(f, z, line, A, B, C);
        double prod = 1.0;
        for (double a : f.axes) prod *= (a - z);
        zs.push_back(z);
        gs.push_back((B * B - A * C) * prod);
    }
    std::vector<double> coeffs = poly_fit_exact(zs, gs, n + 1);

    double scale = 0.0;
    for (double g : gs) scale = std::max(scale, std::abs(g));
    if (scale < tol * tol)
        throw DegenerateLineError("tangency_spectrum: cleared discriminant vanishes identically");

    // drop the audited zero top coefficient
    std::vector<double> poly(coeffs.begin(), coeffs.begin() + n + 1);

    TangencySpectrum spec;
    std::vector<double> roots;
    for (const auto& r : poly_roots(poly)) {
        if (std::abs(r.imag()) <= 1e-7 * std::max(1.0, std::abs(r)))
            roots.push_back(r.real());
        else
            spec.complex_count++;
    }
    std::sort(roots.begin(), roots.end());

    // merge collisions within 1e-7 into one value with multiplicity
    for (std::size_t i = 0; i < roots.size();) {
        std::size_t j = i + 1;
        double sum = roots[i];
        while (j < roots.size() && roots[j] - roots[j - 1] < 1e-7) { sum += roots[j]; ++j; }
        const double z = sum / double(j - i);
        double A, B, C;
        line_quadratic(f, z, line, A, B, C);
        TangencyValue tv;
        tv.z = z;
        tv.multiplicity = int(j - i);
        tv.t = (std::abs(A) > 0) ? -B / A : 0.0;
        tv.point = line.base + tv.t * line.dir;
        spec.values.push_back(tv);
        i = j;
    }
    spec.complex_count /= 2; // conjugate pairs
    return spec;
}

} // namespace confocal
