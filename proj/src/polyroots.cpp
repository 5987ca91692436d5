#include "confocal/polyroots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace confocal {

double poly_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
}

static std::complex<double> poly_eval_c(const std::vector<double>& c, std::complex<double> u) {
    std::complex<double> v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
}

static std::complex<double> poly_deriv_c(const std::vector<double>& c, std::complex<double> u) {
    std::complex<double> v = 0.0;
    for (int k = int(c.size()) - 1; k >= 1; --k) v = v * u + double(k) * c[std::size_t(k)];
    return v;
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
    // strip trailing (leading-degree) zeros
    std::vector<double> c = coeffs;
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();

    const int deg = int(c.size()) - 1;
    std::vector<std::complex<double>> roots;
    if (deg <= 0) return roots;

    if (deg == 1) {
        roots.push_back(std::complex<double>(-c[0] / c[1], 0.0));
    } else if (deg == 2) {
        const double a = c[2], b = c[1], cc = c[0];
        const double disc = b * b - 4 * a * cc;
        if (disc >= 0) {
            const double s = std::sqrt(disc);
            const double q = -0.5 * (b + (b >= 0 ? s : -s));
            if (q != 0.0) {
                roots.push_back(std::complex<double>(q / a, 0));
                roots.push_back(std::complex<double>(cc / q, 0));
            } else {
                roots.push_back(std::complex<double>(0, 0));
                roots.push_back(std::complex<double>(-b / a, 0));
            }
        } else {
            const double s = std::sqrt(-disc);
            roots.push_back(std::complex<double>(-b / (2 * a), s / (2 * a)));
            roots.push_back(std::complex<double>(-b / (2 * a), -s / (2 * a)));
        }
    } else {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[std::size_t(i)] / c[std::size_t(deg)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
        for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    }

    // one Newton polish per root
    for (auto& r : roots) {
        const std::complex<double> d = poly_deriv_c(c, r);
        if (std::abs(d) > 0) {
            const std::complex<double> step = poly_eval_c(c, r) / d;
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) r -= step;
        }
    }
    return roots;
}

std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double imag_tol) {
    std::vector<double> out;
    double scale = 0.0;
    for (double v : coeffs) scale = std::max(scale, std::abs(v));
    for (const auto& r : poly_roots(coeffs)) {
        const double mag = std::max(1.0, std::abs(r));
        if (std::abs(r.imag()) <= imag_tol * mag) out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> poly_fit_exact(const std::vector<double>& xs,
                                   const std::vector<double>& ys, int deg) {
    // Newton divided differences, then expand to monomial coefficients.
    const std::size_t n = xs.size();
    std::vector<double> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);

    std::vector<double> coeffs(std::size_t(deg) + 1, 0.0);
    std::vector<double> basis{1.0}; // prod_{k<i}(u - xs[k]) expanded
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < basis.size() && k < coeffs.size(); ++k)
            coeffs[k] += dd[i] * basis[k];
        // basis *= (u - xs[i])
        basis.insert(basis.begin(), 0.0);
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) basis[k] -= xs[i] * basis[k + 1];
    }
    return coeffs;
}

} // namespace confocal
