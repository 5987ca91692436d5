#pragma once

#include <complex>
#include <vector>

namespace confocal {

/// Roots of a real polynomial sum_k c[k] u^k (ascending coefficients).
/// Closed form for degree <= 2, companion-matrix eigenvalues above,
/// every root polished by one Newton step.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

/// Real roots only (|Im| < imag_tol * scale), sorted ascending.
std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                    double imag_tol = 1e-8);

/// Horner evaluation of sum_k c[k] u^k.
double poly_eval(const std::vector<double>& coeffs, double u);

/// Fit the polynomial of degree <= deg through (x[i], y[i]) by Newton divided
/// differences; returns ascending coefficients (size deg+1).
std::vector<double> poly_fit_exact(const std::vector<double>& xs,
                                   const std::vector<double>& ys, int deg);

} // namespace confocal
