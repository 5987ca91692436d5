#pragma once

#include <Eigen/Dense>

#include <vector>

#include "confocal/errors.hpp"

namespace confocal {

using Vec = Eigen::VectorXd;

/// Real diagonal confocal family in R^{n+1}, n = 1 or 2: the quadric of
/// parameter z is  sum_j x_j^2/(axes_j - z) = 1.
struct ConfocalFamily {
    std::vector<double> axes; // strictly decreasing, positive
    double eps_sep = 1e-9;

    ConfocalFamily(std::initializer_list<double> a, double eps = 1e-9);
    explicit ConfocalFamily(std::vector<double> a, double eps = 1e-9);

    int dim() const { return int(axes.size()); }
};

/// Line with unit direction.
struct Line {
    Vec base;
    Vec dir;

    Line(Vec base_, Vec dir_);
};

struct TangencyValue {
    double z;
    int multiplicity;
    double t;  // line parameter of the tangency point
    Vec point;
};

/// The <= n confocal parameters z' at which a line is tangent to Q_{z'}.
struct TangencySpectrum {
    std::vector<TangencyValue> values;
    int complex_count = 0; // tangencies at non-real z' (reported, not listed)
};

/// Q_z(x) = sum_j x_j^2/(a_j - z) - 1.
double eval_Q(const ConfocalFamily& f, double z, const Vec& x);

/// Gradient direction of Q_z at x (components x_j/(a_j - z)); requires x on Q_z.
Vec normal_hat(const ConfocalFamily& f, double z, const Vec& x, double tol = 1e-8);

/// Specular reflection of dir in the plane orthogonal to normal.
Vec reflect(const Vec& dir, const Vec& normal);

/// Real intersections of a line with Q_z, ascending in t.
std::vector<std::pair<double, Vec>> intersect_line_quadric(const ConfocalFamily& f,
                                                           double z, const Line& line);

/// Tangency spectrum of a line: roots of the cleared t-discriminant in z'.
TangencySpectrum tangency_spectrum(const ConfocalFamily& f, const Line& line,
                                   double tol = 1e-9);

} // namespace confocal
