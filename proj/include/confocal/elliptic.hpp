#pragma once

#include <array>

#include "confocal/confocal_core.hpp"

namespace confocal {

/// Ordered elliptic coordinates a1 > u1 > a2 > u2 > a3 > u3 with octant signs.
struct EllipticPoint {
    std::array<double, 3> u;
    std::array<int, 3> sigma{1, 1, 1};
};

enum class BoundaryChartKind {
    u1_to_a1,
    u1_to_a2,
    u2_to_a2,
    u2_to_a3,
    u3_to_a3,
    focal_ellipse,
    focal_hyperbola,
};

/// Checks a1 > u1 > a2 > u2 > a3 > u3 within eps_sep.
void check_interlacing(const ConfocalFamily& f, const EllipticPoint& p);

/// Forward map: (x^j)^2 = prod_k (a_j - u^k) / prod_{k != j} (a_j - a_k).
Vec to_cartesian(const ConfocalFamily& f, const EllipticPoint& p);

/// Inverse map: the three roots of the cleared cubic through x, plus signs.
EllipticPoint to_elliptic(const ConfocalFamily& f, const Vec& x);

/// Metric coefficients h_k^2 of ds^2 = sum h_k^2 (du^k)^2.
std::array<double, 3> metric_coeffs(const ConfocalFamily& f, const EllipticPoint& p);

/// Degenerate limit charts. `free_u` supplies the surviving coordinates in
/// the slots they occupy in the interior chart (unused slots ignored).
Vec boundary_chart(const ConfocalFamily& f, BoundaryChartKind which,
                   const std::array<double, 3>& free_u, const std::array<int, 3>& sigma);

} // namespace confocal
