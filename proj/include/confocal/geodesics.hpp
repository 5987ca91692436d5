#pragma once

#include <array>
#include <functional>
#include <vector>

#include "confocal/confocal_core.hpp"
#include "confocal/elliptic.hpp"
#include "confocal/quadrature.hpp"

namespace confocal {

/// Direction signs of the elliptic coordinates along a path, plus octant.
struct SignState {
    std::array<int, 3> eps{1, 1, 1};
    std::array<int, 3> sigma{1, 1, 1};
};

/// State of a geodesic on {u^3 = u3_0} with tangents tangent to {u^2 = u2_0},
/// in the regularizing angles u^1 = a2 + (a1-a2) sin^2(phi1),
/// u^2 = a3 + (u2_0-a3) sin^2(phi2). phi1, phi2 are strictly monotone with
/// fixed direction signs eta; turning points are the crossings of multiples
/// of pi/2 and the eps flips happen there automatically.
struct GeodesicState {
    double phi1 = 0.0, phi2 = 0.0;
    int eta1 = 1, eta2 = 1;
    double s = 0.0;

    double u1(const CharacteristicRadical& rad) const;
    double u2(const CharacteristicRadical& rad) const;
    SignState signs() const;
};

enum class GeodesicEventKind {
    u1_at_a1,      // phi1 = pi/2 (mod pi): crossing {x^1 = 0}
    u1_at_a2,      // phi1 = 0 (mod pi):    crossing {x^2 = 0}
    u2_at_caustic, // phi2 = pi/2 (mod pi): tangency with {u^2 = u2_0}
    u2_at_a3,      // phi2 = 0 (mod pi):    crossing {x^3 = 0}
};

struct GeodesicEvent {
    double s;
    GeodesicEventKind kind;
};

struct GeodesicPath {
    std::vector<GeodesicState> states; // includes start, all events, end
    std::vector<GeodesicEvent> events;
    GeodesicState end;
};

struct GeodesicOptions {
    double atol = 1e-11;
    double max_step = 0.05;
    int stop_at_caustic_touch = 0;   // stop at the k-th u2_at_caustic event
    double stop_at_phi1_advance = 0; // stop when |phi1 - phi1(0)| reaches this
};

/// Cartesian point of a geodesic state (smooth in (phi1, phi2); octant sign
/// flips at coordinate planes are automatic).
Vec geodesic_cartesian(const CharacteristicRadical& rad, const GeodesicState& st);

/// Unit tangent dx/ds of the flow at a state.
Vec geodesic_tangent(const CharacteristicRadical& rad, const GeodesicState& st);

/// Start state from a surface point (u^3 = u3_0 within tol) and a unit
/// direction tangent to the surface; picks the (eta1, eta2) branch matching
/// the direction.
GeodesicState geodesic_start_from_direction(const CharacteristicRadical& rad,
                                            const Vec& point, const Vec& dir,
                                            double tol = 1e-7);

/// Start state from elliptic data (u^1, u^2, octant signs, travel signs).
GeodesicState geodesic_start_from_u(const CharacteristicRadical& rad, double u1,
                                    double u2, const SignState& signs);

/// Integrate the common-tangent line flow restricted to du^3 = 0 for the
/// given arc length (or until a stop condition fires).
GeodesicPath integrate_geodesic(const CharacteristicRadical& rad,
                                const GeodesicState& start, double length,
                                const GeodesicOptions& opts = {});

/// Signed Jacobi first integral accumulated from `from` to `to` along the
/// flow, evaluated by quadrature on the folded phi coordinates (independent
/// of the ODE integration path). Zero for exact geodesics.
double jacobi_constant(const CharacteristicRadical& rad, const GeodesicState& from,
                       const GeodesicState& to);

/// Quadrature action of the u^1-cycle between two angles (used by the thread
/// assembly): integral of (u^1 - u3_0) du^1 / sqrt(Delta) unfolded over phi.
double phi1_action(const CharacteristicRadical& rad, double phi_from, double phi_to);

/// Arc-length potential of the normal congruence: the sum of the three
/// quadratures from basepoint to p with the given branch signs.
double phi_function(const CharacteristicRadical& rad, const EllipticPoint& p,
                    const std::array<int, 3>& eps, const EllipticPoint& basepoint);

/// |grad Phi|^2 assembled from the metric coefficients (should be 1).
double grad_phi_norm2(const CharacteristicRadical& rad, const std::array<double, 3>& u);

struct ClosedGeodesicReport {
    double residual = 0.0;        // rationality condition value
    bool closure_attempted = false;
    double predicted_length = 0.0;
    double measured_length = 0.0;
    double closure_gap = 0.0;     // |x(end) - x(start)|
    double phi2_cycle_error = 0.0;
};

/// Closed-geodesic rationality condition for winding counts (n, n'); when
/// satisfied, integrates one period and reports the Cartesian closure gap.
ClosedGeodesicReport closed_geodesic_check(const std::array<double, 3>& axes,
                                           double u3_0, double u2_0,
                                           const WindingCounts& w,
                                           double residual_tol = 1e-8);

/// Umbilic case u2_0 = a2: integrates the Cartesian geodesic ODE on the
/// ellipsoid {u^3 = u3_0} from an umbilic point and returns the minimum
/// distance of the path to the opposite umbilic.
double umbilic_opposite_gap(const std::array<double, 3>& axes, double u3_0,
                            double dir_angle, double max_length = 25.0);

} // namespace confocal
