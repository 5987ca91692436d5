#pragma once

#include <array>
#include <optional>
#include <vector>

#include "confocal/confocal_core.hpp"
#include "confocal/elliptic.hpp"
#include "confocal/geodesics.hpp"
#include "confocal/quadrature.hpp"

namespace confocal {

enum class SegmentKind { rectilinear, geodesic, curvature };

/// One piece of a polygonal thread with its geometry payload.
struct ThreadSegment {
    SegmentKind kind = SegmentKind::rectilinear;
    double length = 0.0;
    std::vector<Vec> polyline; // sampled geometry (ends included)
};

/// Typed segment chain (vertices on confocal quadrics, ordered pieces).
struct PolygonalThread {
    std::vector<Vec> vertices;
    std::vector<double> vertex_z; // confocal parameter of each vertex quadric
    std::vector<ThreadSegment> segments;
    bool closed = false;
    double perimeter = 0.0;
    double closure_gap = 0.0;
    WindingCounts measured;
    std::vector<SignState> sign_history;
};

/// All real lines through x tangent to both Q_{z1p} and Q_{z2p} (up to 4),
/// built from the elliptic-coordinate branch structure; each returned line's
/// tangency spectrum is {z1p, z2p}.
std::vector<Line> tangent_lines_from_point(const ConfocalFamily& f, const Vec& x,
                                           double z1p, double z2p);

/// Oriented tangent line at x for an explicit branch choice eps (directions
/// of du^k along the line).
Line tangent_line_branch(const ConfocalFamily& f, const Vec& x, double z1p,
                         double z2p, const std::array<int, 3>& eps);

/// 2D: the two tangent lines from an exterior point to the conic Q_{zp}
/// (classical pole-polar construction); returns tangency points too.
std::vector<std::pair<Line, Vec>> tangent_lines_2d(const ConfocalFamily& f,
                                                   const Vec& x, double zp);

struct DarbouxPolygon {
    std::vector<Vec> vertices;      // m+1 entries, last = closure test point
    std::vector<Vec> directions;    // unit chord directions
    std::vector<Vec> ellipsoid_tangency; // contact point with {u3 = u3_0} per side
    double perimeter = 0.0;
    double closure_gap = 0.0;
    double direction_gap = 0.0;
    bool closed = false;
    bool minimal = true; // no closure at a proper divisor of the step count
    WindingCounts measured;
    int x1_crossings = 0, x3_crossings = 0; // alternation audits
    double u2_0 = 0.0, u3_0 = 0.0, u3_1 = 0.0;
    std::array<double, 3> axes{};
};

/// Darboux polygon: p chords tangent to {u^2 = u2_0} and {u^3 = u3_0},
/// reflecting at vertices on {u^3 = u3_1}. Branch policy: first chord branch
/// is explicit, later chords by continuity (specular reflection match).
DarbouxPolygon build_polygon(const std::array<double, 3>& axes, const Vec& start,
                             double u2_0, double u3_0, double u3_1, int steps,
                             const std::array<int, 3>& first_branch = {1, 1, 1});

struct Chasles2D {
    std::vector<Vec> vertices;        // on the listed confocal ellipses
    std::vector<Vec> tangency_points; // on the base ellipse, one per chord
    std::vector<double> thetas;       // tangency parameters
    double perimeter = 0.0;
    double closure_gap = 0.0;
    bool closed = false;
    double base_tangency_residual = 0.0; // worst |Q_0 tangency| over chords
};

/// Chasles polygon in the plane: chords tangent to the base ellipse with
/// vertices on the listed confocal ellipses z_j < 0.
Chasles2D chasles_polygon_2d(const ConfocalFamily& f2, const std::vector<double>& zs,
                             double theta0);

/// 1D closure search for the Poncelet p-gon parameter z < 0 (all vertices on
/// one confocal ellipse): finds z with tangency-angle advance = 2 pi.
std::optional<double> find_poncelet_parameter(const ConfocalFamily& f2, int p,
                                              double z_lo, double z_hi);

struct DualizeResult {
    std::vector<Vec> vertices;         // new polygon vertices (old tangency images)
    std::vector<Vec> tangency_points;  // new tangency points (old vertex images)
    double perimeter = 0.0;
    double closure_gap = 0.0;
    bool closed = false;
    double tangency_residual = 0.0; // worst tangency defect of new sides
    double reflection_residual = 0.0;
};

/// Reverse the roles of vertices and tangency points through the Ivory
/// affinity (all vertices on one quadric Q_z, sides tangent to the caustic
/// re-indexed as Q_0). Works for the 2D Poncelet polygon and the 3D Darboux
/// polygon (caustic = the ellipsoid {u^3 = u3_0}).
DualizeResult dualize_polygon(const ConfocalFamily& f,
                              const std::vector<Vec>& vertices,
                              const std::vector<Vec>& tangency_points,
                              double vertex_z, double caustic_z);

} // namespace confocal
