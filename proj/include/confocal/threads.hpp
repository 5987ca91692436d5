#pragma once

#include <array>
#include <vector>

#include "confocal/billiards.hpp"
#include "confocal/quadrature.hpp"

namespace confocal {

/// Graves vertex data: pen angle theta0 on the confocal ellipse x_z and the
/// two tangency angles theta1 < theta0 < theta2 on the base ellipse.
struct GravesVertex {
    double a1 = 0.0, a2 = 0.0, z = 0.0;
    double theta0 = 0.0, theta1 = 0.0, theta2 = 0.0;
    double tc_residual = 0.0;          // worst tangency-configuration defect
    double collinearity_residual = 0.0; // of x_z^1, x_0^0, x_z^2
};

/// Closed-form tangency angles for the pen at theta0 on x_z, z < 0.
GravesVertex graves_vertex(double a1, double a2, double z, double theta0);

/// Excess |x_z^1 - x_z^2| - arclength of the base ellipse from theta1 through
/// theta0 to theta2; independent of theta0 (constant thread slack).
double graves_excess(double a1, double a2, double z, double theta0);

/// Staude thread: 2 rectilinear + 3 geodesic + <= 2 curvature pieces around
/// the ellipsoid {u^3 = u3_0} and outside {u^2 = u2_0}, stretched at a pen on
/// {u^3 = u3_1}.
struct StaudeThread {
    std::array<double, 3> axes{};
    double u2_0 = 0.0, u3_0 = 0.0, u3_1 = 0.0;
    Vec pen;
    std::vector<ThreadSegment> pieces;
    double total_length = 0.0;
    double arc_action_total = 0.0; // measured curvature-arc action
    double slack_predicted = 0.0;  // 2 x closure residual of the (2,2,1) loop
    double half_turn = 0.0;
    double junction_residual = 0.0; // worst tangent mismatch at piece joints
    bool early_touch_a = false, early_touch_b = false; // hyperboloid touched on a line piece
    WindingCounts measured;
};

/// Assemble the thread at the pen position given by an azimuth angle on the
/// pen ellipsoid. Throws InfeasibleThreadError when the required curvature
/// slack is negative (sign of the half-turn criterion / pen position regime).
StaudeThread assemble_staude_thread(const std::array<double, 3>& axes, double u2_0,
                                    double u3_0, double u3_1, double azimuth);

/// Fully degenerate focal-conic thread ((u2_0, u3_0) = (a2, a3)): the pen
/// moves in the {x^2 = 0} symmetry plane, one rectilinear piece is broken at
/// a point of the focal hyperbola instead of turning at the focal-ellipse
/// vertex (its focus).
struct FocalThread {
    Vec pen;
    bool broken = false; // taut segment bends at the hyperbola (remark variant)
    Vec bend;            // bend point on the branch (broken case only)
    Vec near_vertex, far_vertex; // focal-ellipse vertices (foci of the hyperbola)
    std::vector<ThreadSegment> pieces;
    double total_length = 0.0;
    double hyperbola_residual = 0.0; // membership defect of the bend point
    double string_invariant = 0.0;   // |P F+| + |P F-| (traced-ellipse check)
};

/// Assemble the broken-segment focal thread for a pen angle theta on the
/// {x^2 = 0} section of the ellipsoid {u^3 = u3_1}.
FocalThread staude_degenerate_thread(const std::array<double, 3>& axes, double u3_1,
                                     double theta);

/// Prescribed curvature piece: a u^1-interval on the line of curvature, taut
/// (+1) or cusped (-1, ideal construction, length subtracted).
struct CurvatureBudget {
    double u_lo = 0.0, u_hi = 0.0;
    int orientation = 1;
};

/// Invariant length of a mixed thread with winding counts w and prescribed
/// curvature budgets; one non-prescribed piece absorbs the closure residual.
/// Throws ClosureResidualError when absorb = false and the budgets do not
/// satisfy the closure condition.
double mixed_thread_length(const CharacteristicRadical& rad, double u3_1,
                           const WindingCounts& w,
                           const std::vector<CurvatureBudget>& budgets,
                           bool absorb = true, double closure_tol = 1e-8);

} // namespace confocal
