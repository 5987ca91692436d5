#pragma once

#include <array>
#include <optional>
#include <vector>

#include "confocal/errors.hpp"

namespace confocal {

/// Gauss-Legendre nodes/weights on [-1, 1] (cached per order).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

/// Adaptive-order Gauss-Legendre for smooth integrands: doubles the order
/// until the relative change is below rel_tol (order cap 2^14).
template <typename F>
double integrate_smooth(F&& f, double lo, double hi, double rel_tol = 1e-12) {
    double prev = 0.0;
    bool have_prev = false;
    for (int order = 16; order <= (1 << 14); order *= 2) {
        const auto& [xs, ws] = gauss_legendre(order);
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(c + r * xs[i]);
        acc *= r;
        if (have_prev && std::abs(acc - prev) <= rel_tol * std::max(1.0, std::abs(acc)))
            return acc;
        prev = acc;
        have_prev = true;
    }
    return prev;
}

/// The sextic radical  Delta(u) = (u - u2_0)(u - u3_0) prod_j (a_j - u)
/// driving every integral, ODE and closure condition.
struct CharacteristicRadical {
    std::array<double, 3> axes; // a1 > a2 > a3 > 0
    double u2_0;                // in (a3, a2): the fixed one-sheet hyperboloid
    double u3_0;                // < a3: the fixed ellipsoid
    double eps_sep = 1e-9;

    CharacteristicRadical(std::array<double, 3> a, double u2, double u3,
                          double eps = 1e-9);

    double delta(double u) const;
    /// All five roots, descending: a1, a2, u2_0, a3, u3_0.
    std::array<double, 5> roots_desc() const { return {axes[0], axes[1], u2_0, axes[2], u3_0}; }
};

/// Winding counts of a closed polygon/thread: n and n' must be even.
struct WindingCounts {
    int n = 0;      // crossings of {x^2 = 0} (u^1 reaching a2)
    int nprime = 0; // tangencies with {u^2 = u2_0} (= crossings of {x^3 = 0})
    int m = 0;      // vertices (u^3 reaching u3_1)

    WindingCounts() = default;
    WindingCounts(int n_, int np_, int m_);
};

/// int_lo^hi P(u) du / sqrt(Delta(u))  with P given by ascending coefficients.
/// Endpoints at simple roots of Delta are desingularized by trigonometric
/// substitution; relative accuracy ~1e-10.
double hyperelliptic(const CharacteristicRadical& rad, const std::vector<double>& poly,
                     double lo, double hi);

/// The first two left-hand sides of the closure conditions (weights 1 and u).
std::pair<double, double> darboux_residuals(const CharacteristicRadical& rad,
                                            double u3_1, const WindingCounts& w);

enum class ClosureMode { darboux2, thread1 };

struct ClosureGridSample {
    double u2_0, u3_1;
    double r1, r2;
};

struct ClosureResult {
    bool found = false;
    double u2_0 = 0.0, u3_1 = 0.0;
    double r1 = 0.0, r2 = 0.0;
    std::vector<ClosureGridSample> grid; // sampled residual landscape when not found
};

struct ClosureOptions {
    std::optional<double> u2_0;  // required by thread1 with m > 0
    double u3_1_span = 4.0;      // search box: u3_1 in (u3_0 - span, u3_0)
    int grid_n = 32;
    double tol = 1e-10;
};

/// Solve the rationality conditions. darboux2: both residuals of the polygon
/// closure for (u2_0, u3_1). thread1: the (u - u3_0)-weighted condition alone,
/// for u3_1 (m > 0, u2_0 given) or for u2_0 (m = 0, closed geodesics).
ClosureResult solve_closure(const std::array<double, 3>& axes, double u3_0,
                            const WindingCounts& w, ClosureMode mode,
                            const ClosureOptions& opts = {});

enum class PerimeterVariant { darb, darb1, staud, staud1 };

/// Closed-form perimeter/length of the configuration, normalized to Euclidean
/// length (the displayed equations count the double cover; see README).
double perimeter_formula(const CharacteristicRadical& rad, double u3_1,
                         const WindingCounts& w, PerimeterVariant variant);

/// Signed value of the half-turn criterion
///   int_{a2}^{a1} (u - u3_0) du/sqrt(Delta) - int_{a3}^{u2_0} (u - u3_0) du/sqrt(Delta).
double half_turn_criterion(const CharacteristicRadical& rad);

// small ascending-coefficient polynomial helpers
std::vector<double> poly_const(double c);
std::vector<double> poly_monic_roots(const std::vector<double>& roots); // prod (u - r)
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);

} // namespace confocal
