#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "confocal/errors.hpp"

namespace confocal::svg {

struct Style {
    std::string stroke = "#303030";
    double stroke_width = 1.0;
    std::string fill = "none";
    std::string dash; // e.g. "4 2"
    double opacity = 1.0;
};

/// Minimal 2D scene rendered to an SVG 1.1 document; math coordinates are
/// y-up, flipped to the SVG y-down convention on output; the viewBox is
/// auto-fit with a 5% margin.
class Scene {
  public:
    void polyline(std::vector<std::array<double, 2>> pts, Style style = {});

    /// Adaptive polyline of a parametric curve: subdivides until the chord
    /// deviation is below tol.
    void curve(const std::function<std::array<double, 2>(double)>& f, double t0,
               double t1, Style style = {}, double tol = 1e-3);

    /// Axis-aligned ellipse with semi-axes rx, ry (emitted as adaptive path).
    void ellipse(double cx, double cy, double rx, double ry, Style style = {},
                 double tol = 1e-3);

    void marker(double x, double y, double radius, Style style = {});

    bool empty() const { return items_.empty(); }

    /// Serializes the scene; throws EmptySceneError when nothing was added.
    std::string render() const;

  private:
    struct Item {
        std::vector<std::array<double, 2>> pts;
        Style style;
        bool is_marker = false;
        double radius = 0.0;
    };
    std::vector<Item> items_;
};

/// Orthographic projection of a 3D point onto the plane orthogonal to `view`.
std::array<double, 2> project_ortho(const std::array<double, 3>& x,
                                    const std::array<double, 3>& view);

} // namespace confocal::svg
