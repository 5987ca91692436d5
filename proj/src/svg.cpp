#include "confocal/svg.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace confocal::svg {

void Scene::polyline(std::vector<std::array<double, 2>> pts, Style style) {
    if (pts.size() < 2) return;
    Item it;
    it.pts = std::move(pts);
    it.style = std::move(style);
    items_.push_back(std::move(it));
}

void Scene::curve(const std::function<std::array<double, 2>(double)>& f, double t0,
                  double t1, Style style, double tol) {
    std::vector<std::array<double, 2>> pts;
    pts.push_back(f(t0));
    // recursive chord subdivision
    std::function<void(double, double, const std::array<double, 2>&,
                       const std::array<double, 2>&, int)>
        subdivide = [&](double a, double b, const std::array<double, 2>& fa,
                        const std::array<double, 2>& fb, int depth) {
            const double m = 0.5 * (a + b);
            const auto fm = f(m);
            const double dx = fb[0] - fa[0], dy = fb[1] - fa[1];
            const double len = std::hypot(dx, dy);
            double dev;
            if (len < 1e-300) {
                dev = std::hypot(fm[0] - fa[0], fm[1] - fa[1]);
            } else {
                dev = std::abs((fm[0] - fa[0]) * dy - (fm[1] - fa[1]) * dx) / len;
            }
            if ((dev > tol || depth < 3) && depth < 20) {
                subdivide(a, m, fa, fm, depth + 1);
                subdivide(m, b, fm, fb, depth + 1);
            } else {
                pts.push_back(fb);
            }
        };
    subdivide(t0, t1, f(t0), f(t1), 0);
    polyline(std::move(pts), std::move(style));
}

void Scene::ellipse(double cx, double cy, double rx, double ry, Style style, double tol) {
    curve(
        [&](double t) {
            return std::array<double, 2>{cx + rx * std::cos(t), cy + ry * std::sin(t)};
        },
        0.0, 2.0 * M_PI, std::move(style), tol);
}

void Scene::marker(double x, double y, double radius, Style style) {
    Item it;
    it.pts = {{x, y}};
    it.style = std::move(style);
    it.is_marker = true;
    it.radius = radius;
    items_.push_back(std::move(it));
}

static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string Scene::render() const {
    if (items_.empty()) throw EmptySceneError("svg: empty scene");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& it : items_)
        for (const auto& p : it.pts) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, -p[1]); // y-down
            ymax = std::max(ymax, -p[1]);
        }
    const double mx = 0.05 * std::max(xmax - xmin, 1e-9);
    const double my = 0.05 * std::max(ymax - ymin, 1e-9);
    xmin -= mx; xmax += mx; ymin -= my; ymax += my;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
       << fmt(xmin) << " " << fmt(ymin) << " " << fmt(xmax - xmin) << " "
       << fmt(ymax - ymin) << "\">\n";
    for (const auto& it : items_) {
        if (it.is_marker) {
            os << "  <circle cx=\"" << fmt(it.pts[0][0]) << "\" cy=\"" << fmt(-it.pts[0][1])
               << "\" r=\"" << fmt(it.radius) << "\" fill=\"" << it.style.stroke
               << "\" opacity=\"" << fmt(it.style.opacity) << "\"/>\n";
            continue;
        }
        os << "  <path fill=\"" << it.style.fill << "\" stroke=\"" << it.style.stroke
           << "\" stroke-width=\"" << fmt(it.style.stroke_width) << "\"";
        if (!it.style.dash.empty()) os << " stroke-dasharray=\"" << it.style.dash << "\"";
        if (it.style.opacity != 1.0) os << " opacity=\"" << fmt(it.style.opacity) << "\"";
        os << " d=\"";
        for (std::size_t i = 0; i < it.pts.size(); ++i)
            os << (i == 0 ? "M" : " L") << fmt(it.pts[i][0]) << " " << fmt(-it.pts[i][1]);
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::array<double, 2> project_ortho(const std::array<double, 3>& x,
                                    const std::array<double, 3>& view) {
    // build an orthonormal frame (e1, e2) orthogonal to view
    const double vn = std::sqrt(view[0] * view[0] + view[1] * view[1] + view[2] * view[2]);
    const double v0 = view[0] / vn, v1 = view[1] / vn, v2 = view[2] / vn;
    // pick the axis least aligned with view
    double a0 = 0, a1 = 0, a2 = 1;
    if (std::abs(v2) > 0.9) { a0 = 0; a1 = 1; a2 = 0; }
    // e1 = view x a, e2 = view x e1
    double e1x = v1 * a2 - v2 * a1, e1y = v2 * a0 - v0 * a2, e1z = v0 * a1 - v1 * a0;
    const double n1 = std::sqrt(e1x * e1x + e1y * e1y + e1z * e1z);
    e1x /= n1; e1y /= n1; e1z /= n1;
    const double e2x = v1 * e1z - v2 * e1y, e2y = v2 * e1x - v0 * e1z,
                 e2z = v0 * e1y - v1 * e1x;
    return {x[0] * e1x + x[1] * e1y + x[2] * e1z, x[0] * e2x + x[1] * e2y + x[2] * e2z};
}

} // namespace confocal::svg
