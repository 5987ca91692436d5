#include "confocal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "confocal/polyroots.hpp"

namespace confocal {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    const auto count = std::size_t(order);
    std::vector<double> xs(count), ws(count);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration from the Chebyshev estimate
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        xs[std::size_t(i)] = -x;
        xs[std::size_t(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        ws[std::size_t(i)] = w;
        ws[std::size_t(order - 1 - i)] = w;
    }
    return cache.emplace(order, std::make_pair(std::move(xs), std::move(ws))).first->second;
}

std::vector<double> poly_const(double c) { return {c}; }

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> poly_monic_roots(const std::vector<double>& roots) {
    std::vector<double> p{1.0};
    for (double r : roots) p = poly_mul(p, {-r, 1.0});
    return p;
}

CharacteristicRadical::CharacteristicRadical(std::array<double, 3> a, double u2,
                                             double u3, double eps)
    : axes(a), u2_0(u2), u3_0(u3), eps_sep(eps) {
    if (!(a[0] > a[1] && a[1] > a[2] && a[2] > 0))
        throw SeparationError("CharacteristicRadical: axes must satisfy a1 > a2 > a3 > 0");
    const auto rs = roots_desc();
    for (std::size_t i = 1; i < rs.size(); ++i)
        if (!(rs[i - 1] - rs[i] > eps_sep))
            throw SeparationError("CharacteristicRadical: roots not separated (need a2 > u2_0 > a3 > u3_0)");
}

double CharacteristicRadical::delta(double u) const {
    return (u - u2_0) * (u - u3_0) * (axes[0] - u) * (axes[1] - u) * (axes[2] - u);
}

WindingCounts::WindingCounts(int n_, int np_, int m_) : n(n_), nprime(np_), m(m_) {
    if (n < 0 || nprime < 0 || m < 0) throw Error("WindingCounts: negative count");
    if (n % 2 != 0 || nprime % 2 != 0)
        throw Error("WindingCounts: n and n' must be even");
}

namespace {

enum class EndKind { root, interior };

struct Endpoint {
    EndKind kind;
    int root_index; // into roots_desc when kind == root
};

Endpoint classify(const CharacteristicRadical& rad, double u) {
    const auto rs = rad.roots_desc();
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (std::abs(u - rs[i]) <= rad.eps_sep) return {EndKind::root, int(i)};
    return {EndKind::interior, -1};
}

// Delta(u) = -prod_i (u - r_i). Pulling a root out as (hi - u) flips one
// sign, pulling it as (u - lo) does not; `sign` carries the net factor.
double reduced_product(const CharacteristicRadical& rad, double u, int skip_a, int skip_b,
                       double sign) {
    const auto rs = rad.roots_desc();
    double p = sign;
    for (int i = 0; i < int(rs.size()); ++i) {
        if (i == skip_a || i == skip_b) continue;
        p *= (u - rs[std::size_t(i)]);
    }
    return p;
}

template <typename F>
double gl_doubling(F&& f, double lo, double hi) {
    double prev = 0.0;
    bool have_prev = false;
    for (int order = 16; order <= (1 << 14); order *= 2) {
        const auto& [xs, ws] = gauss_legendre(order);
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(c + r * xs[i]);
        acc *= r;
        if (have_prev && std::abs(acc - prev) <= 1e-11 * std::max(1.0, std::abs(acc)))
            return acc;
        prev = acc;
        have_prev = true;
    }
    return prev;
}

} // namespace

double hyperelliptic(const CharacteristicRadical& rad, const std::vector<double>& poly,
                     double lo, double hi) {
    if (lo == hi) return 0.0;
    if (lo > hi) return -hyperelliptic(rad, poly, hi, lo);

    // no root strictly inside, Delta > 0 in the interior
    const auto rs = rad.roots_desc();
    for (double r : rs)
        if (r > lo + rad.eps_sep && r < hi - rad.eps_sep) {
            std::ostringstream os;
            os << "hyperelliptic: Delta root " << r << " inside [" << lo << ", " << hi << "]";
            throw IntervalError(os.str());
        }
    const double probe = rad.delta(0.5 * (lo + hi));
    if (probe < 0) throw IntervalError("hyperelliptic: Delta negative on interval");

    const Endpoint elo = classify(rad, lo), ehi = classify(rad, hi);

    if (elo.kind == EndKind::root && ehi.kind == EndKind::root) {
        // u = c + r sin(phi): (u-lo)(hi-u) = r^2 cos^2(phi) cancels the root pair
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        const int ia = elo.root_index, ib = ehi.root_index;
        return gl_doubling(
            [&](double phi) {
                const double u = c + r * std::sin(phi);
                const double g = reduced_product(rad, u, ia, ib, 1.0);
                return poly_eval(poly, u) / std::sqrt(g);
            },
            -0.5 * M_PI, 0.5 * M_PI);
    }
    if (elo.kind == EndKind::interior && ehi.kind == EndKind::root) {
        // u = hi - (hi-lo) sin^2(psi): singular end at hi only
        const double d = hi - lo;
        const int ib = ehi.root_index;
        return gl_doubling(
            [&](double psi) {
                const double s = std::sin(psi);
                const double u = hi - d * s * s;
                const double h = reduced_product(rad, u, ib, ib, 1.0);
                return 2.0 * std::sqrt(d) * std::cos(psi) * poly_eval(poly, u) / std::sqrt(h);
            },
            0.0, 0.5 * M_PI);
    }
    if (elo.kind == EndKind::root && ehi.kind == EndKind::interior) {
        const double d = hi - lo;
        const int ia = elo.root_index;
        return gl_doubling(
            [&](double psi) {
                const double s = std::sin(psi);
                const double u = lo + d * s * s;
                const double h = reduced_product(rad, u, ia, ia, -1.0);
                return 2.0 * std::sqrt(d) * std::cos(psi) * poly_eval(poly, u) / std::sqrt(h);
            },
            0.0, 0.5 * M_PI);
    }
    // smooth everywhere
    return gl_doubling(
        [&](double u) { return poly_eval(poly, u) / std::sqrt(rad.delta(u)); }, lo, hi);
}

namespace {

// the three canonical interval integrals with a given weight polynomial
double int1(const CharacteristicRadical& rad, const std::vector<double>& p) {
    return hyperelliptic(rad, p, rad.axes[1], rad.axes[0]);
}
double int2(const CharacteristicRadical& rad, const std::vector<double>& p) {
    return hyperelliptic(rad, p, rad.axes[2], rad.u2_0);
}
double int3(const CharacteristicRadical& rad, const std::vector<double>& p, double u3_1) {
    return hyperelliptic(rad, p, u3_1, rad.u3_0);
}

} // namespace

std::pair<double, double> darboux_residuals(const CharacteristicRadical& rad,
                                            double u3_1, const WindingCounts& w) {
    if (!(u3_1 < rad.u3_0)) throw RangeError("darboux_residuals: require u3_1 < u3_0");
    const std::vector<double> one{1.0}, u{0.0, 1.0};
    const double r1 = w.n * int1(rad, one) - w.nprime * int2(rad, one) + w.m * int3(rad, one, u3_1);
    const double r2 = w.n * int1(rad, u) - w.nprime * int2(rad, u) + w.m * int3(rad, u, u3_1);
    return {r1, r2};
}

double half_turn_criterion(const CharacteristicRadical& rad) {
    const std::vector<double> ku{-rad.u3_0, 1.0};
    return int1(rad, ku) - int2(rad, ku);
}

double perimeter_formula(const CharacteristicRadical& rad, double u3_1,
                         const WindingCounts& w, PerimeterVariant variant) {
    // Geometric (Euclidean) normalization: the displayed equations accumulate
    // the double cover, so their coefficients are halved here.
    const std::vector<double> usq{0.0, 0.0, 1.0};
    const std::vector<double> u_ku = poly_mul({0.0, 1.0}, {-rad.u3_0, 1.0});
    const std::vector<double> k2k3 = poly_mul({-rad.u2_0, 1.0}, {-rad.u3_0, 1.0});
    switch (variant) {
        case PerimeterVariant::darb:
            return w.n * int1(rad, usq) - w.nprime * int2(rad, usq) + w.m * int3(rad, usq, u3_1);
        case PerimeterVariant::darb1:
            return w.n * int1(rad, u_ku) - w.nprime * int2(rad, u_ku) + w.m * int3(rad, u_ku, u3_1);
        case PerimeterVariant::staud:
            return 2.0 * int1(rad, k2k3) - 2.0 * int2(rad, k2k3) + int3(rad, k2k3, u3_1);
        case PerimeterVariant::staud1:
            return w.n * int1(rad, k2k3) - w.nprime * int2(rad, k2k3) +
                   0.5 * w.m * int3(rad, k2k3, u3_1);
    }
    throw Error("perimeter_formula: bad variant");
}

namespace {

double brent(const std::function<double(double)>& f, double a, double b, double fa,
             double fb, double xtol) {
    // standard Brent root bracketing
    if (fa * fb > 0) throw Error("brent: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
    }
    return b;
}

} // namespace

ClosureResult solve_closure(const std::array<double, 3>& axes, double u3_0,
                            const WindingCounts& w, ClosureMode mode,
                            const ClosureOptions& opts) {
    ClosureResult res;
    const double a2 = axes[1], a3 = axes[2];
    const double margin = 1e-4 * (a2 - a3);
    const std::vector<double> ku{-u3_0, 1.0};

    auto make_rad = [&](double u2) { return CharacteristicRadical(axes, u2, u3_0); };

    if (mode == ClosureMode::thread1) {
        if (w.m == 0) {
            // u3_1 is absent from the condition; the unknown is u2_0
            auto f = [&](double u2) {
                const CharacteristicRadical rad = make_rad(u2);
                return w.n * int1(rad, ku) - w.nprime * int2(rad, ku);
            };
            const int N = opts.grid_n;
            double prev_u = a3 + margin, prev_f = f(prev_u);
            res.grid.push_back({prev_u, 0.0, prev_f, 0.0});
            for (int i = 1; i < N; ++i) {
                const double u2 = a3 + margin + (a2 - a3 - 2 * margin) * i / double(N - 1);
                const double fi = f(u2);
                res.grid.push_back({u2, 0.0, fi, 0.0});
                if (prev_f * fi <= 0.0) {
                    const double root = brent(f, prev_u, u2, prev_f, fi, 1e-14);
                    res.found = true;
                    res.u2_0 = root;
                    res.u3_1 = u3_0; // no vertices
                    res.r1 = f(root);
                    res.r2 = 0.0;
                    return res;
                }
                prev_u = u2; prev_f = fi;
            }
            return res; // NotFound with the sampled landscape
        }
        if (!opts.u2_0) throw Error("solve_closure(thread1, m>0): u2_0 must be given");
        const CharacteristicRadical rad = make_rad(*opts.u2_0);
        auto f = [&](double u3_1) {
            return w.n * int1(rad, ku) - w.nprime * int2(rad, ku) + w.m * int3(rad, ku, u3_1);
        };
        const double lo = u3_0 - opts.u3_1_span, hi = u3_0; // closed at the no-vertex limit
        const int N = opts.grid_n;
        double prev_u = lo, prev_f = f(lo);
        res.grid.push_back({*opts.u2_0, prev_u, prev_f, 0.0});
        for (int i = 1; i < N; ++i) {
            const double u3 = lo + (hi - lo) * i / double(N - 1);
            const double fi = f(u3);
            res.grid.push_back({*opts.u2_0, u3, fi, 0.0});
            if (prev_f * fi <= 0.0) {
                const double root = brent(f, prev_u, u3, prev_f, fi, 1e-14);
                res.found = true;
                res.u2_0 = *opts.u2_0;
                res.u3_1 = root;
                res.r1 = f(root);
                return res;
            }
            prev_u = u3; prev_f = fi;
        }
        return res;
    }

    // darboux2: damped Newton on (r1, r2), seeded from a grid scan
    auto resid = [&](double u2, double u31) -> std::pair<double, double> {
        const CharacteristicRadical rad = make_rad(u2);
        return darboux_residuals(rad, u31, w);
    };

    const int N = opts.grid_n;
    double best_norm = 1e300, seed_u2 = 0.0, seed_u31 = 0.0;
    const double u31_lo = u3_0 - opts.u3_1_span, u31_hi = u3_0 - 1e-3;
    for (int i = 0; i < N; ++i) {
        const double u2 = a3 + margin + (a2 - a3 - 2 * margin) * i / double(N - 1);
        for (int j = 0; j < N; ++j) {
            const double u31 = u31_lo + (u31_hi - u31_lo) * j / double(N - 1);
            const auto [r1, r2] = resid(u2, u31);
            res.grid.push_back({u2, u31, r1, r2});
            const double nr = std::hypot(r1, r2);
            if (nr < best_norm) { best_norm = nr; seed_u2 = u2; seed_u31 = u31; }
        }
    }

    double u2 = seed_u2, u31 = seed_u31;
    auto [r1, r2] = resid(u2, u31);
    double norm = std::hypot(r1, r2);
    for (int iter = 0; iter < 60 && norm > opts.tol; ++iter) {
        const double h2 = 1e-7 * (a2 - a3), h3 = 1e-7 * std::max(1.0, std::abs(u3_0 - u31));
        const auto [r1a, r2a] = resid(std::min(u2 + h2, a2 - margin), u31);
        const auto [r1b, r2b] = resid(u2, std::min(u31 + h3, u31_hi));
        const double j11 = (r1a - r1) / h2, j12 = (r1b - r1) / h3;
        const double j21 = (r2a - r2) / h2, j22 = (r2b - r2) / h3;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;
        double du2 = (-r1 * j22 + r2 * j12) / det;
        double du31 = (-j11 * r2 + j21 * r1) / det;
        double lam = 1.0;
        bool accepted = false;
        for (int back = 0; back < 30; ++back, lam *= 0.5) {
            double nu2 = std::clamp(u2 + lam * du2, a3 + margin, a2 - margin);
            double nu31 = std::min(u31 + lam * du31, u31_hi);
            const auto [nr1, nr2] = resid(nu2, nu31);
            const double nn = std::hypot(nr1, nr2);
            if (nn < norm) {
                u2 = nu2; u31 = nu31; r1 = nr1; r2 = nr2; norm = nn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    if (norm <= std::max(opts.tol, 1e-9)) {
        res.found = true;
        res.u2_0 = u2;
        res.u3_1 = u31;
        res.r1 = r1;
        res.r2 = r2;
    }
    return res;
}

} // namespace confocal
