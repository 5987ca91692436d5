#include "confocal/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "confocal/billiards.hpp"
#include "confocal/confocal_core.hpp"
#include "confocal/elliptic.hpp"
#include "confocal/geodesics.hpp"
#include "confocal/quadrature.hpp"
#include "confocal/rng.hpp"
#include "confocal/sj.hpp"
#include "confocal/svg.hpp"
#include "confocal/threads.hpp"

namespace confocal {

namespace {

struct Params {
    const std::map<std::string, std::string>& kv;
    std::set<std::string> known;

    double get(const std::string& key, double dflt) {
        known.insert(key);
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ConfigError("bad numeric value for key '" + key + "': " + it->second);
        }
    }
    int geti(const std::string& key, int dflt) {
        const double v = get(key, double(dflt));
        const int i = int(std::llround(v));
        if (std::abs(v - i) > 1e-12) throw ConfigError("integer expected for key '" + key + "'");
        return i;
    }
    void reject_unknown() const {
        for (const auto& [k, v] : kv)
            if (!known.count(k)) throw ConfigError("unknown config key: " + k);
    }
};

std::array<double, 3> axes3(Params& p) {
    return {p.get("a1", 3.0), p.get("a2", 2.0), p.get("a3", 1.0)};
}

using Runner = std::function<void(Params&, SplitMix64&, ExperimentReport&, svg::Scene&)>;

// ---------------------------------------------------------------- ivory-check

void run_ivory(Params& p, SplitMix64& rng, ExperimentReport& rep, svg::Scene&) {
    const int samples = p.geti("samples", 256);
    if (samples <= 0) throw ConfigError("samples must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-10;
    rep.csv_columns = {"sample", "kind", "residual"};
    std::vector<double> devs;
    for (int i = 0; i < samples; ++i) {
        const int kind = int(rng.below(3)); // 0: real 2D, 1: real 3D, 2: complex SJ
        double resid = 0.0;
        if (kind < 2) {
            const int d = kind + 2;
            sj::SJMatrix M;
            double amin = 1e9;
            for (int j = 0; j < d; ++j) {
                const double a = rng.uniform(0.5, 3.0);
                amin = std::min(amin, a);
                M.blocks.push_back({sj::Cplx(1.0 / a, 0.0), 1});
            }
            auto q = sj::CanonicalQuadric::make(M, sj::QuadricKind::QC);
            const sj::Cplx z(rng.uniform(-1.0, 0.9 * amin), 0.0);
            sj::IdentitySample s;
            s.x0_0 = sj::random_point_on(q, rng);
            s.x0_1 = sj::random_point_on(q, rng);
            resid = sj::check_identity(sj::Identity::ivory, q, z, s);
        } else {
            const sj::SJMatrix M = sj::random_sj_matrix(rng);
            auto q = sj::CanonicalQuadric::make(M, sj::QuadricKind::QC);
            const sj::Cplx z = sj::random_admissible_z(rng, M);
            sj::IdentitySample s;
            s.x0_0 = sj::random_point_on(q, rng);
            s.x0_1 = sj::random_point_on(q, rng);
            resid = sj::check_identity(sj::Identity::ivory, q, z, s);
        }
        devs.push_back(resid);
        rep.csv_rows.push_back({double(i), double(kind), resid});
        Json s = Json::object();
        s.set("sample", i).set("kind", kind).set("residual", resid);
        rep.samples.push(std::move(s));
    }
    rep.finish(devs);
}

// ------------------------------------------------------------------- sj-check

void run_sj_check(Params& p, SplitMix64& rng, ExperimentReport& rep, svg::Scene&) {
    const int samples = p.geti("samples", 128);
    if (samples <= 0) throw ConfigError("samples must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-10;
    rep.csv_columns = {"sample", "identity", "residual"};
    using sj::Identity;
    const std::vector<std::pair<Identity, const char*>> ids = {
        {Identity::henrici, "henrici"},       {Identity::tc_symmetry, "tc"},
        {Identity::segment_ruling, "segrul"}, {Identity::ruling_ruling, "rulrul"},
        {Identity::polar_rulings, "polar"},   {Identity::key_lemma, "keylemma"},
    };
    std::vector<double> devs;
    for (int i = 0; i < samples; ++i) {
        sj::SJMatrix M = sj::random_sj_matrix(rng, 4, 2);
        while (M.dimension() < 3) M = sj::random_sj_matrix(rng, 4, 2);
        auto q = sj::CanonicalQuadric::make(M, sj::QuadricKind::QC);
        const sj::Cplx z = sj::random_admissible_z(rng, M);
        sj::IdentitySample s;
        s.x0_0 = sj::random_point_on(q, rng);
        s.x0_1 = sj::random_point_on(q, rng);
        s.w0_0 = sj::random_ruling_at(q, s.x0_0, rng);
        s.w0_1 = sj::random_ruling_at(q, s.x0_1, rng);
        int idx = 0;
        for (const auto& [id, name] : ids) {
            double resid;
            if (id == Identity::polar_rulings) {
                sj::IdentitySample s2 = s;
                // rulings are self-conjugate; a distinct polar partner needs dim >= 4
                s2.w0_hat = (q.dim() >= 4)
                                ? sj::random_conjugate_ruling(q, s.x0_0, s.w0_0, rng)
                                : s.w0_0;
                resid = sj::check_identity(id, q, z, s2);
            } else {
                resid = sj::check_identity(id, q, z, s);
            }
            devs.push_back(resid);
            rep.csv_rows.push_back({double(i), double(idx), resid});
            ++idx;
        }
        // square-back residual of sqrt_sj
        const sj::CMat S = sj::sqrt_sj(M, z);
        const sj::CMat Rz =
            sj::CMat::Identity(q.dim(), q.dim()) - sj::Cplx(z) * q.A;
        const double sq_res = (S * S - Rz).norm() / std::max(1.0, Rz.norm());
        devs.push_back(sq_res);
        rep.csv_rows.push_back({double(i), double(ids.size()), sq_res});
    }
    rep.finish(devs);
}

// ---------------------------------------------------------- lame-orthogonality

void run_lame(Params& p, SplitMix64& rng, ExperimentReport& rep, svg::Scene&) {
    const int samples = p.geti("samples", 2000);
    if (samples <= 0) throw ConfigError("samples must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-9;
    const auto ax = axes3(p);
    ConfocalFamily f({ax[0], ax[1], ax[2]});
    rep.csv_columns = {"sample", "max_pair_dot"};
    std::vector<double> devs;
    for (int i = 0; i < samples; ++i) {
        Vec x(3);
        for (int j = 0; j < 3; ++j) {
            double v = 0;
            while (std::abs(v) < 1e-3) v = rng.uniform(-2.5, 2.5);
            x(j) = v;
        }
        EllipticPoint ep;
        try {
            ep = to_elliptic(f, x);
        } catch (const CoordinatePlaneError&) {
            continue;
        }
        Vec n[3];
        for (int k = 0; k < 3; ++k) n[k] = normal_hat(f, ep.u[std::size_t(k)], x, 1e-6);
        double worst = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                worst = std::max(worst,
                                 std::abs(n[a].dot(n[b])) / (n[a].norm() * n[b].norm()));
        devs.push_back(worst);
        rep.csv_rows.push_back({double(i), worst});
    }
    rep.finish(devs);
}

// --------------------------------------------------------------------- graves

void run_graves(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene& scene) {
    const double a1 = p.get("a1", 2.0), a2 = p.get("a2", 1.0), z = p.get("z", -1.0);
    const int sweep = p.geti("sweep", 256);
    if (sweep <= 0) throw ConfigError("sweep must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-8;
    rep.csv_columns = {"theta0", "excess", "tangent_len"};
    std::vector<double> excesses, tangents;
    for (int i = 0; i < sweep; ++i) {
        const double th0 = 2 * M_PI * i / sweep;
        const double e = graves_excess(a1, a2, z, th0);
        const GravesVertex v = graves_vertex(a1, a2, z, th0);
        const double tl = std::hypot(std::sqrt(a1 - z) * std::cos(th0) - std::sqrt(a1) * std::cos(v.theta1),
                                     std::sqrt(a2 - z) * std::sin(th0) - std::sqrt(a2) * std::sin(v.theta1));
        excesses.push_back(e);
        tangents.push_back(tl);
        rep.csv_rows.push_back({th0, e, tl});
    }
    const double emax = *std::max_element(excesses.begin(), excesses.end());
    const double emin = *std::min_element(excesses.begin(), excesses.end());
    double tmean = 0;
    for (double t : tangents) tmean += t;
    tmean /= double(tangents.size());
    std::vector<double> devs{(emax - emin) / tmean};
    rep.extra.set("excess_mean", (emax + emin) / 2).set("mean_tangent_length", tmean);
    rep.finish(devs);

    // figure: base ellipse, confocal ellipse, one vertex configuration
    const GravesVertex v = graves_vertex(a1, a2, z, 0.8);
    scene.ellipse(0, 0, std::sqrt(a1), std::sqrt(a2), {.stroke = "#1f77b4", .stroke_width = 1.5});
    scene.ellipse(0, 0, std::sqrt(a1 - z), std::sqrt(a2 - z), {.stroke = "#888888"});
    const std::array<double, 2> pen{std::sqrt(a1 - z) * std::cos(v.theta0),
                                    std::sqrt(a2 - z) * std::sin(v.theta0)};
    for (double th : {v.theta1, v.theta2})
        scene.polyline({pen, {std::sqrt(a1) * std::cos(th), std::sqrt(a2) * std::sin(th)}},
                       {.stroke = "#d62728", .stroke_width = 1.2});
    scene.curve(
        [&](double t) {
            return std::array<double, 2>{std::sqrt(a1) * std::cos(t), std::sqrt(a2) * std::sin(t)};
        },
        v.theta1, v.theta2, {.stroke = "#2ca02c", .stroke_width = 2.2});
}

// ----------------------------------------------------------------- chasles-2d

void run_chasles(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene& scene) {
    const double a1 = p.get("a1", 2.0), a2 = p.get("a2", 1.0);
    const int psides = p.geti("p", 3);
    const int sweep = p.geti("sweep", 64);
    if (psides < 3) throw ConfigError("p >= 3 required");
    if (sweep <= 0) throw ConfigError("sweep must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-8;
    ConfocalFamily f2({a1, a2});
    const auto z = find_poncelet_parameter(f2, psides, -8.0, -0.02);
    if (!z) throw Error("chasles-2d: no Poncelet parameter in the search bracket");
    rep.extra.set("z", *z);
    rep.csv_columns = {"theta0", "perimeter", "closure_gap"};
    std::vector<double> perims;
    double worst_gap = 0;
    for (int i = 0; i < sweep; ++i) {
        const double th0 = 2 * M_PI * i / sweep;
        const Chasles2D poly =
            chasles_polygon_2d(f2, std::vector<double>(std::size_t(psides), *z), th0);
        perims.push_back(poly.perimeter);
        worst_gap = std::max(worst_gap, poly.closure_gap);
        rep.csv_rows.push_back({th0, poly.perimeter, poly.closure_gap});
    }
    double mean = 0;
    for (double v : perims) mean += v;
    mean /= double(perims.size());
    const double pmax = *std::max_element(perims.begin(), perims.end());
    const double pmin = *std::min_element(perims.begin(), perims.end());
    rep.extra.set("perimeter_mean", mean).set("worst_closure_gap", worst_gap);
    rep.finish({(pmax - pmin) / mean});

    const Chasles2D poly =
        chasles_polygon_2d(f2, std::vector<double>(std::size_t(psides), *z), 0.4);
    scene.ellipse(0, 0, std::sqrt(a1), std::sqrt(a2), {.stroke = "#1f77b4", .stroke_width = 1.5});
    scene.ellipse(0, 0, std::sqrt(a1 - *z), std::sqrt(a2 - *z), {.stroke = "#888888"});
    std::vector<std::array<double, 2>> pts;
    for (const auto& v : poly.vertices) pts.push_back({v(0), v(1)});
    scene.polyline(pts, {.stroke = "#d62728", .stroke_width = 1.4});
}

// ----------------------------------------------------------------- darboux-3d

void run_darboux(Params& p, SplitMix64& rng, ExperimentReport& rep, svg::Scene& scene) {
    const auto ax = axes3(p);
    const double u3_0 = p.get("u3_0", 0.5);
    WindingCounts w(p.geti("n", 4), p.geti("nprime", 6), p.geti("m", 12));
    const int sweep = p.geti("sweep", 32);
    if (sweep <= 0) throw ConfigError("sweep must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-6;

    const ClosureResult sol = solve_closure(ax, u3_0, w, ClosureMode::darboux2);
    rep.extra.set("found", sol.found);
    if (!sol.found) {
        rep.extra.set("note", "closure parameters not found; residual grid attached");
        Json grid = Json::array();
        for (const auto& g : sol.grid) {
            Json s = Json::object();
            s.set("u2_0", g.u2_0).set("u3_1", g.u3_1).set("r1", g.r1).set("r2", g.r2);
            grid.push(std::move(s));
        }
        rep.extra.set("grid", std::move(grid));
        rep.finish({1e300});
        return;
    }
    rep.extra.set("u2_0", sol.u2_0).set("u3_1", sol.u3_1);
    CharacteristicRadical rad(ax, sol.u2_0, u3_0);
    const double formula = perimeter_formula(rad, sol.u3_1, w, PerimeterVariant::darb);
    rep.extra.set("perimeter_formula", formula);
    ConfocalFamily f({ax[0], ax[1], ax[2]});

    rep.csv_columns = {"start", "perimeter", "closure_gap", "rel_formula_err"};
    std::vector<double> devs;
    const double diameter = 2 * std::sqrt(ax[0] - sol.u3_1);
    DarbouxPolygon first_poly;
    for (int i = 0; i < sweep; ++i) {
        EllipticPoint ep;
        ep.u = {ax[1] + (ax[0] - ax[1]) * rng.uniform(0.15, 0.85),
                ax[2] + (sol.u2_0 - ax[2]) * rng.uniform(0.15, 0.85), sol.u3_1};
        ep.sigma = {1, 1, 1};
        const Vec start = to_cartesian(f, ep);
        const DarbouxPolygon poly =
            build_polygon(ax, start, sol.u2_0, u3_0, sol.u3_1, w.m);
        if (i == 0) first_poly = poly;
        const double rel_err = std::abs(poly.perimeter - formula) / formula;
        devs.push_back(std::max(rel_err, poly.closure_gap / diameter));
        rep.csv_rows.push_back({double(i), poly.perimeter, poly.closure_gap, rel_err});
    }
    rep.finish(devs);

    // orthographic projection along a generic view direction
    const std::array<double, 3> view{0.4, 1.0, 0.55};
    std::vector<std::array<double, 2>> pts;
    for (const auto& v : first_poly.vertices)
        pts.push_back(svg::project_ortho({v(0), v(1), v(2)}, view));
    scene.polyline(pts, {.stroke = "#d62728", .stroke_width = 1.2});
    // silhouette of the vertex ellipsoid (coordinate sections)
    for (int plane = 0; plane < 3; ++plane) {
        scene.curve(
            [&](double t) {
                std::array<double, 3> q{0, 0, 0};
                const int i1 = (plane + 1) % 3, i2 = (plane + 2) % 3;
                q[std::size_t(i1)] = std::sqrt(ax[std::size_t(i1)] - sol.u3_1) * std::cos(t);
                q[std::size_t(i2)] = std::sqrt(ax[std::size_t(i2)] - sol.u3_1) * std::sin(t);
                return svg::project_ortho(q, view);
            },
            0, 2 * M_PI, {.stroke = "#bbbbbb", .stroke_width = 0.7});
    }
}

// --------------------------------------------------------------------- staude

void run_staude(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene& scene) {
    const auto ax = axes3(p);
    const double u2_0 = p.get("u2_0", 1.5);
    const double u3_0 = p.get("u3_0", 0.5);
    const double u3_1 = p.get("u3_1", -1.0);
    const int sweep = p.geti("sweep", 16);
    if (sweep <= 0) throw ConfigError("sweep must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-6;
    CharacteristicRadical rad(ax, u2_0, u3_0);
    const double formula = perimeter_formula(rad, u3_1, WindingCounts(2, 2, 1),
                                             PerimeterVariant::staud);
    rep.extra.set("length_formula", formula)
        .set("half_turn", half_turn_criterion(rad));
    rep.csv_columns = {"azimuth", "length", "rel_err", "arc_action"};
    std::vector<double> devs;
    StaudeThread first;
    for (int i = 0; i < sweep; ++i) {
        const double az = 2 * M_PI * i / sweep;
        const StaudeThread th = assemble_staude_thread(ax, u2_0, u3_0, u3_1, az);
        if (i == 0) first = th;
        const double rel = std::abs(th.total_length - formula) / formula;
        devs.push_back(rel);
        rep.csv_rows.push_back({az, th.total_length, rel, th.arc_action_total});
    }
    rep.finish(devs);

    const std::array<double, 3> view{1.0, 0.7, 0.45};
    const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c"};
    for (const auto& seg : first.pieces) {
        std::vector<std::array<double, 2>> pts;
        for (const auto& q : seg.polyline)
            pts.push_back(svg::project_ortho({q(0), q(1), q(2)}, view));
        scene.polyline(pts, {.stroke = colors[int(seg.kind)], .stroke_width = 1.3});
    }
}

// ------------------------------------------------------------------- geodesic

void run_geodesic(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene& scene) {
    const auto ax = axes3(p);
    const double u2_0 = p.get("u2_0", 1.5);
    const double u3_0 = p.get("u3_0", 0.5);
    const double length = p.get("length", 20.0);
    if (rep.tolerance == 0) rep.tolerance = 1e-8;
    CharacteristicRadical rad(ax, u2_0, u3_0);
    GeodesicState start;
    start.phi1 = p.get("phi1", 0.3);
    start.phi2 = p.get("phi2", 0.7);
    const GeodesicPath path = integrate_geodesic(rad, start, length);
    rep.csv_columns = {"s", "speed_dev", "jacobi"};
    std::vector<double> devs;
    for (std::size_t i = 0; i < path.states.size(); i += 5) {
        const auto& st = path.states[i];
        const double speed = geodesic_tangent(rad, st).norm();
        const double jac = jacobi_constant(rad, start, st);
        devs.push_back(std::abs(speed - 1.0));
        devs.push_back(std::abs(jac));
        rep.csv_rows.push_back({st.s, std::abs(speed - 1.0), jac});
    }
    rep.extra.set("events", std::int64_t(path.events.size()));
    rep.finish(devs);

    const std::array<double, 3> view{1.0, 0.8, 0.5};
    std::vector<std::array<double, 2>> pts;
    for (const auto& st : path.states) {
        const Vec x = geodesic_cartesian(rad, st);
        pts.push_back(svg::project_ortho({x(0), x(1), x(2)}, view));
    }
    scene.polyline(pts, {.stroke = "#d62728", .stroke_width = 0.9});
}

// ------------------------------------------------------------- closed-geodesic

void run_closed_geodesic(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene&) {
    const auto ax = axes3(p);
    const double u3_0 = p.get("u3_0", 0.5);
    WindingCounts w(p.geti("n", 4), p.geti("nprime", 6), 0);
    if (rep.tolerance == 0) rep.tolerance = 1e-6;
    const ClosureResult sol = solve_closure(ax, u3_0, w, ClosureMode::thread1);
    rep.extra.set("found", sol.found);
    if (!sol.found) {
        rep.finish({1e300});
        return;
    }
    rep.extra.set("u2_0", sol.u2_0);
    const ClosedGeodesicReport rg = closed_geodesic_check(ax, u3_0, sol.u2_0, w);
    rep.extra.set("residual", rg.residual)
        .set("predicted_length", rg.predicted_length)
        .set("measured_length", rg.measured_length)
        .set("closure_gap", rg.closure_gap);
    rep.csv_columns = {"closure_gap", "length_rel_err"};
    const double len_err =
        std::abs(rg.measured_length - rg.predicted_length) / rg.predicted_length;
    rep.csv_rows.push_back({rg.closure_gap, len_err});
    // normalized against the two criterion tolerances (1e-6 gap, 1e-8 length)
    rep.finish({rg.closure_gap, len_err * 1e-6 / 1e-8});
}

// -------------------------------------------------------------------- dualize

void run_dualize(Params& p, SplitMix64&, ExperimentReport& rep, svg::Scene& scene) {
    const double a1 = p.get("a1", 2.0), a2 = p.get("a2", 1.0);
    const int psides = p.geti("p", 3);
    const int iterations = p.geti("iterations", 10);
    if (iterations <= 0) throw ConfigError("iterations must be positive");
    if (rep.tolerance == 0) rep.tolerance = 1e-6;
    ConfocalFamily f2({a1, a2});
    const auto z = find_poncelet_parameter(f2, psides, -8.0, -0.02);
    if (!z) throw Error("dualize: no Poncelet parameter found");
    const Chasles2D poly =
        chasles_polygon_2d(f2, std::vector<double>(std::size_t(psides), *z), 0.35);

    // closed polygon data: vertices v[0..p-1]; side j = v[j] -> v[j+1] is
    // tangent at tangency_points[j+1]
    std::vector<Vec> verts(poly.vertices.begin(), poly.vertices.begin() + psides);
    std::vector<Vec> tang_aligned;
    for (int j = 0; j < psides; ++j)
        tang_aligned.push_back(poly.tangency_points[std::size_t(j + 1)]);

    rep.csv_columns = {"iteration", "perimeter", "tangency_residual", "reflection_residual"};
    std::vector<double> devs;
    const double base_perim = poly.perimeter;
    rep.extra.set("z", *z).set("initial_perimeter", base_perim);

    std::vector<Vec> cur_v = verts, cur_t = tang_aligned;
    std::vector<std::vector<Vec>> history{cur_v};
    int distinct = 1;
    for (int it = 0; it < iterations; ++it) {
        const DualizeResult d = dualize_polygon(f2, cur_v, cur_t, *z, 0.0);
        devs.push_back(std::abs(d.perimeter - base_perim) / base_perim);
        devs.push_back(d.tangency_residual);
        devs.push_back(d.reflection_residual);
        rep.csv_rows.push_back({double(it), d.perimeter, d.tangency_residual,
                                d.reflection_residual});
        // distinct-polygon audit up to cyclic shift
        bool matched = false;
        for (const auto& old : history) {
            for (std::size_t shift = 0; shift < old.size() && !matched; ++shift) {
                double worst = 0;
                for (std::size_t k = 0; k < old.size(); ++k)
                    worst = std::max(worst,
                                     (old[(k + shift) % old.size()] - d.vertices[k]).norm());
                if (worst < 1e-7) matched = true;
            }
            if (matched) break;
        }
        if (!matched) ++distinct;
        history.push_back(d.vertices);
        cur_v = d.vertices;
        cur_t = d.tangency_points;
    }
    rep.extra.set("distinct_polygons", std::int64_t(distinct));
    rep.finish(devs);

    scene.ellipse(0, 0, std::sqrt(a1), std::sqrt(a2), {.stroke = "#1f77b4"});
    scene.ellipse(0, 0, std::sqrt(a1 - *z), std::sqrt(a2 - *z), {.stroke = "#888888"});
    std::vector<std::array<double, 2>> pts0, pts1;
    for (std::size_t k = 0; k <= verts.size(); ++k)
        pts0.push_back({verts[k % verts.size()](0), verts[k % verts.size()](1)});
    for (std::size_t k = 0; k <= cur_v.size(); ++k)
        pts1.push_back({cur_v[k % cur_v.size()](0), cur_v[k % cur_v.size()](1)});
    scene.polyline(pts0, {.stroke = "#d62728", .stroke_width = 1.3});
    scene.polyline(pts1, {.stroke = "#2ca02c", .stroke_width = 1.3, .dash = "4 2"});
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "ivory-check", "lame-orthogonality", "graves",   "chasles-2d",
        "darboux-3d",  "staude",             "geodesic", "closed-geodesic",
        "sj-check",    "dualize",
    };
    return names;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = val;
    }
    return kv;
}

ExperimentOutput run(const ExperimentConfig& cfg) {
    static const std::map<std::string, Runner> runners = {
        {"ivory-check", run_ivory},
        {"lame-orthogonality", run_lame},
        {"graves", run_graves},
        {"chasles-2d", run_chasles},
        {"darboux-3d", run_darboux},
        {"staude", run_staude},
        {"geodesic", run_geodesic},
        {"closed-geodesic", run_closed_geodesic},
        {"sj-check", run_sj_check},
        {"dualize", run_dualize},
    };
    const auto it = runners.find(cfg.experiment);
    if (it == runners.end()) throw ConfigError("unknown experiment: " + cfg.experiment);
    if (cfg.tol < 0) throw ConfigError("tolerance must be positive");

    ExperimentOutput out;
    out.report.experiment = cfg.experiment;
    out.report.version = toolkit_version();
    out.report.seed = cfg.seed;
    out.report.tolerance = cfg.tol;

    SplitMix64 rng(cfg.seed);
    svg::Scene scene;
    const auto t0 = std::chrono::steady_clock::now();
    Params p{cfg.params, {}};
    try {
        it->second(p, rng, out.report, scene);
        p.reject_unknown();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        out.report.pass = false;
        out.report.extra.set("error", std::string(e.what()));
    }
    if (cfg.timing) {
        const auto t1 = std::chrono::steady_clock::now();
        out.report.wall_time = std::chrono::duration<double>(t1 - t0).count();
    }
    if (cfg.want_svg && !scene.empty()) out.svg = scene.render();
    return out;
}

} // namespace confocal
