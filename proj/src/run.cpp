#include "degenvi/run.hpp"

#include "degenvi/cone.hpp"
#include "degenvi/problems.hpp"
#include "degenvi/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace degenvi {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// JSON has no infinities; +inf and NaN sentinels are written as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json num_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json point_json(Point z) { return json::array({num(z.x), num(z.y)}); }

struct Checks {
    json list = json::array();
    bool pass = true;

    void add(const std::string& name, bool ok, json detail = json::object()) {
        detail["name"] = name;
        detail["pass"] = ok;
        list.push_back(std::move(detail));
        pass = pass && ok;
    }
};

json model_json(const HestonParams& p, const DerivedConstants& c) {
    return {{"params",
             {{"sigma", p.sigma}, {"rho", p.rho}, {"kappa", p.kappa}, {"theta", p.theta}, {"r", p.r}, {"q", p.q},
              {"gamma", p.gamma}}},
            {"derived",
             {{"beta", c.beta}, {"mu", c.mu}, {"a1", c.a1}, {"b1", c.b1}, {"nu0", c.nu0}, {"p", c.p}, {"n", c.n}}}};
}

json mesh_json(const Mesh& m) {
    int counts[5] = {0, 0, 0, 0, 0};
    for (NodeTag t : m.tags) ++counts[static_cast<int>(t)];
    return {{"nx", m.nx},
            {"ny", m.ny},
            {"grading", m.grading},
            {"domain", to_string(m.domain.kind())},
            {"nodes", m.node_count()},
            {"free", m.free_count()},
            {"cells", m.cells.size()},
            {"tags",
             {{"interior", counts[0]}, {"gamma0", counts[1]}, {"gamma1", counts[2]}, {"corner", counts[3]},
              {"exterior", counts[4]}}}};
}

json report_json(const SolveReport& r) {
    json path = json::array();
    for (const EpsStep& s : r.path) {
        path.push_back({{"eps", s.eps},
                        {"newton_iters", s.newton_iters},
                        {"gap_negative", num(s.gap_negative)},
                        {"penalty_sup", num(s.penalty_sup)}});
    }
    return {{"converged", r.converged},       {"eps0", r.eps0},
            {"lambda", r.lambda},             {"final_eps", r.final_eps},
            {"penalty_sup", num(r.penalty_sup)}, {"gap_negative", num(r.gap_negative)},
            {"complementarity", num(r.complementarity)}, {"active_count", r.active_count},
            {"outer_iterations", r.outer_iterations},    {"path", path}};
}

json bound_json(const BoundCheck& b) {
    return {{"measured", num(b.measured)}, {"bound", num(b.bound)}, {"slack", num(b.slack)}};
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::string fields_csv(const GridFunction& u, const std::vector<double>* psi, double contact_tol) {
    const Mesh& m = u.mesh();
    std::ostringstream out;
    out << kFieldsHeader << '\n';
    for (int n = 0; n < m.node_count(); ++n) {
        if (!m.in_closure(n)) continue;
        const Point z = m.point(n);
        out << fmt(z.x) << ',' << fmt(z.y) << ',' << fmt(u[n]) << ',';
        if (psi) {
            const double gap = u[n] - (*psi)[n];
            const bool active = m.is_free(n) && gap < contact_tol;
            out << fmt((*psi)[n]) << ',' << fmt(gap) << ',' << (active ? 1 : 0) << '\n';
        } else {
            out << "nan,nan,0\n";
        }
    }
    return out.str();
}

double shift_for(const RunConfig& cfg, const AssembledForm& form) {
    return cfg.lambda ? *cfg.lambda : coercivity_shift(form);
}

AssembledForm shifted_form(const RunConfig& cfg, const std::shared_ptr<const Mesh>& mesh,
                           const DerivedConstants& consts) {
    AssembledForm form = assemble(cfg.model, consts, mesh, 0.0);
    const double lambda = shift_for(cfg, form);
    return lambda > 0.0 ? form.shifted(lambda) : form;
}

bool is_unit_square(const DomainSpec& d) {
    return d.kind == DomainKind::Rectangle && d.x0 == 0.0 && d.x1 == 1.0 && d.height == 1.0;
}

// ---------------------------------------------------------------- solve-ve

RunArtifacts run_solve_ve(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const DerivedConstants consts = derive_constants(cfg.model);
    const HalfPlaneDomain domain = cfg.domain.build();
    const bool manufactured = cfg.source.kind == "manufactured";
    if (manufactured && !is_unit_square(cfg.domain)) {
        throw Error(Errc::ConfigError, "manufactured source needs the unit square domain");
    }
    const Field f = make_field(cfg.source, cfg.model);
    const ManufacturedProblem mp = manufactured_problem(cfg.model);

    json table = json::array();
    json timing = json::array();
    double prev_err = 0.0;
    std::optional<GridFunction> last_u;
    for (int level = 0; level <= cfg.refine; ++level) {
        const auto t0 = Clock::now();
        const int scale = 1 << level;
        auto mesh = build_mesh(domain, cfg.mesh.nx * scale, cfg.mesh.ny * scale, cfg.mesh.grading);
        const AssembledForm form = shifted_form(cfg, mesh, consts);
        const Eigen::VectorXd b = load_vector(f, *mesh, cfg.model, consts);
        const LinearSolve ls = solve_linear(form, b);
        const GridFunction u = GridFunction::from_free(mesh, ls.u);
        // max-norm residual of the discrete system relative to the load
        const double resid = (form.matrix * ls.u - b).lpNorm<Eigen::Infinity>() /
                             std::max(b.lpNorm<Eigen::Infinity>(), std::numeric_limits<double>::min());
        json row = {{"nx", mesh->nx}, {"ny", mesh->ny}, {"free", mesh->free_count()}, {"lambda", form.lambda},
                    {"residual_max", num(resid)}, {"residual_l2", num(ls.relative_residual)}};
        checks.add("residual level " + std::to_string(level), resid <= 1e-10,
                   {{"measured", num(resid)}, {"bound", 1e-10}});
        if (manufactured) {
            const double err = weighted_l2_error(u, mp.exact, cfg.model, consts);
            row["l2w_error"] = num(err);
            if (level > 0) row["order"] = num(std::log2(prev_err / err));
            prev_err = err;
        }
        table.push_back(row);
        timing.push_back({{"level", level}, {"seconds", seconds_since(t0)}});
        last_u = u;
    }
    if (manufactured && cfg.refine >= 1) {
        const double order = table.back()["order"].get<double>();
        checks.add("convergence order", order >= 1.8, {{"measured", order}, {"bound", 1.8}});
    }
    art.report = {{"model", model_json(cfg.model, consts)},
                  {"mesh", mesh_json(last_u->mesh())},
                  {"source", cfg.source.kind},
                  {"shifted", table.back()["lambda"].get<double>() > 0.0},
                  {"convergence", table}};
    art.report["checks"] = checks.list;
    art.pass = checks.pass;
    art.timing = {{"levels", timing}};
    art.fields_csv = fields_csv(*last_u, nullptr, 0.0);
    return art;
}

// ------------------------------------------------------- solve-vi / price

struct ViRun {
    GridFunction u;
    SolveReport report;
    ObstacleProblem problem;
};

ViRun solve_obstacle(const ObstacleProblem& problem, const PenaltySchedule& schedule) {
    try {
        ViResult r = solve_vi(problem, schedule);
        return {r.u, r.report, problem};
    } catch (const ScheduleExhausted& e) {
        return {e.best().u, e.best().report, problem};
    }
}

void vi_checks(Checks& checks, const ViRun& run, json& out) {
    const double defect = obstacle_defect(run.problem);
    checks.add("schedule converged", run.report.converged, {{"gap_negative", num(run.report.gap_negative)}});
    const BoundCheck pb = check_penalty_bound(run.report, defect, 1e-6 * std::max(1.0, defect));
    checks.add("penalty bound", pb.pass, bound_json(pb));
    const BoundCheck mp = check_max_principle(run.u, run.problem, run.problem.form.lambda, 1e-8);
    checks.add("max principle", mp.pass, bound_json(mp));
    out["defect"] = num(defect);
    out["psi_clamped_on_gamma1"] = run.problem.clamped_on_gamma1;
}

RunArtifacts run_solve_vi(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    const DerivedConstants consts = derive_constants(cfg.model);
    auto mesh = build_mesh(cfg.domain.build(), cfg.mesh.nx, cfg.mesh.ny, cfg.mesh.grading);
    const AssembledForm form = shifted_form(cfg, mesh, consts);
    const Field f = make_field(cfg.source, cfg.model);
    const Field psi = make_field(cfg.obstacle, cfg.model);
    const ObstacleProblem problem = make_obstacle_problem(form, f, psi);
    const ViRun vi = solve_obstacle(problem, cfg.schedule);
    const double solve_s = seconds_since(t0);

    json out = {{"model", model_json(cfg.model, consts)},
                {"mesh", mesh_json(*mesh)},
                {"source", cfg.source.kind},
                {"obstacle", cfg.obstacle.kind},
                {"solve", report_json(vi.report)}};
    vi_checks(checks, vi, out);
    double psor_s = 0.0;
    if (cfg.psor_check) {
        const auto t1 = Clock::now();
        Eigen::VectorXd b = problem.rhs;
        const Eigen::VectorXd uf = vi.u.free_values();
        if (form.lambda > 0.0) b += form.lambda * (form.w * uf);
        const Eigen::VectorXd ps = psor_oracle(form.matrix, b, free_obstacle(problem));
        const double diff = (uf - ps).lpNorm<Eigen::Infinity>();
        const double tol = 1e-6 * std::max(1.0, ps.lpNorm<Eigen::Infinity>());
        checks.add("psor agreement", diff <= tol, {{"measured", num(diff)}, {"bound", tol}});
        psor_s = seconds_since(t1);
    }
    out["checks"] = checks.list;
    art.report = out;
    art.pass = checks.pass;
    art.timing = {{"solve_seconds", solve_s}, {"psor_seconds", psor_s}};
    art.fields_csv = fields_csv(vi.u, &problem.psi, 1e-7);
    return art;
}

RunArtifacts run_price(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    if (cfg.domain.kind != DomainKind::Rectangle) throw Error(Errc::ConfigError, "price needs a rectangle strip");
    const DerivedConstants consts = derive_constants(cfg.model);
    const HalfPlaneDomain strip = cfg.domain.build();
    auto mesh = build_mesh(strip, cfg.mesh.nx, cfg.mesh.ny, cfg.mesh.grading);
    const AssembledForm form = shifted_form(cfg, mesh, consts);
    const Field f = make_field(cfg.source, cfg.model);
    const Payoff payoff{cfg.obstacle.kind == "call" ? PayoffKind::Call : PayoffKind::Put, cfg.obstacle.strike, {}};
    const ObstacleProblem problem = make_obstacle_problem(form, f, [&](Point z) { return payoff(z); });
    const ViRun vi = solve_obstacle(problem, cfg.schedule);

    json boundary = json::array();
    for (int j = 0; j <= mesh->ny; ++j) {
        double edge = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i <= mesh->nx; ++i) {
            const int n = mesh->node(i, j);
            if (!mesh->is_free(n) || !(problem.psi[n] > 0.0) || vi.u[n] - problem.psi[n] >= 1e-7) continue;
            const double x = mesh->xs[i];
            if (std::isnan(edge) || (payoff.kind == PayoffKind::Call ? x < edge : x > edge)) edge = x;
        }
        boundary.push_back({{"y", mesh->ys[j]}, {"x", num(edge)}});
    }
    json out = {{"model", model_json(cfg.model, consts)},
                {"mesh", mesh_json(*mesh)},
                {"payoff", {{"kind", cfg.obstacle.kind}, {"strike", cfg.obstacle.strike}}},
                {"solve", report_json(vi.report)},
                {"exercise_boundary", boundary}};
    vi_checks(checks, vi, out);
    out["checks"] = checks.list;
    art.report = out;
    art.pass = checks.pass;
    art.timing = {{"solve_seconds", seconds_since(t0)}};
    art.fields_csv = fields_csv(vi.u, &problem.psi, 1e-7);
    return art;
}

// ---------------------------------------------------------------- geometry

std::vector<Point> boundary_centres(const HalfPlaneDomain& d) {
    std::vector<Point> out;
    for (const Interval& s : d.gamma0()) {
        out.push_back({s.lo, 0.0});
        out.push_back({0.5 * (s.lo + s.hi), 0.0});
        out.push_back({s.hi, 0.0});
    }
    return out;
}

RunArtifacts run_geometry(const RunConfig& cfg) {
    RunArtifacts art;
    const auto t0 = Clock::now();
    const DerivedConstants consts = derive_constants(cfg.model);
    const HalfPlaneDomain d = cfg.domain.build();
    std::vector<Point> centres = boundary_centres(d);
    if (d.kind() == DomainKind::Thorn) centres = {{0.0, 0.0}};
    const BoundingBox bb = d.bbox();
    const double size = std::max(bb.x1 - bb.x0, bb.y1 - bb.y0);
    const std::vector<double> radii = {0.05 * std::sqrt(size), 0.1 * std::sqrt(size), 0.2 * std::sqrt(size)};

    json gamma0 = json::array();
    for (const Interval& s : d.gamma0()) gamma0.push_back(json::array({s.lo, s.hi}));
    json corners = json::array();
    for (Point z : d.corners()) corners.push_back(point_json(z));

    json dist = json::array();
    for (std::size_t a = 0; a < centres.size(); ++a) {
        for (std::size_t b = a + 1; b < centres.size(); ++b) {
            dist.push_back({{"a", point_json(centres[a])},
                            {"b", point_json(centres[b])},
                            {"d", koch_distance(centres[a], centres[b])}});
        }
    }
    json balls = json::array();
    for (Point z0 : centres) {
        for (double R : radii) {
            const KochBall ball{z0, R};
            const InclusionRadii inc = euclidean_inclusion_radii(R, z0.y);
            const VolumeRatios vr = domain_volume_ratio(d, consts.beta, z0, R);
            balls.push_back({{"center", point_json(z0)},
                             {"R", R},
                             {"inclusion", {{"inner", inc.inner}, {"outer", inc.outer}}},
                             {"volume_beta", ball_volume(ball, consts.beta)},
                             {"volume_beta_minus_1", ball_volume(ball, consts.beta - 1.0)},
                             {"interior_ratio", vr.interior},
                             {"exterior_ratio", vr.exterior}});
        }
    }
    json cones = json::array();
    if (d.kind() != DomainKind::Thorn) {
        for (Point z : d.corners()) {
            const Cone cone{1.0, 0.1 * std::sqrt(size), ConeOrientation::Right, 0.0};
            const ConeConditions cc = cone_condition_check(d, z, cone);
            cones.push_back({{"vertex", point_json(z)},
                             {"slope", cone.slope},
                             {"height", cone.height},
                             {"interior", cc.interior},
                             {"exterior", cc.exterior}});
        }
    }
    art.report = {{"model", model_json(cfg.model, consts)},
                  {"domain", {{"kind", to_string(d.kind())}, {"gamma0", gamma0}, {"corners", corners}}},
                  {"distances", dist},
                  {"balls", balls},
                  {"cones", cones},
                  {"checks", json::array()}};
    art.timing = {{"seconds", seconds_since(t0)}};
    return art;
}

// ----------------------------------------------------------- verify suites

inline constexpr double kVolumeSandwichConstant = 64.0;

RunArtifacts suite_geometry(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    const DerivedConstants consts = derive_constants(cfg.model);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    // closed-form distances
    double ident_err = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double x = 4.0 * U(rng) - 2.0, y = 2.0 * U(rng), x2 = 4.0 * U(rng) - 2.0;
        ident_err = std::max(ident_err, std::abs(koch_distance({x, y}, {x, 0.0}) - std::sqrt(y / 2.0)));
        ident_err = std::max(ident_err, std::abs(koch_distance({x, 0.0}, {x2, 0.0}) - std::sqrt(std::abs(x - x2))));
    }
    checks.add("distance identities", ident_err <= 1e-14, {{"max_error", ident_err}});

    // Euclidean inclusion sandwich
    json sandwich = json::array();
    bool sandwich_ok = true;
    for (double R : {0.1, 0.5, 1.0}) {
        for (double y0 : {0.0, 0.1, 1.0}) {
            const Point z0{0.0, y0};
            const KochBall ball{z0, R};
            const InclusionRadii inc = euclidean_inclusion_radii(R, y0);
            int inner_fail = 0, outer_fail = 0;
            for (int k = 0; k < 10000; ++k) {
                const double r = inc.inner * std::sqrt(U(rng)), t = 2.0 * M_PI * U(rng);
                const Point z{z0.x + r * std::cos(t), z0.y + r * std::sin(t)};
                if (z.y >= 0.0 && !ball.contains(z)) ++inner_fail;
            }
            const double y_lo = ball.y_min(), y_hi = ball.y_max();
            double w = 0.0;
            for (int k = 0; k <= 200; ++k) w = std::max(w, ball.half_width(y_lo + (y_hi - y_lo) * k / 200.0));
            int hits = 0;
            while (hits < 10000) {
                const Point z{z0.x + (2.0 * U(rng) - 1.0) * 1.01 * w, y_lo + (y_hi - y_lo) * U(rng)};
                if (!ball.contains(z)) continue;
                ++hits;
                const double e = std::hypot(z.x - z0.x, z.y - z0.y);
                if (e >= inc.outer) ++outer_fail;
            }
            sandwich_ok = sandwich_ok && inner_fail == 0 && outer_fail == 0;
            sandwich.push_back({{"R", R}, {"y0", y0}, {"R1", inc.inner}, {"R2", inc.outer},
                                {"inner_failures", inner_fail}, {"outer_failures", outer_fail}});
        }
    }
    checks.add("inclusion sandwich", sandwich_ok, {{"pairs", sandwich}});

    // scaling law of boundary-centred balls, and its failure off the boundary
    auto scaling_mismatches = [&](Point z0) {
        int bad = 0;
        for (int k = 0; k < 10000; ++k) {
            const double R1 = 0.05 + U(rng), R2 = 0.05 + U(rng);
            const double t = (R1 / R2) * (R1 / R2);
            const Point z{z0.x + (2.0 * U(rng) - 1.0) * 3.0 * R2 * R2, 3.0 * R2 * R2 * U(rng) + z0.y * U(rng)};
            const Point zs{z0.x + t * (z.x - z0.x), z0.y + t * (z.y - z0.y)};
            if (KochBall{z0, R2}.contains(z) != KochBall{z0, R1}.contains(zs)) ++bad;
        }
        return bad;
    };
    const int scale_bad = scaling_mismatches({0.0, 0.0});
    const int scale_bad_interior = scaling_mismatches({0.0, 0.5});
    checks.add("scaling law at y0 = 0", scale_bad == 0, {{"mismatches", scale_bad}, {"queries", 10000}});
    checks.add("scaling law fails at y0 > 0", scale_bad_interior > 0,
               {{"mismatches", scale_bad_interior}, {"queries", 10000}});

    // volume sandwich |BB_R|_beta ~ R^n (R + sqrt y0)^(n + 2 beta)
    json vols = json::array();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::ostringstream csv;
    csv << "R,y0,volume,normalized\n";
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            const double R = std::pow(2.0, -6 + a), y0 = std::pow(10.0, -4 + b);
            const double v = ball_volume(KochBall{{0.0, y0}, R}, consts.beta);
            const double ref = std::pow(R, consts.n) * std::pow(R + std::sqrt(y0), consts.n + 2.0 * consts.beta);
            lo = std::min(lo, v / ref);
            hi = std::max(hi, v / ref);
            vols.push_back({{"R", R}, {"y0", y0}, {"volume", v}, {"normalized", v / ref}});
            csv << fmt(R) << ',' << fmt(y0) << ',' << fmt(v) << ',' << fmt(v / ref) << '\n';
        }
    }
    const bool vol_ok = hi <= kVolumeSandwichConstant && lo >= 1.0 / kVolumeSandwichConstant;
    checks.add("volume sandwich", vol_ok, {{"min", lo}, {"max", hi}, {"constant", kVolumeSandwichConstant}, {"grid", vols}});
    art.extra["volume_sandwich.csv"] = csv.str();

    // quasi-triangle constant, recorded only
    double Q = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const Point a{4 * U(rng) - 2, 2 * U(rng)}, b{4 * U(rng) - 2, 2 * U(rng)}, c{4 * U(rng) - 2, 2 * U(rng)};
        const double s = koch_distance(a, b) + koch_distance(b, c);
        if (s > 0.0) Q = std::max(Q, koch_distance(a, c) / s);
    }

    // thorn interior volume ratios
    const HalfPlaneDomain thorn = HalfPlaneDomain::thorn(40, 1.0);
    std::vector<double> ratios;
    for (int N : {4, 8, 16, 32}) ratios.push_back(domain_volume_ratio(thorn, 1.0, {0.0, 0.0}, 1.0 / N, 96).interior);
    bool dec = true;
    for (std::size_t k = 1; k < ratios.size(); ++k) dec = dec && ratios[k] < ratios[k - 1];
    checks.add("thorn ratio decreasing", dec && ratios.back() < 0.5 * ratios.front(),
               {{"N", {4, 8, 16, 32}}, {"interior_ratio", num_array(ratios)}});

    art.report = {{"model", model_json(cfg.model, consts)}, {"quasi_triangle_Q", Q}, {"checks", checks.list}};
    art.pass = checks.pass;
    art.timing = {{"seconds", seconds_since(t0)}};
    return art;
}

GridFunction sample_on(const std::shared_ptr<const Mesh>& mesh, const Field& f) {
    return GridFunction::sample(mesh, f);
}

RunArtifacts suite_spaces(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    const HestonParams& p = cfg.model;
    const DerivedConstants consts = derive_constants(p);
    const HalfPlaneDomain unit = HalfPlaneDomain::rectangle(0.0, 1.0, 1.0);
    const int n0 = cfg.mesh.nx;

    // Sobolev ratio probes
    const std::vector<std::pair<std::string, Field>> probes = {
        {"sin_x_y_1my", [](Point z) { return std::sin(M_PI * z.x) * z.y * (1.0 - z.y); }},
        {"bump_boundary", bump_field(0.5, 0.0, 0.3, 0.3)},
        {"bump_interior", bump_field(0.5, 0.5, 0.2, 0.2)},
        {"sin_x_1my", [](Point z) { return std::sin(M_PI * z.x) * (1.0 - z.y); }}};
    json sob = json::array();
    double sob_max = 0.0;
    for (int level = 0; level < 2; ++level) {
        auto mesh = build_mesh(unit, n0 << level, n0 << level, cfg.mesh.grading);
        for (const auto& [name, f] : probes) {
            const double r = sobolev_ratio(sample_on(mesh, f), consts);
            sob_max = std::max(sob_max, r);
            sob.push_back({{"probe", name}, {"n", n0 << level}, {"ratio", num(r)}});
        }
    }
    checks.add("sobolev ratios finite", std::isfinite(sob_max), {{"max", num(sob_max)}, {"samples", sob}});

    // Poincaré probes on boundary balls
    json poin = json::array();
    {
        auto mesh = build_mesh(unit, 2 * n0, 2 * n0, cfg.mesh.grading);
        const std::vector<GridFunction> linear = {sample_on(mesh, [](Point z) { return z.x; }),
                                                  sample_on(mesh, [](Point z) { return z.y; }),
                                                  sample_on(mesh, [](Point z) { return z.x + z.y; }),
                                                  sample_on(mesh, [](Point z) { return z.x * z.x + z.y; })};
        for (double R : {0.2, 0.3, 0.4}) {
            const PoincareEstimate e = poincare_constant_estimate(KochBall{{0.5, 0.0}, R}, linear, consts);
            poin.push_back({{"R", R}, {"value", num(e.value)}, {"normalized", num(e.normalized)},
                            {"value_over_R", num(e.value / R)}});
        }
    }

    // Phi_p limit for a two-level function
    auto mesh = build_mesh(unit, 2 * n0, 2 * n0, cfg.mesh.grading);
    const GridFunction two = sample_on(mesh, [](Point z) { return z.x < 0.5 ? 1.0 : 2.0; });
    const std::vector<double> ps = {1, 2, 4, 8, 16, 32, 64, 128, 200};
    const std::vector<double> phi = phi_p_profile(two, ps, p, consts);
    bool mono = true;
    for (std::size_t k = 1; k < phi.size(); ++k) mono = mono && phi[k] >= phi[k - 1];
    const double top = *std::max_element(two.values().begin(), two.values().end());
    const bool near = std::abs(phi.back() - top) <= 0.01 * top;
    checks.add("phi_p monotone", mono, {{"p", ps}, {"phi", num_array(phi)}});
    checks.add("phi_p near max at p=200", near, {{"phi_200", phi.back()}, {"max", top}});

    // extension operator
    const KochBall ball{{0.5, 0.0}, 0.4};
    const Field g = [](Point z) { return std::cos(2.0 * z.x) * (1.0 + z.y) + z.y * z.y; };
    json ext = json::array();
    std::vector<double> growth;
    double ident = 0.0;
    const Region region = ball_region(ball);
    for (int level = 0; level < 2; ++level) {
        auto m = build_mesh(unit, (2 * n0) << level, (2 * n0) << level, cfg.mesh.grading);
        const GridFunction u = sample_on(m, g);
        const GridFunction eu = extend(u, ball);
        for (int n = 0; n < m->node_count(); ++n) {
            if (koch_distance(m->point(n), ball.center) <= ball.radius) ident = std::max(ident, std::abs(eu[n] - u[n]));
        }
        const WeightedNormKind h1{NormTag::H1_w};
        const double num_ = weighted_norm(eu, h1, p, consts);
        const double den = weighted_norm(u, h1, p, consts, &region);
        growth.push_back(num_ / den);
        ext.push_back({{"n", m->nx}, {"norm_domain", num_}, {"norm_ball", den}, {"growth", num_ / den}});
    }
    checks.add("extension identity on ball", ident == 0.0, {{"max_difference", ident}});
    checks.add("extension growth stable", stable_within(growth[0], growth[1], 2.0), {{"levels", ext}});

    art.report = {{"model", model_json(p, consts)}, {"poincare", poin}, {"checks", checks.list}};
    art.pass = checks.pass;
    art.timing = {{"seconds", seconds_since(t0)}};
    return art;
}

// Radii R_k with 2 R_k^2 = H 4^-(k+1), the heights of mesh rows j = ny 2^-(k+1)
// under grading 2, so each ball's top lies on a node row on every mesh of
// the family. The factor 1 + 1e-9 keeps that row inside the open ball.
std::vector<double> aligned_radii(double height, int count) {
    std::vector<double> r;
    for (int k = 0; k < count; ++k) r.push_back(std::sqrt(height * std::pow(4.0, -(k + 1)) / 2.0) * (1.0 + 1e-9));
    return r;
}

inline constexpr double kRegularityGrading = 2.0;

json fit_json(const OscillationFit& f) {
    return {{"center", point_json(f.center)}, {"radii", num_array(f.radii)}, {"osc", num_array(f.osc)},
            {"alpha", num(f.alpha)},          {"residual", num(f.residual)}, {"pass", f.pass}};
}

// Tent obstacle on (-1, 1) x (0, 1). It vanishes on Γ1, so psi^+ lies in the
// energy space and no clamping is needed; the clamped put overshoots its
// max-principle bound next to the corners on graded meshes.
GridFunction tent_solution(const HestonParams& p, const DerivedConstants& consts, int nx, int ny, double grading) {
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(-1.0, 1.0, 1.0), nx, ny, grading);
    AssembledForm form = assemble(p, consts, mesh, 0.0);
    const double lambda = coercivity_shift(form);
    if (lambda > 0.0) form = form.shifted(lambda);
    const ObstacleProblem problem = make_obstacle_problem(form, [](Point) { return 0.0; }, tent_field(1.0, 0.5));
    return solve_obstacle(problem, AmericanOptions{}.schedule).u;
}

RunArtifacts suite_regularity(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    const HestonParams& p = cfg.model;
    const DerivedConstants consts = derive_constants(p);
    const int n0 = cfg.mesh.nx;
    if (n0 % 32 != 0) throw Error(Errc::ConfigError, "regularity suite needs mesh.nx divisible by 32");
    const std::vector<double> radii = aligned_radii(1.0, 5);
    std::ostringstream osc_csv, ratio_csv;
    osc_csv << "problem,level,cx,R,osc\n";
    ratio_csv << "level,cx,R,ratio\n";

    // VE with constant source on the unit square, VI tent on (-1, 1) x (0, 1)
    const HalfPlaneDomain unit = HalfPlaneDomain::rectangle(0.0, 1.0, 1.0);
    const Field one = [](Point) { return 1.0; };
    json ve_fits = json::array(), vi_fits = json::array(), sup = json::array();
    std::vector<std::vector<double>> ve_alpha(2), vi_alpha(2);
    std::vector<double> sup_max;
    for (int level = 0; level < 2; ++level) {
        const int n = n0 << level;
        auto mesh = build_mesh(unit, n, n, kRegularityGrading);
        AssembledForm form = assemble(p, consts, mesh, 0.0);
        const double lambda = coercivity_shift(form);
        if (lambda > 0.0) form = form.shifted(lambda);
        const GridFunction u = solve_ve(form, one);
        for (double cx : {0.25, 0.5, 0.75}) {
            const OscillationFit f = measure_oscillation_decay(u, {cx, 0.0}, radii);
            ve_alpha[level].push_back(f.alpha);
            json j = fit_json(f);
            j["level"] = level;
            ve_fits.push_back(j);
            for (std::size_t k = 0; k < radii.size(); ++k) {
                osc_csv << "ve," << level << ',' << fmt(cx) << ',' << fmt(radii[k]) << ',' << fmt(f.osc[k]) << '\n';
            }
        }
        const SupremumReport sr = check_supremum_estimate(u, one, p, consts, {{0.25, 0.0}, {0.5, 0.0}, {0.75, 0.0}},
                                                          {0.1, 0.15, 0.2});
        sup_max.push_back(sr.max_ratio);
        for (const SupremumSample& s : sr.samples) {
            ratio_csv << level << ',' << fmt(s.center.x) << ',' << fmt(s.radius) << ',' << fmt(s.ratio) << '\n';
        }
        sup.push_back({{"level", level}, {"s", sr.s}, {"max_ratio", num(sr.max_ratio)}});

        const GridFunction v = tent_solution(p, consts, 2 * n, n, kRegularityGrading);
        for (double cx : {-0.75, 0.5, 0.75}) {
            const OscillationFit f = measure_oscillation_decay(v, {cx, 0.0}, radii);
            vi_alpha[level].push_back(f.alpha);
            json j = fit_json(f);
            j["level"] = level;
            vi_fits.push_back(j);
            for (std::size_t k = 0; k < radii.size(); ++k) {
                osc_csv << "vi," << level << ',' << fmt(cx) << ',' << fmt(radii[k]) << ',' << fmt(f.osc[k]) << '\n';
            }
        }
    }
    auto alpha_ok = [](const std::vector<std::vector<double>>& a) {
        bool ok = true;
        for (std::size_t k = 0; k < a[0].size(); ++k) {
            ok = ok && a[0][k] > kMinOscillationExponent && a[1][k] > kMinOscillationExponent &&
                 std::abs(a[0][k] - a[1][k]) <= 0.1;
        }
        return ok;
    };
    checks.add("VE oscillation decay", alpha_ok(ve_alpha), {{"fits", ve_fits}});
    checks.add("VI oscillation decay", alpha_ok(vi_alpha), {{"fits", vi_fits}});
    checks.add("supremum ratio stable", stable_within(sup_max[0], sup_max[1], 2.0), {{"levels", sup}});

    // Harnack: f >= 0 supported away from B_Rbar((0, 0)), zero data on Γ1
    const double Rbar = 0.25;
    const HalfPlaneDomain box = HalfPlaneDomain::rectangle(-0.5, 0.5, 0.5);
    const Field bump = bump_field(0.35, 0.3, 0.1, 0.1);
    json harn = json::array();
    double hmax = 1.0;
    bool finite = true;
    for (int level = 0; level < 3; ++level) {
        auto mesh = build_mesh(box, n0 << level, n0 << level, 3.0);
        const AssembledForm form = assemble(p, consts, mesh, 0.0);
        const GridFunction u = solve_ve(form, bump);
        double umin = std::numeric_limits<double>::infinity();
        for (int k : ball_nodes(*mesh, {0.0, 0.0}, Rbar)) umin = std::min(umin, u[k]);
        if (!(umin >= 0.0)) throw Error(Errc::PreconditionViolated, "Harnack solution is negative on the ball");
        for (double R : {Rbar / 8, Rbar / 16, Rbar / 32}) {
            const double h = harnack_ratio(u, {0.0, 0.0}, R);
            finite = finite && std::isfinite(h);
            hmax = std::max(hmax, h);
            harn.push_back({{"level", level}, {"R", R}, {"ratio", num(h)}});
        }
    }
    checks.add("harnack bounded", finite && hmax <= 2.0, {{"max_ratio", num(hmax)}, {"constant", 2.0}, {"samples", harn}});

    art.report = {{"model", model_json(p, consts)}, {"checks", checks.list}};
    art.pass = checks.pass;
    art.extra["oscillation.csv"] = osc_csv.str();
    art.extra["supremum.csv"] = ratio_csv.str();
    art.timing = {{"seconds", seconds_since(t0)}};
    return art;
}

RunArtifacts suite_solver(const RunConfig& cfg) {
    RunArtifacts art;
    Checks checks;
    const auto t0 = Clock::now();
    const HestonParams& p = cfg.model;
    const DerivedConstants consts = derive_constants(p);
    const HalfPlaneDomain unit = HalfPlaneDomain::rectangle(0.0, 1.0, 1.0);

    // manufactured convergence over three doublings
    const ManufacturedProblem mp = manufactured_problem(p);
    json table = json::array();
    std::vector<double> errs;
    double worst_resid = 0.0;
    for (int n : {8, 16, 32, 64}) {
        auto mesh = build_mesh(unit, n, n, 1.0);
        AssembledForm form = assemble(p, consts, mesh, 0.0);
        const Eigen::VectorXd b = load_vector(mp.source, *mesh, p, consts);
        if (coercivity_shift(form) > 0.0) throw Error(Errc::PreconditionViolated, "manufactured study needs lambda0 = 0");
        const LinearSolve ls = solve_linear(form, b);
        const double resid = (form.matrix * ls.u - b).lpNorm<Eigen::Infinity>() / b.lpNorm<Eigen::Infinity>();
        worst_resid = std::max(worst_resid, resid);
        errs.push_back(weighted_l2_error(GridFunction::from_free(mesh, ls.u), mp.exact, p, consts));
        json row = {{"n", n}, {"l2w_error", errs.back()}, {"residual_max", resid}};
        if (errs.size() > 1) row["order"] = std::log2(errs[errs.size() - 2] / errs.back());
        table.push_back(row);
    }
    const double slope = std::log2(errs.front() / errs.back()) / 3.0;
    checks.add("manufactured order", slope >= 1.8, {{"slope", slope}, {"table", table}});
    checks.add("manufactured residual", worst_resid <= 1e-10, {{"max", worst_resid}});

    // VI against PSOR on a small problem
    {
        auto mesh = build_mesh(unit, 8, 8, 1.0);
        AssembledForm form = assemble(p, consts, mesh, 0.0);
        const double lambda = coercivity_shift(form);
        if (lambda > 0.0) form = form.shifted(lambda);
        const ObstacleProblem prob =
            make_obstacle_problem(form, [](Point) { return 0.0; }, bump_field(0.5, 0.0, 0.4, 0.6));
        const ViRun vi = solve_obstacle(prob, cfg.schedule);
        Eigen::VectorXd b = prob.rhs;
        if (lambda > 0.0) b += lambda * (form.w * vi.u.free_values());
        const Eigen::VectorXd ps = psor_oracle(form.matrix, b, free_obstacle(prob));
        const double diff = (vi.u.free_values() - ps).lpNorm<Eigen::Infinity>();
        checks.add("penalty vs psor", diff <= 1e-6, {{"max_difference", diff}, {"solve", report_json(vi.report)}});
    }

    // American put bounds
    {
        const RunConfig put_cfg = [&] {
            RunConfig c = cfg;
            c.domain = DomainSpec{};
            c.domain.x0 = -1.0;
            c.domain.x1 = 1.0;
            c.domain.height = 1.0;
            c.mesh = MeshSpec{64, 32, 1.0};
            c.obstacle = FieldSpec{"put"};
            c.source = FieldSpec{};
            c.schedule = AmericanOptions{}.schedule;
            c.lambda.reset();
            return c;
        }();
        const RunArtifacts put = run_price(put_cfg);
        for (const json& c : put.report["checks"]) checks.add("put " + c["name"].get<std::string>(), c["pass"].get<bool>(), c);
    }
    art.report = {{"model", model_json(p, consts)}, {"checks", checks.list}};
    art.pass = checks.pass;
    art.timing = {{"seconds", seconds_since(t0)}};
    return art;
}

}  // namespace

RunArtifacts execute(const RunConfig& cfg) {
    RunArtifacts art;
    if (cfg.command == "solve-ve") art = run_solve_ve(cfg);
    else if (cfg.command == "solve-vi") art = run_solve_vi(cfg);
    else if (cfg.command == "price") art = run_price(cfg);
    else if (cfg.command == "geometry") art = run_geometry(cfg);
    else if (cfg.command == "verify") {
        if (cfg.suite == "geometry") art = suite_geometry(cfg);
        else if (cfg.suite == "spaces") art = suite_spaces(cfg);
        else if (cfg.suite == "regularity") art = suite_regularity(cfg);
        else if (cfg.suite == "solver") art = suite_solver(cfg);
        else throw Error(Errc::ConfigError, "unknown suite '" + cfg.suite + "'");
    } else {
        throw Error(Errc::ConfigError, "unknown command '" + cfg.command + "'");
    }
    json head = {{"schema_version", kReportSchemaVersion}, {"command", cfg.command}, {"seed", cfg.seed}};
    if (cfg.command == "verify") head["suite"] = cfg.suite;
    head.update(art.report);
    head["pass"] = art.pass;
    art.report = std::move(head);
    return art;
}

void write_artifacts(const RunArtifacts& art, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir + ": " + ec.message());
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw Error(Errc::IoError, "cannot write " + (fs::path(dir) / name).string());
        out << text;
        if (!out) throw Error(Errc::IoError, "write failed for " + name);
    };
    put("report.json", art.report.dump(2) + "\n");
    put("timing.json", art.timing.dump(2) + "\n");
    if (!art.fields_csv.empty()) put("fields.csv", art.fields_csv);
    for (const auto& [name, text] : art.extra) put(name, text);
}

int run(const RunConfig& cfg) {
    try {
        const RunArtifacts art = execute(cfg);
        write_artifacts(art, cfg.out_dir);
        return art.pass ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace degenvi
