#include "degenvi/config.hpp"

#include "degenvi/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace degenvi {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands = {"solve-ve", "solve-vi", "price", "geometry", "verify"};
const std::set<std::string> kSuites = {"regularity", "geometry", "spaces", "solver"};
const std::set<std::string> kSourceKinds = {"zero", "constant", "manufactured", "bump", "table"};
const std::set<std::string> kObstacleKinds = {"none", "zero", "constant", "put", "call", "bump", "tent", "table"};

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key + " must be a number");
    return v.get<double>();
}

long long get_integer(const json& obj, const std::string& key, const std::string& where, long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
    return v.get<long long>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key + " must be a string");
    return v.get<std::string>();
}

HestonParams parse_model(const json& m) {
    check_keys(m, "model", {"sigma", "rho", "kappa", "theta", "r", "q", "gamma"});
    HestonParams p;
    p.sigma = get_number(m, "sigma", "model", p.sigma);
    p.rho = get_number(m, "rho", "model", p.rho);
    p.kappa = get_number(m, "kappa", "model", p.kappa);
    p.theta = get_number(m, "theta", "model", p.theta);
    p.r = get_number(m, "r", "model", p.r);
    p.q = get_number(m, "q", "model", p.q);
    p.gamma = get_number(m, "gamma", "model", p.gamma);
    return p;
}

DomainSpec parse_domain(const json& d) {
    DomainSpec s;
    const std::string kind = get_string(d, "kind", "domain", "rectangle");
    if (kind == "rectangle") {
        check_keys(d, "domain", {"kind", "x0", "x1", "height"});
        s.kind = DomainKind::Rectangle;
        s.x0 = get_number(d, "x0", "domain", s.x0);
        s.x1 = get_number(d, "x1", "domain", s.x1);
        s.height = get_number(d, "height", "domain", s.height);
        if (!(s.x1 > s.x0) || !(s.height > 0.0)) fail("domain rectangle needs x1 > x0 and height > 0");
    } else if (kind == "polygon") {
        check_keys(d, "domain", {"kind", "vertices"});
        s.kind = DomainKind::Polygon;
        if (!d.contains("vertices") || !d.at("vertices").is_array()) fail("domain.vertices must be an array");
        for (const json& v : d.at("vertices")) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                fail("domain.vertices entries must be [x, y] pairs");
            }
            s.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        if (s.vertices.size() < 3) fail("domain polygon needs at least 3 vertices");
    } else if (kind == "half_disk") {
        check_keys(d, "domain", {"kind", "center_x", "radius"});
        s.kind = DomainKind::HalfDisk;
        s.center_x = get_number(d, "center_x", "domain", s.center_x);
        s.radius = get_number(d, "radius", "domain", s.radius);
        if (!(s.radius > 0.0)) fail("domain.radius must be positive");
    } else if (kind == "thorn") {
        check_keys(d, "domain", {"kind", "n_max", "beta"});
        s.kind = DomainKind::Thorn;
        s.n_max = static_cast<int>(get_integer(d, "n_max", "domain", s.n_max));
        s.beta = get_number(d, "beta", "domain", s.beta);
        if (s.n_max < 1 || !(s.beta > 0.0)) fail("domain thorn needs n_max >= 1 and beta > 0");
    } else {
        fail("unknown domain.kind '" + kind + "'");
    }
    return s;
}

std::vector<double> increasing_axis(const json& f, const std::string& key, const std::string& where) {
    if (!f.contains(key) || !f.at(key).is_array()) fail(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const json& v : f.at(key)) {
        if (!v.is_number()) fail(where + "." + key + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    if (out.size() < 2) fail(where + "." + key + " needs at least two entries");
    for (std::size_t k = 1; k < out.size(); ++k)
        if (!(out[k] > out[k - 1])) fail(where + "." + key + " must be strictly increasing");
    return out;
}

void parse_table(const json& f, const std::string& where, FieldSpec& s) {
    s.table_x = increasing_axis(f, "x", where);
    s.table_y = increasing_axis(f, "y", where);
    if (!f.contains("values") || !f.at("values").is_array() || f.at("values").size() != s.table_y.size()) {
        fail(where + ".values must hold one row per y entry");
    }
    for (const json& row : f.at("values")) {
        if (!row.is_array() || row.size() != s.table_x.size()) fail(where + ".values rows must match x");
        for (const json& v : row) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) fail(where + ".values must be finite numbers");
            s.table_values.push_back(v.get<double>());
        }
    }
}

FieldSpec parse_field(const json& f, const std::string& where, const std::set<std::string>& kinds,
                      const std::string& fallback_kind) {
    check_keys(f, where, {"kind", "value", "strike", "cx", "cy", "ax", "ay", "x", "y", "values"});
    FieldSpec s;
    s.kind = get_string(f, "kind", where, fallback_kind);
    if (!kinds.count(s.kind)) fail("unknown " + where + ".kind '" + s.kind + "'");
    s.value = get_number(f, "value", where, s.value);
    s.strike = get_number(f, "strike", where, s.strike);
    s.cx = get_number(f, "cx", where, s.cx);
    s.cy = get_number(f, "cy", where, s.cy);
    s.ax = get_number(f, "ax", where, s.ax);
    s.ay = get_number(f, "ay", where, s.ay);
    if ((s.kind == "put" || s.kind == "call" || s.kind == "tent") && !(s.strike > 0.0)) {
        fail(where + ".strike must be positive");
    }
    if (s.kind == "tent" && !(s.value > 0.0)) fail(where + " tent needs value (width) > 0");
    if (s.kind == "bump" && (!(s.ax > 0.0) || !(s.ay > 0.0))) fail(where + " bump needs ax, ay > 0");
    if (s.kind == "table") {
        parse_table(f, where, s);
    } else if (f.contains("x") || f.contains("y") || f.contains("values")) {
        fail(where + ": x, y and values belong to kind 'table'");
    }
    return s;
}

PenaltySchedule parse_schedule(const json& s, PenaltySchedule out) {
    check_keys(s, "schedule", {"eps0", "shrink", "eps_min", "newton_tol", "newton_max_iter", "outer_tol",
                               "outer_max_iter", "fixed_point_tol"});
    out.eps0 = get_number(s, "eps0", "schedule", out.eps0);
    out.shrink = get_number(s, "shrink", "schedule", out.shrink);
    out.eps_min = get_number(s, "eps_min", "schedule", out.eps_min);
    out.newton_tol = get_number(s, "newton_tol", "schedule", out.newton_tol);
    out.newton_max_iter = static_cast<int>(get_integer(s, "newton_max_iter", "schedule", out.newton_max_iter));
    out.outer_tol = get_number(s, "outer_tol", "schedule", out.outer_tol);
    out.outer_max_iter = static_cast<int>(get_integer(s, "outer_max_iter", "schedule", out.outer_max_iter));
    out.fixed_point_tol = get_number(s, "fixed_point_tol", "schedule", out.fixed_point_tol);
    try {
        validate(out);
    } catch (const Error& e) {
        fail(std::string("schedule: ") + e.what());
    }
    return out;
}

}  // namespace

HalfPlaneDomain DomainSpec::build() const {
    switch (kind) {
    case DomainKind::Rectangle: return HalfPlaneDomain::rectangle(x0, x1, height);
    case DomainKind::Polygon: return HalfPlaneDomain::polygon(vertices);
    case DomainKind::HalfDisk: return HalfPlaneDomain::half_disk(center_x, radius);
    case DomainKind::Thorn: return HalfPlaneDomain::thorn(n_max, beta);
    }
    throw Error(Errc::UnsupportedDomainKind, "unknown domain kind");
}

RunConfig parse_config(const json& doc) {
    check_keys(doc, "config", {"schema_version", "command", "model", "domain", "mesh", "source", "obstacle",
                               "schedule", "lambda", "refine", "seed", "suite", "output", "psor_check"});
    RunConfig c;
    const long long version = get_integer(doc, "schema_version", "config", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion) fail("unsupported schema_version " + std::to_string(version));
    c.command = get_string(doc, "command", "config", "");
    if (!kCommands.count(c.command)) fail("command must be one of solve-ve, solve-vi, price, geometry, verify");
    if (doc.contains("model")) c.model = parse_model(doc.at("model"));
    validate(c.model);
    if (doc.contains("domain")) c.domain = parse_domain(doc.at("domain"));
    if (doc.contains("mesh")) {
        const json& m = doc.at("mesh");
        check_keys(m, "mesh", {"nx", "ny", "grading"});
        c.mesh.nx = static_cast<int>(get_integer(m, "nx", "mesh", c.mesh.nx));
        c.mesh.ny = static_cast<int>(get_integer(m, "ny", "mesh", c.mesh.ny));
        c.mesh.grading = get_number(m, "grading", "mesh", c.mesh.grading);
    }
    if (c.mesh.nx < 1 || c.mesh.ny < 1 || c.mesh.nx > 1024 || c.mesh.ny > 1024) {
        fail("mesh.nx and mesh.ny must lie in [1, 1024]");
    }
    if (!(c.mesh.grading >= 1.0)) fail("mesh.grading must be >= 1");
    c.source = doc.contains("source") ? parse_field(doc.at("source"), "source", kSourceKinds, "zero") : FieldSpec{};
    const bool pricing = c.command == "price";
    c.obstacle = doc.contains("obstacle")
                     ? parse_field(doc.at("obstacle"), "obstacle", kObstacleKinds, pricing ? "put" : "none")
                     : FieldSpec{pricing ? "put" : "none"};
    if (pricing && c.obstacle.kind != "put" && c.obstacle.kind != "call") fail("price needs a put or call obstacle");
    if (pricing) c.schedule = AmericanOptions{}.schedule;
    if (doc.contains("schedule")) c.schedule = parse_schedule(doc.at("schedule"), c.schedule);
    if (doc.contains("lambda")) {
        const json& l = doc.at("lambda");
        if (l.is_string() && l.get<std::string>() == "auto") {
            c.lambda.reset();
        } else if (l.is_number() && l.get<double>() >= 0.0) {
            c.lambda = l.get<double>();
        } else {
            fail("lambda must be \"auto\" or a nonnegative number");
        }
    }
    c.refine = static_cast<int>(get_integer(doc, "refine", "config", c.refine));
    if (c.refine < 0 || c.refine > 4) fail("refine must lie in [0, 4]");
    const long long seed = get_integer(doc, "seed", "config", static_cast<long long>(c.seed));
    if (seed < 0) fail("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
    c.suite = get_string(doc, "suite", "config", c.suite);
    if (c.command == "verify" && !kSuites.count(c.suite)) {
        fail("suite must be one of regularity, geometry, spaces, solver");
    }
    c.out_dir = get_string(doc, "output", "config", c.out_dir);
    if (doc.contains("psor_check")) {
        if (!doc.at("psor_check").is_boolean()) fail("psor_check must be a boolean");
        c.psor_check = doc.at("psor_check").get<bool>();
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open config " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

Field make_field(const FieldSpec& spec, const HestonParams& params) {
    if (spec.kind == "zero" || spec.kind == "none") return [](Point) { return 0.0; };
    if (spec.kind == "constant") {
        const double v = spec.value;
        return [v](Point) { return v; };
    }
    if (spec.kind == "manufactured") return manufactured_problem(params).source;
    if (spec.kind == "bump") return bump_field(spec.cx, spec.cy, spec.ax, spec.ay, spec.value);
    if (spec.kind == "tent") return tent_field(spec.strike, spec.value);
    if (spec.kind == "table") {
        return [xs = spec.table_x, ys = spec.table_y, v = spec.table_values](Point z) {
            auto locate = [](const std::vector<double>& a, double t, double& s) {
                t = std::clamp(t, a.front(), a.back());
                std::size_t k = std::upper_bound(a.begin(), a.end(), t) - a.begin();
                k = std::clamp<std::size_t>(k, 1, a.size() - 1) - 1;
                s = (t - a[k]) / (a[k + 1] - a[k]);
                return k;
            };
            double sx = 0.0, sy = 0.0;
            const std::size_t i = locate(xs, z.x, sx), j = locate(ys, z.y, sy);
            const std::size_t n = xs.size();
            return (1 - sx) * (1 - sy) * v[j * n + i] + sx * (1 - sy) * v[j * n + i + 1] +
                   (1 - sx) * sy * v[(j + 1) * n + i] + sx * sy * v[(j + 1) * n + i + 1];
        };
    }
    if (spec.kind == "put" || spec.kind == "call") {
        const Payoff payoff{spec.kind == "put" ? PayoffKind::Put : PayoffKind::Call, spec.strike, {}};
        return [payoff](Point z) { return payoff(z); };
    }
    throw Error(Errc::ConfigError, "unknown field kind '" + spec.kind + "'");
}

nlohmann::json config_schema() {
    const json number = {{"type", "number"}};
    auto num = [](const std::string& doc) { return json{{"type", "number"}, {"description", doc}}; };
    auto integer = [](const std::string& doc) { return json{{"type", "integer"}, {"description", doc}}; };
    const json field_props = {
        {"kind", {{"type", "string"}}},
        {"value", num("constant value, bump height or tent width (price units)")},
        {"strike", num("strike K > 0 (price units); payoff in log-price x")},
        {"cx", num("bump centre x (log-price)")},
        {"cy", num("bump centre y (variance)")},
        {"ax", num("bump half-width in x (log-price)")},
        {"ay", num("bump half-width in y (variance)")},
        {"x", {{"type", "array"}, {"items", number}, {"description", "table grid in log-price x, increasing"}}},
        {"y", {{"type", "array"}, {"items", number}, {"description", "table grid in variance y, increasing"}}},
        {"values",
         {{"type", "array"},
          {"items", {{"type", "array"}, {"items", number}}},
          {"description", "table values, one row per y entry (price units)"}}}};
    json source = {{"type", "object"}, {"additionalProperties", false}, {"properties", field_props}};
    source["properties"]["kind"]["enum"] = {"zero", "constant", "manufactured", "bump", "table"};
    json obstacle = {{"type", "object"}, {"additionalProperties", false}, {"properties", field_props}};
    obstacle["properties"]["kind"]["enum"] = {"none", "zero", "constant", "put", "call", "bump", "tent", "table"};
    return {
        {"$schema", "https://json-schema.org/draft/2020-12/schema"},
        {"title", "degenvi run configuration"},
        {"type", "object"},
        {"additionalProperties", false},
        {"required", {"command"}},
        {"properties",
         {{"schema_version", {{"const", kConfigSchemaVersion}}},
          {"command", {{"enum", {"solve-ve", "solve-vi", "price", "geometry", "verify"}}}},
          {"model",
           {{"type", "object"},
            {"additionalProperties", false},
            {"properties",
             {{"sigma", num("volatility of variance (1/year^(1/2)), nonzero")},
              {"rho", num("correlation (dimensionless), in (-1, 1)")},
              {"kappa", num("mean-reversion rate (1/year), > 0")},
              {"theta", num("mean-reversion level of variance (1/year), > 0")},
              {"r", num("interest rate (1/year), >= 0")},
              {"q", num("dividend yield (1/year), >= 0")},
              {"gamma", num("weight decay in |x| (1/log-price), > 0")}}}}},
          {"domain",
           {{"type", "object"},
            {"additionalProperties", false},
            {"properties",
             {{"kind", {{"enum", {"rectangle", "polygon", "half_disk", "thorn"}}}},
              {"x0", num("rectangle left edge (log-price)")},
              {"x1", num("rectangle right edge (log-price)")},
              {"height", num("rectangle height (variance)")},
              {"vertices",
               {{"type", "array"},
                {"description", "polygon vertices [x, y] (log-price, variance)"},
                {"items", {{"type", "array"}, {"items", number}, {"minItems", 2}, {"maxItems", 2}}}}},
              {"center_x", num("half-disk centre on y = 0 (log-price)")},
              {"radius", num("half-disk radius (Euclidean)")},
              {"n_max", integer("thorn wedge count")},
              {"beta", num("thorn wedge exponent (dimensionless)")}}}}},
          {"mesh",
           {{"type", "object"},
            {"additionalProperties", false},
            {"properties",
             {{"nx", integer("cells in x")},
              {"ny", integer("cells in y")},
              {"grading", num("y-grading exponent g >= 1, y_j = H (j/ny)^g")}}}}},
          {"source", source},
          {"obstacle", obstacle},
          {"schedule",
           {{"type", "object"},
            {"additionalProperties", false},
            {"properties",
             {{"eps0", num("initial penalty parameter")},
              {"shrink", num("factor in (0, 1) applied to eps per step")},
              {"eps_min", num("smallest eps tried")},
              {"newton_tol", num("Newton step tolerance (relative)")},
              {"newton_max_iter", integer("Newton iteration cap per eps")},
              {"outer_tol", num("target for max (psi - u)^+ (price units)")},
              {"outer_max_iter", integer("cap on the lambda fixed point")},
              {"fixed_point_tol", num("relative change ending the lambda fixed point")}}}}},
          {"lambda",
           {{"description", "coercivity shift; \"auto\" probes the smallest admissible value"},
            {"oneOf", {{{"const", "auto"}}, {{"type", "number"}, {"minimum", 0}}}}}},
          {"refine", integer("mesh doublings for convergence studies, 0..4")},
          {"seed", integer("seed for sampled checks")},
          {"suite", {{"enum", {"regularity", "geometry", "spaces", "solver"}}}},
          {"output", {{"type", "string"}, {"description", "output directory"}}},
          {"psor_check", {{"type", "boolean"}, {"description", "cross-check solve-vi against PSOR"}}}}}};
}

}  // namespace degenvi
