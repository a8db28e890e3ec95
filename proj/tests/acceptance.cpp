// Acceptance harness: one PASS/FAIL line per criterion. Tolerances are
// fixed below; oracles are computed here independently of the library
// wherever a closed form or a brute-force route exists.

#include "degenvi/problems.hpp"
#include "degenvi/run.hpp"
#include "degenvi/verify.hpp"
#include "lcp_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace degenvi;

namespace {

// pinned tolerances
constexpr double kQuadratureRelTol = 1e-12;
constexpr double kDistanceTol = 1e-14;
constexpr int kSandwichSamples = 10000;
constexpr int kScalingQueries = 10000;
constexpr double kVolumeConstant = 64.0;
constexpr double kVolumeOracleRelTol = 1e-5;
constexpr double kThornDropFactor = 0.5;
constexpr double kMinOrder = 1.8;
constexpr double kResidualTol = 1e-10;
constexpr double kPenaltyPsorTol = 1e-6;
constexpr double kEnumerationTol = 1e-10;
constexpr double kPenaltyBoundRelTol = 1e-6;
constexpr double kMaxPrincipleTol = 1e-8;
constexpr double kMinAlpha = 0.05;
constexpr double kAlphaDrift = 0.1;
constexpr double kHarnackConstant = 2.0;
constexpr double kPhiWithin = 0.01;
constexpr double kPhiOracleRelTol = 1e-4;
constexpr double kExtensionFactor = 2.0;

const HestonParams kPut{0.5, -0.5, 2.0, 0.0625, 0.05, 0.0, 0.1};         // beta 1
const HestonParams kManufactured{0.5, -0.5, 1.0, 0.125, 0.05, 0.02, 0.1};  // beta 1

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Field constant(double c) {
    return [c](Point) { return c; };
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

double kronrod(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

// ---------------------------------------------------------------- 1

Outcome quadrature_oracle() {
    // bicubic p(x, y) = sum c_ij x^i y^j times y^(beta - 1), cell by cell
    double c[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[i][j] = 1.0 + 0.37 * i - 0.21 * j + 0.05 * i * j;
    auto p = [&](double x, double y) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += c[i][j] * std::pow(x, i) * std::pow(y, j);
        return s;
    };
    double worst = 0.0;
    int cells = 0;
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(-0.7, 1.3, 1.5), 5, 6, 2.0);
        for (const Cell& cell : mesh->cells) {
            const double xa = mesh->xs[cell.i], xb = mesh->xs[cell.i + 1];
            const double ya = mesh->ys[cell.j], yb = mesh->ys[cell.j + 1];
            double exact = 0.0;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    exact += c[i][j] * (std::pow(xb, i + 1) - std::pow(xa, i + 1)) / (i + 1) *
                             (std::pow(yb, beta + j) - std::pow(ya, beta + j)) / (beta + j);
                }
            }
            double got = 0.0;
            cell_points(*mesh, cell, beta - 1.0, CellQuadrature{}, nullptr,
                        [&](double x, double y, double w) { got += w * p(x, y); });
            worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
            ++cells;
        }
    }
    return {worst <= kQuadratureRelTol, "max rel err " + g(worst) + " over " + std::to_string(cells) + " cells"};
}

// ---------------------------------------------------------------- 2

double oracle_half_width(Point c, double R, double y) {
    const double t = 0.5 * (R * R + std::sqrt(R * R * R * R + 4.0 * R * R * (y + c.y)));
    const double h2 = t * t - (y - c.y) * (y - c.y);
    return h2 > 0.0 ? std::sqrt(h2) : 0.0;
}

double oracle_ball_volume(Point c, double R, double a) {
    const double lo = std::max(0.0, c.y - R * std::sqrt(2.0 * c.y));
    const double hi = c.y + R * R + std::sqrt(R * R * R * R + 2.0 * R * R * c.y);
    return tanh_sinh([&](double y) { return std::pow(y, a) * 2.0 * oracle_half_width(c, R, y); }, lo, hi);
}

Outcome geometry() {
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::ostringstream detail;
    bool ok = true;

    // (a) identities
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double x = 4.0 * unit(rng) - 2.0, y = 3.0 * unit(rng), x2 = 4.0 * unit(rng) - 2.0;
        worst = std::max(worst, std::abs(koch_distance({x, y}, {x, 0.0}) - std::sqrt(y / 2.0)));
        worst = std::max(worst, std::abs(koch_distance({x, 0.0}, {x2, 0.0}) - std::sqrt(std::abs(x - x2))));
    }
    const bool a_ok = worst <= kDistanceTol;
    detail << "(a) " << g(worst);

    // (b) inclusion sandwich
    int b_fail = 0;
    for (double R : {0.1, 0.5, 1.0}) {
        for (double y0 : {0.0, 0.1, 1.0}) {
            const InclusionRadii r = euclidean_inclusion_radii(R, y0);
            const Point z0{0.3, y0};
            for (int k = 0; k < kSandwichSamples; ++k) {
                const double t = 2.0 * M_PI * unit(rng), s = r.inner * std::sqrt(unit(rng));
                const Point in{z0.x + s * std::cos(t), z0.y + s * std::sin(t)};
                if (in.y >= 0.0 && !(koch_distance(in, z0) < R)) ++b_fail;
                const Point w{z0.x + 3.0 * r.outer * (2.0 * unit(rng) - 1.0),
                              std::max(0.0, z0.y - 3.0 * r.outer) + 6.0 * r.outer * unit(rng)};
                if (koch_distance(w, z0) < R && !(std::hypot(w.x - z0.x, w.y - z0.y) < r.outer)) ++b_fail;
            }
        }
    }
    detail << " (b) " << b_fail << " violations";

    // (c) scaling law for boundary-centred balls, and its failure off the boundary
    auto mismatches = [&](Point z0, double R) {
        int bad = 0;
        for (int k = 0; k < kScalingQueries; ++k) {
            const Point w{z0.x + 6.0 * unit(rng) - 3.0, 3.0 * unit(rng)};
            const Point s{z0.x + R * R * (w.x - z0.x), z0.y + R * R * (w.y - z0.y)};
            if ((koch_distance(w, z0) < 1.0) != (koch_distance(s, z0) < R)) ++bad;
        }
        return bad;
    };
    const int c_on = mismatches({0.25, 0.0}, 0.5) + mismatches({-1.0, 0.0}, 0.25);
    const int c_off = mismatches({0.25, 0.5}, 0.5);
    detail << " (c) " << c_on << " on/" << c_off << " off";

    // (d) volume sandwich with the library and the oracle
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, vol_err = 0.0;
    for (double beta : {1.0, 4.0}) {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double R = std::pow(2.0, -6 + i), y0 = std::pow(10.0, -4 + j);
                const Point z0{0.0, y0};
                const double v = ball_volume(KochBall{z0, R}, beta, 96);
                const double ref = oracle_ball_volume(z0, R, beta);
                vol_err = std::max(vol_err, std::abs(v - ref) / ref);
                const double q = v / (R * R * std::pow(R + std::sqrt(y0), 2.0 + 2.0 * beta));
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
    }
    const bool d_ok = lo >= 1.0 / kVolumeConstant && hi <= kVolumeConstant && vol_err <= kVolumeOracleRelTol;
    detail << " (d) [" << g(lo) << ", " << g(hi) << "] vs oracle " << g(vol_err);

    ok = a_ok && b_fail == 0 && c_on == 0 && c_off > 0 && d_ok;
    return {ok, detail.str()};
}

// ---------------------------------------------------------------- 3

Outcome thorn() {
    const HalfPlaneDomain t = thorn_domain(40, 1.0);
    std::vector<double> r;
    for (int N : {4, 8, 16, 32}) r.push_back(domain_volume_ratio(t, 1.0, {0.0, 0.0}, 1.0 / N, 96).interior);
    bool dec = true;
    for (std::size_t k = 1; k < r.size(); ++k) dec = dec && r[k] < r[k - 1];
    return {dec && r.back() < kThornDropFactor * r.front(),
            "ratios " + g(r[0]) + ", " + g(r[1]) + ", " + g(r[2]) + ", " + g(r[3])};
}

// ---------------------------------------------------------------- 4

// A u* for u* = sin(pi x) y (1 - y), differentiated by hand.
double manufactured_source(const HestonParams& p, Point z) {
    const double x = z.x, y = z.y, s = std::sin(M_PI * x), c = std::cos(M_PI * x);
    const double u = s * y * (1 - y), ux = M_PI * c * y * (1 - y), uxx = -M_PI * M_PI * s * y * (1 - y);
    const double uy = s * (1 - 2 * y), uyy = -2 * s, uxy = M_PI * c * (1 - 2 * y);
    return -0.5 * y * (uxx + 2 * p.rho * p.sigma * uxy + p.sigma * p.sigma * uyy) - (p.r - p.q - 0.5 * y) * ux -
           p.kappa * (p.theta - y) * uy + p.r * u;
}

Outcome manufactured() {
    const HestonParams& p = kManufactured;
    const DerivedConstants consts = derive_constants(p);
    const ManufacturedProblem mp = manufactured_problem(p);
    double src_err = 0.0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const Point z{i / 20.0, j / 20.0};
            src_err = std::max(src_err, std::abs(mp.source(z) - manufactured_source(p, z)));
        }
    std::vector<double> errs;
    double resid = 0.0;
    for (int n : {8, 16, 32, 64}) {
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), n, n, 1.0);
        const AssembledForm form = assemble(p, consts, mesh, 0.0);
        if (coercivity_shift(form) > 0.0) return {false, "form not coercive at lambda = 0"};
        const Eigen::VectorXd b = load_vector([&](Point z) { return manufactured_source(p, z); }, *mesh, p, consts);
        const LinearSolve ls = solve_linear(form, b);
        resid = std::max(resid, (form.matrix * ls.u - b).lpNorm<Eigen::Infinity>());
        errs.push_back(weighted_l2_error(GridFunction::from_free(mesh, ls.u), mp.exact, p, consts));
    }
    const double slope = std::log2(errs.front() / errs.back()) / 3.0;
    return {slope >= kMinOrder && resid <= kResidualTol && src_err <= 1e-12,
            "slope " + g(slope) + ", residual " + g(resid) + ", source check " + g(src_err)};
}

// ---------------------------------------------------------------- 5

Outcome green_identity() {
    // psi = cos(x) (1 + y^2) on (0.2, 1.2) x (0, 1) with A psi by hand
    const HestonParams p{0.5, -0.5, 1.0, 0.125, 0.05, 0.02, 0.3};
    const DerivedConstants consts = derive_constants(p);
    auto psi = [](Point z) { return std::cos(z.x) * (1 + z.y * z.y); };
    auto a_psi = [&](Point z) {
        const double x = z.x, y = z.y;
        const double px = -std::sin(x) * (1 + y * y), pxx = -std::cos(x) * (1 + y * y);
        const double py = 2 * y * std::cos(x), pyy = 2 * std::cos(x), pxy = -2 * y * std::sin(x);
        return -0.5 * y * (pxx + 2 * p.rho * p.sigma * pxy + p.sigma * p.sigma * pyy) - (p.r - p.q - 0.5 * y) * px -
               p.kappa * (p.theta - y) * py + p.r * psi(z);
    };
    const std::vector<Point> patch{{0.7, 0.5}, {0.45, 0.25}, {0.95, 0.75}, {0.7, 0.125}};
    std::vector<double> mismatch;
    for (int n : {8, 16, 32, 64}) {
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.2, 1.2, 1.0), n, n, 1.0);
        const AssembledForm form = assemble(p, consts, mesh, 0.0);
        const GridFunction ps = GridFunction::sample(mesh, psi);
        const Eigen::VectorXd lhs = form.a_full * Eigen::Map<const Eigen::VectorXd>(ps.values().data(), ps.values().size());
        const Eigen::VectorXd rhs = load_vector(a_psi, *mesh, p, consts);
        double worst = 0.0;
        for (Point z : patch) {
            const auto [i, j] = mesh->locate(z);
            const int node = mesh->node(i, j);
            if (std::abs(mesh->point(node).x - z.x) > 1e-12 || std::abs(mesh->point(node).y - z.y) > 1e-12) {
                return {false, "patch point not a node"};
            }
            const int a = mesh->free_index[node];
            worst = std::max(worst, std::abs(lhs[node] - rhs[a]) / form.lumped_mass[a]);
        }
        mismatch.push_back(worst);
    }
    double min_order = std::numeric_limits<double>::infinity();
    std::string orders;
    for (std::size_t k = 1; k < mismatch.size(); ++k) {
        const double o = std::log2(mismatch[k - 1] / mismatch[k]);
        min_order = std::min(min_order, o);
        orders += (k > 1 ? ", " : "") + g(o);
    }
    return {min_order >= kMinOrder, "scaled mismatch " + g(mismatch.front()) + " -> " + g(mismatch.back()) +
                                        ", orders " + orders};
}

// ---------------------------------------------------------------- 6, 8

struct ViRecord {
    std::string name;
    double u_sup = 0.0;
    double bound = 0.0;
};

std::vector<ViRecord> g_vi_records;

ViResult solve_or_best(const ObstacleProblem& prob, const PenaltySchedule& s) {
    try {
        return solve_vi(prob, s);
    } catch (const ScheduleExhausted& e) {
        return e.best();
    }
}

// max-principle bound computed here from nodal data
void record_vi(const std::string& name, const ViResult& vi, const ObstacleProblem& prob, const HestonParams& p,
               double lambda) {
    const Mesh& m = vi.u.mesh();
    double u_sup = 0.0, f_sup = 0.0, psi_plus = 0.0;
    for (int node : m.free_nodes) {
        u_sup = std::max(u_sup, std::abs(vi.u[node]));
        psi_plus = std::max(psi_plus, std::max(0.0, prob.psi[node]));
    }
    for (int k = 0; k < m.node_count(); ++k)
        if (m.in_closure(k)) f_sup = std::max(f_sup, std::abs(prob.f(m.point(k))));
    const double denom = lambda + p.r;
    const double f_term = f_sup == 0.0 ? 0.0 : (denom > 0.0 ? f_sup / denom : std::numeric_limits<double>::infinity());
    g_vi_records.push_back({name, u_sup, std::max(f_term, psi_plus)});
}

Outcome vi_oracles() {
    const DerivedConstants consts = derive_constants(kPut);
    std::ostringstream detail;
    bool ok = true;
    double worst_enum_psor = 0.0, worst_enum_pen = 0.0, worst_pen_psor = 0.0;
    struct Small {
        int nx, ny;
        Field psi;
        Field f;
    };
    const std::vector<Small> small{{3, 3, bump_field(0.5, 0.0, 0.6, 0.9, 0.5), constant(0.0)},
                                   {4, 2, bump_field(0.4, 0.2, 0.5, 0.7, 0.3), constant(-0.5)},
                                   {3, 3, [](Point z) { return 0.2 - z.x * z.y; }, constant(0.5)}};
    int idx = 0;
    for (const Small& s : small) {
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), s.nx, s.ny, 1.0);
        if (mesh->free_count() > 8) return {false, "too many unknowns for enumeration"};
        const AssembledForm form = assemble(kPut, consts, mesh, 0.0);
        if (coercivity_shift(form) > 0.0) return {false, "small form not coercive"};
        const ObstacleProblem prob = make_obstacle_problem(form, s.f, s.psi);
        const Eigen::VectorXd psi = free_obstacle(prob);
        const oracle::LcpSolution ex = oracle::enumerate_lcp(Eigen::MatrixXd(form.matrix), prob.rhs, psi);
        if (ex.matches != 1) return {false, "enumeration found " + std::to_string(ex.matches) + " solutions"};
        const Eigen::VectorXd ps = psor_oracle(form.matrix, prob.rhs, psi);
        const ViResult vi = solve_or_best(prob, PenaltySchedule{});
        ok = ok && vi.report.converged;
        worst_enum_psor = std::max(worst_enum_psor, (ps - ex.u).lpNorm<Eigen::Infinity>());
        worst_enum_pen = std::max(worst_enum_pen, (vi.u.free_values() - ex.u).lpNorm<Eigen::Infinity>());
        worst_pen_psor = std::max(worst_pen_psor, (vi.u.free_values() - ps).lpNorm<Eigen::Infinity>());
        record_vi("small " + std::to_string(idx++), vi, prob, kPut, 0.0);
    }
    for (int n : {16, 32}) {
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), n, n, 1.0);
        const AssembledForm form = assemble(kPut, consts, mesh, 0.0);
        if (coercivity_shift(form) > 0.0) return {false, "form not coercive"};
        const ObstacleProblem prob = make_obstacle_problem(form, constant(0.0), bump_field(0.5, 0.0, 0.4, 0.6));
        const ViResult vi = solve_or_best(prob, PenaltySchedule{});
        ok = ok && vi.report.converged;
        const Eigen::VectorXd ps = psor_oracle(form.matrix, prob.rhs, free_obstacle(prob));
        worst_pen_psor = std::max(worst_pen_psor, (vi.u.free_values() - ps).lpNorm<Eigen::Infinity>());
        record_vi("bump " + std::to_string(n), vi, prob, kPut, 0.0);
    }
    ok = ok && worst_enum_psor <= kEnumerationTol && worst_pen_psor <= kPenaltyPsorTol &&
         worst_enum_pen <= kPenaltyPsorTol;
    detail << "penalty-psor " << g(worst_pen_psor) << ", psor-enum " << g(worst_enum_psor) << ", penalty-enum "
           << g(worst_enum_pen);
    return {ok, detail.str()};
}

// ---------------------------------------------------------------- 7

Outcome penalty_bound() {
    const DerivedConstants consts = derive_constants(kPut);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(-1.0, 1.0, 1.0), 64, 32, 1.0);
    AssembledForm form = assemble(kPut, consts, mesh, 0.0);
    const double lambda = coercivity_shift(form);
    if (lambda > 0.0) form = form.shifted(lambda);
    const Payoff put{PayoffKind::Put, 1.0, {}};
    const ObstacleProblem prob = make_obstacle_problem(form, constant(0.0), [&](Point z) { return put(z); });
    const ViResult vi = solve_or_best(prob, AmericanOptions{}.schedule);
    record_vi("put strip", vi, prob, kPut, 0.0);
    const double defect = obstacle_defect(prob);
    const double tol = kPenaltyBoundRelTol * std::max(1.0, defect);
    double worst = 0.0;
    int steps = 0;
    for (const EpsStep& s : vi.report.path) {
        if (s.eps > vi.report.eps0) continue;
        worst = std::max(worst, s.penalty_sup);
        ++steps;
    }
    return {vi.report.converged && steps > 0 && worst <= 2.0 * defect + tol,
            "max penalty " + g(worst) + " <= " + g(2.0 * defect + tol) + " over " + std::to_string(steps) +
                " eps, gap " + g(vi.report.gap_negative)};
}

Outcome max_principle() {
    bool ok = !g_vi_records.empty();
    double slack = std::numeric_limits<double>::infinity();
    std::string worst;
    for (const ViRecord& r : g_vi_records) {
        ok = ok && r.u_sup <= r.bound + kMaxPrincipleTol;
        if (r.bound - r.u_sup < slack) worst = r.name + " " + g(r.u_sup) + " vs " + g(r.bound);
        slack = std::min(slack, r.bound - r.u_sup);
    }
    return {ok, std::to_string(g_vi_records.size()) + " VI runs, min slack " + g(slack) + " (" + worst + ")"};
}

// ---------------------------------------------------------------- 9

std::vector<double> aligned_radii() {
    // ball tops 2 R^2 on the node rows of every mesh graded with exponent 2
    std::vector<double> r;
    for (int k = 0; k < 5; ++k) r.push_back(std::sqrt(std::pow(4.0, -(k + 1)) / 2.0) * (1.0 + 1e-9));
    return r;
}

double nodal_osc(const GridFunction& u, Point c, double R) {
    const Mesh& m = u.mesh();
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m.node_count(); ++k) {
        if (!m.in_closure(k) || !(koch_distance(m.point(k), c) < R)) continue;
        hi = std::max(hi, u[k]);
        lo = std::min(lo, u[k]);
    }
    return hi - lo;
}

double fitted_alpha(const GridFunction& u, Point c, const std::vector<double>& radii) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(radii.size());
    for (double R : radii) {
        const double x = std::log(R), y = std::log(nodal_osc(u, c, R));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome regularity() {
    const HestonParams& p = kPut;
    const DerivedConstants consts = derive_constants(p);
    const std::vector<double> radii = aligned_radii();
    std::vector<std::vector<double>> ve(2), vi(2);
    for (int level = 0; level < 2; ++level) {
        const int n = 32 << level;
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), n, n, 2.0);
        AssembledForm form = assemble(p, consts, mesh, 0.0);
        const double lambda = coercivity_shift(form);
        if (lambda > 0.0) form = form.shifted(lambda);
        const GridFunction u = solve_ve(form, constant(1.0));
        for (double cx : {0.25, 0.5, 0.75}) ve[level].push_back(fitted_alpha(u, {cx, 0.0}, radii));

        auto vmesh = build_mesh(HalfPlaneDomain::rectangle(-1.0, 1.0, 1.0), 2 * n, n, 2.0);
        AssembledForm vform = assemble(p, consts, vmesh, 0.0);
        const double vl = coercivity_shift(vform);
        if (vl > 0.0) vform = vform.shifted(vl);
        const ObstacleProblem prob = make_obstacle_problem(vform, constant(0.0), tent_field(1.0, 0.5));
        const ViResult v = solve_or_best(prob, AmericanOptions{}.schedule);
        record_vi("tent level " + std::to_string(level), v, prob, p, 0.0);
        for (double cx : {-0.75, 0.5, 0.75}) vi[level].push_back(fitted_alpha(v.u, {cx, 0.0}, radii));
    }
    bool ok = true;
    double amin = std::numeric_limits<double>::infinity(), drift = 0.0;
    for (const auto* a : {&ve, &vi}) {
        for (std::size_t k = 0; k < (*a)[0].size(); ++k) {
            amin = std::min({amin, (*a)[0][k], (*a)[1][k]});
            drift = std::max(drift, std::abs((*a)[0][k] - (*a)[1][k]));
        }
    }
    ok = amin > kMinAlpha && drift <= kAlphaDrift;
    return {ok, "VE alpha " + g(ve[1][0]) + "/" + g(ve[1][1]) + "/" + g(ve[1][2]) + ", VI alpha " + g(vi[1][0]) +
                    "/" + g(vi[1][1]) + "/" + g(vi[1][2]) + ", min " + g(amin) + ", drift " + g(drift)};
}

// ---------------------------------------------------------------- 10

Outcome harnack() {
    const HestonParams& p = kPut;
    const DerivedConstants consts = derive_constants(p);
    const double Rbar = 0.25;
    const Field f = bump_field(0.35, 0.3, 0.1, 0.1);
    if (koch_distance({0.25, 0.2}, {0.0, 0.0}) < Rbar) return {false, "source meets the ball"};
    double worst = 1.0;
    bool ok = true;
    for (int level = 0; level < 3; ++level) {
        const int n = 32 << level;
        auto mesh = build_mesh(HalfPlaneDomain::rectangle(-0.5, 0.5, 0.5), n, n, 3.0);
        const AssembledForm form = assemble(p, consts, mesh, 0.0);
        if (coercivity_shift(form) > 0.0) return {false, "form not coercive"};
        const GridFunction u = solve_ve(form, f);
        for (double R : {Rbar / 8, Rbar / 16, Rbar / 32}) {
            double hi = 0.0, lo = std::numeric_limits<double>::infinity();
            int count = 0;
            for (int k = 0; k < mesh->node_count(); ++k) {
                if (!mesh->in_closure(k) || !(koch_distance(mesh->point(k), {0.0, 0.0}) < R)) continue;
                hi = std::max(hi, u[k]);
                lo = std::min(lo, u[k]);
                ++count;
            }
            ok = ok && count > 1 && lo > 0.0;
            worst = std::max(worst, hi / lo);
        }
    }
    return {ok && worst <= kHarnackConstant, "max sup/inf " + g(worst) + " <= " + g(kHarnackConstant)};
}

// ---------------------------------------------------------------- 11

Outcome phi_limit() {
    const HestonParams& p = kPut;
    const DerivedConstants consts = derive_constants(p);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), 64, 32, 1.0);
    const GridFunction u = GridFunction::sample(mesh, [](Point z) { return z.x < 0.5 ? 1.0 : 3.0; });
    const std::vector<double> ps{1, 2, 4, 8, 16, 32, 64, 128, 200};
    const std::vector<double> phi = phi_p_profile(u, ps, p, consts);
    // the interpolant ramps from 1 to 3 on [31/64, 1/2]; the y factor of the weight cancels
    const double x0 = 31.0 / 64.0, x1 = 0.5;
    auto ux = [&](double x) { return x <= x0 ? 1.0 : (x >= x1 ? 3.0 : 1.0 + 2.0 * (x - x0) / (x1 - x0)); };
    auto wx = [&](double x) { return std::exp(-p.gamma * x); };
    double oracle_err = 0.0;
    bool mono = true;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double q = ps[k];
        // scaled by 3^-q to stay finite at large q
        auto part = [&](double a, double b) { return kronrod([&](double x) { return std::pow(ux(x) / 3.0, q) * wx(x); }, a, b); };
        const double num = part(0.0, x0) + part(x0, x1) + part(x1, 1.0);
        const double den = kronrod(wx, 0.0, 1.0);
        const double ref = 3.0 * std::pow(num / den, 1.0 / q);
        oracle_err = std::max(oracle_err, std::abs(phi[k] - ref) / ref);
        if (k > 0) mono = mono && phi[k] >= phi[k - 1];
    }
    const bool close = phi.back() >= (1.0 - kPhiWithin) * 3.0 && phi.back() <= 3.0;
    return {mono && close && oracle_err <= kPhiOracleRelTol,
            "Phi_200 " + g(phi.back()) + ", oracle rel err " + g(oracle_err)};
}

// ---------------------------------------------------------------- 12

Outcome extension() {
    const HestonParams& p = kPut;
    const DerivedConstants consts = derive_constants(p);
    const KochBall ball{{0.5, 0.0}, 0.4};
    const HalfPlaneDomain unit = HalfPlaneDomain::rectangle(0.0, 1.0, 1.0);
    const Region inside = ball_in_domain(ball, unit);
    std::vector<double> growth;
    double worst_id = 0.0;
    for (int n : {32, 64}) {
        auto mesh = build_mesh(unit, n, n, 1.0);
        const GridFunction u = GridFunction::sample(mesh, [](Point z) { return 1.0 + z.x - 2.0 * z.x * z.y + z.y * z.y; });
        const GridFunction e = extend(u, ball);
        for (int k = 0; k < mesh->node_count(); ++k)
            if (koch_distance(mesh->point(k), ball.center) <= ball.radius) worst_id = std::max(worst_id, std::abs(e[k] - u[k]));
        growth.push_back(weighted_norm(e, {NormTag::H1_w}, p, consts) /
                         weighted_norm(u, {NormTag::H1_w}, p, consts, &inside));
    }
    return {worst_id == 0.0 && stable_within(growth[0], growth[1], kExtensionFactor),
            "identity err " + g(worst_id) + ", H1 growth " + g(growth[0]) + " -> " + g(growth[1])};
}

// ---------------------------------------------------------------- 13

std::string slurp(const std::filesystem::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("degenvi_determinism_" + std::to_string(::getpid()));
    const std::vector<nlohmann::json> docs{
        {{"command", "solve-vi"},
         {"model", {{"sigma", 0.5}, {"rho", -0.5}, {"kappa", 2.0}, {"theta", 0.0625}, {"r", 0.05}}},
         {"mesh", {{"nx", 16}, {"ny", 16}}},
         {"obstacle", {{"kind", "bump"}, {"cx", 0.5}, {"cy", 0.0}, {"ax", 0.4}, {"ay", 0.6}}},
         {"seed", 11}},
        {{"command", "verify"}, {"suite", "geometry"}, {"seed", 5}}};
    bool ok = true;
    int files = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path dir = root / (std::to_string(d) + "_" + std::to_string(rep));
            const RunArtifacts art = execute(parse_config(docs[d]));
            write_artifacts(art, dir.string());
            std::string all;
            for (const char* name : {"report.json", "fields.csv"})
                if (fs::exists(dir / name)) all += slurp(dir / name);
            if (rep == 0) first = all;
            else ok = ok && all == first && !all.empty();
            ++files;
        }
    }
    fs::remove_all(root);
    return {ok, std::to_string(files) + " runs, reports byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
    struct Item {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Item> all{
        {1, "quadrature oracle", quadrature_oracle},
        {2, "Koch geometry", geometry},
        {3, "thorn volume ratio", thorn},
        {4, "manufactured convergence", manufactured},
        {5, "discrete Green identity", green_identity},
        {6, "VI oracle equivalence", vi_oracles},
        {7, "penalty bound", penalty_bound},
        {8, "max-principle bound", max_principle},
        {9, "regularity at the boundary", regularity},
        {10, "Harnack ratio", harnack},
        {11, "Phi_p limit", phi_limit},
        {12, "extension operator", extension},
        {13, "determinism", determinism},
    };
    // With an argument only that criterion runs. 8 reads the VI runs
    // recorded by 6, 7 and 9, so those run first.
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    std::vector<Item> items;
    for (int id : {1, 2, 3, 4, 5, 6, 7, 9, 8, 10, 11, 12, 13}) {
        if (only == 0 || id == only) items.push_back(all[id - 1]);
    }
    if (items.empty()) {
        std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
        return 2;
    }
    if (only == 8) {
        for (int dep : {6, 7, 9}) {
            try {
                (void)all[dep - 1].run();
            } catch (const std::exception&) {
            }
        }
    }
    std::vector<std::pair<int, std::string>> lines;
    int failed = 0;
    for (const Item& it : items) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::ostringstream s;
        s << (o.pass ? "PASS" : "FAIL") << " criterion " << it.id << " " << it.name << ": " << o.detail << " ("
          << g(secs) << " s)";
        lines.emplace_back(it.id, s.str());
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d of %zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
    return failed == 0 ? 0 : 1;
}
