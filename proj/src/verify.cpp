#include "degenvi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace degenvi {

std::vector<int> ball_nodes(const Mesh& mesh, Point center, double radius) {
    std::vector<int> out;
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (!mesh.in_closure(n)) continue;
        if (koch_distance(mesh.point(n), center) < radius) out.push_back(n);
    }
    return out;
}

BallExtrema ball_extrema(const GridFunction& u, Point center, double radius) {
    const std::vector<int> nodes = ball_nodes(u.mesh(), center, radius);
    if (nodes.empty()) throw Error(Errc::EmptyBall, "no mesh node inside the ball");
    BallExtrema e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  static_cast<int>(nodes.size())};
    for (int n : nodes) {
        e.sup = std::max(e.sup, u[n]);
        e.inf = std::min(e.inf, u[n]);
    }
    return e;
}

double default_source_exponent(const DerivedConstants& c) {
    const double n = c.n;
    if (c.beta > 2.0) return n + c.beta + 2.0;
    return std::max(2.0 * n, n + c.beta) + 1.0;
}

SupremumReport check_supremum_estimate(const GridFunction& u, const Field& f, const HestonParams& params,
                                       const DerivedConstants& consts, const std::vector<Point>& centers,
                                       const std::vector<double>& radii, double s, bool full_weight) {
    SupremumReport rep;
    rep.s = s > 0.0 ? s : default_source_exponent(consts);
    rep.full_weight = full_weight;
    const Mesh& mesh = u.mesh();
    for (const Point& z0 : centers) {
        for (double R : radii) {
            SupremumSample smp;
            smp.center = z0;
            smp.radius = R;
            double sup_abs = 0.0;
            const std::vector<int> nodes = ball_nodes(mesh, z0, R);
            if (nodes.empty()) throw Error(Errc::EmptyBall, "no mesh node inside B_R");
            for (int n : nodes) sup_abs = std::max(sup_abs, std::abs(u[n]));
            const Region big = ball_region(KochBall{z0, 2.0 * R, BallFrame::Domain});
            double vol = 0.0, l2 = 0.0, fs = 0.0;
            mesh_points(mesh, consts.beta - 1.0, CellQuadrature{}, &big,
                        [&](const Cell& c, double x, double y, double w) {
                            if (full_weight) w *= weight_exponential(params, consts, {x, y});
                            const double v = u.value_in_cell(c.i, c.j, {x, y});
                            vol += w;
                            l2 += w * v * v;
                            fs += w * std::pow(std::abs(f({x, y})), rep.s);
                        });
            if (!(vol > 0.0)) throw Error(Errc::EmptyBall, "B_2R misses the domain");
            smp.sup_abs = sup_abs;
            smp.l2_average = std::sqrt(l2 / vol);
            smp.f_norm = std::pow(fs, 1.0 / rep.s);
            const double den = smp.l2_average + smp.f_norm;
            smp.ratio = den > 0.0 ? sup_abs / den : 0.0;
            rep.max_ratio = std::max(rep.max_ratio, smp.ratio);
            rep.samples.push_back(smp);
        }
    }
    return rep;
}

bool stable_within(double a, double b, double factor) {
    if (a == 0.0 && b == 0.0) return true;
    if (!(a > 0.0) || !(b > 0.0)) return false;
    return std::max(a, b) <= factor * std::min(a, b);
}

OscillationFit measure_oscillation_decay(const GridFunction& u, Point center, const std::vector<double>& radii) {
    if (radii.size() < 4) throw Error(Errc::InsufficientRadii, "oscillation fit needs at least four radii");
    OscillationFit fit;
    fit.center = center;
    fit.radii = radii;
    std::vector<double> lx, ly;
    for (double R : radii) {
        const BallExtrema e = ball_extrema(u, center, R);
        const double osc = e.sup - e.inf;
        fit.osc.push_back(osc);
        if (osc > 0.0) {
            lx.push_back(std::log(R));
            ly.push_back(std::log(osc));
        }
    }
    if (lx.empty()) {
        fit.alpha = std::numeric_limits<double>::infinity();
        fit.pass = true;
        return fit;
    }
    if (lx.size() < 2) {
        fit.alpha = std::numeric_limits<double>::infinity();
        fit.residual = std::numeric_limits<double>::infinity();
        return fit;
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    fit.alpha = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.alpha * sx) / m;
    double ss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - (fit.intercept + fit.alpha * lx[k]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    fit.pass = fit.alpha > kMinOscillationExponent && fit.residual < kMaxFitResidual;
    return fit;
}

double holder_seminorm(const GridFunction& u, const std::vector<int>& nodes, double alpha, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::PreconditionViolated, "alpha must lie in (0, 1]");
    const Mesh& mesh = u.mesh();
    double best = 0.0;
    auto visit = [&](int a, int b) {
        const double d = koch_distance(mesh.point(a), mesh.point(b));
        if (d > 0.0) best = std::max(best, std::abs(u[a] - u[b]) / std::pow(d, alpha));
    };
    const std::size_t n = nodes.size();
    if (n <= 2000) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) visit(nodes[i], nodes[j]);
        }
        return best;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < 1000000; ++k) visit(nodes[pick(rng)], nodes[pick(rng)]);
    return best;
}

double holder_seminorm(const GridFunction& u, Point center, double radius, double alpha, std::uint64_t seed) {
    return holder_seminorm(u, ball_nodes(u.mesh(), center, radius), alpha, seed);
}

double harnack_ratio(const GridFunction& u, Point center, double radius) {
    bool on_gamma0 = false;
    if (center.y == 0.0) {
        for (const Interval& iv : u.mesh().domain.gamma0()) {
            if (center.x > iv.lo && center.x < iv.hi) on_gamma0 = true;
        }
    }
    if (!on_gamma0) throw Error(Errc::PreconditionViolated, "Harnack centre must lie on Γ0");
    const BallExtrema e = ball_extrema(u, center, radius);
    if (e.inf < 0.0) throw Error(Errc::PreconditionViolated, "Harnack ratio needs u >= 0 on the ball");
    if (e.inf <= std::numeric_limits<double>::min()) return std::numeric_limits<double>::infinity();
    return e.sup / e.inf;
}

double obstacle_defect(const ObstacleProblem& problem) {
    const AssembledForm& form = problem.form;
    const GridFunction psi(form.mesh, problem.psi);
    const GridFunction apsi = apply_operator(form.params, form.consts, psi);
    double worst = 0.0;
    for (int n : form.mesh->free_nodes) {
        worst = std::max(worst, apsi[n] - problem.f(form.mesh->point(n)));
    }
    return worst;
}

BoundCheck check_penalty_bound(const SolveReport& report, double defect, double tol) {
    BoundCheck c;
    c.bound = 2.0 * defect + tol;
    for (const EpsStep& step : report.path) {
        if (step.eps <= report.eps0) c.measured = std::max(c.measured, step.penalty_sup);
    }
    c.slack = c.bound - c.measured;
    c.pass = c.measured <= c.bound;
    return c;
}

BoundCheck check_penalty_bound(const SolveReport& report, const ObstacleProblem& problem, double tol) {
    return check_penalty_bound(report, obstacle_defect(problem), tol);
}

BoundCheck check_max_principle(const GridFunction& u, double f_sup, double psi_plus_sup, double lambda, double r,
                               double tol) {
    if (lambda < 0.0 || r < 0.0) throw Error(Errc::PreconditionViolated, "max principle needs lambda, r >= 0");
    BoundCheck c;
    for (int n : u.mesh().free_nodes) c.measured = std::max(c.measured, std::abs(u[n]));
    // with lambda + r = 0 the f-term is 0 for f = 0 and unbounded otherwise
    const double f_term = f_sup == 0.0 ? 0.0
                          : lambda + r > 0.0 ? f_sup / (lambda + r)
                                             : std::numeric_limits<double>::infinity();
    c.bound = std::max(f_term, psi_plus_sup) + tol;
    c.slack = c.bound - c.measured;
    c.pass = c.measured <= c.bound;
    return c;
}

BoundCheck check_max_principle(const GridFunction& u, const ObstacleProblem& problem, double lambda, double tol) {
    const Mesh& mesh = *problem.form.mesh;
    double f_sup = 0.0, psi_sup = 0.0;
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (!mesh.in_closure(n)) continue;
        f_sup = std::max(f_sup, std::abs(problem.f(mesh.point(n))));
        psi_sup = std::max(psi_sup, std::max(problem.psi[n], 0.0));
    }
    return check_max_principle(u, f_sup, psi_sup, lambda, problem.form.params.r, tol);
}

}  // namespace degenvi
