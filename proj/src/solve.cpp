#include "degenvi/solve.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>

namespace degenvi {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

bool factor_solve(const ColMatrix& m, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
    Eigen::SparseLU<ColMatrix> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) return false;
    out = lu.solve(rhs);
    return lu.info() == Eigen::Success && out.allFinite();
}

double max_positive(const Eigen::VectorXd& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, v[i]);
    return m;
}

}  // namespace

LinearSolve solve_linear(const AssembledForm& form, const Eigen::VectorXd& rhs) {
    const ColMatrix m = form.matrix;
    LinearSolve out;
    if (m.rows() == 0) {
        out.u = Eigen::VectorXd::Zero(0);
        return out;
    }
    if (!factor_solve(m, rhs, out.u)) throw Error(Errc::SingularSystem, "sparse LU factorization failed");
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    out.relative_residual = rhs.norm() == 0.0 ? (form.matrix * out.u).norm() : (form.matrix * out.u - rhs).norm() / scale;
    return out;
}

GridFunction solve_ve(const AssembledForm& form, const Field& f) {
    const Eigen::VectorXd b = load_vector(f, *form.mesh, form.params, form.consts);
    return GridFunction::from_free(form.mesh, solve_linear(form, b).u);
}

double penalty(double t, double eps) {
    if (!(eps > 0.0)) throw Error(Errc::PreconditionViolated, "eps must be positive");
    return t >= 0.0 ? 0.0 : t / eps;
}

void validate(const PenaltySchedule& s) {
    if (!(s.eps0 > 0.0) || !(s.eps_min > 0.0) || !(s.eps_min < s.eps0)) {
        throw Error(Errc::PreconditionViolated, "schedule needs 0 < eps_min < eps0");
    }
    if (!(s.shrink > 0.0 && s.shrink < 1.0)) throw Error(Errc::PreconditionViolated, "shrink must lie in (0, 1)");
    if (!(s.newton_tol > 0.0) || !(s.outer_tol > 0.0) || !(s.fixed_point_tol > 0.0)) {
        throw Error(Errc::PreconditionViolated, "tolerances must be positive");
    }
    if (s.newton_max_iter < 1 || s.outer_max_iter < 1) {
        throw Error(Errc::PreconditionViolated, "iteration caps must be positive");
    }
}

ObstacleProblem make_obstacle_problem(const AssembledForm& form, const Field& f, const Field& psi) {
    ObstacleProblem p;
    p.form = form;
    p.f = f;
    const Mesh& mesh = *form.mesh;
    p.psi.resize(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        double v = psi(mesh.point(n));
        if (!mesh.is_free(n) && v > 0.0) {
            v = 0.0;
            p.clamped_on_gamma1 = true;
        }
        p.psi[n] = v;
    }
    p.rhs = load_vector(f, mesh, form.params, form.consts);
    return p;
}

Eigen::VectorXd free_obstacle(const ObstacleProblem& problem) {
    const Mesh& mesh = *problem.form.mesh;
    Eigen::VectorXd out(mesh.free_count());
    for (int k = 0; k < mesh.free_count(); ++k) out[k] = problem.psi[mesh.free_nodes[k]];
    return out;
}

Eigen::VectorXd problem_rhs(const ObstacleProblem& problem) { return problem.rhs; }

PenalizedResult solve_penalized(const ObstacleProblem& problem, double eps,
                                const std::optional<Eigen::VectorXd>& warm_start,
                                const PenaltySchedule& schedule) {
    if (!(eps > 0.0)) throw Error(Errc::PreconditionViolated, "eps must be positive");
    const AssembledForm& form = problem.form;
    const Eigen::VectorXd psi = free_obstacle(problem);
    const Eigen::VectorXd& m = form.lumped_mass;
    const Eigen::Index n = psi.size();
    const ColMatrix M = form.matrix;
    const double lambda = form.lambda;

    PenalizedResult res;
    res.u = warm_start ? *warm_start : psi.cwiseMax(0.0);
    if (res.u.size() != n) throw Error(Errc::PreconditionViolated, "warm start has the wrong length");
    Eigen::VectorXd u_outer = res.u;
    const int outer_cap = lambda > 0.0 ? schedule.outer_max_iter : 1;
    for (int outer = 0; outer < outer_cap; ++outer) {
        ++res.outer_iterations;
        Eigen::VectorXd b = problem.rhs;
        if (lambda > 0.0) b += lambda * (form.w * u_outer);
        std::vector<char> active(n);
        for (Eigen::Index i = 0; i < n; ++i) active[i] = res.u[i] < psi[i];
        bool done = false;
        for (int it = 0; it < schedule.newton_max_iter; ++it) {
            ++res.iterations;
            ColMatrix J = M;
            Eigen::VectorXd rhs = b;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (active[i]) {
                    J.coeffRef(i, i) += m[i] / eps;
                    rhs[i] += m[i] * psi[i] / eps;
                }
            }
            Eigen::VectorXd next;
            if (!factor_solve(J, rhs, next)) throw Error(Errc::SingularJacobian, "active-set Jacobian is singular");
            bool same = true;
            for (Eigen::Index i = 0; i < n; ++i) {
                const char a = next[i] < psi[i];
                if (a != active[i]) same = false;
                active[i] = a;
            }
            const double step = (next - res.u).lpNorm<Eigen::Infinity>();
            res.u = next;
            // A repeated active set makes the last linear solve exact.
            if (same || step <= schedule.newton_tol * (1.0 + res.u.lpNorm<Eigen::Infinity>())) {
                done = true;
                break;
            }
        }
        if (!done) throw Error(Errc::NewtonDivergence, "semismooth Newton hit its iteration cap");
        if (lambda <= 0.0) break;
        const double change = (res.u - u_outer).lpNorm<Eigen::Infinity>();
        u_outer = res.u;
        if (change <= schedule.fixed_point_tol * (1.0 + res.u.lpNorm<Eigen::Infinity>())) break;
    }
    return res;
}

ViResult solve_vi(const ObstacleProblem& problem, const PenaltySchedule& schedule) {
    validate(schedule);
    const auto start = std::chrono::steady_clock::now();
    const Eigen::VectorXd psi = free_obstacle(problem);
    const AssembledForm& form = problem.form;
    SolveReport report;
    report.eps0 = schedule.eps0;
    report.lambda = form.lambda;
    std::optional<Eigen::VectorXd> u;
    double eps = schedule.eps0;
    while (true) {
        const PenalizedResult step = solve_penalized(problem, eps, u, schedule);
        u = step.u;
        EpsStep rec;
        rec.eps = eps;
        rec.newton_iters = step.iterations;
        rec.gap_negative = max_positive(psi - step.u);
        rec.penalty_sup = rec.gap_negative / eps;
        report.path.push_back(rec);
        report.outer_iterations += step.outer_iterations;
        report.final_eps = eps;
        report.gap_negative = rec.gap_negative;
        report.penalty_sup = rec.penalty_sup;
        if (rec.gap_negative < schedule.outer_tol) {
            report.converged = true;
            break;
        }
        const double next = eps * schedule.shrink;
        if (next < schedule.eps_min * (1.0 - 1e-12)) break;
        eps = next;
    }

    Eigen::VectorXd b = problem.rhs;
    if (form.lambda > 0.0) b += form.lambda * (form.w * *u);
    const Eigen::VectorXd resid = form.matrix * *u - b;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double ri = resid[i] / form.lumped_mass[i];
        const double gi = (*u)[i] - psi[i];
        report.complementarity = std::max(report.complementarity, std::abs(std::min(ri, gi)));
        if ((*u)[i] < psi[i]) ++report.active_count;
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ViResult out{GridFunction::from_free(form.mesh, *u), report};
    if (!report.converged) throw ScheduleExhausted(std::move(out));
    return out;
}

Eigen::VectorXd psor_oracle(const SparseMatrix& M, const Eigen::VectorXd& b, const Eigen::VectorXd& psi,
                            double omega, double tol, int max_iter) {
    if (!(omega > 0.0 && omega < 2.0)) throw Error(Errc::PreconditionViolated, "omega must lie in (0, 2)");
    const Eigen::Index n = M.rows();
    if (M.cols() != n || b.size() != n || psi.size() != n) {
        throw Error(Errc::PreconditionViolated, "dimension mismatch");
    }
    Eigen::VectorXd diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        diag[i] = M.coeff(i, i);
        if (!(diag[i] > 0.0)) throw Error(Errc::PreconditionViolated, "PSOR needs a positive diagonal");
    }
    Eigen::VectorXd u = psi.cwiseMax(0.0);
    for (int it = 0; it < max_iter; ++it) {
        double delta = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = b[i];
            for (SparseMatrix::InnerIterator e(M, i); e; ++e) {
                if (e.col() != i) s -= e.value() * u[e.col()];
            }
            const double next = std::max(psi[i], (1.0 - omega) * u[i] + omega * s / diag[i]);
            delta = std::max(delta, std::abs(next - u[i]));
            u[i] = next;
        }
        if (delta < tol) return u;
    }
    throw Error(Errc::NotConverged, "PSOR hit its iteration cap");
}

double Payoff::operator()(Point z) const {
    switch (kind) {
    case PayoffKind::Put: return std::max(strike - std::exp(z.x), 0.0);
    case PayoffKind::Call: return std::max(std::exp(z.x) - strike, 0.0);
    case PayoffKind::Custom:
        if (!custom) throw Error(Errc::PreconditionViolated, "custom payoff needs a field");
        return custom(z);
    }
    return 0.0;
}

AmericanResult perpetual_american(const HalfPlaneDomain& strip, const HestonParams& params, const Payoff& payoff,
                                  const AmericanOptions& opts) {
    const DerivedConstants consts = derive_constants(params);
    auto mesh = build_mesh(strip, opts.nx, opts.ny, opts.grading);
    AssembledForm form = assemble(params, consts, mesh, 0.0);
    const double lambda = coercivity_shift(form);
    if (lambda > 0.0) form = form.shifted(lambda);
    const Field f = opts.f ? opts.f : Field([](Point) { return 0.0; });
    const ObstacleProblem problem = make_obstacle_problem(form, f, [&](Point z) { return payoff(z); });
    ViResult vi = solve_vi(problem, opts.schedule);

    AmericanResult out{vi.u, GridFunction(mesh, problem.psi), {}, vi.report, lambda};
    for (int j = 0; j <= mesh->ny; ++j) {
        double edge = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i <= mesh->nx; ++i) {
            const int n = mesh->node(i, j);
            if (!mesh->is_free(n)) continue;
            if (vi.u[n] - problem.psi[n] < opts.contact_tol && problem.psi[n] > 0.0) {
                const double x = mesh->xs[i];
                if (payoff.kind == PayoffKind::Call) {
                    if (std::isnan(edge) || x < edge) edge = x;
                } else if (std::isnan(edge) || x > edge) {
                    edge = x;
                }
            }
        }
        out.exercise_boundary.push_back({edge, mesh->ys[j]});
    }
    return out;
}

}  // namespace degenvi
