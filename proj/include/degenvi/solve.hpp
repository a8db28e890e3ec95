#pragma once

#include "degenvi/assembly.hpp"

#include <optional>
#include <vector>

namespace degenvi {

/// Unknown vector of the variational equation M(lambda) u = b.
struct LinearSolve {
    Eigen::VectorXd u;
    double relative_residual = 0.0;
};

LinearSolve solve_linear(const AssembledForm& form, const Eigen::VectorXd& rhs);

/// Solves a_lambda(u, v) = (f, v)_w for all free basis v.
GridFunction solve_ve(const AssembledForm& form, const Field& f);

/// -t^- / eps.
double penalty(double t, double eps);

struct ObstacleProblem {
    AssembledForm form;  ///< carries the shift lambda
    Field f;
    std::vector<double> psi;  ///< nodal obstacle over all nodes
    Eigen::VectorXd rhs;      ///< (f, phi_i)_w over the unknowns
    /// Whether psi was clamped to min(psi, 0) on eliminated nodes.
    bool clamped_on_gamma1 = false;
};

/// Builds the problem, clamping psi^+ to 0 on eliminated nodes.
ObstacleProblem make_obstacle_problem(const AssembledForm& form, const Field& f, const Field& psi);

struct PenaltySchedule {
    double eps0 = 1.0;
    double shrink = 0.25;
    double eps_min = 1e-8;
    double newton_tol = 1e-12;
    int newton_max_iter = 100;
    double outer_tol = 1e-6;         ///< target for max (psi - u)^+
    int outer_max_iter = 50;         ///< cap on the lambda fixed point
    double fixed_point_tol = 1e-11;  ///< relative change ending the fixed point
};

void validate(const PenaltySchedule& schedule);

struct PenalizedResult {
    Eigen::VectorXd u;
    int iterations = 0;
    int outer_iterations = 0;
};

/// Semismooth Newton for the lumped penalized equation
///   M(lambda) u - m o (psi - u)^+ / eps = b + lambda W u_outer,
/// with an outer fixed point on u_outer when lambda > 0.
PenalizedResult solve_penalized(const ObstacleProblem& problem, double eps,
                                const std::optional<Eigen::VectorXd>& warm_start,
                                const PenaltySchedule& schedule = {});

struct EpsStep {
    double eps = 0.0;
    int newton_iters = 0;
    double gap_negative = 0.0;  ///< max (psi - u)^+ over unknowns
    double penalty_sup = 0.0;   ///< max |beta_eps(u - psi)| over unknowns
};

struct SolveReport {
    bool converged = false;
    double eps0 = 0.0;
    double lambda = 0.0;
    std::vector<EpsStep> path;
    double final_eps = 0.0;
    double penalty_sup = 0.0;
    double gap_negative = 0.0;
    double complementarity = 0.0;  ///< max |min(M u - b, u - psi)| / m_i scaling
    int active_count = 0;
    int outer_iterations = 0;
    double wall_seconds = 0.0;
};

struct ViResult {
    GridFunction u;
    SolveReport report;
};

/// Carries the best iterate when the schedule ends before outer_tol.
class ScheduleExhausted : public Error {
public:
    ScheduleExhausted(ViResult best)
        : Error(Errc::ScheduleExhausted, "eps schedule ended before reaching outer_tol"),
          best_(std::move(best)) {}
    const ViResult& best() const { return best_; }

private:
    ViResult best_;
};

ViResult solve_vi(const ObstacleProblem& problem, const PenaltySchedule& schedule = {});

/// Obstacle values restricted to the unknowns.
Eigen::VectorXd free_obstacle(const ObstacleProblem& problem);
/// Right side (f, phi_i)_w of the problem.
Eigen::VectorXd problem_rhs(const ObstacleProblem& problem);

/// Projected SOR for min(M u - b, u - psi) = 0.
Eigen::VectorXd psor_oracle(const SparseMatrix& M, const Eigen::VectorXd& b, const Eigen::VectorXd& psi,
                            double omega = 1.2, double tol = 1e-13, int max_iter = 200000);

enum class PayoffKind { Put, Call, Custom };

struct Payoff {
    PayoffKind kind = PayoffKind::Put;
    double strike = 1.0;
    Field custom;  ///< used for Custom, a function of (x, y) with x the log-price
    double operator()(Point z) const;
};

struct AmericanResult {
    GridFunction value;
    GridFunction payoff;  ///< nodal obstacle after clamping
    /// Per y-row, the largest x with u - psi < contact_tol in the contact
    /// set (NaN when the row has no contact).
    std::vector<Point> exercise_boundary;
    SolveReport report;
    double lambda = 0.0;
};

struct AmericanOptions {
    int nx = 64;
    int ny = 32;
    double grading = 1.0;
    double contact_tol = 1e-7;
    /// The payoff kink leaves a gap near eps_min times the penalty sup,
    /// a few 1e-6 on desk meshes, so the target is relaxed to 1e-5.
    PenaltySchedule schedule{.outer_tol = 1e-5};
    Field f;  ///< defaults to 0
};

AmericanResult perpetual_american(const HalfPlaneDomain& strip, const HestonParams& params,
                                  const Payoff& payoff, const AmericanOptions& opts = {});

}  // namespace degenvi
