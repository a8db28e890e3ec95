#pragma once

#include "degenvi/solve.hpp"
#include "degenvi/spaces.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace degenvi {

/// Node indices of the mesh inside the Koch ball relative to the domain
/// (closed-domain nodes with d < R).
std::vector<int> ball_nodes(const Mesh& mesh, Point center, double radius);

/// Nodal sup and inf of u over ball_nodes; EmptyBall when no node qualifies.
struct BallExtrema {
    double sup = 0.0;
    double inf = 0.0;
    int count = 0;
};

BallExtrema ball_extrema(const GridFunction& u, Point center, double radius);

/// Exponent s of the source norm: n + beta + 2 when beta > 2, otherwise
/// max{2n, n + beta} + 1.
double default_source_exponent(const DerivedConstants& consts);

struct SupremumSample {
    Point center;
    double radius = 0.0;
    double sup_abs = 0.0;
    double l2_average = 0.0;  ///< |B_2R|^(-1/2) ||u||_{L^2(B_2R)}
    double f_norm = 0.0;      ///< ||f||_{L^s(B_2R)}
    double ratio = 0.0;
};

struct SupremumReport {
    double s = 0.0;
    bool full_weight = false;
    std::vector<SupremumSample> samples;
    double max_ratio = 0.0;
};

/// Ratios sup_{B_R}|u| / (|B_2R|^(-1/2) ||u||_{L^2(B_2R)} + ||f||_{L^s(B_2R)})
/// with measure y^(beta-1) (or the full weight when full_weight is set).
/// s <= 0 selects default_source_exponent.
SupremumReport check_supremum_estimate(const GridFunction& u, const Field& f, const HestonParams& params,
                                       const DerivedConstants& consts, const std::vector<Point>& centers,
                                       const std::vector<double>& radii, double s = 0.0,
                                       bool full_weight = false);

/// a and b agree within a multiplicative factor (both zero also agrees).
bool stable_within(double a, double b, double factor);

struct OscillationFit {
    Point center;
    std::vector<double> radii;
    std::vector<double> osc;
    double alpha = 0.0;  ///< +inf when u is constant on every ball
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS of the log-log fit
    bool pass = false;
};

inline constexpr double kMinOscillationExponent = 0.05;
inline constexpr double kMaxFitResidual = 0.3;

/// Least-squares fit of log osc_{B_R} u against log R; InsufficientRadii
/// with fewer than four radii.
OscillationFit measure_oscillation_decay(const GridFunction& u, Point center, const std::vector<double>& radii);

/// sup |u(z1) - u(z2)| / d(z1, z2)^alpha over node pairs of the ball
/// (exhaustive up to 2000 nodes, else 10^6 seeded random pairs).
double holder_seminorm(const GridFunction& u, Point center, double radius, double alpha,
                       std::uint64_t seed = 1);
/// Same over an explicit node list.
double holder_seminorm(const GridFunction& u, const std::vector<int>& nodes, double alpha,
                       std::uint64_t seed = 1);

/// sup_{B_R} u / inf_{B_R} u at z0 on Γ0; +inf if the infimum vanishes.
double harnack_ratio(const GridFunction& u, Point center, double radius);

/// max over unknowns of (A psi - f)^+, A psi by finite differences.
double obstacle_defect(const ObstacleProblem& problem);

struct BoundCheck {
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;  ///< bound - measured
};

/// Every eps of the path must satisfy penalty_sup <= 2 defect + tol.
BoundCheck check_penalty_bound(const SolveReport& report, double defect, double tol);
BoundCheck check_penalty_bound(const SolveReport& report, const ObstacleProblem& problem, double tol);

/// ||u||_inf <= ||f||_inf / (lambda + r) v ||psi^+||_inf + tol over the
/// unknowns.
BoundCheck check_max_principle(const GridFunction& u, double f_sup, double psi_plus_sup, double lambda,
                               double r, double tol);
BoundCheck check_max_principle(const GridFunction& u, const ObstacleProblem& problem, double lambda,
                               double tol);

}  // namespace degenvi
