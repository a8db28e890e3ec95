#pragma once

#include "degenvi/grid_function.hpp"
#include "degenvi/model.hpp"

#include <vector>

namespace degenvi {

enum class NormTag { Lq_w, L2_ybeta1, H1_w, H2_w, L2_ybeta_grad };

/// Which weighted norm to take:
///  Lq_w           (int |u|^q w)^(1/q)
///  L2_ybeta1      (int u^2 y^(beta-1))^(1/2)
///  H1_w           (int (y |Du|^2 + (1+y) u^2) w)^(1/2)
///  H2_w           (int (y^2 |D^2u|^2 + (1+y)^2 |Du|^2 + (1+y) u^2) w)^(1/2)
///  L2_ybeta_grad  (int |Du|^2 y^beta)^(1/2)
struct WeightedNormKind {
    NormTag tag = NormTag::L2_ybeta1;
    double q = 2.0;

    static WeightedNormKind lq(double q) { return {NormTag::Lq_w, q}; }
};

/// Integrates over the mesh domain, or over domain ∩ restrict when
/// given. D^2u is the bilinear interpolant of the nodal second
/// differences.
double weighted_norm(const GridFunction& u, const WeightedNormKind& kind, const HestonParams& params,
                     const DerivedConstants& consts, const Region* restrict = nullptr);

/// (int (u - exact)^2 w)^(1/2) with u interpolated at the quadrature points.
double weighted_l2_error(const GridFunction& u, const Field& exact, const HestonParams& params,
                         const DerivedConstants& consts);

/// ||u||_p^p / (||u||_2^(p-2) ||Du||^2_{y^beta}) with L^p, L^2 taken
/// against y^(beta-1) and p the Sobolev exponent.
double sobolev_ratio(const GridFunction& u, const DerivedConstants& consts);

struct PoincareEstimate {
    double value = 0.0;       ///< ||u - c*||_{y^(beta-1)} / ||Du||_{y^beta}
    double normalized = 0.0;  ///< same with both sides averaged over the ball volumes
    double mean = 0.0;        ///< c*, the y^(beta-1)-weighted mean
    bool constant = false;    ///< gradient vanished; value reported as 0
};

/// Over the ball intersected with the mesh domain. The centre must lie
/// on y = 0.
PoincareEstimate poincare_constant_estimate(const KochBall& ball, const GridFunction& u,
                                            const DerivedConstants& consts);

/// Max over probes of value and normalized, with the flag of the probe
/// attaining the value.
PoincareEstimate poincare_constant_estimate(const KochBall& ball, const std::vector<GridFunction>& probes,
                                            const DerivedConstants& consts);

/// Point of the closed ball whose value the extension copies at z. The
/// identity inside the ball; horizontal circle inversion about
/// (x0', y) below the anchor height, radial inversion about the anchor
/// above it. Anchor z0' = z0 + (R^2/100, R^2/100).
Point extension_preimage(const KochBall& ball, Point z);

/// Extension of u from the ball to the mesh domain, a rectangle
/// (a, b) x (0, c) containing the ball; BallNotContained otherwise.
/// Nodes inside the closed ball keep their values.
GridFunction extend(const GridFunction& u, const KochBall& ball);

/// Phi_p(u) = (|O|^-1 int |u|^p w)^(1/p) for each p, |O| the w-volume.
/// Negative p needs min |u| > 0 (NonPositiveFunction otherwise).
std::vector<double> phi_p_profile(const GridFunction& u, const std::vector<double>& p_list,
                                  const HestonParams& params, const DerivedConstants& consts);

}  // namespace degenvi
