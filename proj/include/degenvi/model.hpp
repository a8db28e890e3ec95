#pragma once

#include "degenvi/errors.hpp"

namespace degenvi {

/// Point of the closed upper half-plane.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Constant coefficients of the Heston operator
///
///   A v = -(y/2)(v_xx + 2 rho sigma v_xy + sigma^2 v_yy)
///         - (r - q - y/2) v_x - kappa (theta - y) v_y + r v
///
/// plus the exponential decay rate gamma of the weight in x.
struct HestonParams {
    double sigma = 0.3;   ///< volatility of variance, nonzero
    double rho = 0.0;     ///< correlation, in (-1, 1)
    double kappa = 2.0;   ///< mean-reversion rate, > 0
    double theta = 0.09;  ///< mean-reversion level, > 0
    double r = 0.0;       ///< interest rate, >= 0
    double q = 0.0;       ///< dividend yield, >= 0
    double gamma = 0.1;   ///< weight decay in |x|, > 0
};

/// Quantities derived from HestonParams in closed form.
struct DerivedConstants {
    double beta = 0.0;  ///< 2 kappa theta / sigma^2
    double mu = 0.0;    ///< 2 kappa / sigma^2
    double a1 = 0.0;    ///< kappa rho / sigma - 1/2
    double b1 = 0.0;    ///< r - q - kappa theta rho / sigma
    double nu0 = 0.0;   ///< ellipticity modulus min{1, (1 - rho^2) sigma^2}
    double p = 0.0;     ///< Sobolev exponent 2(n + beta)/(n + beta - 1)
    int n = 2;
};

inline constexpr int kSpatialDimension = 2;

/// Throws InvalidCoefficient naming the first violated constraint.
void validate(const HestonParams& params);

DerivedConstants derive_constants(const HestonParams& params);

/// Weight y^(beta-1) exp(-gamma |x| - mu y). At y = 0 the value is 0 for
/// beta > 1 and exp(-gamma |x|) for beta == 1; for beta < 1 the weight is
/// unbounded there and DegenerateInput is thrown.
double weight(const HestonParams& params, const DerivedConstants& consts, Point z);

/// The exponential factor exp(-gamma |x| - mu y) of the weight alone.
double weight_exponential(const HestonParams& params, const DerivedConstants& consts, Point z);

/// (xi1^2 + 2 rho sigma xi1 xi2 + sigma^2 xi2^2) / 2, the principal symbol
/// divided by y.
double principal_symbol(const HestonParams& params, double xi1, double xi2);

}  // namespace degenvi
