#pragma once

#include <cstddef>
#include <vector>

namespace degenvi {

/// Nodes and weights of a one-dimensional rule.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1].
const Rule1D& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule for  int_0^1 s^a g(s) ds ; exact for
/// polynomials g of degree <= 2n - 1. Requires a > -1.
Rule1D gauss_jacobi_unit(int n, double a);

/// Rule for  int_{y0}^{y1} y^a g(y) dy  with 0 <= y0 < y1 whose weights
/// already include y^a. Polynomial g of degree <= 2n - 1 is integrated
/// to rounding:
///  - y0 == 0: scaled Gauss-Jacobi;
///  - y0 > 0: geometric pieces of ratio <= 1.5, each with an (n + 3)-point
///    Gauss-Legendre rule absorbing the analytic factor y^a.
/// All nodes lie inside (y0, y1).
Rule1D weighted_y_rule(double y0, double y1, double a, int n);

/// Gauss-Legendre rule mapped to [x0, x1].
Rule1D mapped_legendre(double x0, double x1, int n);

/// Closed form of  int_{y0}^{y1} y^(a + k) dy.
double monomial_moment(double y0, double y1, double a, int k);

}  // namespace degenvi
