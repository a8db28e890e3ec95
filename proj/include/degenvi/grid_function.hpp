#pragma once

#include "degenvi/mesh.hpp"

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace degenvi {

using Field = std::function<double(Point)>;

/// Nodal values over a Mesh with the bilinear interpolant on each cell.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values);
    /// Samples `f` at every node.
    static GridFunction sample(std::shared_ptr<const Mesh> mesh, const Field& f);
    /// Values of the unknowns, 0 on eliminated nodes.
    static GridFunction from_free(std::shared_ptr<const Mesh> mesh, const Eigen::VectorXd& free_values);

    const Mesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](int node) const { return values_[node]; }
    Eigen::VectorXd free_values() const;

    double value(Point z) const;
    Point gradient(Point z) const;
    /// Interpolant restricted to cell (i, j), so that gradients on cell
    /// edges are taken from the requested side.
    double value_in_cell(int i, int j, Point z) const;
    Point gradient_in_cell(int i, int j, Point z) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    std::vector<double> values_;
};

/// First and second partial derivatives at a node from three-point
/// finite differences on the (possibly non-uniform) grid, centred inside
/// and one-sided on the grid boundary. The mixed derivative is the
/// product of the two first-derivative stencils.
struct NodalDerivatives {
    double ux = 0.0, uy = 0.0, uxx = 0.0, uxy = 0.0, uyy = 0.0;
};

NodalDerivatives nodal_derivatives(const GridFunction& u, int node);

struct CellQuadrature {
    int points = 4;            ///< Gauss points per direction and piece
    int subdivisions = 1;      ///< y-pieces on full cells
    int cut_subdivisions = 3;  ///< y-pieces on cut or restricted cells
    std::vector<double> x_breaks;
};

/// Visits quadrature points (x, y, w) of cell ∩ domain ∩ restrict, where
/// w includes the factor y^a. `restrict` may be null.
void cell_points(const Mesh& mesh, const Cell& cell, double a, const CellQuadrature& opts,
                 const Region* restrict, const std::function<void(double, double, double)>& visit);

/// Sum of cell_points over all active cells, in cell order.
void mesh_points(const Mesh& mesh, double a, const CellQuadrature& opts, const Region* restrict,
                 const std::function<void(const Cell&, double, double, double)>& visit);

}  // namespace degenvi
