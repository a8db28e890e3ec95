#include "degenvi/grid_function.hpp"

#include <array>
#include <cmath>

namespace degenvi {

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != mesh_->node_count()) {
        throw Error(Errc::PreconditionViolated, "value count must equal node count");
    }
    for (double v : values_) {
        if (std::isnan(v)) throw Error(Errc::PreconditionViolated, "grid function values must not be NaN");
    }
}

GridFunction GridFunction::sample(std::shared_ptr<const Mesh> mesh, const Field& f) {
    std::vector<double> v(mesh->node_count());
    for (int n = 0; n < mesh->node_count(); ++n) v[n] = f(mesh->point(n));
    return GridFunction(std::move(mesh), std::move(v));
}

GridFunction GridFunction::from_free(std::shared_ptr<const Mesh> mesh, const Eigen::VectorXd& free_values) {
    if (free_values.size() != mesh->free_count()) {
        throw Error(Errc::PreconditionViolated, "vector length must equal the unknown count");
    }
    std::vector<double> v(mesh->node_count(), 0.0);
    for (int k = 0; k < mesh->free_count(); ++k) v[mesh->free_nodes[k]] = free_values[k];
    return GridFunction(std::move(mesh), std::move(v));
}

Eigen::VectorXd GridFunction::free_values() const {
    Eigen::VectorXd out(mesh_->free_count());
    for (int k = 0; k < mesh_->free_count(); ++k) out[k] = values_[mesh_->free_nodes[k]];
    return out;
}

double GridFunction::value_in_cell(int i, int j, Point z) const {
    const Mesh& m = *mesh_;
    const double hx = m.xs[i + 1] - m.xs[i], hy = m.ys[j + 1] - m.ys[j];
    const double s = (z.x - m.xs[i]) / hx, t = (z.y - m.ys[j]) / hy;
    const double u00 = values_[m.node(i, j)], u10 = values_[m.node(i + 1, j)];
    const double u01 = values_[m.node(i, j + 1)], u11 = values_[m.node(i + 1, j + 1)];
    return (1 - s) * (1 - t) * u00 + s * (1 - t) * u10 + (1 - s) * t * u01 + s * t * u11;
}

Point GridFunction::gradient_in_cell(int i, int j, Point z) const {
    const Mesh& m = *mesh_;
    const double hx = m.xs[i + 1] - m.xs[i], hy = m.ys[j + 1] - m.ys[j];
    const double s = (z.x - m.xs[i]) / hx, t = (z.y - m.ys[j]) / hy;
    const double u00 = values_[m.node(i, j)], u10 = values_[m.node(i + 1, j)];
    const double u01 = values_[m.node(i, j + 1)], u11 = values_[m.node(i + 1, j + 1)];
    return {((1 - t) * (u10 - u00) + t * (u11 - u01)) / hx, ((1 - s) * (u01 - u00) + s * (u11 - u10)) / hy};
}

double GridFunction::value(Point z) const {
    const auto [i, j] = mesh_->locate(z);
    return value_in_cell(i, j, z);
}

Point GridFunction::gradient(Point z) const {
    const auto [i, j] = mesh_->locate(z);
    return gradient_in_cell(i, j, z);
}

namespace {

struct Stencil {
    std::array<int, 3> index{};
    std::array<double, 3> d1{};
    std::array<double, 3> d2{};
};

// Lagrange derivative weights at t of the quadratic through three nodes.
Stencil stencil(const std::vector<double>& grid, int k) {
    const int last = static_cast<int>(grid.size()) - 1;
    const int first = std::clamp(k - 1, 0, last - 2);
    Stencil s;
    const double t = grid[k];
    for (int a = 0; a < 3; ++a) s.index[a] = first + a;
    for (int a = 0; a < 3; ++a) {
        const double xa = grid[s.index[a]];
        const double xb = grid[s.index[(a + 1) % 3]];
        const double xc = grid[s.index[(a + 2) % 3]];
        const double denom = (xa - xb) * (xa - xc);
        s.d1[a] = ((t - xb) + (t - xc)) / denom;
        s.d2[a] = 2.0 / denom;
    }
    return s;
}

}  // namespace

NodalDerivatives nodal_derivatives(const GridFunction& u, int node) {
    const Mesh& m = u.mesh();
    if (m.nx < 2 || m.ny < 2) throw Error(Errc::MeshTooCoarse, "finite differences need three nodes per direction");
    const int i = m.column(node), j = m.row(node);
    const Stencil sx = stencil(m.xs, i);
    const Stencil sy = stencil(m.ys, j);
    NodalDerivatives d;
    for (int a = 0; a < 3; ++a) {
        const double vx = u[m.node(sx.index[a], j)];
        const double vy = u[m.node(i, sy.index[a])];
        d.ux += sx.d1[a] * vx;
        d.uxx += sx.d2[a] * vx;
        d.uy += sy.d1[a] * vy;
        d.uyy += sy.d2[a] * vy;
        for (int b = 0; b < 3; ++b) d.uxy += sx.d1[a] * sy.d1[b] * u[m.node(sx.index[a], sy.index[b])];
    }
    return d;
}

void cell_points(const Mesh& mesh, const Cell& cell, double a, const CellQuadrature& opts,
                 const Region* restrict, const std::function<void(double, double, double)>& visit) {
    const double x0 = mesh.xs[cell.i], x1 = mesh.xs[cell.i + 1];
    const double y0 = mesh.ys[cell.j], y1 = mesh.ys[cell.j + 1];
    RegionQuadrature q;
    q.points = opts.points;
    q.x_breaks = opts.x_breaks;
    if (restrict != nullptr) {
        if (restrict->y_hi <= y0 || restrict->y_lo >= y1) return;
        q.y_subdivisions = opts.cut_subdivisions;
        for_each_point(intersect(box_region(mesh.domain, x0, x1, y0, y1), *restrict), a, q, visit);
        return;
    }
    if (!cell.cut) {
        q.y_subdivisions = opts.subdivisions;
        Region box;
        box.y_lo = y0;
        box.y_hi = y1;
        box.slices = [x0, x1](double) { return Slices{{x0, x1}}; };
        for_each_point(box, a, q, visit);
        return;
    }
    q.y_subdivisions = opts.cut_subdivisions;
    for_each_point(box_region(mesh.domain, x0, x1, y0, y1), a, q, visit);
}

void mesh_points(const Mesh& mesh, double a, const CellQuadrature& opts, const Region* restrict,
                 const std::function<void(const Cell&, double, double, double)>& visit) {
    for (const Cell& cell : mesh.cells) {
        cell_points(mesh, cell, a, opts, restrict, [&](double x, double y, double w) { visit(cell, x, y, w); });
    }
}

}  // namespace degenvi
