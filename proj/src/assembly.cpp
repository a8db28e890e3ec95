#include "degenvi/assembly.hpp"

#include "degenvi/parallel.hpp"

#include <Eigen/SparseCholesky>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace degenvi {

namespace {

struct LocalBlock {
    std::array<int, 4> nodes{};
    std::array<std::array<double, 4>, 4> a{};
    std::array<std::array<double, 4>, 4> w{};
    std::array<double, 4> lumped{};
};

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Bilinear basis on a cell, local order (i,j), (i+1,j), (i,j+1), (i+1,j+1).
struct Basis {
    std::array<double, 4> v;
    std::array<double, 4> dx;
    std::array<double, 4> dy;
};

Basis basis(double s, double t, double hx, double hy) {
    Basis b;
    b.v = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
    b.dx = {-(1 - t) / hx, (1 - t) / hx, -t / hx, t / hx};
    b.dy = {-(1 - s) / hy, -s / hy, (1 - s) / hy, s / hy};
    return b;
}

CellQuadrature cell_rule(const AssemblyOptions& opts) {
    CellQuadrature q;
    q.points = opts.points;
    q.x_breaks = {0.0};
    return q;
}

LocalBlock local_block(const Mesh& mesh, const Cell& cell, const HestonParams& p, const DerivedConstants& c,
                       const CellQuadrature& q) {
    LocalBlock blk;
    const int i = cell.i, j = cell.j;
    blk.nodes = {mesh.node(i, j), mesh.node(i + 1, j), mesh.node(i, j + 1), mesh.node(i + 1, j + 1)};
    const double x0 = mesh.xs[i], y0 = mesh.ys[j];
    const double hx = mesh.xs[i + 1] - x0, hy = mesh.ys[j + 1] - y0;
    const double rs = p.rho * p.sigma, s2 = p.sigma * p.sigma;
    cell_points(mesh, cell, c.beta - 1.0, q, nullptr, [&](double x, double y, double wq) {
        const double w = wq * weight_exponential(p, c, {x, y});
        const Basis b = basis((x - x0) / hx, (y - y0) / hy, hx, hy);
        const double drift = c.a1 * y + c.b1;
        const double gam = 0.5 * p.gamma * sign(x) * y;
        for (int a = 0; a < 4; ++a) {
            blk.lumped[a] += b.v[a] * w;
            for (int k = 0; k < 4; ++k) {
                const double diff = 0.5 * y * (b.dx[k] * b.dx[a] + rs * b.dy[k] * b.dx[a] +
                                               rs * b.dx[k] * b.dy[a] + s2 * b.dy[k] * b.dy[a]);
                const double first = -gam * (b.dx[k] + rs * b.dy[k]) * b.v[a] - drift * b.dx[k] * b.v[a];
                blk.a[a][k] += (diff + first + p.r * b.v[k] * b.v[a]) * w;
                blk.w[a][k] += (1.0 + y) * b.v[k] * b.v[a] * w;
            }
        }
    });
    for (const auto& row : blk.a) {
        for (double v : row) {
            if (!std::isfinite(v)) throw Error(Errc::QuadratureFailure, "non-finite cell integral");
        }
    }
    return blk;
}

}  // namespace

AssembledForm AssembledForm::shifted(double new_lambda) const {
    if (!(new_lambda >= 0.0)) throw Error(Errc::PreconditionViolated, "lambda must be >= 0");
    AssembledForm out = *this;
    out.lambda = new_lambda;
    out.matrix = m0 + new_lambda * w;
    return out;
}

AssembledForm assemble(const HestonParams& params, const DerivedConstants& consts,
                       std::shared_ptr<const Mesh> mesh, double lambda, const AssemblyOptions& opts) {
    if (!(lambda >= 0.0)) throw Error(Errc::PreconditionViolated, "lambda must be >= 0");
    const CellQuadrature q = cell_rule(opts);
    std::vector<LocalBlock> blocks(mesh->cells.size());
    parallel_for(blocks.size(), [&](std::size_t k) {
        blocks[k] = local_block(*mesh, mesh->cells[k], params, consts, q);
    });

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> full, free_a, free_w;
    Eigen::VectorXd lumped = Eigen::VectorXd::Zero(mesh->free_count());
    for (const LocalBlock& blk : blocks) {
        for (int a = 0; a < 4; ++a) {
            const int fa = mesh->free_index[blk.nodes[a]];
            if (fa >= 0) lumped[fa] += blk.lumped[a];
            for (int k = 0; k < 4; ++k) {
                full.emplace_back(blk.nodes[a], blk.nodes[k], blk.a[a][k]);
                const int fk = mesh->free_index[blk.nodes[k]];
                if (fa >= 0 && fk >= 0) {
                    free_a.emplace_back(fa, fk, blk.a[a][k]);
                    free_w.emplace_back(fa, fk, blk.w[a][k]);
                }
            }
        }
    }
    AssembledForm form;
    form.mesh = mesh;
    form.params = params;
    form.consts = consts;
    form.lambda = lambda;
    const int n = mesh->free_count();
    form.a_full.resize(mesh->node_count(), mesh->node_count());
    form.a_full.setFromTriplets(full.begin(), full.end());
    form.m0.resize(n, n);
    form.m0.setFromTriplets(free_a.begin(), free_a.end());
    form.w.resize(n, n);
    form.w.setFromTriplets(free_w.begin(), free_w.end());
    form.matrix = form.m0 + lambda * form.w;
    form.lumped_mass = lumped;
    return form;
}

bool symmetric_part_positive_definite(const AssembledForm& form, double lambda) {
    const Eigen::SparseMatrix<double> m = form.m0 + lambda * form.w;
    const Eigen::SparseMatrix<double> mt = m.transpose();
    const Eigen::SparseMatrix<double> sym = 0.5 * (m + mt);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sym);
    return llt.info() == Eigen::Success;
}

double coercivity_shift(const AssembledForm& form) {
    if (symmetric_part_positive_definite(form, 0.0)) return 0.0;
    for (int k = 0; k <= 16; ++k) {
        const double lambda = std::ldexp(1.0, k);
        if (symmetric_part_positive_definite(form, lambda)) return lambda;
    }
    throw Error(Errc::NotFound, "no lambda <= 2^16 makes the symmetric part positive definite");
}

Eigen::VectorXd load_vector(const Field& f, const Mesh& mesh, const HestonParams& params,
                            const DerivedConstants& consts, const AssemblyOptions& opts) {
    const CellQuadrature q = cell_rule(opts);
    std::vector<std::array<double, 4>> local(mesh.cells.size());
    parallel_for(mesh.cells.size(), [&](std::size_t k) {
        const Cell& cell = mesh.cells[k];
        const double x0 = mesh.xs[cell.i], y0 = mesh.ys[cell.j];
        const double hx = mesh.xs[cell.i + 1] - x0, hy = mesh.ys[cell.j + 1] - y0;
        std::array<double, 4> acc{};
        cell_points(mesh, cell, consts.beta - 1.0, q, nullptr, [&](double x, double y, double wq) {
            const double w = wq * weight_exponential(params, consts, {x, y}) * f({x, y});
            const Basis b = basis((x - x0) / hx, (y - y0) / hy, hx, hy);
            for (int a = 0; a < 4; ++a) acc[a] += b.v[a] * w;
        });
        local[k] = acc;
    });
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.free_count());
    for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
        const Cell& cell = mesh.cells[k];
        const std::array<int, 4> nodes{mesh.node(cell.i, cell.j), mesh.node(cell.i + 1, cell.j),
                                       mesh.node(cell.i, cell.j + 1), mesh.node(cell.i + 1, cell.j + 1)};
        for (int a = 0; a < 4; ++a) {
            const int fa = mesh.free_index[nodes[a]];
            if (fa >= 0) out[fa] += local[k][a];
        }
    }
    return out;
}

GridFunction apply_operator(const HestonParams& p, const DerivedConstants&, const GridFunction& u) {
    const Mesh& m = u.mesh();
    if (m.nx < 2 || m.ny < 2) throw Error(Errc::MeshTooCoarse, "operator needs three nodes per direction");
    std::vector<double> out(m.node_count());
    for (int n = 0; n < m.node_count(); ++n) {
        const Point z = m.point(n);
        const NodalDerivatives d = nodal_derivatives(u, n);
        out[n] = -0.5 * z.y * (d.uxx + 2.0 * p.rho * p.sigma * d.uxy + p.sigma * p.sigma * d.uyy) -
                 (p.r - p.q - 0.5 * z.y) * d.ux - p.kappa * (p.theta - z.y) * d.uy + p.r * u[n];
    }
    return GridFunction(u.mesh_ptr(), std::move(out));
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(Errc::IoError, "cannot open " + path);
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    os << std::setprecision(17);
    for (int r = 0; r < m.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
        }
    }
    if (!os) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace degenvi
