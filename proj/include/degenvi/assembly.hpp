#pragma once

#include "degenvi/grid_function.hpp"
#include "degenvi/model.hpp"

#include <Eigen/Sparse>
#include <string>

namespace degenvi {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Discrete bilinear form over bilinear nodal elements. Rows index test
/// functions, columns trial functions. Γ1 and exterior nodes are
/// eliminated, Γ0 nodes are unknowns.
struct AssembledForm {
    std::shared_ptr<const Mesh> mesh;
    HestonParams params;
    DerivedConstants consts;
    double lambda = 0.0;
    SparseMatrix matrix;   ///< M(lambda) = m0 + lambda w on the unknowns
    SparseMatrix m0;       ///< a(phi_j, phi_i) on the unknowns
    SparseMatrix w;        ///< ((1 + y) phi_j, phi_i)_w on the unknowns
    SparseMatrix a_full;   ///< a(phi_j, phi_i) over all nodes
    Eigen::VectorXd lumped_mass;  ///< int phi_i w on the unknowns

    /// Same form with a different shift; no reassembly.
    AssembledForm shifted(double new_lambda) const;
};

struct AssemblyOptions {
    int points = 6;  ///< Gauss points per direction per cell piece
};

AssembledForm assemble(const HestonParams& params, const DerivedConstants& consts,
                       std::shared_ptr<const Mesh> mesh, double lambda,
                       const AssemblyOptions& opts = {});

/// Whether the symmetric part of M(lambda) admits a Cholesky factorization.
bool symmetric_part_positive_definite(const AssembledForm& form, double lambda);

/// Smallest lambda in {0, 1, 2, 4, ..., 2^16} with a positive definite
/// symmetric part; NotFound otherwise.
double coercivity_shift(const AssembledForm& form);

/// (f, phi_i)_{L^2(w)} over the unknowns.
Eigen::VectorXd load_vector(const Field& f, const Mesh& mesh, const HestonParams& params,
                            const DerivedConstants& consts, const AssemblyOptions& opts = {});

/// Nodal values of A u from finite differences at every node.
GridFunction apply_operator(const HestonParams& params, const DerivedConstants& consts,
                            const GridFunction& u);

/// Coordinate-format Matrix Market text.
void write_matrix_market(const SparseMatrix& m, const std::string& path);

}  // namespace degenvi
