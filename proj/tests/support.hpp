#pragma once

#include <Eigen/SparseCholesky>

#include "vem/analysis.hpp"

namespace vem::test {

/// Degree-r polynomial with all coefficients nonzero.
inline Polynomial2D full_polynomial(int r)
{
    Polynomial2D p(r);
    for (const MultiIndex& nu : multi_indices(r)) p.coeff(nu.x, nu.y) = 0.5 + 0.25 * nu.x - 0.375 * nu.y + 0.125 * nu.x * nu.y;
    return p;
}

inline Eigen::VectorXd direct_solve(const LinearSystem& sys)
{
    const Eigen::SparseMatrix<double> A = sys.A;
    const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    return sys.expand(ldlt.solve(sys.b));
}

/// Energy error of the discrete solution for the manufactured polynomial u,
/// with boundary data interpolated from u.
inline double patch_energy_error(const Mesh& mesh, const SpaceParams& params, const StabConfig& stab,
                                 const Polynomial2D& u)
{
    const Discretization disc = discretize(mesh, params);
    const ExactSolution exact = ExactSolution::from_polynomial(u, params.p1);
    AssemblyOptions options;
    options.stab = stab;
    const LinearSystem sys = assemble(disc, exact.load(), exact.field(), options);
    return compute_errors(disc, direct_solve(sys), exact.field()).energy;
}

} // namespace vem::test
