#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CgOptions {
    double tol = 1e-12;
    int maxit = -1;            ///< -1: 50 n
    /// Stalled when the best residual improves by less than `stall_reduction`
    /// over max(stall_window, stall_window_per_unknown * n) iterations.
    int stall_window = 1000;
    double stall_window_per_unknown = 4.0;
    double stall_reduction = 1e-2;
};

struct CgReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
    bool stalled = false;        ///< stopped on stagnation; kappa is then unavailable
    std::vector<double> diag;    ///< Lanczos tridiagonal
    std::vector<double> offdiag;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::optional<double> kappa; ///< empty when unavailable
};

struct CgResult {
    Eigen::VectorXd x;
    CgReport report;
};

/// Unpreconditioned CG from x = 0. Throws SolverError on non-positive curvature.
CgResult cg(const SparseMatrix& A, const Eigen::VectorXd& b, const CgOptions& options = {});
/// CG from x0. The Lanczos estimate sees the Krylov space of b - A x0, so a
/// generic x0 exposes eigenvectors that a structured b misses.
CgResult cg(const SparseMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, const CgOptions& options = {});

/// Seeded Gaussian vector scaled so that |A x0| = |b| (or |A x0| = 1 when b = 0).
Eigen::VectorXd generic_start(const SparseMatrix& A, const Eigen::VectorXd& b, std::uint64_t seed);

/// Extreme eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.
std::pair<double, double> tridiag_extreme_eigs(const std::vector<double>& diag, const std::vector<double>& offdiag);

/// Number of eigenvalues strictly below x.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag, double x);

constexpr int dense_oracle_limit = 600;

struct DenseSpectrum {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa = 0.0;
};

/// Full eigendecomposition; throws SolverError for n > dense_oracle_limit.
DenseSpectrum dense_oracle(const SparseMatrix& A);

} // namespace vem
