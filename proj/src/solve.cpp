#include "vem/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace vem {

int sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag, double x)
{
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double e2 = i == 0 ? 0.0 : offdiag[i - 1] * offdiag[i - 1];
        q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
        if (q == 0.0) q = -std::numeric_limits<double>::min() * 1e3;
        if (q < 0.0) ++count;
    }
    return count;
}

std::pair<double, double> tridiag_extreme_eigs(const std::vector<double>& diag, const std::vector<double>& offdiag)
{
    const std::size_t n = diag.size();
    if (n == 0) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(offdiag[i - 1]);
        if (i + 1 < n) radius += std::abs(offdiag[i]);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    const double tol = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    const int total = static_cast<int>(n);
    // Smallest x whose Sturm count reaches 1 (lambda_min) or n (lambda_max).
    auto bisect = [&](auto below) {
        double a = lo, b = hi;
        for (int it = 0; it < 400 && b - a > tol; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            if (below(m)) b = m; else a = m;
        }
        return 0.5 * (a + b);
    };
    const double lmin = bisect([&](double x) { return sturm_count(diag, offdiag, x) >= 1; });
    const double lmax = bisect([&](double x) { return sturm_count(diag, offdiag, x) >= total; });
    return {lmin, lmax};
}

Eigen::VectorXd generic_start(const SparseMatrix& A, const Eigen::VectorXd& b, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N;
    Eigen::VectorXd x(b.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = N(rng);
    const double ax = (A * x).norm();
    if (ax == 0.0) return Eigen::VectorXd::Zero(b.size());
    const double target = b.norm() > 0.0 ? b.norm() : 1.0;
    return x * (target / ax);
}

CgResult cg(const SparseMatrix& A, const Eigen::VectorXd& b, const CgOptions& options)
{
    return cg(A, b, Eigen::VectorXd::Zero(b.size()), options);
}

CgResult cg(const SparseMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, const CgOptions& options)
{
    const Eigen::Index n = b.size();
    if (x0.size() != n) throw SolverError("initial guess has size " + std::to_string(x0.size()) + ", expected " + std::to_string(n));
    CgResult res;
    res.x = x0;
    CgReport& rep = res.report;
    const double bnorm = b.norm();
    if (n == 0 || bnorm == 0.0) {
        res.x.setZero();
        rep.converged = true;
        return res;
    }
    const int maxit = options.maxit > 0 ? options.maxit : static_cast<int>(50 * n);
    const int window = std::max<int>(options.stall_window, static_cast<int>(options.stall_window_per_unknown * n));

    Eigen::VectorXd r = b - A * x0, p = r, Ap(n);
    double rr = r.squaredNorm();
    std::vector<double> alphas, betas;
    // running minimum of the residual norm
    std::vector<double> best{std::sqrt(rr)};
    double rel = std::sqrt(rr) / bnorm;
    int k = 0;
    while (k < maxit) {
        Ap.noalias() = A * p;
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0))
            throw SolverError("non-positive curvature p^T A p = " + std::to_string(pAp) + " at CG iteration "
                              + std::to_string(k) + " (matrix not SPD)");
        const double alpha = rr / pAp;
        res.x.noalias() += alpha * p;
        r.noalias() -= alpha * Ap;
        const double rr_new = r.squaredNorm();
        const double beta = rr_new / rr;
        alphas.push_back(alpha);
        betas.push_back(beta);
        rr = rr_new;
        ++k;
        rel = std::sqrt(rr) / bnorm;
        best.push_back(std::min(best.back(), std::sqrt(rr)));
        if (rel <= options.tol) {
            rep.converged = true;
            break;
        }
        if (k >= window && best[k] > (1.0 - options.stall_reduction) * best[k - window]) {
            rep.stalled = true;
            break;
        }
        p = r + beta * p;
    }
    rep.iterations = k;
    rep.rel_residual = rel;
    for (int i = 0; i < k; ++i) {
        rep.diag.push_back(1.0 / alphas[i] + (i > 0 ? betas[i - 1] / alphas[i - 1] : 0.0));
        if (i + 1 < k) rep.offdiag.push_back(std::sqrt(betas[i]) / alphas[i]);
    }
    const auto [lmin, lmax] = tridiag_extreme_eigs(rep.diag, rep.offdiag);
    rep.lambda_min = lmin;
    rep.lambda_max = lmax;
    if (!rep.stalled && lmin > 0.0) rep.kappa = std::max(1.0, lmax / lmin);
    return res;
}

DenseSpectrum dense_oracle(const SparseMatrix& A)
{
    if (A.rows() > dense_oracle_limit)
        throw SolverError("dense oracle limited to n <= " + std::to_string(dense_oracle_limit) + ", got n = "
                          + std::to_string(A.rows()));
    const Eigen::MatrixXd dense = Eigen::MatrixXd(A);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    DenseSpectrum s;
    s.lambda_min = es.eigenvalues().minCoeff();
    s.lambda_max = es.eigenvalues().maxCoeff();
    s.kappa = s.lambda_max / s.lambda_min;
    return s;
}

} // namespace vem
