#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vem/assembly.hpp"

namespace vem {

/// Polynomial exact solution u with its load f = (-Lap)^{p1} u.
struct ExactSolution {
    Polynomial2D u;
    Polynomial2D f;
    int p1 = 1;

    /// u = x^2 (1-x)^2 y^2 (1-y)^2.
    static ExactSolution bubble(int p1);
    static ExactSolution from_polynomial(const Polynomial2D& u, int p1);

    SmoothField field() const { return as_field(u); }
    ScalarField load() const
    {
        return [g = f](const Point& x) { return g(x); };
    }
};

struct ErrorNorms {
    double energy = 0.0; ///< |u - Pi u_h| in the broken H^{p1} seminorm (grad or Laplacian)
    double l2 = 0.0;
    double linf = 0.0;   ///< over element quadrature points and vertices
};

/// Errors of e = u - Pi_r u_h for the global DOF vector `u_h`.
ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& u_h, const SmoothField& exact,
                          int workers = 1);

struct EocTable {
    std::vector<double> rates; ///< between consecutive levels
    double slope = 0.0;        ///< least-squares slope of log(err) against log(h)
    int used = 0;              ///< levels with positive error
};

/// Non-positive errors are skipped (with a warning on stderr).
EocTable eoc(const std::vector<double>& errors, const std::vector<double>& hs);

/// Least-squares slope of log(kappa) against log(1/h).
double growth_fit(const std::vector<double>& kappas, const std::vector<double>& one_over_h);

} // namespace vem
