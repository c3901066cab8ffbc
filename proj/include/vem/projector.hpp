#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "vem/space.hpp"

namespace vem {

/// Per-element projector data. D: DOFs of the scaled monomials, G: a^P(m_a, m_b),
/// B: a^P(v, m_a) in terms of DOF values, G~/B~: G/B with the kernel rows
/// replaced by vertex-average conditions, pi = G~^{-1} B~, Q = D pi.
struct ProjectorPack {
    Eigen::MatrixXd D;
    Eigen::MatrixXd G;
    Eigen::MatrixXd B;
    Eigen::MatrixXd G_tilde;
    Eigen::MatrixXd B_tilde;
    Eigen::MatrixXd pi;
    Eigen::MatrixXd Q;
};

Eigen::MatrixXd build_D(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple);
Eigen::MatrixXd build_G(const LocalElement& element, int r, int p1);
Eigen::MatrixXd build_B(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple);

/// Throws SpaceError when the augmented system is singular.
ProjectorPack solve_projector(Eigen::MatrixXd D, Eigen::MatrixXd G, Eigen::MatrixXd B, const LocalElement& element,
                              const LocalLayout& layout, const DofsTuple& tuple);

ProjectorPack build_projector(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple);

/// Coefficients of the L2 projection of g onto the scaled monomials of degree s.
Eigen::VectorXd l2_poly_projection(const LocalElement& element, const ScalarField& g, int s, int order);

/// int_P m_a m_b for a of degree <= rows_degree and b of degree <= cols_degree.
Eigen::MatrixXd cross_mass(const LocalElement& element, int rows_degree, int cols_degree, int order);

/// Plain-text dump of D, G, B and pi (row-major, 17 significant digits).
void write_pack(std::ostream& out, int element, const ProjectorPack& pack);

} // namespace vem
