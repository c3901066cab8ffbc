#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vem/mesh.hpp"

namespace vem {

/// Exponent pair (nu_x, nu_y) of a monomial or a partial derivative.
struct MultiIndex {
    int x = 0;
    int y = 0;

    constexpr int order() const { return x + y; }
    bool operator==(const MultiIndex&) const = default;
};

/// Number of monomials of total degree <= r; zero for r < 0.
constexpr int basis_dim(int r) { return r < 0 ? 0 : (r + 1) * (r + 2) / 2; }

/// Graded lexicographic position: degree blocks, within a block (d,0),(d-1,1),...,(0,d).
constexpr int multi_index_position(MultiIndex nu) { return basis_dim(nu.order() - 1) + nu.y; }

/// All multi-indices with |nu| <= r in graded lexicographic order.
std::vector<MultiIndex> multi_indices(int r);

/// All multi-indices with |nu| == d.
std::vector<MultiIndex> multi_indices_of_order(int d);

double binomial(int n, int k);
/// n! / (n-k)!
double falling_factorial(int n, int k);

/// Scaled monomials m_a(x) = ((x - c)/h)^{a_x} ((y - c_y)/h)^{a_y} of degree <= r
/// centred at an element centroid c and scaled by its diameter h.
class ScaledMonomials {
public:
    ScaledMonomials(Point center, double h, int degree)
        : center_(std::move(center)), h_(h), degree_(degree) {}

    const Point& center() const { return center_; }
    double scale() const { return h_; }
    int degree() const { return degree_; }
    int size() const { return basis_dim(degree_); }

    /// D^deriv m_a(p) for every basis function a (zero where deriv exceeds a).
    Eigen::VectorXd eval(const Point& p, MultiIndex deriv = {}) const;

    /// Value of the polynomial with the given coefficients.
    double eval(const Eigen::VectorXd& coeffs, const Point& p, MultiIndex deriv = {}) const;

private:
    Point center_;
    double h_;
    int degree_;
};

/// Coefficient map of D^nu from scaled P_r to scaled P_{r-|nu|} (same centre and scale).
Eigen::MatrixXd derivative_matrix(int r, MultiIndex nu, double h);

/// Coefficient map of the s-th power of the Laplacian, P_r -> P_{r-2s}.
Eigen::MatrixXd laplacian_power(int r, int s, double h);

/// Directional-derivative weights: (t.grad)^m (n.grad)^j = sum_nu c_nu D^nu with |nu| = m + j.
/// Returned in the order of multi_indices_of_order(m + j).
Eigen::VectorXd directional_weights(const Point& t, const Point& n, int m, int j);

/// Bivariate polynomial in global coordinates, sum c_{ij} x^i y^j.
class Polynomial2D {
public:
    Polynomial2D() = default;
    explicit Polynomial2D(int degree);

    static Polynomial2D from_terms(int degree, const std::vector<std::pair<MultiIndex, double>>& terms);
    /// (1-x)^2 x^2 (1-y)^2 y^2, the manufactured solution of the experiments.
    static Polynomial2D bubble();

    int degree() const { return degree_; }
    double& coeff(int i, int j) { return c_(i, j); }
    double coeff(int i, int j) const { return c_(i, j); }

    double operator()(const Point& p) const { return eval(p); }
    double eval(const Point& p, MultiIndex deriv = {}) const;
    Polynomial2D derivative(MultiIndex nu) const;
    Polynomial2D laplacian() const;

    Polynomial2D operator+(const Polynomial2D& o) const;
    Polynomial2D operator*(double s) const;

private:
    int degree_ = 0;
    Eigen::MatrixXd c_ = Eigen::MatrixXd::Zero(1, 1);
};

/// Field with pointwise partial derivatives of any order (as far as it is smooth).
using SmoothField = std::function<double(const Point&, MultiIndex)>;
using ScalarField = std::function<double(const Point&)>;

SmoothField as_field(const Polynomial2D& p);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureRule {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;
    int order = 0;
};

/// Gauss-Legendre nodes and weights on [0,1].
QuadratureRule gauss_legendre(int n_points);
/// Gauss rule on [0,1] exact for polynomials of degree <= order.
QuadratureRule segment_rule(int order);
/// Collapsed-coordinate Gauss rule on the reference triangle (0,0),(1,0),(0,1),
/// exact for polynomials of total degree <= order.
QuadratureRule triangle_rule(int order);

/// Physical quadrature points and weights on a polygon.
struct PhysicalQuadrature {
    std::vector<Point> points;
    std::vector<double> weights;
};

/// Fan triangulation of a loop from `center`, Gauss rule on every sub-triangle.
PhysicalQuadrature polygon_quadrature(const std::vector<Point>& loop, const Point& center, int order);
/// Gauss rule on the segment a -> b; weights include the segment length.
PhysicalQuadrature segment_quadrature(const Point& a, const Point& b, int order);

double integrate_polygon(const std::vector<Point>& loop, const Point& center, const ScalarField& f, int order);
double integrate_segment(const Point& a, const Point& b, const ScalarField& f, int order);

/// Vertex coordinates of a mesh element.
std::vector<Point> element_loop(const Mesh& mesh, int element);

double integrate_polygon(const Mesh& mesh, int element, const ScalarField& f, int order);
double integrate_edge(const Mesh& mesh, int edge, const ScalarField& f, int order);

/// H_ab = int_P m_a m_b for the scaled monomials of degree <= r.
Eigen::MatrixXd mass_matrix(const std::vector<Point>& loop, const ScaledMonomials& basis, int order);
Eigen::MatrixXd mass_matrix(const Mesh& mesh, int element, int r);

/// Shifted Legendre polynomial of degree m on [0,1].
double shifted_legendre(int m, double t);

} // namespace vem
