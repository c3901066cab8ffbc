#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vem/mesh.hpp"
#include "vem/poly.hpp"

namespace vem {

class SpaceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// p1: order parameter of the PDE (2*p1-th order operator), p2: regularity
/// (the global space is C^{p2-1}), r: polynomial degree.
struct SpaceParams {
    int p1 = 1;
    int p2 = 1;
    int r = 2;

    void validate() const;
    bool operator==(const SpaceParams&) const = default;
};

/// Dofs-tuple ((d^v_0..d^v_k), (d^e_0..d^e_k), d^i_0) with k = p2 - 1, plus
/// the degree alpha_j of the trace of the j-th normal derivative on an edge.
struct DofsTuple {
    SpaceParams params;
    std::vector<int> vertex;
    std::vector<int> edge;
    int interior = -1;
    std::vector<int> trace_degree;

    int vertex_dofs() const;          ///< per vertex
    int edge_dofs(int j) const;       ///< per edge for normal-derivative order j
    int edge_dofs() const;            ///< per edge, all orders
    int interior_dofs() const;        ///< per element
};

DofsTuple dofs_tuple(const SpaceParams& params);

enum class DofKind { VertexDeriv, EdgeMoment, InteriorMoment };

/// One local degree of freedom.
///  VertexDeriv:    h_v^{|nu|} D^nu v(vertex)
///  EdgeMoment:     h_e^{-1+j} int_e q_m d^j_n v ds, q_m shifted Legendre along the
///                  global edge orientation, n the element's outward normal
///  InteriorMoment: h_P^{-2} int_P m_beta v
struct DofDescriptor {
    DofKind kind = DofKind::VertexDeriv;
    int entity = 0; ///< position in the element's vertex (or edge) loop
    MultiIndex nu;  ///< derivative (VertexDeriv) or moment exponent beta (InteriorMoment)
    int j = 0;      ///< normal-derivative order (EdgeMoment)
    int m = 0;      ///< moment degree (EdgeMoment)
};

/// Ordered local DOFs: vertex derivatives (loop order, then graded-lex nu),
/// edge moments (loop order, then j, then m), interior moments (graded-lex).
struct LocalLayout {
    std::vector<DofDescriptor> dofs;
    int n_vertices = 0;
    int vertex_block = 0; ///< DOFs per vertex
    int edge_block = 0;   ///< DOFs per edge

    int size() const { return static_cast<int>(dofs.size()); }
    int vertex_dof(int vertex, int nu_position) const { return vertex * vertex_block + nu_position; }
    int edge_offset(int edge) const { return n_vertices * vertex_block + edge * edge_block; }
    int interior_offset() const { return n_vertices * (vertex_block + edge_block); }
};

LocalLayout local_layout(int n_vertices, const DofsTuple& tuple);
LocalLayout local_layout(const Element& element, const DofsTuple& tuple);

/// Geometry of one element as seen by the local VEM computations.
struct LocalElement {
    std::vector<Point> vertices;   ///< CCW loop
    std::vector<double> h_v;       ///< per loop vertex
    std::vector<int> edge_sign;    ///< +1 if loop direction matches global edge orientation
    Point centroid;
    double diameter = 0.0;
    double area = 0.0;

    int size() const { return static_cast<int>(vertices.size()); }
    Point edge_start(int k) const { return vertices[k]; }
    Point edge_end(int k) const { return vertices[(k + 1) % size()]; }
    double edge_length(int k) const { return (edge_end(k) - edge_start(k)).norm(); }
    Point edge_tangent(int k) const { return (edge_end(k) - edge_start(k)).normalized(); }
    Point outward_normal(int k) const
    {
        const Point t = edge_tangent(k);
        return {t.y(), -t.x()};
    }
    /// Global edge parameter for the local parameter t (0 at edge_start).
    double global_parameter(int k, double t) const { return edge_sign[k] > 0 ? t : 1.0 - t; }
    ScaledMonomials basis(int r) const { return {centroid, diameter, r}; }
};

LocalElement local_element(const Mesh& mesh, const MeshMetrics& metrics, int element);
/// Stand-alone element: h_v is set to the polygon diameter, all edges positively oriented.
LocalElement local_element(const std::vector<Point>& loop);

/// Coefficients of the trace of d^j_n v on local edge k in powers of the local
/// parameter t in [0,1] (t = 0 at the edge start), as a linear map of the
/// local DOF vector: rows = trace_degree[j] + 1, cols = layout.size().
Eigen::MatrixXd edge_trace_matrix(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                                  int edge, int j);

/// Polynomial in one variable, coefficients of t^k.
struct EdgePolynomial {
    Eigen::VectorXd coeffs;
    double operator()(double t) const;
};

EdgePolynomial edge_trace(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple, int edge,
                          int j, const Eigen::VectorXd& dofs);

/// D_{ia} = DOF_i(m_a) for the given basis; integrals use exactness `order`.
Eigen::MatrixXd dof_matrix(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const ScaledMonomials& basis, int order);

/// Local DOF values of a smooth field on one element.
Eigen::VectorXd local_dofs(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const SmoothField& field);

/// Local DOF values of the polynomial sum c_a m_a (same as D * c).
Eigen::VectorXd local_dofs(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const Eigen::VectorXd& coeffs);

/// Global numbering: all vertex DOFs (vertex id, graded-lex nu), then edge DOFs
/// (edge id, j, m), then interior DOFs (element id, graded-lex beta).
/// Global edge moments use the global edge normal; `sign` converts global to
/// local values (local = sign * global).
struct GlobalDofMap {
    std::vector<std::vector<int>> local_to_global;
    std::vector<std::vector<double>> sign;
    int n_dofs = 0;
    int vertex_block = 0;
    int edge_block = 0;
    int interior_block = 0;
    int edge_base = 0;
    int interior_base = 0;

    int vertex_dof(int vertex, int nu_position) const { return vertex * vertex_block + nu_position; }
    int edge_dof(int edge, int offset) const { return edge_base + edge * edge_block + offset; }
    int interior_dof(int element, int offset) const { return interior_base + element * interior_block + offset; }

    Eigen::VectorXd gather(int element, const Eigen::VectorXd& global) const;
};

GlobalDofMap global_numbering(const Mesh& mesh, const DofsTuple& tuple);

/// Global DOF vector of a smooth field (interpolation onto the virtual space).
Eigen::VectorXd interpolate(const Mesh& mesh, const MeshMetrics& metrics, const DofsTuple& tuple,
                            const GlobalDofMap& map, const SmoothField& field);

} // namespace vem
