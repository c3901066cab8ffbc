#include "vem/space.hpp"

#include <cmath>
#include <string>

namespace vem {

void SpaceParams::validate() const
{
    if (p1 < 1 || p1 > 2) throw SpaceError("p1 must be 1 (Poisson) or 2 (biharmonic), got " + std::to_string(p1));
    if (p2 < p1) throw SpaceError("regularity p2 = " + std::to_string(p2) + " is below p1 = " + std::to_string(p1));
    if (r < p2) throw SpaceError("degree r = " + std::to_string(r) + " is below p2 = " + std::to_string(p2));
}

int DofsTuple::vertex_dofs() const { return basis_dim(params.p2 - 1); }

int DofsTuple::edge_dofs(int j) const { return std::max(0, edge[j] + 1); }

int DofsTuple::edge_dofs() const
{
    int n = 0;
    for (int j = 0; j < params.p2; ++j) n += edge_dofs(j);
    return n;
}

int DofsTuple::interior_dofs() const { return basis_dim(interior); }

DofsTuple dofs_tuple(const SpaceParams& params)
{
    params.validate();
    const int p1 = params.p1, p2 = params.p2, r = params.r;
    DofsTuple t;
    t.params = params;
    t.vertex.assign(p2, 0);
    for (int j = 0; j < p2; ++j) {
        t.edge.push_back(std::max(-1, r - 2 * p2 + j));
        t.trace_degree.push_back(std::max(2 * p2 - 1 - 2 * j, r - j));
    }
    t.interior = r - 2 * p1;
    return t;
}

LocalLayout local_layout(int n_vertices, const DofsTuple& tuple)
{
    LocalLayout l;
    l.n_vertices = n_vertices;
    l.vertex_block = tuple.vertex_dofs();
    l.edge_block = tuple.edge_dofs();
    const auto vertex_nus = multi_indices(tuple.params.p2 - 1);
    for (int v = 0; v < n_vertices; ++v)
        for (const MultiIndex& nu : vertex_nus) l.dofs.push_back({DofKind::VertexDeriv, v, nu, 0, 0});
    for (int e = 0; e < n_vertices; ++e)
        for (int j = 0; j < tuple.params.p2; ++j)
            for (int m = 0; m <= tuple.edge[j]; ++m) l.dofs.push_back({DofKind::EdgeMoment, e, {}, j, m});
    for (const MultiIndex& beta : multi_indices(tuple.interior)) l.dofs.push_back({DofKind::InteriorMoment, 0, beta, 0, 0});
    return l;
}

LocalLayout local_layout(const Element& element, const DofsTuple& tuple)
{
    return local_layout(static_cast<int>(element.vertices.size()), tuple);
}

LocalElement local_element(const Mesh& mesh, const MeshMetrics& metrics, int element)
{
    const Element& el = mesh.elements()[element];
    LocalElement le;
    for (int v : el.vertices) {
        le.vertices.push_back(mesh.vertices()[v].p);
        le.h_v.push_back(metrics.h_v[v]);
    }
    le.edge_sign = el.edge_sign;
    le.centroid = el.centroid;
    le.diameter = el.diameter;
    le.area = el.area;
    return le;
}

LocalElement local_element(const std::vector<Point>& loop)
{
    LocalElement le;
    le.vertices = loop;
    le.centroid = polygon_centroid(loop);
    le.diameter = polygon_diameter(loop);
    le.area = signed_area(loop);
    le.h_v.assign(loop.size(), le.diameter);
    le.edge_sign.assign(loop.size(), 1);
    return le;
}

// ---------------------------------------------------------------------------

namespace {

/// Applies every DOF functional to a family of functions given pointwise by
/// `eval(p, nu)` (one value per column).
template <class Eval>
Eigen::MatrixXd apply_dofs(const LocalElement& el, const LocalLayout& layout, const DofsTuple& tuple, int cols,
                           int order, const Eval& eval)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layout.size(), cols);
    const int nv = el.size();
    const int p2 = tuple.params.p2;

    const auto vertex_nus = multi_indices(p2 - 1);
    for (int v = 0; v < nv; ++v)
        for (std::size_t k = 0; k < vertex_nus.size(); ++k) {
            const MultiIndex nu = vertex_nus[k];
            out.row(layout.vertex_dof(v, static_cast<int>(k))) =
                std::pow(el.h_v[v], nu.order()) * eval(el.vertices[v], nu).transpose();
        }

    if (layout.edge_block > 0) {
        const QuadratureRule rule = segment_rule(order);
        for (int e = 0; e < nv; ++e) {
            const Point a = el.edge_start(e), b = el.edge_end(e);
            const double he = el.edge_length(e);
            const Point t = el.edge_tangent(e), n = el.outward_normal(e);
            int row = layout.edge_offset(e);
            for (int j = 0; j < p2; ++j) {
                if (tuple.edge[j] < 0) continue;
                const Eigen::VectorXd w = directional_weights(t, n, 0, j);
                const auto nus = multi_indices_of_order(j);
                const int nm = tuple.edge[j] + 1;
                Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nm, cols);
                for (std::size_t q = 0; q < rule.points.size(); ++q) {
                    const double s = rule.points[q].x();
                    const Point x = a + s * (b - a);
                    Eigen::VectorXd dn = Eigen::VectorXd::Zero(cols);
                    for (std::size_t i = 0; i < nus.size(); ++i)
                        if (w[i] != 0.0) dn += w[i] * eval(x, nus[i]);
                    const double tg = el.global_parameter(e, s);
                    for (int m = 0; m < nm; ++m) acc.row(m) += rule.weights[q] * shifted_legendre(m, tg) * dn.transpose();
                }
                // h_e^{-1+j} * (h_e * int_0^1 ...)
                out.middleRows(row, nm) = std::pow(he, j) * acc;
                row += nm;
            }
        }
    }

    if (tuple.interior >= 0) {
        const ScaledMonomials mb = el.basis(tuple.interior);
        const PhysicalQuadrature q = polygon_quadrature(el.vertices, el.centroid, order);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(mb.size(), cols);
        for (std::size_t i = 0; i < q.points.size(); ++i)
            acc.noalias() += q.weights[i] * mb.eval(q.points[i]) * eval(q.points[i], MultiIndex{}).transpose();
        out.bottomRows(mb.size()) = acc / (el.diameter * el.diameter);
    }
    return out;
}

} // namespace

Eigen::MatrixXd dof_matrix(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const ScaledMonomials& basis, int order)
{
    return apply_dofs(element, layout, tuple, basis.size(), order,
                      [&](const Point& p, MultiIndex nu) { return basis.eval(p, nu); });
}

Eigen::VectorXd local_dofs(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const SmoothField& field)
{
    const int order = 2 * tuple.params.r + 6;
    return apply_dofs(element, layout, tuple, 1, order, [&](const Point& p, MultiIndex nu) {
        Eigen::VectorXd v(1);
        v[0] = field(p, nu);
        return v;
    });
}

Eigen::VectorXd local_dofs(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                           const Eigen::VectorXd& coeffs)
{
    const ScaledMonomials basis = element.basis(tuple.params.r);
    return dof_matrix(element, layout, tuple, basis, 2 * tuple.params.r + 2) * coeffs;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd edge_trace_matrix(const LocalElement& el, const LocalLayout& layout, const DofsTuple& tuple, int edge,
                                  int j)
{
    const int p2 = tuple.params.p2;
    const int alpha = tuple.trace_degree[j];
    const int n = alpha + 1;
    const int nv = el.size();
    const int va = edge, vb = (edge + 1) % nv;
    const double he = el.edge_length(edge);
    const Point t = el.edge_tangent(edge), nrm = el.outward_normal(edge);

    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, layout.size());
    int row = 0;
    for (int m = 0; m <= p2 - 1 - j; ++m) {
        const Eigen::VectorXd w = directional_weights(t, nrm, m, j);
        const auto nus = multi_indices_of_order(m + j);
        for (int side = 0; side < 2; ++side) {
            const int v = side == 0 ? va : vb;
            for (int i = m; i < n; ++i) lhs(row, i) = side == 0 ? (i == m ? falling_factorial(m, m) : 0.0) : falling_factorial(i, m);
            const double scale = std::pow(he, m) / std::pow(el.h_v[v], m + j);
            for (std::size_t k = 0; k < nus.size(); ++k)
                rhs(row, layout.vertex_dof(v, multi_index_position(nus[k]))) += scale * w[k];
            ++row;
        }
    }
    if (tuple.edge[j] >= 0) {
        int col = layout.edge_offset(edge);
        for (int jj = 0; jj < j; ++jj) col += tuple.edge_dofs(jj);
        const QuadratureRule rule = segment_rule(alpha + tuple.edge[j]);
        for (int m = 0; m <= tuple.edge[j]; ++m) {
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double s = rule.points[q].x();
                const double wq = rule.weights[q] * shifted_legendre(m, el.global_parameter(edge, s));
                double sp = 1.0;
                for (int i = 0; i < n; ++i, sp *= s) lhs(row, i) += he * wq * sp;
            }
            rhs(row, col + m) = std::pow(he, 1 - j);
            ++row;
        }
    }
    if (row != n) throw SpaceError("edge trace system is not square");
    return lhs.fullPivLu().solve(rhs);
}

double EdgePolynomial::operator()(double t) const
{
    double s = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) s = s * t + coeffs[i];
    return s;
}

EdgePolynomial edge_trace(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple, int edge,
                          int j, const Eigen::VectorXd& dofs)
{
    return {edge_trace_matrix(element, layout, tuple, edge, j) * dofs};
}

// ---------------------------------------------------------------------------

Eigen::VectorXd GlobalDofMap::gather(int element, const Eigen::VectorXd& global) const
{
    const auto& idx = local_to_global[element];
    const auto& sg = sign[element];
    Eigen::VectorXd out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = sg[i] * global[idx[i]];
    return out;
}

GlobalDofMap global_numbering(const Mesh& mesh, const DofsTuple& tuple)
{
    GlobalDofMap map;
    map.vertex_block = tuple.vertex_dofs();
    map.edge_block = tuple.edge_dofs();
    map.interior_block = tuple.interior_dofs();
    map.edge_base = static_cast<int>(mesh.num_vertices()) * map.vertex_block;
    map.interior_base = map.edge_base + static_cast<int>(mesh.num_edges()) * map.edge_block;
    map.n_dofs = map.interior_base + static_cast<int>(mesh.num_elements()) * map.interior_block;

    const auto& elements = mesh.elements();
    map.local_to_global.resize(elements.size());
    map.sign.resize(elements.size());
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const Element& el = elements[e];
        auto& idx = map.local_to_global[e];
        auto& sg = map.sign[e];
        for (int v : el.vertices)
            for (int k = 0; k < map.vertex_block; ++k) {
                idx.push_back(map.vertex_dof(v, k));
                sg.push_back(1.0);
            }
        for (std::size_t k = 0; k < el.edges.size(); ++k) {
            int offset = 0;
            for (int j = 0; j < tuple.params.p2; ++j)
                for (int m = 0; m <= tuple.edge[j]; ++m, ++offset) {
                    idx.push_back(map.edge_dof(el.edges[k], offset));
                    // outward normal = -edge_sign * global normal
                    sg.push_back(j % 2 == 1 ? -static_cast<double>(el.edge_sign[k]) : 1.0);
                }
        }
        for (int k = 0; k < map.interior_block; ++k) {
            idx.push_back(map.interior_dof(static_cast<int>(e), k));
            sg.push_back(1.0);
        }
    }
    return map;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const MeshMetrics& metrics, const DofsTuple& tuple,
                            const GlobalDofMap& map, const SmoothField& field)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(map.n_dofs);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const LocalElement el = local_element(mesh, metrics, static_cast<int>(e));
        const LocalLayout layout = local_layout(mesh.elements()[e], tuple);
        const Eigen::VectorXd local = local_dofs(el, layout, tuple, field);
        for (int i = 0; i < layout.size(); ++i) out[map.local_to_global[e][i]] = map.sign[e][i] * local[i];
    }
    return out;
}

} // namespace vem
