#include "vem/projector.hpp"

#include <cmath>
#include <ostream>

namespace vem {

Eigen::MatrixXd build_D(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple)
{
    const int r = tuple.params.r;
    return dof_matrix(element, layout, tuple, element.basis(r), 2 * r + 2);
}

Eigen::MatrixXd build_G(const LocalElement& element, int r, int p1)
{
    const ScaledMonomials basis = element.basis(r);
    const PhysicalQuadrature q = polygon_quadrature(element.vertices, element.centroid, 2 * r + 2);
    const int n = basis.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        const Point& x = q.points[i];
        if (p1 == 1) {
            const Eigen::VectorXd gx = basis.eval(x, {1, 0});
            const Eigen::VectorXd gy = basis.eval(x, {0, 1});
            G.noalias() += q.weights[i] * (gx * gx.transpose() + gy * gy.transpose());
        } else {
            const Eigen::VectorXd hxx = basis.eval(x, {2, 0});
            const Eigen::VectorXd hxy = basis.eval(x, {1, 1});
            const Eigen::VectorXd hyy = basis.eval(x, {0, 2});
            G.noalias() += q.weights[i]
                * (hxx * hxx.transpose() + 2.0 * hxy * hxy.transpose() + hyy * hyy.transpose());
        }
    }
    return 0.5 * (G + G.transpose());
}

namespace {

/// W(i, a) = int_e phi_i g_a ds with phi_i = t^i, or its arc-length derivative
/// when `tangential` is set (t in [0,1] is the local edge parameter).
template <class Fn>
Eigen::MatrixXd edge_pairing(const LocalElement& el, int edge, int degree, int n_basis, int order, const Fn& g,
                             bool tangential = false)
{
    const QuadratureRule rule = segment_rule(order);
    const Point a = el.edge_start(edge), b = el.edge_end(edge);
    const double he = el.edge_length(edge);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(degree + 1, n_basis);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double s = rule.points[q].x();
        const Eigen::VectorXd gv = g(a + s * (b - a));
        for (int i = tangential ? 1 : 0; i <= degree; ++i) {
            const double phi = tangential ? i * std::pow(s, i - 1) / he : std::pow(s, i);
            W.row(i) += he * rule.weights[q] * phi * gv.transpose();
        }
    }
    return W;
}

} // namespace

Eigen::MatrixXd build_B(const LocalElement& el, const LocalLayout& layout, const DofsTuple& tuple)
{
    const int r = tuple.params.r;
    const int p1 = tuple.params.p1;
    const ScaledMonomials basis = el.basis(r);
    const int n = basis.size();
    const double h = el.diameter;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, layout.size());

    // Interior term: (-1)^{p1} int_P v Lap^{p1} m_a via the interior moments.
    const Eigen::MatrixXd L = laplacian_power(r, p1, h);
    if (L.rows() > 0) {
        if (tuple.interior < r - 2 * p1) throw SpaceError("layout lacks the interior moments needed by the projector");
        const double sgn = p1 % 2 == 1 ? -1.0 : 1.0;
        B.middleCols(layout.interior_offset(), L.rows()) += sgn * h * h * L.transpose();
    }

    for (int e = 0; e < el.size(); ++e) {
        const Point nrm = el.outward_normal(e);
        const Eigen::MatrixXd T0 = edge_trace_matrix(el, layout, tuple, e, 0);
        const int a0 = tuple.trace_degree[0];
        if (p1 == 1) {
            // + int_e v d_n m_a
            const Eigen::MatrixXd W = edge_pairing(el, e, a0, n, a0 + r, [&](const Point& x) {
                return Eigen::VectorXd(nrm.x() * basis.eval(x, {1, 0}) + nrm.y() * basis.eval(x, {0, 1}));
            });
            B.noalias() += W.transpose() * T0;
        } else {
            // - int_e d_n(Lap m_a) v + int_e (D^2 m_a n).n d_n v + int_e (D^2 m_a n).t d_t v
            const Point tan = el.edge_tangent(e);
            const auto hess = [&](const Point& x, const Point& u, const Point& w) {
                return Eigen::VectorXd(u.x() * w.x() * basis.eval(x, {2, 0})
                                       + (u.x() * w.y() + u.y() * w.x()) * basis.eval(x, {1, 1})
                                       + u.y() * w.y() * basis.eval(x, {0, 2}));
            };
            const Eigen::MatrixXd W0 = edge_pairing(el, e, a0, n, a0 + r, [&](const Point& x) {
                const Eigen::VectorXd dx = basis.eval(x, {3, 0}) + basis.eval(x, {1, 2});
                const Eigen::VectorXd dy = basis.eval(x, {2, 1}) + basis.eval(x, {0, 3});
                return Eigen::VectorXd(nrm.x() * dx + nrm.y() * dy);
            });
            const Eigen::MatrixXd Wt = edge_pairing(
                el, e, a0, n, a0 + r, [&](const Point& x) { return hess(x, nrm, tan); }, true);
            const int a1 = tuple.trace_degree[1];
            const Eigen::MatrixXd T1 = edge_trace_matrix(el, layout, tuple, e, 1);
            const Eigen::MatrixXd W1 =
                edge_pairing(el, e, a1, n, a1 + r, [&](const Point& x) { return hess(x, nrm, nrm); });
            B.noalias() += (Wt - W0).transpose() * T0;
            B.noalias() += W1.transpose() * T1;
        }
    }
    return B;
}

ProjectorPack solve_projector(Eigen::MatrixXd D, Eigen::MatrixXd G, Eigen::MatrixXd B, const LocalElement& el,
                              const LocalLayout& layout, const DofsTuple& tuple)
{
    const int r = tuple.params.r;
    const int p1 = tuple.params.p1;
    const ScaledMonomials basis = el.basis(r);
    const double h = el.diameter;
    const int nv = el.size();

    ProjectorPack pack;
    pack.G_tilde = G;
    pack.B_tilde = B;
    // Vertex averages of h_P^{|nu|} D^nu for |nu| <= p1 - 1 replace the kernel rows.
    for (const MultiIndex& nu : multi_indices(p1 - 1)) {
        const int k = multi_index_position(nu);
        Eigen::VectorXd grow = Eigen::VectorXd::Zero(basis.size());
        Eigen::VectorXd brow = Eigen::VectorXd::Zero(layout.size());
        for (int v = 0; v < nv; ++v) {
            grow += std::pow(h, nu.order()) * basis.eval(el.vertices[v], nu);
            brow[layout.vertex_dof(v, k)] += std::pow(h / el.h_v[v], nu.order());
        }
        pack.G_tilde.row(k) = grow.transpose() / nv;
        pack.B_tilde.row(k) = brow.transpose() / nv;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(pack.G_tilde);
    if (!lu.isInvertible()) throw SpaceError("singular projector system (degenerate element?)");
    pack.pi = lu.solve(pack.B_tilde);
    pack.Q = D * pack.pi;
    pack.D = std::move(D);
    pack.G = std::move(G);
    pack.B = std::move(B);
    return pack;
}

ProjectorPack build_projector(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple)
{
    return solve_projector(build_D(element, layout, tuple), build_G(element, tuple.params.r, tuple.params.p1),
                           build_B(element, layout, tuple), element, layout, tuple);
}

Eigen::MatrixXd cross_mass(const LocalElement& element, int rows_degree, int cols_degree, int order)
{
    const ScaledMonomials br = element.basis(rows_degree);
    const ScaledMonomials bc = element.basis(cols_degree);
    const PhysicalQuadrature q = polygon_quadrature(element.vertices, element.centroid, order);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(br.size(), bc.size());
    for (std::size_t i = 0; i < q.points.size(); ++i)
        M.noalias() += q.weights[i] * br.eval(q.points[i]) * bc.eval(q.points[i]).transpose();
    return M;
}

Eigen::VectorXd l2_poly_projection(const LocalElement& element, const ScalarField& g, int s, int order)
{
    const ScaledMonomials basis = element.basis(s);
    const PhysicalQuadrature q = polygon_quadrature(element.vertices, element.centroid, order);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
    for (std::size_t i = 0; i < q.points.size(); ++i) rhs += q.weights[i] * g(q.points[i]) * basis.eval(q.points[i]);
    const Eigen::MatrixXd H = cross_mass(element, s, s, 2 * s + 2);
    return H.ldlt().solve(rhs);
}

namespace {

void write_matrix(std::ostream& out, const char* name, int element, const Eigen::MatrixXd& m)
{
    out << name << " " << element << " " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
        out << "\n";
    }
}

} // namespace

void write_pack(std::ostream& out, int element, const ProjectorPack& pack)
{
    const auto old = out.precision(17);
    write_matrix(out, "D", element, pack.D);
    write_matrix(out, "G", element, pack.G);
    write_matrix(out, "B", element, pack.B);
    write_matrix(out, "PI", element, pack.pi);
    out.precision(old);
}

} // namespace vem
