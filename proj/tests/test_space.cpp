#include <doctest.h>

#include <cmath>

#include "vem/projector.hpp"
#include "vem/space.hpp"

using namespace vem;

namespace {

const std::vector<SpaceParams> matrix_params{{1, 1, 2}, {1, 2, 2}, {1, 2, 3}, {1, 3, 3}, {2, 2, 2}};

double normal_derivative(const Polynomial2D& g, const Point& x, const Point& n, int j)
{
    if (j == 0) return g(x);
    double s = 0.0;
    for (int a = 0; a <= j; ++a)
        s += binomial(j, a) * std::pow(n.x(), j - a) * std::pow(n.y(), a) * g.eval(x, {j - a, a});
    return s;
}

} // namespace

TEST_CASE("dofs tuples")
{
    const DofsTuple t112 = dofs_tuple({1, 1, 2});
    CHECK(t112.vertex == std::vector<int>{0});
    CHECK(t112.edge == std::vector<int>{0});
    CHECK(t112.interior == 0);

    const DofsTuple t222 = dofs_tuple({2, 2, 2});
    CHECK(t222.vertex == std::vector<int>{0, 0});
    CHECK(t222.edge == std::vector<int>{-1, -1});
    CHECK(t222.interior == -2);
    CHECK(t222.vertex_dofs() == 3);

    const DofsTuple t133 = dofs_tuple({1, 3, 3});
    CHECK(t133.vertex == std::vector<int>{0, 0, 0});
    CHECK(t133.edge == std::vector<int>{-1, -1, -1});
    CHECK(t133.interior == 1);
    CHECK(t133.trace_degree == std::vector<int>{5, 3, 1});

    const DofsTuple t123 = dofs_tuple({1, 2, 3});
    CHECK(t123.edge == std::vector<int>{-1, 0});
    CHECK(t123.edge_dofs() == 1);

    CHECK_THROWS_AS(dofs_tuple({2, 1, 2}), SpaceError);
    CHECK_THROWS_AS(dofs_tuple({1, 3, 2}), SpaceError);
}

TEST_CASE("local layout sizes on a square")
{
    CHECK(local_layout(4, dofs_tuple({1, 1, 2})).size() == 9);
    CHECK(local_layout(4, dofs_tuple({2, 2, 2})).size() == 12);
    CHECK(local_layout(4, dofs_tuple({1, 3, 3})).size() == 27);
    const LocalLayout l = local_layout(4, dofs_tuple({1, 3, 3}));
    CHECK(l.dofs[0].kind == DofKind::VertexDeriv);
    CHECK(l.dofs[26].kind == DofKind::InteriorMoment);
    CHECK(l.interior_offset() == 24);
}

TEST_CASE("edge trace reconstruction")
{
    const Mesh mesh = generate(MeshFamily::Cvt, 4, 1);
    const MeshMetrics met = metrics(mesh);

    SUBCASE("value trace of x^2 y, p2=2, r=2")
    {
        const Polynomial2D g = Polynomial2D::from_terms(3, {{{2, 1}, 1.0}});
        const DofsTuple t = dofs_tuple({1, 2, 2});
        const LocalElement el = local_element(mesh, met, 5);
        const LocalLayout lay = local_layout(mesh.elements()[5], t);
        const Eigen::VectorXd d = local_dofs(el, lay, t, as_field(g));
        for (int k = 0; k < el.size(); ++k) {
            const EdgePolynomial tr = edge_trace(el, lay, t, k, 0, d);
            for (int i = 0; i <= 9; ++i) {
                const double s = i / 9.0;
                const Point x = el.edge_start(k) + s * (el.edge_end(k) - el.edge_start(k));
                CHECK(std::abs(tr(s) - g(x)) <= 1e-12);
            }
        }
    }

    SUBCASE("all traces reproduce polynomials of degree r")
    {
        for (const SpaceParams& p : matrix_params) {
            const DofsTuple t = dofs_tuple(p);
            Polynomial2D g(p.r);
            for (const MultiIndex& nu : multi_indices(p.r)) g.coeff(nu.x, nu.y) = 1.0 + 0.3 * nu.x - 0.7 * nu.y;
            for (int e : {0, 7, 12}) {
                const LocalElement el = local_element(mesh, met, e);
                const LocalLayout lay = local_layout(mesh.elements()[e], t);
                const Eigen::VectorXd d = local_dofs(el, lay, t, as_field(g));
                for (int k = 0; k < el.size(); ++k)
                    for (int j = 0; j < p.p2; ++j) {
                        const EdgePolynomial tr = edge_trace(el, lay, t, k, j, d);
                        for (int i = 0; i <= 9; ++i) {
                            const double s = i / 9.0;
                            const Point x = el.edge_start(k) + s * (el.edge_end(k) - el.edge_start(k));
                            const double ref = normal_derivative(g, x, el.outward_normal(k), j);
                            CHECK(std::abs(tr(s) - ref) <= 1e-11 * (1.0 + std::abs(ref)));
                        }
                    }
            }
        }
    }
}

TEST_CASE("global numbering and orientation")
{
    CHECK(global_numbering(generate(MeshFamily::Quad, 2, 1), dofs_tuple({1, 1, 1})).n_dofs == 9);
    CHECK(global_numbering(generate(MeshFamily::Quad, 8, 1), dofs_tuple({2, 2, 2})).n_dofs == 243);
    CHECK(global_numbering(generate(MeshFamily::Quad, 16, 1), dofs_tuple({2, 2, 2})).n_dofs == 867);

    // shared normal moment: local values on the two sides are opposite
    const Mesh mesh = generate(MeshFamily::Cvt, 4, 2);
    const MeshMetrics met = metrics(mesh);
    const DofsTuple t = dofs_tuple({1, 2, 3});
    const GlobalDofMap map = global_numbering(mesh, t);
    const Polynomial2D g = Polynomial2D::from_terms(3, {{{3, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, -1.0}});
    const Eigen::VectorXd u = interpolate(mesh, met, t, map, as_field(g));
    for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
        const LocalElement el = local_element(mesh, met, e);
        const LocalLayout lay = local_layout(mesh.elements()[e], t);
        const Eigen::VectorXd direct = local_dofs(el, lay, t, as_field(g));
        CHECK((map.gather(e, u) - direct).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + direct.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("unisolvence rank test")
{
    for (MeshFamily f : {MeshFamily::Quad, MeshFamily::Tri, MeshFamily::Cvt, MeshFamily::Hex}) {
        const Mesh mesh = generate(f, 4, 1, {100, 0.2});
        const MeshMetrics met = metrics(mesh);
        for (const SpaceParams& p : matrix_params) {
            const DofsTuple t = dofs_tuple(p);
            for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
                const LocalElement el = local_element(mesh, met, e);
                const Eigen::MatrixXd D = build_D(el, local_layout(mesh.elements()[e], t), t);
                const Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
                const auto& s = svd.singularValues();
                CHECK(s(s.size() - 1) > 1e-10 * s(0));
            }
        }
    }
}
