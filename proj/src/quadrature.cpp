#include "vem/poly.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace vem {

namespace {

QuadratureRule compute_gauss_legendre(int n)
{
    QuadratureRule rule;
    rule.order = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p0 = 1.0;
                p1 = x;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 1; k < n; ++k) {
            const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points.emplace_back(0.5 * (x + 1.0), 0.0);
        rule.weights.push_back(0.5 * w);
    }
    return rule;
}

template <class Make>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, int key, Make make)
{
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make(key)).first;
    return it->second;
}

} // namespace

QuadratureRule gauss_legendre(int n_points)
{
    static std::map<int, QuadratureRule> cache;
    return cached(cache, n_points, compute_gauss_legendre);
}

QuadratureRule segment_rule(int order)
{
    QuadratureRule rule = gauss_legendre(std::max(1, (order + 2) / 2));
    return rule;
}

QuadratureRule triangle_rule(int order)
{
    static std::map<int, QuadratureRule> cache;
    return cached(cache, std::max(order, 0), [](int q) {
        // x = s, y = t (1 - s), Jacobian (1 - s) adds one degree in s.
        const QuadratureRule gs = gauss_legendre(std::max(1, (q + 3) / 2));
        const QuadratureRule gt = gauss_legendre(std::max(1, (q + 2) / 2));
        QuadratureRule rule;
        rule.order = q;
        for (std::size_t i = 0; i < gs.points.size(); ++i)
            for (std::size_t j = 0; j < gt.points.size(); ++j) {
                const double s = gs.points[i].x();
                const double t = gt.points[j].x();
                rule.points.emplace_back(s, t * (1.0 - s));
                rule.weights.push_back(gs.weights[i] * gt.weights[j] * (1.0 - s));
            }
        return rule;
    });
}

PhysicalQuadrature polygon_quadrature(const std::vector<Point>& loop, const Point& center, int order)
{
    const QuadratureRule ref = triangle_rule(order);
    PhysicalQuadrature q;
    q.points.reserve(ref.points.size() * loop.size());
    q.weights.reserve(ref.points.size() * loop.size());
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point a = loop[k] - center;
        const Point b = loop[(k + 1) % n] - center;
        const double det = a.x() * b.y() - a.y() * b.x();
        if (!(det > 0.0)) throw MeshError("degenerate sub-triangle in polygon quadrature (polygon not star-shaped w.r.t. its centre)");
        for (std::size_t i = 0; i < ref.points.size(); ++i) {
            q.points.push_back(center + ref.points[i].x() * a + ref.points[i].y() * b);
            q.weights.push_back(ref.weights[i] * det);
        }
    }
    return q;
}

PhysicalQuadrature segment_quadrature(const Point& a, const Point& b, int order)
{
    const QuadratureRule ref = segment_rule(order);
    const double len = (b - a).norm();
    PhysicalQuadrature q;
    for (std::size_t i = 0; i < ref.points.size(); ++i) {
        const double t = ref.points[i].x();
        q.points.push_back(a + t * (b - a));
        q.weights.push_back(ref.weights[i] * len);
    }
    return q;
}

double integrate_polygon(const std::vector<Point>& loop, const Point& center, const ScalarField& f, int order)
{
    const auto q = polygon_quadrature(loop, center, order);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) sum += q.weights[i] * f(q.points[i]);
    return sum;
}

double integrate_segment(const Point& a, const Point& b, const ScalarField& f, int order)
{
    const auto q = segment_quadrature(a, b, order);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) sum += q.weights[i] * f(q.points[i]);
    return sum;
}

std::vector<Point> element_loop(const Mesh& mesh, int element)
{
    std::vector<Point> loop;
    for (int v : mesh.elements()[element].vertices) loop.push_back(mesh.vertices()[v].p);
    return loop;
}

double integrate_polygon(const Mesh& mesh, int element, const ScalarField& f, int order)
{
    return integrate_polygon(element_loop(mesh, element), mesh.elements()[element].centroid, f, order);
}

double integrate_edge(const Mesh& mesh, int edge, const ScalarField& f, int order)
{
    const Edge& e = mesh.edges()[edge];
    return integrate_segment(mesh.vertices()[e.v[0]].p, mesh.vertices()[e.v[1]].p, f, order);
}

Eigen::MatrixXd mass_matrix(const std::vector<Point>& loop, const ScaledMonomials& basis, int order)
{
    const auto q = polygon_quadrature(loop, basis.center(), order);
    const int n = basis.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        const Eigen::VectorXd m = basis.eval(q.points[i]);
        h.noalias() += q.weights[i] * m * m.transpose();
    }
    return h;
}

Eigen::MatrixXd mass_matrix(const Mesh& mesh, int element, int r)
{
    const Element& el = mesh.elements()[element];
    return mass_matrix(element_loop(mesh, element), ScaledMonomials(el.centroid, el.diameter, r), 2 * r + 2);
}

} // namespace vem
