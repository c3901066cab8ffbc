#include "vem/analysis.hpp"

#include <cmath>
#include <iostream>

#include "vem/parallel.hpp"

namespace vem {

ExactSolution ExactSolution::from_polynomial(const Polynomial2D& u, int p1)
{
    ExactSolution s;
    s.u = u;
    s.p1 = p1;
    s.f = p1 == 1 ? u.laplacian() * -1.0 : u.laplacian().laplacian();
    return s;
}

ExactSolution ExactSolution::bubble(int p1) { return from_polynomial(Polynomial2D::bubble(), p1); }

ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& u_h, const SmoothField& exact,
                          int workers)
{
    const int ne = static_cast<int>(disc.elements.size());
    const int r = disc.tuple.params.r;
    const int p1 = disc.tuple.params.p1;
    std::vector<double> energy(ne), l2(ne), linf(ne);
    parallel_for(ne, workers, [&](int e) {
        const LocalElement& el = disc.elements[e];
        const ScaledMonomials basis = el.basis(r);
        const Eigen::VectorXd c = disc.packs[e].pi * disc.map.gather(e, u_h);
        const PhysicalQuadrature q = polygon_quadrature(el.vertices, el.centroid, 2 * r + 4);
        double se = 0.0, s2 = 0.0, mx = 0.0;
        for (std::size_t i = 0; i < q.points.size(); ++i) {
            const Point& x = q.points[i];
            const double d0 = exact(x, {}) - basis.eval(c, x);
            double de = 0.0;
            if (p1 == 1) {
                const double dx = exact(x, {1, 0}) - basis.eval(c, x, {1, 0});
                const double dy = exact(x, {0, 1}) - basis.eval(c, x, {0, 1});
                de = dx * dx + dy * dy;
            } else {
                const double lap = exact(x, {2, 0}) + exact(x, {0, 2}) - basis.eval(c, x, {2, 0}) - basis.eval(c, x, {0, 2});
                de = lap * lap;
            }
            se += q.weights[i] * de;
            s2 += q.weights[i] * d0 * d0;
            mx = std::max(mx, std::abs(d0));
        }
        for (const Point& v : el.vertices) mx = std::max(mx, std::abs(exact(v, {}) - basis.eval(c, v)));
        energy[e] = se;
        l2[e] = s2;
        linf[e] = mx;
    });
    ErrorNorms out;
    out.energy = std::sqrt(std::max(0.0, pairwise_sum(energy.begin(), energy.end())));
    out.l2 = std::sqrt(std::max(0.0, pairwise_sum(l2.begin(), l2.end())));
    for (double m : linf) out.linf = std::max(out.linf, m);
    return out;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

} // namespace

EocTable eoc(const std::vector<double>& errors, const std::vector<double>& hs)
{
    EocTable t;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < errors.size() && i < hs.size(); ++i) {
        if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) {
            std::cerr << "warning: skipping non-positive error at level " << i << " in EOC fit\n";
            continue;
        }
        lx.push_back(std::log(hs[i]));
        ly.push_back(std::log(errors[i]));
    }
    for (std::size_t i = 1; i < lx.size(); ++i) t.rates.push_back((ly[i - 1] - ly[i]) / (lx[i - 1] - lx[i]));
    t.used = static_cast<int>(lx.size());
    t.slope = lx.size() >= 2 ? ls_slope(lx, ly) : std::nan("");
    return t;
}

double growth_fit(const std::vector<double>& kappas, const std::vector<double>& one_over_h)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < kappas.size() && i < one_over_h.size(); ++i) {
        if (!(kappas[i] > 0.0)) {
            std::cerr << "warning: skipping unavailable condition number at level " << i << " in growth fit\n";
            continue;
        }
        lx.push_back(std::log(one_over_h[i]));
        ly.push_back(std::log(kappas[i]));
    }
    return lx.size() >= 2 ? ls_slope(lx, ly) : std::nan("");
}

} // namespace vem
