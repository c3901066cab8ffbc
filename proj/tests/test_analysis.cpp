#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace vem;

TEST_CASE("eoc of exact power sequences")
{
    const EocTable t = eoc({1.0, 0.25, 1.0 / 16}, {1.0, 0.5, 0.25});
    REQUIRE(t.rates.size() == 2);
    CHECK(t.rates[0] == doctest::Approx(2.0));
    CHECK(t.slope == doctest::Approx(2.0));

    std::vector<double> hs, errs;
    for (int n = 4; n <= 256; n *= 2) {
        hs.push_back(1.0 / n);
        errs.push_back(3.7 * std::pow(1.0 / n, 2.63));
    }
    CHECK(std::abs(eoc(errs, hs).slope - 2.63) <= 1e-12);

    const EocTable skip = eoc({1.0, 0.0, 1.0 / 16}, {1.0, 0.5, 0.25});
    CHECK(skip.used == 2);
    CHECK(skip.slope == doctest::Approx(2.0));
}

TEST_CASE("condition number growth")
{
    CHECK(growth_fit({64.0 * 3, 256.0 * 3}, {8, 16}) == doctest::Approx(2.0));
    // biharmonic QUAD, U=I, alpha=trace/3, 1/h = 8..128
    const double slope = growth_fit({5.77e2, 7.68e3, 1.15e5, 1.81e6, 2.88e7}, {8, 16, 32, 64, 128});
    CHECK(slope == doctest::Approx(3.9).epsilon(0.02));
}

TEST_CASE("exact solution")
{
    const ExactSolution s1 = ExactSolution::bubble(1);
    const ExactSolution s2 = ExactSolution::bubble(2);
    const Point x(0.3, 0.8);
    CHECK(s1.f(x) == doctest::Approx(-(s1.u.eval(x, {2, 0}) + s1.u.eval(x, {0, 2}))));
    const double bilap = s1.u.eval(x, {4, 0}) + 2.0 * s1.u.eval(x, {2, 2}) + s1.u.eval(x, {0, 4});
    CHECK(s2.f(x) == doctest::Approx(bilap));
    for (double t : {0.0, 0.25, 1.0}) {
        CHECK(s1.u(Point(t, 1.0)) == 0.0);
        CHECK(std::abs(s1.u.eval(Point(0.0, t), {1, 0})) <= 1e-15);
    }
}

TEST_CASE("errors of exact and zero solutions")
{
    const Mesh mesh = generate(MeshFamily::Cvt, 4, 1);
    const Discretization disc = discretize(mesh, {1, 2, 3});
    const ErrorNorms zero = compute_errors(disc, Eigen::VectorXd::Zero(disc.map.n_dofs), [](const Point&, MultiIndex) { return 0.0; });
    CHECK(zero.energy == 0.0);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.linf == 0.0);

    for (const SpaceParams p : {SpaceParams{1, 2, 3}, SpaceParams{2, 2, 2}}) {
        const Discretization d = discretize(mesh, p);
        const Polynomial2D u = test::full_polynomial(p.r);
        const Eigen::VectorXd ui = interpolate(mesh, d.metrics, d.tuple, d.map, as_field(u));
        const ErrorNorms e = compute_errors(d, ui, as_field(u), 2);
        CHECK(e.energy <= 1e-10);
        CHECK(e.l2 <= 1e-12);
        CHECK(e.linf <= 1e-12);
    }
}

TEST_CASE("patch test energy error")
{
    const Mesh mesh = generate(MeshFamily::Hex, 4, 1);
    for (const SpaceParams p : {SpaceParams{1, 1, 2}, SpaceParams{1, 3, 3}, SpaceParams{2, 2, 2}})
        CHECK(test::patch_energy_error(mesh, p, StabConfig::defaults(p.p1), test::full_polynomial(p.r)) <= 1e-8);
}

TEST_CASE("error reduction between QUAD 8 and 16")
{
    const auto errors = [](const SpaceParams& p, int n) {
        const Mesh mesh = generate(MeshFamily::Quad, n, 1);
        const Discretization disc = discretize(mesh, p);
        const ExactSolution exact = ExactSolution::bubble(p.p1);
        AssemblyOptions options;
        options.stab = StabConfig::defaults(p.p1);
        return compute_errors(disc, test::direct_solve(assemble(disc, exact.load(), {}, options)), exact.field());
    };
    const ErrorNorms p8 = errors({1, 1, 2}, 8), p16 = errors({1, 1, 2}, 16);
    CHECK(p8.energy / p16.energy == doctest::Approx(4.0).epsilon(0.15));
    CHECK(p8.l2 / p16.l2 == doctest::Approx(4.0).epsilon(0.15));
    const ErrorNorms b8 = errors({2, 2, 2}, 8), b16 = errors({2, 2, 2}, 16);
    CHECK(b8.energy / b16.energy == doctest::Approx(2.0).epsilon(0.15));
}
