#include <doctest.h>

#include <cmath>
#include <random>

#include "vem/analysis.hpp"
#include "vem/solve.hpp"

using namespace vem;

namespace {

SparseMatrix from_dense(const Eigen::MatrixXd& M) { return M.sparseView(); }

SparseMatrix laplacian_1d(int n)
{
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 2.0);
        if (i > 0) t.emplace_back(i, i - 1, -1.0);
        if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
    }
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

} // namespace

TEST_CASE("cg on trivial systems")
{
    const SparseMatrix I = from_dense(Eigen::MatrixXd::Identity(5, 5));
    const CgResult r = cg(I, Eigen::VectorXd::LinSpaced(5, 1.0, 5.0));
    CHECK(r.report.iterations == 1);
    CHECK(r.report.converged);
    REQUIRE(r.report.kappa);
    CHECK(*r.report.kappa == doctest::Approx(1.0));

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = 10.0;
    const CgResult d = cg(from_dense(D), Eigen::Vector2d(1.0, 1.0));
    CHECK(d.report.iterations == 2);
    REQUIRE(d.report.kappa);
    CHECK(std::abs(*d.report.kappa - 10.0) <= 1e-6 * 10.0);
    CHECK(d.report.diag.size() == 2);
    CHECK(d.report.offdiag.size() == 1);
}

TEST_CASE("cg estimates the 1D Laplacian condition number")
{
    const int n = 100;
    const SparseMatrix A = laplacian_1d(n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> N;
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = N(rng);
    const CgResult r = cg(A, b);
    const double pi = std::acos(-1.0);
    const double exact = (1.0 - std::cos(n * pi / (n + 1))) / (1.0 - std::cos(pi / (n + 1)));
    REQUIRE(r.report.kappa);
    CHECK(std::abs(*r.report.kappa - exact) <= 0.02 * exact);
    CHECK((A * r.x - b).norm() <= 1e-11 * b.norm());
}

TEST_CASE("indefinite matrix is rejected")
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
    M(2, 2) = -1.0;
    CHECK_THROWS_AS(cg(from_dense(M), Eigen::Vector3d(0.0, 0.0, 1.0)), SolverError);
}

TEST_CASE("stagnation makes kappa unavailable")
{
    // eigenvalues spread over 16 orders of magnitude
    const int n = 400;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, std::pow(10.0, 16.0 * i / (n - 1)));
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    CgOptions options;
    options.stall_window = 50;
    options.stall_window_per_unknown = 0.0;
    options.maxit = 100000;
    const CgResult r = cg(A, Eigen::VectorXd::Ones(n), options);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.stalled);
    CHECK_FALSE(r.report.kappa);
}

TEST_CASE("sturm bisection")
{
    auto [lo, hi] = tridiag_extreme_eigs({2.0, 2.0}, {-1.0});
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));
    auto [a, b] = tridiag_extreme_eigs({5.0}, {});
    CHECK(a == 5.0);
    CHECK(b == 5.0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int n = 50;
    std::vector<double> d(n), o(n - 1);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) T(i, i) = d[i] = U(rng);
    for (int i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = o[i] = U(rng);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T).eigenvalues();
    auto [mn, mx] = tridiag_extreme_eigs(d, o);
    CHECK(std::abs(mn - ev(0)) <= 1e-10);
    CHECK(std::abs(mx - ev(n - 1)) <= 1e-10);
    CHECK(sturm_count(d, o, 0.5 * (ev(3) + ev(4))) == 4);
}

TEST_CASE("dense oracle")
{
    CHECK(dense_oracle(from_dense(Eigen::MatrixXd::Identity(10, 10))).kappa == doctest::Approx(1.0));
    CHECK_THROWS_AS(dense_oracle(laplacian_1d(dense_oracle_limit + 1)), SolverError);
}

TEST_CASE("Lanczos estimate against the dense oracle on VEM systems")
{
    const Mesh mesh = generate(MeshFamily::Quad, 4, 1);
    const std::pair<SpaceParams, StabConfig> cases[] = {
        {{1, 1, 2}, {StabU::Identity, StabAlpha::TraceOverNdofs}},
        {{2, 2, 2}, {StabU::Identity, StabAlpha::TraceOver3}},
    };
    for (const auto& [params, stab] : cases) {
        const Discretization disc = discretize(mesh, params);
        AssemblyOptions options;
        options.stab = stab;
        const LinearSystem sys = assemble(disc, ExactSolution::bubble(params.p1).load(), {}, options);
        const CgResult r = cg(sys.A, sys.b);
        const DenseSpectrum exact = dense_oracle(sys.A);
        REQUIRE(r.report.kappa);
        CHECK(std::abs(*r.report.kappa - exact.kappa) <= 0.05 * exact.kappa);
        CHECK(*r.report.kappa <= exact.kappa * 1.05);

        const Eigen::MatrixXd dense = sys.A;
        const Eigen::VectorXd x = dense.ldlt().solve(sys.b);
        CHECK((r.x - x).norm() <= 1e-9 * x.norm());
    }
}

TEST_CASE("generic start recovers eigenvalues hidden from a structured right-hand side")
{
    // b only touches the middle of the spectrum
    const int n = 60;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0 + i);
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b.segment(20, 20).setOnes();
    const CgResult plain = cg(A, b);
    REQUIRE(plain.report.kappa);
    CHECK(*plain.report.kappa < 0.5 * n);

    const Eigen::VectorXd x0 = generic_start(A, b, 3);
    CHECK((A * x0).norm() == doctest::Approx(b.norm()));
    const CgResult r = cg(A, b, x0);
    REQUIRE(r.report.kappa);
    CHECK(std::abs(*r.report.kappa - n) <= 0.02 * n);
    CHECK((r.x - plain.x).norm() <= 1e-10 * plain.x.norm());
    CHECK_THROWS_AS(cg(A, b, Eigen::VectorXd::Zero(3)), SolverError);
    CHECK(cg(A, Eigen::VectorXd::Zero(n), x0).x.isZero());
}
