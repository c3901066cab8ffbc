#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "vem/poly.hpp"

using namespace vem;

namespace {

double total_area(const Mesh& mesh)
{
    double s = 0.0;
    for (const Element& e : mesh.elements()) s += e.area;
    return s;
}

} // namespace

TEST_CASE("QUAD element counts")
{
    for (int n : {2, 8, 16, 32, 64, 128}) {
        const Mesh mesh = generate(MeshFamily::Quad, n, 1);
        CHECK(mesh.num_elements() == static_cast<std::size_t>(n * n));
        CHECK(total_area(mesh) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Mesh m2 = generate(MeshFamily::Quad, 2, 1);
    for (const Element& e : m2.elements()) CHECK(e.area == doctest::Approx(0.25));
}

TEST_CASE("every family tiles the unit square")
{
    for (MeshFamily f : {MeshFamily::Quad, MeshFamily::Tri, MeshFamily::Cvt, MeshFamily::Hex}) {
        const Mesh mesh = generate(f, 8, 1);
        CHECK(std::abs(total_area(mesh) - 1.0) < 1e-10);
        std::vector<int> uses(mesh.num_edges(), 0);
        for (const Element& e : mesh.elements()) {
            CHECK(e.area > 0.0);
            for (int id : e.edges) ++uses[id];
        }
        for (std::size_t i = 0; i < mesh.num_edges(); ++i) {
            const Edge& e = mesh.edges()[i];
            CHECK(uses[i] == (e.boundary ? 1 : 2));
            CHECK(std::abs(e.tangent.norm() - 1.0) < 1e-12);
            CHECK(std::abs(e.normal.dot(e.tangent)) < 1e-12);
            CHECK(e.v[0] < e.v[1]);
        }
    }
}

TEST_CASE("generation is deterministic")
{
    for (MeshFamily f : {MeshFamily::Tri, MeshFamily::Cvt, MeshFamily::Hex}) {
        const Mesh a = generate(f, 8, 7, {100, 0.2});
        const Mesh b = generate(f, 8, 7, {100, 0.2});
        CHECK(format_mesh(a) == format_mesh(b));
    }
}

TEST_CASE("CVT cells contain their generator")
{
    const Mesh mesh = generate(MeshFamily::Cvt, 8, 1);
    REQUIRE(mesh.num_elements() == 64);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto loop = element_loop(mesh, static_cast<int>(e));
        // convexity
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const Point a = loop[k], b = loop[(k + 1) % loop.size()], c = loop[(k + 2) % loop.size()];
            const Point u = b - a, w = c - b;
            CHECK(u.x() * w.y() - u.y() * w.x() > -1e-12);
        }
    }
    // brute force: the generators of a converged CVT are the cell centroids
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> seeds;
    for (int i = 0; i < 64; ++i) seeds.emplace_back(U(rng), U(rng));
    const LloydResult lr = lloyd_relax(seeds, 100);
    const auto cells = voronoi_cells(lr.seeds);
    double worst = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        int owner = 0;
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (point_in_polygon(lr.seeds[i], cells[c])) owner = static_cast<int>(c);
        CHECK(owner == static_cast<int>(i));
        worst = std::max(worst, (polygon_centroid(cells[i]) - lr.seeds[i]).norm());
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("lloyd with four symmetric seeds")
{
    const std::vector<Point> seeds{{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
    const Mesh mesh = voronoi_mesh(lloyd_relax(seeds, 0).seeds);
    REQUIRE(mesh.num_elements() == 4);
    for (const Element& e : mesh.elements()) {
        CHECK(e.vertices.size() == 4);
        CHECK(e.area == doctest::Approx(0.25));
    }
    CHECK_THROWS(lloyd_cvt(1, 10, 1));
}

TEST_CASE("metrics")
{
    const Mesh mesh = generate(MeshFamily::Quad, 8, 1);
    const MeshMetrics m = metrics(mesh);
    CHECK(m.h == doctest::Approx(std::sqrt(2.0) / 8));
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        if (!mesh.vertices()[v].boundary) CHECK(m.h_v[v] == doctest::Approx(std::sqrt(2.0) / 8));

    const Mesh one({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
    const MeshMetrics m1 = metrics(one);
    CHECK(m1.h_P[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(one.elements()[0].area == doctest::Approx(1.0));
}

TEST_CASE("mesh file round trip and errors")
{
    const Mesh mesh = generate(MeshFamily::Cvt, 4, 3);
    const auto path = std::filesystem::temp_directory_path() / "vem_test_roundtrip.mesh";
    write_mesh(mesh, path);
    const Mesh back = read_mesh(path);
    std::filesystem::remove(path);
    REQUIRE(back.num_vertices() == mesh.num_vertices());
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i) CHECK(back.vertices()[i].p == mesh.vertices()[i].p);
    CHECK(back.polygons() == mesh.polygons());

    // three triangles on one edge (0,1)
    const char* non_manifold = "5 0 3\n0 0\n1 0\n0.5 1\n0.5 0.5\n0.5 -1\n3 0 1 2\n3 0 1 3\n3 1 0 4\n";
    CHECK_THROWS_AS(parse_mesh(non_manifold), MeshError);
    const char* bad_index = "4 0 1\n0 0\n1 0\n1 1\n0 1\n4 0 1 2 7\n";
    CHECK_THROWS_AS(parse_mesh(bad_index), MeshError);
    CHECK_THROWS(generate(MeshFamily::Hex, 3, 1));
    CHECK_THROWS(parse_family("PENTA"));
}
