#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vem {

using Point = Eigen::Vector2d;

class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what, int polygon = -1)
        : std::runtime_error(what), polygon_(polygon) {}

    /// Index of the offending polygon, or -1 when not attributable to one.
    int polygon() const { return polygon_; }

private:
    int polygon_;
};

enum class MeshFamily { Quad, Tri, Cvt, Hex };

std::string_view to_string(MeshFamily family);
MeshFamily parse_family(std::string_view name);

/// Side of the unit square a boundary edge lies on.
enum class BoundarySide : std::int8_t { None = -1, Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct Vertex {
    Point p;
    bool boundary = false;
};

/// Mesh edge. Global orientation runs from the lower vertex id to the higher
/// one; `normal` is the tangent rotated by +90 degrees.
struct Edge {
    std::array<int, 2> v{-1, -1};
    Point tangent;
    Point normal;
    double length = 0.0;
    bool boundary = false;
    BoundarySide side = BoundarySide::None;
    std::array<int, 2> elements{-1, -1};
};

/// Polygon with a counterclockwise vertex loop. `edges[k]` joins
/// `vertices[k]` and `vertices[k+1]`; `edge_sign[k]` is +1 when the loop
/// traverses that edge along its global orientation and -1 otherwise.
struct Element {
    std::vector<int> vertices;
    std::vector<int> edges;
    std::vector<int> edge_sign;
    double area = 0.0;
    Point centroid;
    double diameter = 0.0;
};

struct MeshMetrics {
    double h = 0.0;
    std::vector<double> h_v;
    std::vector<double> h_e;
    std::vector<double> h_P;
};

/// Polygonal tessellation of the unit square. Immutable once built; the
/// constructor derives edges and validates the tessellation.
class Mesh {
public:
    Mesh(std::vector<Point> points, std::vector<std::vector<int>> polygons,
         MeshFamily family = MeshFamily::Quad, int resolution = 0);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Element>& elements() const { return elements_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_elements() const { return elements_.size(); }

    MeshFamily family() const { return family_; }
    int resolution() const { return resolution_; }

    /// Vertex indices of every polygon, in loop order.
    std::vector<std::vector<int>> polygons() const;

private:
    void build_edges();
    void validate() const;

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Element> elements_;
    MeshFamily family_;
    int resolution_;
};

MeshMetrics metrics(const Mesh& mesh);

/// Signed area of a closed polygon (positive when counterclockwise).
double signed_area(const std::vector<Point>& loop);
Point polygon_centroid(const std::vector<Point>& loop);
double polygon_diameter(const std::vector<Point>& loop);
bool point_in_polygon(const Point& p, const std::vector<Point>& loop, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Generators

struct GenerateOptions {
    int lloyd_iterations = 100;
    /// Interior-vertex jitter for TRI meshes, as a fraction of the grid step.
    double tri_jitter = 0.0;
};

Mesh generate(MeshFamily family, int n, std::uint64_t seed, const GenerateOptions& options = {});

/// Voronoi diagram of `seeds` clipped to the unit square.
Mesh voronoi_mesh(const std::vector<Point>& seeds, MeshFamily family = MeshFamily::Cvt, int resolution = 0);

struct LloydResult {
    std::vector<Point> seeds;
    int iterations = 0;
    double last_move = 0.0;
};

/// Lloyd relaxation of `seeds` inside the unit square.
LloydResult lloyd_relax(std::vector<Point> seeds, int iterations, double move_tol = 1e-8);

/// Random seeds followed by Lloyd relaxation; returns the resulting CVT mesh.
Mesh lloyd_cvt(int n_seeds, int iterations, std::uint64_t seed, int resolution = 0);

/// Voronoi cells of `seeds` clipped to the unit square, one CCW loop per seed.
std::vector<std::vector<Point>> voronoi_cells(const std::vector<Point>& seeds);

// ---------------------------------------------------------------------------
// Plain-text format: `nv ne np` header, nv lines `x y`, np lines `k i1 ... ik`.

Mesh read_mesh(const std::filesystem::path& path, MeshFamily family = MeshFamily::Quad, int resolution = 0);
Mesh parse_mesh(std::string_view text, MeshFamily family = MeshFamily::Quad, int resolution = 0);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

} // namespace vem
