#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace vem {

namespace {

constexpr double kWeldTol = 1e-10;

/// Uniform double in [0,1) from the top 53 bits; unlike
/// std::uniform_real_distribution this is identical across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

using Loop = std::vector<Point>;

/// Keeps the part of a convex loop with (x - mid) . dir <= 0.
Loop clip_half_plane(const Loop& poly, const Point& mid, const Point& dir)
{
    Loop out;
    out.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const double fa = (a - mid).dot(dir);
        const double fb = (b - mid).dot(dir);
        if (fa <= 0.0) out.push_back(a);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            const double t = fa / (fa - fb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

/// Uniform bucket grid over the unit square for neighbour queries.
class SeedGrid {
public:
    explicit SeedGrid(const std::vector<Point>& seeds)
        : seeds_(seeds)
    {
        cells_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(seeds.size()) / 2.0)));
        size_ = 1.0 / cells_;
        buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            auto [cx, cy] = cell_of(seeds[i]);
            buckets_[cy * cells_ + cx].push_back(static_cast<int>(i));
        }
    }

    std::pair<int, int> cell_of(const Point& p) const
    {
        auto clampi = [this](double c) { return std::clamp(static_cast<int>(c / size_), 0, cells_ - 1); };
        return {clampi(p.x()), clampi(p.y())};
    }

    int cells() const { return cells_; }
    double cell_size() const { return size_; }
    const std::vector<int>& bucket(int cx, int cy) const { return buckets_[cy * cells_ + cx]; }

private:
    const std::vector<Point>& seeds_;
    int cells_;
    double size_;
    std::vector<std::vector<int>> buckets_;
};

Loop voronoi_cell(const std::vector<Point>& seeds, const SeedGrid& grid, int i)
{
    const Point& s = seeds[i];
    Loop cell{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    auto radius = [&] {
        double r = 0.0;
        for (const Point& p : cell) r = std::max(r, (p - s).norm());
        return r;
    };
    const auto [cx, cy] = grid.cell_of(s);
    for (int ring = 0; ring <= grid.cells(); ++ring) {
        // Seeds outside rings 0..ring are at least ring*cell_size away.
        if (ring > 0 && (ring - 1) * grid.cell_size() > 2.0 * radius()) break;
        for (int gy = cy - ring; gy <= cy + ring; ++gy) {
            if (gy < 0 || gy >= grid.cells()) continue;
            for (int gx = cx - ring; gx <= cx + ring; ++gx) {
                if (gx < 0 || gx >= grid.cells()) continue;
                if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring) continue;
                for (int j : grid.bucket(gx, gy)) {
                    if (j == i) continue;
                    const Point d = seeds[j] - s;
                    if (d.norm() < 1e-14) throw MeshError("duplicate Voronoi seeds " + std::to_string(i) + " and " + std::to_string(j));
                    cell = clip_half_plane(cell, 0.5 * (s + seeds[j]), d);
                }
            }
        }
    }
    return cell;
}

double snap(double c)
{
    if (std::abs(c) < kWeldTol) return 0.0;
    if (std::abs(c - 1.0) < kWeldTol) return 1.0;
    return c;
}

/// Welds near-coincident loop vertices into a shared vertex list and builds the mesh.
Mesh weld_loops(const std::vector<Loop>& loops, MeshFamily family, int resolution)
{
    std::vector<Point> pts;
    std::vector<std::pair<int, int>> owner; // (loop, position)
    for (std::size_t l = 0; l < loops.size(); ++l)
        for (std::size_t k = 0; k < loops[l].size(); ++k) {
            pts.emplace_back(snap(loops[l][k].x()), snap(loops[l][k].y()));
            owner.emplace_back(static_cast<int>(l), static_cast<int>(k));
        }

    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
    });

    std::vector<int> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const Point& pa = pts[order[a]];
            const Point& pb = pts[order[b]];
            if (pb.x() - pa.x() > kWeldTol) break;
            if ((pa - pb).norm() <= kWeldTol) {
                const int ra = find(order[a]);
                const int rb = find(order[b]);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }

    // Vertex ids follow the first appearance in sorted order for stable numbering.
    std::vector<int> id(pts.size(), -1);
    std::vector<Point> vertices;
    for (int idx : order) {
        const int root = find(idx);
        if (id[root] < 0) {
            id[root] = static_cast<int>(vertices.size());
            vertices.push_back(pts[root]);
        }
    }

    std::vector<std::vector<int>> polygons(loops.size());
    for (std::size_t k = 0; k < pts.size(); ++k) polygons[owner[k].first].push_back(id[find(static_cast<int>(k))]);
    for (auto& poly : polygons) {
        std::vector<int> clean;
        for (int v : poly)
            if (clean.empty() || clean.back() != v) clean.push_back(v);
        while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
        poly = std::move(clean);
    }
    return Mesh(std::move(vertices), std::move(polygons), family, resolution);
}

Mesh quad_mesh(int n)
{
    std::vector<Point> pts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) pts.emplace_back(double(i) / n, double(j) / n);
    std::vector<std::vector<int>> polys;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) polys.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return Mesh(std::move(pts), std::move(polys), MeshFamily::Quad, n);
}

Mesh tri_mesh(int n, std::uint64_t seed, double jitter)
{
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            Point p(double(i) / n, double(j) / n);
            if (jitter > 0.0 && i > 0 && i < n && j > 0 && j < n) {
                p.x() += jitter / n * (2.0 * unit_uniform(rng) - 1.0);
                p.y() += jitter / n * (2.0 * unit_uniform(rng) - 1.0);
            }
            pts.push_back(p);
        }
    std::vector<std::vector<int>> polys;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            polys.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            polys.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return Mesh(std::move(pts), std::move(polys), MeshFamily::Tri, n);
}

Mesh hex_mesh(int n)
{
    // Triangular lattice with rows on y = 0 and y = 1; its clipped Voronoi
    // cells are hexagons inside and half/quarter hexagons along the boundary.
    const int rows = std::max(2, static_cast<int>(std::lround(n * 2.0 / std::sqrt(3.0))));
    std::vector<Point> seeds;
    for (int k = 0; k <= rows; ++k) {
        const double y = double(k) / rows;
        if (k % 2 == 0)
            for (int i = 0; i <= n; ++i) seeds.emplace_back(double(i) / n, y);
        else
            for (int i = 0; i < n; ++i) seeds.emplace_back((i + 0.5) / n, y);
    }
    return voronoi_mesh(seeds, MeshFamily::Hex, n);
}

} // namespace

std::vector<std::vector<Point>> voronoi_cells(const std::vector<Point>& seeds)
{
    SeedGrid grid(seeds);
    std::vector<Loop> cells;
    cells.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) cells.push_back(voronoi_cell(seeds, grid, static_cast<int>(i)));
    return cells;
}

Mesh voronoi_mesh(const std::vector<Point>& seeds, MeshFamily family, int resolution)
{
    if (seeds.size() < 4) throw MeshError("Voronoi mesh needs at least 4 seeds");
    return weld_loops(voronoi_cells(seeds), family, resolution);
}

LloydResult lloyd_relax(std::vector<Point> seeds, int iterations, double move_tol)
{
    LloydResult res;
    for (int it = 0; it < iterations; ++it) {
        const auto cells = voronoi_cells(seeds);
        double move = 0.0;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const Point c = polygon_centroid(cells[i]);
            move = std::max(move, (c - seeds[i]).norm());
            seeds[i] = c;
        }
        res.iterations = it + 1;
        res.last_move = move;
        if (move < move_tol) break;
    }
    res.seeds = std::move(seeds);
    return res;
}

Mesh lloyd_cvt(int n_seeds, int iterations, std::uint64_t seed, int resolution)
{
    if (n_seeds < 4) throw MeshError("CVT needs at least 4 seeds, got " + std::to_string(n_seeds));
    std::mt19937_64 rng(seed);
    std::vector<Point> seeds;
    seeds.reserve(n_seeds);
    constexpr int kMaxRetries = 16;
    for (int i = 0; i < n_seeds; ++i) {
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt == kMaxRetries) throw MeshError("could not place distinct CVT seeds");
            const Point p(unit_uniform(rng), unit_uniform(rng));
            const bool duplicate = std::any_of(seeds.begin(), seeds.end(), [&](const Point& q) { return (p - q).norm() < 1e-12; });
            if (!duplicate) {
                seeds.push_back(p);
                break;
            }
        }
    }
    auto relaxed = lloyd_relax(std::move(seeds), iterations);
    return voronoi_mesh(relaxed.seeds, MeshFamily::Cvt, resolution);
}

Mesh generate(MeshFamily family, int n, std::uint64_t seed, const GenerateOptions& options)
{
    if (n < 2) throw MeshError("mesh resolution must be at least 2, got " + std::to_string(n));
    switch (family) {
    case MeshFamily::Quad: return quad_mesh(n);
    case MeshFamily::Tri: return tri_mesh(n, seed, options.tri_jitter);
    case MeshFamily::Cvt: return lloyd_cvt(n * n, options.lloyd_iterations, seed, n);
    case MeshFamily::Hex:
        if (n < 4) throw MeshError("HEX meshes need resolution at least 4, got " + std::to_string(n));
        return hex_mesh(n);
    }
    throw MeshError("invalid mesh family");
}

} // namespace vem
