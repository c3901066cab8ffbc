#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace vem {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kAreaTol = 1e-10;
constexpr double kShapeLimit = 1e4;

BoundarySide side_of(const Point& a, const Point& b)
{
    auto on = [](double c, double value) { return std::abs(c - value) <= kBoundaryTol; };
    if (on(a.y(), 0.0) && on(b.y(), 0.0)) return BoundarySide::Bottom;
    if (on(a.x(), 1.0) && on(b.x(), 1.0)) return BoundarySide::Right;
    if (on(a.y(), 1.0) && on(b.y(), 1.0)) return BoundarySide::Top;
    if (on(a.x(), 0.0) && on(b.x(), 0.0)) return BoundarySide::Left;
    return BoundarySide::None;
}

bool on_square_boundary(const Point& p)
{
    return std::abs(p.x()) <= kBoundaryTol || std::abs(p.x() - 1.0) <= kBoundaryTol
        || std::abs(p.y()) <= kBoundaryTol || std::abs(p.y() - 1.0) <= kBoundaryTol;
}

} // namespace

std::string_view to_string(MeshFamily family)
{
    switch (family) {
    case MeshFamily::Quad: return "QUAD";
    case MeshFamily::Tri: return "TRI";
    case MeshFamily::Cvt: return "CVT";
    case MeshFamily::Hex: return "HEX";
    }
    return "?";
}

MeshFamily parse_family(std::string_view name)
{
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "QUAD") return MeshFamily::Quad;
    if (upper == "TRI") return MeshFamily::Tri;
    if (upper == "CVT") return MeshFamily::Cvt;
    if (upper == "HEX") return MeshFamily::Hex;
    throw MeshError("unknown mesh family '" + std::string(name) + "' (expected QUAD, TRI, CVT or HEX)");
}

double signed_area(const std::vector<Point>& loop)
{
    double a = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = loop[i];
        const Point& q = loop[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

Point polygon_centroid(const std::vector<Point>& loop)
{
    // Shoelace centroid, taken relative to the first vertex to limit cancellation.
    const Point o = loop.front();
    double a = 0.0;
    Point c = Point::Zero();
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = loop[i] - o;
        const Point q = loop[(i + 1) % n] - o;
        const double cross = p.x() * q.y() - q.x() * p.y();
        a += cross;
        c += cross * (p + q);
    }
    return o + c / (3.0 * a);
}

double polygon_diameter(const std::vector<Point>& loop)
{
    double d = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
        for (std::size_t j = i + 1; j < loop.size(); ++j)
            d = std::max(d, (loop[i] - loop[j]).norm());
    return d;
}

bool point_in_polygon(const Point& p, const std::vector<Point>& loop, double tol)
{
    // Winding test for a CCW loop; points within `tol` of an edge count as inside.
    const std::size_t n = loop.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = loop[j];
        const Point& b = loop[i];
        const Point ab = b - a;
        const double len = ab.norm();
        if (len > 0.0) {
            const double t = std::clamp((p - a).dot(ab) / (len * len), 0.0, 1.0);
            if ((a + t * ab - p).norm() <= tol) return true;
        }
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

Mesh::Mesh(std::vector<Point> points, std::vector<std::vector<int>> polygons, MeshFamily family, int resolution)
    : family_(family), resolution_(resolution)
{
    vertices_.reserve(points.size());
    for (const Point& p : points) {
        if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw MeshError("vertex with non-finite coordinates");
        vertices_.push_back({p, on_square_boundary(p)});
    }

    const int nv = static_cast<int>(vertices_.size());
    elements_.reserve(polygons.size());
    for (std::size_t k = 0; k < polygons.size(); ++k) {
        auto& loop = polygons[k];
        const int pk = static_cast<int>(k);
        if (loop.size() < 3) throw MeshError("polygon " + std::to_string(k) + " has fewer than 3 vertices", pk);
        std::vector<Point> pts;
        for (int v : loop) {
            if (v < 0 || v >= nv)
                throw MeshError("polygon " + std::to_string(k) + " references vertex " + std::to_string(v)
                                    + " out of range [0," + std::to_string(nv) + ")",
                                pk);
            pts.push_back(vertices_[v].p);
        }
        Element e;
        e.vertices = std::move(loop);
        e.area = signed_area(pts);
        if (!(e.area > 0.0))
            throw MeshError("polygon " + std::to_string(k) + " is not counterclockwise (signed area "
                                + std::to_string(e.area) + ")",
                            pk);
        e.centroid = polygon_centroid(pts);
        e.diameter = polygon_diameter(pts);
        if (e.diameter * e.diameter / e.area > kShapeLimit)
            throw MeshError("polygon " + std::to_string(k) + " is degenerate (h_P^2/|P| > 1e4)", pk);
        elements_.push_back(std::move(e));
    }
    build_edges();
    validate();
}

std::vector<std::vector<int>> Mesh::polygons() const
{
    std::vector<std::vector<int>> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e.vertices);
    return out;
}

void Mesh::build_edges()
{
    std::map<std::pair<int, int>, int> index;
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        Element& el = elements_[k];
        const std::size_t n = el.vertices.size();
        el.edges.resize(n);
        el.edge_sign.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int a = el.vertices[i];
            const int b = el.vertices[(i + 1) % n];
            if (a == b) throw MeshError("polygon " + std::to_string(k) + " repeats vertex " + std::to_string(a), int(k));
            const auto key = std::minmax(a, b);
            auto [it, inserted] = index.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
            if (inserted) {
                Edge e;
                e.v = {key.first, key.second};
                const Point d = vertices_[e.v[1]].p - vertices_[e.v[0]].p;
                e.length = d.norm();
                e.tangent = d / e.length;
                e.normal = Point(-e.tangent.y(), e.tangent.x());
                e.elements = {static_cast<int>(k), -1};
                edges_.push_back(e);
            } else {
                Edge& e = edges_[it->second];
                if (e.elements[1] != -1)
                    throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," + std::to_string(key.second)
                                        + ") shared by more than two polygons",
                                    int(k));
                if (e.elements[0] == static_cast<int>(k))
                    throw MeshError("polygon " + std::to_string(k) + " uses an edge twice", int(k));
                e.elements[1] = static_cast<int>(k);
            }
            el.edges[i] = it->second;
            el.edge_sign[i] = (a < b) ? 1 : -1;
        }
    }
    for (Edge& e : edges_) {
        e.boundary = e.elements[1] == -1;
        if (e.boundary) e.side = side_of(vertices_[e.v[0]].p, vertices_[e.v[1]].p);
    }
}

void Mesh::validate() const
{
    // Interior edges must be traversed in opposite directions by their two polygons.
    std::vector<int> sign_sum(edges_.size(), 0);
    for (const auto& el : elements_)
        for (std::size_t i = 0; i < el.edges.size(); ++i) sign_sum[el.edges[i]] += el.edge_sign[i];
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (!e.boundary && sign_sum[i] != 0)
            throw MeshError("edge (" + std::to_string(e.v[0]) + "," + std::to_string(e.v[1])
                                + ") is traversed in the same direction by both polygons",
                            e.elements[1]);
        if (e.boundary && e.side == BoundarySide::None)
            throw MeshError("boundary edge (" + std::to_string(e.v[0]) + "," + std::to_string(e.v[1])
                                + ") does not lie on a side of the unit square",
                            e.elements[0]);
    }

    std::vector<char> used(vertices_.size(), 0);
    for (const auto& el : elements_)
        for (int v : el.vertices) used[v] = 1;
    for (std::size_t v = 0; v < used.size(); ++v)
        if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not referenced by any polygon");

    double total = 0.0;
    for (const auto& el : elements_) total += el.area;
    if (std::abs(total - 1.0) > kAreaTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "polygon areas sum to " << total << ", expected 1";
        throw MeshError(msg.str());
    }
}

MeshMetrics metrics(const Mesh& mesh)
{
    MeshMetrics m;
    m.h_P.reserve(mesh.num_elements());
    for (const auto& el : mesh.elements()) {
        m.h_P.push_back(el.diameter);
        m.h = std::max(m.h, el.diameter);
    }
    m.h_e.reserve(mesh.num_edges());
    for (const auto& e : mesh.edges()) m.h_e.push_back(e.length);

    std::vector<int> count(mesh.num_vertices(), 0);
    m.h_v.assign(mesh.num_vertices(), 0.0);
    for (const auto& el : mesh.elements())
        for (int v : el.vertices) {
            m.h_v[v] += el.diameter;
            ++count[v];
        }
    for (std::size_t v = 0; v < m.h_v.size(); ++v) m.h_v[v] /= count[v];
    return m;
}

} // namespace vem
