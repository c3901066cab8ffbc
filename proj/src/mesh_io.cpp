#include "vem/mesh.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vem {

namespace {

struct Line {
    int number;
    std::string text;
};

std::vector<Line> content_lines(std::string_view text)
{
    std::vector<Line> out;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++number;
        std::string line(text.substr(pos, end - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] != '#') out.push_back({number, line});
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& msg) { throw MeshError("line " + std::to_string(line) + ": " + msg); }

std::vector<long long> integers(const Line& line)
{
    std::istringstream in(line.text);
    std::vector<long long> out;
    std::string tok;
    while (in >> tok) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(line.number, "expected an integer, got '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

Mesh parse_mesh(std::string_view text, MeshFamily family, int resolution)
{
    const auto lines = content_lines(text);
    if (lines.empty()) throw MeshError("line 1: empty mesh file");
    const auto header = integers(lines[0]);
    if (header.size() != 3) fail(lines[0].number, "header must be 'nv ne np'");
    const long long nv = header[0], ne = header[1], np = header[2];
    if (nv < 3 || ne < 0 || np < 1) fail(lines[0].number, "invalid counts in header");
    if (static_cast<long long>(lines.size()) != 1 + nv + np)
        fail(lines.back().number, "expected " + std::to_string(nv) + " vertex lines and " + std::to_string(np)
                                      + " polygon lines, found " + std::to_string(lines.size() - 1) + " data lines");

    std::vector<Point> pts;
    pts.reserve(nv);
    for (long long i = 0; i < nv; ++i) {
        const Line& l = lines[1 + i];
        std::istringstream in(l.text);
        double x = 0, y = 0;
        std::string extra;
        if (!(in >> x >> y) || (in >> extra)) fail(l.number, "vertex line must hold exactly two coordinates");
        pts.emplace_back(x, y);
    }

    std::vector<std::vector<int>> polys;
    std::vector<int> poly_line;
    for (long long p = 0; p < np; ++p) {
        const Line& l = lines[1 + nv + p];
        const auto v = integers(l);
        if (v.empty() || v[0] < 3 || static_cast<long long>(v.size()) != v[0] + 1)
            fail(l.number, "polygon line must be 'k i1 ... ik' with k >= 3");
        std::vector<int> loop;
        for (std::size_t k = 1; k < v.size(); ++k) {
            if (v[k] < 0 || v[k] >= nv)
                fail(l.number, "vertex index " + std::to_string(v[k]) + " out of range [0," + std::to_string(nv) + ")");
            loop.push_back(static_cast<int>(v[k]));
        }
        polys.push_back(std::move(loop));
        poly_line.push_back(l.number);
    }

    try {
        Mesh mesh(std::move(pts), std::move(polys), family, resolution);
        if (static_cast<long long>(mesh.num_edges()) != ne)
            fail(lines[0].number, "header declares " + std::to_string(ne) + " edges but polygons define "
                                      + std::to_string(mesh.num_edges()));
        return mesh;
    } catch (const MeshError& e) {
        if (e.polygon() >= 0 && e.polygon() < static_cast<int>(poly_line.size()))
            fail(poly_line[e.polygon()], e.what());
        throw;
    }
}

Mesh read_mesh(const std::filesystem::path& path, MeshFamily family, int resolution)
{
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mesh(buf.str(), family, resolution);
}

std::string format_mesh(const Mesh& mesh)
{
    std::ostringstream out;
    out.precision(17);
    out << "# family " << to_string(mesh.family()) << " resolution " << mesh.resolution() << "\n";
    out << mesh.num_vertices() << " " << mesh.num_edges() << " " << mesh.num_elements() << "\n";
    for (const auto& v : mesh.vertices()) out << v.p.x() << " " << v.p.y() << "\n";
    for (const auto& e : mesh.elements()) {
        out << e.vertices.size();
        for (int v : e.vertices) out << " " << v;
        out << "\n";
    }
    return out.str();
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file " + path.string());
    out << format_mesh(mesh);
    if (!out) throw MeshError("failed writing mesh file " + path.string());
}

} // namespace vem
