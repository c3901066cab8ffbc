#include "vem/assembly.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <string>

#include "vem/parallel.hpp"

namespace vem {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

std::string_view to_string(StabU u) { return u == StabU::Identity ? "I" : "Dperp"; }

std::string_view to_string(StabAlpha a)
{
    switch (a) {
    case StabAlpha::TraceOverNdofs: return "trace_ndof";
    case StabAlpha::TraceOver3: return "trace3";
    case StabAlpha::InvArea: return "inv_area";
    case StabAlpha::InvH2: return "inv_h2";
    }
    return "?";
}

StabU parse_stab_u(std::string_view s)
{
    const std::string v = lower(s);
    if (v == "i" || v == "identity" || v == "dofi-dofi") return StabU::Identity;
    if (v == "dperp" || v == "d-perp" || v == "d_perp") return StabU::DPerp;
    throw SpaceError("unknown stabilization U '" + std::string(s) + "' (expected I or Dperp)");
}

StabAlpha parse_stab_alpha(std::string_view s)
{
    const std::string v = lower(s);
    if (v == "trace_ndof" || v == "trace/ndof") return StabAlpha::TraceOverNdofs;
    if (v == "trace3" || v == "trace/3") return StabAlpha::TraceOver3;
    if (v == "inv_area" || v == "1/area") return StabAlpha::InvArea;
    if (v == "inv_h2" || v == "1/h2") return StabAlpha::InvH2;
    throw SpaceError("unknown stabilization alpha '" + std::string(s)
                     + "' (expected trace_ndof, trace3, inv_area or inv_h2)");
}

void StabConfig::validate(int p1) const
{
    const bool ok = p1 == 1 ? alpha == StabAlpha::TraceOverNdofs : alpha != StabAlpha::TraceOverNdofs;
    if (!ok)
        throw SpaceError("stabilization alpha '" + std::string(to_string(alpha)) + "' is not available for "
                         + (p1 == 1 ? "poisson (use trace_ndof)" : "biharmonic (use trace3, inv_area or inv_h2)"));
}

StabConfig StabConfig::defaults(int p1)
{
    return {StabU::Identity, p1 == 1 ? StabAlpha::TraceOverNdofs : StabAlpha::TraceOver3};
}

std::vector<StabConfig> stab_configs(int p1)
{
    std::vector<StabConfig> out;
    for (StabU u : {StabU::Identity, StabU::DPerp}) {
        if (p1 == 1)
            out.push_back({u, StabAlpha::TraceOverNdofs});
        else
            for (StabAlpha a : {StabAlpha::TraceOver3, StabAlpha::InvArea, StabAlpha::InvH2}) out.push_back({u, a});
    }
    return out;
}

double stabilization_mesh_size(const Mesh& mesh, const MeshMetrics& metrics)
{
    return mesh.resolution() > 0 ? 1.0 / mesh.resolution() : metrics.h;
}

LocalStiffness local_stiffness(const ProjectorPack& pack, const StabConfig& config, int p1, double area, double mesh_h)
{
    config.validate(p1);
    LocalStiffness ls;
    ls.M = pack.pi.transpose() * pack.G * pack.pi;
    ls.M = 0.5 * (ls.M + ls.M.transpose()).eval();
    const Eigen::Index n = pack.Q.rows();
    const Eigen::MatrixXd IQ = Eigen::MatrixXd::Identity(n, n) - pack.Q;

    double alpha = 0.0;
    switch (config.alpha) {
    case StabAlpha::TraceOverNdofs: alpha = ls.M.trace() / static_cast<double>(n); break;
    case StabAlpha::TraceOver3: alpha = ls.M.trace() / 3.0; break;
    case StabAlpha::InvArea: alpha = 1.0 / area; break;
    case StabAlpha::InvH2: alpha = 1.0 / (mesh_h * mesh_h); break;
    }

    if (config.u == StabU::Identity) {
        ls.S = alpha * IQ.transpose() * IQ;
    } else {
        const Eigen::MatrixXd& D = pack.D;
        const Eigen::MatrixXd DtD = D.transpose() * D;
        const Eigen::MatrixXd U = Eigen::MatrixXd::Identity(n, n) - D * DtD.ldlt().solve(D.transpose());
        ls.S = alpha * IQ.transpose() * U * IQ;
    }
    ls.S = 0.5 * (ls.S + ls.S.transpose()).eval();
    ls.A = ls.M + ls.S;
    return ls;
}

Eigen::VectorXd load_vector(const LocalElement& el, const LocalLayout& layout, const DofsTuple& tuple,
                            const ProjectorPack& pack, const ScalarField& f, LoadRule rule)
{
    const int r = tuple.params.r;
    const int p1 = tuple.params.p1;
    const int order = 2 * r + 4;
    const int s_moments = r - 2 * p1;
    if (rule == LoadRule::Moments && s_moments >= 0) {
        // int_P m_b phi_i = h_P^2 delta(i, interior moment b)
        const Eigen::VectorXd c = l2_poly_projection(el, f, s_moments, order);
        Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.size());
        out.segment(layout.interior_offset(), c.size()) = el.diameter * el.diameter * c;
        return out;
    }
    const int s = r - p1;
    const Eigen::VectorXd c = l2_poly_projection(el, f, s, order);
    const Eigen::MatrixXd M = cross_mass(el, s, r, 2 * r + 2);
    return pack.pi.transpose() * (M.transpose() * c);
}

ConstraintSet boundary_constraints(const Mesh& mesh, const MeshMetrics& metrics, const DofsTuple& tuple,
                                   const GlobalDofMap& map, const SmoothField& g)
{
    const int p1 = tuple.params.p1;
    const auto nus = multi_indices(tuple.params.p2 - 1);
    std::vector<char> mark(map.n_dofs, 0);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& edge = mesh.edges()[e];
        if (!edge.boundary) continue;
        const bool horizontal = edge.side == BoundarySide::Bottom || edge.side == BoundarySide::Top;
        for (int v : edge.v)
            for (std::size_t k = 0; k < nus.size(); ++k) {
                const int normal_order = horizontal ? nus[k].y : nus[k].x;
                if (normal_order <= p1 - 1) mark[map.vertex_dof(v, static_cast<int>(k))] = 1;
            }
        int offset = 0;
        for (int j = 0; j < tuple.params.p2; ++j)
            for (int m = 0; m <= tuple.edge[j]; ++m, ++offset)
                if (j <= p1 - 1) mark[map.edge_dof(static_cast<int>(e), offset)] = 1;
    }
    ConstraintSet cs;
    for (int i = 0; i < map.n_dofs; ++i)
        if (mark[i]) cs.dofs.push_back(i);
    cs.values.assign(cs.dofs.size(), 0.0);
    if (g) {
        const Eigen::VectorXd gi = interpolate(mesh, metrics, tuple, map, g);
        for (std::size_t k = 0; k < cs.dofs.size(); ++k) cs.values[k] = gi[cs.dofs[k]];
    }
    return cs;
}

Discretization discretize(const Mesh& mesh, const SpaceParams& params, int workers)
{
    Discretization d;
    d.mesh = &mesh;
    d.metrics = metrics(mesh);
    d.tuple = dofs_tuple(params);
    d.map = global_numbering(mesh, d.tuple);
    const int ne = static_cast<int>(mesh.num_elements());
    d.elements.resize(ne);
    d.layouts.resize(ne);
    d.packs.resize(ne);
    parallel_for(ne, workers, [&](int e) {
        d.elements[e] = local_element(mesh, d.metrics, e);
        d.layouts[e] = local_layout(mesh.elements()[e], d.tuple);
        d.packs[e] = build_projector(d.elements[e], d.layouts[e], d.tuple);
    });
    return d;
}

Eigen::VectorXd LinearSystem::expand(const Eigen::VectorXd& x) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_full);
    for (std::size_t i = 0; i < free_dofs.size(); ++i) out[free_dofs[i]] = x[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < constraints.dofs.size(); ++k) out[constraints.dofs[k]] = constraints.values[k];
    return out;
}

LinearSystem assemble(const Discretization& disc, const ScalarField& f, const SmoothField& g,
                      const AssemblyOptions& options)
{
    const Mesh& mesh = *disc.mesh;
    const int p1 = disc.tuple.params.p1;
    const int ne = static_cast<int>(mesh.num_elements());

    const double mesh_h = stabilization_mesh_size(mesh, disc.metrics);
    std::vector<Eigen::MatrixXd> local_A(ne);
    std::vector<Eigen::VectorXd> local_b(ne);
    parallel_for(ne, options.workers, [&](int e) {
        local_A[e] = local_stiffness(disc.packs[e], options.stab, p1, disc.elements[e].area, mesh_h).A;
        local_b[e] = f ? load_vector(disc.elements[e], disc.layouts[e], disc.tuple, disc.packs[e], f, options.load)
                       : Eigen::VectorXd::Zero(disc.layouts[e].size()).eval();
    });

    LinearSystem sys;
    sys.n_full = disc.map.n_dofs;
    sys.constraints = boundary_constraints(mesh, disc.metrics, disc.tuple, disc.map, g);
    std::vector<double> prescribed(sys.n_full, 0.0);
    sys.reduced.assign(sys.n_full, 0);
    for (std::size_t k = 0; k < sys.constraints.dofs.size(); ++k) {
        sys.reduced[sys.constraints.dofs[k]] = -1;
        prescribed[sys.constraints.dofs[k]] = sys.constraints.values[k];
    }
    for (int i = 0; i < sys.n_full; ++i)
        if (sys.reduced[i] >= 0) {
            sys.reduced[i] = static_cast<int>(sys.free_dofs.size());
            sys.free_dofs.push_back(i);
        }
    const int nf = static_cast<int>(sys.free_dofs.size());
    sys.b = Eigen::VectorXd::Zero(nf);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> reduced_triplets;
    std::vector<Triplet> full_triplets;
    for (int e = 0; e < ne; ++e) {
        const auto& idx = disc.map.local_to_global[e];
        const auto& sg = disc.map.sign[e];
        const Eigen::MatrixXd& A = local_A[e];
        const int n = static_cast<int>(idx.size());
        for (int i = 0; i < n; ++i) {
            const int gi = idx[i];
            const int ri = sys.reduced[gi];
            if (ri >= 0) sys.b[ri] += sg[i] * local_b[e][i];
            for (int j = 0; j < n; ++j) {
                const double v = sg[i] * sg[j] * A(i, j);
                const int gj = idx[j];
                if (options.keep_full) full_triplets.emplace_back(gi, gj, v);
                if (ri < 0) continue;
                const int rj = sys.reduced[gj];
                if (rj >= 0)
                    reduced_triplets.emplace_back(ri, rj, v);
                else
                    sys.b[ri] -= v * prescribed[gj];
            }
        }
    }
    sys.A.resize(nf, nf);
    sys.A.setFromTriplets(reduced_triplets.begin(), reduced_triplets.end());
    sys.A.makeCompressed();
    if (options.keep_full) {
        Eigen::SparseMatrix<double, Eigen::RowMajor> K(sys.n_full, sys.n_full);
        K.setFromTriplets(full_triplets.begin(), full_triplets.end());
        K.makeCompressed();
        sys.full = std::move(K);
    }
    return sys;
}

void write_coordinate(std::ostream& out, const Eigen::SparseMatrix<double, Eigen::RowMajor>& A)
{
    const auto old = out.precision(17);
    for (int i = 0; i < A.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, i); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
    out.precision(old);
}

} // namespace vem
