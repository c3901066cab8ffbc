#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vem/projector.hpp"

namespace vem {

enum class StabU { Identity, DPerp };
enum class StabAlpha { TraceOverNdofs, TraceOver3, InvArea, InvH2 };

std::string_view to_string(StabU u);
std::string_view to_string(StabAlpha a);
StabU parse_stab_u(std::string_view s);
StabAlpha parse_stab_alpha(std::string_view s);

struct StabConfig {
    StabU u = StabU::Identity;
    StabAlpha alpha = StabAlpha::TraceOverNdofs;

    /// Throws SpaceError when alpha is not admissible for p1.
    void validate(int p1) const;
    static StabConfig defaults(int p1);
};

/// All admissible (U, alpha) pairs for p1.
std::vector<StabConfig> stab_configs(int p1);

struct LocalStiffness {
    Eigen::MatrixXd M;
    Eigen::MatrixXd S;
    Eigen::MatrixXd A;
};

/// Global size h in alpha = 1/h^2: the nominal 1/resolution of generated meshes
/// (so that |P| = h^2 on QUAD), else the largest element diameter.
double stabilization_mesh_size(const Mesh& mesh, const MeshMetrics& metrics);

/// M = pi^T G pi, S = alpha (I - Q)^T U (I - Q), A = M + S.
LocalStiffness local_stiffness(const ProjectorPack& pack, const StabConfig& config, int p1, double area,
                               double mesh_h);

/// Moments: <f_h, phi_i> = int_P Pi0_{r-2p1} f phi_i through the interior moments,
/// falling back to EllipticProjection when r < 2 p1.
/// EllipticProjection: int_P Pi0_{r-p1} f Pi_r phi_i.
enum class LoadRule { Moments, EllipticProjection };

Eigen::VectorXd load_vector(const LocalElement& element, const LocalLayout& layout, const DofsTuple& tuple,
                            const ProjectorPack& pack, const ScalarField& f, LoadRule rule = LoadRule::Moments);

struct ConstraintSet {
    std::vector<int> dofs;      ///< sorted global indices
    std::vector<double> values; ///< prescribed values, same order
};

/// Clamped conditions d^j_n v = g-data, j < p1, on every boundary edge. With an
/// empty `g` all values are zero.
ConstraintSet boundary_constraints(const Mesh& mesh, const MeshMetrics& metrics, const DofsTuple& tuple,
                                   const GlobalDofMap& map, const SmoothField& g = {});

/// Per-mesh data shared by assembly, error evaluation and output.
struct Discretization {
    const Mesh* mesh = nullptr;
    MeshMetrics metrics;
    DofsTuple tuple;
    GlobalDofMap map;
    std::vector<LocalElement> elements;
    std::vector<LocalLayout> layouts;
    std::vector<ProjectorPack> packs;
};

Discretization discretize(const Mesh& mesh, const SpaceParams& params, int workers = 1);

struct LinearSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> A; ///< reduced to the free DOFs
    Eigen::VectorXd b;
    std::vector<int> free_dofs;    ///< reduced index -> global index
    std::vector<int> reduced;      ///< global index -> reduced index or -1
    ConstraintSet constraints;
    int n_full = 0;
    std::optional<Eigen::SparseMatrix<double, Eigen::RowMajor>> full; ///< before elimination, on request

    /// Global DOF vector from a reduced solution and the prescribed values.
    Eigen::VectorXd expand(const Eigen::VectorXd& x) const;
};

struct AssemblyOptions {
    StabConfig stab;
    LoadRule load = LoadRule::Moments;
    int workers = 1;
    bool keep_full = false;
};

LinearSystem assemble(const Discretization& disc, const ScalarField& f, const SmoothField& g,
                      const AssemblyOptions& options);

/// Coordinate text format, one `row col value` line per stored entry (0-based).
void write_coordinate(std::ostream& out, const Eigen::SparseMatrix<double, Eigen::RowMajor>& A);

} // namespace vem
