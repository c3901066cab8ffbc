#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vem/analysis.hpp"
#include "vem/solve.hpp"

namespace vem {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Problem { Poisson, Biharmonic };

std::string_view to_string(Problem problem);
Problem parse_problem(std::string_view name);

struct ExperimentConfig {
    Problem problem = Problem::Poisson;
    int p2 = 1;
    int r = 2;
    MeshFamily family = MeshFamily::Quad;
    std::vector<int> levels{8, 16, 32};
    std::optional<StabU> stab_u;         ///< empty: problem default
    std::optional<StabAlpha> stab_alpha; ///< empty: problem default
    double tol = 1e-12;
    std::uint64_t seed = 1;
    std::string out;                ///< CSV path; empty writes to stdout
    std::string dump_matrices;      ///< directory for matrix dumps; empty disables
    int workers = 1;
    bool estimate_condition = true; ///< false: sparse direct solve, no kappa

    int p1() const { return problem == Problem::Poisson ? 1 : 2; }
    SpaceParams params() const { return {p1(), p2, r}; }
    StabConfig stabilization() const
    {
        const StabConfig d = StabConfig::defaults(p1());
        return {stab_u.value_or(d.u), stab_alpha.value_or(d.alpha)};
    }
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Applies `key = value` lines ('#' starts a comment) on top of `base`.
/// Keys match the long CLI flags, with '-' or '_' accepted.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig read_config(const std::filesystem::path& path, ExperimentConfig base = {});
/// Sets one key; throws ConfigError for unknown keys or bad values.
void apply_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

std::vector<int> parse_levels(std::string_view text);

struct LevelResult {
    MeshFamily family = MeshFamily::Quad;
    int one_over_h = 0;
    int n_elems = 0;
    int n_dofs = 0;                ///< before boundary elimination
    StabConfig stab;
    double energy_err = 0.0;
    double second_err = 0.0;       ///< L2 (poisson) or Linf (biharmonic)
    std::optional<double> cond_est;
    int cg_iters = 0;
};

struct ErrorReport {
    Problem problem = Problem::Poisson;
    SpaceParams params{1, 1, 2};
    std::vector<LevelResult> rows;

    EocTable energy_eoc() const;
    EocTable second_eoc() const;
    double kappa_slope() const;
};

/// Solves one level. Matrix dumps go to config.dump_matrices/level_<n>/ when set.
LevelResult run_level(const ExperimentConfig& config, int n, const Mesh& mesh);
LevelResult run_level(const ExperimentConfig& config, int n);
ErrorReport run(const ExperimentConfig& config);

std::string csv_header(Problem problem);
/// Rows at 17 significant digits, "na" for unavailable kappa, '#' footer lines
/// with EOC and kappa slopes.
void write_csv(std::ostream& out, const ErrorReport& report);
/// Inverse of write_csv (footer lines are skipped).
ErrorReport parse_csv(std::istream& in);

/// Two-column (h, error) series: <prefix>_energy.dat and <prefix>_l2.dat or _linf.dat.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& prefix, const ErrorReport& report);

struct SweepTable {
    Problem problem = Problem::Poisson;
    SpaceParams params{1, 1, 2};
    MeshFamily family = MeshFamily::Quad;
    std::vector<int> levels;
    std::vector<int> n_dofs;
    std::vector<StabConfig> columns;
    std::vector<std::vector<std::optional<double>>> kappa; ///< [level][column]
};

/// Condition numbers for every admissible (U, alpha) pair.
SweepTable sweep(const ExperimentConfig& config);
void write_sweep(std::ostream& out, const SweepTable& table);

} // namespace vem
