// vemrun: convergence and conditioning experiments for the conforming VEM.
//
//   vemrun run --problem poisson --p2 2 --r 2 --family QUAD --levels 8,16,32
//   vemrun sweep --problem biharmonic --p2 2 --r 2 --levels 8,16,32,64
//   vemrun meshgen --family CVT --n 16 --out cvt16.mesh

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "vem/experiment.hpp"

namespace {

using Overrides = std::map<std::string, std::string>;

void add_config_options(CLI::App& app, Overrides& values, std::string& config_file)
{
    app.add_option("--config", config_file, "key = value file, applied before the flags below")->check(CLI::ExistingFile);
    const std::pair<const char*, const char*> keys[] = {
        {"problem", "poisson or biharmonic"},
        {"p2", "regularity parameter (global C^{p2-1})"},
        {"r", "polynomial degree"},
        {"family", "QUAD, TRI, CVT or HEX"},
        {"levels", "comma separated 1/h values"},
        {"stab-u", "I or Dperp"},
        {"stab-alpha", "trace_ndof (poisson); trace3, inv_area or inv_h2 (biharmonic)"},
        {"tol", "CG relative residual tolerance"},
        {"seed", "mesh generator seed"},
        {"out", "output CSV path (default stdout)"},
        {"dump-matrices", "directory for per-level A, b and projector dumps"},
        {"workers", "threads for element loops"},
    };
    for (const auto& [key, help] : keys) {
        app.add_option_function<std::string>(
            std::string("--") + key, [&values, k = std::string(key)](const std::string& v) { values[k] = v; }, help);
    }
}

vem::ExperimentConfig build_config(const Overrides& values, const std::string& config_file)
{
    vem::ExperimentConfig config;
    if (!config_file.empty()) config = vem::read_config(config_file);
    for (const auto& [key, value] : values) vem::apply_config_value(config, key, value);
    config.validate();
    return config;
}

std::ostream& open_output(const std::string& path, std::ofstream& file)
{
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Conforming virtual element experiments (Poisson and biharmonic)"};
    app.require_subcommand(1);

    Overrides run_values, sweep_values;
    std::string run_config, sweep_config, plot_prefix;
    bool direct = false;

    CLI::App* run = app.add_subcommand("run", "error and conditioning table over refinement levels");
    add_config_options(*run, run_values, run_config);
    run->add_option("--plot", plot_prefix, "write <prefix>_energy.dat and <prefix>_l2.dat (or _linf.dat)");
    run->add_flag("--direct", direct, "sparse Cholesky instead of CG (no condition estimate)");

    CLI::App* sweep = app.add_subcommand("sweep", "condition numbers for every (U, alpha) pair");
    add_config_options(*sweep, sweep_values, sweep_config);

    std::string family = "QUAD", mesh_out;
    int n = 8;
    std::uint64_t seed = 1;
    CLI::App* meshgen = app.add_subcommand("meshgen", "write a generated mesh");
    meshgen->add_option("--family", family, "QUAD, TRI, CVT or HEX");
    meshgen->add_option("--n", n, "1/h")->check(CLI::PositiveNumber);
    meshgen->add_option("--seed", seed, "generator seed");
    meshgen->add_option("--out", mesh_out, "mesh file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            vem::ExperimentConfig config = build_config(run_values, run_config);
            config.estimate_condition = !direct;
            vem::ErrorReport report;
            report.problem = config.problem;
            report.params = config.params();
            for (int level : config.levels) {
                report.rows.push_back(vem::run_level(config, level));
                const auto& row = report.rows.back();
                std::cerr << "1/h=" << level << " dofs=" << row.n_dofs << " energy=" << row.energy_err
                          << " cg_iters=" << row.cg_iters << "\n";
            }
            std::ofstream file;
            vem::write_csv(open_output(config.out, file), report);
            if (!plot_prefix.empty())
                for (const auto& path : vem::write_plot_data(plot_prefix, report)) std::cerr << "wrote " << path << "\n";
        } else if (*sweep) {
            const vem::ExperimentConfig config = build_config(sweep_values, sweep_config);
            std::ofstream file;
            vem::write_sweep(open_output(config.out, file), vem::sweep(config));
        } else if (*meshgen) {
            const vem::Mesh mesh = vem::generate(vem::parse_family(family), n, seed);
            vem::write_mesh(mesh, mesh_out);
            std::cerr << "wrote " << mesh.num_elements() << " polygons to " << mesh_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
