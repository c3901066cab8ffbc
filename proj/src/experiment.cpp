#include "vem/experiment.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vem {

namespace {

std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string normalize_key(std::string_view key)
{
    std::string k = trim(key);
    while (!k.empty() && k.front() == '-') k.erase(k.begin());
    for (char& c : k) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (c == '-') c = '_';
    }
    return k;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
T parse_number(std::string_view key, std::string_view value)
{
    std::istringstream in{std::string(value)};
    T v{};
    in >> v;
    if (!in || !(in >> std::ws).eof())
        throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    return v;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Solved {
    Eigen::VectorXd u;
    std::optional<double> kappa;
    int iterations = 0;
};

Solved solve_level(const Discretization& disc, const ExactSolution& exact, const ExperimentConfig& config,
                   const StabConfig& stab, const std::filesystem::path& dump_dir)
{
    AssemblyOptions options;
    options.stab = stab;
    options.workers = config.workers;
    const LinearSystem sys = assemble(disc, exact.load(), {}, options);

    if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        std::ofstream a(dump_dir / "A.txt"), b(dump_dir / "b.txt"), packs(dump_dir / "packs.txt");
        if (!a || !b || !packs) throw std::runtime_error("cannot write matrix dump to " + dump_dir.string());
        write_coordinate(a, sys.A);
        b.precision(17);
        for (Eigen::Index i = 0; i < sys.b.size(); ++i) b << sys.b[i] << "\n";
        for (std::size_t e = 0; e < disc.packs.size(); ++e) write_pack(packs, static_cast<int>(e), disc.packs[e]);
    }

    Solved s;
    if (config.estimate_condition) {
        CgOptions cg_options;
        cg_options.tol = config.tol;
        const CgResult res = cg(sys.A, sys.b, generic_start(sys.A, sys.b, config.seed), cg_options);
        s.u = sys.expand(res.x);
        s.kappa = res.report.kappa;
        s.iterations = res.report.iterations;
    } else {
        const Eigen::SparseMatrix<double> A = sys.A;
        const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
        if (ldlt.info() != Eigen::Success) throw SolverError("sparse factorization failed");
        s.u = sys.expand(ldlt.solve(sys.b));
    }
    return s;
}

std::vector<double> column(const std::vector<LevelResult>& rows, double LevelResult::*field)
{
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(row.*field);
    return out;
}

std::vector<double> mesh_sizes(const std::vector<LevelResult>& rows)
{
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(1.0 / row.one_over_h);
    return out;
}

} // namespace

std::string_view to_string(Problem problem) { return problem == Problem::Poisson ? "poisson" : "biharmonic"; }

Problem parse_problem(std::string_view name)
{
    const std::string v = normalize_key(name);
    if (v == "poisson") return Problem::Poisson;
    if (v == "biharmonic") return Problem::Biharmonic;
    throw ConfigError("unknown problem '" + std::string(name) + "' (expected poisson or biharmonic)");
}

void ExperimentConfig::validate() const
{
    if (levels.empty()) throw ConfigError("levels: at least one refinement level is required");
    for (int n : levels)
        if (n < 1) throw ConfigError("levels: 1/h must be a positive integer, got " + std::to_string(n));
    if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tol: must lie in (0, 1), got " + num(tol));
    if (workers < 1) throw ConfigError("workers: must be at least 1");
    try {
        params().validate();
        stabilization().validate(p1());
    } catch (const SpaceError& e) {
        throw ConfigError(std::string(to_string(problem)) + ": " + e.what());
    }
}

std::vector<int> parse_levels(std::string_view text)
{
    std::vector<int> out;
    if (trim(text).empty()) return out;
    for (const std::string& item : split(text, ',')) {
        if (trim(item).empty()) throw ConfigError("levels: empty entry in '" + std::string(text) + "'");
        out.push_back(parse_number<int>("levels", item));
    }
    return out;
}

void apply_config_value(ExperimentConfig& c, std::string_view raw_key, std::string_view raw_value)
{
    const std::string key = normalize_key(raw_key);
    const std::string value = trim(raw_value);
    try {
        if (key == "problem") c.problem = parse_problem(value);
        else if (key == "p2") c.p2 = parse_number<int>(key, value);
        else if (key == "r") c.r = parse_number<int>(key, value);
        else if (key == "family") c.family = parse_family(value);
        else if (key == "levels") c.levels = parse_levels(value);
        else if (key == "stab_u") c.stab_u = parse_stab_u(value);
        else if (key == "stab_alpha") c.stab_alpha = parse_stab_alpha(value);
        else if (key == "tol") c.tol = parse_number<double>(key, value);
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "out") c.out = value;
        else if (key == "dump_matrices") c.dump_matrices = value;
        else if (key == "workers") c.workers = parse_number<int>(key, value);
        else throw ConfigError("unknown configuration key '" + std::string(raw_key) + "'");
    } catch (const SpaceError& e) {
        throw ConfigError(e.what());
    } catch (const MeshError& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base)
{
    int line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        try {
            apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

ExperimentConfig read_config(const std::filesystem::path& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

LevelResult run_level(const ExperimentConfig& config, int n, const Mesh& mesh)
{
    const ExactSolution exact = ExactSolution::bubble(config.p1());
    const Discretization disc = discretize(mesh, config.params(), config.workers);
    const std::filesystem::path dump =
        config.dump_matrices.empty() ? std::filesystem::path{}
                                     : std::filesystem::path(config.dump_matrices) / ("level_" + std::to_string(n));
    const StabConfig stab = config.stabilization();
    const Solved s = solve_level(disc, exact, config, stab, dump);
    const ErrorNorms err = compute_errors(disc, s.u, exact.field(), config.workers);

    LevelResult row;
    row.family = config.family;
    row.one_over_h = n;
    row.n_elems = static_cast<int>(mesh.num_elements());
    row.n_dofs = disc.map.n_dofs;
    row.stab = stab;
    row.energy_err = err.energy;
    row.second_err = config.problem == Problem::Poisson ? err.l2 : err.linf;
    row.cond_est = s.kappa;
    row.cg_iters = s.iterations;
    return row;
}

LevelResult run_level(const ExperimentConfig& config, int n)
{
    return run_level(config, n, generate(config.family, n, config.seed));
}

ErrorReport run(const ExperimentConfig& config)
{
    config.validate();
    ErrorReport report;
    report.problem = config.problem;
    report.params = config.params();
    for (int n : config.levels) report.rows.push_back(run_level(config, n));
    return report;
}

EocTable ErrorReport::energy_eoc() const { return eoc(column(rows, &LevelResult::energy_err), mesh_sizes(rows)); }

EocTable ErrorReport::second_eoc() const { return eoc(column(rows, &LevelResult::second_err), mesh_sizes(rows)); }

double ErrorReport::kappa_slope() const
{
    std::vector<double> k, oh;
    for (const auto& row : rows) {
        k.push_back(row.cond_est.value_or(-1.0));
        oh.push_back(row.one_over_h);
    }
    return growth_fit(k, oh);
}

std::string csv_header(Problem problem)
{
    return std::string("family,one_over_h,n_elems,n_dofs,stab_U,stab_alpha,energy_err,")
           + (problem == Problem::Poisson ? "l2_err" : "linf_err") + ",cond_est,cg_iters";
}

void write_csv(std::ostream& out, const ErrorReport& report)
{
    out << csv_header(report.problem) << "\n";
    for (const auto& row : report.rows) {
        out << to_string(row.family) << "," << row.one_over_h << "," << row.n_elems << "," << row.n_dofs << ","
            << to_string(row.stab.u) << "," << to_string(row.stab.alpha) << "," << num(row.energy_err) << ","
            << num(row.second_err) << "," << (row.cond_est ? num(*row.cond_est) : "na") << "," << row.cg_iters
            << "\n";
    }
    const std::string second = report.problem == Problem::Poisson ? "l2" : "linf";
    out << "# problem=" << to_string(report.problem) << " p1=" << report.params.p1 << " p2=" << report.params.p2
        << " r=" << report.params.r << "\n";
    if (report.rows.size() >= 2) {
        auto rates = [](const EocTable& t) {
            std::string s;
            for (std::size_t i = 0; i < t.rates.size(); ++i) s += (i ? ";" : "") + num(t.rates[i]);
            return s;
        };
        const EocTable e = report.energy_eoc(), s = report.second_eoc();
        out << "# eoc_energy_slope=" << num(e.slope) << " rates=" << rates(e) << "\n";
        out << "# eoc_" << second << "_slope=" << num(s.slope) << " rates=" << rates(s) << "\n";
        const bool any_kappa =
            std::any_of(report.rows.begin(), report.rows.end(), [](const LevelResult& r) { return r.cond_est.has_value(); });
        if (any_kappa) out << "# kappa_slope=" << num(report.kappa_slope()) << "\n";
    }
}

ErrorReport parse_csv(std::istream& in)
{
    ErrorReport report;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV");
    if (trim(line) == csv_header(Problem::Poisson)) report.problem = Problem::Poisson;
    else if (trim(line) == csv_header(Problem::Biharmonic)) report.problem = Problem::Biharmonic;
    else throw ConfigError("unrecognized CSV header '" + line + "'");
    report.params.p1 = report.problem == Problem::Poisson ? 1 : 2;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            std::istringstream words(line.substr(1));
            std::string w;
            while (words >> w) {
                if (w.rfind("p2=", 0) == 0) report.params.p2 = std::stoi(w.substr(3));
                if (w.rfind("r=", 0) == 0) report.params.r = std::stoi(w.substr(2));
            }
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 10) throw ConfigError("CSV row with " + std::to_string(f.size()) + " fields: " + line);
        LevelResult row;
        try {
            row.family = parse_family(f[0]);
            row.one_over_h = std::stoi(f[1]);
            row.n_elems = std::stoi(f[2]);
            row.n_dofs = std::stoi(f[3]);
            row.stab = {parse_stab_u(f[4]), parse_stab_alpha(f[5])};
            row.energy_err = std::stod(f[6]);
            row.second_err = std::stod(f[7]);
            if (f[8] != "na") row.cond_est = std::stod(f[8]);
            row.cg_iters = std::stoi(f[9]);
        } catch (const std::logic_error&) {
            throw ConfigError("malformed CSV row: " + line);
        }
        report.rows.push_back(row);
    }
    return report;
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& prefix, const ErrorReport& report)
{
    const std::string second = report.problem == Problem::Poisson ? "l2" : "linf";
    std::vector<std::filesystem::path> files;
    for (const std::string& name : {std::string("energy"), second}) {
        const std::filesystem::path path = prefix.string() + "_" + name + ".dat";
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "# h " << name << "_err\n";
        for (const auto& row : report.rows)
            out << num(1.0 / row.one_over_h) << " " << num(name == "energy" ? row.energy_err : row.second_err) << "\n";
        files.push_back(path);
    }
    return files;
}

SweepTable sweep(const ExperimentConfig& config)
{
    config.validate();
    SweepTable t;
    t.problem = config.problem;
    t.params = config.params();
    t.family = config.family;
    t.levels = config.levels;
    t.columns = stab_configs(config.p1());
    const ExactSolution exact = ExactSolution::bubble(config.p1());
    ExperimentConfig solve_config = config;
    solve_config.estimate_condition = true;
    for (int n : config.levels) {
        const Mesh mesh = generate(config.family, n, config.seed);
        const Discretization disc = discretize(mesh, config.params(), config.workers);
        t.n_dofs.push_back(disc.map.n_dofs);
        std::vector<std::optional<double>> row;
        for (const StabConfig& stab : t.columns) row.push_back(solve_level(disc, exact, solve_config, stab, {}).kappa);
        t.kappa.push_back(row);
    }
    return t;
}

void write_sweep(std::ostream& out, const SweepTable& t)
{
    out << "one_over_h,n_dofs";
    for (const StabConfig& c : t.columns) out << ",kappa_" << to_string(c.u) << "_" << to_string(c.alpha);
    out << "\n";
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        out << t.levels[i] << "," << t.n_dofs[i];
        for (const auto& k : t.kappa[i]) out << "," << (k ? num(*k) : "na");
        out << "\n";
    }
    std::vector<double> oh(t.levels.begin(), t.levels.end());
    out << "# problem=" << to_string(t.problem) << " p1=" << t.params.p1 << " p2=" << t.params.p2 << " r=" << t.params.r
        << " family=" << to_string(t.family) << "\n";
    if (t.levels.size() >= 2) {
        out << "# kappa_slope";
        for (std::size_t j = 0; j < t.columns.size(); ++j) {
            std::vector<double> k;
            for (const auto& row : t.kappa) k.push_back(row[j].value_or(-1.0));
            out << " " << to_string(t.columns[j].u) << "_" << to_string(t.columns[j].alpha) << "=" << num(growth_fit(k, oh));
        }
        out << "\n";
    }
}

} // namespace vem
