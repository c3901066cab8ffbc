#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vem/experiment.hpp"

using namespace vem;

namespace {

std::string csv_of(const ErrorReport& r)
{
    std::ostringstream s;
    write_csv(s, r);
    return s.str();
}

int vemrun(const std::string& args) { return std::system((std::string(VEMRUN_PATH) + " " + args + " 2>/dev/null").c_str()); }

} // namespace

TEST_CASE("config parsing and validation")
{
    const ExperimentConfig c = parse_config("# comment\nproblem = biharmonic\np2 = 2\nlevels = 8, 16\nstab-alpha = inv_area\n"
                                            "stab_u = Dperp\nfamily = TRI\n");
    CHECK(c.problem == Problem::Biharmonic);
    CHECK(c.levels == std::vector<int>{8, 16});
    CHECK(c.family == MeshFamily::Tri);
    CHECK(c.stabilization().u == StabU::DPerp);
    CHECK(c.stabilization().alpha == StabAlpha::InvArea);
    CHECK_NOTHROW(c.validate());

    // U set before the problem keeps the problem's alpha default
    ExperimentConfig d;
    apply_config_value(d, "stab-u", "Dperp");
    apply_config_value(d, "--problem", "biharmonic");
    apply_config_value(d, "p2", "2");
    CHECK(d.stabilization().alpha == StabAlpha::TraceOver3);

    ExperimentConfig empty;
    empty.levels.clear();
    CHECK_THROWS_AS(empty.validate(), ConfigError);
    ExperimentConfig bad_alpha;
    bad_alpha.stab_alpha = StabAlpha::InvH2;
    CHECK_THROWS_AS(bad_alpha.validate(), ConfigError);
    ExperimentConfig bad_space;
    bad_space.r = 0;
    CHECK_THROWS_AS(bad_space.validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_levels("8,,16"), ConfigError);
}

TEST_CASE("biharmonic run: dof column and CSV round trip")
{
    ExperimentConfig c;
    c.problem = Problem::Biharmonic;
    c.p2 = 2;
    c.levels = {8, 16, 32};
    const ErrorReport r = run(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].n_dofs == 243);
    CHECK(r.rows[1].n_dofs == 867);
    CHECK(r.rows[2].n_dofs == 3267);
    CHECK(r.rows[0].n_elems == 64);

    const std::string text = csv_of(r);
    CHECK(text.rfind(csv_header(Problem::Biharmonic), 0) == 0);
    CHECK(text.find("# eoc_linf_slope=") != std::string::npos);
    std::istringstream in(text);
    const ErrorReport back = parse_csv(in);
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.rows[i].energy_err == r.rows[i].energy_err);
        CHECK(back.rows[i].second_err == r.rows[i].second_err);
        CHECK(back.rows[i].cond_est == r.rows[i].cond_est);
        CHECK(back.rows[i].cg_iters == r.rows[i].cg_iters);
        CHECK(back.rows[i].stab.alpha == StabAlpha::TraceOver3);
    }
    CHECK(csv_of(back) == text);
}

TEST_CASE("unavailable condition numbers are written as na")
{
    ErrorReport r;
    LevelResult row;
    row.one_over_h = 8;
    row.energy_err = 1.0;
    row.second_err = 0.5;
    r.rows.push_back(row);
    const std::string text = csv_of(r);
    CHECK(text.find(",na,") != std::string::npos);
    std::istringstream in(text);
    CHECK_FALSE(parse_csv(in).rows.at(0).cond_est);
}

TEST_CASE("runs are reproducible across worker counts")
{
    ExperimentConfig c;
    c.family = MeshFamily::Cvt;
    c.levels = {4, 8};
    const std::string a = csv_of(run(c));
    CHECK(csv_of(run(c)) == a);
    c.workers = 3;
    const ErrorReport b = run(c);
    std::istringstream in(a);
    const ErrorReport ra = parse_csv(in);
    for (std::size_t i = 0; i < b.rows.size(); ++i)
        CHECK(std::abs(b.rows[i].energy_err - ra.rows[i].energy_err) <= 1e-10 * ra.rows[i].energy_err);
}

TEST_CASE("sweeps")
{
    ExperimentConfig c;
    c.problem = Problem::Biharmonic;
    c.p2 = 2;
    c.levels = {8, 16};
    const SweepTable t = sweep(c);
    REQUIRE(t.columns.size() == 6);
    int area = -1, h2 = -1;
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
        if (t.columns[k].u != StabU::Identity) continue;
        if (t.columns[k].alpha == StabAlpha::InvArea) area = static_cast<int>(k);
        if (t.columns[k].alpha == StabAlpha::InvH2) h2 = static_cast<int>(k);
    }
    REQUIRE(area >= 0);
    REQUIRE(h2 >= 0);
    for (const auto& row : t.kappa) CHECK(*row[area] == doctest::Approx(*row[h2]).epsilon(1e-10));

    ExperimentConfig p;
    p.p2 = 2;
    p.levels = {4, 8};
    CHECK(sweep(p).columns.size() == 2);
    std::ostringstream out;
    write_sweep(out, sweep(p));
    CHECK(out.str().find("kappa_slope") != std::string::npos);
}

TEST_CASE("plot data files")
{
    ExperimentConfig c;
    c.levels = {4, 8};
    const auto prefix = std::filesystem::temp_directory_path() / "vem_plot_test";
    const auto files = write_plot_data(prefix, run(c));
    REQUIRE(files.size() == 2);
    for (const auto& f : files) {
        std::ifstream in(f);
        std::string header;
        std::getline(in, header);
        CHECK(header[0] == '#');
        double h = 0.0, e = 0.0;
        CHECK(static_cast<bool>(in >> h >> e));
        CHECK(h == doctest::Approx(0.25));
        std::filesystem::remove(f);
    }
}

TEST_CASE("command line")
{
    const auto dir = std::filesystem::temp_directory_path() / "vem_cli_test";
    std::filesystem::create_directories(dir);
    const auto mesh = dir / "quad8.mesh";
    CHECK(vemrun("meshgen --family QUAD --n 8 --out " + mesh.string()) == 0);
    CHECK(read_mesh(mesh).num_elements() == 64);

    const auto csv = dir / "run.csv";
    CHECK(vemrun("run --problem poisson --p2 1 --r 2 --levels 4,8 --stab-u Dperp --out " + csv.string()) == 0);
    std::ifstream in(csv);
    const ErrorReport r = parse_csv(in);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].stab.u == StabU::DPerp);

    const auto cfg = dir / "bad.cfg";
    std::ofstream(cfg) << "levels =\n";
    CHECK(vemrun("run --config " + cfg.string()) != 0);
    CHECK(vemrun("run --problem biharmonic --p2 2 --stab-alpha trace_ndof") != 0);
    std::filesystem::remove_all(dir);
}
