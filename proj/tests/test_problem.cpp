#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lspline/problem.hpp"
#include "oracles.hpp"

using namespace lspline;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kGtvProblem = R"({
  "version": 1,
  "operator": {"type": "derivative", "order": 1},
  "space": "M",
  "phi": "hermite-gaussian",
  "data": [[0, 0], [1, 1], [2, 0]],
  "grid": {"xmin": -12, "xmax": 12, "n": 1201},
  "solver": {"seed": 7}
})";

const char* kL2Problem = R"({
  "version": 1,
  "operator": {"type": "derivative", "order": 2},
  "space": "L2",
  "phi": "hermite-gaussian",
  "data": [[0, 0], [1, 1], [2, 0]],
  "grid": {"xmin": -12, "xmax": 12, "n": 1201}
})";

void write_phi_csv(const std::string& path, const Grid& g, bool normalized) {
    std::ofstream out(path);
    out << "x,phi1\n";
    const double c = normalized ? 1.0 / std::sqrt(2.0 * 3.14159265358979323846) : 1.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        out << format_double(x) << ',' << format_double(c * std::exp(-x * x / 2.0)) << '\n';
    }
}

}  // namespace

TEST_CASE("problem parsing: schema acceptance and rejection") {
    const ProblemFile pf = parse_problem_text(kGtvProblem);
    CHECK(pf.order == 1);
    CHECK(pf.norm == PrimaryNorm::TotalVariation);
    CHECK(pf.grid.n == 1201);
    REQUIRE(pf.data.has_value());
    CHECK(pf.data->size() == 3);
    CHECK(pf.solver.seed == 7);

    CHECK_THROWS_AS(parse_problem_text("{not json"), ParseError);
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 2, "operator": {"type": "derivative",
        "order": 1}, "space": "L2"})"),
                    ParseError);
    // unknown keys are rejected at every level
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 1, "operator": {"type": "derivative",
        "order": 1}, "space": "L2", "extra": 3})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 1, "operator": {"type": "derivative",
        "order": 1, "oops": 1}, "space": "L2"})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 1, "operator": {"type": "derivative",
        "order": 1}, "space": "L8"})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 1, "operator": {"type": "derivative",
        "order": 1}, "space": "L2", "data": [[0, 1, 2]]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(temp_path("does_not_exist.json")), ParseError);
}

TEST_CASE("overrides rescale the grid and tolerance") {
    ProblemFile pf = parse_problem_text(kL2Problem);
    ProblemOverrides ov;
    ov.grid_t = 8.0;
    ov.grid_n = std::size_t{801};
    ov.tolerance = 1e-5;
    apply_overrides(pf, ov);
    CHECK(pf.grid.x_min == -8.0);
    CHECK(pf.grid.x_max == 8.0);
    CHECK(pf.grid.n == 801);
    CHECK(pf.tolerance == 1e-5);
}

TEST_CASE("build_system: samples file round trip and delta pairing") {
    ProblemFile pf = parse_problem_text(kGtvProblem);
    const std::string good = temp_path("lspline_phi_good.csv");
    write_phi_csv(good, pf.grid, true);
    PhiChoice samples;
    samples.kind = PhiChoice::Kind::Samples;
    samples.samples_path = good;
    const BiorthoSystem sys = build_system(pf, samples);
    CHECK(std::abs(sys.gram(0, 0) - 1.0) <= 1e-8);

    PhiChoice delta;
    delta.kind = PhiChoice::Kind::DeltaBoundary;
    const BiorthoSystem dsys = build_system(pf, delta);
    CHECK_FALSE(dsys.sampled_analysis());

    PhiChoice missing;
    missing.kind = PhiChoice::Kind::Samples;
    missing.samples_path = temp_path("lspline_phi_missing.csv");
    CHECK_THROWS_AS(build_system(pf, missing), ParseError);
}

TEST_CASE("cmd_check passes for the default second-order problem") {
    const ProblemFile pf = parse_problem_text(kL2Problem);
    const RunReport rep = cmd_check(pf);
    CHECK(rep.exit_code == kExitOk);
    CHECK(rep.passed());
}

TEST_CASE("cmd_check rejects delta analysis functionals for the measure space") {
    ProblemFile pf = parse_problem_text(kGtvProblem);
    pf.phi.kind = PhiChoice::Kind::DeltaBoundary;
    const RunReport rep = cmd_check(pf);
    CHECK(rep.exit_code == kExitFailure);
    CHECK(rep.message.find("phi not admissible for X = C0") != std::string::npos);

    // the same functionals are fine for the L2 pairing
    ProblemFile l2 = parse_problem_text(kL2Problem);
    l2.phi.kind = PhiChoice::Kind::DeltaBoundary;
    const RunReport ok = cmd_check(l2);
    CHECK(ok.exit_code == kExitOk);
}

TEST_CASE("cmd_solve: total-variation route with report and files") {
    const ProblemFile pf = parse_problem_text(kGtvProblem);
    const std::string csv = temp_path("lspline_sol.csv");
    const std::string json = temp_path("lspline_sol.json");
    const RunReport rep = cmd_solve(pf, csv, json);
    REQUIRE(rep.exit_code == kExitOk);
    REQUIRE(rep.solution.has_value());
    CHECK(std::abs(rep.solution->objective - 2.0) <= 1e-5);
    CHECK(rep.solution->knots.size() <= 2);
    REQUIRE(rep.norms.has_value());
    CHECK(rep.norms->operator_part == rep.solution->objective);

    const std::string body = read_file(csv);
    CHECK(body.rfind("x,f,Lf\n", 0) == 0);
    const std::string jr = read_file(json);
    CHECK(jr.find("\"status\": \"pass\"") != std::string::npos);
}

TEST_CASE("cmd_solve: kernel route matches the natural cubic oracle through the CSV") {
    const ProblemFile pf = parse_problem_text(kL2Problem);
    const std::string csv = temp_path("lspline_l2.csv");
    const RunReport rep = cmd_solve(pf, csv, "");
    REQUIRE(rep.exit_code == kExitOk);

    const oracles::NaturalCubicSpline spline({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    double worst = 0.0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cx, cf, clf;
        std::getline(ss, cx, ',');
        std::getline(ss, cf, ',');
        std::getline(ss, clf, ',');
        const double x = std::stod(cx);
        if (x < 0.0 || x > 2.0) continue;
        worst = std::max(worst, std::abs(std::stod(cf) - spline(x)));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("cmd_solve failure modes") {
    ProblemFile pf = parse_problem_text(kL2Problem);
    pf.data = DataSet{{0.0}, {1.0}};  // fewer sites than the null-space dimension
    const RunReport rep = cmd_solve(pf, "", "");
    CHECK(rep.exit_code == kExitFailure);
    CHECK(rep.message.find("underdetermined") != std::string::npos);

    ProblemFile lp = parse_problem_text(kL2Problem);
    lp.norm = PrimaryNorm::Lp;
    lp.p = 3.0;
    const RunReport rep2 = cmd_solve(lp, "", "");
    CHECK(rep2.exit_code == kExitFailure);

    lp.p = 2.0;  // Lp with p = 2 routes to the kernel solver
    const RunReport rep3 = cmd_solve(lp, "", "");
    CHECK(rep3.exit_code == kExitOk);
    CHECK(rep3.solution->kind == SolutionKind::Kernel);

    ProblemFile nodata = parse_problem_text(kL2Problem);
    nodata.data.reset();
    CHECK(cmd_solve(nodata, "", "").exit_code == kExitFailure);
}

TEST_CASE("cmd_solve determinism: identical bytes on repeat runs") {
    const ProblemFile pf = parse_problem_text(kGtvProblem);
    const std::string csv1 = temp_path("lspline_det1.csv"), csv2 = temp_path("lspline_det2.csv");
    const std::string js1 = temp_path("lspline_det1.json"), js2 = temp_path("lspline_det2.json");
    REQUIRE(cmd_solve(pf, csv1, js1).exit_code == kExitOk);
    REQUIRE(cmd_solve(pf, csv2, js2).exit_code == kExitOk);
    CHECK(read_file(csv1) == read_file(csv2));
    CHECK(read_file(js1) == read_file(js2));
}

TEST_CASE("run report JSON re-parses and re-serializes byte-identically") {
    const ProblemFile pf = parse_problem_text(kGtvProblem);
    const RunReport rep = cmd_solve(pf, "", "");
    const std::string j1 = rep.to_json();
    const auto parsed = nlohmann::ordered_json::parse(j1);
    CHECK(parsed.dump(2) + "\n" == j1);
}

TEST_CASE("cmd_suite: pass, usage errors, and corrupted phi") {
    ProblemFile pf = parse_problem_text(kL2Problem);
    pf.data.reset();
    pf.grid = Grid::standard();  // the residual budgets are pinned at this resolution
    const RunReport ok = cmd_suite(pf, 3, 7);
    for (const auto& r : ok.checks)
        for (const auto& item : r.items) {
            INFO(r.title, " / ", item.name, " = ", item.value);
            CHECK(item.pass);
        }
    CHECK(ok.exit_code == kExitOk);

    CHECK(cmd_suite(pf, 0, 7).exit_code == kExitUsage);

    ProblemFile del = parse_problem_text(kL2Problem);
    del.phi.kind = PhiChoice::Kind::DeltaBoundary;
    CHECK(cmd_suite(del, 3, 7).exit_code == kExitUsage);

    // an unnormalized Gaussian fails the biorthogonality invariant
    ProblemFile bad = parse_problem_text(kGtvProblem);
    const std::string raw = temp_path("lspline_phi_raw.csv");
    write_phi_csv(raw, bad.grid, false);
    bad.phi.kind = PhiChoice::Kind::Samples;
    bad.phi.samples_path = raw;
    const RunReport fail = cmd_suite(bad, 3, 7);
    CHECK(fail.exit_code == kExitFailure);
    REQUIRE_FALSE(fail.checks.empty());
    const CheckItem* dev = fail.checks.front().find("gram_identity_deviation");
    REQUIRE(dev != nullptr);
    CHECK(dev->value == doctest::Approx(std::sqrt(2.0 * 3.14159265358979323846) - 1.0)
                            .epsilon(1e-6));
}

TEST_CASE("cmd_suite runs the norm-equivalence block when phi_alt is set") {
    ProblemFile pf = parse_problem_text(kL2Problem);
    pf.data.reset();
    pf.grid = Grid::standard();
    PhiChoice alt;
    alt.kind = PhiChoice::Kind::HermiteGaussian;
    alt.shift = 0.5;
    pf.phi_alt = alt;
    const RunReport rep = cmd_suite(pf, 3, 7);
    CHECK(rep.exit_code == kExitOk);
    bool found = false;
    for (const auto& r : rep.checks)
        if (r.title == "norm equivalence") {
            found = true;
            for (const auto& item : r.items) {
                INFO(item.name, " = ", item.value);
                CHECK(item.pass);
            }
        }
    CHECK(found);
}
