// Command-line front end: problem-file driven checks, solves, and invariant
// suites. Exit codes: 0 pass, 1 domain failure, 2 usage/parse error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "lspline/problem.hpp"

namespace {

using namespace lspline;

void print_checks(const RunReport& rep) {
    for (const auto& r : rep.checks) {
        std::cout << "[" << (r.passed() ? "pass" : "FAIL") << "] " << r.title << "\n";
        for (const auto& it : r.items) {
            std::cout << "    " << (it.pass ? "ok  " : "FAIL") << " " << it.name << " = "
                      << format_double(it.value) << " (limit " << format_double(it.threshold)
                      << ")\n";
        }
    }
    if (!rep.message.empty()) std::cout << "note: " << rep.message << "\n";
}

void print_solution(const RunReport& rep) {
    if (!rep.solution) return;
    const Solution& s = *rep.solution;
    std::cout << "objective = " << format_double(s.objective)
              << "  residual = " << format_double(s.residual) << "\n";
    if (rep.norms) {
        const double t = std::max(std::abs(rep.grid.x_min), std::abs(rep.grid.x_max));
        std::cout << "native norm = " << format_double(rep.norms->value) << "  (operator part "
                  << format_double(rep.norms->operator_part) << ", null-space part "
                  << format_double(rep.norms->nullspace_part) << ", truncation T = "
                  << format_double(t) << ")\n";
    }
    std::cout << "knots (" << s.knots.size() << "):\n";
    for (std::size_t k = 0; k < s.knots.size(); ++k)
        std::cout << "    tau = " << format_double(s.knots[k])
                  << "  weight = " << format_double(s.weights[k]) << "\n";
    std::cout << "null coefficients:";
    for (Eigen::Index n = 0; n < s.null_coeffs.size(); ++n)
        std::cout << " " << format_double(s.null_coeffs(n));
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational spline interpolation in native spaces"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    ProblemOverrides overrides;
    double grid_t = 0.0;
    std::size_t grid_n = 0;
    double tol = 0.0;
    app.add_option("--grid-t", grid_t, "override the truncation radius T (grid = [-T, T])");
    app.add_option("--grid-n", grid_n, "override the grid node count");
    app.add_option("--tol", tol, "override the biorthogonality/check tolerance");

    std::string problem_path, out_csv, out_json;
    int trials = 50;
    std::uint64_t seed = 7;

    CLI::App* check = app.add_subcommand("check", "admissibility / biorthogonality / positivity");
    check->add_option("file", problem_path, "problem JSON")->required();

    CLI::App* solve = app.add_subcommand("solve", "solve the variational interpolation problem");
    solve->add_option("file", problem_path, "problem JSON")->required();
    solve->add_option("--out-csv", out_csv, "write x,f,Lf samples here");
    solve->add_option("--out-json", out_json, "write the JSON report here");

    CLI::App* suite = app.add_subcommand("suite", "randomized operator-identity suite");
    suite->add_option("file", problem_path, "problem JSON")->required();
    suite->add_option("--trials", trials, "randomized trials per identity");
    suite->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lspline::kExitUsage;
    }

    if (grid_t > 0.0) overrides.grid_t = grid_t;
    if (grid_n > 0) overrides.grid_n = grid_n;
    if (tol > 0.0) overrides.tolerance = tol;

    try {
        ProblemFile pf = parse_problem(problem_path);
        apply_overrides(pf, overrides);

        RunReport rep;
        if (check->parsed()) {
            rep = cmd_check(pf);
            print_checks(rep);
        } else if (solve->parsed()) {
            rep = cmd_solve(pf, out_csv, out_json);
            print_checks(rep);
            print_solution(rep);
        } else {
            rep = cmd_suite(pf, trials, seed);
            print_checks(rep);
        }
        return rep.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lspline::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lspline::kExitFailure;
    }
}
