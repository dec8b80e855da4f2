#pragma once

// Problem-file front end: JSON problem parsing (strict schema, unknown keys
// rejected), construction of the operator/system/space triple, and the three
// batch commands (check / solve / suite) returning machine-readable reports.

#include <optional>
#include <string>

#include "lspline/native.hpp"
#include "lspline/report.hpp"
#include "lspline/solve.hpp"

namespace lspline {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PhiChoice {
    enum class Kind { HermiteGaussian, DeltaBoundary, Samples };
    Kind kind = Kind::HermiteGaussian;
    std::string samples_path;  // when kind == Samples
    double shift = 0.0;        // hermite-gaussian translation
};

struct ProblemFile {
    int version = 1;
    int order = 1;
    PrimaryNorm norm = PrimaryNorm::L2;
    double p = 2.0;
    PhiChoice phi;
    std::optional<PhiChoice> phi_alt;  // second system for the equivalence checks
    std::optional<DataSet> data;
    Grid grid = Grid::standard();
    SolverConfig solver;
    double tolerance = 1e-6;  // biorthogonality / check tolerance
};

/// Command-line overrides applied on top of the parsed file.
struct ProblemOverrides {
    std::optional<std::size_t> grid_n;
    std::optional<double> grid_t;
    std::optional<double> tolerance;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem(const std::string& path);
void apply_overrides(ProblemFile& pf, const ProblemOverrides& ov);

/// Builds the biorthogonal system selected by the problem file.
BiorthoSystem build_system(const ProblemFile& pf, const PhiChoice& phi);
/// Operator + system + primary norm, fully validated.
NativeSpaceSpec build_spec(const ProblemFile& pf);

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct RunReport {
    std::string command;
    int exit_code = kExitOk;
    std::string message;
    std::vector<Report> checks;
    std::optional<NormBreakdown> norms;
    std::optional<Solution> solution;
    // provenance
    Grid grid = Grid::standard();
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    int trials = 0;

    bool passed() const;
    std::string to_json() const;
};

/// Admissibility + biorthogonality + conditional positivity. Exit 0 iff all
/// checks pass; domain failures land in the report with exit 1.
RunReport cmd_check(const ProblemFile& pf);

/// Dispatches the solver for the configured space, writes the sample CSV
/// (columns x,f,Lf) and the JSON report to the given paths (empty = skip).
RunReport cmd_solve(const ProblemFile& pf, const std::string& out_csv, const std::string& out_json);

/// Identity suite plus the module invariants (projector algebra, norms,
/// decomposition, duality pairing; norm equivalence when phi_alt is set).
RunReport cmd_suite(const ProblemFile& pf, int trials, std::uint64_t seed);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace lspline
