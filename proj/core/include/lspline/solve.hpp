#pragma once

// The two variational interpolation solvers: the kernel (semi-RKHS) route for
// the L2 energy and a dictionary linear program for the total-variation
// energy, plus the conditional positive-definiteness check of the kernel.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lspline/gridfn.hpp"
#include "lspline/operators.hpp"
#include "lspline/report.hpp"

namespace lspline {

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DataSet {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
    /// Strictly increasing sites, matching lengths.
    void validate() const;
};

enum class SolutionKind { Kernel, SparseSpline };

struct Solution {
    SolutionKind kind = SolutionKind::Kernel;
    std::vector<double> knots;    // kernel centers (= data sites) or spline knots
    std::vector<double> weights;  // atom weights a_k
    Eigen::VectorXd null_coeffs;  // b_n against the monomial basis
    double objective = 0.0;       // ||L f||_2^2 (kernel) or sum |a_k| (sparse)
    double residual = 0.0;        // max interpolation error at the data sites
};

struct SolverConfig {
    int knots_per_site = 10;     // candidate knot density (times the data count)
    double knot_margin = 0.0;    // candidate range extension beyond [x_1, x_M]
    double prune_rel = 1e-8;     // drop |a_k| below prune_rel * max|a|
    int max_pivots = 50000;      // simplex iteration cap
    double pivot_tol = 1e-9;
    double interp_tol = 1e-7;    // residual acceptance at the data sites
    std::uint64_t seed = 0;      // recorded for provenance; the solvers are deterministic
};

/// Reproducing kernel of the L2 problem: (-1)^m |x-y|^{2m-1} / (2 (2m-1)!),
/// the sign chosen so the constrained quadratic form is positive.
double kernel_value(const OperatorDescriptor& op, double x, double y);

/// Interpolating minimizer of ||L f||_2^2: solves the augmented saddle system
/// [G P; P^T 0] [a; b] = [y; 0] with G_{mn} = h(x_m, x_n), P_{mn} = p_n(x_m).
Solution solve_l2(const OperatorDescriptor& op, const DataSet& data);

/// Uniform candidate-knot grid of knots_per_site * M nodes over
/// [x_1 - margin, x_M + margin].
Grid default_knot_grid(const DataSet& data, const SolverConfig& cfg);

/// Interpolating minimizer of sum_k |a_k| over Green atoms on the candidate
/// grid (plus the data sites) with a free null-space tail: an exact dictionary
/// LP solved by two-phase simplex with Bland's rule, then pruning and merging
/// of adjacent knots. The optimum is a vertex, so at most M basic variables
/// survive and the pruned knot count obeys the M - N0 bound.
Solution solve_gtv(const OperatorDescriptor& op, const DataSet& data, const Grid& knot_grid,
                   const SolverConfig& cfg);

/// a^T H a with H_{ij} = h(x_i, x_j); requires a != 0 annihilating the
/// null-space polynomials at the points (P^T a = 0).
double kernel_quadratic_form(const OperatorDescriptor& op, const std::vector<double>& points,
                             const Eigen::VectorXd& a);

/// Minimum of the kernel quadratic form over random unit vectors in the
/// null-space-orthogonal cone; pass iff strictly positive.
Report conditional_positivity_check(const OperatorDescriptor& op, const std::vector<double>& points,
                                    int trials, std::uint64_t seed);

/// f(x) = sum_k a_k atom(x, tau_k) + sum_n b_n x^{n-1}; the atom is the
/// reproducing kernel for Kernel solutions and the Green's kernel for sparse ones.
std::vector<double> evaluate_solution(const Solution& sol, const OperatorDescriptor& op,
                                      const std::vector<double>& xs);

/// Closed-form L f for Kernel solutions: sum_k a_k (-1)^m rho_m(x - x_k).
std::vector<double> evaluate_solution_lf(const Solution& sol, const OperatorDescriptor& op,
                                         const std::vector<double>& xs);

}  // namespace lspline
