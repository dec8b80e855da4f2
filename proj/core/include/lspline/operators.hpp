#pragma once

// Derivative operators L = D^m (m = 1..4) with adjoints, closed-form Green's
// kernels, canonical inverses by convolution, the anchored anti-derivative,
// and a numerical admissibility checker.

#include <vector>

#include "lspline/gridfn.hpp"
#include "lspline/report.hpp"

namespace lspline {

struct OperatorDescriptor {
    int order = 1;             // m in D^m
    double alpha = 0.0;        // algebraic growth order, m - 1
    std::vector<PolynomialForm> null_basis;  // 1, x, ..., x^{m-1}
};

/// D^m for 1 <= m <= 4, with growth order m-1 and monomial null basis.
OperatorDescriptor make_derivative_operator(int m);

/// Green's kernel value of op at x (rho_m, see green_value in gridfn.hpp).
double green(const OperatorDescriptor& op, double x);

GridFunction green_atom(const Grid& g, const OperatorDescriptor& op, double center, double weight);

/// D^m f. Polynomials are differentiated analytically, a Green atom maps to a
/// delta atom (lower-order atoms gain derivative order), everything else goes
/// through central finite differences.
GridFunction apply(const OperatorDescriptor& op, const GridFunction& f);

/// L* g = (-1)^m D^m g.
GridFunction apply_adjoint(const OperatorDescriptor& op, const GridFunction& g);

/// Iterated running integral anchored at 0: each pass maps f to x -> integral
/// of f from 0 to x, so the result and its first (iterations-1) derivatives
/// vanish at the origin.
GridFunction anti_derivative_delta(const GridFunction& f, int iterations);

/// rho_m * w. Sums of delta atoms map to sums of Green atoms exactly; sampled
/// input is convolved by direct trapezoid quadrature at every node (O(n^2);
/// rho_m is unbounded, so transform-based circular convolution would be wrong
/// on a truncated domain).
GridFunction canonical_inverse(const OperatorDescriptor& op, const GridFunction& w);

/// Adjoint of the canonical inverse: convolution with rho_m(-x) = (-1)^m rho_m.
GridFunction canonical_inverse_adjoint(const OperatorDescriptor& op, const GridFunction& g);

/// Smooth, centrally concentrated Gaussians used to spot-check operator
/// identities (decay ~1e-30 at the default truncation radius).
std::vector<GridFunction> default_test_bank(const Grid& g);

/// Numerical admissibility report: annihilation of the null basis, left/right
/// inverse residuals over a test bank, growth of the Green's kernel and null
/// basis against alpha, and the bank's worst forward weighted-L1 norm.
/// A failing item never throws; the report carries it.
Report admissibility_check(const OperatorDescriptor& op, const std::vector<GridFunction>& bank);

}  // namespace lspline
