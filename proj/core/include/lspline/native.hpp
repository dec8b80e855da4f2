#pragma once

// Native-space machinery: stabilized pseudo-inverses, the native norm
// ||L f||_{X'} + ||phi(f)||_2 and its pre-dual max-norm partner, the unique
// (w, p) decomposition, and a randomized suite that measures the operator
// identities (left/right inverses, pseudo-inverses, isometry) as finite-
// dimensional residuals on the truncated grid.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>

#include "lspline/biortho.hpp"
#include "lspline/gridfn.hpp"
#include "lspline/operators.hpp"
#include "lspline/report.hpp"

namespace lspline {

/// The primary norm carried by X' (the space that measures L f).
enum class PrimaryNorm { L2, TotalVariation, Lp };

class MembershipError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct NativeSpaceSpec {
    OperatorDescriptor op;
    BiorthoSystem sys;
    PrimaryNorm norm = PrimaryNorm::L2;
    double p = 2.0;  // exponent when norm == Lp
};

/// Validates that sys spans the operator null space (and, for the
/// total-variation choice, that every analysis functional is an ordinary
/// integrable function: delta atoms are excluded there).
NativeSpaceSpec make_native_spec(OperatorDescriptor op, BiorthoSystem sys, PrimaryNorm norm,
                                 double p = 2.0);

struct NormBreakdown {
    double value = 0.0;
    double operator_part = 0.0;   // ||L f||_{X'}
    double nullspace_part = 0.0;  // ||phi(f)||_2
};

struct Decomposition {
    GridFunction w;            // L f
    Eigen::VectorXd p_coeffs;  // coefficients of the null-space projection
};

/// f = (I - Proj_span(p)) L^{-1} w: the right inverse of L whose output has
/// vanishing analysis moments.
GridFunction stabilized_inverse(const NativeSpaceSpec& spec, const GridFunction& w);

/// Adjoint pseudo-inverse L^{-1*} (I - Proj_span(phi)).
GridFunction stabilized_inverse_adjoint(const NativeSpaceSpec& spec, const GridFunction& g);

/// ||L f||_{X'} + ||phi(f)||_2 with the two parts reported separately.
/// Membership is screened with the growth probe on f and a two-scale
/// divergence probe on ||L f|| (re-measured at 2/3 of the truncation radius);
/// rejection throws MembershipError. Atom-form L f under the total-variation
/// norm is summed exactly (sum |a_k|), independent of the biorthogonal system.
NormBreakdown native_norm(const NativeSpaceSpec& spec, const GridFunction& f);

/// max(||adjoint-pseudo-inverse image||_X, ||(<p_n, g>)||_2).
double predual_norm(const NativeSpaceSpec& spec, const GridFunction& g);

Decomposition decompose(const NativeSpaceSpec& spec, const GridFunction& f);
GridFunction reconstruct(const NativeSpaceSpec& spec, const Decomposition& d);

/// Randomized residual suite over Gaussian-mixture trial functions:
///   left_inverse            sup |L^{-1*}_phi L* v - v|
///   pseudo_right_inverse    sup |L* L^{-1*}_phi g - (g - Proj g)|
///   right_inverse           sup |L L^{-1}_phi w - w|
///   left_pseudo_inverse     sup |L^{-1}_phi L f - (f - Proj f)|
///   isometry                | ||L^{-1*}_phi L* v||_X - ||v||_X |
///   moment_annihilation     max |phi(L^{-1}_phi w)|
///   dual_norm_lower_bound_gap   bank sup-estimate minus the direct norm
/// All sups exclude a 5m-node boundary margin. Requires sampled phi.
Report identity_suite(const NativeSpaceSpec& spec, int trials, std::uint64_t seed);

/// Norm-equivalence constants (A1, A2) between the native norms induced by
/// spec and spec_tilde (same operator, different biorthogonal systems),
/// estimated from the pre-dual norms of the cross analysis functions. These
/// are bounds, not tight constants.
std::pair<double, double> norm_equivalence_constants(const NativeSpaceSpec& spec,
                                                     const NativeSpaceSpec& spec_tilde);

/// X-norm (pre-dual side): L2 for X'=L2, sup for X'=M (C0), conjugate Lq for Lp.
double x_norm(const NativeSpaceSpec& spec, const GridFunction& v);
/// X'-norm of a sampled density (no atoms).
double xprime_norm_sampled(const NativeSpaceSpec& spec, const GridFunction& w);

/// Finite Gaussian mixture with closed-form derivatives; the trial-function
/// class for the randomized suites.
struct GaussianMixture {
    struct Component {
        double coeff, mean, sigma;
    };
    std::vector<Component> components;

    double value(double x) const;
    double derivative(double x, int order) const;
    GridFunction sampled(const Grid& g) const;
    GridFunction sampled_derivative(const Grid& g, int order) const;
};

GaussianMixture random_mixture(std::mt19937_64& rng);

}  // namespace lspline
