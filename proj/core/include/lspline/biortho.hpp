#pragma once

// Biorthogonal systems (phi, p) for the operator null space: validation of
// the pairing Gram, the two rank-N0 projectors, the induced null-space norm,
// change of basis with its equivalence constants, and the projector bound.

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "lspline/gridfn.hpp"
#include "lspline/operators.hpp"

namespace lspline {

class BiorthoError : public std::runtime_error {
  public:
    BiorthoError(const std::string& msg, Eigen::MatrixXd gram)
        : std::runtime_error(msg), gram_(std::move(gram)) {}
    const Eigen::MatrixXd& gram() const { return gram_; }

  private:
    Eigen::MatrixXd gram_;
};

struct BiorthoSystem {
    std::vector<GridFunction> phis;  // analysis functionals
    std::vector<GridFunction> ps;    // null-space basis (polynomial form)
    Eigen::MatrixXd gram;            // <phi_m, p_n>, accepted ~ identity

    int size() const { return static_cast<int>(ps.size()); }
    bool sampled_analysis() const;
};

/// Pairs the two families and accepts iff max |gram - I| <= tol. On rejection
/// the thrown BiorthoError carries the offending Gram matrix.
BiorthoSystem make_biortho_system(std::vector<GridFunction> phis, std::vector<GridFunction> ps,
                                  double tol = 1e-6);

/// Projection onto span(p): sum_n <phi_n, f> p_n, returned in polynomial form.
GridFunction project_nullspace(const BiorthoSystem& sys, const GridFunction& f);

/// Projection onto span(phi): sum_n <p_n, g> phi_n. Requires g to pass the
/// weighted-L1 decay probe (the moments must exist off the truncated grid).
GridFunction project_analysis_span(const BiorthoSystem& sys, const GridFunction& g);

/// Coefficient vector (<phi_n, f>).
Eigen::VectorXd analysis_coefficients(const BiorthoSystem& sys, const GridFunction& f);
/// Coefficient vector (<p_n, g>).
Eigen::VectorXd basis_moments(const BiorthoSystem& sys, const GridFunction& g);

/// Euclidean norm of (<phi_n, p>) for p in span(p); rejects inputs whose
/// projection residual exceeds 1e-6.
double nullspace_norm(const BiorthoSystem& sys, const GridFunction& p);

struct ChangeOfBasis {
    Eigen::MatrixXd C;  // <phi_tilde_m, p_n>
    Eigen::MatrixXd B;  // C^{-1}
    double B1 = 0.0;    // 1 / ||B||_F
    double B2 = 0.0;    // ||C||_F
    // native-norm equivalence constants; filled by norm_equivalence_constants
    // (they need the operator and the primary-space norm)
    std::optional<double> A1, A2;
};

/// Re-bases the system on new analysis functionals: the unique partner basis
/// is p_tilde_n = sum_j B(j,n) p_j with B = C^{-1}. Throws on ill-conditioned
/// C (condition number above cond_limit).
std::pair<BiorthoSystem, ChangeOfBasis> change_of_basis(const BiorthoSystem& sys,
                                                        const std::vector<GridFunction>& new_phis,
                                                        double tol = 1e-6,
                                                        double cond_limit = 1e8);

/// Operator-norm bound of the analysis-span projector on the truncated grid:
/// (sum_n ||p_n||_{inf,alpha}^2)^{1/2}.
double projector_bound(const BiorthoSystem& sys, double alpha);

/// Universal default: phi_n = htilde_{n-1}(x) exp(-x^2/2) with Hermite
/// polynomials htilde orthonormal under the exp(-x^2/2) weight; p_n = htilde_{n-1}.
BiorthoSystem hermite_gaussian_system(const Grid& g, int count);
/// The hermite-gaussian analysis functions, optionally shifted.
std::vector<GridFunction> hermite_gaussian_phis(const Grid& g, int count, double shift = 0.0);

/// Moment-matched system against the monomials 1, x, ...: phi_n pairs the
/// standard Gaussian density with Hermite polynomials so that
/// <phi_m, x^{n-1}> = delta_{mn}.
BiorthoSystem gaussian_moment_system(const Grid& g, int count);

/// Boundary-functional system phi_n = (-1)^{n-1} delta^{(n-1)} at the origin,
/// paired with p_n = x^{n-1}/(n-1)!. The analysis side is quadrature-only.
BiorthoSystem delta_boundary_system(const Grid& g, int count);

/// Coefficients of the probabilists' Hermite polynomial He_k.
std::vector<double> hermite_coefficients(int k);

}  // namespace lspline
