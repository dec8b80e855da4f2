#pragma once

// Independent oracles used to freeze expected values: adaptive quadrature,
// the closed-form energies of first-order splines, a natural cubic spline via
// the tridiagonal second-derivative system, and a null-space QP route for the
// kernel solver. These deliberately avoid the library's own code paths.

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace oracles {

/// Adaptive Simpson quadrature to the requested absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// min integral of (f')^2 over interpolants = sum (dy)^2 / dx.
double linear_spline_energy(const std::vector<double>& x, const std::vector<double>& y);

/// sum |dy|: the total-variation optimum for first-order interpolation.
double total_variation_lower_bound(const std::vector<double>& y);

/// sum of |slope changes|: the mean-value lower bound on ||f''||_M over
/// interpolants (attained by the piecewise-linear interpolant).
double slope_change_lower_bound(const std::vector<double>& x, const std::vector<double>& y);

/// Natural cubic spline through (x_i, y_i): solves the tridiagonal system for
/// the second derivatives with natural end conditions.
class NaturalCubicSpline {
  public:
    NaturalCubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double t) const;

  private:
    std::vector<double> x_, y_, m2_;  // second derivatives at the sites
};

/// Independent route for the constrained quadratic minimum: parametrize the
/// interpolation constraints by a QR null-space basis and minimize directly.
/// Returns the objective a^T G a.
double qp_nullspace_objective(const Eigen::MatrixXd& G, const Eigen::MatrixXd& P,
                              const Eigen::VectorXd& y);

}  // namespace oracles
