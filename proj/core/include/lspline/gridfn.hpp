#pragma once

// Function representation on a truncated uniform grid: sampled values plus an
// optional closed-form tag (polynomial / Green atom / delta atom) that lets
// downstream operators act analytically. Quadrature is composite trapezoid
// throughout; derivatives are O(dx^2) central differences with one-sided
// stencils at the boundary.

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lspline {

/// Uniform grid on [x_min, x_max] with n nodes, dx = (x_max - x_min)/(n - 1).
struct Grid {
    double x_min = -12.0;
    double x_max = 12.0;
    std::size_t n = 4801;

    static Grid uniform(double x_min, double x_max, std::size_t n);
    /// Default truncation of the real line: [-12, 12] with 4801 nodes.
    static Grid standard() { return Grid{}; }

    double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
    double node(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    std::size_t size() const { return n; }
    bool contains(double x) const { return x >= x_min && x <= x_max; }
    std::size_t nearest_index(double x) const;

    bool operator==(const Grid&) const = default;
};

/// Algebraic weight exponent for the (1+|x|)^{±alpha} norms.
struct WeightSpec {
    double alpha = 0.0;
};

/// Dense polynomial in ascending powers; an empty coefficient list is zero.
struct PolynomialForm {
    std::vector<double> coeffs;

    double eval(double x) const;
    /// Single derivative step; repeated application keeps composition bit-stable.
    PolynomialForm derivative() const;
    PolynomialForm derivative(int order) const;
    int degree() const;
    bool is_zero() const;
};

PolynomialForm add(const PolynomialForm& a, const PolynomialForm& b);
PolynomialForm scale(const PolynomialForm& a, double c);

/// weight * rho_m(x - center) with rho_m(x) = sign(x) x^{m-1} / (2 (m-1)!).
struct GreenAtomForm {
    int order = 1;
    double center = 0.0;
    double weight = 1.0;

    double eval(double x) const;
};

/// weight * delta^{(deriv_order)}(x - center); quadrature-only, no samples.
struct DeltaAtomForm {
    double center = 0.0;
    double weight = 1.0;
    int deriv_order = 0;
};

using FormTerm = std::variant<PolynomialForm, GreenAtomForm, DeltaAtomForm>;

/// Value of rho_m at x (the kernel of the canonical inverse of the m-th
/// derivative); odd/even symmetry rho_m(-x) = (-1)^m rho_m(x), rho_m(0) = 0.
double green_value(int m, double x);

class GridFunction {
  public:
    GridFunction() = default;

    static GridFunction from_samples(const Grid& g, std::vector<double> samples);
    static GridFunction from_function(const Grid& g, const std::function<double(double)>& f);
    static GridFunction polynomial(const Grid& g, std::vector<double> coeffs);
    static GridFunction green_atom(const Grid& g, int order, double center, double weight);
    static GridFunction delta_atom(const Grid& g, double center, double weight, int deriv_order = 0);
    static GridFunction closed_form(const Grid& g, std::vector<FormTerm> terms);
    static GridFunction zero(const Grid& g);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& samples() const { return samples_; }
    double sample(std::size_t i) const { return samples_[i]; }

    bool has_form() const { return has_form_; }
    const std::vector<FormTerm>& form() const;
    /// True when the form carries delta atoms: no pointwise values exist and
    /// the function may only appear on the analysis side of a pairing.
    bool quadrature_only() const;
    /// True when every form term is a polynomial (enables analytic calculus).
    bool pure_polynomial() const;
    /// Combined polynomial coefficients; requires pure_polynomial().
    PolynomialForm polynomial_form() const;
    std::vector<DeltaAtomForm> delta_terms() const;

    /// Linear interpolation of the samples at x; rejects quadrature-only
    /// functions and x outside the grid.
    double operator()(double x) const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator*=(double c);

  private:
    Grid grid_{};
    std::vector<double> samples_{};
    std::vector<FormTerm> form_{};
    bool has_form_ = false;

    void check_invariants() const;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(GridFunction a, double c);
GridFunction operator*(double c, GridFunction a);

/// Composite trapezoid of the samples over the whole grid.
double trapezoid(const Grid& g, const std::vector<double>& values);
/// Trapezoid restricted to nodes with |x| <= radius (used by the two-scale
/// divergence probe).
double trapezoid_within(const Grid& g, const std::vector<double>& values, double radius);
/// Running trapezoid anchored so the result vanishes at `anchor`.
std::vector<double> cumulative_trapezoid(const Grid& g, const std::vector<double>& values,
                                         double anchor);

/// Duality pairing <f, g>. Ordinary pair: trapezoid of f*g on a shared grid.
/// A delta atom delta^{(k)}(. - tau) on either side pairs as
/// (-1)^k g^{(k)}(tau), analytic on polynomials and via finite differences
/// plus interpolation otherwise.
double inner(const GridFunction& f, const GridFunction& g);

/// sup over the grid of (1+|x|)^{-alpha} |f(x)|.
double weighted_sup_norm(const GridFunction& f, const WeightSpec& w);
/// Trapezoid of (1+|x|)^{alpha} |f(x)|.
double weighted_l1_norm(const GridFunction& f, const WeightSpec& w);

/// O(dx^2) finite difference of the given order (0..4). Polynomial-form
/// inputs are differentiated analytically and resampled; composing orders a
/// and b on those inputs is bit-identical to order a+b.
GridFunction fd_derivative(const GridFunction& f, int order);

/// k-th derivative of f at x0: analytic for pure polynomials, finite
/// differences + linear interpolation otherwise.
double derivative_at(const GridFunction& f, int order, double x0);

/// Fitted algebraic growth/decay exponent of |f| on the outer 20% of the
/// grid (log|f| against log|x|); -inf when the tail carries no mass.
/// Membership at infinity is undecidable on a truncated grid, so this is a
/// heuristic probe, not a proof.
double growth_exponent(const GridFunction& f);

/// Probe for membership in the growth-capped sup-norm space: exponent must
/// not exceed alpha + 0.1.
bool sup_growth_ok(const GridFunction& f, double alpha);
/// Probe for membership in the weighted L1 space: the decay exponent must be
/// at most -(alpha+1) - 0.1 (or the tail must be negligible).
bool l1_decay_ok(const GridFunction& f, double alpha);

}  // namespace lspline
