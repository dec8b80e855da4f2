#include "lspline/biortho.hpp"

#include <cmath>

namespace lspline {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double max_poly_degree(const BiorthoSystem& sys) {
    int deg = 0;
    for (const auto& p : sys.ps)
        if (p.pure_polynomial()) deg = std::max(deg, p.polynomial_form().degree());
    return static_cast<double>(deg);
}

}  // namespace

bool BiorthoSystem::sampled_analysis() const {
    for (const auto& phi : phis)
        if (phi.quadrature_only()) return false;
    return true;
}

BiorthoSystem make_biortho_system(std::vector<GridFunction> phis, std::vector<GridFunction> ps,
                                  double tol) {
    require(!phis.empty(), "biortho: need at least one pair");
    require(phis.size() == ps.size(), "biortho: phi/p length mismatch");
    const int n0 = static_cast<int>(phis.size());
    Eigen::MatrixXd gram(n0, n0);
    for (int m = 0; m < n0; ++m)
        for (int n = 0; n < n0; ++n) gram(m, n) = inner(phis[m], ps[n]);
    const double dev = (gram - Eigen::MatrixXd::Identity(n0, n0)).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw BiorthoError("biortho: pairing deviates from identity by " + std::to_string(dev),
                           gram);
    return BiorthoSystem{std::move(phis), std::move(ps), std::move(gram)};
}

Eigen::VectorXd analysis_coefficients(const BiorthoSystem& sys, const GridFunction& f) {
    Eigen::VectorXd c(sys.size());
    for (int n = 0; n < sys.size(); ++n) c(n) = inner(sys.phis[n], f);
    return c;
}

Eigen::VectorXd basis_moments(const BiorthoSystem& sys, const GridFunction& g) {
    Eigen::VectorXd c(sys.size());
    for (int n = 0; n < sys.size(); ++n) c(n) = inner(sys.ps[n], g);
    return c;
}

GridFunction project_nullspace(const BiorthoSystem& sys, const GridFunction& f) {
    const Eigen::VectorXd c = analysis_coefficients(sys, f);
    PolynomialForm acc;
    for (int n = 0; n < sys.size(); ++n)
        acc = add(acc, scale(sys.ps[n].polynomial_form(), c(n)));
    return GridFunction::polynomial(f.grid(), acc.coeffs);
}

GridFunction project_analysis_span(const BiorthoSystem& sys, const GridFunction& g) {
    if (!g.quadrature_only() && !l1_decay_ok(g, max_poly_degree(sys)))
        throw std::domain_error("project_analysis_span: input fails the weighted-L1 decay probe");
    const Eigen::VectorXd c = basis_moments(sys, g);
    GridFunction acc = GridFunction::zero(g.grid());
    for (int n = 0; n < sys.size(); ++n) acc += c(n) * sys.phis[n];
    return acc;
}

double nullspace_norm(const BiorthoSystem& sys, const GridFunction& p) {
    const Eigen::VectorXd c = analysis_coefficients(sys, p);
    GridFunction back = GridFunction::zero(p.grid());
    for (int n = 0; n < sys.size(); ++n) back += c(n) * sys.ps[n];
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < p.grid().n; ++i) {
        sup = std::max(sup, std::abs(p.sample(i) - back.sample(i)));
        scale = std::max(scale, std::abs(p.sample(i)));
    }
    if (sup > 1e-6 * std::max(1.0, scale))
        throw std::domain_error("nullspace_norm: input lies outside span(p)");
    return c.norm();
}

std::pair<BiorthoSystem, ChangeOfBasis> change_of_basis(const BiorthoSystem& sys,
                                                        const std::vector<GridFunction>& new_phis,
                                                        double tol, double cond_limit) {
    require(static_cast<int>(new_phis.size()) == sys.size(),
            "change_of_basis: analysis family size mismatch");
    const int n0 = sys.size();
    Eigen::MatrixXd C(n0, n0);
    for (int m = 0; m < n0; ++m)
        for (int n = 0; n < n0; ++n) C(m, n) = inner(new_phis[m], sys.ps[n]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > cond_limit)
        throw std::domain_error("change_of_basis: cross-pairing matrix is ill-conditioned");

    const Eigen::MatrixXd B = C.inverse();
    std::vector<GridFunction> new_ps;
    for (int n = 0; n < n0; ++n) {
        PolynomialForm acc;
        for (int j = 0; j < n0; ++j) acc = add(acc, scale(sys.ps[j].polynomial_form(), B(j, n)));
        new_ps.push_back(GridFunction::polynomial(sys.ps[n].grid(), acc.coeffs));
    }

    ChangeOfBasis cob;
    cob.C = C;
    cob.B = B;
    cob.B2 = C.norm();        // Frobenius
    cob.B1 = 1.0 / B.norm();  // Frobenius
    return {make_biortho_system(new_phis, std::move(new_ps), tol), cob};
}

double projector_bound(const BiorthoSystem& sys, double alpha) {
    double s = 0.0;
    for (const auto& p : sys.ps) {
        const double v = weighted_sup_norm(p, WeightSpec{alpha});
        s += v * v;
    }
    return std::sqrt(s);
}

std::vector<double> hermite_coefficients(int k) {
    // He_0 = 1, He_1 = x, He_{j+1} = x He_j - j He_{j-1}
    std::vector<double> prev{1.0};
    if (k == 0) return prev;
    std::vector<double> cur{0.0, 1.0};
    for (int j = 1; j < k; ++j) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= static_cast<double>(j) * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<GridFunction> hermite_gaussian_phis(const Grid& g, int count, double shift) {
    require(count >= 1, "hermite system: need at least one function");
    std::vector<GridFunction> phis;
    const double root_2pi = std::sqrt(2.0 * kPi);
    double fact = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) fact *= n;
        PolynomialForm he{hermite_coefficients(n)};
        const double norm = 1.0 / std::sqrt(fact * root_2pi);
        phis.push_back(GridFunction::from_function(g, [he, norm, shift](double x) {
            const double t = x - shift;
            return norm * he.eval(t) * std::exp(-t * t / 2.0);
        }));
    }
    return phis;
}

BiorthoSystem hermite_gaussian_system(const Grid& g, int count) {
    std::vector<GridFunction> ps;
    const double root_2pi = std::sqrt(2.0 * kPi);
    double fact = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) fact *= n;
        PolynomialForm he{hermite_coefficients(n)};
        ps.push_back(GridFunction::polynomial(
            g, scale(he, 1.0 / std::sqrt(fact * root_2pi)).coeffs));
    }
    return make_biortho_system(hermite_gaussian_phis(g, count), std::move(ps), 1e-6);
}

BiorthoSystem gaussian_moment_system(const Grid& g, int count) {
    require(count >= 1, "moment system: need at least one function");
    std::vector<GridFunction> phis, ps;
    const double inv_root_2pi = 1.0 / std::sqrt(2.0 * kPi);
    double fact = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) fact *= n;
        PolynomialForm he{hermite_coefficients(n)};
        const double c = inv_root_2pi / fact;
        phis.push_back(GridFunction::from_function(
            g, [he, c](double x) { return c * he.eval(x) * std::exp(-x * x / 2.0); }));
        std::vector<double> mono(static_cast<std::size_t>(n) + 1, 0.0);
        mono.back() = 1.0;
        ps.push_back(GridFunction::polynomial(g, std::move(mono)));
    }
    return make_biortho_system(std::move(phis), std::move(ps), 1e-6);
}

BiorthoSystem delta_boundary_system(const Grid& g, int count) {
    require(count >= 1, "delta system: need at least one functional");
    require(g.contains(0.0), "delta system: grid must contain the origin");
    std::vector<GridFunction> phis, ps;
    double fact = 1.0;
    for (int n = 0; n < count; ++n) {
        if (n > 0) fact *= n;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        phis.push_back(GridFunction::delta_atom(g, 0.0, sign, n));
        std::vector<double> mono(static_cast<std::size_t>(n) + 1, 0.0);
        mono.back() = 1.0 / fact;
        ps.push_back(GridFunction::polynomial(g, std::move(mono)));
    }
    return make_biortho_system(std::move(phis), std::move(ps), 1e-6);
}

}  // namespace lspline
