#include "lspline/operators.hpp"

#include <algorithm>
#include <cmath>

namespace lspline {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// rho_m sampled on the difference set {k * dx}: the convolution kernel table.
std::vector<double> green_table(const OperatorDescriptor& op, const Grid& g) {
    const auto n = static_cast<std::ptrdiff_t>(g.n);
    std::vector<double> t(2 * g.n - 1);
    for (std::ptrdiff_t k = -(n - 1); k <= n - 1; ++k)
        t[static_cast<std::size_t>(k + n - 1)] = green_value(op.order, static_cast<double>(k) * g.dx());
    return t;
}

std::vector<double> convolve_table(const Grid& g, const std::vector<double>& table,
                                   const std::vector<double>& w) {
    const std::size_t n = g.n;
    std::vector<double> out(n);
    const double* t = table.data() + (n - 1);  // t[i - j] addressing
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* ti = t + i;
        for (std::size_t j = 0; j < n; ++j) s += ti[-static_cast<std::ptrdiff_t>(j)] * w[j];
        s -= 0.5 * (ti[0] * w[0] + ti[-static_cast<std::ptrdiff_t>(n - 1)] * w[n - 1]);
        out[i] = s * g.dx();
    }
    return out;
}

}  // namespace

OperatorDescriptor make_derivative_operator(int m) {
    require(m >= 1 && m <= 4, "derivative operator: order must be in 1..4");
    OperatorDescriptor op;
    op.order = m;
    op.alpha = static_cast<double>(m - 1);
    for (int k = 0; k < m; ++k) {
        PolynomialForm p;
        p.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
        p.coeffs.back() = 1.0;
        op.null_basis.push_back(std::move(p));
    }
    return op;
}

double green(const OperatorDescriptor& op, double x) { return green_value(op.order, x); }

GridFunction green_atom(const Grid& g, const OperatorDescriptor& op, double center, double weight) {
    return GridFunction::green_atom(g, op.order, center, weight);
}

GridFunction apply(const OperatorDescriptor& op, const GridFunction& f) {
    const int m = op.order;
    if (f.has_form()) {
        std::vector<FormTerm> out;
        for (const auto& term : f.form()) {
            if (const auto* p = std::get_if<PolynomialForm>(&term)) {
                PolynomialForm d = p->derivative(m);
                if (!d.is_zero()) out.emplace_back(std::move(d));
            } else if (const auto* ga = std::get_if<GreenAtomForm>(&term)) {
                if (ga->order > m) {
                    out.emplace_back(GreenAtomForm{ga->order - m, ga->center, ga->weight});
                } else {
                    // D^m rho_k = delta^{(m-k)}
                    out.emplace_back(DeltaAtomForm{ga->center, ga->weight, m - ga->order});
                }
            } else {
                const auto& da = std::get<DeltaAtomForm>(term);
                out.emplace_back(DeltaAtomForm{da.center, da.weight, da.deriv_order + m});
            }
        }
        if (out.empty()) return GridFunction::zero(f.grid());
        return GridFunction::closed_form(f.grid(), std::move(out));
    }
    return fd_derivative(f, m);
}

GridFunction apply_adjoint(const OperatorDescriptor& op, const GridFunction& g) {
    GridFunction r = apply(op, g);
    if (op.order % 2 != 0) r *= -1.0;
    return r;
}

GridFunction anti_derivative_delta(const GridFunction& f, int iterations) {
    require(iterations >= 1, "anti_derivative_delta: need at least one iteration");
    require(f.grid().contains(0.0), "anti_derivative_delta: grid must contain the origin");
    if (f.quadrature_only())
        throw std::domain_error("anti_derivative_delta: input must be sampled");
    std::vector<double> v = f.samples();
    for (int it = 0; it < iterations; ++it) v = cumulative_trapezoid(f.grid(), v, 0.0);
    return GridFunction::from_samples(f.grid(), std::move(v));
}

GridFunction canonical_inverse(const OperatorDescriptor& op, const GridFunction& w) {
    const Grid& g = w.grid();
    if (w.quadrature_only()) {
        std::vector<FormTerm> out;
        for (const auto& d : w.delta_terms()) {
            if (d.deriv_order >= op.order)
                throw std::invalid_argument(
                    "canonical_inverse: delta derivative order must be below the operator order");
            // rho_m * delta^{(k)} = rho_{m-k}
            out.emplace_back(GreenAtomForm{op.order - d.deriv_order, d.center, d.weight});
        }
        // smooth remainder riding along with the atoms
        bool smooth = false;
        for (double v : w.samples())
            if (v != 0.0) { smooth = true; break; }
        GridFunction atoms = GridFunction::closed_form(g, std::move(out));
        if (!smooth) return atoms;
        auto table = green_table(op, g);
        GridFunction conv =
            GridFunction::from_samples(g, convolve_table(g, table, w.samples()));
        return atoms + conv;
    }
    auto table = green_table(op, g);
    return GridFunction::from_samples(g, convolve_table(g, table, w.samples()));
}

GridFunction canonical_inverse_adjoint(const OperatorDescriptor& op, const GridFunction& g) {
    GridFunction r = canonical_inverse(op, g);
    if (op.order % 2 != 0) r *= -1.0;
    return r;
}

std::vector<GridFunction> default_test_bank(const Grid& g) {
    std::vector<GridFunction> bank;
    for (double c : {-1.0, 0.0, 1.0}) {
        for (double sigma : {1.7, 1.8}) {
            bank.push_back(GridFunction::from_function(
                g, [c, sigma](double x) { return std::exp(-(x - c) * (x - c) / (2.0 * sigma * sigma)); }));
        }
    }
    return bank;
}

Report admissibility_check(const OperatorDescriptor& op, const std::vector<GridFunction>& bank) {
    require(!bank.empty(), "admissibility_check: test bank must be nonempty");
    const Grid& g = bank.front().grid();
    Report rep;
    rep.title = "admissibility D^" + std::to_string(op.order);

    const std::size_t margin = 5 * static_cast<std::size_t>(op.order);
    auto interior_sup = [&](const GridFunction& f) {
        double m = 0.0;
        for (std::size_t i = margin; i + margin < f.grid().n; ++i)
            m = std::max(m, std::abs(f.sample(i)));
        return m;
    };

    // (a) the null basis is annihilated
    double null_res = 0.0;
    for (const auto& p : op.null_basis) {
        GridFunction pf = GridFunction::polynomial(g, p.coeffs);
        null_res = std::max(null_res, interior_sup(apply(op, pf)));
    }
    rep.add("null_basis_annihilation", null_res, 1e-8);

    // (b) inverse identities over the bank; forward application is numeric,
    // so the budget tracks the discretization error of the stencil and the
    // boundary ramp of rho_m at the default resolution
    double tol_id = 1e-6;
    switch (op.order) {
        case 1: tol_id = 5e-6; break;
        case 2: tol_id = 1e-6; break;
        case 3: tol_id = 5e-5; break;
        default: tol_id = 1e-3; break;
    }
    double left = 0.0, left_adj = 0.0, forward_l1 = 0.0;
    for (const auto& phi : bank) {
        GridFunction lphi = fd_derivative(phi, op.order);
        left = std::max(left, interior_sup(canonical_inverse(op, lphi) - phi));
        GridFunction lstar = apply_adjoint(op, phi);
        left_adj = std::max(left_adj, interior_sup(canonical_inverse_adjoint(op, lstar) - phi));
        forward_l1 = std::max(forward_l1, weighted_l1_norm(lphi, WeightSpec{op.alpha}));
    }
    rep.add("left_inverse_residual", left, tol_id);
    rep.add("adjoint_left_inverse_residual", left_adj, tol_id);

    // (c) growth probes against alpha
    GridFunction rho = GridFunction::from_function(
        g, [&op](double x) { return green_value(op.order, x); });
    rep.add("green_growth_exponent", growth_exponent(rho), op.alpha + 0.1);
    double null_growth = -std::numeric_limits<double>::infinity();
    for (const auto& p : op.null_basis) {
        GridFunction pf = GridFunction::polynomial(g, p.coeffs);
        null_growth = std::max(null_growth, growth_exponent(pf));
    }
    rep.add("null_basis_growth_exponent", null_growth, op.alpha + 0.1);

    // boundedness spot check of L into the weighted-L1 space (finite values
    // only; continuity itself is not decidable on a truncated grid)
    rep.add("forward_l1_norm", forward_l1, std::numeric_limits<double>::infinity());
    rep.items.back().pass = std::isfinite(forward_l1);
    return rep;
}

}  // namespace lspline
