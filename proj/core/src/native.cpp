#include "lspline/native.hpp"

#include <algorithm>
#include <cmath>

namespace lspline {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double conjugate_exponent(double p) { return p / (p - 1.0); }

double lp_norm_sampled(const Grid& g, const std::vector<double>& v, double p) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::pow(std::abs(v[i]), p);
    return std::pow(trapezoid(g, a), 1.0 / p);
}

double lp_norm_within(const Grid& g, const std::vector<double>& v, double p, double radius) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::pow(std::abs(v[i]), p);
    return std::pow(trapezoid_within(g, a, radius), 1.0 / p);
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double margin_sup(const GridFunction& f, std::size_t margin) {
    double m = 0.0;
    for (std::size_t i = margin; i + margin < f.grid().n; ++i)
        m = std::max(m, std::abs(f.sample(i)));
    return m;
}

// Divergence probe: the norm restricted to |x| <= (2/3) reach must account
// for the full-domain norm up to 5%; otherwise the tail is still growing and
// the limit value does not exist.
void two_scale_check(const NativeSpaceSpec& spec, const Grid& g, const std::vector<double>& density) {
    const double reach = std::max(std::abs(g.x_min), std::abs(g.x_max));
    const double radius = 2.0 * reach / 3.0;
    double full = 0.0, inner_part = 0.0;
    switch (spec.norm) {
        case PrimaryNorm::L2:
            full = lp_norm_sampled(g, density, 2.0);
            inner_part = lp_norm_within(g, density, 2.0, radius);
            break;
        case PrimaryNorm::TotalVariation:
            full = lp_norm_sampled(g, density, 1.0);
            inner_part = lp_norm_within(g, density, 1.0, radius);
            break;
        case PrimaryNorm::Lp:
            full = lp_norm_sampled(g, density, spec.p);
            inner_part = lp_norm_within(g, density, spec.p, radius);
            break;
    }
    if (full > 1.05 * inner_part + 1e-12 * (1.0 + full))
        throw MembershipError("native_norm: ||Lf|| still grows with the truncation radius");
}

}  // namespace

NativeSpaceSpec make_native_spec(OperatorDescriptor op, BiorthoSystem sys, PrimaryNorm norm,
                                 double p) {
    require(sys.size() == op.order, "native spec: system size must match the null-space dimension");
    if (norm == PrimaryNorm::Lp) require(p > 1.0, "native spec: Lp exponent must exceed 1");

    // span(sys.ps) must equal span(null basis): polynomial coefficient matrix
    // of the ps, padded to degree m-1, must have full rank
    const int m = op.order;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        require(sys.ps[i].pure_polynomial(), "native spec: null basis must be polynomial");
        const auto& c = sys.ps[i].polynomial_form().coeffs;
        require(static_cast<int>(c.size()) <= m, "native spec: basis degree exceeds the null space");
        for (std::size_t j = 0; j < c.size(); ++j) K(i, static_cast<int>(j)) = c[j];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    require(lu.rank() == m, "native spec: system does not span the operator null space");

    if (norm == PrimaryNorm::TotalVariation) {
        for (const auto& phi : sys.phis) {
            if (phi.quadrature_only())
                throw std::invalid_argument(
                    "native spec: phi not admissible for X = C0 (delta atoms are not integrable "
                    "analysis functionals there)");
            if (!l1_decay_ok(phi, op.alpha))
                throw std::invalid_argument("native spec: phi fails the weighted-L1 decay probe");
        }
    }
    return NativeSpaceSpec{std::move(op), std::move(sys), norm, p};
}

GridFunction stabilized_inverse(const NativeSpaceSpec& spec, const GridFunction& w) {
    GridFunction q = canonical_inverse(spec.op, w);
    return q - project_nullspace(spec.sys, q);
}

GridFunction stabilized_inverse_adjoint(const NativeSpaceSpec& spec, const GridFunction& g) {
    if (!g.quadrature_only() && !l1_decay_ok(g, spec.op.alpha))
        throw MembershipError("stabilized_inverse_adjoint: divergent moments (decay probe failed)");
    GridFunction h = g - project_analysis_span(spec.sys, g);
    return canonical_inverse_adjoint(spec.op, h);
}

double x_norm(const NativeSpaceSpec& spec, const GridFunction& v) {
    switch (spec.norm) {
        case PrimaryNorm::L2:
            return lp_norm_sampled(v.grid(), v.samples(), 2.0);
        case PrimaryNorm::TotalVariation:
            return sup_norm(v.samples());
        case PrimaryNorm::Lp:
            return lp_norm_sampled(v.grid(), v.samples(), conjugate_exponent(spec.p));
    }
    return 0.0;
}

double xprime_norm_sampled(const NativeSpaceSpec& spec, const GridFunction& w) {
    switch (spec.norm) {
        case PrimaryNorm::L2:
            return lp_norm_sampled(w.grid(), w.samples(), 2.0);
        case PrimaryNorm::TotalVariation:
            return lp_norm_sampled(w.grid(), w.samples(), 1.0);
        case PrimaryNorm::Lp:
            return lp_norm_sampled(w.grid(), w.samples(), spec.p);
    }
    return 0.0;
}

NormBreakdown native_norm(const NativeSpaceSpec& spec, const GridFunction& f) {
    if (f.quadrature_only())
        throw MembershipError("native_norm: delta atoms do not belong to the native space");
    if (!sup_growth_ok(f, spec.op.alpha))
        throw MembershipError("native_norm: growth probe exceeds the operator order");

    const GridFunction w = apply(spec.op, f);

    NormBreakdown out;
    const auto atoms = w.delta_terms();
    if (!atoms.empty()) {
        if (spec.norm != PrimaryNorm::TotalVariation)
            throw MembershipError("native_norm: L f carries point masses; not an Lp density");
        for (const auto& a : atoms) {
            if (a.deriv_order != 0)
                throw MembershipError("native_norm: delta derivatives are not finite measures");
            out.operator_part += std::abs(a.weight);
        }
        bool smooth = false;
        for (double v : w.samples())
            if (v != 0.0) { smooth = true; break; }
        if (smooth) {
            two_scale_check(spec, w.grid(), w.samples());
            out.operator_part += lp_norm_sampled(w.grid(), w.samples(), 1.0);
        }
    } else {
        two_scale_check(spec, w.grid(), w.samples());
        out.operator_part = xprime_norm_sampled(spec, w);
    }

    out.nullspace_part = analysis_coefficients(spec.sys, f).norm();
    out.value = out.operator_part + out.nullspace_part;
    return out;
}

double predual_norm(const NativeSpaceSpec& spec, const GridFunction& g) {
    const GridFunction v = stabilized_inverse_adjoint(spec, g);
    const double first = x_norm(spec, v);
    const double second = basis_moments(spec.sys, g).norm();
    return std::max(first, second);
}

Decomposition decompose(const NativeSpaceSpec& spec, const GridFunction& f) {
    native_norm(spec, f);  // membership gate
    Decomposition d{apply(spec.op, f), analysis_coefficients(spec.sys, f)};
    return d;
}

GridFunction reconstruct(const NativeSpaceSpec& spec, const Decomposition& d) {
    GridFunction f = stabilized_inverse(spec, d.w);
    for (int n = 0; n < spec.sys.size(); ++n) f += d.p_coeffs(n) * spec.sys.ps[n];
    return f;
}

// ---------------------------------------------------------------------------
// Gaussian mixtures

double GaussianMixture::value(double x) const {
    double s = 0.0;
    for (const auto& c : components) {
        const double t = (x - c.mean) / c.sigma;
        s += c.coeff * std::exp(-0.5 * t * t);
    }
    return s;
}

double GaussianMixture::derivative(double x, int order) const {
    if (order == 0) return value(x);
    const PolynomialForm he{hermite_coefficients(order)};
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    double s = 0.0;
    for (const auto& c : components) {
        const double t = (x - c.mean) / c.sigma;
        s += c.coeff * sign * std::pow(c.sigma, -order) * he.eval(t) * std::exp(-0.5 * t * t);
    }
    return s;
}

GridFunction GaussianMixture::sampled(const Grid& g) const {
    return GridFunction::from_function(g, [this](double x) { return value(x); });
}

GridFunction GaussianMixture::sampled_derivative(const Grid& g, int order) const {
    if (order == 0) return sampled(g);
    const PolynomialForm he{hermite_coefficients(order)};
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> v(g.n, 0.0);
    for (const auto& c : components) {
        const double amp = c.coeff * sign * std::pow(c.sigma, -order);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double t = (g.node(i) - c.mean) / c.sigma;
            v[i] += amp * he.eval(t) * std::exp(-0.5 * t * t);
        }
    }
    return GridFunction::from_samples(g, std::move(v));
}

GaussianMixture random_mixture(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(2, 4);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> mean(-2.5, 2.5);
    std::uniform_real_distribution<double> sigma(0.8, 1.6);
    GaussianMixture m;
    for (int attempt = 0; attempt < 64; ++attempt) {
        m.components.clear();
        const int k = count(rng);
        double peak = 0.0;
        for (int i = 0; i < k; ++i) {
            GaussianMixture::Component c{coeff(rng), mean(rng), sigma(rng)};
            peak = std::max(peak, std::abs(c.coeff));
            m.components.push_back(c);
        }
        if (peak >= 0.25) return m;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Identity suite

Report identity_suite(const NativeSpaceSpec& spec, int trials, std::uint64_t seed) {
    require(trials >= 1, "identity_suite: need at least one trial");
    require(spec.sys.sampled_analysis(),
            "identity_suite: requires sampled analysis functions (no delta atoms)");

    const Grid& g = spec.sys.phis.front().grid();
    const int m = spec.op.order;
    const std::size_t margin = 5 * static_cast<std::size_t>(m);
    const double adjoint_sign = (m % 2 == 0) ? 1.0 : -1.0;

    std::mt19937_64 rng(seed);
    double r_left = 0.0, r_pseudo_right = 0.0, r_right = 0.0, r_left_pseudo = 0.0;
    double r_iso = 0.0, r_annihilation = 0.0, r_dual_gap = -1.0;

    for (int t = 0; t < trials; ++t) {
        // (a) left inverse of L* and (e) the isometry it induces
        const GaussianMixture mv = random_mixture(rng);
        const GridFunction v = mv.sampled(g);
        const GridFunction lstar_v = adjoint_sign * mv.sampled_derivative(g, m);
        const GridFunction v_hat = stabilized_inverse_adjoint(spec, lstar_v);
        r_left = std::max(r_left, margin_sup(v_hat - v, margin));
        r_iso = std::max(r_iso, std::abs(x_norm(spec, v_hat) - x_norm(spec, v)));

        // (b) pseudo-right inverse of L*
        const GaussianMixture mg = random_mixture(rng);
        const GridFunction gg = mg.sampled(g);
        const GridFunction vb = stabilized_inverse_adjoint(spec, gg);
        const GridFunction lhs_b = apply_adjoint(spec.op, vb);
        const GridFunction rhs_b = gg - project_analysis_span(spec.sys, gg);
        r_pseudo_right = std::max(r_pseudo_right, margin_sup(lhs_b - rhs_b, margin));

        // (c) right inverse of L, plus annihilation of the analysis moments
        const GaussianMixture mw = random_mixture(rng);
        const GridFunction w = mw.sampled(g);
        const GridFunction s = stabilized_inverse(spec, w);
        r_right = std::max(r_right, margin_sup(apply(spec.op, s) - w, margin));
        r_annihilation =
            std::max(r_annihilation, analysis_coefficients(spec.sys, s).cwiseAbs().maxCoeff());

        // dual-norm bank estimate never exceeds the direct norm
        const double direct = xprime_norm_sampled(spec, w);
        double lb = 0.0;
        auto probe = [&](const GridFunction& psi) {
            const double nx = x_norm(spec, psi);
            if (nx > 1e-12) lb = std::max(lb, std::abs(inner(w, psi)) / nx);
        };
        probe(v);
        probe(gg);
        for (const auto& phi : spec.sys.phis) probe(phi);
        r_dual_gap = std::max(r_dual_gap, (lb - direct) / (1.0 + direct));

        // (d) left pseudo-inverse of L
        const GaussianMixture mf = random_mixture(rng);
        const GridFunction f = mf.sampled(g);
        const GridFunction lf = mf.sampled_derivative(g, m);
        const GridFunction sd = stabilized_inverse(spec, lf);
        const GridFunction rhs_d = f - project_nullspace(spec.sys, f);
        r_left_pseudo = std::max(r_left_pseudo, margin_sup(sd - rhs_d, margin));
    }

    Report rep;
    rep.title = "identity suite D^" + std::to_string(m);
    rep.add("left_inverse", r_left, 1e-4);
    rep.add("pseudo_right_inverse", r_pseudo_right, 1e-4);
    rep.add("right_inverse", r_right, 1e-4);
    rep.add("left_pseudo_inverse", r_left_pseudo, 1e-4);
    rep.add("isometry", r_iso, 1e-4);
    rep.add("moment_annihilation", r_annihilation, 1e-6);
    rep.add("dual_norm_lower_bound_gap", r_dual_gap, 1e-8);
    return rep;
}

std::pair<double, double> norm_equivalence_constants(const NativeSpaceSpec& spec,
                                                     const NativeSpaceSpec& spec_tilde) {
    double sum_tilde_in_base = 0.0;
    for (const auto& phi : spec_tilde.sys.phis) sum_tilde_in_base += predual_norm(spec, phi);
    double sum_base_in_tilde = 0.0;
    for (const auto& phi : spec.sys.phis) sum_base_in_tilde += predual_norm(spec_tilde, phi);
    const double a1 = 1.0 / (1.0 + sum_base_in_tilde);
    const double a2 = 1.0 + sum_tilde_in_base;
    return {a1, a2};
}

}  // namespace lspline
