#include "lspline/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lspline {

namespace {

double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid Grid::uniform(double x_min, double x_max, std::size_t n) {
    require(x_min < x_max, "grid: x_min must be < x_max");
    require(n >= 3, "grid: need at least 3 nodes");
    return Grid{x_min, x_max, n};
}

std::size_t Grid::nearest_index(double x) const {
    if (x <= x_min) return 0;
    if (x >= x_max) return n - 1;
    const double t = (x - x_min) / dx();
    auto i = static_cast<std::size_t>(std::llround(t));
    return std::min(i, n - 1);
}

// ---------------------------------------------------------------------------
// Closed forms

double PolynomialForm::eval(double x) const {
    double r = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) r = r * x + coeffs[k];
    return r;
}

PolynomialForm PolynomialForm::derivative() const {
    PolynomialForm d;
    if (coeffs.size() <= 1) return d;
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.coeffs[k - 1] = coeffs[k] * static_cast<double>(k);
    return d;
}

PolynomialForm PolynomialForm::derivative(int order) const {
    PolynomialForm d = *this;
    for (int i = 0; i < order; ++i) d = d.derivative();
    return d;
}

int PolynomialForm::degree() const {
    for (std::size_t k = coeffs.size(); k-- > 0;)
        if (coeffs[k] != 0.0) return static_cast<int>(k);
    return -1;
}

bool PolynomialForm::is_zero() const { return degree() < 0; }

PolynomialForm add(const PolynomialForm& a, const PolynomialForm& b) {
    PolynomialForm r;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) r.coeffs[k] += a.coeffs[k];
    for (std::size_t k = 0; k < b.coeffs.size(); ++k) r.coeffs[k] += b.coeffs[k];
    return r;
}

PolynomialForm scale(const PolynomialForm& a, double c) {
    PolynomialForm r = a;
    for (auto& v : r.coeffs) v *= c;
    return r;
}

double green_value(int m, double x) {
    require(m >= 1, "green_value: order must be positive");
    const double s = (x > 0.0) ? 0.5 : (x < 0.0 ? -0.5 : 0.0);
    double p = 1.0;
    for (int k = 0; k < m - 1; ++k) p *= x;
    return s * p / factorial(m - 1);
}

double GreenAtomForm::eval(double x) const { return weight * green_value(order, x - center); }

// ---------------------------------------------------------------------------
// GridFunction

void GridFunction::check_invariants() const {
    require(samples_.size() == grid_.n, "grid function: sample count must match the grid");
}

GridFunction GridFunction::from_samples(const Grid& g, std::vector<double> samples) {
    GridFunction f;
    f.grid_ = g;
    f.samples_ = std::move(samples);
    f.check_invariants();
    return f;
}

GridFunction GridFunction::from_function(const Grid& g, const std::function<double(double)>& fn) {
    std::vector<double> s(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s[i] = fn(g.node(i));
    return from_samples(g, std::move(s));
}

GridFunction GridFunction::closed_form(const Grid& g, std::vector<FormTerm> terms) {
    GridFunction f;
    f.grid_ = g;
    f.samples_.assign(g.n, 0.0);
    for (const auto& term : terms) {
        if (std::holds_alternative<DeltaAtomForm>(term)) continue;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.node(i);
            f.samples_[i] += std::visit(
                [&](const auto& t) -> double {
                    using T = std::decay_t<decltype(t)>;
                    if constexpr (std::is_same_v<T, PolynomialForm>) return t.eval(x);
                    else if constexpr (std::is_same_v<T, GreenAtomForm>) return t.eval(x);
                    else return 0.0;
                },
                term);
        }
    }
    f.form_ = std::move(terms);
    f.has_form_ = true;
    f.check_invariants();
    return f;
}

GridFunction GridFunction::polynomial(const Grid& g, std::vector<double> coeffs) {
    return closed_form(g, {PolynomialForm{std::move(coeffs)}});
}

GridFunction GridFunction::green_atom(const Grid& g, int order, double center, double weight) {
    require(order >= 1, "green atom: order must be positive");
    return closed_form(g, {GreenAtomForm{order, center, weight}});
}

GridFunction GridFunction::delta_atom(const Grid& g, double center, double weight, int deriv_order) {
    require(g.contains(center), "delta atom: center outside the grid");
    require(deriv_order >= 0, "delta atom: derivative order must be >= 0");
    return closed_form(g, {DeltaAtomForm{center, weight, deriv_order}});
}

GridFunction GridFunction::zero(const Grid& g) {
    return from_samples(g, std::vector<double>(g.n, 0.0));
}

const std::vector<FormTerm>& GridFunction::form() const {
    if (!has_form_) throw std::logic_error("grid function: no closed form attached");
    return form_;
}

bool GridFunction::quadrature_only() const {
    if (!has_form_) return false;
    for (const auto& t : form_)
        if (std::holds_alternative<DeltaAtomForm>(t)) return true;
    return false;
}

bool GridFunction::pure_polynomial() const {
    if (!has_form_) return false;
    for (const auto& t : form_)
        if (!std::holds_alternative<PolynomialForm>(t)) return false;
    return true;
}

PolynomialForm GridFunction::polynomial_form() const {
    require(pure_polynomial(), "grid function: not a polynomial");
    PolynomialForm p;
    for (const auto& t : form_) p = add(p, std::get<PolynomialForm>(t));
    return p;
}

std::vector<DeltaAtomForm> GridFunction::delta_terms() const {
    std::vector<DeltaAtomForm> out;
    if (!has_form_) return out;
    for (const auto& t : form_)
        if (const auto* d = std::get_if<DeltaAtomForm>(&t)) out.push_back(*d);
    return out;
}

double GridFunction::operator()(double x) const {
    if (quadrature_only())
        throw std::domain_error("grid function: delta atoms have no pointwise values");
    if (!grid_.contains(x)) throw std::domain_error("grid function: evaluation outside the grid");
    const double t = (x - grid_.x_min) / grid_.dx();
    auto i = static_cast<std::size_t>(t);
    if (i >= grid_.n - 1) i = grid_.n - 2;
    const double w = t - static_cast<double>(i);
    return (1.0 - w) * samples_[i] + w * samples_[i + 1];
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require(grid_ == other.grid_, "grid function: grid mismatch");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
    if (has_form_ && other.has_form_) {
        form_.insert(form_.end(), other.form_.begin(), other.form_.end());
    } else {
        has_form_ = false;
        form_.clear();
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (auto& v : samples_) v *= c;
    for (auto& t : form_) {
        std::visit(
            [&](auto& term) {
                using T = std::decay_t<decltype(term)>;
                if constexpr (std::is_same_v<T, PolynomialForm>) {
                    for (auto& a : term.coeffs) a *= c;
                } else {
                    term.weight *= c;
                }
            },
            t);
    }
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) {
    a += b;
    return a;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    GridFunction r = b;
    r *= -1.0;
    r += a;
    return r;
}

GridFunction operator*(GridFunction a, double c) {
    a *= c;
    return a;
}

GridFunction operator*(double c, GridFunction a) {
    a *= c;
    return a;
}

// ---------------------------------------------------------------------------
// Quadrature

double trapezoid(const Grid& g, const std::vector<double>& values) {
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * g.dx();
}

double trapezoid_within(const Grid& g, const std::vector<double>& values, double radius) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double xl = g.node(i), xr = g.node(i + 1);
        if (std::abs(xl) <= radius && std::abs(xr) <= radius)
            s += 0.5 * (values[i] + values[i + 1]);
    }
    return s * g.dx();
}

std::vector<double> cumulative_trapezoid(const Grid& g, const std::vector<double>& values,
                                         double anchor) {
    require(g.contains(anchor), "cumulative integral: anchor outside the grid");
    std::vector<double> c(values.size());
    c[0] = 0.0;
    const double h = g.dx();
    for (std::size_t i = 1; i < values.size(); ++i)
        c[i] = c[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
    // shift so the (interpolated) value at the anchor is exactly zero
    const double t = (anchor - g.x_min) / h;
    auto i = static_cast<std::size_t>(t);
    if (i >= c.size() - 1) i = c.size() - 2;
    const double w = t - static_cast<double>(i);
    const double at_anchor = (1.0 - w) * c[i] + w * c[i + 1];
    for (auto& v : c) v -= at_anchor;
    return c;
}

// ---------------------------------------------------------------------------
// Pairing

double derivative_at(const GridFunction& f, int order, double x0) {
    if (f.pure_polynomial()) return f.polynomial_form().derivative(order).eval(x0);
    if (order == 0) return f(x0);
    return fd_derivative(f, order)(x0);
}

namespace {

double pair_delta_side(const GridFunction& deltas, const GridFunction& smooth) {
    double s = 0.0;
    for (const auto& d : deltas.delta_terms()) {
        if (!smooth.grid().contains(d.center))
            throw std::invalid_argument("inner: delta atom center outside the grid");
        const double sign = (d.deriv_order % 2 == 0) ? 1.0 : -1.0;
        s += d.weight * sign * derivative_at(smooth, d.deriv_order, d.center);
    }
    // any smooth remainder carried next to the atoms pairs by quadrature
    bool smooth_part = false;
    for (double v : deltas.samples())
        if (v != 0.0) { smooth_part = true; break; }
    if (smooth_part) {
        if (deltas.grid() != smooth.grid())
            throw std::invalid_argument("inner: grid mismatch");
        std::vector<double> prod(deltas.samples().size());
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod[i] = deltas.sample(i) * smooth.sample(i);
        s += trapezoid(deltas.grid(), prod);
    }
    return s;
}

}  // namespace

double inner(const GridFunction& f, const GridFunction& g) {
    const bool fd = f.quadrature_only(), gd = g.quadrature_only();
    if (fd && gd) throw std::invalid_argument("inner: cannot pair two delta-carrying functions");
    if (fd) return pair_delta_side(f, g);
    if (gd) return pair_delta_side(g, f);
    if (f.grid() != g.grid()) throw std::invalid_argument("inner: grid mismatch");
    std::vector<double> prod(f.samples().size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f.sample(i) * g.sample(i);
    return trapezoid(f.grid(), prod);
}

// ---------------------------------------------------------------------------
// Weighted norms

double weighted_sup_norm(const GridFunction& f, const WeightSpec& w) {
    if (f.quadrature_only())
        throw std::domain_error("weighted_sup_norm: delta atoms have no pointwise norm");
    double m = 0.0;
    for (std::size_t i = 0; i < f.grid().n; ++i) {
        const double x = f.grid().node(i);
        m = std::max(m, std::pow(1.0 + std::abs(x), -w.alpha) * std::abs(f.sample(i)));
    }
    return m;
}

double weighted_l1_norm(const GridFunction& f, const WeightSpec& w) {
    if (f.quadrature_only())
        throw std::domain_error("weighted_l1_norm: delta atoms have no sampled L1 norm");
    std::vector<double> v(f.grid().n);
    for (std::size_t i = 0; i < f.grid().n; ++i) {
        const double x = f.grid().node(i);
        v[i] = std::pow(1.0 + std::abs(x), w.alpha) * std::abs(f.sample(i));
    }
    return trapezoid(f.grid(), v);
}

// ---------------------------------------------------------------------------
// Finite differences

namespace {

std::vector<double> fd_once(const Grid& g, const std::vector<double>& f, int order) {
    const double h = g.dx();
    const std::size_t n = f.size();
    std::vector<double> d(n);
    switch (order) {
        case 1: {
            const double c = 1.0 / (2.0 * h);
            for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * c;
            d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * c;
            d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * c;
            break;
        }
        case 2: {
            const double c = 1.0 / (h * h);
            for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * c;
            d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * c;
            d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * c;
            break;
        }
        case 3: {
            const double c = 1.0 / (2.0 * h * h * h);
            for (std::size_t i = 2; i + 2 < n; ++i)
                d[i] = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) * c;
            // first-order one-sided differences at the edges
            const double cf = 1.0 / (h * h * h);
            for (std::size_t i : {std::size_t{0}, std::size_t{1}})
                d[i] = (f[i + 3] - 3.0 * f[i + 2] + 3.0 * f[i + 1] - f[i]) * cf;
            for (std::size_t i : {n - 2, n - 1})
                d[i] = (f[i] - 3.0 * f[i - 1] + 3.0 * f[i - 2] - f[i - 3]) * cf;
            break;
        }
        case 4: {
            const double c = 1.0 / (h * h * h * h);
            for (std::size_t i = 2; i + 2 < n; ++i)
                d[i] = (f[i + 2] - 4.0 * f[i + 1] + 6.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) * c;
            for (std::size_t i : {std::size_t{0}, std::size_t{1}})
                d[i] = (f[i + 4] - 4.0 * f[i + 3] + 6.0 * f[i + 2] - 4.0 * f[i + 1] + f[i]) * c;
            for (std::size_t i : {n - 2, n - 1})
                d[i] = (f[i] - 4.0 * f[i - 1] + 6.0 * f[i - 2] - 4.0 * f[i - 3] + f[i - 4]) * c;
            break;
        }
        default:
            throw std::invalid_argument("fd stencil: unsupported order");
    }
    return d;
}

}  // namespace

GridFunction fd_derivative(const GridFunction& f, int order) {
    require(order >= 0, "fd_derivative: order must be >= 0");
    require(order <= 4, "fd_derivative: orders above 4 are not supported");
    if (order == 0) return f;
    if (f.pure_polynomial()) {
        PolynomialForm p = f.polynomial_form();
        for (int i = 0; i < order; ++i) p = p.derivative();
        return GridFunction::polynomial(f.grid(), p.coeffs);
    }
    if (f.quadrature_only())
        throw std::domain_error("fd_derivative: delta atoms cannot be differentiated pointwise");
    if (f.grid().n < 2 * static_cast<std::size_t>(order) + 1)
        throw std::invalid_argument("fd_derivative: grid resolution insufficient for this order");
    return GridFunction::from_samples(f.grid(), fd_once(f.grid(), f.samples(), order));
}

// ---------------------------------------------------------------------------
// Growth probes

namespace {

// binomial expansion of weight * (x - tau)^d
PolynomialForm shifted_power(int d, double tau, double weight) {
    PolynomialForm p;
    p.coeffs.assign(static_cast<std::size_t>(d) + 1, 0.0);
    double binom = 1.0;
    for (int j = d; j >= 0; --j) {
        // binom = C(d, j) evaluated incrementally from j = d down
        p.coeffs[static_cast<std::size_t>(j)] = weight * binom * std::pow(-tau, d - j);
        binom *= static_cast<double>(j);
        binom /= static_cast<double>(d - j + 1);
    }
    return p;
}

double tail_poly_degree(const PolynomialForm& p, double reach) {
    double smax = 0.0;
    std::vector<double> sig(p.coeffs.size(), 0.0);
    double scale = 1.0;
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
        sig[j] = std::abs(p.coeffs[j]) * scale;
        smax = std::max(smax, sig[j]);
        scale *= reach;
    }
    if (smax == 0.0) return -std::numeric_limits<double>::infinity();
    double deg = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sig.size(); ++j)
        if (sig[j] > 1e-10 * smax) deg = static_cast<double>(j);
    return deg;
}

// Closed forms have exact asymptotics: on either side of all atom centers the
// function is a polynomial, so the growth degree is read off its coefficients
// (cancellations between atoms included).
double analytic_growth_degree(const GridFunction& f, double reach) {
    PolynomialForm right, left;
    for (const auto& term : f.form()) {
        if (const auto* p = std::get_if<PolynomialForm>(&term)) {
            right = add(right, *p);
            left = add(left, *p);
        } else if (const auto* ga = std::get_if<GreenAtomForm>(&term)) {
            const double c = ga->weight * 0.5 / [&] {
                double fac = 1.0;
                for (int i = 2; i <= ga->order - 1; ++i) fac *= i;
                return fac;
            }();
            const PolynomialForm q = shifted_power(ga->order - 1, ga->center, c);
            right = add(right, q);
            left = add(left, scale(q, -1.0));
        }
        // delta atoms carry no pointwise growth
    }
    return std::max(tail_poly_degree(right, reach), tail_poly_degree(left, reach));
}

}  // namespace

double growth_exponent(const GridFunction& f) {
    const Grid& g = f.grid();
    const double reach = std::max(std::abs(g.x_min), std::abs(g.x_max));
    if (f.has_form()) return analytic_growth_degree(f, reach);

    const double rim = 0.8 * reach;
    double peak = 0.0;
    for (double v : f.samples()) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return -std::numeric_limits<double>::infinity();

    // a tail four orders below the peak is decay, not growth: the log-log fit
    // is meaningless there (sign crossings send log|f| to -inf and back)
    double rim_peak = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::abs(g.node(i)) >= rim) rim_peak = std::max(rim_peak, std::abs(f.sample(i)));
    if (rim_peak <= 1e-4 * peak) return -std::numeric_limits<double>::infinity();

    // fit the envelope: per-bin maxima of |f| over |x|, pooled from both
    // tails, so zeros of f inside the window do not distort the slope
    constexpr int kBins = 8;
    double bin_max[kBins] = {0.0};
    double bin_x[kBins] = {0.0};
    for (std::size_t i = 0; i < g.n; ++i) {
        const double ax = std::abs(g.node(i));
        if (ax < rim || ax <= 1.0) continue;
        const double t = (ax - rim) / std::max(reach - rim, 1e-300);
        const int b = std::min(kBins - 1, static_cast<int>(t * kBins));
        if (std::abs(f.sample(i)) > bin_max[b]) {
            bin_max[b] = std::abs(f.sample(i));
            bin_x[b] = ax;
        }
    }
    std::vector<double> lx, lf;
    for (int b = 0; b < kBins; ++b) {
        if (bin_max[b] > 1e-13 * peak) {
            lx.push_back(std::log(bin_x[b]));
            lf.push_back(std::log(bin_max[b]));
        }
    }
    if (lx.size() < 4) return -std::numeric_limits<double>::infinity();

    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double mf = std::accumulate(lf.begin(), lf.end(), 0.0) / n;
    double sxx = 0.0, sxf = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxf += (lx[i] - mx) * (lf[i] - mf);
    }
    if (sxx <= 0.0) return -std::numeric_limits<double>::infinity();
    return sxf / sxx;
}

bool sup_growth_ok(const GridFunction& f, double alpha) {
    return growth_exponent(f) <= alpha + 0.1;
}

bool l1_decay_ok(const GridFunction& f, double alpha) {
    return growth_exponent(f) <= -(alpha + 1.0) - 0.1;
}

}  // namespace lspline
