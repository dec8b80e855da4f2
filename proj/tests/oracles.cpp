#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    return adaptive(f, a, b, fa, fm, fb, whole, tol, 48);
}

double linear_spline_energy(const std::vector<double>& x, const std::vector<double>& y) {
    double e = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double dy = y[i] - y[i - 1];
        e += dy * dy / (x[i] - x[i - 1]);
    }
    return e;
}

double total_variation_lower_bound(const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) s += std::abs(y[i] - y[i - 1]);
    return s;
}

double slope_change_lower_bound(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> slopes;
    for (std::size_t i = 1; i < x.size(); ++i)
        slopes.push_back((y[i] - y[i - 1]) / (x[i] - x[i - 1]));
    double s = 0.0;
    for (std::size_t i = 1; i < slopes.size(); ++i) s += std::abs(slopes[i] - slopes[i - 1]);
    return s;
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3) throw std::invalid_argument("natural cubic spline: need at least 3 points");
    m2_.assign(n, 0.0);
    const std::size_t k = n - 2;  // interior unknowns
    std::vector<double> diag(k), lower(k), upper(k), rhs(k);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        lower[i - 1] = hl / 6.0;
        diag[i - 1] = (hl + hr) / 3.0;
        upper[i - 1] = hr / 6.0;
        rhs[i - 1] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    // Thomas elimination
    for (std::size_t i = 1; i < k; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> sol(k);
    sol[k - 1] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
    for (std::size_t i = 0; i < k; ++i) m2_[i + 1] = sol[i];
}

double NaturalCubicSpline::operator()(double t) const {
    std::size_t i = 0;
    while (i + 2 < x_.size() && t > x_[i + 1]) ++i;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * h * h / 6.0;
}

double qp_nullspace_objective(const Eigen::MatrixXd& G, const Eigen::MatrixXd& P,
                              const Eigen::VectorXd& y) {
    const Eigen::Index k = G.rows();   // dictionary size
    const Eigen::Index m = y.size();   // constraints come in as rows of P
    const Eigen::Index n0 = P.cols();
    // constraints: [A P_M; P_K^T 0][c; b] = [y; 0] where A is the first m rows
    // of the dictionary kernel matrix and P_K the dictionary moment matrix.
    // Callers pass G as the full dictionary Gram (k x k), P as the stacked
    // [P_M over first m rows; P_K over all k rows] is awkward, so this oracle
    // takes A = G.topRows(m) (data sites are the leading dictionary entries).
    const Eigen::MatrixXd A = G.topRows(m);
    const Eigen::MatrixXd PM = P.topRows(m);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m + n0, k + n0);
    C.topLeftCorner(m, k) = A;
    C.topRightCorner(m, n0) = PM;
    C.bottomLeftCorner(n0, k) = P.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + n0);
    rhs.head(m) = y;

    const Eigen::VectorXd z0 = C.colPivHouseholderQr().solve(rhs);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    const Eigen::MatrixXd N = lu.kernel();

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k + n0, k + n0);
    H.topLeftCorner(k, k) = G;
    const Eigen::MatrixXd Hr = N.transpose() * H * N;
    const Eigen::VectorXd gr = N.transpose() * H * z0;
    const Eigen::VectorXd t = Hr.ldlt().solve(-gr);
    const Eigen::VectorXd z = z0 + N * t;
    return z.head(k).dot(G * z.head(k));
}

}  // namespace oracles
