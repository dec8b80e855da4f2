#include <doctest.h>

#include <cmath>
#include <random>

#include "lspline/gridfn.hpp"
#include "oracles.hpp"

using namespace lspline;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid construction and invariants") {
    const Grid g = Grid::uniform(-12.0, 12.0, 4801);
    CHECK(g.dx() == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(g.node(0) == -12.0);
    CHECK(g.node(4800) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK_THROWS_AS(Grid::uniform(1.0, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(Grid::uniform(0.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("inner: indicator against one matches the exact integral") {
    const Grid g = Grid::uniform(-12.0, 12.0, 4801);
    const GridFunction ind = GridFunction::from_function(
        g, [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; });
    const GridFunction one = GridFunction::polynomial(g, {1.0});
    CHECK(std::abs(inner(ind, one) - 1.0) <= 2.0 * g.dx());
}

TEST_CASE("inner: odd times even vanishes on a symmetric grid") {
    const Grid g = Grid::standard();
    const GridFunction odd = GridFunction::polynomial(g, {0.0, 1.0});
    const GridFunction even =
        GridFunction::from_function(g, [](double x) { return std::exp(-x * x / 2.0); });
    CHECK(std::abs(inner(odd, even)) <= 1e-12);
}

TEST_CASE("inner: unit Gaussian density integrates to one") {
    const Grid g = Grid::standard();
    const GridFunction density = GridFunction::from_function(
        g, [](double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); });
    const GridFunction one = GridFunction::polynomial(g, {1.0});
    // oracle cross-check of the frozen value
    const double byquad = oracles::integrate(
        [](double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); }, -12.0, 12.0);
    CHECK(byquad == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inner(density, one) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("inner: grid mismatch and delta preconditions") {
    const Grid g1 = Grid::uniform(-1.0, 1.0, 11);
    const Grid g2 = Grid::uniform(-1.0, 1.0, 21);
    const GridFunction a = GridFunction::zero(g1);
    const GridFunction b = GridFunction::zero(g2);
    CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction::delta_atom(g1, 5.0, 1.0), std::invalid_argument);
    const GridFunction d1 = GridFunction::delta_atom(g1, 0.0, 1.0);
    CHECK_THROWS_AS(inner(d1, d1), std::invalid_argument);
}

TEST_CASE("delta pairing differentiates the other side") {
    const Grid g = Grid::standard();
    const GridFunction cubic = GridFunction::polynomial(g, {0.0, 0.0, 0.0, 1.0});
    const GridFunction d0 = GridFunction::delta_atom(g, 0.5, 2.0, 0);
    CHECK(inner(d0, cubic) == doctest::Approx(2.0 * 0.125).epsilon(1e-14));
    // <delta'(.-tau), g> = -g'(tau)
    const GridFunction d1 = GridFunction::delta_atom(g, 0.5, 1.0, 1);
    CHECK(inner(d1, cubic) == doctest::Approx(-3.0 * 0.25).epsilon(1e-14));
}

TEST_CASE("weighted sup norm") {
    const Grid g10 = Grid::uniform(-10.0, 10.0, 2001);
    CHECK(weighted_sup_norm(GridFunction::polynomial(g10, {1.0}), WeightSpec{0.0}) == 1.0);
    const GridFunction growth =
        GridFunction::from_function(g10, [](double x) { return 1.0 + std::abs(x); });
    CHECK(weighted_sup_norm(growth, WeightSpec{1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(weighted_sup_norm(GridFunction::polynomial(g10, {0.0, 1.0}), WeightSpec{0.0}) ==
          doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("weighted L1 norm") {
    const Grid g = Grid::standard();
    CHECK(weighted_l1_norm(GridFunction::zero(g), WeightSpec{0.0}) == 0.0);
    const GridFunction density = GridFunction::from_function(
        g, [](double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); });
    CHECK(weighted_l1_norm(density, WeightSpec{0.0}) == doctest::Approx(1.0).epsilon(1e-10));

    const GridFunction ind = GridFunction::from_function(
        g, [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; });
    // integral of (1+x) over [0,1] = 1.5, trapezoid error is O(dx) at the jump
    CHECK(std::abs(weighted_l1_norm(ind, WeightSpec{1.0}) - 1.5) <= 2.0 * g.dx());
}

TEST_CASE("fd_derivative: exactness and error order") {
    const Grid g = Grid::standard();
    const GridFunction sq = GridFunction::from_samples(g, [&] {
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = g.node(i) * g.node(i);
        return v;
    }());
    const GridFunction d = fd_derivative(sq, 1);
    for (std::size_t i = 100; i < g.n - 100; i += 480)
        CHECK(d.sample(i) == doctest::Approx(2.0 * g.node(i)).epsilon(1e-10));

    const GridFunction c = GridFunction::polynomial(g, {3.0});
    CHECK(weighted_sup_norm(fd_derivative(c, 2), WeightSpec{0.0}) == 0.0);

    // sin'' = -sin with O(dx^2) truncation error on the interior
    const GridFunction s = GridFunction::from_function(g, [](double x) { return std::sin(x); });
    const GridFunction d2 = fd_derivative(s, 2);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < g.n; ++i)
        worst = std::max(worst, std::abs(d2.sample(i) + std::sin(g.node(i))));
    CHECK(worst <= g.dx() * g.dx());
}

TEST_CASE("fd_derivative rejects unresolvable orders") {
    const Grid g = Grid::uniform(0.0, 1.0, 5);
    const GridFunction f = GridFunction::zero(g);
    CHECK_THROWS_AS(fd_derivative(f, 3), std::invalid_argument);
    CHECK_THROWS_AS(fd_derivative(GridFunction::zero(Grid::standard()), 5),
                    std::invalid_argument);
}

TEST_CASE("fd_derivative composition is exact on polynomial forms") {
    const Grid g = Grid::standard();
    const GridFunction p = GridFunction::polynomial(g, {1.0, -2.0, 0.5, 3.0, -0.25});
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
            const GridFunction lhs = fd_derivative(fd_derivative(p, a), b);
            const GridFunction rhs = fd_derivative(p, a + b);
            REQUIRE(lhs.samples().size() == rhs.samples().size());
            for (std::size_t i = 0; i < lhs.samples().size(); ++i)
                CHECK(lhs.sample(i) == rhs.sample(i));  // bitwise
        }
    }
}

TEST_CASE("inner is symmetric and bilinear (randomized)") {
    const Grid g = Grid::uniform(-6.0, 6.0, 1201);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const double a = u(rng), b = u(rng);
        std::vector<double> fv(g.n), gv(g.n), hv(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.node(i);
            fv[i] = std::exp(-x * x) * std::cos(3.0 * u(rng));
            gv[i] = std::exp(-x * x / 2.0) * x;
            hv[i] = std::exp(-x * x / 3.0);
        }
        const GridFunction f = GridFunction::from_samples(g, fv);
        const GridFunction h = GridFunction::from_samples(g, gv);
        const GridFunction k = GridFunction::from_samples(g, hv);
        CHECK(inner(f, h) == doctest::Approx(inner(h, f)).epsilon(1e-12));
        CHECK(inner(a * f + b * h, k) ==
              doctest::Approx(a * inner(f, k) + b * inner(h, k)).epsilon(1e-12));
    }
}

TEST_CASE("weighted norms: homogeneity and triangle inequality (randomized)") {
    const Grid g = Grid::uniform(-6.0, 6.0, 601);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> fv(g.n), gv(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
            fv[i] = u(rng);
            gv[i] = u(rng);
        }
        const GridFunction f = GridFunction::from_samples(g, fv);
        const GridFunction h = GridFunction::from_samples(g, gv);
        const double c = u(rng);
        for (double alpha : {0.0, 1.0}) {
            const WeightSpec w{alpha};
            CHECK(weighted_sup_norm(c * f, w) ==
                  doctest::Approx(std::abs(c) * weighted_sup_norm(f, w)).epsilon(1e-12));
            CHECK(weighted_l1_norm(c * f, w) ==
                  doctest::Approx(std::abs(c) * weighted_l1_norm(f, w)).epsilon(1e-12));
            CHECK(weighted_sup_norm(f + h, w) <=
                  weighted_sup_norm(f, w) + weighted_sup_norm(h, w) + 1e-12);
            CHECK(weighted_l1_norm(f + h, w) <=
                  weighted_l1_norm(f, w) + weighted_l1_norm(h, w) + 1e-12);
        }
    }
}

TEST_CASE("growth probe flags fast growth and passes capped growth") {
    const Grid g = Grid::standard();
    CHECK(sup_growth_ok(GridFunction::polynomial(g, {1.0}), 0.0));
    CHECK_FALSE(sup_growth_ok(GridFunction::polynomial(g, {0.0, 1.0}), 0.0));
    CHECK(sup_growth_ok(GridFunction::polynomial(g, {0.0, 1.0}), 1.0));
    // degree m-1 monomials must pass at alpha = m-1 for every supported order
    CHECK(sup_growth_ok(GridFunction::polynomial(g, {0.0, 0.0, 0.0, 1.0}), 3.0));
    CHECK_FALSE(sup_growth_ok(GridFunction::polynomial(g, {0.0, 0.0, 0.0, 0.0, 1.0}), 3.0));
    const GridFunction gauss =
        GridFunction::from_function(g, [](double x) { return std::exp(-x * x / 2.0); });
    CHECK(growth_exponent(gauss) == -std::numeric_limits<double>::infinity());
    CHECK(l1_decay_ok(gauss, 3.0));
    CHECK_FALSE(l1_decay_ok(GridFunction::polynomial(g, {1.0}), 0.0));
}
