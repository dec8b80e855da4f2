#include <benchmark/benchmark.h>

#include "lspline/biortho.hpp"
#include "lspline/native.hpp"
#include "lspline/operators.hpp"
#include "lspline/solve.hpp"

namespace {

using namespace lspline;

void BM_CanonicalInverse(benchmark::State& state) {
    const Grid g = Grid::uniform(-12.0, 12.0, static_cast<std::size_t>(state.range(0)));
    const OperatorDescriptor op = make_derivative_operator(2);
    const GridFunction w =
        GridFunction::from_function(g, [](double x) { return std::exp(-x * x / 2.0); });
    for (auto _ : state) benchmark::DoNotOptimize(canonical_inverse(op, w));
}
BENCHMARK(BM_CanonicalInverse)->Arg(1201)->Arg(4801);

void BM_HermiteGram(benchmark::State& state) {
    const Grid g = Grid::standard();
    for (auto _ : state)
        benchmark::DoNotOptimize(hermite_gaussian_system(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_HermiteGram)->Arg(2)->Arg(4);

void BM_SolveL2(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const OperatorDescriptor op = make_derivative_operator(2);
    DataSet data;
    for (int i = 0; i < m; ++i) {
        data.x.push_back(i * 0.1);
        data.y.push_back(std::sin(i * 0.4));
    }
    for (auto _ : state) benchmark::DoNotOptimize(solve_l2(op, data));
}
BENCHMARK(BM_SolveL2)->Arg(16)->Arg(64);

void BM_SolveGtv(benchmark::State& state) {
    const OperatorDescriptor op = make_derivative_operator(2);
    DataSet data;
    const int m = static_cast<int>(state.range(0));
    for (int i = 0; i < m; ++i) {
        data.x.push_back(i * 0.5);
        data.y.push_back(std::sin(i * 1.3));
    }
    SolverConfig cfg;
    const Grid knots = default_knot_grid(data, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gtv(op, data, knots, cfg));
}
BENCHMARK(BM_SolveGtv)->Arg(5)->Arg(9);

void BM_IdentitySuite(benchmark::State& state) {
    const Grid g = Grid::standard();
    const NativeSpaceSpec spec =
        make_native_spec(make_derivative_operator(1), hermite_gaussian_system(g, 1),
                         PrimaryNorm::L2);
    for (auto _ : state) benchmark::DoNotOptimize(identity_suite(spec, 2, 7));
}
BENCHMARK(BM_IdentitySuite);

}  // namespace

BENCHMARK_MAIN();
