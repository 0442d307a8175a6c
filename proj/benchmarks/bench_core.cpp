#include <benchmark/benchmark.h>

#include "cocycle/approx.hpp"
#include "cocycle/exterior.hpp"
#include "cocycle/measure.hpp"
#include "cocycle/oseledets.hpp"

using namespace cocycle;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CocycleGenerator bench_gen() {
    static const SubshiftSpec spec = SubshiftSpec::full_shift(2);
    return CocycleGenerator::per_symbol(
        spec, {mat2(3.0, 0.25, 0.1, 0.35), mat2(2.2, -0.2, 0.15, 0.45)});
}

ShiftPoint bench_point(long horizon) {
    static const SubshiftSpec spec = SubshiftSpec::full_shift(2);
    static const MarkovMeasure mu = MarkovMeasure::bernoulli(spec, {0.5, 0.5});
    return sample_point(spec, mu, horizon, 7);
}

void FiniteTimeSpectrum(benchmark::State& state) {
    const auto gen = bench_gen();
    const int n = static_cast<int>(state.range(0));
    const auto x = bench_point(n + 4);
    for (auto _ : state) {
        auto s = finite_time_spectrum(gen, x, n);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(FiniteTimeSpectrum)->RangeMultiplier(4)->Range(64, 4096);

void SplittingEstimate2x2(benchmark::State& state) {
    const auto gen = bench_gen();
    const int n = static_cast<int>(state.range(0));
    const auto x = bench_point(2 * n + 4);
    SplittingOptions bare{false, false};
    for (auto _ : state) {
        auto est = oseledets_splitting(gen, x, n, {}, bare);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(SplittingEstimate2x2)->Arg(256)->Arg(1024);

void ExteriorPower(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const int j = d / 2;
    Matrix m = Matrix::Random(d, d);
    for (auto _ : state) {
        auto w = exterior_power(m, j);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(ExteriorPower)->Arg(4)->Arg(6)->Arg(8);

void EnumeratePeriodic(benchmark::State& state) {
    const auto spec = SubshiftSpec::full_shift(2);
    const int n = static_cast<int>(state.range(0));
    EnumerateOptions opts;
    opts.dedupe_rotations = true;
    for (auto _ : state) {
        auto orbits = enumerate_periodic(spec, n, opts);
        benchmark::DoNotOptimize(orbits);
    }
}
BENCHMARK(EnumeratePeriodic)->Arg(10)->Arg(14)->Arg(16);

void WeakStarDistance(benchmark::State& state) {
    const auto spec = SubshiftSpec::full_shift(2);
    const auto mu = MarkovMeasure::bernoulli(spec, {0.5, 0.5});
    const PeriodicOrbit p(spec, word_from_string("00010110100111"));
    for (auto _ : state) {
        auto d = weak_star_distance(spec, CylinderSource(p), CylinderSource(mu),
                                    static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(WeakStarDistance)->Arg(4)->Arg(6);

void PeriodicDataOrbit(benchmark::State& state) {
    const auto spec = SubshiftSpec::full_shift(2);
    const auto gen = bench_gen();
    const PeriodicOrbit p(spec, word_from_string("00010110100111"));
    for (auto _ : state) {
        auto data = periodic_data(spec, gen, p);
        benchmark::DoNotOptimize(data);
    }
}
BENCHMARK(PeriodicDataOrbit);

void SubspaceAngle(benchmark::State& state) {
    Matrix a = Matrix::Random(6, 3), b = Matrix::Random(6, 3);
    const Subspace e(a), f(b);
    for (auto _ : state) {
        auto ang = subspace_angle(e, f);
        benchmark::DoNotOptimize(ang);
    }
}
BENCHMARK(SubspaceAngle);

} // namespace

BENCHMARK_MAIN();
