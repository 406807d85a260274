// Exact-rational simplex kernel benchmarks: dense feasible problems of
// growing size and an infeasible family that exercises the Farkas path.
// Problems are generated once per size from a fixed seed so timings are
// comparable across runs.

#include <arbkit/lp.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace arbkit;

namespace {

// max c.x over Ax <= b, 0 <= x <= 3, with c, A, b small integers.  The box
// keeps the optimum finite whatever the draw.
LinearProgram boxed_lp(size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LinearProgram lp(n);
    lp.sense = Sense::Max;
    for (size_t j = 0; j < n; ++j) {
        lp.c[j] = Rat(static_cast<long>(rng() % 9) - 4);
        lp.hi[j] = Rat(3); // default lower bound is already 0
    }
    for (size_t r = 0; r < 2 * n; ++r) {
        QVec row(n);
        for (size_t j = 0; j < n; ++j)
            row[j] = Rat(static_cast<long>(rng() % 7) - 3);
        lp.add_row(std::move(row), Rel::LE,
                   Rat(static_cast<long>(rng() % 10) + 1));
    }
    return lp;
}

} // namespace

static void BM_lp_boxed(benchmark::State& state) {
    const size_t n = static_cast<size_t>(state.range(0));
    const LinearProgram lp = boxed_lp(n, 1234 + n);
    for (auto _ : state) {
        LpResult res = lp_solve(lp);
        benchmark::DoNotOptimize(res.value);
        if (res.status != LpStatus::Optimal) state.SkipWithError("not optimal");
    }
}
BENCHMARK(BM_lp_boxed)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_lp_infeasible_farkas(benchmark::State& state) {
    const size_t n = static_cast<size_t>(state.range(0));
    // Conflicting aggregate constraints: sum x >= n + 1 against x <= 1.
    LinearProgram lp(n);
    for (size_t j = 0; j < n; ++j) lp.hi[j] = Rat(1);
    lp.add_row(QVec(n, Rat(1)), Rel::GE, Rat(static_cast<long>(n) + 1));
    for (auto _ : state) {
        LpResult res = lp_solve(lp);
        benchmark::DoNotOptimize(res.y);
        if (res.status != LpStatus::Infeasible)
            state.SkipWithError("expected infeasible");
    }
}
BENCHMARK(BM_lp_infeasible_farkas)
    ->Arg(16)
    ->Arg(64)
    ->Unit(benchmark::kMicrosecond);

static void BM_lp_certificate_check(benchmark::State& state) {
    const size_t n = static_cast<size_t>(state.range(0));
    const LinearProgram lp = boxed_lp(n, 99);
    const LpResult res = lp_solve(lp);
    for (auto _ : state) {
        auto why = verify_certificate(lp, res);
        benchmark::DoNotOptimize(why);
        if (why) state.SkipWithError("certificate rejected");
    }
}
BENCHMARK(BM_lp_certificate_check)
    ->Arg(16)
    ->Arg(32)
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
