// Cone-algebra benchmarks: double-description conversions as the ambient
// dimension grows toward the dim <= 8 guard, and the batched lineality
// classifier against its one-LP-per-generator oracle.

#include <arbkit/cones.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace arbkit;

namespace {

// Orthant cut down by d extra random inequality rows: nonempty, usually
// pointed, and the extreme-ray count grows quickly with d.
ConeH random_h_cone(size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ConeH h;
    h.dim = d;
    for (size_t i = 0; i < d; ++i) {
        QVec row(d, Rat(0));
        row[i] = Rat(1);
        h.rows.push_back(std::move(row));
    }
    for (size_t r = 0; r < d; ++r) {
        QVec row(d);
        for (size_t j = 0; j < d; ++j)
            row[j] = Rat(static_cast<long>(rng() % 7) - 3);
        h.rows.push_back(std::move(row));
    }
    return h;
}

// Generator list with planted lineality: the first quarter of the rays come
// in +/- pairs, the rest are random nonnegative-orthant-ish directions.
QMat planted_generators(size_t count, size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    QMat gens;
    for (size_t i = 0; i < count / 4; ++i) {
        QVec g(d);
        for (size_t j = 0; j < d; ++j)
            g[j] = Rat(static_cast<long>(rng() % 5) - 2);
        QVec neg(d);
        for (size_t j = 0; j < d; ++j) neg[j] = -g[j];
        gens.push_back(std::move(g));
        gens.push_back(std::move(neg));
    }
    while (gens.size() < count) {
        QVec g(d);
        for (size_t j = 0; j < d; ++j)
            g[j] = Rat(static_cast<long>(rng() % 4));
        gens.push_back(std::move(g));
    }
    return gens;
}

} // namespace

static void BM_dd_h_to_v(benchmark::State& state) {
    const size_t d = static_cast<size_t>(state.range(0));
    const ConeH h = random_h_cone(d, 31 + d);
    for (auto _ : state) {
        ConeV v = dd_h_to_v(h);
        benchmark::DoNotOptimize(v.rays);
    }
}
BENCHMARK(BM_dd_h_to_v)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

static void BM_dd_roundtrip(benchmark::State& state) {
    const size_t d = static_cast<size_t>(state.range(0));
    const ConeH h = random_h_cone(d, 47 + d);
    for (auto _ : state) {
        ConeH back = dd_v_to_h(dd_h_to_v(h));
        benchmark::DoNotOptimize(back.rows);
    }
}
BENCHMARK(BM_dd_roundtrip)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_lineality_batched(benchmark::State& state) {
    const size_t count = static_cast<size_t>(state.range(0));
    const QMat gens = planted_generators(count, 4, 7);
    for (auto _ : state) {
        GeneratorLineality gl = generator_lineality(gens);
        benchmark::DoNotOptimize(gl.good);
    }
}
BENCHMARK(BM_lineality_batched)
    ->Arg(8)
    ->Arg(16)
    ->Arg(32)
    ->Unit(benchmark::kMicrosecond);

static void BM_lineality_single_lps(benchmark::State& state) {
    const size_t count = static_cast<size_t>(state.range(0));
    const QMat gens = planted_generators(count, 4, 7);
    for (auto _ : state) {
        std::vector<char> good = reversible_via_single_lps(gens);
        benchmark::DoNotOptimize(good);
    }
}
BENCHMARK(BM_lineality_single_lps)
    ->Arg(8)
    ->Arg(16)
    ->Arg(32)
    ->Unit(benchmark::kMicrosecond);

static void BM_relint_point(benchmark::State& state) {
    const size_t d = static_cast<size_t>(state.range(0));
    const ConeH h = random_h_cone(d, 63 + d);
    for (auto _ : state) {
        auto ri = relint_point(h);
        benchmark::DoNotOptimize(ri);
    }
}
BENCHMARK(BM_relint_point)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
