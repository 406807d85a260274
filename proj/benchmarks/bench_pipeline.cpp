// End-to-end benchmarks on the reference markets: condition checks, price
// system search, attainability membership, superhedging, and order
// decomposition, sized by the cascade market's branching parameter.

#include <arbkit/claims.hpp>
#include <arbkit/decompose.hpp>
#include <arbkit/examples.hpp>
#include <arbkit/pricing.hpp>
#include <arbkit/random_model.hpp>
#include <arbkit/verdicts.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace arbkit;

namespace {

// One share of `asset` at every leaf.
Claim one_share(const MarketModel& m, size_t asset) {
    Claim v;
    v.flat.assign(m.leaves.size() * m.d, Rat(0));
    for (int leaf : m.leaves) v.flat[leaf_pos(m, leaf) * m.d + asset] = Rat(1);
    return v;
}

} // namespace

static void BM_check_na_cascade(benchmark::State& state) {
    const MarketModel m = example_43(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Verdict v = check_na(m);
        benchmark::DoNotOptimize(v.holds);
        if (v.holds) state.SkipWithError("cascade market admits arbitrage");
    }
}
BENCHMARK(BM_check_na_cascade)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMillisecond);

static void BM_find_cps_cascade(benchmark::State& state) {
    const MarketModel m = example_43(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CpsSearch s = find_cps(m, /*strict=*/false);
        benchmark::DoNotOptimize(s.found);
    }
}
BENCHMARK(BM_find_cps_cascade)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMillisecond);

static void BM_member_attainable_cascade(benchmark::State& state) {
    const MarketModel m = example_43(2);
    const AttainableCone a = build_attainable(m, 0, m.T);
    const Claim v = example_43_claim(m, Rat(2));
    for (auto _ : state) {
        MemberResult r = member_attainable(m, a, v);
        benchmark::DoNotOptimize(r.member);
        if (!r.member) state.SkipWithError("scheme claim left its own cone");
    }
}
BENCHMARK(BM_member_attainable_cascade)->Unit(benchmark::kMillisecond);

static void BM_superhedge_one_share(benchmark::State& state) {
    const MarketModel m = example_42();
    const Claim v = one_share(m, 1);
    for (auto _ : state) {
        SuperhedgeResult r = superhedge(m, v, 0);
        benchmark::DoNotOptimize(r.price);
        if (r.status != SuperhedgeResult::Optimal)
            state.SkipWithError("superhedge not optimal");
    }
}
BENCHMARK(BM_superhedge_one_share)->Unit(benchmark::kMicrosecond);

static void BM_decompose_order(benchmark::State& state) {
    const MarketModel m = example_42();
    OrderMatrix lambda{{Rat(0), Rat(2)}, {Rat(5, 3), Rat(0)}};
    for (auto _ : state) {
        Decomposition dec = decompose_order(m, 0, lambda);
        benchmark::DoNotOptimize(dec.pure);
    }
}
BENCHMARK(BM_decompose_order)->Unit(benchmark::kMicrosecond);

static void BM_run_all_random(benchmark::State& state) {
    RandomModelParams p;
    p.strict_spreads = true;
    std::mt19937_64 rng(2026);
    const MarketModel m = random_market(rng, p);
    for (auto _ : state) {
        Report rep = run_all(m);
        benchmark::DoNotOptimize(rep.verdicts);
    }
}
BENCHMARK(BM_run_all_random)->Unit(benchmark::kMillisecond);
