#include <arbkit/examples.hpp>
#include <arbkit/pricing.hpp>
#include <arbkit/random_model.hpp>
#include <arbkit/verdicts.hpp>

#include <doctest.h>

#include <random>

using namespace arbkit;

TEST_CASE("consistent prices exist on the benign markets and verify") {
    for (const MarketModel& m : {example_41(), example_42()}) {
        CpsSearch r = find_cps(m, false);
        REQUIRE(r.found);
        CHECK(!verify_cps(m, r.prices, false));
        // Scale invariance: any positive multiple verifies too.
        PriceSystem scaled;
        for (const auto& [u, z] : r.prices.z) scaled.z[u] = scale(z, Rat(7, 3));
        CHECK(!verify_cps(m, scaled, false));
        // Tampering breaks the martingale identity.
        PriceSystem broken = r.prices;
        broken.z[0][0] += 1;
        CHECK(verify_cps(m, broken, false));
    }
}

TEST_CASE("strict search on a frictionless leaf tops out at margin zero") {
    MarketModel m = example_41();
    CpsSearch r = find_cps(m, true);
    CHECK(!r.found);
    CHECK(!r.infeasible_lp); // feasible, just no positive margin
    CHECK(r.eps == 0);
    // The margin-zero run still surfaces a plain consistent system...
    CHECK(!verify_cps(m, r.prices, false));
    // ...and its bound certificate survives independent recheck.
    CHECK(!verify_scps_failure(m, r));
}

TEST_CASE("no consistent prices on the arbitrage cascade: Farkas certified") {
    MarketModel m = example_43(1);
    CpsSearch r = find_cps(m, false);
    CHECK(!r.found);
    CHECK(r.infeasible_lp);
    CHECK(!verify_cps_infeasible(m, r.certificate));
    // A corrupted certificate must be rejected.
    QVec bad = r.certificate;
    for (auto& v : bad) v = 0;
    CHECK(verify_cps_infeasible(m, bad));
}

TEST_CASE("uniqueness bounds pin the frictionless market to a point") {
    MarketModel m = example_41();
    PriceBounds b = cps_uniqueness_bounds(m, 0, 1);
    REQUIRE(b.feasible);
    CHECK(!b.lo_unbounded);
    CHECK(!b.hi_unbounded);
    CHECK(b.lo == 1);
    CHECK(b.hi == 1);
    // Asset 1 is the normalization itself.
    PriceBounds self = cps_uniqueness_bounds(m, 0, 0);
    CHECK(self.lo == 1);
    CHECK(self.hi == 1);

    // The deterministic wide-spread market still pins the ratio: the root
    // cone wants z2/z1 in [1/2, 1], the leaf wants [1, 2], and the
    // martingale identity forces both, leaving exactly the point 1.
    MarketModel w = example_42();
    PriceBounds pinch = cps_uniqueness_bounds(w, 0, 1);
    REQUIRE(pinch.feasible);
    CHECK(pinch.lo == 1);
    CHECK(pinch.hi == 1);

    // Widening the root to the same [1, 2] spread frees the whole interval.
    w.cones[0].pi = QMat{{Rat(1), Rat(2)}, {Rat(1), Rat(1)}};
    finalize_model(w);
    PriceBounds wide = cps_uniqueness_bounds(w, 0, 1);
    REQUIRE(wide.feasible);
    CHECK(wide.lo == 1);
    CHECK(wide.hi == 2);

    CHECK_THROWS_AS((void)cps_uniqueness_bounds(m, -1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)cps_uniqueness_bounds(m, 0, 5),
                    std::invalid_argument);
}

TEST_CASE("frictionless witness divides prices and is dominated") {
    MarketModel m = example_41();
    CpsSearch r = find_cps(m, false);
    REQUIRE(r.found);
    MarketModel w = frictionless_witness(m, r.prices);
    REQUIRE(w.nodes.size() == m.nodes.size());
    for (size_t u = 0; u < w.nodes.size(); ++u) {
        const QVec& z = r.prices.z.at(static_cast<int>(u));
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j) {
                CHECK(w.cones[u].pi[i][j] == z[j] / z[i]);
                CHECK(w.cones[u].pi[i][j] <= m.cones[u].pi[i][j]);
            }
    }
    CHECK(validate_model(w).empty());
}

TEST_CASE("superhedging one share of stock costs exactly one bond") {
    for (const MarketModel& m : {example_41(), example_42()}) {
        Claim share = zero_claim(m);
        for (int l : m.leaves) share.flat[leaf_pos(m, l) * m.d + 1] = 1;
        SuperhedgeResult r = superhedge(m, share, 0);
        REQUIRE(r.status == SuperhedgeResult::Optimal);
        CHECK(r.price == 1);
        CHECK(r.dual_value == 1);
        CHECK(!verify_superhedge(m, share, 0, r));
        // Strategy really turns one bond into the share claim.
        Claim hedge = strategy_claim(m, r.strategy);
        Claim residual = share;
        for (size_t i = 0; i < residual.flat.size(); ++i)
            residual.flat[i] -= hedge.flat[i];
        // price * numeraire at root covers the residual claim leafwise.
        for (int l : m.leaves) {
            QVec v = claim_at(m, residual, l);
            CHECK(v[0] == r.price);
            CHECK(v[1] == 0);
        }
    }
}

TEST_CASE("superhedging duality gap is zero on random benign markets") {
    std::mt19937_64 rng(61);
    RandomModelParams params;
    params.strict_spreads = true;
    int solved = 0;
    for (int k = 0; k < 120 && solved < 8; ++k) {
        MarketModel m = random_market(rng, params);
        Claim v = zero_claim(m);
        for (auto& x : v.flat) x = Rat(static_cast<long>(rng() % 7) - 3);
        if (!check_naps(m).holds) continue;
        ++solved;
        // Under the prospective no-arbitrage condition the problem is
        // bounded, and cash can always buy a dominating portfolio, so the
        // search must close with a matching certificate pair.
        SuperhedgeResult r = superhedge(m, v, 0);
        REQUIRE(r.status == SuperhedgeResult::Optimal);
        CHECK(r.price == r.dual_value);
        CHECK(!verify_superhedge(m, v, 0, r));
    }
    CHECK(solved == 8);
}

TEST_CASE("superhedging an arbitrage market prices the zero claim below zero") {
    MarketModel m = example_43(1);
    Claim v = zero_claim(m);
    SuperhedgeResult r = superhedge(m, v, 0);
    REQUIRE(r.status != SuperhedgeResult::NotAttainable);
    if (r.status == SuperhedgeResult::UnboundedBelow) {
        CHECK(!r.certificate.empty());
    } else {
        // Free money: starting strictly short still superhedges zero.
        CHECK(r.price < 0);
        CHECK(!verify_superhedge(m, v, 0, r));
    }
}
