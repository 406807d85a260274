#include <arbkit/examples.hpp>
#include <arbkit/verdicts.hpp>

#include <doctest.h>

#include <map>
#include <string>

using namespace arbkit;

namespace {

std::map<std::string, Verdict> by_name(const Report& r) {
    std::map<std::string, Verdict> out;
    for (const Verdict& v : r.verdicts) out[v.condition] = v;
    return out;
}

} // namespace

TEST_CASE("benign two-asset market: full verdict vector") {
    MarketModel m = example_41();
    Report rep = run_all(m);
    auto v = by_name(rep);
    CHECK(v.at("na").holds);
    CHECK(v.at("nas").holds);
    CHECK(v.at("naps").holds);
    CHECK(!v.at("nar").holds);
    CHECK(v.at("nawps").holds);
    CHECK(!v.at("ef").holds);
    CHECK(!v.at("penner").holds);
    CHECK(!v.at("nullspace").holds);
    for (const std::string& line : rep.consistency)
        CHECK(line.find(": ok") != std::string::npos);
    // The frictionless leaf kills efficient friction at time 1.
    CHECK(m.nodes[static_cast<size_t>(v.at("ef").node)].t == 1);
}

TEST_CASE("wider terminal spread: the prospective condition snaps at the root") {
    MarketModel m = example_42();
    Report rep = run_all(m);
    auto v = by_name(rep);
    CHECK(v.at("na").holds);
    CHECK(!v.at("nas").holds);
    CHECK(!v.at("naps").holds);
    CHECK(!v.at("nar").holds);
    CHECK(v.at("nawps").holds);
    CHECK(v.at("ef").holds);
    CHECK(v.at("penner").holds);
    CHECK(!v.at("nullspace").holds);

    const Verdict& naps = v.at("naps");
    CHECK(naps.t == 0);
    REQUIRE(naps.claim);
    for (int l : m.leaves)
        CHECK(claim_at(m, *naps.claim, l) == QVec{Rat(-1), Rat(1)});
    // Both window strategies are attached and reproduce the claim exactly.
    REQUIRE(naps.strategy);
    REQUIRE(naps.strategy2);
    CHECK(strategy_claim(m, *naps.strategy).flat == naps.claim->flat);
    CHECK(strategy_claim(m, *naps.strategy2).flat ==
          scale(naps.claim->flat, Rat(-1)));
    // Instance map: vacuous at t=0's left edge... the overlap family records
    // which right windows failed.
    REQUIRE(!naps.instances.empty());
    bool some_false = false;
    for (const auto& [t, ok] : naps.instances) some_false = some_false || !ok;
    CHECK(some_false);

    // The consistent-prices witness is the frictionless unit market.
    const Verdict& nawps = v.at("nawps");
    REQUIRE(nawps.witness_model);
    for (const NodeCone& c : nawps.witness_model->cones)
        CHECK(c.pi == QMat{{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
}

TEST_CASE("arbitrage cascade: plain no-arbitrage fails with a working strategy") {
    MarketModel m = example_43(1);
    Verdict na = check_na(m);
    CHECK(!na.holds);
    REQUIRE(na.claim);
    REQUIRE(na.strategy);
    CHECK(strategy_claim(m, *na.strategy).flat == na.claim->flat);
    bool nonneg = true, nonzero = false;
    for (const Rat& x : na.claim->flat) {
        nonneg = nonneg && x >= 0;
        nonzero = nonzero || x != 0;
    }
    CHECK(nonneg);
    CHECK(nonzero);
}

TEST_CASE("robust check needs quotes; run_all marks it not applicable instead") {
    MarketModel m = example_41();
    // Rebuild the same market in raw generator form.
    MarketModel g = m;
    g.bid_ask_form = false;
    for (size_t u = 0; u < g.nodes.size(); ++u) {
        g.cones[u].generators = neg_solvency_cone(m, static_cast<int>(u)).rays;
        g.cones[u].pi.clear();
    }
    CHECK(validate_model(g).empty());
    CHECK_THROWS_AS((void)check_nar(g), std::invalid_argument);
    Report rep = run_all(g);
    bool saw_nar = false;
    for (const Verdict& v : rep.verdicts)
        if (v.condition == "nar") {
            saw_nar = true;
            CHECK(!v.applicable);
        }
    CHECK(saw_nar);
    // The geometry is unchanged, so the decidable verdicts agree.
    auto vg = by_name(rep);
    auto vm = by_name(run_all(m));
    for (const char* c : {"na", "naps", "nawps", "penner", "nullspace"})
        CHECK(vg.at(c).holds == vm.at(c).holds);
}

TEST_CASE("mixed family preconditions") {
    MarketModel m = example_43(2);
    MarketModel w = example_43_witness(2);
    Verdict mv = check_mixed(m, w);
    CHECK(!mv.instances.empty());

    // Mismatched trees are rejected.
    MarketModel other = example_41();
    CHECK_THROWS_AS((void)check_mixed(m, other), std::invalid_argument);
    // Non-dominating witness rejected: a strictly more expensive variant
    // cannot serve as the favorable market.
    MarketModel worse = m;
    worse.cones[0].pi[0][1] += 1;
    CHECK_THROWS_AS((void)check_mixed(m, worse), std::invalid_argument);
}

TEST_CASE("selected conditions and timing flags are honored") {
    MarketModel m = example_41();
    RunOptions opt;
    opt.conditions = {"na", "ef"};
    opt.timing = true;
    Report rep = run_all(m, opt);
    CHECK(rep.verdicts.size() == 2);
    for (const Verdict& v : rep.verdicts) CHECK(v.micros >= 0);
    const std::string js = report_to_json(m, rep);
    CHECK(js.find("\"na\"") != std::string::npos);
    CHECK(js.find("\"ef\"") != std::string::npos);
    CHECK(js.find("\"nas\"") == std::string::npos);
}
