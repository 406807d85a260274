#include <arbkit/examples.hpp>
#include <arbkit/model.hpp>

#include <doctest.h>

#include <string>

using namespace arbkit;

namespace {

const char* kTinyModel = R"({
  "assets": 2,
  "nodes": [
    {"id": "r",  "parent": null, "t": 0, "pi": [[1, 1], [2, 1]]},
    {"id": "u",  "parent": "r",  "t": 1, "pi": [[1, "0.5"], ["7/2", 1]]},
    {"id": "dn", "parent": "r",  "t": 1, "pi": [[1, 2], [1, 1]]}
  ],
  "leaf_prob": {"u": "1/3", "dn": "2/3"}
})";

} // namespace

TEST_CASE("parse reads ids, tree shape, quotes and probabilities") {
    MarketModel m = parse_model(kTinyModel);
    CHECK(m.d == 2);
    CHECK(m.T == 1);
    CHECK(m.bid_ask_form);
    REQUIRE(m.nodes.size() == 3);
    CHECK(m.nodes[0].id == "r");
    CHECK(m.nodes[0].parent == -1);
    CHECK(m.nodes[1].parent == 0);
    CHECK(m.leaves == std::vector<int>{1, 2});
    CHECK(m.nodes[1].prob == Rat(1, 3));
    CHECK(m.nodes[0].prob == 1); // interior probability is the derived sum
    // Decimal strings land exactly.
    CHECK(m.cones[1].pi[0][1] == Rat(1, 2));
    CHECK(m.cones[1].pi[1][0] == Rat(7, 2));
    CHECK(validate_model(m).empty());
}

TEST_CASE("serialize then parse is the identity on valid models") {
    for (const MarketModel& m :
         {parse_model(kTinyModel), example_41(), example_42(), example_43(2)}) {
        MarketModel back = parse_model(serialize_model(m));
        REQUIRE(back.nodes.size() == m.nodes.size());
        CHECK(back.d == m.d);
        CHECK(back.T == m.T);
        CHECK(back.bid_ask_form == m.bid_ask_form);
        for (size_t i = 0; i < m.nodes.size(); ++i) {
            CHECK(back.nodes[i].id == m.nodes[i].id);
            CHECK(back.nodes[i].parent == m.nodes[i].parent);
            CHECK(back.nodes[i].t == m.nodes[i].t);
            CHECK(back.nodes[i].prob == m.nodes[i].prob); // bit-exact
            CHECK(back.cones[i].pi == m.cones[i].pi);
            CHECK(back.cones[i].generators == m.cones[i].generators);
        }
        CHECK(back.leaves == m.leaves);
        // And the serialized form is a fixed point.
        CHECK(serialize_model(back) == serialize_model(m));
    }
}

TEST_CASE("the built-in reference markets validate cleanly") {
    CHECK(validate_model(example_41()).empty());
    CHECK(validate_model(example_42()).empty());
    CHECK(validate_model(example_43(1)).empty());
    CHECK(validate_model(example_43(3)).empty());
    CHECK(validate_model(example_43_witness(3)).empty());
}

TEST_CASE("hole completion routes through the via asset and re-checks axioms") {
    HoleMatrix h(3, std::vector<std::optional<Rat>>(3));
    for (size_t i = 0; i < 3; ++i) h[i][i] = Rat(1);
    h[0][1] = Rat(2);
    h[1][0] = Rat(1);
    h[0][2] = Rat(4);
    h[2][0] = Rat(1, 2);
    // 1<->2 and 1<->3 quoted, 2<->3 routed through asset 1.
    QMat full = complete_matrix(h, 0);
    CHECK(full[1][2] == h[1][0].value() * h[0][2].value()); // = 4
    CHECK(full[2][1] == h[2][0].value() * h[0][1].value()); // = 1

    // A completion that breaks the triangle axiom must error, not clamp.
    HoleMatrix bad(2, std::vector<std::optional<Rat>>(2));
    bad[0][0] = Rat(1);
    bad[1][1] = Rat(1);
    bad[0][1] = Rat(1, 4); // round trip 1/4 * 1 < 1 violates the axioms
    bad[1][0] = Rat(1);
    CHECK_THROWS_AS((void)complete_matrix(bad, 0), ModelError);
}

TEST_CASE("parse failures carry machine-readable rules") {
    try {
        parse_model("{\"assets\": 2, \"nodes\": []}");
        FAIL("expected a parse error");
    } catch (const ModelError& e) {
        CHECK(!e.rule.empty());
    }
    CHECK_THROWS_AS(parse_model("not json at all"), ModelError);
    // Unknown parent id.
    CHECK_THROWS_AS(
        parse_model(R"({"assets":1,"nodes":[{"id":"r","parent":"nope","t":0,
          "pi":[[1]]}],"leaf_prob":{"r":1}})"),
        ModelError);
}

TEST_CASE("validate_model flags broken invariants with rule codes") {
    MarketModel m = parse_model(kTinyModel);
    m.cones[0].pi[0][1] = Rat(-1);
    auto v1 = validate_model(m);
    REQUIRE(!v1.empty());
    bool saw = false;
    for (const auto& v : v1) saw = saw || v.rule == "pi-positive";
    CHECK(saw);

    MarketModel m2 = parse_model(kTinyModel);
    m2.cones[0].pi[1][1] = Rat(2);
    saw = false;
    for (const auto& v : validate_model(m2)) saw = saw || v.rule == "pi-diagonal";
    CHECK(saw);

    MarketModel m3 = parse_model(kTinyModel);
    m3.cones[0].pi[0][1] = Rat(1, 4); // round trip 1/4 * 2 < 1
    saw = false;
    for (const auto& v : validate_model(m3)) saw = saw || v.rule == "pi-triangle";
    CHECK(saw);

    MarketModel m4 = parse_model(kTinyModel);
    m4.nodes[1].prob = Rat(1, 2); // sum != 1 now
    saw = false;
    for (const auto& v : validate_model(m4)) saw = saw || v.rule == "leaf-prob";
    CHECK(saw);

    const std::string rep = validation_report_json(validate_model(m4));
    CHECK(rep.find("\"ok\"") != std::string::npos);
    CHECK(rep.find("leaf-prob") != std::string::npos);
}

TEST_CASE("per-node cone geometry on a frictionless node") {
    // At a frictionless node (all quotes 1) the trading cone's lineality is
    // the full exchange subspace and the dual collapses to the diagonal ray.
    MarketModel m = example_41();
    const int leaf = m.leaves[0];
    ConeV neg = neg_solvency_cone(m, leaf);
    // Rays e^j - pi^{ij} e^i for i != j, then the disposal rays -e^i.
    REQUIRE(neg.rays.size() == 4);
    SubspaceBasis k0 = k0_basis(m, leaf);
    REQUIRE(k0.basis.size() == 1);
    CHECK(canonical_ray(k0.basis[0], true) == QVec{Rat(1), Rat(-1)});

    ConeH dual = dual_cone_h(m, leaf);
    ConeV dual_rays = dd_h_to_v(dual);
    REQUIRE(dual_rays.rays.size() == 1);
    CHECK(canonical_ray(dual_rays.rays[0]) == QVec{Rat(1), Rat(1)});
}

TEST_CASE("dual cone rays of bid-ask nodes are strictly positive") {
    // On any bid-ask node, w in K* with some w_i = 0 forces w = 0, so every
    // extreme ray has all components positive.
    for (const MarketModel& m : {example_41(), example_42(), example_43(2)}) {
        for (size_t u = 0; u < m.nodes.size(); ++u) {
            ConeV rays = dd_h_to_v(dual_cone_h(m, static_cast<int>(u)));
            for (const QVec& r : rays.rays)
                for (const Rat& x : r) CHECK(x > 0);
        }
    }
}

TEST_CASE("tree helpers") {
    MarketModel m = example_43(2);
    auto t1 = nodes_at_time(m, 1);
    CHECK(t1.size() == 2); // n in {1, 2}
    for (int u : t1) CHECK(m.nodes[static_cast<size_t>(u)].t == 1);
    auto under = leaves_under(m, t1[0]);
    for (int l : under) {
        CHECK(m.nodes[static_cast<size_t>(l)].children.empty());
        int a = l;
        bool found = false;
        while (a != -1) {
            if (a == t1[0]) found = true;
            a = m.nodes[static_cast<size_t>(a)].parent;
        }
        CHECK(found);
    }
    CHECK(leaves_under(m, 0).size() == m.leaves.size());
}
