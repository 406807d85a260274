#include <arbkit/claims.hpp>
#include <arbkit/examples.hpp>

#include <doctest.h>

using namespace arbkit;

TEST_CASE("two-asset reference markets: exact quotes and shape") {
    MarketModel a = example_41();
    CHECK(a.d == 2);
    CHECK(a.T == 1);
    REQUIRE(a.nodes.size() == 2); // a deterministic one-period market
    REQUIRE(a.leaves.size() == 1);
    // Root: bid 1/2, ask 1 -> pi12 = 1, pi21 = 2. Leaf frictionless at 1.
    CHECK(a.cones[0].pi == QMat{{Rat(1), Rat(1)}, {Rat(2), Rat(1)}});
    for (int l : a.leaves)
        CHECK(a.cones[static_cast<size_t>(l)].pi ==
              QMat{{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
    CHECK(a.nodes[static_cast<size_t>(a.leaves[0])].prob == 1);

    MarketModel b = example_42();
    CHECK(b.d == 2);
    CHECK(b.T == 1);
    CHECK(b.cones[0].pi == QMat{{Rat(1), Rat(1)}, {Rat(2), Rat(1)}});
    // Leaves quote the spread [1, 2] instead of collapsing it.
    for (int l : b.leaves)
        CHECK(b.cones[static_cast<size_t>(l)].pi ==
              QMat{{Rat(1), Rat(2)}, {Rat(1), Rat(1)}});
}

TEST_CASE("cascade market counts by truncation depth") {
    for (int n_max = 1; n_max <= 3; ++n_max) {
        MarketModel m = example_43(n_max);
        CHECK(m.d == 4);
        CHECK(m.T == 3);
        const size_t n = static_cast<size_t>(n_max);
        // t=1 branches over n; t=2 over (m, i) with i = +-1/2; t=3 over j.
        CHECK(nodes_at_time(m, 1).size() == n);
        CHECK(nodes_at_time(m, 2).size() == n * n * 2);
        CHECK(m.leaves.size() == n * n * 4);
        CHECK(m.nodes.size() == 1 + n + n * n * 2 + n * n * 4);
    }
}

TEST_CASE("cascade quotes route missing pairs through the money account") {
    MarketModel m = example_43(3);
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const QMat& pi = m.cones[u].pi;
        for (size_t i = 0; i < 4; ++i) {
            CHECK(pi[i][i] == 1);
            for (size_t j = 0; j < 4; ++j) {
                CHECK(pi[i][j] > 0);
                // Completed entries obey the routing bound exactly.
                if (i != 0 && j != 0 && i != j)
                    CHECK(pi[i][j] == pi[i][0] * pi[0][j]);
            }
        }
    }
}

TEST_CASE("the k-scheme's claim matches its closed form leaf by leaf") {
    MarketModel m = example_43(3);
    for (long kk : {1L, 2L, 3L}) {
        const Rat k(kk);
        Strategy s = example_43_strategy(m, k);
        REQUIRE(!verify_strategy(m, s));
        Claim direct = strategy_claim(m, s);
        Claim closed = example_43_claim(m, k);
        CHECK(direct.flat == closed.flat);
    }
}

TEST_CASE("at k past the deepest branching many leaves settle at a quarter") {
    MarketModel m = example_43(3);
    Claim c = example_43_claim(m, 3);
    const Rat quarter(1, 4);
    size_t quarter_leaves = 0;
    for (int l : m.leaves) {
        QVec v = claim_at(m, c, l);
        CHECK(v[1] == 0);
        CHECK(v[2] == 0);
        CHECK(v[3] == 0);
        CHECK(v[0] >= 0); // the truncated scheme never loses money
        if (v[0] == quarter) ++quarter_leaves;
    }
    CHECK(quarter_leaves == 24); // the residual term survives on 12 leaves
}

TEST_CASE("name dispatch and probability reshaping") {
    MarketModel m = build_example("ex42", 3);
    CHECK(m.nodes.size() == example_42().nodes.size());
    CHECK_THROWS(build_example("nope", 3));

    MarketModel g = build_example("ex43", 2);
    set_geometric_probs(g);
    Rat sum = 0;
    Rat expect(1, 2);
    for (size_t i = 0; i + 1 < g.leaves.size(); ++i) {
        CHECK(g.nodes[static_cast<size_t>(g.leaves[i])].prob == expect);
        sum += expect;
        expect /= 2;
    }
    CHECK(g.nodes[static_cast<size_t>(g.leaves.back())].prob == 1 - sum);
    CHECK(validate_model(g).empty());
}
