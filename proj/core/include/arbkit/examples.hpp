#pragma once

// Built-in reference markets: two two-asset one-period markets with a
// deterministic stock (spread [1/2, 1] at time 0, then frictionless price 1
// resp. spread [1, 2]), and a four-asset three-period cascade market with a
// money account and three stocks whose missing bid-ask entries route through
// asset 1.  The cascade market is truncated to n, m in {1, ..., n_max}.

#include "arbkit/claims.hpp"
#include "arbkit/model.hpp"

namespace arbkit {

MarketModel example_41();
MarketModel example_42();

// Cascade market; branching n (time 1), (m, i) with i = ±1/2 (time 2),
// j = ±1/2 (time 3); n, m truncated to {1..n_max}; a = 5.
MarketModel example_43(int n_max = 3);

// The more favorable variant: time-1 purchases of assets 3 and 4 at price 1.
MarketModel example_43_witness(int n_max = 3);

// The explicit k-parameterized trading scheme for the cascade market:
// buy 1 of asset 2, k of asset 3, k^2 of asset 4 at time 0, then unwind.
Strategy example_43_strategy(const MarketModel& ex43, const Rat& k);

// Closed form of that scheme's terminal claim: on leaf (n, m, i, j) the value
// is [1/4 + i k (1 - min(n,k)/n) + j (1 - ((1+i)/m) min(m/(1+i), k))] e^1.
Claim example_43_claim(const MarketModel& ex43, const Rat& k);

// Name-based dispatch for the CLI: "ex41", "ex42", "ex43".
MarketModel build_example(const std::string& name, int n_max);

// Replace leaf probabilities by the dyadic sequence 1/2, 1/4, ... (last leaf
// takes the remainder); exercises measure-change invariance.
void set_geometric_probs(MarketModel& m);

} // namespace arbkit
