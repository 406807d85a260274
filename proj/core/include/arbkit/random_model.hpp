// Seeded random market generator for the property suites.  Models are
// built in bid-ask form from frictionless per-node prices times
// nonnegative spread factors, closed under minimal path products so the
// quote axioms (unit diagonal, positivity, round-trip >= 1, triangle
// inequality) hold by construction; every generated model is re-validated
// before being returned.
#pragma once

#include "arbkit/model.hpp"

#include <random>

namespace arbkit {

struct RandomModelParams {
    size_t d_min = 2;
    size_t d_max = 3;
    int t_min = 1;
    int t_max = 3;
    int branch_max = 2;
    // Force strictly positive spreads so every round-trip product exceeds
    // 1 (pointed trading cones at every node).
    bool strict_spreads = false;
};

MarketModel random_market(std::mt19937_64& rng,
                          const RandomModelParams& params = {});

// Replace leaf probabilities by fresh strictly positive values summing to
// one (interior probabilities are recomputed).  The tree and the quotes
// are untouched.
void resample_probs(std::mt19937_64& rng, MarketModel& m);

} // namespace arbkit
