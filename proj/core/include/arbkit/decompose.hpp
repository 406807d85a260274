// Splitting an order book entry at a node into its reversible part (the
// position can be unwound by trading strictly later) and its purely
// non-reversible remainder.  The reversible part is the exact Euclidean
// projection of the order matrix onto the cone of reversible orders,
// restricted to parts of the original order (entrywise between 0 and the
// order); the projection is computed in exact rational arithmetic with a
// verifiable optimality certificate, and the unwind is returned as an
// explicit later-window trading strategy.
#pragma once

#include "arbkit/claims.hpp"
#include "arbkit/model.hpp"

namespace arbkit {

// d x d rational matrix, entrywise >= 0, zero diagonal.
using OrderMatrix = QMat;

// One outer-approximation inequality row . x <= 0, valid for every
// reversible order, discovered from an infeasibility certificate of the
// liquidation system (farkas): row[k] = farkas . (lift of executing the
// k-th unit order), so validity reduces to farkas . g >= 0 for every
// generator g of the later-window attainable cone.
struct ReversibleCut {
    QVec row;
    QVec farkas;
};

// Optimality certificate for the projection: at the minimizer p,
//   2 (p - lambda) + sum_i multipliers[i] * active_rows[i] = 0,
// multipliers >= 0, active rows tight, and every box row / cut holds at p.
struct KktWitness {
    QMat active_rows;
    QVec active_rhs;
    QVec multipliers;
    std::vector<ReversibleCut> cuts;
};

struct Decomposition {
    int node = -1;
    OrderMatrix reversible; // the projection p
    OrderMatrix pure;       // lambda - p, entrywise >= 0
    KktWitness kkt;
    // Window-[t+1, T] strategy on the node's subtree whose claim equals
    // -lift(node, result of executing `reversible` at the node) exactly.
    Strategy liquidation;
};

// True iff the position created by executing lambda at the node can be
// closed out exactly by trading in the node's subtree strictly after t
// (one membership test against the later-window attainable cone).
// Requires bid-ask form and t < T.
bool reversible_cone_test(const MarketModel& m, int node,
                          const OrderMatrix& lambda);

// Exact projection of lambda onto {reversible orders mu with
// 0 <= mu <= lambda entrywise}, minimizing the Euclidean norm of
// lambda - mu.  The reversible cone is never materialized: candidates are
// tested by the liquidation membership system, and each infeasibility
// certificate is turned into a cutting plane; the polytope projection is
// solved by exact active-set enumeration with a verified KKT witness.
Decomposition decompose_order(const MarketModel& m, int node,
                              const OrderMatrix& lambda);

// Checks the projection laws on concrete data (throws on violation):
// positive homogeneity p(mu * lambda) = mu * p(lambda); idempotence of the
// pure part (decomposing q(lambda) yields (0, q(lambda))); and joint
// triviality (an order that is both reversible and equal to its own pure
// part is zero).
struct DecompositionLaws {
    bool homogeneity = false;
    bool idempotence = false;
    bool joint_triviality = false;
};
DecompositionLaws check_decomposition_laws(const MarketModel& m, int node,
                                           const OrderMatrix& lambda,
                                           const Rat& mu);

std::string decomposition_to_json(const MarketModel& m,
                                  const Decomposition& dec);

} // namespace arbkit
