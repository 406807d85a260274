#pragma once

// Claim space over the scenario tree: R^{L*d} with one d-block per leaf in
// document order.  Attainable cones A_s^t are generated by per-node trading
// cone rays lifted to claim space; membership, realizing strategies, Farkas
// separation, and lineality subspaces all reduce to exact LPs here.

#include "arbkit/cones.hpp"
#include "arbkit/lp.hpp"
#include "arbkit/model.hpp"

#include <map>

namespace arbkit {

// Rational d-vector per leaf, stored flat: entry leaf_pos * d + asset.
struct Claim {
    QVec flat;
};

Claim zero_claim(const MarketModel& m);

// Position of leaf `leaf` (node index) within the canonical leaf order.
size_t leaf_pos(const MarketModel& m, int leaf);

// Claim equal to w on every leaf below `node` (inclusive), zero elsewhere.
// This is exactly how a time-t portfolio increment enters the terminal claim.
Claim lift(const MarketModel& m, int node, const QVec& w);

// The d-vector a claim assigns to one leaf.
QVec claim_at(const MarketModel& m, const Claim& v, int leaf);

// Provenance of one attainable-cone generator.
struct GenRef {
    int node = -1;
    enum Kind { Transfer, Disposal, Raw } kind = Transfer;
    size_t i = 0; // transfer source / disposal asset / raw generator index
    size_t j = 0; // transfer target
};

struct AttainableCone {
    int s = 0, t = 0; // trading window, inclusive
    size_t dim = 0;   // L * d
    QMat generators;  // one lifted claim per entry, aligned with refs
    std::vector<GenRef> refs;
};

// Orders, disposals (bid-ask form) or raw cone multipliers (generator form)
// per node, active in the window [s, t].
struct Strategy {
    int s = 0, t = 0;
    std::map<int, QMat> orders;      // node -> d x d, >= 0, zero diagonal
    std::map<int, QVec> disposals;   // node -> d-vector >= 0
    std::map<int, QVec> multipliers; // node -> weights on the node's generators
};

// Position change at `node` caused by an order matrix plus disposal:
// sum_{i != j} lambda[i][j] * (e^j - pi^{ij} e^i) - r.
QVec order_result(const MarketModel& m, int node, const QMat& lambda,
                  const QVec& disposal);

// Induced claim: sum over nodes of lift(node, position change there).
Claim strategy_claim(const MarketModel& m, const Strategy& s);

// Structural validity: shapes, signs, window, cone-form consistency.
// Returns an explanation for the first problem, or nothing if valid.
std::optional<std::string> verify_strategy(const MarketModel& m,
                                           const Strategy& s);

// Generators lift(u, g) for every node u with s <= t(u) <= t and every ray g
// of the node's trading cone -K(u), in document node order.
AttainableCone build_attainable(const MarketModel& m, int s, int t);

// Same, but only nodes weakly below `root` contribute.
AttainableCone build_attainable_subtree(const MarketModel& m, int s, int t,
                                        int root);

// Fold nonnegative generator weights back into per-node orders, disposals,
// or raw multipliers, following the cone's provenance tags.
Strategy strategy_from_weights(const MarketModel& m, const AttainableCone& a,
                               const QVec& weights);

struct MemberResult {
    bool member = false;
    Strategy strategy; // realizes v exactly when member
    QVec farkas;       // when not a member: y with y.g >= 0 on all
                       // generators and y.v < 0
};

// Exact membership v in cone(generators) with certificate either way.
MemberResult member_attainable(const MarketModel& m, const AttainableCone& a,
                               const Claim& v);

// Basis of the lineality space span{ g : -g in cone(generators) } via one
// batched LP whose optimum simultaneously classifies every generator.
SubspaceBasis lineality_attainable(const AttainableCone& a);

// Reference implementation: one negation-membership LP per generator.
SubspaceBasis lineality_attainable_lps(const AttainableCone& a);

// JSON round-trip.  Claims: { leaf-id: [d rationals] }, absent leaves zero.
// Strategies: { node-id: {"orders": [[i,j,qty]], "disposal": [...],
// "multipliers": [...]} } with 1-based asset indices.
std::string claim_to_json(const MarketModel& m, const Claim& v);
Claim claim_from_json(const MarketModel& m, const std::string& text);
std::string strategy_to_json(const MarketModel& m, const Strategy& s);
Strategy strategy_from_json(const MarketModel& m, const std::string& text);

} // namespace arbkit
