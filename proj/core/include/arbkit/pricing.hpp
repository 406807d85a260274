#pragma once

// Consistent price systems by exact LP on the tree.
//
// A price system Z attaches a d-vector to every node; it is consistent when
// it is a martingale under the leaf probabilities (P(u) Z(u) = sum of child
// values) and Z(u) lies in the dual solvency cone K*(u) minus the origin,
// and strictly consistent when Z(u) lies in the relative interior of K*(u).
//
// All searches run over the P-scaled variables y_l = P(l) Z(l), one block
// per leaf: node values Y(u) = sum of y_l over leaves below u make the
// martingale identity structural, and membership in K*(u) is scale-free.

#include "arbkit/claims.hpp"
#include "arbkit/model.hpp"

namespace arbkit {

struct PriceSystem {
    std::map<int, QVec> z; // node index -> Z(u)
};

struct CpsSearch {
    bool found = false;
    bool strict = false; // echoes the request
    // Filled when found; a strict search that tops out at margin zero also
    // fills it with the plain (non-strict) system it found there.
    PriceSystem prices;
    Rat eps = 0; // strict: optimal uniform margin over non-implicit rows,
                 // capped at 1
    // When not found: the exact reason, re-checkable without re-solving.
    //   non-strict: Farkas weights over the assembled constraint rows
    //               (see verify_cps_infeasible)
    //   strict, margin 0: row multipliers proving max margin <= 0
    //   strict, infeasible: Farkas multipliers of the strict LP
    QVec certificate;
    bool infeasible_lp = false;
};

CpsSearch find_cps(const MarketModel& m, bool strict);

// Recompute the defining invariants of a claimed (strictly) consistent
// price system: martingale identity, per-node membership (relative-interior
// membership when strict), nonzeroness.  nullopt = valid.
std::optional<std::string> verify_cps(const MarketModel& m,
                                      const PriceSystem& z, bool strict);

// Recheck a non-strict infeasibility certificate: nonnegative weights over
// the assembled cone/nonzeroness rows combining to 0 = positive.
std::optional<std::string> verify_cps_infeasible(const MarketModel& m,
                                                 const QVec& nu);

// Recheck a strict-mode failure certificate (margin bound or Farkas).
std::optional<std::string> verify_scps_failure(const MarketModel& m,
                                               const CpsSearch& r);

// Range of Z^asset(u) over all consistent price systems normalized by
// Z^1(root) = 1, computed over the cone+martingale relaxation (two LPs).
// A collapsed interval certifies uniqueness of that coordinate.
struct PriceBounds {
    bool feasible = false;
    bool lo_unbounded = false, hi_unbounded = false;
    Rat lo = 0, hi = 0;
};
PriceBounds cps_uniqueness_bounds(const MarketModel& m, int node,
                                  size_t asset);

// The frictionless market pi~^{ij} = Z^j/Z^i induced by a price system;
// dominated by the original bid-ask process entrywise (checked exactly).
MarketModel frictionless_witness(const MarketModel& m, const PriceSystem& z);

// Superhedging in a declared numeraire: the least x such that the claim v
// is attainable from x units of the numeraire at the root.  The one simplex
// run yields the optimal strategy and the dual price system; the duality
// gap is re-verified to be exactly zero.
struct SuperhedgeResult {
    enum Status { Optimal, UnboundedBelow, NotAttainable } status = Optimal;
    Rat price = 0;        // Optimal
    Strategy strategy;    // Optimal: realizes v - price * numeraire claim
    PriceSystem dual;     // Optimal: dual prices, Z^num(root) = 1
    Rat dual_value = 0;   // independent recomputation; equals price
    QVec certificate;     // UnboundedBelow: improving ray over generators;
                          // NotAttainable: Farkas row multipliers
};
SuperhedgeResult superhedge(const MarketModel& m, const Claim& v,
                            size_t numeraire);
std::optional<std::string> verify_superhedge(const MarketModel& m,
                                             const Claim& v, size_t numeraire,
                                             const SuperhedgeResult& r);

std::string price_system_to_json(const MarketModel& m, const PriceSystem& z);
std::string superhedge_to_json(const MarketModel& m, const SuperhedgeResult& r);

} // namespace arbkit
