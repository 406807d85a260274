#pragma once

// The no-arbitrage hierarchy on a finite event tree, one decision procedure
// per condition, every verdict carrying evidence that can be re-checked by
// recomputation:
//
//   na         A_0^T meets the nonnegative orthant only at 0
//   nas        strict: claims attainable by t and solvent at t are reversible
//   naps       prospective strict: A_0^t ∩ (−A_t^T) ⊆ A_t^T for every t
//   nar        robust: a strictly consistent price system exists
//   nawps      weak prospective strict: a consistent price system exists
//   ef         efficient friction: every solvency cone is pointed
//   penner     inherited reversibility: ∩_children K^0 ⊆ K^0(parent)
//   nullspace  no null strategy leaves a node outside its K^0
//   mixed      naps with the liquidation side read in a dominating market
//
// Cone containments are decided through lineality-subspace reformulations
// and normalized LPs (optimum exactly 0, or strictly positive with a
// witness); nothing here enumerates rays in claim space.

#include "arbkit/claims.hpp"
#include "arbkit/model.hpp"
#include "arbkit/pricing.hpp"

namespace arbkit {

struct Verdict {
    std::string condition;
    bool applicable = true;
    bool holds = false;
    long long micros = -1; // wall time, filled only when timing is requested

    // Failure evidence (fields used depend on the condition):
    int t = -1;    // time label; for naps/mixed the smallest left-window end
                   // exhibiting the violation
    int node = -1; // offending node index
    size_t i = 0, j = 0;               // offending asset pair (ef)
    QVec direction;                    // d-vector witness (ef/penner/
                                       // nullspace xi(u) / nas value at node)
    std::optional<Claim> claim;        // violating claim
    std::optional<Strategy> strategy;  // realizes the claim (or a null
                                       // strategy for nullspace)
    std::optional<Strategy> strategy2; // naps/mixed: realizes −claim in the
                                       // right window
    QVec bound;                        // na holds: row duals proving max = 0

    std::optional<CpsSearch> cps;             // nar/nawps evidence
    std::optional<MarketModel> witness_model; // nawps: frictionless witness

    std::vector<std::pair<int, bool>> instances; // per-t outcomes
    std::string notes;
};

Verdict check_na(const MarketModel& m);
Verdict check_nas(const MarketModel& m);
Verdict check_naps(const MarketModel& m);
Verdict check_nar(const MarketModel& m); // bid-ask only: throws otherwise
Verdict check_nawps(const MarketModel& m);
Verdict check_ef(const MarketModel& m);
Verdict check_penner(const MarketModel& m);
Verdict check_nullspace(const MarketModel& m);
// Same instance family as check_naps, with the liquidation windows read in
// `witness`; requires the same tree and entrywise dominating prices.
Verdict check_mixed(const MarketModel& m, const MarketModel& witness);

struct RunOptions {
    bool timing = false;
    std::vector<std::string> conditions;   // empty = all applicable
    const MarketModel* mixed_witness = nullptr;
};

struct Report {
    std::vector<Verdict> verdicts;
    std::vector<std::string> consistency; // one line per checked implication
    bool timing = false;
};

// Runs the requested checks (default: every applicable one) and asserts the
// implication structure between their outcomes; a violated implication is an
// internal inconsistency and throws.
Report run_all(const MarketModel& m, const RunOptions& opts = {});

std::string report_to_json(const MarketModel& m, const Report& r);

} // namespace arbkit
