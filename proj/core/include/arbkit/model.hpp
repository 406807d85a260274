#pragma once
// Finite event-tree market models: per-node bid-ask matrices (or raw
// generator cones), leaf probabilities, JSON parsing/serialization,
// validation, and the per-node cone geometry every verdict builds on.

#include "arbkit/cones.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace arbkit {

// Parse/completion failures carry a short machine-readable rule code next to
// the human-readable message (the same codes appear in validation reports).
struct ModelError : std::runtime_error {
    ModelError(std::string rule_, const std::string& msg)
        : std::runtime_error(msg), rule(std::move(rule_)) {}
    std::string rule;
};

struct NodeCone {
    QMat pi;         // d x d bid-ask matrix (empty in generator form)
    QMat generators; // rays of -K (empty in bid-ask form)
};

struct TreeNode {
    std::string id;
    int parent = -1; // index into nodes; -1 for the root
    std::vector<int> children;
    int t = 0;
    Rat prob = 0; // leaf: given probability; interior: derived sum
};

struct MarketModel {
    size_t d = 0;
    int T = 0;
    bool bid_ask_form = true;
    std::vector<TreeNode> nodes; // document order; parents precede children
    std::vector<NodeCone> cones; // parallel to nodes
    std::vector<int> leaves;     // canonical (document) order
    std::map<std::string, int> index_of;
};

// Fill children/leaves/interior probabilities/index from nodes[].parent and
// leaf probabilities; builders call this once after wiring the tree.
void finalize_model(MarketModel& m);

// A bid-ask matrix given with holes: missing entries are completed as
// pi[i][j] = pi[i][via] * pi[via][j], then the axioms are re-checked.
using HoleMatrix = std::vector<std::vector<std::optional<Rat>>>;
QMat complete_matrix(const HoleMatrix& partial, size_t via); // via 0-based

MarketModel parse_model(const std::string& text); // throws ModelError
std::string serialize_model(const MarketModel& m);

struct Violation {
    std::string node; // empty for model-level problems
    std::string rule;
    std::string detail;
};
std::vector<Violation> validate_model(const MarketModel& m);
std::string validation_report_json(const std::vector<Violation>& violations);

// Per-node cone geometry.
//   -K(u)  rays: {e^j - pi^{ij} e^i : i != j} (row-major) then {-e^i}
//   K*(u)  rows: {e^i} then {pi^{ij} e^i - e^j} (row-major)
//   K(u)   rows: the extreme rays of K* (per-node double description)
//   K^0(u) basis: lineality of the solvency cone
ConeV neg_solvency_cone(const MarketModel& m, int node);
ConeH dual_cone_h(const MarketModel& m, int node);
QMat k_h_rows(const MarketModel& m, int node);
SubspaceBasis k0_basis(const MarketModel& m, int node);

std::vector<int> nodes_at_time(const MarketModel& m, int t);
std::vector<int> leaves_under(const MarketModel& m, int node);

} // namespace arbkit
