#include "arbkit/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>

namespace arbkit {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

Rat rat_from_json(const json& j, const std::string& what) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned() && j.get<unsigned long long>() > LLONG_MAX)
            throw ModelError("json", what + ": integer too large, use a string");
        return Rat(j.get<long long>());
    }
    if (j.is_string()) {
        if (auto r = parse_rational(j.get<std::string>())) return *r;
        throw ModelError("json", what + ": malformed rational \"" +
                                     j.get<std::string>() + "\"");
    }
    throw ModelError("json",
                     what + ": rationals must be integers, \"p/q\", or finite "
                            "decimal strings");
}

ojson rat_to_json(const Rat& r) {
    if (denominator(r) == 1) {
        const Int n = numerator(r);
        if (n >= LLONG_MIN && n <= LLONG_MAX)
            return ojson(n.convert_to<long long>());
    }
    return ojson(format_rational(r));
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ModelError("json",
                             where + ": unknown field \"" + it.key() + "\"");
    }
}

std::string ij(size_t i, size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

} // namespace

QMat complete_matrix(const HoleMatrix& partial, size_t via) {
    const size_t d = partial.size();
    for (const auto& row : partial)
        if (row.size() != d)
            throw ModelError("json", "bid-ask matrix is not square");
    if (via >= d) throw ModelError("json", "via index out of range");
    for (size_t i = 0; i < d; ++i) {
        if (!partial[i][i])
            throw ModelError("pi-missing",
                             "diagonal entry " + ij(i, i) + " missing");
        if (!partial[i][via] || !partial[via][i])
            throw ModelError("pi-missing", "row/column of the via asset " +
                                               std::to_string(via + 1) +
                                               " must be fully specified");
    }
    QMat pi(d, QVec(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            pi[i][j] = partial[i][j] ? *partial[i][j]
                                     : *partial[i][via] * *partial[via][j];
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (pi[i][j] <= 0)
                throw ModelError("pi-positive", "entry " + ij(i, j) +
                                                    " must be positive");
    for (size_t i = 0; i < d; ++i)
        if (pi[i][i] != 1)
            throw ModelError("pi-diagonal",
                             "diagonal entry " + ij(i, i) + " must be 1");
    for (size_t i = 0; i < d; ++i)
        for (size_t k = 0; k < d; ++k)
            for (size_t j = 0; j < d; ++j)
                if (pi[i][j] > pi[i][k] * pi[k][j])
                    throw ModelError(
                        "pi-triangle",
                        "completion violates the triangle axiom at (" +
                            std::to_string(i + 1) + "," + std::to_string(k + 1) +
                            "," + std::to_string(j + 1) + ")");
    return pi;
}

void finalize_model(MarketModel& m) {
    m.index_of.clear();
    m.leaves.clear();
    for (size_t i = 0; i < m.nodes.size(); ++i) {
        m.nodes[i].children.clear();
        m.index_of[m.nodes[i].id] = static_cast<int>(i);
    }
    for (size_t i = 0; i < m.nodes.size(); ++i)
        if (m.nodes[i].parent >= 0)
            m.nodes[static_cast<size_t>(m.nodes[i].parent)].children.push_back(
                static_cast<int>(i));
    for (size_t i = 0; i < m.nodes.size(); ++i)
        if (m.nodes[i].children.empty()) m.leaves.push_back(static_cast<int>(i));
    // Interior probabilities are sums over children; nodes are topological.
    for (size_t k = m.nodes.size(); k-- > 0;) {
        TreeNode& n = m.nodes[k];
        if (n.children.empty()) continue;
        n.prob = 0;
        for (int c : n.children) n.prob += m.nodes[static_cast<size_t>(c)].prob;
    }
}

MarketModel parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("json", e.what());
    }
    if (!j.is_object()) throw ModelError("json", "top level must be an object");
    check_keys(j, {"assets", "nodes", "leaf_prob"}, "top level");
    if (!j.contains("assets") || !j["assets"].is_number_integer())
        throw ModelError("json", "\"assets\" must be an integer");
    const long long dd = j["assets"].get<long long>();
    if (dd < 1 || dd > 8)
        throw ModelError("dimension", "asset count must be between 1 and 8");
    MarketModel m;
    m.d = static_cast<size_t>(dd);
    if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty())
        throw ModelError("json", "\"nodes\" must be a nonempty array");

    bool any_pi = false, any_gen = false;
    for (const json& nj : j["nodes"]) {
        if (!nj.is_object())
            throw ModelError("json", "node entries must be objects");
        check_keys(nj, {"id", "parent", "t", "pi", "via", "generators"},
                   "node");
        if (!nj.contains("id") || !nj["id"].is_string())
            throw ModelError("json", "node \"id\" must be a string");
        TreeNode node;
        node.id = nj["id"].get<std::string>();
        if (m.index_of.count(node.id))
            throw ModelError("tree-structure",
                             "duplicate node id \"" + node.id + "\"");
        const std::string where = "node \"" + node.id + "\"";
        if (!nj.contains("parent") || (!nj["parent"].is_null() &&
                                       !nj["parent"].is_string()))
            throw ModelError("json", where + ": \"parent\" must be a node id "
                                             "or null");
        if (nj["parent"].is_null()) {
            node.parent = -1;
        } else {
            const std::string pid = nj["parent"].get<std::string>();
            auto it = m.index_of.find(pid);
            if (it == m.index_of.end())
                throw ModelError("tree-structure",
                                 where + ": parent \"" + pid +
                                     "\" must be declared before its child");
            node.parent = it->second;
        }
        if (!nj.contains("t") || !nj["t"].is_number_integer())
            throw ModelError("json", where + ": \"t\" must be an integer");
        node.t = nj["t"].get<int>();
        const int expect_t =
            node.parent < 0 ? 0
                            : m.nodes[static_cast<size_t>(node.parent)].t + 1;
        if (node.t != expect_t)
            throw ModelError("tree-structure",
                             where + ": t must be " + std::to_string(expect_t));
        if (node.parent < 0 && !m.nodes.empty())
            throw ModelError("tree-structure", "more than one root node");

        NodeCone cone;
        const bool has_pi = nj.contains("pi");
        const bool has_gen = nj.contains("generators");
        if (has_pi == has_gen)
            throw ModelError("cone-form", where + ": exactly one of \"pi\" or "
                                                  "\"generators\" is required");
        if (has_pi) {
            any_pi = true;
            const json& pj = nj["pi"];
            if (!pj.is_array() || pj.size() != m.d)
                throw ModelError("json", where + ": \"pi\" must be a " +
                                             std::to_string(m.d) + "x" +
                                             std::to_string(m.d) + " matrix");
            HoleMatrix holes(m.d, std::vector<std::optional<Rat>>(m.d));
            bool any_hole = false;
            for (size_t i = 0; i < m.d; ++i) {
                if (!pj[i].is_array() || pj[i].size() != m.d)
                    throw ModelError("json", where + ": \"pi\" rows must have " +
                                                 std::to_string(m.d) +
                                                 " entries");
                for (size_t k = 0; k < m.d; ++k) {
                    if (pj[i][k].is_null()) {
                        any_hole = true;
                        continue;
                    }
                    Rat v = rat_from_json(pj[i][k], where + " pi" + ij(i, k));
                    if (v <= 0)
                        throw ModelError("pi-positive",
                                         where + ": pi" + ij(i, k) +
                                             " must be positive");
                    holes[i][k] = std::move(v);
                }
            }
            if (any_hole) {
                if (!nj.contains("via") || !nj["via"].is_number_integer())
                    throw ModelError("pi-missing",
                                     where + ": matrix has holes but no "
                                             "\"via\" asset");
                const long long via = nj["via"].get<long long>();
                if (via < 1 || via > static_cast<long long>(m.d))
                    throw ModelError("json", where + ": \"via\" out of range");
                cone.pi = complete_matrix(holes, static_cast<size_t>(via - 1));
            } else {
                cone.pi.assign(m.d, QVec(m.d));
                for (size_t i = 0; i < m.d; ++i)
                    for (size_t k = 0; k < m.d; ++k)
                        cone.pi[i][k] = *holes[i][k];
            }
        } else {
            any_gen = true;
            const json& gj = nj["generators"];
            if (!gj.is_array() || gj.empty())
                throw ModelError("json", where + ": \"generators\" must be a "
                                                 "nonempty array");
            for (const json& row : gj) {
                if (!row.is_array() || row.size() != m.d)
                    throw ModelError("json",
                                     where + ": generators must have " +
                                         std::to_string(m.d) + " entries");
                QVec g(m.d);
                for (size_t k = 0; k < m.d; ++k)
                    g[k] = rat_from_json(row[k], where + " generator entry");
                cone.generators.push_back(std::move(g));
            }
        }
        m.index_of[node.id] = static_cast<int>(m.nodes.size());
        m.nodes.push_back(std::move(node));
        m.cones.push_back(std::move(cone));
    }
    if (m.nodes[0].parent != -1)
        throw ModelError("tree-structure", "first node must be the root");
    if (any_pi && any_gen)
        throw ModelError("cone-form",
                         "bid-ask and generator nodes cannot be mixed");
    m.bid_ask_form = any_pi;

    m.T = 0;
    for (const TreeNode& n : m.nodes) m.T = std::max(m.T, n.t);
    finalize_model(m);
    for (int l : m.leaves)
        if (m.nodes[static_cast<size_t>(l)].t != m.T)
            throw ModelError("tree-structure",
                             "leaf \"" + m.nodes[static_cast<size_t>(l)].id +
                                 "\" is not at the horizon t=" +
                                 std::to_string(m.T));

    const size_t L = m.leaves.size();
    if (j.contains("leaf_prob")) {
        const json& pj = j["leaf_prob"];
        if (!pj.is_object())
            throw ModelError("json", "\"leaf_prob\" must be an object");
        if (pj.size() != L)
            throw ModelError("leaf-prob",
                             "leaf_prob must cover every leaf exactly once");
        Rat sum = 0;
        for (int l : m.leaves) {
            TreeNode& leaf = m.nodes[static_cast<size_t>(l)];
            if (!pj.contains(leaf.id))
                throw ModelError("leaf-prob",
                                 "missing probability for leaf \"" + leaf.id +
                                     "\"");
            Rat p = rat_from_json(pj[leaf.id], "leaf_prob");
            if (p <= 0)
                throw ModelError("leaf-prob",
                                 "probabilities must be strictly positive");
            sum += p;
            leaf.prob = std::move(p);
        }
        if (sum != 1)
            throw ModelError("leaf-prob", "probabilities must sum to 1");
    } else {
        for (int l : m.leaves)
            m.nodes[static_cast<size_t>(l)].prob = Rat(1) / Rat(L);
    }
    finalize_model(m); // recompute interior probabilities
    return m;
}

std::string serialize_model(const MarketModel& m) {
    ojson out;
    out["assets"] = static_cast<long long>(m.d);
    out["nodes"] = ojson::array();
    for (size_t i = 0; i < m.nodes.size(); ++i) {
        const TreeNode& n = m.nodes[i];
        ojson nj;
        nj["id"] = n.id;
        nj["parent"] = n.parent < 0 ? ojson(nullptr)
                                    : ojson(m.nodes[static_cast<size_t>(
                                                        n.parent)]
                                                .id);
        nj["t"] = n.t;
        const NodeCone& c = m.cones[i];
        if (!c.pi.empty()) {
            ojson pj = ojson::array();
            for (const QVec& row : c.pi) {
                ojson rj = ojson::array();
                for (const Rat& v : row) rj.push_back(rat_to_json(v));
                pj.push_back(std::move(rj));
            }
            nj["pi"] = std::move(pj);
        } else {
            ojson gj = ojson::array();
            for (const QVec& g : c.generators) {
                ojson rj = ojson::array();
                for (const Rat& v : g) rj.push_back(rat_to_json(v));
                gj.push_back(std::move(rj));
            }
            nj["generators"] = std::move(gj);
        }
        out["nodes"].push_back(std::move(nj));
    }
    ojson pj;
    for (int l : m.leaves) {
        const TreeNode& leaf = m.nodes[static_cast<size_t>(l)];
        pj[leaf.id] = rat_to_json(leaf.prob);
    }
    out["leaf_prob"] = std::move(pj);
    return out.dump(2) + "\n";
}

std::vector<Violation> validate_model(const MarketModel& m) {
    std::vector<Violation> out;
    auto flag = [&](const std::string& node, const char* rule,
                    std::string detail) {
        out.push_back(Violation{node, rule, std::move(detail)});
    };

    if (m.d < 1 || m.d > 8)
        flag("", "dimension", "asset count must be between 1 and 8");
    if (m.nodes.empty() || m.nodes[0].parent != -1) {
        flag("", "tree-structure", "first node must be the root");
        return out;
    }
    for (size_t i = 1; i < m.nodes.size(); ++i) {
        const TreeNode& n = m.nodes[i];
        if (n.parent < 0) {
            flag(n.id, "tree-structure", "more than one root node");
        } else if (static_cast<size_t>(n.parent) >= i) {
            flag(n.id, "tree-structure", "parent must precede child");
        } else if (n.t != m.nodes[static_cast<size_t>(n.parent)].t + 1) {
            flag(n.id, "tree-structure", "t must increase by 1 along edges");
        }
    }
    for (int l : m.leaves)
        if (m.nodes[static_cast<size_t>(l)].t != m.T)
            flag(m.nodes[static_cast<size_t>(l)].id, "tree-structure",
                 "leaf not at the horizon");

    Rat psum = 0;
    for (int l : m.leaves) {
        const TreeNode& leaf = m.nodes[static_cast<size_t>(l)];
        if (leaf.prob <= 0)
            flag(leaf.id, "leaf-prob", "leaf probability must be positive");
        psum += leaf.prob;
    }
    if (psum != 1)
        flag("", "leaf-prob", "leaf probabilities sum to " +
                                  format_rational(psum) + ", expected 1");

    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const std::string& id = m.nodes[u].id;
        const NodeCone& c = m.cones[u];
        const bool has_pi = !c.pi.empty();
        if (has_pi != m.bid_ask_form || has_pi == !c.generators.empty()) {
            flag(id, "cone-form", "node does not match the model's cone form");
            continue;
        }
        if (has_pi) {
            if (c.pi.size() != m.d) {
                flag(id, "dimension", "bid-ask matrix has wrong size");
                continue;
            }
            for (size_t i = 0; i < m.d; ++i)
                for (size_t k = 0; k < m.d; ++k)
                    if (c.pi[i][k] <= 0)
                        flag(id, "pi-positive",
                             "pi" + ij(i, k) + " must be positive");
            for (size_t i = 0; i < m.d; ++i)
                if (c.pi[i][i] != 1)
                    flag(id, "pi-diagonal",
                         "pi" + ij(i, i) + " = " +
                             format_rational(c.pi[i][i]) + ", expected 1");
            for (size_t i = 0; i < m.d; ++i)
                for (size_t k = 0; k < m.d; ++k)
                    for (size_t jj = 0; jj < m.d; ++jj)
                        if (c.pi[i][jj] > c.pi[i][k] * c.pi[k][jj])
                            flag(id, "pi-triangle",
                                 "triangle axiom fails at (" +
                                     std::to_string(i + 1) + "," +
                                     std::to_string(k + 1) + "," +
                                     std::to_string(jj + 1) + ")");
        } else {
            bool sizes_ok = true;
            for (const QVec& g : c.generators) {
                if (g.size() != m.d) {
                    flag(id, "dimension", "generator has wrong size");
                    sizes_ok = false;
                    continue;
                }
                if (is_zero(g))
                    flag(id, "generator-form", "zero generator");
            }
            if (m.nodes[u].t == m.T && !c.generators.empty() && sizes_ok) {
                ConeV cone{m.d, c.generators};
                for (size_t i = 0; i < m.d; ++i) {
                    QVec e = zeros(m.d);
                    e[i] = -1;
                    if (!conev_contains(cone, e))
                        flag(id, "generator-form",
                             "terminal cone must allow disposal of asset " +
                                 std::to_string(i + 1));
                }
                // cone(-K) ∩ R^d_+ = {0}: otherwise "something for nothing"
                // exists inside a single terminal node.
                const size_t ng = c.generators.size();
                LinearProgram lp(ng + m.d);
                QVec norm(ng + m.d, Rat(0));
                for (size_t i = 0; i < ng; ++i) norm[i] = 1;
                lp.add_row(std::move(norm), Rel::LE, Rat(1));
                for (size_t k = 0; k < m.d; ++k) {
                    QVec a(ng + m.d, Rat(0));
                    for (size_t i = 0; i < ng; ++i) a[i] = c.generators[i][k];
                    a[ng + k] = -1;
                    lp.add_row(std::move(a), Rel::EQ, Rat(0));
                    lp.c[ng + k] = 1;
                }
                LpResult r = lp_solve(lp);
                if (r.status != LpStatus::Optimal || r.value != 0)
                    flag(id, "generator-form",
                         "terminal cone meets the nonnegative orthant away "
                         "from 0");
            }
        }
    }
    return out;
}

std::string validation_report_json(const std::vector<Violation>& violations) {
    ojson out;
    out["ok"] = violations.empty();
    out["violations"] = ojson::array();
    for (const Violation& v : violations) {
        ojson vj;
        vj["node"] = v.node;
        vj["rule"] = v.rule;
        vj["detail"] = v.detail;
        out["violations"].push_back(std::move(vj));
    }
    return out.dump(2) + "\n";
}

ConeV neg_solvency_cone(const MarketModel& m, int node) {
    const NodeCone& c = m.cones[static_cast<size_t>(node)];
    if (c.pi.empty()) return ConeV{m.d, c.generators};
    QMat rays;
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j) {
            if (i == j) continue;
            QVec g = zeros(m.d);
            g[j] += 1;
            g[i] -= c.pi[i][j];
            rays.push_back(std::move(g));
        }
    for (size_t i = 0; i < m.d; ++i) {
        QVec g = zeros(m.d);
        g[i] = -1;
        rays.push_back(std::move(g));
    }
    return ConeV{m.d, std::move(rays)};
}

ConeH dual_cone_h(const MarketModel& m, int node) {
    const NodeCone& c = m.cones[static_cast<size_t>(node)];
    QMat rows;
    if (c.pi.empty()) {
        for (const QVec& g : c.generators) rows.push_back(scale(g, Rat(-1)));
        return ConeH{m.d, std::move(rows)};
    }
    for (size_t i = 0; i < m.d; ++i) {
        QVec r = zeros(m.d);
        r[i] = 1;
        rows.push_back(std::move(r));
    }
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j) {
            if (i == j) continue;
            QVec r = zeros(m.d);
            r[i] += c.pi[i][j];
            r[j] -= 1;
            rows.push_back(std::move(r));
        }
    return ConeH{m.d, std::move(rows)};
}

QMat k_h_rows(const MarketModel& m, int node) {
    return dd_h_to_v(dual_cone_h(m, node)).rays;
}

SubspaceBasis k0_basis(const MarketModel& m, int node) {
    return SubspaceBasis{
        m.d, generator_lineality(neg_solvency_cone(m, node).rays).basis};
}

std::vector<int> nodes_at_time(const MarketModel& m, int t) {
    std::vector<int> out;
    for (size_t i = 0; i < m.nodes.size(); ++i)
        if (m.nodes[i].t == t) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> leaves_under(const MarketModel& m, int node) {
    std::vector<int> out;
    for (int l : m.leaves) {
        int u = l;
        while (u >= 0 && u != node) u = m.nodes[static_cast<size_t>(u)].parent;
        if (u == node) out.push_back(l);
    }
    return out;
}

} // namespace arbkit
