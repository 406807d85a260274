#include "arbkit/claims.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>

namespace arbkit {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

Claim zero_claim(const MarketModel& m) {
    return Claim{zeros(m.leaves.size() * m.d)};
}

size_t leaf_pos(const MarketModel& m, int leaf) {
    for (size_t p = 0; p < m.leaves.size(); ++p)
        if (m.leaves[p] == leaf) return p;
    throw std::invalid_argument("leaf_pos: node is not a leaf");
}

Claim lift(const MarketModel& m, int node, const QVec& w) {
    if (node < 0 || static_cast<size_t>(node) >= m.nodes.size())
        throw std::invalid_argument("lift: unknown node");
    if (w.size() != m.d) throw std::invalid_argument("lift: wrong dimension");
    Claim v = zero_claim(m);
    for (int l : leaves_under(m, node)) {
        const size_t base = leaf_pos(m, l) * m.d;
        for (size_t k = 0; k < m.d; ++k) v.flat[base + k] = w[k];
    }
    return v;
}

QVec claim_at(const MarketModel& m, const Claim& v, int leaf) {
    const size_t base = leaf_pos(m, leaf) * m.d;
    QVec out(m.d);
    for (size_t k = 0; k < m.d; ++k) out[k] = v.flat[base + k];
    return out;
}

QVec order_result(const MarketModel& m, int node, const QMat& lambda,
                  const QVec& disposal) {
    if (!m.bid_ask_form)
        throw std::invalid_argument(
            "order_result: order matrices require bid-ask form");
    const QMat& pi = m.cones[static_cast<size_t>(node)].pi;
    QVec out = zeros(m.d);
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j) {
            if (i == j) continue;
            const Rat& q = lambda[i][j];
            if (q == 0) continue;
            out[j] += q;
            out[i] -= q * pi[i][j];
        }
    if (!disposal.empty())
        for (size_t k = 0; k < m.d; ++k) out[k] -= disposal[k];
    return out;
}

Claim strategy_claim(const MarketModel& m, const Strategy& s) {
    Claim total = zero_claim(m);
    std::vector<int> touched;
    for (const auto& [u, _] : s.orders) touched.push_back(u);
    for (const auto& [u, _] : s.disposals) touched.push_back(u);
    for (const auto& [u, _] : s.multipliers) touched.push_back(u);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int u : touched) {
        QVec xi = zeros(m.d);
        auto mo = s.multipliers.find(u);
        if (mo != s.multipliers.end()) {
            const QMat& gens = m.cones[static_cast<size_t>(u)].generators;
            for (size_t k = 0; k < mo->second.size(); ++k)
                xi = add(xi, scale(gens[k], mo->second[k]));
        }
        auto oo = s.orders.find(u);
        auto dd = s.disposals.find(u);
        static const QMat no_orders;
        const QMat& lam = oo != s.orders.end() ? oo->second : no_orders;
        QVec disp = dd != s.disposals.end() ? dd->second : QVec();
        if (!lam.empty() || !disp.empty()) {
            if (lam.empty())
                xi = add(xi, order_result(m, u, QMat(m.d, zeros(m.d)), disp));
            else
                xi = add(xi, order_result(m, u, lam, disp));
        }
        total.flat = add(total.flat, lift(m, u, xi).flat);
    }
    return total;
}

std::optional<std::string> verify_strategy(const MarketModel& m,
                                           const Strategy& s) {
    if (s.s < 0 || s.t > m.T || s.s > s.t) return "invalid window";
    auto node_ok = [&](int u) -> std::optional<std::string> {
        if (u < 0 || static_cast<size_t>(u) >= m.nodes.size())
            return "unknown node";
        const int t = m.nodes[static_cast<size_t>(u)].t;
        if (t < s.s || t > s.t)
            return "node \"" + m.nodes[static_cast<size_t>(u)].id +
                   "\" lies outside the window";
        return std::nullopt;
    };
    for (const auto& [u, lam] : s.orders) {
        if (auto e = node_ok(u)) return e;
        if (!m.bid_ask_form) return "orders on a generator-form model";
        if (lam.size() != m.d) return "order matrix has wrong size";
        for (size_t i = 0; i < m.d; ++i) {
            if (lam[i].size() != m.d) return "order matrix has wrong size";
            if (lam[i][i] != 0) return "order matrix has nonzero diagonal";
            for (size_t j = 0; j < m.d; ++j)
                if (lam[i][j] < 0) return "negative order quantity";
        }
    }
    for (const auto& [u, r] : s.disposals) {
        if (auto e = node_ok(u)) return e;
        if (!m.bid_ask_form) return "disposals on a generator-form model";
        if (r.size() != m.d) return "disposal vector has wrong size";
        for (const Rat& q : r)
            if (q < 0) return "negative disposal";
    }
    for (const auto& [u, mu] : s.multipliers) {
        if (auto e = node_ok(u)) return e;
        if (m.bid_ask_form) return "raw multipliers on a bid-ask model";
        if (mu.size() != m.cones[static_cast<size_t>(u)].generators.size())
            return "multiplier vector has wrong size";
        for (const Rat& q : mu)
            if (q < 0) return "negative multiplier";
    }
    return std::nullopt;
}

namespace {

AttainableCone build_window(const MarketModel& m, int s, int t,
                            const std::vector<char>& include) {
    if (s < 0 || t > m.T || s > t)
        throw std::invalid_argument("build_attainable: bad window");
    AttainableCone a;
    a.s = s;
    a.t = t;
    a.dim = m.leaves.size() * m.d;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        if (m.nodes[u].t < s || m.nodes[u].t > t || !include[u]) continue;
        const ConeV rays = neg_solvency_cone(m, static_cast<int>(u));
        for (size_t k = 0; k < rays.rays.size(); ++k) {
            a.generators.push_back(
                lift(m, static_cast<int>(u), rays.rays[k]).flat);
            GenRef ref;
            ref.node = static_cast<int>(u);
            if (!m.bid_ask_form) {
                ref.kind = GenRef::Raw;
                ref.i = k;
            } else if (k < m.d * (m.d - 1)) {
                // Transfers come first, row-major with the diagonal skipped.
                ref.kind = GenRef::Transfer;
                ref.i = k / (m.d - 1);
                const size_t off = k % (m.d - 1);
                ref.j = off < ref.i ? off : off + 1;
            } else {
                ref.kind = GenRef::Disposal;
                ref.i = k - m.d * (m.d - 1);
            }
            a.refs.push_back(ref);
        }
    }
    return a;
}

} // namespace

AttainableCone build_attainable(const MarketModel& m, int s, int t) {
    return build_window(m, s, t, std::vector<char>(m.nodes.size(), 1));
}

AttainableCone build_attainable_subtree(const MarketModel& m, int s, int t,
                                        int root) {
    std::vector<char> include(m.nodes.size(), 0);
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        int w = static_cast<int>(u);
        while (w >= 0 && w != root) w = m.nodes[static_cast<size_t>(w)].parent;
        include[u] = w == root;
    }
    return build_window(m, s, t, include);
}

Strategy strategy_from_weights(const MarketModel& m, const AttainableCone& a,
                               const QVec& weights) {
    if (weights.size() != a.generators.size())
        throw std::invalid_argument("strategy_from_weights: size mismatch");
    Strategy s;
    s.s = a.s;
    s.t = a.t;
    for (size_t g = 0; g < weights.size(); ++g) {
        if (weights[g] == 0) continue;
        const GenRef& ref = a.refs[g];
        switch (ref.kind) {
        case GenRef::Transfer: {
            auto it = s.orders.find(ref.node);
            if (it == s.orders.end())
                it = s.orders.emplace(ref.node, QMat(m.d, zeros(m.d))).first;
            it->second[ref.i][ref.j] += weights[g];
            break;
        }
        case GenRef::Disposal: {
            auto it = s.disposals.find(ref.node);
            if (it == s.disposals.end())
                it = s.disposals.emplace(ref.node, zeros(m.d)).first;
            it->second[ref.i] += weights[g];
            break;
        }
        case GenRef::Raw: {
            auto it = s.multipliers.find(ref.node);
            if (it == s.multipliers.end())
                it = s.multipliers
                         .emplace(ref.node,
                                  zeros(m.cones[static_cast<size_t>(ref.node)]
                                            .generators.size()))
                         .first;
            it->second[ref.i] += weights[g];
            break;
        }
        }
    }
    return s;
}

MemberResult member_attainable(const MarketModel& m, const AttainableCone& a,
                               const Claim& v) {
    if (v.flat.size() != a.dim)
        throw std::invalid_argument("member_attainable: wrong claim size");
    const size_t n = a.generators.size();
    LinearProgram lp(n);
    for (size_t k = 0; k < a.dim; ++k) {
        QVec row(n);
        for (size_t g = 0; g < n; ++g) row[g] = a.generators[g][k];
        lp.add_row(std::move(row), Rel::EQ, v.flat[k]);
    }
    LpResult res = lp_solve(lp);
    MemberResult out;
    if (res.status == LpStatus::Infeasible) {
        out.member = false;
        out.farkas = res.y;
        return out;
    }
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("member_attainable: unexpected LP status");
    out.member = true;
    out.strategy = strategy_from_weights(m, a, res.x);
    return out;
}

SubspaceBasis lineality_attainable(const AttainableCone& a) {
    return SubspaceBasis{a.dim, generator_lineality(a.generators).basis};
}

SubspaceBasis lineality_attainable_lps(const AttainableCone& a) {
    QMat good;
    const ConeV cone{a.dim, a.generators};
    for (const QVec& g : a.generators)
        if (conev_contains(cone, scale(g, Rat(-1)))) good.push_back(g);
    return SubspaceBasis{a.dim, row_basis(good)};
}

std::string claim_to_json(const MarketModel& m, const Claim& v) {
    ojson out;
    for (int l : m.leaves) {
        ojson row = ojson::array();
        const size_t base = leaf_pos(m, l) * m.d;
        for (size_t k = 0; k < m.d; ++k) {
            const Rat& q = v.flat[base + k];
            if (denominator(q) == 1 && numerator(q) >= LLONG_MIN &&
                numerator(q) <= LLONG_MAX)
                row.push_back(numerator(q).convert_to<long long>());
            else
                row.push_back(format_rational(q));
        }
        out[m.nodes[static_cast<size_t>(l)].id] = std::move(row);
    }
    return out.dump(2) + "\n";
}

namespace {

Rat rat_from(const json& j, const char* what) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string())
        if (auto r = parse_rational(j.get<std::string>())) return *r;
    throw ModelError("json", std::string(what) + ": malformed rational");
}

} // namespace

Claim claim_from_json(const MarketModel& m, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("json", e.what());
    }
    if (!j.is_object()) throw ModelError("json", "claim must be an object");
    Claim v = zero_claim(m);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto ni = m.index_of.find(it.key());
        if (ni == m.index_of.end())
            throw ModelError("json", "claim: unknown leaf \"" + it.key() + "\"");
        const int node = ni->second;
        if (!m.nodes[static_cast<size_t>(node)].children.empty())
            throw ModelError("json",
                             "claim: node \"" + it.key() + "\" is not a leaf");
        if (!it.value().is_array() || it.value().size() != m.d)
            throw ModelError("json", "claim: leaf \"" + it.key() + "\" needs " +
                                         std::to_string(m.d) + " entries");
        const size_t base = leaf_pos(m, node) * m.d;
        for (size_t k = 0; k < m.d; ++k)
            v.flat[base + k] = rat_from(it.value()[k], "claim");
    }
    return v;
}

std::string strategy_to_json(const MarketModel& m, const Strategy& s) {
    ojson out;
    std::vector<int> touched;
    for (const auto& [u, _] : s.orders) touched.push_back(u);
    for (const auto& [u, _] : s.disposals) touched.push_back(u);
    for (const auto& [u, _] : s.multipliers) touched.push_back(u);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    auto rat_out = [](const Rat& q) -> ojson {
        if (denominator(q) == 1 && numerator(q) >= LLONG_MIN &&
            numerator(q) <= LLONG_MAX)
            return ojson(numerator(q).convert_to<long long>());
        return ojson(format_rational(q));
    };
    for (int u : touched) {
        ojson nj;
        auto oo = s.orders.find(u);
        if (oo != s.orders.end()) {
            ojson triples = ojson::array();
            for (size_t i = 0; i < m.d; ++i)
                for (size_t j = 0; j < m.d; ++j) {
                    if (i == j || oo->second[i][j] == 0) continue;
                    ojson tr = ojson::array();
                    tr.push_back(static_cast<long long>(i + 1));
                    tr.push_back(static_cast<long long>(j + 1));
                    tr.push_back(rat_out(oo->second[i][j]));
                    triples.push_back(std::move(tr));
                }
            nj["orders"] = std::move(triples);
        }
        auto dd = s.disposals.find(u);
        if (dd != s.disposals.end()) {
            ojson row = ojson::array();
            for (const Rat& q : dd->second) row.push_back(rat_out(q));
            nj["disposal"] = std::move(row);
        }
        auto mo = s.multipliers.find(u);
        if (mo != s.multipliers.end()) {
            ojson row = ojson::array();
            for (const Rat& q : mo->second) row.push_back(rat_out(q));
            nj["multipliers"] = std::move(row);
        }
        out[m.nodes[static_cast<size_t>(u)].id] = std::move(nj);
    }
    return out.dump(2) + "\n";
}

Strategy strategy_from_json(const MarketModel& m, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("json", e.what());
    }
    if (!j.is_object()) throw ModelError("json", "strategy must be an object");
    Strategy s;
    s.s = 0;
    s.t = m.T;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto ni = m.index_of.find(it.key());
        if (ni == m.index_of.end())
            throw ModelError("json",
                             "strategy: unknown node \"" + it.key() + "\"");
        const int u = ni->second;
        const json& nj = it.value();
        if (!nj.is_object())
            throw ModelError("json", "strategy: node entries must be objects");
        if (nj.contains("orders")) {
            if (!nj["orders"].is_array())
                throw ModelError("json", "strategy: \"orders\" must be an "
                                         "array of [i, j, qty] triples");
            QMat lam(m.d, zeros(m.d));
            for (const json& tr : nj["orders"]) {
                if (!tr.is_array() || tr.size() != 3 ||
                    !tr[0].is_number_integer() || !tr[1].is_number_integer())
                    throw ModelError("json", "strategy: bad order triple");
                const long long i = tr[0].get<long long>();
                const long long jj = tr[1].get<long long>();
                if (i < 1 || jj < 1 || i > static_cast<long long>(m.d) ||
                    jj > static_cast<long long>(m.d))
                    throw ModelError("json",
                                     "strategy: order indices out of range");
                Rat q = rat_from(tr[2], "strategy order");
                if (q < 0)
                    throw ModelError("json",
                                     "strategy: negative order quantity");
                // Self-transfers are vacuous; normalize them away.
                if (i != jj)
                    lam[static_cast<size_t>(i - 1)][static_cast<size_t>(jj - 1)] +=
                        q;
            }
            s.orders[u] = std::move(lam);
        }
        if (nj.contains("disposal")) {
            if (!nj["disposal"].is_array() || nj["disposal"].size() != m.d)
                throw ModelError("json", "strategy: \"disposal\" needs " +
                                             std::to_string(m.d) + " entries");
            QVec r(m.d);
            for (size_t k = 0; k < m.d; ++k)
                r[k] = rat_from(nj["disposal"][k], "strategy disposal");
            s.disposals[u] = std::move(r);
        }
        if (nj.contains("multipliers")) {
            const size_t ng =
                m.cones[static_cast<size_t>(u)].generators.size();
            if (!nj["multipliers"].is_array() ||
                nj["multipliers"].size() != ng)
                throw ModelError("json",
                                 "strategy: \"multipliers\" needs one entry "
                                 "per node generator");
            QVec mu(ng);
            for (size_t k = 0; k < ng; ++k)
                mu[k] = rat_from(nj["multipliers"][k], "strategy multiplier");
            s.multipliers[u] = std::move(mu);
        }
    }
    if (auto e = verify_strategy(m, s)) throw ModelError("json", *e);
    return s;
}

} // namespace arbkit
