#include "arbkit/examples.hpp"

namespace arbkit {

namespace {

MarketModel two_asset(const QMat& pi0, const QMat& pi1) {
    MarketModel m;
    m.d = 2;
    m.T = 1;
    m.bid_ask_form = true;
    m.nodes.push_back(TreeNode{"root", -1, {}, 0, Rat(1)});
    m.cones.push_back(NodeCone{pi0, {}});
    m.nodes.push_back(TreeNode{"leaf", 0, {}, 1, Rat(1)});
    m.cones.push_back(NodeCone{pi1, {}});
    finalize_model(m);
    return m;
}

const Rat A = 5; // prohibitive direct-transfer price between the stocks

// Assemble a 4x4 bid-ask matrix from its first row and first column; the
// remaining entries route through asset 1 (pi^{ij} = pi^{i1} pi^{1j}).
QMat via_first(const QVec& row1, const QVec& col1) {
    HoleMatrix h(4, std::vector<std::optional<Rat>>(4));
    for (size_t k = 0; k < 4; ++k) {
        h[0][k] = row1[k];
        h[k][0] = col1[k];
        h[k][k] = Rat(1);
    }
    return complete_matrix(h, 0);
}

} // namespace

MarketModel example_41() {
    return two_asset({{1, 1}, {2, 1}}, {{1, 1}, {1, 1}});
}

MarketModel example_42() {
    return two_asset({{1, 1}, {2, 1}}, {{1, 2}, {1, 1}});
}

namespace {

MarketModel cascade(int n_max, bool favorable_time1) {
    if (n_max < 1)
        throw std::invalid_argument("cascade truncation needs n_max >= 1");
    MarketModel m;
    m.d = 4;
    m.T = 3;
    m.bid_ask_form = true;
    const Rat half = rat(1, 2);

    const QMat pi0 = via_first({1, 1, 1, 1}, {1, A, A, A});
    const QMat pi1 = favorable_time1 ? via_first({1, A, 1, 1}, {1, A, A, 1})
                                     : via_first({1, A, A, A}, {1, A, A, 1});

    m.nodes.push_back(TreeNode{"root", -1, {}, 0, Rat(1)});
    m.cones.push_back(NodeCone{pi0, {}});
    for (int n = 1; n <= n_max; ++n) {
        const int parent_n = static_cast<int>(m.nodes.size());
        m.nodes.push_back(
            TreeNode{"n" + std::to_string(n), 0, {}, 1, Rat(0)});
        m.cones.push_back(NodeCone{pi1, {}});
        for (int mm = 1; mm <= n_max; ++mm) {
            for (int si = 0; si < 2; ++si) {
                const Rat i = si == 0 ? -half : half;
                const char ci = si == 0 ? '-' : '+';
                // pi^{31} = 1/(1+i), pi^{41} = 1/(1 - i/n)
                const QMat pi2 = via_first(
                    {1, A, A, A},
                    {1, A, 1 / (1 + i), 1 / (1 - i / Rat(n))});
                const int parent_mi = static_cast<int>(m.nodes.size());
                m.nodes.push_back(TreeNode{"n" + std::to_string(n) + "m" +
                                               std::to_string(mm) + "i" + ci,
                                           parent_n, {}, 2, Rat(0)});
                m.cones.push_back(NodeCone{pi2, {}});
                for (int sj = 0; sj < 2; ++sj) {
                    const Rat j = sj == 0 ? -half : half;
                    const char cj = sj == 0 ? '-' : '+';
                    // pi^{21} = 1/(5/4 + j), pi^{31} = (1/(1+i))/(1 - j/m)
                    const QMat pi3 = via_first(
                        {1, A, A, A},
                        {1, 1 / (rat(5, 4) + j),
                         (1 / (1 + i)) * (1 / (1 - j / Rat(mm))), A});
                    m.nodes.push_back(
                        TreeNode{m.nodes[static_cast<size_t>(parent_mi)].id +
                                     "j" + cj,
                                 parent_mi, {}, 3, Rat(0)});
                    m.cones.push_back(NodeCone{pi3, {}});
                }
            }
        }
    }
    finalize_model(m);
    const Rat p = Rat(1) / Rat(m.leaves.size());
    for (int l : m.leaves) m.nodes[static_cast<size_t>(l)].prob = p;
    finalize_model(m);
    return m;
}

} // namespace

MarketModel example_43(int n_max) { return cascade(n_max, false); }

MarketModel example_43_witness(int n_max) { return cascade(n_max, true); }

namespace {

// Decode "(n, m, i, j)" from a cascade leaf id like "n2m1i-j+".
void leaf_params(const std::string& id, int& n, int& mm, Rat& i, Rat& j) {
    const size_t pm = id.find('m');
    const size_t pi_ = id.find('i');
    const size_t pj = id.find('j');
    n = std::stoi(id.substr(1, pm - 1));
    mm = std::stoi(id.substr(pm + 1, pi_ - pm - 1));
    i = id[pi_ + 1] == '-' ? rat(-1, 2) : rat(1, 2);
    j = id[pj + 1] == '-' ? rat(-1, 2) : rat(1, 2);
}

Rat rmin(const Rat& a, const Rat& b) { return a < b ? a : b; }

} // namespace

Strategy example_43_strategy(const MarketModel& m, const Rat& k) {
    if (m.d != 4 || m.T != 3)
        throw std::invalid_argument("strategy is specific to the cascade market");
    Strategy s;
    s.s = 0;
    s.t = 3;
    auto lam_at = [&](int u) -> QMat& {
        auto it = s.orders.find(u);
        if (it == s.orders.end())
            it = s.orders.emplace(u, QMat(4, zeros(4))).first;
        return it->second;
    };
    QMat& l0 = lam_at(0);
    l0[0][1] = 1;     // one share of asset 2 at ask 1
    l0[0][2] = k;     // k of asset 3
    l0[0][3] = k * k; // k^2 of asset 4
    for (size_t u = 1; u < m.nodes.size(); ++u) {
        const TreeNode& node = m.nodes[u];
        if (node.t == 1) {
            const Rat n = Rat(std::stoi(node.id.substr(1)));
            const Rat q = k * k - rmin(k, n) * k;
            if (q != 0) lam_at(static_cast<int>(u))[3][0] = q;
        } else if (node.t == 2) {
            int n, mm;
            Rat i, j;
            leaf_params(node.id + "j+", n, mm, i, j);
            QMat& l = lam_at(static_cast<int>(u));
            l[3][0] = rmin(k, Rat(n)) * k * (1 - i / Rat(n));
            l[2][0] = (k - rmin(Rat(mm) / (1 + i), k)) * (1 + i);
        } else if (node.t == 3) {
            int n, mm;
            Rat i, j;
            leaf_params(node.id, n, mm, i, j);
            QMat& l = lam_at(static_cast<int>(u));
            l[1][0] = rat(5, 4) + j;
            l[2][0] = rmin(Rat(mm) / (1 + i), k) * (1 + i) * (1 - j / Rat(mm));
        }
    }
    return s;
}

Claim example_43_claim(const MarketModel& m, const Rat& k) {
    Claim v = zero_claim(m);
    for (int l : m.leaves) {
        int n, mm;
        Rat i, j;
        leaf_params(m.nodes[static_cast<size_t>(l)].id, n, mm, i, j);
        const Rat val = rat(1, 4) + i * k * (1 - rmin(Rat(n), k) / Rat(n)) +
                        j * (1 - ((1 + i) / Rat(mm)) *
                                     rmin(Rat(mm) / (1 + i), k));
        v.flat[leaf_pos(m, l) * m.d] = val;
    }
    return v;
}

MarketModel build_example(const std::string& name, int n_max) {
    if (name == "ex41") return example_41();
    if (name == "ex42") return example_42();
    if (name == "ex43") return example_43(n_max);
    throw std::invalid_argument("unknown example \"" + name + "\"");
}

void set_geometric_probs(MarketModel& m) {
    const size_t L = m.leaves.size();
    Rat rest = 1;
    for (size_t p = 0; p < L; ++p) {
        const Rat q = p + 1 < L ? rest / 2 : rest;
        m.nodes[static_cast<size_t>(m.leaves[p])].prob = q;
        rest -= q;
    }
    finalize_model(m);
}

} // namespace arbkit
