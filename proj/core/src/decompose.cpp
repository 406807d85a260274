#include "arbkit/decompose.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>

namespace arbkit {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void trap(const std::string& what) {
    throw std::runtime_error("decompose: internal inconsistency: " + what);
}

ojson rat_to_json(const Rat& r) {
    if (denominator(r) == 1) {
        const Int n = numerator(r);
        if (n >= LLONG_MIN && n <= LLONG_MAX)
            return ojson(n.convert_to<long long>());
    }
    return ojson(format_rational(r));
}

void validate_order(const MarketModel& m, const OrderMatrix& lambda) {
    if (lambda.size() != m.d)
        throw std::invalid_argument("order matrix must be d x d");
    for (size_t i = 0; i < m.d; ++i) {
        if (lambda[i].size() != m.d)
            throw std::invalid_argument("order matrix must be d x d");
        if (lambda[i][i] != 0)
            throw std::invalid_argument("order matrix diagonal must be zero");
        for (size_t j = 0; j < m.d; ++j)
            if (lambda[i][j] < 0)
                throw std::invalid_argument(
                    "order matrix entries must be nonnegative");
    }
}

int node_time_checked(const MarketModel& m, int node) {
    if (node < 0 || static_cast<size_t>(node) >= m.nodes.size())
        throw std::invalid_argument("no such node");
    const int t = m.nodes[static_cast<size_t>(node)].t;
    if (t >= m.T)
        throw std::invalid_argument(
            "orders at the final time have no later window to unwind in");
    return t;
}

// Row-major list of off-diagonal index pairs; the projection works on this
// flattening of the order matrix.
std::vector<std::pair<size_t, size_t>> offdiag_pairs(size_t d) {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (i != j) out.emplace_back(i, j);
    return out;
}

QVec flatten_order(const OrderMatrix& a,
                   const std::vector<std::pair<size_t, size_t>>& pairs) {
    QVec out(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k)
        out[k] = a[pairs[k].first][pairs[k].second];
    return out;
}

OrderMatrix unflatten_order(size_t d, const QVec& x,
                            const std::vector<std::pair<size_t, size_t>>& pairs) {
    OrderMatrix a(d, QVec(d, Rat(0)));
    for (size_t k = 0; k < pairs.size(); ++k)
        a[pairs[k].first][pairs[k].second] = x[k];
    return a;
}

// Claim that closes out the position created by executing the order: the
// negative of the order's result, spread over the node's subtree.
QVec close_out_target(const MarketModel& m, int node, const OrderMatrix& a) {
    return scale(lift(m, node, order_result(m, node, a, {})).flat, Rat(-1));
}

struct QpSolution {
    QVec x;
    QMat active_rows;
    QVec active_rhs;
    QVec nu;
};

// Exact Euclidean projection of lam onto {x : rows[i].x <= rhs[i]} by
// active-set enumeration in increasing size order (deterministic
// lexicographic tie-breaking).  The feasible set is a nonempty polytope
// (the caller always includes the box 0 <= x <= lam), so a minimizer
// exists, and at the minimizer the gradient lies in the cone of at most
// dim(x) linearly independent active rows; that active set's KKT system is
// nonsingular, so the sweep below finds a verified optimum.
QpSolution project_polytope(const QVec& lam, const QMat& rows,
                            const QVec& rhs) {
    const size_t dim = lam.size();
    const size_t r = rows.size();

    for (size_t s = 0; s <= std::min(dim, r); ++s) {
        std::vector<size_t> idx(s);
        for (size_t k = 0; k < s; ++k) idx[k] = k;
        while (true) {
            // KKT system on the candidate face: stationarity plus tightness.
            const size_t nn = dim + s;
            QMat sys(nn, QVec(nn, Rat(0)));
            QVec b(nn, Rat(0));
            for (size_t k = 0; k < dim; ++k) {
                sys[k][k] = 2;
                b[k] = 2 * lam[k];
            }
            for (size_t a = 0; a < s; ++a) {
                for (size_t k = 0; k < dim; ++k) {
                    sys[k][dim + a] = rows[idx[a]][k];
                    sys[dim + a][k] = rows[idx[a]][k];
                }
                b[dim + a] = rhs[idx[a]];
            }
            if (auto sol = solve(sys, b)) {
                QVec x(sol->begin(), sol->begin() + static_cast<long>(dim));
                QVec nu(sol->begin() + static_cast<long>(dim), sol->end());
                bool ok = std::all_of(nu.begin(), nu.end(),
                                      [](const Rat& q) { return q >= 0; });
                for (size_t i = 0; ok && i < r; ++i)
                    if (dot(rows[i], x) > rhs[i]) ok = false;
                if (ok) {
                    QpSolution out;
                    out.x = std::move(x);
                    out.nu = std::move(nu);
                    for (size_t a = 0; a < s; ++a) {
                        out.active_rows.push_back(rows[idx[a]]);
                        out.active_rhs.push_back(rhs[idx[a]]);
                    }
                    return out;
                }
            }
            // next combination
            size_t k = s;
            while (k > 0 && idx[k - 1] == r - s + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    trap("projection active-set sweep exhausted without a KKT point");
}

} // namespace

bool reversible_cone_test(const MarketModel& m, int node,
                          const OrderMatrix& lambda) {
    validate_order(m, lambda);
    const int t = node_time_checked(m, node);
    const AttainableCone a = build_attainable_subtree(m, t + 1, m.T, node);
    return member_attainable(m, a, Claim{close_out_target(m, node, lambda)})
        .member;
}

Decomposition decompose_order(const MarketModel& m, int node,
                              const OrderMatrix& lambda) {
    validate_order(m, lambda);
    const int t = node_time_checked(m, node);
    const auto pairs = offdiag_pairs(m.d);
    const size_t dim = pairs.size();
    const QVec lam = flatten_order(lambda, pairs);

    const AttainableCone a = build_attainable_subtree(m, t + 1, m.T, node);

    // Close-out claim of each unit order; targets are linear in the order.
    QMat unit_targets(dim);
    for (size_t k = 0; k < dim; ++k) {
        OrderMatrix e(m.d, QVec(m.d, Rat(0)));
        e[pairs[k].first][pairs[k].second] = 1;
        unit_targets[k] = close_out_target(m, node, e);
    }

    // Outer approximation of {0 <= x <= lam} ∩ {reversible}: box rows plus
    // cutting planes from infeasibility certificates.
    QMat rows;
    QVec rhs;
    for (size_t k = 0; k < dim; ++k) {
        QVec hi = zeros(dim), lo = zeros(dim);
        hi[k] = 1;
        lo[k] = -1;
        rows.push_back(std::move(hi));
        rhs.push_back(lam[k]);
        rows.push_back(std::move(lo));
        rhs.push_back(0);
    }

    std::vector<ReversibleCut> cuts;
    for (int round = 0; round < 200; ++round) {
        QpSolution qp = project_polytope(lam, rows, rhs);
        const OrderMatrix p = unflatten_order(m.d, qp.x, pairs);
        const QVec target = close_out_target(m, node, p);
        MemberResult mr = member_attainable(m, a, Claim{target});
        if (!mr.member) {
            // farkas y has y.g >= 0 on all generators and y.target < 0, so
            // c.x <= 0 with c_k = -y.(unit target k) holds on the whole
            // reversible cone and cuts off the candidate.
            const QVec& y = mr.farkas;
            for (const QVec& g : a.generators)
                if (dot(y, g) < 0)
                    trap("cut certificate is negative on a generator");
            QVec c(dim);
            for (size_t k = 0; k < dim; ++k)
                c[k] = -dot(y, unit_targets[k]);
            if (dot(c, qp.x) <= 0)
                trap("cut fails to separate the candidate");
            rows.push_back(c);
            rhs.push_back(0);
            cuts.push_back(ReversibleCut{std::move(c), y});
            continue;
        }

        // Candidate is feasible for the true problem and optimal for a
        // relaxation of it, hence optimal.  Re-verify everything.
        Decomposition out;
        out.node = node;
        out.reversible = p;
        out.pure = OrderMatrix(m.d, QVec(m.d, Rat(0)));
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j) {
                out.pure[i][j] = lambda[i][j] - p[i][j];
                if (p[i][j] < 0 || out.pure[i][j] < 0)
                    trap("projection left the box");
            }
        out.kkt.active_rows = std::move(qp.active_rows);
        out.kkt.active_rhs = std::move(qp.active_rhs);
        out.kkt.multipliers = std::move(qp.nu);
        out.kkt.cuts = std::move(cuts);
        out.liquidation = std::move(mr.strategy);

        QVec grad = zeros(dim);
        for (size_t k = 0; k < dim; ++k) grad[k] = 2 * (qp.x[k] - lam[k]);
        for (size_t i = 0; i < out.kkt.active_rows.size(); ++i) {
            if (out.kkt.multipliers[i] < 0) trap("negative KKT multiplier");
            if (dot(out.kkt.active_rows[i], qp.x) != out.kkt.active_rhs[i])
                trap("KKT active row is not tight");
            grad = add(grad, scale(out.kkt.active_rows[i],
                                   out.kkt.multipliers[i]));
        }
        if (!is_zero(grad)) trap("KKT stationarity fails");
        if (auto why = verify_strategy(m, out.liquidation))
            trap("liquidation strategy: " + *why);
        if (strategy_claim(m, out.liquidation).flat != target)
            trap("liquidation strategy misses the close-out claim");
        return out;
    }
    trap("cutting-plane loop did not converge");
}

DecompositionLaws check_decomposition_laws(const MarketModel& m, int node,
                                           const OrderMatrix& lambda,
                                           const Rat& mu) {
    if (mu < 0)
        throw std::invalid_argument("homogeneity scalar must be nonnegative");
    DecompositionLaws out;
    const Decomposition base = decompose_order(m, node, lambda);

    OrderMatrix scaled(m.d, QVec(m.d, Rat(0)));
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j) scaled[i][j] = mu * lambda[i][j];
    const Decomposition ds = decompose_order(m, node, scaled);
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j)
            if (ds.reversible[i][j] != mu * base.reversible[i][j])
                trap("homogeneity law fails");
    out.homogeneity = true;

    const Decomposition dq = decompose_order(m, node, base.pure);
    for (size_t i = 0; i < m.d; ++i)
        for (size_t j = 0; j < m.d; ++j) {
            if (dq.reversible[i][j] != 0) trap("pure part is not pure");
            if (dq.pure[i][j] != base.pure[i][j])
                trap("pure part not reproduced");
        }
    out.idempotence = true;

    if (reversible_cone_test(m, node, lambda) && base.pure == lambda) {
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j)
                if (lambda[i][j] != 0)
                    trap("reversible order equal to its pure part");
    }
    out.joint_triviality = true;
    return out;
}

std::string decomposition_to_json(const MarketModel& m,
                                  const Decomposition& dec) {
    const auto mat = [&](const OrderMatrix& a) {
        ojson rows = ojson::array();
        for (const QVec& r : a) {
            ojson row = ojson::array();
            for (const Rat& q : r) row.push_back(rat_to_json(q));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    const auto vec = [&](const QVec& v) {
        ojson row = ojson::array();
        for (const Rat& q : v) row.push_back(rat_to_json(q));
        return row;
    };
    ojson out;
    out["node"] = m.nodes[static_cast<size_t>(dec.node)].id;
    out["reversible"] = mat(dec.reversible);
    out["pure"] = mat(dec.pure);
    Rat resid = 0;
    for (const QVec& r : dec.pure)
        for (const Rat& q : r) resid += q * q;
    out["residual_norm_sq"] = rat_to_json(resid);
    ojson kkt;
    ojson act = ojson::array();
    for (const QVec& r : dec.kkt.active_rows) act.push_back(vec(r));
    kkt["active_rows"] = std::move(act);
    kkt["active_rhs"] = vec(dec.kkt.active_rhs);
    kkt["multipliers"] = vec(dec.kkt.multipliers);
    ojson cj = ojson::array();
    for (const ReversibleCut& c : dec.kkt.cuts) {
        ojson one;
        one["row"] = vec(c.row);
        one["certificate"] = vec(c.farkas);
        cj.push_back(std::move(one));
    }
    kkt["cuts"] = std::move(cj);
    out["kkt"] = std::move(kkt);
    out["liquidation"] = ojson::parse(strategy_to_json(m, dec.liquidation));
    return out.dump(2) + "\n";
}

} // namespace arbkit
