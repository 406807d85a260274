#include "arbkit/pricing.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <cstdint>

namespace arbkit {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void trap(const std::string& what) {
    throw std::runtime_error("pricing: internal inconsistency: " + what);
}

ojson rat_to_json(const Rat& r) {
    if (denominator(r) == 1) {
        const Int n = numerator(r);
        if (n >= LLONG_MIN && n <= LLONG_MAX)
            return ojson(n.convert_to<long long>());
    }
    return ojson(format_rational(r));
}

// Column index of leaf block entries in the y-space R^{L*d}.
std::vector<size_t> leaf_block_of(const MarketModel& m) {
    std::vector<size_t> block(m.nodes.size(), SIZE_MAX);
    for (size_t p = 0; p < m.leaves.size(); ++p)
        block[static_cast<size_t>(m.leaves[p])] = p * m.d;
    return block;
}

// Row over y-space applying `row` to Y(u) = sum of leaf blocks below u.
QVec lift_row(const MarketModel& m, const std::vector<size_t>& block, int node,
              const QVec& row) {
    QVec a = zeros(m.leaves.size() * m.d);
    for (int l : leaves_under(m, node)) {
        const size_t base = block[static_cast<size_t>(l)];
        for (size_t i = 0; i < m.d; ++i)
            if (row[i] != 0) a[base + i] = row[i];
    }
    return a;
}

// The consistency system over y: for every node u, Y(u) inside the dual
// solvency cone (one >= 0 row per H-row of K*(u)) and, at the leaves, away
// from zero (coordinate sum >= 1).  Nonzeroness as a linear row is exact
// because terminal dual cones sit inside the nonnegative orthant
// (validation keeps the disposal directions in every terminal cone), so
// every y_l is componentwise nonnegative and a nonzero value has positive
// coordinate sum; one global rescale of a candidate price system clears
// every leaf row.  Interior nodes need no row of their own: Y(u) sums the
// nonnegative leaf blocks below u, so its coordinate sum dominates any
// single leaf's and is >= 1 automatically.
std::vector<LpRow> build_cps_rows(const MarketModel& m) {
    const auto block = leaf_block_of(m);
    std::vector<LpRow> rows;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const ConeH h = dual_cone_h(m, static_cast<int>(u));
        for (const QVec& r : h.rows)
            rows.push_back(
                LpRow{lift_row(m, block, static_cast<int>(u), r), Rel::GE, 0});
        if (m.nodes[u].children.empty()) {
            QVec ones(m.d, Rat(1));
            rows.push_back(LpRow{
                lift_row(m, block, static_cast<int>(u), ones), Rel::GE, 1});
        }
    }
    return rows;
}

// Strict variant: maximize a uniform margin eps over the non-implicit cone
// rows (implicit rows are equalities on the whole dual cone and are pinned
// to zero).  Variables: y free (L*d), then eps in [0, 1].
LinearProgram build_strict_lp(const MarketModel& m) {
    const auto block = leaf_block_of(m);
    const size_t n = m.leaves.size() * m.d;
    LinearProgram lp(n + 1);
    for (size_t j = 0; j < n; ++j) lp.set_free(j);
    lp.hi[n] = Rat(1);
    lp.sense = Sense::Max;
    lp.c[n] = 1;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const ConeH h = dual_cone_h(m, static_cast<int>(u));
        const auto ri = relint_point(h);
        for (size_t k = 0; k < h.rows.size(); ++k) {
            QVec a = lift_row(m, block, static_cast<int>(u), h.rows[k]);
            a.push_back(0);
            if (!ri || ri->implicit[k]) {
                lp.add_row(std::move(a), Rel::EQ, 0);
            } else {
                a[n] = -1;
                lp.add_row(std::move(a), Rel::GE, 0);
            }
        }
        if (m.nodes[u].children.empty()) {
            QVec ones(m.d, Rat(1));
            QVec a = lift_row(m, block, static_cast<int>(u), ones);
            a.push_back(0);
            lp.add_row(std::move(a), Rel::GE, 1);
        }
    }
    return lp;
}

PriceSystem prices_from_y(const MarketModel& m, const QVec& y) {
    const auto block = leaf_block_of(m);
    PriceSystem z;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        QVec acc = zeros(m.d);
        for (int l : leaves_under(m, static_cast<int>(u))) {
            const size_t base = block[static_cast<size_t>(l)];
            for (size_t i = 0; i < m.d; ++i) acc[i] += y[base + i];
        }
        z.z[static_cast<int>(u)] =
            scale(acc, Rat(1) / m.nodes[u].prob); // P(u) > 0 on valid models
    }
    return z;
}

void check_lp(const LinearProgram& lp, const LpResult& res,
              const std::string& where) {
    if (auto why = verify_certificate(lp, res)) trap(where + ": " + *why);
}

} // namespace

CpsSearch find_cps(const MarketModel& m, bool strict) {
    CpsSearch out;
    out.strict = strict;
    const size_t n = m.leaves.size() * m.d;

    if (!strict) {
        // Solve the consistency system {A y >= b} head on: variables are the
        // free terminal blocks, and any feasible point is a price system.
        // When the system has no solution the solver's row multipliers - all
        // <= 0 on >= rows, with y^T A = 0 and y^T b < 0 since the variables
        // are unbounded - negate into the nonnegative combination that
        // certifies infeasibility.
        const std::vector<LpRow> rows = build_cps_rows(m);
        LinearProgram lp(n);
        for (size_t j = 0; j < n; ++j) lp.set_free(j);
        for (const LpRow& r : rows) lp.add_row(QVec(r.a), r.rel, r.b);

        const LpResult res = lp_solve(lp);
        if (res.status == LpStatus::Infeasible) {
            out.found = false;
            out.infeasible_lp = true;
            out.certificate = res.y;
            for (Rat& v : out.certificate) v = -v;
            if (auto why = verify_cps_infeasible(m, out.certificate))
                trap("cps Farkas recheck: " + *why);
            return out;
        }
        if (res.status != LpStatus::Optimal)
            trap("feasibility search cannot be unbounded");
        check_lp(lp, res, "cps system");
        out.found = true;
        out.prices = prices_from_y(m, res.x);
        if (auto why = verify_cps(m, out.prices, false))
            trap("cps recheck: " + *why);
        return out;
    }

    LinearProgram lp = build_strict_lp(m);
    const LpResult res = lp_solve(lp);
    check_lp(lp, res, "strict cps");
    if (res.status == LpStatus::Unbounded) trap("margin is capped at 1");
    if (res.status == LpStatus::Infeasible) {
        out.found = false;
        out.infeasible_lp = true;
        out.certificate = res.y;
        return out;
    }
    out.eps = res.value;
    QVec w(res.x.begin(), res.x.begin() + static_cast<long>(n));
    out.prices = prices_from_y(m, w);
    if (res.value > 0) {
        out.found = true;
        if (auto why = verify_cps(m, out.prices, true))
            trap("strict cps recheck: " + *why);
    } else {
        // No uniform margin: the optimum is still a plain consistent price
        // system, returned as a witness beside the bound certificate.
        out.found = false;
        out.certificate = res.y;
        if (auto why = verify_cps(m, out.prices, false))
            trap("margin-zero witness recheck: " + *why);
        if (auto why = verify_scps_failure(m, out))
            trap("margin-zero bound recheck: " + *why);
    }
    return out;
}

std::optional<std::string> verify_cps(const MarketModel& m,
                                      const PriceSystem& z, bool strict) {
    if (z.z.size() != m.nodes.size()) return "price system must cover every node";
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        auto it = z.z.find(static_cast<int>(u));
        if (it == z.z.end())
            return "missing prices at node " + m.nodes[u].id;
        const QVec& zu = it->second;
        if (zu.size() != m.d)
            return "price dimension mismatch at node " + m.nodes[u].id;
        if (is_zero(zu)) return "zero prices at node " + m.nodes[u].id;

        const ConeH h = dual_cone_h(m, static_cast<int>(u));
        if (!strict) {
            if (!coneh_contains(h, zu))
                return "prices leave the dual cone at node " + m.nodes[u].id;
        } else {
            const auto ri = relint_point(h);
            if (!ri) return "trivial dual cone at node " + m.nodes[u].id;
            for (size_t k = 0; k < h.rows.size(); ++k) {
                const Rat v = dot(h.rows[k], zu);
                if (ri->implicit[k] ? v != 0 : v <= 0)
                    return "prices leave the relative interior at node " +
                           m.nodes[u].id;
            }
        }
    }
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        if (m.nodes[u].children.empty()) continue;
        QVec sum = zeros(m.d);
        for (int c : m.nodes[u].children)
            sum = add(sum, scale(z.z.at(c), m.nodes[static_cast<size_t>(c)].prob));
        if (sum != scale(z.z.at(static_cast<int>(u)), m.nodes[u].prob))
            return "martingale identity fails at node " + m.nodes[u].id;
    }
    return std::nullopt;
}

std::optional<std::string> verify_cps_infeasible(const MarketModel& m,
                                                 const QVec& nu) {
    const std::vector<LpRow> rows = build_cps_rows(m);
    if (nu.size() != rows.size()) return "multiplier count mismatch";
    const size_t n = m.leaves.size() * m.d;
    QVec combo = zeros(n);
    Rat rhs = 0;
    for (size_t r = 0; r < rows.size(); ++r) {
        if (nu[r] < 0) return "negative multiplier";
        if (nu[r] == 0) continue;
        for (size_t j = 0; j < n; ++j)
            if (rows[r].a[j] != 0) combo[j] += nu[r] * rows[r].a[j];
        rhs += nu[r] * rows[r].b;
    }
    if (!is_zero(combo)) return "combination does not vanish";
    if (rhs <= 0) return "combination does not separate";
    return std::nullopt;
}

std::optional<std::string> verify_scps_failure(const MarketModel& m,
                                               const CpsSearch& r) {
    if (r.found) return "nothing to verify: search succeeded";
    const LinearProgram lp = build_strict_lp(m);
    if (r.infeasible_lp) {
        LpResult res;
        res.status = LpStatus::Infeasible;
        res.y = r.certificate;
        return verify_certificate(lp, res);
    }
    const auto bound = dual_bound(lp, r.certificate);
    if (!bound) return "multipliers prove no bound";
    if (*bound != 0) return "bound is not zero";
    if (!r.prices.z.empty())
        if (auto why = verify_cps(m, r.prices, false))
            return "margin-zero witness: " + *why;
    return std::nullopt;
}

PriceBounds cps_uniqueness_bounds(const MarketModel& m, int node,
                                  size_t asset) {
    if (node < 0 || static_cast<size_t>(node) >= m.nodes.size())
        throw std::invalid_argument("cps_uniqueness_bounds: bad node");
    if (asset >= m.d)
        throw std::invalid_argument("cps_uniqueness_bounds: bad asset");

    // Cone and martingale structure only, normalized by Z^1(root) = 1; the
    // away-from-zero constraints are dropped.  Mixing any relaxed point with
    // a genuine consistent price system shows the optimum values are exactly
    // the infimum and supremum over consistent price systems (possibly not
    // attained), so a collapsed interval certifies a unique coordinate.
    const auto block = leaf_block_of(m);
    const size_t n = m.leaves.size() * m.d;
    LinearProgram lp(n);
    for (size_t j = 0; j < n; ++j) lp.set_free(j);
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const ConeH h = dual_cone_h(m, static_cast<int>(u));
        for (const QVec& r : h.rows)
            lp.add_row(lift_row(m, block, static_cast<int>(u), r), Rel::GE, 0);
    }
    QVec e1 = zeros(m.d);
    e1[0] = 1;
    lp.add_row(lift_row(m, block, 0, e1), Rel::EQ, 1);

    QVec ea = zeros(m.d);
    ea[asset] = Rat(1) / m.nodes[static_cast<size_t>(node)].prob;
    lp.c = lift_row(m, block, node, ea);

    PriceBounds out;
    lp.sense = Sense::Min;
    const LpResult lo = lp_solve(lp);
    check_lp(lp, lo, "price lower bound");
    if (lo.status == LpStatus::Infeasible) return out;
    out.feasible = true;
    if (lo.status == LpStatus::Unbounded)
        out.lo_unbounded = true;
    else
        out.lo = lo.value;

    lp.sense = Sense::Max;
    const LpResult hi = lp_solve(lp);
    check_lp(lp, hi, "price upper bound");
    if (hi.status == LpStatus::Infeasible) trap("bound systems disagree");
    if (hi.status == LpStatus::Unbounded)
        out.hi_unbounded = true;
    else
        out.hi = hi.value;
    return out;
}

MarketModel frictionless_witness(const MarketModel& m, const PriceSystem& z) {
    if (!m.bid_ask_form)
        throw std::invalid_argument(
            "frictionless_witness: needs a bid-ask market");
    if (auto why = verify_cps(m, z, false))
        throw std::invalid_argument("frictionless_witness: " + *why);

    MarketModel out = m;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const QVec& zu = z.z.at(static_cast<int>(u));
        for (size_t i = 0; i < m.d; ++i)
            if (zu[i] <= 0) trap("consistent prices must be strictly positive");
        QMat pi(m.d, QVec(m.d, Rat(1)));
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j) {
                pi[i][j] = zu[j] / zu[i];
                if (pi[i][j] > m.cones[u].pi[i][j])
                    trap("induced prices must be dominated by the quoted ones");
            }
        out.cones[u].pi = std::move(pi);
    }
    return out;
}

SuperhedgeResult superhedge(const MarketModel& m, const Claim& v,
                            size_t numeraire) {
    const size_t n = m.leaves.size() * m.d;
    if (numeraire >= m.d)
        throw std::invalid_argument("superhedge: bad numeraire");
    if (v.flat.size() != n)
        throw std::invalid_argument("superhedge: claim dimension mismatch");

    const AttainableCone a = build_attainable(m, 0, m.T);
    const size_t g = a.generators.size();
    QVec e = zeros(m.d);
    e[numeraire] = 1;
    const Claim num = lift(m, 0, e); // nodes[0] is the root

    // min xhat  s.t.  sum_k mu_k gen_k + xhat * num = v,  mu >= 0.
    LinearProgram lp(g + 1);
    lp.sense = Sense::Min;
    lp.set_free(g);
    lp.c[g] = 1;
    for (size_t k = 0; k < n; ++k) {
        QVec row(g + 1, Rat(0));
        for (size_t j = 0; j < g; ++j) row[j] = a.generators[j][k];
        row[g] = num.flat[k];
        lp.add_row(std::move(row), Rel::EQ, v.flat[k]);
    }

    const LpResult res = lp_solve(lp);
    check_lp(lp, res, "superhedge");

    SuperhedgeResult out;
    if (res.status == LpStatus::Unbounded) {
        out.status = SuperhedgeResult::UnboundedBelow;
        out.certificate = res.ray;
    } else if (res.status == LpStatus::Infeasible) {
        out.status = SuperhedgeResult::NotAttainable;
        out.certificate = res.y;
    } else {
        out.status = SuperhedgeResult::Optimal;
        out.price = res.value;
        QVec weights(res.x.begin(), res.x.begin() + static_cast<long>(g));
        out.strategy = strategy_from_weights(m, a, weights);
        out.dual = prices_from_y(m, res.y);
        Rat dv = 0;
        for (size_t p = 0; p < m.leaves.size(); ++p)
            for (size_t i = 0; i < m.d; ++i) dv += res.y[p * m.d + i] * v.flat[p * m.d + i];
        out.dual_value = dv;
    }
    if (auto why = verify_superhedge(m, v, numeraire, out))
        trap("superhedge recheck: " + *why);
    return out;
}

std::optional<std::string> verify_superhedge(const MarketModel& m,
                                             const Claim& v, size_t numeraire,
                                             const SuperhedgeResult& r) {
    const size_t n = m.leaves.size() * m.d;
    if (numeraire >= m.d || v.flat.size() != n) return "malformed inputs";
    QVec e = zeros(m.d);
    e[numeraire] = 1;
    const Claim num = lift(m, 0, e);

    if (r.status == SuperhedgeResult::Optimal) {
        if (auto why = verify_strategy(m, r.strategy)) return why;
        const Claim got = strategy_claim(m, r.strategy);
        const QVec want = sub(v.flat, scale(num.flat, r.price));
        if (got.flat != want)
            return "strategy does not realize claim minus price";

        // Dual prices: consistency with the leaf values, cone membership,
        // unit numeraire at the root, and a zero duality gap.
        if (r.dual.z.size() != m.nodes.size()) return "dual covers wrong nodes";
        for (size_t u = 0; u < m.nodes.size(); ++u) {
            auto it = r.dual.z.find(static_cast<int>(u));
            if (it == r.dual.z.end() || it->second.size() != m.d)
                return "dual prices missing at node " + m.nodes[u].id;
            if (!m.nodes[u].children.empty()) {
                QVec sum = zeros(m.d);
                for (int c : m.nodes[u].children)
                    sum = add(sum,
                              scale(r.dual.z.at(c),
                                    m.nodes[static_cast<size_t>(c)].prob));
                if (sum != scale(it->second, m.nodes[u].prob))
                    return "dual prices are not a martingale at node " +
                           m.nodes[u].id;
            }
            if (!coneh_contains(dual_cone_h(m, static_cast<int>(u)),
                                it->second))
                return "dual prices leave the dual cone at node " +
                       m.nodes[u].id;
        }
        if (r.dual.z.at(0)[numeraire] != 1)
            return "dual numeraire price at the root is not one";
        Rat dv = 0;
        for (size_t p = 0; p < m.leaves.size(); ++p) {
            const int l = m.leaves[p];
            const Rat pl = m.nodes[static_cast<size_t>(l)].prob;
            for (size_t i = 0; i < m.d; ++i)
                dv += pl * r.dual.z.at(l)[i] * v.flat[p * m.d + i];
        }
        if (dv != r.dual_value) return "reported dual value is off";
        if (dv != r.price) return "duality gap is nonzero";
        return std::nullopt;
    }

    const AttainableCone a = build_attainable(m, 0, m.T);
    const size_t g = a.generators.size();

    if (r.status == SuperhedgeResult::UnboundedBelow) {
        // A recession direction of the system with negative numeraire input:
        // attainability then admits arbitrarily negative starting capital.
        if (r.certificate.size() != g + 1) return "ray has wrong dimension";
        for (size_t j = 0; j < g; ++j)
            if (r.certificate[j] < 0) return "ray leaves the weight cone";
        if (r.certificate[g] >= 0) return "ray does not improve";
        QVec acc = scale(num.flat, r.certificate[g]);
        for (size_t j = 0; j < g; ++j)
            if (r.certificate[j] != 0)
                acc = add(acc, scale(a.generators[j], r.certificate[j]));
        if (!is_zero(acc)) return "ray is not a recession direction";
        return std::nullopt;
    }

    // Not attainable: Farkas multipliers over the equality rows.
    LinearProgram lp(g + 1);
    lp.sense = Sense::Min;
    lp.set_free(g);
    lp.c[g] = 1;
    for (size_t k = 0; k < n; ++k) {
        QVec row(g + 1, Rat(0));
        for (size_t j = 0; j < g; ++j) row[j] = a.generators[j][k];
        row[g] = num.flat[k];
        lp.add_row(std::move(row), Rel::EQ, v.flat[k]);
    }
    LpResult res;
    res.status = LpStatus::Infeasible;
    res.y = r.certificate;
    return verify_certificate(lp, res);
}

std::string price_system_to_json(const MarketModel& m, const PriceSystem& z) {
    ojson out;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        auto it = z.z.find(static_cast<int>(u));
        if (it == z.z.end()) continue;
        ojson row = ojson::array();
        for (const Rat& q : it->second) row.push_back(rat_to_json(q));
        out[m.nodes[u].id] = std::move(row);
    }
    return out.dump(2) + "\n";
}

std::string superhedge_to_json(const MarketModel& m,
                               const SuperhedgeResult& r) {
    ojson out;
    switch (r.status) {
    case SuperhedgeResult::Optimal: out["status"] = "optimal"; break;
    case SuperhedgeResult::UnboundedBelow:
        out["status"] = "unbounded-below";
        break;
    case SuperhedgeResult::NotAttainable:
        out["status"] = "not-attainable";
        break;
    }
    if (r.status == SuperhedgeResult::Optimal) {
        out["price"] = rat_to_json(r.price);
        out["strategy"] = ojson::parse(strategy_to_json(m, r.strategy));
        out["dual_prices"] = ojson::parse(price_system_to_json(m, r.dual));
        out["dual_value"] = rat_to_json(r.dual_value);
        out["duality_gap"] = rat_to_json(r.dual_value - r.price);
    } else {
        ojson cert = ojson::array();
        for (const Rat& q : r.certificate) cert.push_back(rat_to_json(q));
        out["certificate"] = std::move(cert);
    }
    return out.dump(2) + "\n";
}

} // namespace arbkit
