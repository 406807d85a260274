#include "arbkit/verdicts.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <climits>

namespace arbkit {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void trap(const std::string& what) {
    throw std::runtime_error("verdicts: internal inconsistency: " + what);
}

ojson rat_to_json(const Rat& r) {
    if (denominator(r) == 1) {
        const Int n = numerator(r);
        if (n >= LLONG_MIN && n <= LLONG_MAX)
            return ojson(n.convert_to<long long>());
    }
    return ojson(format_rational(r));
}

void check_lp(const LinearProgram& lp, const LpResult& res,
              const std::string& where) {
    if (res.status != LpStatus::Optimal)
        trap(where + ": normalized cone program must attain its optimum");
    if (auto why = verify_certificate(lp, res)) trap(where + ": " + *why);
}

// d-vector contribution of one attainable-cone generator at its own node
// (the lifted claim is constant across the node's subtree).
QVec node_ray(const MarketModel& m, const AttainableCone& a, size_t g) {
    const int leaf = leaves_under(m, a.refs[g].node).front();
    const size_t base = leaf_pos(m, leaf) * m.d;
    QVec ray(m.d);
    for (size_t i = 0; i < m.d; ++i) ray[i] = a.generators[g][base + i];
    return ray;
}

// Objective c.v restricted to v = (generators)^T mu: one coefficient per mu.
QVec pullback_objective(const QMat& generators, const QVec& c,
                        const Rat& sign, size_t total_vars) {
    QVec obj = zeros(total_vars);
    for (size_t g = 0; g < generators.size(); ++g)
        obj[g] = sign * dot(c, generators[g]);
    return obj;
}

} // namespace

Verdict check_na(const MarketModel& m) {
    Verdict out;
    out.condition = "na";

    const AttainableCone a = build_attainable(m, 0, m.T);
    const size_t g = a.generators.size();
    const size_t n = m.leaves.size() * m.d;

    // max sum(v) over v = gen^T mu >= 0, mu >= 0, sum(mu) <= 1.
    LinearProgram lp(g);
    lp.sense = Sense::Max;
    for (size_t k = 0; k < g; ++k) {
        Rat s = 0;
        for (const Rat& q : a.generators[k]) s += q;
        lp.c[k] = s;
    }
    for (size_t k = 0; k < n; ++k) {
        QVec row(g, Rat(0));
        for (size_t j = 0; j < g; ++j) row[j] = a.generators[j][k];
        lp.add_row(std::move(row), Rel::GE, 0);
    }
    lp.add_row(QVec(g, Rat(1)), Rel::LE, 1);

    const LpResult res = lp_solve(lp);
    check_lp(lp, res, "na");

    if (res.value == 0) {
        out.holds = true;
        out.bound = res.y;
        out.notes = "largest nonnegative attainable claim mass is exactly 0";
        return out;
    }
    out.holds = false;
    Strategy s = strategy_from_weights(m, a, res.x);
    if (auto why = verify_strategy(m, s)) trap("na strategy: " + *why);
    Claim v = strategy_claim(m, s);
    Rat total = 0;
    for (const Rat& q : v.flat) {
        if (q < 0) trap("na claim must be nonnegative");
        total += q;
    }
    if (total != res.value) trap("na claim mass differs from the optimum");
    if (total <= 0) trap("na claim must be nonzero");
    out.claim = std::move(v);
    out.strategy = std::move(s);
    out.notes = "nonzero nonnegative claim attainable from zero endowment";
    return out;
}

Verdict check_nas(const MarketModel& m) {
    Verdict out;
    out.condition = "nas";
    out.holds = true;

    for (int t = 0; t <= m.T; ++t) {
        const AttainableCone a = build_attainable(m, 0, t);
        const size_t g = a.generators.size();
        const std::vector<int> at_t = nodes_at_time(m, t);

        // S' = {v in A_0^t : v measurable at t, node values solvent at t}.
        LinearProgram lp(g);
        lp.sense = Sense::Max;
        std::vector<size_t> base0(at_t.size());
        for (size_t ui = 0; ui < at_t.size(); ++ui) {
            const std::vector<int> ls = leaves_under(m, at_t[ui]);
            base0[ui] = leaf_pos(m, ls[0]) * m.d;
            for (size_t r = 1; r < ls.size(); ++r) {
                const size_t br = leaf_pos(m, ls[r]) * m.d;
                for (size_t i = 0; i < m.d; ++i) {
                    QVec row(g, Rat(0));
                    for (size_t j = 0; j < g; ++j)
                        row[j] = a.generators[j][base0[ui] + i] -
                                 a.generators[j][br + i];
                    lp.add_row(std::move(row), Rel::EQ, 0);
                }
            }
        }
        for (size_t ui = 0; ui < at_t.size(); ++ui) {
            for (const QVec& hr : k_h_rows(m, at_t[ui])) {
                QVec row(g, Rat(0));
                for (size_t j = 0; j < g; ++j) {
                    Rat s = 0;
                    for (size_t i = 0; i < m.d; ++i)
                        if (hr[i] != 0) s += hr[i] * a.generators[j][base0[ui] + i];
                    row[j] = s;
                }
                lp.add_row(std::move(row), Rel::GE, 0);
            }
        }
        lp.add_row(QVec(g, Rat(1)), Rel::LE, 1);

        bool instance_holds = true;
        for (size_t ui = 0; ui < at_t.size() && instance_holds; ++ui) {
            const int u = at_t[ui];
            const SubspaceBasis k0 = k0_basis(m, u);
            const QMat cdirs = orthogonal_complement(k0.basis, m.d);
            for (const QVec& c : cdirs) {
                if (!instance_holds) break;
                for (int sgn : {1, -1}) {
                    for (size_t j = 0; j < g; ++j) {
                        Rat s = 0;
                        for (size_t i = 0; i < m.d; ++i)
                            if (c[i] != 0)
                                s += c[i] * a.generators[j][base0[ui] + i];
                        lp.c[j] = Rat(sgn) * s;
                    }
                    const LpResult res = lp_solve(lp);
                    check_lp(lp, res, "nas");
                    if (res.value == 0) continue;

                    instance_holds = false;
                    if (out.holds) { // first failure carries the certificate
                        out.holds = false;
                        Strategy st = strategy_from_weights(m, a, res.x);
                        if (auto why = verify_strategy(m, st))
                            trap("nas strategy: " + *why);
                        Claim v = strategy_claim(m, st);
                        for (size_t wi = 0; wi < at_t.size(); ++wi) {
                            const std::vector<int> ls = leaves_under(m, at_t[wi]);
                            const size_t b0 = leaf_pos(m, ls[0]) * m.d;
                            for (size_t r = 1; r < ls.size(); ++r) {
                                const size_t br = leaf_pos(m, ls[r]) * m.d;
                                for (size_t i = 0; i < m.d; ++i)
                                    if (v.flat[b0 + i] != v.flat[br + i])
                                        trap("nas claim not measurable");
                            }
                            for (const QVec& hr : k_h_rows(m, at_t[wi])) {
                                Rat s = 0;
                                for (size_t i = 0; i < m.d; ++i)
                                    s += hr[i] * v.flat[b0 + i];
                                if (s < 0) trap("nas claim not solvent");
                            }
                        }
                        QVec vu(m.d);
                        for (size_t i = 0; i < m.d; ++i)
                            vu[i] = v.flat[base0[ui] + i];
                        if (in_span(k0.basis, vu))
                            trap("nas witness lies in the reversible space");
                        out.t = t;
                        out.node = u;
                        out.direction = std::move(vu);
                        out.claim = std::move(v);
                        out.strategy = std::move(st);
                        out.notes =
                            "claim attainable by t and solvent at t is not "
                            "reversible at node " + m.nodes[static_cast<size_t>(u)].id;
                    }
                    break;
                }
            }
        }
        out.instances.emplace_back(t, instance_holds);
    }
    if (out.holds)
        out.notes = "every solvent attainable claim is reversible at every t";
    return out;
}

namespace {

// Shared instance family for naps (right = m) and mixed (right = witness):
//   A_0^t(m) ∩ (−A_t^T(right)) ⊆ A_t^T(right)   for t = 0..T,
// decided via the lineality reformulation; the t = 0 instance holds
// structurally whenever every −K(u) of m is contained in the right market's
// (equal markets, or entrywise dominating prices).
Verdict pair_family(const MarketModel& m, const MarketModel& right,
                    const std::string code) {
    Verdict out;
    out.condition = code;
    out.holds = true;
    const size_t n = m.leaves.size() * m.d;

    out.instances.emplace_back(0, true);

    for (int t = 1; t <= m.T; ++t) {
        const AttainableCone ar = build_attainable(right, t, m.T);
        const SubspaceBasis lin = lineality_attainable(ar);
        const QMat cdirs = orthogonal_complement(lin.basis, n);
        const AttainableCone al = build_attainable(m, 0, t);
        const size_t gl = al.generators.size(), gr = ar.generators.size();

        LinearProgram lp(gl + gr);
        lp.sense = Sense::Max;
        for (size_t k = 0; k < n; ++k) {
            QVec row(gl + gr, Rat(0));
            for (size_t j = 0; j < gl; ++j) row[j] = al.generators[j][k];
            for (size_t j = 0; j < gr; ++j) row[gl + j] = ar.generators[j][k];
            lp.add_row(std::move(row), Rel::EQ, 0);
        }
        {
            QVec cap = zeros(gl + gr);
            for (size_t j = 0; j < gl; ++j) cap[j] = 1;
            lp.add_row(std::move(cap), Rel::LE, 1);
        }

        bool instance_holds = true;
        for (const QVec& c : cdirs) {
            if (!instance_holds) break;
            for (int sgn : {1, -1}) {
                lp.c = pullback_objective(al.generators, c, Rat(sgn), gl + gr);
                const LpResult res = lp_solve(lp);
                check_lp(lp, res, code);
                if (res.value == 0) continue;

                instance_holds = false;
                if (out.holds) {
                    out.holds = false;
                    // Re-exhibit the violation with the earliest trading
                    // horizon: the smallest s with a positive optimum over
                    // A_0^s on the left (s = t always qualifies).
                    for (int s = 0; s <= t; ++s) {
                        const AttainableCone as = build_attainable(m, 0, s);
                        const size_t gs = as.generators.size();
                        LinearProgram ls(gs + gr);
                        ls.sense = Sense::Max;
                        for (size_t k = 0; k < n; ++k) {
                            QVec row(gs + gr, Rat(0));
                            for (size_t j = 0; j < gs; ++j)
                                row[j] = as.generators[j][k];
                            for (size_t j = 0; j < gr; ++j)
                                row[gs + j] = ar.generators[j][k];
                            ls.add_row(std::move(row), Rel::EQ, 0);
                        }
                        QVec cap = zeros(gs + gr);
                        for (size_t j = 0; j < gs; ++j) cap[j] = 1;
                        ls.add_row(std::move(cap), Rel::LE, 1);
                        ls.c = pullback_objective(as.generators, c, Rat(sgn),
                                                  gs + gr);
                        const LpResult rs = lp_solve(ls);
                        check_lp(ls, rs, code + " refinement");
                        if (rs.value == 0) continue;

                        QVec mu(rs.x.begin(),
                                rs.x.begin() + static_cast<long>(gs));
                        QVec nu(rs.x.begin() + static_cast<long>(gs),
                                rs.x.end());
                        Strategy s1 = strategy_from_weights(m, as, mu);
                        if (auto why = verify_strategy(m, s1))
                            trap(code + " left strategy: " + *why);
                        Claim v = strategy_claim(m, s1);
                        Strategy s2 = strategy_from_weights(right, ar, nu);
                        if (auto why = verify_strategy(right, s2))
                            trap(code + " right strategy: " + *why);
                        if (strategy_claim(right, s2).flat != scale(v.flat, -1))
                            trap(code + " strategies disagree on the claim");
                        if (member_attainable(right, ar, v).member)
                            trap(code + " witness is attainable after all");
                        out.t = s;
                        out.claim = std::move(v);
                        out.strategy = std::move(s1);
                        out.strategy2 = std::move(s2);
                        out.notes =
                            "containment fails against the window starting "
                            "at " + std::to_string(t) +
                            "; the position is already created by trading up "
                            "to " + std::to_string(s);
                        break;
                    }
                    if (!out.claim) trap(code + ": refinement found nothing");
                }
                break;
            }
        }
        out.instances.emplace_back(t, instance_holds);
    }
    if (out.holds)
        out.notes = "claims liquidable from any t onward are attainable "
                    "there";
    return out;
}

} // namespace

Verdict check_naps(const MarketModel& m) { return pair_family(m, m, "naps"); }

Verdict check_mixed(const MarketModel& m, const MarketModel& witness) {
    if (!m.bid_ask_form || !witness.bid_ask_form)
        throw std::invalid_argument(
            "mixed condition: both markets need bid-ask quotes");
    if (witness.d != m.d || witness.nodes.size() != m.nodes.size())
        throw std::invalid_argument("mixed condition: tree shapes differ");
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        if (witness.nodes[u].id != m.nodes[u].id ||
            witness.nodes[u].parent != m.nodes[u].parent ||
            witness.nodes[u].t != m.nodes[u].t)
            throw std::invalid_argument("mixed condition: tree shapes differ");
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j)
                if (witness.cones[u].pi[i][j] > m.cones[u].pi[i][j])
                    throw std::invalid_argument(
                        "mixed condition: witness prices must dominate "
                        "(entrywise <=) at node " + m.nodes[u].id);
    }
    return pair_family(m, witness, "mixed");
}

Verdict check_nar(const MarketModel& m) {
    if (!m.bid_ask_form)
        throw std::invalid_argument(
            "robust no-arbitrage is decided via strictly consistent prices "
            "and needs bid-ask quotes");
    Verdict out;
    out.condition = "nar";
    out.cps = find_cps(m, true);
    out.holds = out.cps->found;
    out.notes = out.holds
                    ? "strictly consistent price system found"
                    : (out.cps->infeasible_lp
                           ? "no consistent price system at all"
                           : "consistent prices exist but only on the "
                             "relative boundary (margin 0)");
    return out;
}

Verdict check_nawps(const MarketModel& m) {
    Verdict out;
    out.condition = "nawps";
    out.cps = find_cps(m, false);
    out.holds = out.cps->found;
    if (out.holds) {
        if (m.bid_ask_form) {
            out.witness_model = frictionless_witness(m, out.cps->prices);
            out.notes = "consistent price system found; the induced "
                        "frictionless market realizes the definition";
        } else {
            out.notes = "consistent price system found";
        }
    } else {
        out.notes = "no consistent price system (verified Farkas certificate)";
    }
    return out;
}

Verdict check_ef(const MarketModel& m) {
    Verdict out;
    out.condition = "ef";
    out.holds = true;
    for (size_t u = 0; u < m.nodes.size() ; ++u) {
        bool node_has_pair = false;
        if (m.bid_ask_form) {
            const QMat& pi = m.cones[u].pi;
            for (size_t i = 0; i < m.d; ++i)
                for (size_t j = i + 1; j < m.d; ++j)
                    if (pi[i][j] * pi[j][i] <= 1) {
                        node_has_pair = true;
                        if (out.holds) {
                            out.holds = false;
                            out.node = static_cast<int>(u);
                            out.t = m.nodes[u].t;
                            out.i = i;
                            out.j = j;
                            QVec dir = zeros(m.d);
                            dir[j] = 1;
                            dir[i] = -pi[i][j];
                            if (!in_span(k0_basis(m, static_cast<int>(u)).basis,
                                         dir))
                                trap("ef direction must be reversible");
                            out.direction = std::move(dir);
                            out.notes = "round trip " +
                                        std::to_string(i + 1) + "->" +
                                        std::to_string(j + 1) + "->" +
                                        std::to_string(i + 1) +
                                        " costs nothing at node " +
                                        m.nodes[u].id;
                        }
                    }
        }
        // Cross-check (and the generator-form definition): pointedness of
        // the node's trading cone.
        const SubspaceBasis lin = lineality(neg_solvency_cone(m, static_cast<int>(u)));
        const bool pointed = lin.basis.empty();
        if (m.bid_ask_form) {
            if (pointed == node_has_pair)
                trap("ef product scan disagrees with the lineality test at "
                     "node " + m.nodes[u].id);
        } else if (!pointed && out.holds) {
            out.holds = false;
            out.node = static_cast<int>(u);
            out.t = m.nodes[u].t;
            out.direction = lin.basis[0];
            out.notes = "trading cone has a reversible direction at node " +
                        m.nodes[u].id;
        }
    }
    if (out.holds) out.notes = "every trading cone is pointed";
    return out;
}

Verdict check_penner(const MarketModel& m) {
    Verdict out;
    out.condition = "penner";
    out.holds = true;
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        if (m.nodes[u].children.empty()) continue;
        QMat stacked;
        for (int c : m.nodes[u].children)
            for (QVec& row : orthogonal_complement(k0_basis(m, c).basis, m.d))
                stacked.push_back(std::move(row));
        const QMat meet = stacked.empty()
                              ? orthogonal_complement({}, m.d)
                              : nullspace(stacked);
        const SubspaceBasis k0u = k0_basis(m, static_cast<int>(u));
        for (const QVec& b : meet) {
            if (in_span(k0u.basis, b)) continue;
            out.holds = false;
            out.node = static_cast<int>(u);
            out.t = m.nodes[u].t;
            out.direction = b;
            out.notes = "direction reversible in every successor is not "
                        "reversible at node " + m.nodes[u].id;
            return out;
        }
    }
    out.notes = "reversible directions are inherited along the tree";
    return out;
}

Verdict check_nullspace(const MarketModel& m) {
    Verdict out;
    out.condition = "nullspace";
    out.holds = true;

    const AttainableCone a = build_attainable(m, 0, m.T);
    const size_t g = a.generators.size();
    const size_t n = m.leaves.size() * m.d;

    LinearProgram lp(g);
    lp.sense = Sense::Max;
    for (size_t k = 0; k < n; ++k) {
        QVec row(g, Rat(0));
        for (size_t j = 0; j < g; ++j) row[j] = a.generators[j][k];
        lp.add_row(std::move(row), Rel::EQ, 0);
    }
    lp.add_row(QVec(g, Rat(1)), Rel::LE, 1);

    QMat rays(g);
    for (size_t j = 0; j < g; ++j) rays[j] = node_ray(m, a, j);

    for (size_t u = 0; u < m.nodes.size(); ++u) {
        const SubspaceBasis k0 = k0_basis(m, static_cast<int>(u));
        const QMat cdirs = orthogonal_complement(k0.basis, m.d);
        for (const QVec& c : cdirs) {
            for (int sgn : {1, -1}) {
                for (size_t j = 0; j < g; ++j)
                    lp.c[j] = a.refs[j].node == static_cast<int>(u)
                                  ? Rat(sgn) * dot(c, rays[j])
                                  : Rat(0);
                const LpResult res = lp_solve(lp);
                check_lp(lp, res, "nullspace");
                if (res.value == 0) continue;

                out.holds = false;
                Strategy st = strategy_from_weights(m, a, res.x);
                if (auto why = verify_strategy(m, st))
                    trap("null strategy: " + *why);
                if (!is_zero(strategy_claim(m, st).flat))
                    trap("null strategy must induce the zero claim");
                QVec xi = zeros(m.d);
                for (size_t j = 0; j < g; ++j)
                    if (a.refs[j].node == static_cast<int>(u) && res.x[j] != 0)
                        xi = add(xi, scale(rays[j], res.x[j]));
                if (in_span(k0.basis, xi))
                    trap("nullspace witness lies in the reversible space");
                out.node = static_cast<int>(u);
                out.t = m.nodes[u].t;
                out.direction = std::move(xi);
                out.strategy = std::move(st);
                out.notes = "a zero-sum strategy leaves node " +
                            m.nodes[u].id +
                            " through a non-reversible position";
                return out;
            }
        }
    }
    out.notes = "zero-sum strategies stay reversible node by node";
    return out;
}

namespace {

const Verdict* find_verdict(const Report& r, const std::string& code) {
    for (const Verdict& v : r.verdicts)
        if (v.condition == code && v.applicable) return &v;
    return nullptr;
}

void assert_implies(Report& r, const Verdict* a, const Verdict* b,
                    const std::string& what) {
    if (!a || !b) return;
    if (a->holds && !b->holds) trap(what + " violated");
    r.consistency.push_back(what + ": ok");
}

void assert_equiv(Report& r, const Verdict* a, const Verdict* b,
                  const std::string& what) {
    if (!a || !b) return;
    if (a->holds != b->holds) trap(what + " violated");
    r.consistency.push_back(what + ": ok");
}

} // namespace

Report run_all(const MarketModel& m, const RunOptions& opts) {
    Report rep;
    rep.timing = opts.timing;
    const auto wanted = [&](const char* code) {
        if (opts.conditions.empty())
            return std::string(code) != "mixed" || opts.mixed_witness != nullptr;
        return std::find(opts.conditions.begin(), opts.conditions.end(),
                         code) != opts.conditions.end();
    };
    const auto timed = [&](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v = fn();
        if (opts.timing)
            v.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        rep.verdicts.push_back(std::move(v));
    };

    if (wanted("na")) timed([&] { return check_na(m); });
    if (wanted("nas")) timed([&] { return check_nas(m); });
    if (wanted("naps")) timed([&] { return check_naps(m); });
    if (wanted("nar")) {
        if (m.bid_ask_form) {
            timed([&] { return check_nar(m); });
        } else {
            Verdict v;
            v.condition = "nar";
            v.applicable = false;
            v.notes = "needs bid-ask quotes; skipped on a generator-form "
                      "model";
            rep.verdicts.push_back(std::move(v));
        }
    }
    if (wanted("nawps")) timed([&] { return check_nawps(m); });
    if (wanted("ef")) timed([&] { return check_ef(m); });
    if (wanted("penner")) timed([&] { return check_penner(m); });
    if (wanted("nullspace")) timed([&] { return check_nullspace(m); });
    if (wanted("mixed") && opts.mixed_witness)
        timed([&] { return check_mixed(m, *opts.mixed_witness); });

    const Verdict* na = find_verdict(rep, "na");
    const Verdict* nas = find_verdict(rep, "nas");
    const Verdict* naps = find_verdict(rep, "naps");
    const Verdict* nar = find_verdict(rep, "nar");
    const Verdict* nawps = find_verdict(rep, "nawps");
    const Verdict* ef = find_verdict(rep, "ef");
    const Verdict* nullsp = find_verdict(rep, "nullspace");

    assert_implies(rep, nar, naps, "robust implies prospective strict");
    assert_implies(rep, naps, nawps,
                   "prospective strict implies its weak form");
    assert_implies(rep, nawps, na, "weak prospective strict implies plain");
    assert_equiv(rep, na, nawps,
                 "plain and weak prospective strict coincide on a finite "
                 "tree");
    assert_equiv(rep, nar, nullsp,
                 "robust coincides with the null-strategy condition");
    if (ef && ef->holds)
        assert_equiv(rep, naps, nas,
                     "prospective strict and strict coincide under "
                     "efficient friction");
    return rep;
}

std::string report_to_json(const MarketModel& m, const Report& r) {
    ojson out;
    for (const Verdict& v : r.verdicts) {
        ojson o;
        if (!v.applicable) {
            o["applicable"] = false;
            o["notes"] = v.notes;
            out[v.condition] = std::move(o);
            continue;
        }
        o["holds"] = v.holds;
        if (r.timing && v.micros >= 0)
            o["ms"] = static_cast<double>(v.micros) / 1000.0;

        ojson cert;
        if (v.t >= 0) cert["t"] = v.t;
        if (v.node >= 0)
            cert["node"] = m.nodes[static_cast<size_t>(v.node)].id;
        if (v.condition == "ef" && !v.holds && m.bid_ask_form)
            cert["pair"] = {v.i + 1, v.j + 1};
        if (!v.direction.empty()) {
            ojson dir = ojson::array();
            for (const Rat& q : v.direction) dir.push_back(rat_to_json(q));
            cert["direction"] = std::move(dir);
        }
        if (v.claim)
            cert["claim"] = ojson::parse(claim_to_json(m, *v.claim));
        if (v.strategy)
            cert["strategy"] = ojson::parse(strategy_to_json(m, *v.strategy));
        if (v.strategy2)
            cert["liquidation"] =
                ojson::parse(strategy_to_json(m, *v.strategy2));
        if (!v.bound.empty()) {
            ojson b = ojson::array();
            for (const Rat& q : v.bound) b.push_back(rat_to_json(q));
            cert["bound"] = std::move(b);
        }
        if (v.cps) {
            if (v.cps->found || !v.cps->prices.z.empty())
                cert["prices"] =
                    ojson::parse(price_system_to_json(m, v.cps->prices));
            if (v.cps->strict) cert["margin"] = rat_to_json(v.cps->eps);
            if (!v.cps->found && !v.cps->certificate.empty()) {
                ojson f = ojson::array();
                for (const Rat& q : v.cps->certificate)
                    f.push_back(rat_to_json(q));
                cert[v.cps->strict && !v.cps->infeasible_lp ? "bound"
                                                            : "farkas"] =
                    std::move(f);
            }
        }
        if (v.witness_model)
            cert["witness"] =
                ojson::parse(serialize_model(*v.witness_model));
        if (!cert.empty()) o["certificate"] = std::move(cert);

        if (!v.instances.empty()) {
            ojson inst;
            for (const auto& [t, ok] : v.instances)
                inst[std::to_string(t)] = ok;
            o["instances"] = std::move(inst);
        }
        if (!v.notes.empty()) o["notes"] = v.notes;
        out[v.condition] = std::move(o);
    }
    out["consistency"] = r.consistency;
    return out.dump(2) + "\n";
}

} // namespace arbkit
