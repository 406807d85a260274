#include "arbkit/lp.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace arbkit {

namespace {

// Bounded-variable primal simplex working on the equality form
//   [A | slacks | artificials] x = b,  lo <= x <= hi,
// with a full tableau.  The artificial block of the tableau is B^{-1}, which
// is what makes dual extraction a pure read-off at the end.
struct Simplex {
    enum class St { AtLo, AtHi, Free, Basic };
    enum class Step { Optimal, Unbounded, Phase1Done };

    size_t n = 0, m = 0, N = 0; // structural, rows, total columns
    std::vector<std::optional<Rat>> lob, hib;
    std::vector<Rat> nbval;   // value while nonbasic
    std::vector<St> state;
    QMat T;                   // m x N, equals B^{-1} * [A | S | R]
    QVec xB;                  // values of basic variables, row-aligned
    std::vector<int> basis;   // column basic in each row
    QVec d1, d2;              // reduced-cost rows, phase 1 / phase 2
    std::vector<int> sigma;   // artificial orientation per row
    size_t art0 = 0;          // first artificial column
    long pivots = 0;
    long cap = 0;
    bool bland = false;
    int degen_streak = 0;
    static constexpr int kStallLimit = 30;

    explicit Simplex(const LinearProgram& lp, const QVec& c2) {
        n = lp.n_vars();
        m = lp.rows.size();
        size_t nslack = 0;
        for (const LpRow& r : lp.rows)
            if (r.rel != Rel::EQ) ++nslack;
        art0 = n + nslack;
        N = art0 + m;
        cap = 200 * static_cast<long>(m + N) + 50000;

        lob.assign(N, Rat(0));
        hib.assign(N, std::nullopt);
        for (size_t j = 0; j < n; ++j) {
            lob[j] = lp.lo[j];
            hib[j] = lp.hi[j];
            if (lob[j] && hib[j] && *lob[j] > *hib[j])
                throw std::invalid_argument("lp: variable with lo > hi");
        }

        nbval.assign(N, Rat(0));
        state.assign(N, St::AtLo);
        for (size_t j = 0; j < N; ++j) {
            if (lob[j]) {
                state[j] = St::AtLo;
                nbval[j] = *lob[j];
            } else if (hib[j]) {
                state[j] = St::AtHi;
                nbval[j] = *hib[j];
            } else {
                state[j] = St::Free;
                nbval[j] = 0;
            }
        }

        // Crash basis: an inequality row already satisfied at the initial
        // nonbasic point starts with its slack basic (scaled so the slack's
        // coefficient is +1), which keeps artificials - and the degenerate
        // churn of expelling them - confined to the violated rows.
        T.assign(m, zeros(N));
        xB.assign(m, Rat(0));
        basis.assign(m, 0);
        sigma.assign(m, 1);
        size_t sc = n;
        for (size_t r = 0; r < m; ++r) {
            const LpRow& row = lp.rows[r];
            Rat resid = row.b;
            for (size_t j = 0; j < n; ++j)
                if (row.a[j] != 0 && nbval[j] != 0) resid -= row.a[j] * nbval[j];
            const bool slack_start =
                (row.rel == Rel::LE && resid >= 0) ||
                (row.rel == Rel::GE && resid <= 0);
            sigma[r] = slack_start ? (row.rel == Rel::LE ? 1 : -1)
                                   : (resid >= 0 ? 1 : -1);
            const Rat s(sigma[r]);
            for (size_t j = 0; j < n; ++j)
                if (row.a[j] != 0) T[r][j] = s * row.a[j];
            if (row.rel != Rel::EQ) {
                T[r][sc] = row.rel == Rel::LE ? s : -s;
                if (slack_start) basis[r] = static_cast<int>(sc);
                ++sc;
            }
            T[r][art0 + r] = 1;
            xB[r] = s * resid;
            if (!slack_start) basis[r] = static_cast<int>(art0 + r);
            state[static_cast<size_t>(basis[r])] = St::Basic;
        }

        // Phase-1 objective row z - c for cost -1 on artificial columns and
        // 0 elsewhere; only rows whose artificial is basic carry that cost.
        d1.assign(N, Rat(0));
        for (size_t r = 0; r < m; ++r) {
            if (static_cast<size_t>(basis[r]) < art0) continue;
            for (size_t j = 0; j < N; ++j)
                if (T[r][j] != 0) d1[j] -= T[r][j];
        }
        for (size_t j = art0; j < N; ++j) d1[j] += 1;
        d2.assign(N, Rat(0));
        for (size_t j = 0; j < n; ++j) d2[j] = -c2[j];
    }

    bool fixed(size_t j) const { return lob[j] && hib[j] && *lob[j] == *hib[j]; }

    // Choose an entering column for the active reduced-cost row; returns
    // false at optimality.  dir = +1 increases the variable, -1 decreases.
    bool choose_entering(const QVec& d, size_t& enter, int& dir) const {
        bool found = false;
        Rat best_score = 0;
        for (size_t j = 0; j < N; ++j) {
            if (state[j] == St::Basic || fixed(j)) continue;
            int dj_dir = 0;
            if (state[j] == St::AtLo) {
                if (d[j] < 0) dj_dir = 1;
            } else if (state[j] == St::AtHi) {
                if (d[j] > 0) dj_dir = -1;
            } else { // Free
                if (d[j] != 0) dj_dir = d[j] < 0 ? 1 : -1;
            }
            if (dj_dir == 0) continue;
            if (bland) {
                enter = j;
                dir = dj_dir;
                return true; // smallest index wins
            }
            Rat score = d[j] < 0 ? -d[j] : d[j];
            if (!found || score > best_score) {
                found = true;
                best_score = score;
                enter = j;
                dir = dj_dir;
            }
        }
        return found;
    }

    // Run the simplex loop on the phase's reduced-cost row.  In phase 1 the
    // loop additionally stops as soon as all artificials sit at zero.
    Step iterate(bool phase1) {
        for (;;) {
            if (phase1 && artificial_load() == 0) return Step::Phase1Done;
            size_t enter = 0;
            int dir = 0;
            const QVec& d = phase1 ? d1 : d2;
            if (!choose_entering(d, enter, dir)) return Step::Optimal;

            // Ratio test: the entering variable moves by t*dir, basic row i
            // changes at rate -dir*T[i][enter].
            bool have_row = false;
            size_t lrow = 0;
            Rat best_t = 0;
            for (size_t i = 0; i < m; ++i) {
                const Rat& w = T[i][enter];
                if (w == 0) continue;
                const Rat delta = dir > 0 ? w : -w;
                const size_t bj = static_cast<size_t>(basis[i]);
                Rat t;
                if (delta > 0) {
                    if (!lob[bj]) continue;
                    t = (xB[i] - *lob[bj]) / delta;
                } else {
                    if (!hib[bj]) continue;
                    t = (*hib[bj] - xB[i]) / -delta;
                }
                bool better = !have_row || t < best_t;
                if (!better && t == best_t) {
                    // On ties prefer expelling artificials and slacks
                    // (largest column indices): pinned artificials block
                    // every direction through their row with t = 0, so
                    // kicking them out first defuses degenerate churn.
                    // Bland mode keeps the smallest-index rule its
                    // anti-cycling guarantee needs.
                    better = bland ? basis[i] < basis[lrow]
                                   : basis[i] > basis[lrow];
                }
                if (better) {
                    have_row = true;
                    lrow = i;
                    best_t = t;
                }
            }
            bool have_flip = lob[enter].has_value() && hib[enter].has_value();
            Rat t_flip = have_flip ? *hib[enter] - *lob[enter] : Rat(0);

            if (!have_row && !have_flip) {
                if (phase1)
                    throw std::runtime_error(
                        "lp: phase 1 unbounded (internal error)");
                last_enter = enter;
                last_dir = dir;
                return Step::Unbounded;
            }
            if (++pivots > cap)
                throw std::runtime_error("lp: pivot cap exceeded");

            if (have_flip && (!have_row || t_flip < best_t)) {
                // Bound flip: no basis change, always a strict move.
                for (size_t i = 0; i < m; ++i)
                    if (T[i][enter] != 0)
                        xB[i] -= t_flip * Rat(dir) * T[i][enter];
                state[enter] = state[enter] == St::AtLo ? St::AtHi : St::AtLo;
                nbval[enter] =
                    state[enter] == St::AtLo ? *lob[enter] : *hib[enter];
                degen_streak = 0;
                continue;
            }

            pivot(enter, dir, lrow, best_t);
            if (best_t == 0) {
                if (++degen_streak > kStallLimit) bland = true;
            } else {
                // Bland's rule is only an escape hatch for degenerate
                // stalls; return to the faster rule once the objective
                // actually moves.
                degen_streak = 0;
                bland = false;
            }
        }
    }

    void pivot(size_t enter, int dir, size_t r, const Rat& t) {
        const Rat enter_val = nbval[enter] + Rat(dir) * t;
        for (size_t i = 0; i < m; ++i) {
            if (i == r || T[i][enter] == 0) continue;
            xB[i] -= t * Rat(dir) * T[i][enter];
        }
        const size_t leave = static_cast<size_t>(basis[r]);
        const Rat delta_r = Rat(dir) * T[r][enter];
        if (delta_r > 0) {
            state[leave] = St::AtLo;
            nbval[leave] = *lob[leave];
        } else {
            state[leave] = St::AtHi;
            nbval[leave] = *hib[leave];
        }
        basis[r] = static_cast<int>(enter);
        state[enter] = St::Basic;
        xB[r] = enter_val;

        // Gaussian elimination of the entering column.
        const Rat inv = Rat(1) / T[r][enter];
        std::vector<size_t> nz;
        nz.reserve(64);
        for (size_t j = 0; j < N; ++j) {
            if (T[r][j] == 0) continue;
            T[r][j] *= inv;
            nz.push_back(j);
        }
        auto wipe = [&](QVec& row) {
            const Rat f = row[enter];
            if (f == 0) return;
            for (size_t j : nz) row[j] -= f * T[r][j];
        };
        for (size_t i = 0; i < m; ++i)
            if (i != r) wipe(T[i]);
        wipe(d1);
        wipe(d2);
    }

    Rat artificial_load() const {
        Rat s = 0;
        for (size_t i = 0; i < m; ++i)
            if (static_cast<size_t>(basis[i]) >= art0) s += xB[i];
        return s;
    }

    QVec full_solution() const {
        QVec v(N, Rat(0));
        for (size_t j = 0; j < N; ++j)
            if (state[j] != St::Basic) v[j] = nbval[j];
        for (size_t i = 0; i < m; ++i) v[static_cast<size_t>(basis[i])] = xB[i];
        return v;
    }

    QVec structural(const QVec& full) const {
        return QVec(full.begin(), full.begin() + static_cast<long>(n));
    }

    // Simplex multipliers read off the artificial columns.  In the z - c
    // convention d[art_r] = y_r - c_art always (the artificial's column is
    // e_r in the sigma-scaled system), so the phase-1 row needs its
    // artificial cost of -1 removed; phase 2 prices artificials at 0.
    // sigma unscales back to the original row orientation.
    QVec multipliers(const QVec& d, const Rat& art_cost) const {
        QVec y(m);
        for (size_t r = 0; r < m; ++r)
            y[r] = Rat(sigma[r]) * (d[art0 + r] + art_cost);
        return y;
    }

    size_t last_enter = 0;
    int last_dir = 0;
};

bool trace_enabled(const char** mode) {
    const char* v = std::getenv("ARBKIT_LP_TRACE");
    if (!v || !*v) return false;
    *mode = v;
    return true;
}

} // namespace

LpResult lp_solve(const LinearProgram& lp) {
    const size_t n = lp.n_vars();
    if (lp.lo.size() != n || lp.hi.size() != n)
        throw std::invalid_argument("lp: bound vector size mismatch");
    for (const LpRow& r : lp.rows)
        if (r.a.size() != n)
            throw std::invalid_argument("lp: row width mismatch");

    const char* tmode = nullptr;
    const bool tracing = trace_enabled(&tmode);
    if (tracing && std::string(tmode) == "dump") {
        std::ostringstream os;
        dump_lp(lp, os);
        std::fputs(os.str().c_str(), stderr);
    }

    QVec c2 = lp.c;
    if (lp.sense == Sense::Min)
        for (Rat& v : c2) v = -v;

    Simplex sx(lp, c2);
    LpResult res;

    Simplex::Step s1 = sx.iterate(/*phase1=*/true);
    if (s1 == Simplex::Step::Optimal && sx.artificial_load() != 0) {
        res.status = LpStatus::Infeasible;
        res.y = sx.multipliers(sx.d1, Rat(-1));
        res.pivots = sx.pivots;
        // The phase-1 multipliers are a Farkas certificate by construction;
        // verify, trying the opposite orientation as a safety net.
        if (verify_certificate(lp, res)) {
            for (Rat& v : res.y) v = -v;
            if (auto why = verify_certificate(lp, res))
                throw std::runtime_error("lp: bad Farkas certificate: " + *why);
        }
    } else {
        // Feasible: freeze every artificial at zero and optimize for real.
        for (size_t j = sx.art0; j < sx.N; ++j) {
            sx.lob[j] = Rat(0);
            sx.hib[j] = Rat(0);
        }
        Simplex::Step s2 = sx.iterate(/*phase1=*/false);
        QVec full = sx.full_solution();
        res.x = sx.structural(full);
        res.pivots = sx.pivots;
        if (s2 == Simplex::Step::Unbounded) {
            res.status = LpStatus::Unbounded;
            QVec ray = zeros(sx.N);
            ray[sx.last_enter] = Rat(sx.last_dir);
            for (size_t i = 0; i < sx.m; ++i)
                if (sx.T[i][sx.last_enter] != 0)
                    ray[static_cast<size_t>(sx.basis[i])] =
                        -Rat(sx.last_dir) * sx.T[i][sx.last_enter];
            res.ray = sx.structural(ray);
        } else {
            res.status = LpStatus::Optimal;
            res.value = dot(lp.c, res.x);
            res.y = sx.multipliers(sx.d2, Rat(0));
            if (lp.sense == Sense::Min)
                for (Rat& v : res.y) v = -v;
        }
    }

    if (tracing) {
        const char* st = res.status == LpStatus::Optimal     ? "optimal"
                         : res.status == LpStatus::Infeasible ? "infeasible"
                                                              : "unbounded";
        std::fprintf(stderr, "[lp] rows=%zu vars=%zu status=%s pivots=%ld\n",
                     lp.rows.size(), n, st, res.pivots);
    }
    return res;
}

namespace {

std::optional<std::string> check_feasible(const LinearProgram& lp,
                                          const QVec& x) {
    const size_t n = lp.n_vars();
    if (x.size() != n) return "point has wrong dimension";
    for (size_t j = 0; j < n; ++j) {
        if (lp.lo[j] && x[j] < *lp.lo[j]) return "point below lower bound";
        if (lp.hi[j] && x[j] > *lp.hi[j]) return "point above upper bound";
    }
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        const Rat v = dot(lp.rows[r].a, x);
        const LpRow& row = lp.rows[r];
        if (row.rel == Rel::LE && v > row.b) return "point violates a <= row";
        if (row.rel == Rel::GE && v < row.b) return "point violates a >= row";
        if (row.rel == Rel::EQ && v != row.b) return "point violates a == row";
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> verify_certificate(const LinearProgram& lp,
                                              const LpResult& res) {
    const size_t n = lp.n_vars();
    const size_t m = lp.rows.size();

    if (res.status == LpStatus::Unbounded) {
        if (auto why = check_feasible(lp, res.x)) return why;
        if (res.ray.size() != n) return "ray has wrong dimension";
        if (is_zero(res.ray)) return "ray is zero";
        for (const LpRow& row : lp.rows) {
            const Rat v = dot(row.a, res.ray);
            if (row.rel == Rel::LE && v > 0) return "ray violates a <= row";
            if (row.rel == Rel::GE && v < 0) return "ray violates a >= row";
            if (row.rel == Rel::EQ && v != 0) return "ray violates a == row";
        }
        for (size_t j = 0; j < n; ++j) {
            if (res.ray[j] > 0 && lp.hi[j]) return "ray blocked by upper bound";
            if (res.ray[j] < 0 && lp.lo[j]) return "ray blocked by lower bound";
        }
        const Rat impr = dot(lp.c, res.ray);
        if (lp.sense == Sense::Max ? impr <= 0 : impr >= 0)
            return "ray does not improve the objective";
        return std::nullopt;
    }

    if (res.status == LpStatus::Infeasible) {
        if (res.y.size() != m) return "Farkas vector has wrong dimension";
        for (size_t r = 0; r < m; ++r) {
            if (lp.rows[r].rel == Rel::LE && res.y[r] < 0)
                return "Farkas sign wrong on a <= row";
            if (lp.rows[r].rel == Rel::GE && res.y[r] > 0)
                return "Farkas sign wrong on a >= row";
        }
        // min over the variable box of (y^T A) x must exceed y^T b.
        Rat gamma = 0;
        for (size_t r = 0; r < m; ++r)
            if (res.y[r] != 0) gamma += res.y[r] * lp.rows[r].b;
        Rat lowest = 0;
        for (size_t j = 0; j < n; ++j) {
            Rat g = 0;
            for (size_t r = 0; r < m; ++r)
                if (res.y[r] != 0 && lp.rows[r].a[j] != 0)
                    g += res.y[r] * lp.rows[r].a[j];
            if (g > 0) {
                if (!lp.lo[j]) return "Farkas combination unbounded below";
                lowest += g * *lp.lo[j];
            } else if (g < 0) {
                if (!lp.hi[j]) return "Farkas combination unbounded below";
                lowest += g * *lp.hi[j];
            }
        }
        if (lowest <= gamma) return "Farkas combination does not separate";
        return std::nullopt;
    }

    // Optimal: verify primal feasibility, dual sign/complementarity, and the
    // exact primal == dual objective identity (which proves optimality).
    if (auto why = check_feasible(lp, res.x)) return why;
    if (res.y.size() != m) return "dual vector has wrong dimension";
    if (res.value != dot(lp.c, res.x)) return "reported value != c.x";

    // Canonicalize to Max sense.
    QVec cc = lp.c, yy = res.y;
    if (lp.sense == Sense::Min) {
        for (Rat& v : cc) v = -v;
        for (Rat& v : yy) v = -v;
    }
    for (size_t r = 0; r < m; ++r) {
        const LpRow& row = lp.rows[r];
        if (row.rel == Rel::LE && yy[r] < 0) return "dual sign wrong on <=";
        if (row.rel == Rel::GE && yy[r] > 0) return "dual sign wrong on >=";
        if (yy[r] != 0 && row.rel != Rel::EQ && dot(row.a, res.x) != row.b)
            return "nonzero dual on a slack row";
    }
    Rat dual_obj = 0;
    for (size_t r = 0; r < m; ++r)
        if (yy[r] != 0) dual_obj += yy[r] * lp.rows[r].b;
    for (size_t j = 0; j < n; ++j) {
        Rat g = -cc[j];
        for (size_t r = 0; r < m; ++r)
            if (yy[r] != 0 && lp.rows[r].a[j] != 0)
                g += yy[r] * lp.rows[r].a[j];
        if (g > 0) {
            if (!lp.lo[j]) return "reduced cost positive on var without lo";
            if (res.x[j] != *lp.lo[j])
                return "positive reduced cost but x not at lower bound";
            dual_obj -= g * *lp.lo[j];
        } else if (g < 0) {
            if (!lp.hi[j]) return "reduced cost negative on var without hi";
            if (res.x[j] != *lp.hi[j])
                return "negative reduced cost but x not at upper bound";
            dual_obj -= g * *lp.hi[j];
        }
    }
    const Rat primal_obj = dot(cc, res.x);
    if (primal_obj != dual_obj) return "primal and dual objectives differ";
    return std::nullopt;
}

std::optional<Rat> dual_bound(const LinearProgram& lp, const QVec& y) {
    if (y.size() != lp.rows.size()) return std::nullopt;
    // Canonicalize to Max: a Min certificate is a Max certificate for (-c, -y).
    const Rat sgn = lp.sense == Sense::Max ? 1 : -1;
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        const Rat yr = sgn * y[r];
        if (lp.rows[r].rel == Rel::LE && yr < 0) return std::nullopt;
        if (lp.rows[r].rel == Rel::GE && yr > 0) return std::nullopt;
    }
    const size_t n = lp.n_vars();
    Rat bound = 0;
    for (size_t r = 0; r < lp.rows.size(); ++r)
        bound += sgn * y[r] * lp.rows[r].b;
    for (size_t j = 0; j < n; ++j) {
        Rat g = -sgn * lp.c[j];
        for (size_t r = 0; r < lp.rows.size(); ++r)
            if (lp.rows[r].a[j] != 0) g += sgn * y[r] * lp.rows[r].a[j];
        if (g > 0) {
            if (!lp.lo[j]) return std::nullopt; // inf over the box is -infinity
            bound -= g * *lp.lo[j];
        } else if (g < 0) {
            if (!lp.hi[j]) return std::nullopt;
            bound -= g * *lp.hi[j];
        }
    }
    return sgn * bound;
}

void dump_lp(const LinearProgram& lp, std::ostream& os) {
    os << (lp.sense == Sense::Max ? "max" : "min") << " "
       << format_vector(lp.c) << "\n";
    for (const LpRow& row : lp.rows) {
        os << "  " << format_vector(row.a)
           << (row.rel == Rel::LE ? " <= " : row.rel == Rel::GE ? " >= " : " == ")
           << format_rational(row.b) << "\n";
    }
    os << "  bounds:";
    for (size_t j = 0; j < lp.n_vars(); ++j) {
        os << " [" << (lp.lo[j] ? format_rational(*lp.lo[j]) : "-inf") << ","
           << (lp.hi[j] ? format_rational(*lp.hi[j]) : "inf") << "]";
    }
    os << "\n";
}

} // namespace arbkit
