#include "arbkit/cones.hpp"

#include <stdexcept>

namespace arbkit {

namespace {

constexpr size_t kMaxDdDim = 8;

void guard_dim(size_t dim) {
    if (dim > kMaxDdDim)
        throw std::invalid_argument(
            "double description restricted to dimension <= 8");
}

QMat identity(size_t d) {
    QMat id;
    for (size_t i = 0; i < d; ++i) {
        QVec e = zeros(d);
        e[i] = 1;
        id.push_back(std::move(e));
    }
    return id;
}

struct DdPair {
    QMat L; // lineality basis
    QMat R; // extreme rays of the pointed part
};

// Incremental double description: maintain (L, R) for the intersection of
// the processed halfspaces, inserting one row at a time.
DdPair dd_core(const QMat& rows, size_t dim) {
    QMat L = identity(dim);
    QMat R;
    QMat processed;
    std::vector<std::vector<char>> act; // per ray, aligned with `processed`

    // Extreme rays p, q are adjacent iff their common active rows have rank
    // dim - |L| - 2 (they then span a 2-face together with the lineality).
    auto adjacent = [&](size_t p, size_t q) {
        QMat common;
        for (size_t k = 0; k < processed.size(); ++k)
            if (act[p][k] && act[q][k]) common.push_back(processed[k]);
        const long want =
            static_cast<long>(dim) - static_cast<long>(L.size()) - 2;
        return want >= 0 && rank(std::move(common)) == want;
    };

    for (const QVec& a : rows) {
        if (is_zero(a)) continue;
        size_t i0 = L.size();
        for (size_t i = 0; i < L.size(); ++i)
            if (dot(a, L[i]) != 0) {
                i0 = i;
                break;
            }
        if (i0 < L.size()) {
            // The row cuts the lineality space: project everything onto its
            // kernel along l0 and keep l0 itself as a one-sided ray.
            QVec l0 = L[i0];
            Rat al0 = dot(a, l0);
            if (al0 < 0) {
                l0 = scale(l0, Rat(-1));
                al0 = -al0;
            }
            QMat newL;
            for (size_t i = 0; i < L.size(); ++i) {
                if (i == i0) continue;
                const Rat f = dot(a, L[i]) / al0;
                newL.push_back(canonical_ray(sub(L[i], scale(l0, f)), true));
            }
            L = std::move(newL);
            for (QVec& r : R) {
                const Rat f = dot(a, r) / al0;
                if (f != 0) r = canonical_ray(sub(r, scale(l0, f)));
            }
            // l0 lay in the lineality space, so every processed row is
            // active at it; the current row is not.
            R.push_back(canonical_ray(l0));
            act.push_back(std::vector<char>(processed.size(), 1));
            processed.push_back(a);
            for (size_t i = 0; i < R.size(); ++i)
                act[i].push_back(dot(a, R[i]) == 0 ? 1 : 0);
            continue;
        }

        // The lineality space lies in the row's kernel: classic split step.
        std::vector<Rat> s(R.size());
        std::vector<size_t> pos, neg;
        for (size_t i = 0; i < R.size(); ++i) {
            s[i] = dot(a, R[i]);
            if (s[i] > 0) pos.push_back(i);
            if (s[i] < 0) neg.push_back(i);
        }
        if (neg.empty()) {
            processed.push_back(a);
            for (size_t i = 0; i < R.size(); ++i)
                act[i].push_back(s[i] == 0 ? 1 : 0);
            continue;
        }
        QMat newR;
        std::vector<std::vector<char>> newact;
        for (size_t i = 0; i < R.size(); ++i) {
            if (s[i] < 0) continue;
            newR.push_back(R[i]);
            std::vector<char> na = act[i];
            na.push_back(s[i] == 0 ? 1 : 0);
            newact.push_back(std::move(na));
        }
        for (size_t p : pos) {
            for (size_t q : neg) {
                if (!adjacent(p, q)) continue;
                QVec w =
                    canonical_ray(sub(scale(R[q], s[p]), scale(R[p], s[q])));
                bool dup = false;
                for (const QVec& r : newR)
                    if (r == w) {
                        dup = true;
                        break;
                    }
                if (dup) continue;
                std::vector<char> na(processed.size() + 1);
                for (size_t k = 0; k < processed.size(); ++k)
                    na[k] = act[p][k] && act[q][k];
                na[processed.size()] = 1;
                newR.push_back(std::move(w));
                newact.push_back(std::move(na));
            }
        }
        processed.push_back(a);
        R = std::move(newR);
        act = std::move(newact);
    }
    return DdPair{std::move(L), std::move(R)};
}

QMat pair_to_rays(DdPair&& p) {
    QMat rays = std::move(p.R);
    for (QVec& l : p.L) {
        rays.push_back(l);
        rays.push_back(scale(rays.back(), Rat(-1)));
    }
    return rays;
}

} // namespace

ConeV dd_h_to_v(const ConeH& h) {
    guard_dim(h.dim);
    return ConeV{h.dim, pair_to_rays(dd_core(h.rows, h.dim))};
}

ConeH dd_v_to_h(const ConeV& v) {
    guard_dim(v.dim);
    // The dual cone {y : r.y >= 0 for every ray} in H-form is exactly the
    // ray list; convert it to V-form and read facet rows back off.
    return ConeH{v.dim, pair_to_rays(dd_core(v.rays, v.dim))};
}

bool coneh_contains(const ConeH& h, const QVec& x) {
    for (const QVec& r : h.rows)
        if (dot(r, x) < 0) return false;
    return true;
}

bool conev_contains(const ConeV& v, const QVec& x) {
    const size_t nr = v.rays.size();
    LinearProgram lp(nr);
    for (size_t k = 0; k < v.dim; ++k) {
        QVec a(nr);
        for (size_t j = 0; j < nr; ++j) a[j] = v.rays[j][k];
        lp.add_row(std::move(a), Rel::EQ, x[k]);
    }
    return lp_solve(lp).status == LpStatus::Optimal;
}

SubspaceBasis lineality(const ConeV& v) {
    return SubspaceBasis{v.dim, generator_lineality(v.rays).basis};
}

GeneratorLineality generator_lineality(const QMat& gens) {
    GeneratorLineality out;
    const size_t g = gens.size();
    out.good.assign(g, 0);
    if (g == 0) return out;
    const size_t dim = gens[0].size();

    LinearProgram lp(2 * g);
    for (size_t i = 0; i < g; ++i) {
        lp.c[i] = 1;
        lp.hi[i] = Rat(1);
    }
    for (size_t k = 0; k < dim; ++k) {
        QVec a(2 * g, Rat(0));
        for (size_t i = 0; i < g; ++i) {
            a[i] = gens[i][k];
            a[g + i] = gens[i][k];
        }
        lp.add_row(std::move(a), Rel::EQ, Rat(0));
    }
    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("generator_lineality: LP not optimal");
    QMat good_gens;
    out.combo.assign(g, Rat(0));
    for (size_t i = 0; i < g; ++i) {
        const Rat& si = res.x[i];
        if (si != 0 && si != 1)
            throw std::runtime_error(
                "generator_lineality: fractional sigma (internal error)");
        out.combo[i] = si + res.x[g + i];
        if (si == 1) {
            out.good[i] = 1;
            good_gens.push_back(gens[i]);
        }
    }
    out.basis = row_basis(good_gens);
    return out;
}

std::vector<char> reversible_via_single_lps(const QMat& gens) {
    std::vector<char> good(gens.size(), 0);
    if (gens.empty()) return good;
    ConeV cone{gens[0].size(), gens};
    for (size_t i = 0; i < gens.size(); ++i)
        good[i] = conev_contains(cone, scale(gens[i], Rat(-1))) ? 1 : 0;
    return good;
}

std::optional<RelintInfo> relint_point(const ConeH& h) {
    const size_t dim = h.dim;
    const size_t m = h.rows.size();
    std::vector<char> resolved(m, 0); // known non-implicit
    std::vector<size_t> open(m);
    for (size_t k = 0; k < m; ++k) open[k] = k;
    QVec point = zeros(dim);
    bool any_round = false;

    while (!open.empty()) {
        // Variables: x (free), then one capped slack per still-open row.
        const size_t ns = open.size();
        LinearProgram lp(dim + ns);
        for (size_t j = 0; j < dim; ++j) lp.set_free(j);
        for (size_t t = 0; t < ns; ++t) {
            lp.c[dim + t] = 1;
            lp.hi[dim + t] = Rat(1);
        }
        for (size_t k = 0; k < m; ++k) {
            QVec a(dim + ns, Rat(0));
            for (size_t j = 0; j < dim; ++j) a[j] = h.rows[k][j];
            for (size_t t = 0; t < ns; ++t)
                if (open[t] == k) a[dim + t] = -1;
            lp.add_row(std::move(a), Rel::GE, Rat(0));
        }
        LpResult res = lp_solve(lp);
        if (res.status != LpStatus::Optimal)
            throw std::runtime_error("relint_point: LP not optimal");
        if (res.value == 0) break; // every remaining row is implicit
        any_round = true;
        point = add(point, QVec(res.x.begin(),
                                res.x.begin() + static_cast<long>(dim)));
        std::vector<size_t> still;
        for (size_t t = 0; t < ns; ++t) {
            if (res.x[dim + t] > 0)
                resolved[open[t]] = 1;
            else
                still.push_back(open[t]);
        }
        still.swap(open);
    }

    RelintInfo out;
    out.implicit.assign(m, 0);
    for (size_t k = 0; k < m; ++k) out.implicit[k] = resolved[k] ? 0 : 1;

    if (!any_round) {
        // All rows implicit: the cone is the row kernel, a subspace.  Any
        // kernel vector is relatively interior; {0} has no point to offer.
        QMat kernel = h.rows.empty() ? identity(dim) : nullspace(h.rows);
        if (kernel.empty()) return std::nullopt;
        out.point = canonical_ray(kernel[0], true);
        return out;
    }

    out.point = canonical_ray(point);
    for (size_t k = 0; k < m; ++k) {
        const Rat v = dot(h.rows[k], out.point);
        if (out.implicit[k] ? v != 0 : v <= 0)
            throw std::runtime_error("relint_point: witness check failed");
    }
    return out;
}

} // namespace arbkit
