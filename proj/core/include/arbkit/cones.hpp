#pragma once
// Polyhedral cone algebra in R^d for the per-node solvency cones and duals.
//
// Representations:
//   ConeH  {w : a.w >= 0 for every row a}
//   ConeV  cone(rays); a lineality direction shows up as a +/- ray pair
// Conversions run through an incremental double-description pass that keeps
// an explicit lineality basis beside the extreme-ray list while it works.
// Everything is exact; DD is guarded to dim <= 8 — tree-level (claim-space)
// questions must go through LP formulations instead.

#include "arbkit/lp.hpp"

namespace arbkit {

struct ConeV {
    size_t dim = 0;
    QMat rays;
};

struct ConeH {
    size_t dim = 0;
    QMat rows;
};

struct SubspaceBasis {
    size_t dim = 0;
    QMat basis; // linearly independent rows; empty = {0}
};

ConeV dd_h_to_v(const ConeH& h);
ConeH dd_v_to_h(const ConeV& v);

bool coneh_contains(const ConeH& h, const QVec& x);
// Membership in cone(rays), decided by a feasibility LP (any dimension).
bool conev_contains(const ConeV& v, const QVec& x);

// Lineality space cone(rays) ∩ -cone(rays), spanned by the rays whose
// negations stay inside the cone.
SubspaceBasis lineality(const ConeV& v);

// Batched lineality classification of an arbitrary generator list: one LP
//   max sum(sigma) s.t. sum_i (sigma_i + mu_i) g_i = 0, 0<=sigma<=1, mu>=0
// after which sigma_i = 1 exactly when -g_i lies in cone(gens).  `combo` is
// the witnessing vanishing combination with combo_i >= 1 on every good
// generator.
struct GeneratorLineality {
    std::vector<char> good;
    QVec combo;
    QMat basis; // basis rows of span{g_i : good[i]}
};
GeneratorLineality generator_lineality(const QMat& gens);

// Same classification done the slow way (one membership LP per generator);
// kept as an independent oracle for the batched test.
std::vector<char> reversible_via_single_lps(const QMat& gens);

// Relative interior of an H-cone: which rows hold with equality on the whole
// cone (implicit equalities), plus a point satisfying all other rows
// strictly.  Returns nullopt exactly when the cone is {0}.  Found by an
// iterated capped-slack LP; a single batch is not sound because the
// objective may trade one row's slack for another's, so rows are resolved
// round by round.
struct RelintInfo {
    QVec point;
    std::vector<char> implicit;
};
std::optional<RelintInfo> relint_point(const ConeH& h);

} // namespace arbkit
