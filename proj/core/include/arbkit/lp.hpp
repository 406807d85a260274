#pragma once
// Exact rational linear programming with self-verifying certificates.
//
// The solver is a bounded-variable two-phase primal simplex over Rat.
// Every answer carries a certificate that verify_certificate() can check by
// pure recomputation (no pivoting, no tolerance):
//   Optimal    -> point + row duals; checked via complementary slackness and
//                 the exact primal == dual objective identity.
//   Unbounded  -> feasible point + improving recession ray.
//   Infeasible -> Farkas row multipliers proving the system empty over the
//                 variable box.
//
// Variables carry bounds [lo, hi] where lo may be -infinity and hi may be
// +infinity (encoded as nullopt); the default is [0, +infinity).

#include "arbkit/linalg.hpp"

#include <iosfwd>

namespace arbkit {

enum class Sense { Max, Min };
enum class Rel { LE, GE, EQ };

struct LpRow {
    QVec a;
    Rel rel = Rel::EQ;
    Rat b = 0;
};

struct LinearProgram {
    Sense sense = Sense::Max;
    QVec c;
    std::vector<LpRow> rows;
    std::vector<std::optional<Rat>> lo; // nullopt = -infinity
    std::vector<std::optional<Rat>> hi; // nullopt = +infinity

    LinearProgram() = default;
    explicit LinearProgram(size_t n)
        : c(n, Rat(0)), lo(n, Rat(0)), hi(n, std::nullopt) {}

    size_t n_vars() const { return c.size(); }
    void add_row(QVec a, Rel rel, Rat b) {
        rows.push_back(LpRow{std::move(a), rel, std::move(b)});
    }
    void set_free(size_t j) {
        lo[j] = std::nullopt;
        hi[j] = std::nullopt;
    }
    void fix(size_t j, const Rat& v) {
        lo[j] = v;
        hi[j] = v;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    QVec x;     // Optimal: optimizer; Unbounded: a feasible point
    QVec ray;   // Unbounded: improving recession direction
    QVec y;     // Optimal: row duals (original sense); Infeasible: Farkas row
                // multipliers (y_r >= 0 on LE rows, <= 0 on GE rows)
    Rat value = 0; // Optimal only
    long pivots = 0;
};

// Solve; throws std::runtime_error only on an internal pivot-cap trip, which
// indicates a solver bug rather than a property of the input.
LpResult lp_solve(const LinearProgram& lp);

// Re-derive the claimed status from the certificate alone.  Returns nullopt
// when the certificate is valid, else a human-readable reason.
std::optional<std::string> verify_certificate(const LinearProgram& lp,
                                              const LpResult& res);

// Weak duality: the objective bound implied by row multipliers y alone
// (upper bound for Max, lower bound for Min).  Returns nullopt when y's
// signs don't match the row relations or a free direction is left uncovered,
// i.e. when y proves nothing.
std::optional<Rat> dual_bound(const LinearProgram& lp, const QVec& y);

// Plain-text dump (used by the ARBKIT_LP_TRACE=dump diagnostics).
void dump_lp(const LinearProgram& lp, std::ostream& os);

} // namespace arbkit
