#include "arbkit/random_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace arbkit {

namespace {

// rng() % n is used instead of uniform_int_distribution so sequences are
// identical across standard libraries for a fixed seed.
size_t below(std::mt19937_64& rng, size_t n) {
    return static_cast<size_t>(rng() % n);
}

const Rat& pick(std::mt19937_64& rng, const std::vector<Rat>& pool) {
    return pool[below(rng, pool.size())];
}

} // namespace

MarketModel random_market(std::mt19937_64& rng,
                          const RandomModelParams& params) {
    MarketModel m;
    m.d = params.d_min + below(rng, params.d_max - params.d_min + 1);
    m.T = params.t_min +
          static_cast<int>(below(
              rng, static_cast<size_t>(params.t_max - params.t_min + 1)));
    m.bid_ask_form = true;

    m.nodes.push_back(TreeNode{"n0", -1, {}, 0, Rat(0)});
    size_t frontier_begin = 0, frontier_end = 1;
    for (int t = 1; t <= m.T; ++t) {
        const size_t next_begin = m.nodes.size();
        for (size_t u = frontier_begin; u < frontier_end; ++u) {
            const size_t kids =
                1 + below(rng, static_cast<size_t>(params.branch_max));
            for (size_t c = 0; c < kids; ++c)
                m.nodes.push_back(TreeNode{"n" + std::to_string(m.nodes.size()),
                                           static_cast<int>(u),
                                           {},
                                           t,
                                           Rat(0)});
        }
        frontier_begin = next_begin;
        frontier_end = m.nodes.size();
    }

    // Frictionless prices: a random start, then multiplicative steps along
    // the tree (the 1-heavy factor pool keeps many paths martingale-like,
    // so both arbitrage-free and arbitrage-admitting models occur).
    const std::vector<Rat> start_pool = {rat(1, 2), rat(1), rat(3, 2), rat(2)};
    const std::vector<Rat> step_pool = {rat(1, 2), rat(2, 3), rat(1), rat(1),
                                        rat(5, 4), rat(3, 2), rat(2)};
    std::vector<QVec> prices(m.nodes.size());
    prices[0].resize(m.d);
    for (size_t i = 0; i < m.d; ++i) prices[0][i] = pick(rng, start_pool);
    for (size_t u = 1; u < m.nodes.size(); ++u) {
        prices[u].resize(m.d);
        const QVec& parent = prices[static_cast<size_t>(m.nodes[u].parent)];
        for (size_t i = 0; i < m.d; ++i)
            prices[u][i] = parent[i] * pick(rng, step_pool);
    }

    const std::vector<Rat> spread_pool =
        params.strict_spreads
            ? std::vector<Rat>{rat(1, 20), rat(1, 10), rat(1, 4), rat(1, 2)}
            : std::vector<Rat>{rat(0), rat(0), rat(1, 10), rat(1, 4),
                               rat(1, 2)};
    m.cones.resize(m.nodes.size());
    for (size_t u = 0; u < m.nodes.size(); ++u) {
        // Spread factors >= 1, closed under minimal path products so the
        // triangle inequality holds exactly.
        QMat f(m.d, QVec(m.d, Rat(1)));
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j)
                if (i != j) f[i][j] = 1 + pick(rng, spread_pool);
        for (size_t k = 0; k < m.d; ++k)
            for (size_t i = 0; i < m.d; ++i)
                for (size_t j = 0; j < m.d; ++j)
                    if (i != j) {
                        const Rat via = f[i][k] * f[k][j];
                        if (via < f[i][j]) f[i][j] = via;
                    }
        QMat pi(m.d, QVec(m.d, Rat(1)));
        for (size_t i = 0; i < m.d; ++i)
            for (size_t j = 0; j < m.d; ++j)
                if (i != j)
                    pi[i][j] = prices[u][j] / prices[u][i] * f[i][j];
        m.cones[u].pi = std::move(pi);
    }

    finalize_model(m);
    resample_probs(rng, m);

    const std::vector<Violation> bad = validate_model(m);
    if (!bad.empty())
        throw std::runtime_error("random_market: generated model fails " +
                                 bad[0].rule + ": " + bad[0].detail);
    return m;
}

void resample_probs(std::mt19937_64& rng, MarketModel& m) {
    Rat total = 0;
    QVec weights(m.leaves.size());
    for (size_t k = 0; k < m.leaves.size(); ++k) {
        weights[k] = rat(1 + static_cast<long long>(below(rng, 6)));
        total += weights[k];
    }
    for (size_t k = 0; k < m.leaves.size(); ++k)
        m.nodes[static_cast<size_t>(m.leaves[k])].prob = weights[k] / total;
    finalize_model(m);
}

} // namespace arbkit
