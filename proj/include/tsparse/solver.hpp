#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsparse/graph.hpp"
#include "tsparse/rates.hpp"
#include "tsparse/rational.hpp"

namespace tsparse {

struct SparsityResult {
    int size = 0;
    std::vector<int> witness;
    std::int64_t edges = 0;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
    double elapsed_ms = 0.0;
};

inline constexpr std::uint64_t unlimited_budget = std::numeric_limits<std::uint64_t>::max();

namespace detail {

// Decision search: does some k-subset induce at most `quota` edges?
// Include/exclude branch and bound.  Branch vertex is the candidate with
// the fewest edges into the partial set (lowest index on ties), include
// branch first.  Prunes when the partial edge count plus the sum of the
// (k - |partial|) smallest candidate degrees already exceeds the quota;
// that sum ignores edges among future picks, so it is a valid lower bound.
class SubsetEdgeSearch {
public:
    SubsetEdgeSearch(const Graph& g, int k, std::int64_t quota, std::uint64_t budget,
                     std::uint64_t& node_counter)
        : g_(g), k_(k), quota_(quota), budget_(budget), nodes_(node_counter) {
        cand_.reserve(g.order());
        deg_.reserve(g.order());
        for (int v = 0; v < g.order(); ++v) cand_.push_back(v);
        deg_.assign(cand_.size(), 0);
        partial_.reserve(k);
    }

    enum class Outcome { found, infeasible, budget_exhausted };

    Outcome run() {
        if (quota_ < 0) return Outcome::infeasible;
        const bool ok = dfs();
        if (budget_hit_) return Outcome::budget_exhausted;
        return ok ? Outcome::found : Outcome::infeasible;
    }

    const std::vector<int>& witness() const { return witness_; }
    std::int64_t witness_edges() const { return witness_edges_; }

private:
    bool dfs() {
        if (++nodes_ > budget_) {
            budget_hit_ = true;
            return false;
        }
        const int need = k_ - static_cast<int>(partial_.size());
        if (need == 0) {
            witness_ = partial_;
            witness_edges_ = edges_;
            return true;
        }
        if (static_cast<int>(cand_.size()) < need) return false;
        if (!bound_admits(need)) return false;

        // branch vertex: min (deg into partial, vertex id)
        int bi = 0;
        for (int i = 1; i < static_cast<int>(cand_.size()); ++i)
            if (deg_[i] < deg_[bi] || (deg_[i] == deg_[bi] && cand_[i] < cand_[bi])) bi = i;
        const int v = cand_[bi];
        const int dv = deg_[bi];
        std::swap(cand_[bi], cand_.back());
        std::swap(deg_[bi], deg_.back());
        cand_.pop_back();
        deg_.pop_back();

        if (edges_ + dv <= quota_) {
            partial_.push_back(v);
            edges_ += dv;
            bump_degrees(v, +1);
            if (dfs()) return true;
            bump_degrees(v, -1);
            edges_ -= dv;
            partial_.pop_back();
        }
        bool ok = false;
        if (!budget_hit_) ok = dfs();
        cand_.push_back(v);
        deg_.push_back(dv);
        return ok;
    }

    bool bound_admits(int need) {
        counts_.assign(partial_.size() + 1, 0);
        for (int d : deg_) ++counts_[d];
        std::int64_t sum = edges_;
        int taken = 0;
        for (int d = 0; d <= static_cast<int>(partial_.size()) && taken < need; ++d) {
            const int take = std::min(counts_[d], need - taken);
            sum += static_cast<std::int64_t>(d) * take;
            if (sum > quota_) return false;
            taken += take;
        }
        return sum <= quota_;
    }

    void bump_degrees(int v, int sign) {
        const auto row = g_.row(v);
        for (size_t i = 0; i < cand_.size(); ++i) {
            const int u = cand_[i];
            deg_[i] += sign * static_cast<int>((row[static_cast<size_t>(u) / 64] >>
                                                (static_cast<size_t>(u) % 64)) & 1ULL);
        }
    }

    const Graph& g_;
    const int k_;
    const std::int64_t quota_;
    const std::uint64_t budget_;
    std::uint64_t& nodes_;
    bool budget_hit_ = false;
    std::vector<int> cand_, partial_;
    std::vector<int> deg_;
    std::vector<int> counts_;
    std::vector<int> witness_;
    std::int64_t edges_ = 0;
    std::int64_t witness_edges_ = 0;
};

inline std::int64_t edge_quota(const Rational& t, int k) { return t.floor_mul_div(k, 2); }

}  // namespace detail

// Greedy lower bound: peel the maximum-degree vertex (lowest index on ties)
// from [n] until the remainder is t-sparse.  The witness is feasible, so its
// size never exceeds the exact optimum.
inline SparsityResult greedy_peel(const Graph& g, const Rational& t) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = g.order();
    std::vector<char> in(n, 1);
    std::vector<int> deg(n);
    std::int64_t edges = g.edge_count();
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    int size = n;
    auto sparse = [&]() {
        if (size <= 1) return true;
        return static_cast<__int128>(2) * edges * t.den <=
               static_cast<__int128>(t.num) * size;
    };
    while (!sparse()) {
        int victim = -1;
        for (int v = 0; v < n; ++v)
            if (in[v] && (victim < 0 || deg[v] > deg[victim])) victim = v;
        in[victim] = 0;
        --size;
        edges -= deg[victim];
        for (int u = 0; u < n; ++u)
            if (in[u] && g.has_edge(victim, u)) --deg[u];
    }
    SparsityResult res;
    res.size = size;
    res.edges = edges;
    for (int v = 0; v < n; ++v)
        if (in[v]) res.witness.push_back(v);
    res.optimal = false;
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Exhaustive oracle over all 2^n subsets (Gray-code walk, O(1) edge updates).
inline SparsityResult sparsity_bruteforce(const Graph& g, const Rational& t) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = g.order();
    if (n > 24)
        throw std::invalid_argument("sparsity_bruteforce guard: n <= 24 required, got n=" +
                                    std::to_string(n));
    std::vector<std::uint32_t> adj(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && g.has_edge(i, j)) adj[i] |= 1u << j;

    std::uint32_t cur = 0;
    std::int64_t edges = 0;
    int best_size = 0;
    std::uint32_t best_mask = 0;
    std::int64_t best_edges = 0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t m = 1; m < total; ++m) {
        const int v = std::countr_zero(m);
        const std::uint32_t bit = 1u << v;
        if (cur & bit) {
            cur ^= bit;
            edges -= std::popcount(adj[v] & cur);
        } else {
            edges += std::popcount(adj[v] & cur);
            cur ^= bit;
        }
        const int size = std::popcount(cur);
        if (size > best_size &&
            static_cast<__int128>(2) * edges * t.den <= static_cast<__int128>(t.num) * size) {
            best_size = size;
            best_mask = cur;
            best_edges = edges;
        }
    }
    SparsityResult res;
    res.size = best_size;
    res.edges = best_edges;
    for (int v = 0; v < n; ++v)
        if (best_mask & (1u << v)) res.witness.push_back(v);
    res.optimal = true;
    res.nodes_explored = total - 1;
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Sweep start for graphs that came from the G(n,p) sampler:
// min(n, floor(2 log_b(np)) + t ceil(log_b log_b(np)) + slack).
// Only a hint; the sweep certifies every level it needs regardless.
inline int predicted_sweep_start(int n, const Rational& t, const RateParams& params,
                                 int slack = 3) {
    const double np = static_cast<double>(n) * params.p;
    if (!(params.log_b(np) > 1.0)) return n;
    const double base = std::floor(2.0 * params.log_b(np));
    const double iter = std::ceil(params.log_b(params.log_b(np)));
    const double start = base + t.to_double() * iter + slack;
    if (!(start >= 1.0)) return 1;
    return static_cast<int>(std::min(static_cast<double>(n), start));
}

// Exact t-sparsity number via size-by-size decision sweeps.
//
// Feasibility is monotone: deleting a maximum-degree vertex of a t-sparse set
// leaves a t-sparse set, so "some k-subset is t-sparse" is downward closed in
// k and each decided level certifies everything beyond it.  The sweep starts
// at `sweep_start` (0 = whole graph), moves down until a feasible size is
// found, and climbs upward when the start itself was feasible.  A greedy peel
// seeds the search with a certified feasible size so the downward sweep never
// runs past it.
inline SparsityResult sparsity_exact(const Graph& g, const Rational& t,
                                     std::uint64_t budget = unlimited_budget,
                                     int sweep_start = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = g.order();
    SparsityResult res;
    if (n == 0) {
        res.optimal = true;
        return res;
    }

    const SparsityResult seed = greedy_peel(g, t);
    int best = seed.size;
    res.witness = seed.witness;
    res.edges = seed.edges;

    std::uint64_t nodes = 0;
    bool budget_hit = false;
    auto decide = [&](int k) {
        detail::SubsetEdgeSearch search(g, k, detail::edge_quota(t, k), budget, nodes);
        const auto outcome = search.run();
        if (outcome == detail::SubsetEdgeSearch::Outcome::found) {
            best = k;
            res.witness = search.witness();
            res.edges = search.witness_edges();
        } else if (outcome == detail::SubsetEdgeSearch::Outcome::budget_exhausted) {
            budget_hit = true;
        }
        return outcome;
    };

    int start = (sweep_start >= 1) ? std::min(sweep_start, n) : n;
    if (start < best) start = best;

    bool certified = false;  // true once some level above `best` is certified infeasible
    if (start > best) {
        for (int k = start; k > best && !budget_hit; --k) {
            const auto outcome = decide(k);
            if (outcome == detail::SubsetEdgeSearch::Outcome::found) break;
            if (outcome == detail::SubsetEdgeSearch::Outcome::infeasible) certified = true;
        }
    }
    if (!certified && !budget_hit) {
        // start itself was feasible (or start == best): climb until infeasible
        while (best < n && !budget_hit) {
            const auto outcome = decide(best + 1);
            if (outcome != detail::SubsetEdgeSearch::Outcome::found) break;
        }
    }

    res.size = best;
    res.optimal = !budget_hit;
    res.nodes_explored = nodes;
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace tsparse
