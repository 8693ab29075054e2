#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tsparse/solver.hpp"

using namespace tsparse;

namespace {

Graph complete_graph(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph cycle_graph(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph petersen_graph() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);       // outer cycle
        g.add_edge(i, i + 5);             // spokes
        g.add_edge(i + 5, (i + 2) % 5 + 5);  // inner pentagram
    }
    return g;
}

// Independent maximum-independent-set oracle: plain recursion on bitmasks,
// no shared code with the solver under test.
int mis_oracle(const std::vector<std::uint32_t>& adj, std::uint32_t candidates) {
    if (candidates == 0) return 0;
    const int v = std::countr_zero(candidates);
    const std::uint32_t without = candidates & (candidates - 1);
    const int skip = mis_oracle(adj, without);
    const int take = 1 + mis_oracle(adj, without & ~adj[v]);
    return std::max(skip, take);
}

int mis_size(const Graph& g) {
    std::vector<std::uint32_t> adj(g.order(), 0);
    for (int i = 0; i < g.order(); ++i)
        for (int j = 0; j < g.order(); ++j)
            if (i != j && g.has_edge(i, j)) adj[i] |= 1u << j;
    return mis_oracle(adj, (1u << g.order()) - 1);
}

}  // namespace

TEST_CASE("sparsity_bruteforce on known instances") {
    REQUIRE(sparsity_bruteforce(Graph(1), Rational::from_int(0)).size == 1);
    REQUIRE(sparsity_bruteforce(complete_graph(3), Rational::from_int(0)).size == 1);
    REQUIRE(sparsity_bruteforce(complete_graph(3), Rational::from_int(2)).size == 3);
    REQUIRE(sparsity_bruteforce(complete_graph(5), Rational::from_int(2)).size == 3);
    REQUIRE(sparsity_bruteforce(cycle_graph(5), Rational::from_int(0)).size == 2);
    REQUIRE(sparsity_bruteforce(cycle_graph(5), Rational::from_int(1)).size == 3);
    REQUIRE(sparsity_bruteforce(petersen_graph(), Rational::from_int(0)).size == 4);
    REQUIRE_THROWS_AS(sparsity_bruteforce(Graph(25), Rational::from_int(0)),
                      std::invalid_argument);
}

TEST_CASE("sparsity_exact on known instances") {
    SECTION("empty graph keeps every vertex") {
        const Graph g(5);
        const auto res = sparsity_exact(g, Rational::from_int(0));
        REQUIRE(res.size == 5);
        REQUIRE(res.optimal);
        REQUIRE(res.edges == 0);
    }
    SECTION("K5 under t=2 keeps a triangle") {
        const auto res = sparsity_exact(complete_graph(5), Rational::from_int(2));
        REQUIRE(res.size == 3);
        REQUIRE(res.optimal);
        REQUIRE(is_t_sparse(complete_graph(5), res.witness, Rational::from_int(2)));
    }
    SECTION("5-cycle") {
        REQUIRE(sparsity_exact(cycle_graph(5), Rational::from_int(1)).size == 3);
        REQUIRE(sparsity_exact(cycle_graph(5), Rational::from_int(0)).size == 2);
    }
    SECTION("Petersen graph independence number") {
        const auto res = sparsity_exact(petersen_graph(), Rational::from_int(0));
        REQUIRE(res.size == 4);
        REQUIRE(res.optimal);
    }
}

TEST_CASE("oracle equivalence on random instances") {
    std::uint64_t seed = 1000;
    for (int n : {8, 11, 14})
        for (double p : {0.2, 0.5, 0.8})
            for (int tnum : {0, 1, 2, 3}) {
                for (int rep = 0; rep < 3; ++rep) {
                    const Graph g = gnp_sample(n, p, seed++);
                    const Rational t = Rational::from_int(tnum);
                    const auto exact = sparsity_exact(g, t);
                    const auto brute = sparsity_bruteforce(g, t);
                    INFO("n=" << n << " p=" << p << " t=" << tnum << " seed=" << seed - 1);
                    REQUIRE(exact.size == brute.size);
                    REQUIRE(exact.optimal);
                    REQUIRE(is_t_sparse(g, exact.witness, t));
                    REQUIRE(is_t_sparse(g, brute.witness, t));
                    REQUIRE(static_cast<int>(exact.witness.size()) == exact.size);
                    REQUIRE(exact.edges == induced_edges(g, exact.witness));
                }
            }
}

TEST_CASE("fractional thresholds agree with the oracle") {
    std::uint64_t seed = 5000;
    for (const char* ts : {"0.5", "1.5", "2.5"})
        for (int rep = 0; rep < 5; ++rep) {
            const Graph g = gnp_sample(12, 0.5, seed++);
            const Rational t = Rational::parse(ts);
            REQUIRE(sparsity_exact(g, t).size == sparsity_bruteforce(g, t).size);
        }
}

TEST_CASE("alpha_0 equals the independence number") {
    std::uint64_t seed = 2000;
    for (int rep = 0; rep < 20; ++rep) {
        const Graph g = gnp_sample(13, 0.4, seed++);
        REQUIRE(sparsity_exact(g, Rational::from_int(0)).size == mis_size(g));
    }
}

TEST_CASE("sparsity size is monotone in t") {
    std::uint64_t seed = 3000;
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = gnp_sample(12, 0.5, seed++);
        int prev = 0;
        for (int tnum : {0, 1, 2, 3, 4}) {
            const int size = sparsity_exact(g, Rational::from_int(tnum)).size;
            REQUIRE(size >= prev);
            prev = size;
        }
    }
}

TEST_CASE("witnesses stay feasible under max-degree deletion") {
    // The size-monotonicity step the downward sweep relies on.
    std::uint64_t seed = 4000;
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = gnp_sample(14, 0.5, seed++);
        for (int tnum : {0, 1, 2}) {
            const Rational t = Rational::from_int(tnum);
            auto witness = sparsity_exact(g, t).witness;
            while (witness.size() > 1) {
                REQUIRE(is_t_sparse(g, witness, t));
                int worst = 0;
                std::int64_t worst_deg = -1;
                for (size_t i = 0; i < witness.size(); ++i) {
                    std::int64_t d = 0;
                    for (int u : witness)
                        if (u != witness[i] && g.has_edge(witness[i], u)) ++d;
                    if (d > worst_deg) {
                        worst_deg = d;
                        worst = static_cast<int>(i);
                    }
                }
                witness.erase(witness.begin() + worst);
                REQUIRE(is_t_sparse(g, witness, t));
            }
        }
    }
}

TEST_CASE("greedy_peel") {
    SECTION("empty graph returns everything") {
        const auto res = greedy_peel(Graph(7), Rational::from_int(0));
        REQUIRE(res.size == 7);
        REQUIRE_FALSE(res.optimal);
    }
    SECTION("K5 at t=2 peels to a triangle") {
        REQUIRE(greedy_peel(complete_graph(5), Rational::from_int(2)).size == 3);
    }
    SECTION("5-cycle at t=1 happens to match the optimum") {
        REQUIRE(greedy_peel(cycle_graph(5), Rational::from_int(1)).size == 3);
    }
    SECTION("never exceeds the exact size and always feasible") {
        std::uint64_t seed = 6000;
        for (int rep = 0; rep < 15; ++rep) {
            const Graph g = gnp_sample(13, 0.6, seed++);
            for (int tnum : {0, 1, 2}) {
                const Rational t = Rational::from_int(tnum);
                const auto peel = greedy_peel(g, t);
                REQUIRE(is_t_sparse(g, peel.witness, t));
                REQUIRE(peel.size <= sparsity_exact(g, t).size);
            }
        }
    }
}

TEST_CASE("sweep start hint never changes the answer") {
    std::uint64_t seed = 7000;
    for (int rep = 0; rep < 8; ++rep) {
        const Graph g = gnp_sample(14, 0.5, seed++);
        const Rational t = Rational::from_int(1);
        const int reference = sparsity_exact(g, t).size;
        for (int start : {1, 3, reference, reference + 1, 14}) {
            const auto res = sparsity_exact(g, t, unlimited_budget, start);
            REQUIRE(res.size == reference);
            REQUIRE(res.optimal);
        }
    }
}

TEST_CASE("budget exhaustion is flagged, never silently wrong") {
    const Graph g = gnp_sample(30, 0.5, 11);
    const Rational t = Rational::from_int(1);
    const auto full = sparsity_exact(g, t);
    REQUIRE(full.optimal);
    const auto starved = sparsity_exact(g, t, 10);
    REQUIRE_FALSE(starved.optimal);
    REQUIRE(starved.size <= full.size);
    REQUIRE(is_t_sparse(g, starved.witness, t));
}
