#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsparse/rational.hpp"
#include "tsparse/rates.hpp"
#include "tsparse/rng.hpp"

namespace tsparse {

// Undirected simple graph on n labelled vertices, one n-bit adjacency row
// per vertex.  Symmetric, zero diagonal.  Treated as immutable once built.
class Graph {
public:
    explicit Graph(int n)
        : n_(n), words_(static_cast<size_t>((n + 63) / 64)), bits_(words_ * static_cast<size_t>(n), 0) {
        if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    }

    int order() const { return n_; }
    size_t row_words() const { return words_; }

    bool has_edge(int u, int v) const {
        return (bits_[static_cast<size_t>(u) * words_ + static_cast<size_t>(v) / 64] >>
                (static_cast<size_t>(v) % 64)) & 1ULL;
    }

    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("Graph: self-loop rejected");
        check_vertex(u);
        check_vertex(v);
        bits_[static_cast<size_t>(u) * words_ + static_cast<size_t>(v) / 64] |=
            1ULL << (static_cast<size_t>(v) % 64);
        bits_[static_cast<size_t>(v) * words_ + static_cast<size_t>(u) / 64] |=
            1ULL << (static_cast<size_t>(u) % 64);
    }

    std::span<const std::uint64_t> row(int v) const {
        return {bits_.data() + static_cast<size_t>(v) * words_, words_};
    }

    int degree(int v) const {
        int d = 0;
        for (std::uint64_t w : row(v)) d += std::popcount(w);
        return d;
    }

    std::int64_t edge_count() const {
        std::int64_t total = 0;
        for (std::uint64_t w : bits_) total += std::popcount(w);
        return total / 2;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            throw std::invalid_argument("Graph: vertex " + std::to_string(v) + " out of range [0," +
                                        std::to_string(n_) + ")");
    }

private:
    int n_;
    size_t words_;
    std::vector<std::uint64_t> bits_;
};

// Inclusion threshold for the sampler: floor(p * 2^64), computed with integer
// shifts on the exact mantissa of p so every platform gets the same value.
inline std::uint64_t edge_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ULL;  // never reached by a draw; see gnp_sample
    int exp2 = 0;
    const double frac = std::frexp(p, &exp2);          // p = frac * 2^exp2, frac in [0.5, 1)
    const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));  // exact 53-bit mantissa
    const int shift = exp2 + 11;                       // p * 2^64 = mant * 2^(exp2+11)
    if (shift >= 0) {
        unsigned __int128 wide = static_cast<unsigned __int128>(mant) << shift;
        const unsigned __int128 cap = (static_cast<unsigned __int128>(1) << 64) - 1;
        return static_cast<std::uint64_t>(wide > cap ? cap : wide);
    }
    return shift <= -64 ? 0 : mant >> (-shift);
}

// G(n,p) sampler.  One SplitMix64 draw per unordered pair, row-major order
// (0,1), (0,2), ..., (n-2,n-1); pair included iff draw < floor(p * 2^64).
// Bit-identical output for identical (n, p, seed).
inline Graph gnp_sample(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gnp_sample requires n >= 1");
    Graph g(n);
    SplitMix64 rng(seed);
    const std::uint64_t threshold = edge_threshold(p);
    const bool always = p >= 1.0;
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t u = rng.next();
            if (always || u < threshold) g.add_edge(i, j);
        }
    return g;
}

inline Graph gnp_sample(int n, const RateParams& params, std::uint64_t seed) {
    return gnp_sample(n, params.p, seed);
}

struct SubsetStats {
    int size;
    std::int64_t edges;
    Rational avg_degree;  // 2 e(S) / |S| exactly; 0 for the empty set
};

namespace detail {
inline std::vector<std::uint64_t> subset_mask(const Graph& g, std::span<const int> subset) {
    std::vector<std::uint64_t> mask(g.row_words(), 0);
    for (int v : subset) {
        g.check_vertex(v);
        mask[static_cast<size_t>(v) / 64] |= 1ULL << (static_cast<size_t>(v) % 64);
    }
    return mask;
}
}  // namespace detail

inline std::int64_t induced_edges(const Graph& g, std::span<const int> subset) {
    const auto mask = detail::subset_mask(g, subset);
    std::int64_t twice = 0;
    for (int v : subset) {
        auto r = g.row(v);
        for (size_t w = 0; w < mask.size(); ++w) twice += std::popcount(r[w] & mask[w]);
    }
    return twice / 2;
}

inline SubsetStats subset_stats(const Graph& g, std::span<const int> subset) {
    const auto e = induced_edges(g, subset);
    const int size = static_cast<int>(subset.size());
    return SubsetStats{size, e, size == 0 ? Rational() : Rational(2 * e, size)};
}

// True iff the subgraph induced by the subset has average degree at most t,
// i.e. 2 e(S) den(t) <= num(t) |S| in exact integers.  Empty sets and
// singletons are always t-sparse.
inline bool is_t_sparse(const Graph& g, std::span<const int> subset, const Rational& t) {
    if (subset.size() <= 1) return true;
    const auto e = induced_edges(g, subset);
    return static_cast<__int128>(2) * e * t.den <=
           static_cast<__int128>(t.num) * static_cast<std::int64_t>(subset.size());
}

// --- edge-list text format ---------------------------------------------
// First line "n m", then m lines "u v" with 0-indexed u < v, newline
// terminated.  write_graph emits pairs in row-major order so a round trip
// is bit-identical.

inline void write_graph(const Graph& g, std::ostream& out) {
    out << g.order() << ' ' << g.edge_count() << '\n';
    for (int i = 0; i + 1 < g.order(); ++i)
        for (int j = i + 1; j < g.order(); ++j)
            if (g.has_edge(i, j)) out << i << ' ' << j << '\n';
}

inline void write_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_graph(g, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Graph read_graph(std::istream& in, const std::string& name = "<stream>") {
    auto fail = [&name](int line, const std::string& msg) {
        throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
    };
    long long n = 0, m = 0;
    std::string header;
    if (!std::getline(in, header)) fail(1, "missing header line");
    {
        size_t pos = 0;
        try {
            n = std::stoll(header, &pos);
            m = std::stoll(header.substr(pos));
        } catch (const std::exception&) {
            fail(1, "malformed header, expected \"n m\"");
        }
    }
    if (n < 0 || m < 0) fail(1, "negative counts in header");
    Graph g(static_cast<int>(n));
    std::string line;
    for (long long i = 0; i < m; ++i) {
        const int lineno = static_cast<int>(i) + 2;
        if (!std::getline(in, line)) fail(lineno, "expected " + std::to_string(m) + " edge lines, got " + std::to_string(i));
        long long u = 0, v = 0;
        size_t pos = 0;
        try {
            u = std::stoll(line, &pos);
            v = std::stoll(line.substr(pos));
        } catch (const std::exception&) {
            fail(lineno, "malformed edge line \"" + line + "\"");
        }
        if (u < 0 || u >= n || v < 0 || v >= n)
            fail(lineno, "vertex out of range: " + std::to_string(u) + " " + std::to_string(v));
        if (u >= v) fail(lineno, "edge not in canonical u < v form");
        if (g.has_edge(static_cast<int>(u), static_cast<int>(v))) fail(lineno, "duplicate edge");
        g.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
    return g;
}

inline Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_graph(in, path);
}

}  // namespace tsparse
