#pragma once

#include "svarpg/model.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace svarpg {

/// Simple directed graph on vertices 0..n-1 (no self-edges).
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::vector<std::string> names);

    void add_edge(std::size_t from, std::size_t to);
    [[nodiscard]] bool has_edge(std::size_t from, std::size_t to) const { return adj_[from][to] != 0; }
    [[nodiscard]] const std::vector<std::size_t>& successors(std::size_t v) const { return succ_[v]; }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::string& name(std::size_t v) const { return names_.at(v); }
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
    /// Edges sorted by (from, to).
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    [[nodiscard]] std::size_t num_edges() const;

    friend bool operator==(const Digraph& a, const Digraph& b) { return a.names_ == b.names_ && a.adj_ == b.adj_; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<char>> adj_;
    std::vector<std::vector<std::size_t>> succ_;
};

/// Process graph over observed and latent processes (model index order).
struct ProcessGraph {
    Digraph directed;
    std::vector<bool> latent;

    [[nodiscard]] std::size_t size() const noexcept { return directed.size(); }
    [[nodiscard]] bool is_latent(std::size_t v) const { return latent.at(v); }
};

/// Mixed graph over the observed processes only.
struct LatentProjection {
    Digraph directed;
    /// Symmetric; bidirected[v][w] != 0 iff v <-> w.
    std::vector<std::vector<char>> bidirected;

    [[nodiscard]] std::size_t size() const noexcept { return directed.size(); }
    [[nodiscard]] bool has_bidirected(std::size_t v, std::size_t w) const { return bidirected[v][w] != 0; }
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> bidirected_edges() const;
    [[nodiscard]] bool has_any_bidirected() const;
};

/// Walk v_1 -> ... -> v_{k+1}; a single vertex denotes the empty path.
struct DirectedPath {
    std::vector<std::size_t> vertices;

    [[nodiscard]] std::size_t start() const { return vertices.front(); }
    [[nodiscard]] std::size_t end() const { return vertices.back(); }
    [[nodiscard]] std::size_t num_edges() const { return vertices.size() - 1; }
    [[nodiscard]] bool is_empty_path() const { return vertices.size() == 1; }
    [[nodiscard]] std::string to_string(const Digraph& g) const;

    friend bool operator==(const DirectedPath&, const DirectedPath&) = default;
    friend auto operator<=>(const DirectedPath&, const DirectedPath&) = default;
};

enum class TrekKind { TopVertex, Bidirected };

/**
 * @brief Trek between v and w.
 *
 * TopVertex: left and right both start at the top vertex and end at v and w.
 * Bidirected: left starts at a, right starts at b, a <-> b.
 */
struct Trek {
    TrekKind kind = TrekKind::TopVertex;
    DirectedPath left;
    DirectedPath right;

    [[nodiscard]] std::size_t left_top() const { return left.start(); }
    [[nodiscard]] std::size_t right_top() const { return right.start(); }
    [[nodiscard]] std::string to_string(const Digraph& g) const;
};

/// Minimal cycles as vertex sequences (closing vertex omitted), canonically rotated.
struct CycleBasis {
    std::vector<std::vector<std::size_t>> cycles;

    [[nodiscard]] std::size_t size() const noexcept { return cycles.size(); }
    [[nodiscard]] static std::string label(const std::vector<std::size_t>& cycle, const Digraph& g);
};

/// Rotate a simple cycle so that it starts at its smallest vertex.
std::vector<std::size_t> canonical_cycle(std::vector<std::size_t> cycle);

ProcessGraph process_graph(const SvarModel& model);
LatentProjection latent_projection(const ProcessGraph& g);
CycleBasis cycle_basis(const Digraph& g);

/**
 * @brief Lazy enumeration of directed walks from -> to.
 *
 * Intermediate vertices (and any revisit of `from`) must avoid `avoid`.
 * Revisits are accounted for by loop erasure: every closed minimal cycle is
 * charged to its canonical representative and each may be traversed at most
 * max_cycle_depth times. Walks are yielded in depth-first order.
 */
class PathStream {
public:
    PathStream(const Digraph& g, std::size_t from, std::size_t to, std::set<std::size_t> avoid, int max_cycle_depth);

    std::optional<DirectedPath> next();
    std::vector<DirectedPath> collect();

private:
    struct Frame {
        std::vector<std::size_t> erased;
        std::map<std::vector<std::size_t>, int> counts;
        std::size_t next_succ = 0;
    };

    const Digraph* g_;
    std::size_t to_;
    std::set<std::size_t> avoid_;
    int depth_;
    std::vector<char> reaches_;
    std::vector<std::size_t> walk_;
    std::vector<Frame> stack_;
    bool pending_emit_ = false;
};

std::vector<DirectedPath> enumerate_paths(const Digraph& g, std::size_t from, std::size_t to,
                                          const std::set<std::size_t>& avoid, int max_cycle_depth);

/// Lazy enumeration of all treks between v and w on a latent projection.
class TrekStream {
public:
    TrekStream(const LatentProjection& g, std::size_t v, std::size_t w, int max_cycle_depth);

    std::optional<Trek> next();
    std::vector<Trek> collect();

private:
    bool advance_tops();

    const LatentProjection* g_;
    std::size_t v_;
    std::size_t w_;
    int depth_;
    std::vector<std::pair<std::size_t, std::size_t>> tops_;
    std::size_t top_index_ = 0;
    TrekKind kind_ = TrekKind::TopVertex;
    std::vector<DirectedPath> left_;
    std::vector<DirectedPath> right_;
    std::size_t li_ = 0;
    std::size_t ri_ = 0;
};

std::vector<Trek> enumerate_treks(const LatentProjection& g, std::size_t v, std::size_t w, int max_cycle_depth);

/**
 * @brief Brute-force path sum on the time-unrolled graph.
 *
 * Materializes nodes V(t-j), j = 0..s, deletes every edge into x(.) and into
 * each control, and sums the coefficient products of all directed paths
 * x(t-s) -> y(t). Throws Error{Semantic} if the contemporaneous subgraph is
 * cyclic (the unrolled graph would not be finite-path).
 */
double unrolled_paths(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls,
                      int s);

}  // namespace svarpg
