#include "svarpg/graph.hpp"

#include "svarpg/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace svarpg {

Digraph::Digraph(std::vector<std::string> names)
    : names_(std::move(names)),
      adj_(names_.size(), std::vector<char>(names_.size(), 0)),
      succ_(names_.size()) {}

void Digraph::add_edge(std::size_t from, std::size_t to) {
    if (from == to) throw Error(ErrorKind::Semantic, "self-edges are not allowed in a process graph");
    if (adj_.at(from).at(to)) return;
    adj_[from][to] = 1;
    auto& s = succ_[from];
    s.insert(std::upper_bound(s.begin(), s.end(), to), to);
}

std::size_t Digraph::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    throw Error(ErrorKind::UnknownProcess, "unknown vertex '" + std::string(name) + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> Digraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < size(); ++v)
        for (auto w : succ_[v]) out.emplace_back(v, w);
    return out;
}

std::size_t Digraph::num_edges() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
}

std::vector<std::pair<std::size_t, std::size_t>> LatentProjection::bidirected_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < size(); ++v)
        for (std::size_t w = v + 1; w < size(); ++w)
            if (bidirected[v][w]) out.emplace_back(v, w);
    return out;
}

bool LatentProjection::has_any_bidirected() const { return !bidirected_edges().empty(); }

std::string DirectedPath::to_string(const Digraph& g) const {
    std::string s;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i) s += "->";
        s += g.name(vertices[i]);
    }
    return s;
}

std::string Trek::to_string(const Digraph& g) const {
    // Left side printed top-down reversed: v <- ... <- top.
    std::string s;
    for (std::size_t i = left.vertices.size(); i-- > 0;) {
        s += g.name(left.vertices[i]);
        if (i) s += "<-";
    }
    s += kind == TrekKind::TopVertex ? " | " : " <-> ";
    s += right.to_string(g);
    return s;
}

std::string CycleBasis::label(const std::vector<std::size_t>& cycle, const Digraph& g) {
    std::string s;
    for (auto v : cycle) s += g.name(v) + "->";
    return s + g.name(cycle.front());
}

std::vector<std::size_t> canonical_cycle(std::vector<std::size_t> cycle) {
    auto it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), it, cycle.end());
    return cycle;
}

ProcessGraph process_graph(const SvarModel& model) {
    ProcessGraph g{Digraph(model.names()), {}};
    const std::size_t n = model.num_processes();
    g.latent.resize(n);
    for (std::size_t v = 0; v < n; ++v) g.latent[v] = model.is_latent(v);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
            if (v != w && model.has_link(v, w)) g.directed.add_edge(v, w);
    return g;
}

LatentProjection latent_projection(const ProcessGraph& g) {
    std::vector<std::size_t> obs;
    std::vector<std::string> names;
    std::vector<std::size_t> local(g.size(), SIZE_MAX);
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!g.is_latent(v)) {
            local[v] = obs.size();
            obs.push_back(v);
            names.push_back(g.directed.name(v));
        }
    }
    LatentProjection p{Digraph(names), std::vector<std::vector<char>>(obs.size(), std::vector<char>(obs.size(), 0))};
    for (auto [v, w] : g.directed.edges())
        if (!g.is_latent(v) && !g.is_latent(w)) p.directed.add_edge(local[v], local[w]);

    // For every latent h, the observed processes reachable via latent-only intermediates.
    for (std::size_t h = 0; h < g.size(); ++h) {
        if (!g.is_latent(h)) continue;
        std::vector<char> seen(g.size(), 0);
        std::vector<std::size_t> hits;
        std::deque<std::size_t> queue{h};
        seen[h] = 1;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto x : g.directed.successors(u)) {
                if (seen[x]) continue;
                seen[x] = 1;
                if (g.is_latent(x))
                    queue.push_back(x);
                else
                    hits.push_back(local[x]);
            }
        }
        for (auto a : hits)
            for (auto b : hits)
                if (a != b) p.bidirected[a][b] = 1;
    }
    return p;
}

CycleBasis cycle_basis(const Digraph& g) {
    CycleBasis basis;
    const std::size_t n = g.size();
    std::vector<std::size_t> path;
    std::vector<char> on_path(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::function<void(std::size_t)> dfs = [&](std::size_t u) {
            for (auto x : g.successors(u)) {
                if (x == s) {
                    basis.cycles.push_back(path);
                } else if (x > s && !on_path[x]) {
                    on_path[x] = 1;
                    path.push_back(x);
                    dfs(x);
                    path.pop_back();
                    on_path[x] = 0;
                }
            }
        };
        path = {s};
        on_path[s] = 1;
        dfs(s);
        on_path[s] = 0;
    }
    std::sort(basis.cycles.begin(), basis.cycles.end());
    return basis;
}

PathStream::PathStream(const Digraph& g, std::size_t from, std::size_t to, std::set<std::size_t> avoid,
                       int max_cycle_depth)
    : g_(&g), to_(to), avoid_(std::move(avoid)), depth_(max_cycle_depth), reaches_(g.size(), 0) {
    if (from >= g.size() || to >= g.size()) throw Error(ErrorKind::UnknownProcess, "path endpoint out of range");
    if (avoid_.count(to)) throw Error(ErrorKind::Semantic, "path target must not be in the avoid set");
    // reaches_[u]: u may appear on a walk that still reaches `to`.
    std::deque<std::size_t> queue{to};
    reaches_[to] = 1;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (std::size_t p = 0; p < g.size(); ++p) {
            if (!reaches_[p] && !avoid_.count(p) && g.has_edge(p, u)) {
                reaches_[p] = 1;
                queue.push_back(p);
            }
        }
    }
    walk_ = {from};
    stack_.push_back(Frame{{from}, {}, 0});
    pending_emit_ = from == to;
}

std::optional<DirectedPath> PathStream::next() {
    if (pending_emit_) {
        pending_emit_ = false;
        return DirectedPath{walk_};
    }
    while (!stack_.empty()) {
        Frame& top = stack_.back();
        const auto& succ = g_->successors(walk_.back());
        if (top.next_succ >= succ.size()) {
            stack_.pop_back();
            walk_.pop_back();
            continue;
        }
        const std::size_t x = succ[top.next_succ++];
        if (avoid_.count(x) || !reaches_[x]) continue;

        Frame child{top.erased, top.counts, 0};
        auto pos = std::find(child.erased.begin(), child.erased.end(), x);
        if (pos != child.erased.end()) {
            auto key = canonical_cycle(std::vector<std::size_t>(pos, child.erased.end()));
            if (++child.counts[key] > depth_) continue;
            child.erased.erase(pos + 1, child.erased.end());
        } else {
            child.erased.push_back(x);
        }
        walk_.push_back(x);
        stack_.push_back(std::move(child));
        if (x == to_) return DirectedPath{walk_};
    }
    return std::nullopt;
}

std::vector<DirectedPath> PathStream::collect() {
    std::vector<DirectedPath> out;
    while (auto p = next()) out.push_back(std::move(*p));
    return out;
}

std::vector<DirectedPath> enumerate_paths(const Digraph& g, std::size_t from, std::size_t to,
                                          const std::set<std::size_t>& avoid, int max_cycle_depth) {
    return PathStream(g, from, to, avoid, max_cycle_depth).collect();
}

TrekStream::TrekStream(const LatentProjection& g, std::size_t v, std::size_t w, int max_cycle_depth)
    : g_(&g), v_(v), w_(w), depth_(max_cycle_depth) {
    if (v >= g.size() || w >= g.size()) throw Error(ErrorKind::UnknownProcess, "trek endpoint out of range");
    for (std::size_t t = 0; t < g.size(); ++t) tops_.emplace_back(t, t);
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (g.has_bidirected(a, b)) tops_.emplace_back(a, b);
    advance_tops();
}

bool TrekStream::advance_tops() {
    while (top_index_ < tops_.size()) {
        auto [a, b] = tops_[top_index_];
        kind_ = a == b ? TrekKind::TopVertex : TrekKind::Bidirected;
        left_ = enumerate_paths(g_->directed, a, v_, {}, depth_);
        right_ = left_.empty() ? std::vector<DirectedPath>{} : enumerate_paths(g_->directed, b, w_, {}, depth_);
        li_ = 0;
        ri_ = 0;
        ++top_index_;
        if (!left_.empty() && !right_.empty()) return true;
    }
    left_.clear();
    right_.clear();
    return false;
}

std::optional<Trek> TrekStream::next() {
    while (true) {
        if (li_ < left_.size()) {
            Trek t{kind_, left_[li_], right_[ri_]};
            if (++ri_ == right_.size()) {
                ri_ = 0;
                ++li_;
            }
            return t;
        }
        if (!advance_tops()) return std::nullopt;
    }
}

std::vector<Trek> TrekStream::collect() {
    std::vector<Trek> out;
    while (auto t = next()) out.push_back(std::move(*t));
    return out;
}

std::vector<Trek> enumerate_treks(const LatentProjection& g, std::size_t v, std::size_t w, int max_cycle_depth) {
    return TrekStream(g, v, w, max_cycle_depth).collect();
}

double unrolled_paths(const SvarModel& model, std::size_t x, std::size_t y, const std::set<std::size_t>& controls,
                      int s) {
    if (s < 0) throw Error(ErrorKind::Semantic, "lag s must be non-negative");
    const std::size_t n = model.num_processes();
    if (x >= n || y >= n) throw Error(ErrorKind::UnknownProcess, "process index out of range");
    const int p = model.order();

    // The unrolled graph is acyclic iff its lag-0 slice is.
    {
        Digraph contemporaneous(model.names());
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w)
                if (v != w && model.coeff(v, w, 0) != 0.0) contemporaneous.add_edge(v, w);
        if (cycle_basis(contemporaneous).size() != 0)
            throw Error(ErrorKind::Semantic, "contemporaneous links are cyclic; unrolled path sum is not finite");
    }

    auto deleted = [&](std::size_t w) { return w == x || controls.count(w) != 0; };

    // Depth-first enumeration of all paths from node (x, s) to node (y, 0); a node
    // (v, j) stands for v(t - j) and edges only ever decrease j or stay contemporaneous.
    double total = 0.0;
    std::function<void(std::size_t, int, double)> dfs = [&](std::size_t v, int j, double prod) {
        if (v == y && j == 0) total += prod;
        for (std::size_t w = 0; w < n; ++w) {
            if (deleted(w)) continue;
            for (int k = 0; k <= std::min(p, j); ++k) {
                const double c = model.coeff(v, w, k);
                if (c == 0.0) continue;
                dfs(w, j - k, prod * c);
            }
        }
    };
    if (x == y && s == 0) return 1.0;
    dfs(x, s, 1.0);
    return total;
}

}  // namespace svarpg
