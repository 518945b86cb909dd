#include "cfgdw/digraph.hpp"

#include <algorithm>
#include <deque>

namespace cfgdw {

Digraph::Digraph(std::size_t n) : succ_(n), pred_(n), ids_(n) {
    for (std::size_t i = 0; i < n; ++i) ids_[i] = static_cast<int>(i);
}

VertexId Digraph::add_vertex(int external_id) {
    succ_.emplace_back();
    pred_.emplace_back();
    ids_.push_back(external_id);
    return static_cast<VertexId>(succ_.size() - 1);
}

bool Digraph::add_edge(VertexId from, VertexId to) {
    if (has_edge(from, to)) return false;
    succ_[from].push_back(to);
    pred_[to].push_back(from);
    ++num_edges_;
    return true;
}

bool Digraph::has_edge(VertexId from, VertexId to) const {
    const auto& s = succ_[from];
    return std::find(s.begin(), s.end(), to) != s.end();
}

std::vector<std::pair<VertexId, VertexId>> Digraph::edge_list() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(num_edges_);
    for (VertexId u = 0; u < static_cast<VertexId>(succ_.size()); ++u)
        for (VertexId v : succ_[u]) out.emplace_back(u, v);
    return out;
}

std::vector<bool> reachable_from(const Digraph& g, VertexId from, const std::vector<bool>& blocked) {
    std::vector<bool> seen(g.num_vertices(), false);
    std::vector<VertexId> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        for (VertexId v : g.successors(u)) {
            if (seen[v] || (!blocked.empty() && blocked[v])) continue;
            seen[v] = true;
            stack.push_back(v);
        }
    }
    return seen;
}

std::vector<VertexId> topological_order(const Digraph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> indeg(n);
    for (std::size_t v = 0; v < n; ++v) indeg[v] = g.predecessors(static_cast<VertexId>(v)).size();
    std::vector<VertexId> order;
    order.reserve(n);
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) order.push_back(static_cast<VertexId>(v));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (VertexId w : g.successors(order[i]))
            if (--indeg[w] == 0) order.push_back(w);
    return order;
}

bool is_acyclic(const Digraph& g) { return topological_order(g).size() == g.num_vertices(); }

} // namespace cfgdw
