#include "cfgdw/decomposition.hpp"
#include "cfgdw/error.hpp"

#include <algorithm>

namespace cfgdw {

DagDecomposition::DagDecomposition(std::vector<int> node_ids, std::vector<Arc> arcs,
                                   std::vector<std::uint32_t> bag_offsets, std::vector<VertexId> bag_vertices)
    : node_ids_(std::move(node_ids)), arcs_(std::move(arcs)), bag_offsets_(std::move(bag_offsets)),
      bag_vertices_(std::move(bag_vertices)) {
    if (bag_offsets_.size() != node_ids_.size() + 1) throw Error("bag offsets do not match the node count");
    for (std::size_t i = 0; i < node_ids_.size(); ++i) {
        auto b = bag_vertices_.begin() + bag_offsets_[i], e = bag_vertices_.begin() + bag_offsets_[i + 1];
        std::sort(b, e);
        if (std::adjacent_find(b, e) != e) throw Error("bag of node " + std::to_string(node_ids_[i]) + " repeats a vertex");
    }
    for (const auto& [a, b] : arcs_)
        if (a < 0 || b < 0 || a >= static_cast<int>(node_ids_.size()) || b >= static_cast<int>(node_ids_.size()))
            throw Error("arc refers to an unknown node");
}

DagDecomposition DagDecomposition::from_bags(std::vector<int> node_ids, std::vector<Arc> arcs,
                                             const std::vector<std::vector<VertexId>>& bags) {
    std::vector<std::uint32_t> offsets{0};
    std::vector<VertexId> flat;
    for (const auto& b : bags) {
        flat.insert(flat.end(), b.begin(), b.end());
        offsets.push_back(static_cast<std::uint32_t>(flat.size()));
    }
    return DagDecomposition(std::move(node_ids), std::move(arcs), std::move(offsets), std::move(flat));
}

std::vector<std::vector<VertexId>> DagDecomposition::bags() const {
    std::vector<std::vector<VertexId>> out;
    out.reserve(num_nodes());
    for (std::size_t i = 0; i < num_nodes(); ++i) {
        auto b = bag(static_cast<int>(i));
        out.emplace_back(b.begin(), b.end());
    }
    return out;
}

bool DagDecomposition::bag_contains(int node, VertexId v) const {
    auto b = bag(node);
    return std::binary_search(b.begin(), b.end(), v);
}

Digraph DagDecomposition::dag() const {
    Digraph g(num_nodes());
    for (std::size_t i = 0; i < num_nodes(); ++i) g.set_external_id(static_cast<VertexId>(i), node_ids_[i]);
    for (const auto& [a, b] : arcs_) g.add_edge(a, b);
    return g;
}

int width(const DagDecomposition& d) {
    int w = 0;
    for (std::size_t i = 0; i < d.num_nodes(); ++i) w = std::max(w, static_cast<int>(d.bag(static_cast<int>(i)).size()));
    return w;
}

std::vector<int> EdgePartition::edges_in(EdgeCategory c) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < category.size(); ++i)
        if (category[i] == c) out.push_back(static_cast<int>(i));
    return out;
}

EdgePartition partition_edges(const ControlFlowGraph& cfg, const LoopForest& forest) {
    EdgePartition p;
    p.category.reserve(cfg.num_edges());
    p.loop.reserve(cfg.num_edges());
    for (const auto& e : cfg.edges()) {
        LoopId into_entry = forest.loop_with_entry(e.to);
        LoopId into_exit = forest.loop_with_exit(e.to);
        LoopId from = forest.belongs_of(e.from);
        int matches = 0;
        EdgeCategory cat = EdgeCategory::Plain;
        LoopId loop = kNoLoop;
        if (into_entry != kNoLoop && from == into_entry) {
            cat = EdgeCategory::Backward;
            loop = into_entry;
            ++matches;
        }
        if (into_exit != kNoLoop && from == into_exit) {
            cat = EdgeCategory::LoopExit;
            loop = into_exit;
            ++matches;
        }
        if (into_entry != kNoLoop && !forest.in_inside(e.from, into_entry) &&
            e.from != forest.element(into_entry).exit) {
            cat = EdgeCategory::Rerouted;
            loop = into_entry;
            ++matches;
        }
        if (matches > 1) {
            throw GraphError("edge " + std::to_string(cfg.external_id(e.from)) + "->" +
                             std::to_string(cfg.external_id(e.to)) + " falls into two edge categories");
        }
        if (matches == 0 && into_exit != kNoLoop && forest.element(into_exit).entry == e.from) {
            cat = EdgeCategory::Reversed;
            loop = into_exit;
        }
        p.category.push_back(cat);
        p.loop.push_back(loop);
    }
    return p;
}

DagDecomposition build_decomposition(const ControlFlowGraph& cfg, const LoopForest& forest) {
    return build_decomposition(cfg, forest, partition_edges(cfg, forest));
}

DagDecomposition build_decomposition(const ControlFlowGraph& cfg, const LoopForest& forest,
                                     const EdgePartition& partition) {
    const std::size_t n = cfg.num_vertices();
    std::vector<DagDecomposition::Arc> raw;
    raw.reserve(cfg.num_edges() + forest.size());
    std::vector<bool> reverse_loop(forest.size(), false);
    const auto& edges = cfg.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        switch (partition.category[i]) {
        case EdgeCategory::Backward:
        case EdgeCategory::LoopExit:
            break;
        case EdgeCategory::Plain:
            raw.emplace_back(e.from, e.to);
            break;
        case EdgeCategory::Rerouted: {
            VertexId exit = forest.element(partition.loop[i]).exit;
            if (exit == kNoVertex)
                throw GraphError("loop at " + std::to_string(cfg.external_id(e.to)) + " has no exit to reroute to");
            raw.emplace_back(e.from, exit);
            reverse_loop[partition.loop[i]] = true;
            break;
        }
        case EdgeCategory::Reversed:
            reverse_loop[partition.loop[i]] = true;
            break;
        }
    }
    for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l)
        if (reverse_loop[l]) raw.emplace_back(forest.element(l).exit, forest.element(l).entry);

    // Group by tail, drop duplicates, keep first-appearance order per tail.
    std::vector<std::uint32_t> start(n + 1, 0);
    for (const auto& a : raw) ++start[a.first + 1];
    for (std::size_t v = 0; v < n; ++v) start[v + 1] += start[v];
    std::vector<VertexId> heads(raw.size());
    {
        std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
        for (const auto& a : raw) heads[fill[a.first]++] = a.second;
    }
    std::vector<VertexId> stamp(n, kNoVertex);
    std::vector<DagDecomposition::Arc> arcs;
    arcs.reserve(raw.size());
    for (VertexId u = 0; u < static_cast<VertexId>(n); ++u)
        for (std::uint32_t k = start[u]; k < start[u + 1]; ++k) {
            VertexId v = heads[k];
            if (stamp[v] == u) continue;
            stamp[v] = u;
            arcs.emplace_back(u, v);
        }

    std::vector<std::uint32_t> offsets;
    offsets.reserve(n + 1);
    offsets.push_back(0);
    std::vector<VertexId> flat;
    flat.reserve(3 * n);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        LoopId l = forest.belongs_of(v);
        if (l == kRootLoop) {
            flat.push_back(v);
        } else {
            Bag3 bag;
            bag.insert(v);
            bag.insert(forest.element(l).entry);
            if (forest.element(l).exit != kNoVertex) bag.insert(forest.element(l).exit);
            auto view = bag.view();
            flat.insert(flat.end(), view.begin(), view.end());
        }
        offsets.push_back(static_cast<std::uint32_t>(flat.size()));
    }
    DagDecomposition d(cfg.digraph().external_ids(), std::move(arcs), std::move(offsets), std::move(flat));
    if (!is_acyclic(d.dag())) throw GraphError("decomposition digraph is cyclic");
    return d;
}

bool arcs_introduce_own_vertex(const DagDecomposition& d) {
    for (const auto& [i, j] : d.arcs()) {
        auto bi = d.bag(i), bj = d.bag(j);
        std::vector<VertexId> diff;
        std::set_difference(bj.begin(), bj.end(), bi.begin(), bi.end(), std::back_inserter(diff));
        if (diff.size() != 1 || diff[0] != j) return false;
    }
    return true;
}

} // namespace cfgdw
