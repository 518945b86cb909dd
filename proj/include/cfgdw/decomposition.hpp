#pragma once

#include "cfgdw/cfg.hpp"
#include "cfgdw/digraph.hpp"
#include "cfgdw/loop_forest.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cfgdw {

/// A DAG over decomposition nodes with a bag of graph vertices per node.
/// Bags are stored flat (CSR) and sorted; a node's bag may be any size so
/// that lifted decompositions share the type.
class DagDecomposition {
  public:
    using Arc = std::pair<int, int>;

    DagDecomposition() = default;
    DagDecomposition(std::vector<int> node_ids, std::vector<Arc> arcs, std::vector<std::uint32_t> bag_offsets,
                     std::vector<VertexId> bag_vertices);
    static DagDecomposition from_bags(std::vector<int> node_ids, std::vector<Arc> arcs,
                                      const std::vector<std::vector<VertexId>>& bags);

    std::size_t num_nodes() const { return node_ids_.size(); }
    const std::vector<int>& node_ids() const { return node_ids_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::span<const VertexId> bag(int node) const {
        return {bag_vertices_.data() + bag_offsets_[node], bag_vertices_.data() + bag_offsets_[node + 1]};
    }
    std::vector<std::vector<VertexId>> bags() const;
    bool bag_contains(int node, VertexId v) const;

    /// The underlying DAG with node indices as vertices.
    Digraph dag() const;

  private:
    std::vector<int> node_ids_;
    std::vector<Arc> arcs_;
    std::vector<std::uint32_t> bag_offsets_{0};
    std::vector<VertexId> bag_vertices_;
};

/// Largest bag size.
int width(const DagDecomposition& d);

/// Fixed-capacity set used while assigning bags; the capacity is the width
/// bound of the construction.
class Bag3 {
  public:
    void insert(VertexId v) {
        for (std::uint8_t i = 0; i < size_; ++i)
            if (slots_[i] == v) return;
        slots_[size_++] = v;
    }
    std::span<const VertexId> view() const { return {slots_.data(), size_}; }

  private:
    std::array<VertexId, 3> slots_{};
    std::uint8_t size_ = 0;
};

enum class EdgeCategory : std::uint8_t {
    Backward,   // u in belongs(L), v = entry(L): removed
    LoopExit,   // u in belongs(L), v = exit(L): removed
    Rerouted,   // u outside L (and not its exit), v = entry(L): becomes (u, exit(L))
    Reversed,   // (entry(L), exit(L)) not already a loop-exit edge: becomes (exit, entry)
    Plain,
};

struct EdgePartition {
    std::vector<EdgeCategory> category;   // indexed like cfg.edges()
    std::vector<LoopId> loop;             // element the rule matched, kNoLoop for Plain

    std::vector<int> edges_in(EdgeCategory c) const;
};

/// Assigns every CFG edge to exactly one category. A loop-exit edge that is
/// also an entry->exit edge counts as LoopExit. Throws GraphError when an edge
/// matches two of Backward / LoopExit / Rerouted.
EdgePartition partition_edges(const ControlFlowGraph& cfg, const LoopForest& forest);

/// Builds the decomposition DAG and bags in O(|V| + |E|):
///   arcs = plain edges + (u, exit(L)) for each rerouted (u, entry(L))
///          + (exit(L), entry(L)) for each loop with a rerouted or reversed edge,
///   bag(v) = {v, entry(L), exit(L)} for v in belongs(L), {v} for the root.
/// Throws GraphError if the result is cyclic.
DagDecomposition build_decomposition(const ControlFlowGraph& cfg, const LoopForest& forest);
DagDecomposition build_decomposition(const ControlFlowGraph& cfg, const LoopForest& forest,
                                     const EdgePartition& partition);

/// For every arc (i,j) the bag of j adds exactly the vertex of node j to the
/// bag of i. Holds for constructed decompositions.
bool arcs_introduce_own_vertex(const DagDecomposition& d);

} // namespace cfgdw
