#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfgdw {

/// Dense vertex index. External ids (as they appear in JSON files and traces)
/// are kept separately so that fixtures with gaps in their numbering work.
using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

/// Plain directed graph over vertices 0..n-1 with successor and predecessor
/// lists. Parallel edges are dropped on insertion.
class Digraph {
  public:
    Digraph() = default;
    explicit Digraph(std::size_t n);

    std::size_t num_vertices() const { return succ_.size(); }
    std::size_t num_edges() const { return num_edges_; }

    VertexId add_vertex(int external_id);
    /// Returns false when the edge already existed.
    bool add_edge(VertexId from, VertexId to);
    bool has_edge(VertexId from, VertexId to) const;

    std::span<const VertexId> successors(VertexId v) const { return succ_[v]; }
    std::span<const VertexId> predecessors(VertexId v) const { return pred_[v]; }

    int external_id(VertexId v) const { return ids_[v]; }
    const std::vector<int>& external_ids() const { return ids_; }
    void set_external_id(VertexId v, int id) { ids_[v] = id; }

    std::vector<std::pair<VertexId, VertexId>> edge_list() const;

  private:
    std::vector<std::vector<VertexId>> succ_;
    std::vector<std::vector<VertexId>> pred_;
    std::vector<int> ids_;
    std::size_t num_edges_ = 0;
};

/// Vertices reachable from `from`, skipping vertices with blocked[v] set.
/// `from` itself is always included.
std::vector<bool> reachable_from(const Digraph& g, VertexId from, const std::vector<bool>& blocked = {});

/// Kahn topological order; empty optional-like result (size != n) means cyclic.
std::vector<VertexId> topological_order(const Digraph& g);
bool is_acyclic(const Digraph& g);

} // namespace cfgdw
