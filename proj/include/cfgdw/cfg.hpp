#pragma once

#include "cfgdw/ast.hpp"
#include "cfgdw/digraph.hpp"
#include "cfgdw/loop_forest.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfgdw {

/// Why control may pass from a statement to a successor: fall-through (`out`),
/// `break` to the nearest loop exit, `continue` or loop-back to the nearest
/// loop entry, and `return` to stop. Ordered by precedence when two edges
/// between the same pair of vertices collapse into one.
enum class SuccessorKind : std::uint8_t { Out, Exit, Entry, Stop };

std::string_view to_string(SuccessorKind kind);
std::optional<SuccessorKind> successor_kind_from_string(std::string_view s);

struct CfgEdge {
    VertexId from;
    VertexId to;
    SuccessorKind kind;
};

class ControlFlowGraph {
  public:
    VertexId add_vertex(std::string label, int external_id = -1);
    /// Adds (from,to). A parallel edge keeps the earlier position and the
    /// higher-precedence kind.
    void add_edge(VertexId from, VertexId to, SuccessorKind kind);

    void set_start(VertexId v) { start_ = v; }
    void set_stop(VertexId v) { stop_ = v; }
    VertexId start() const { return start_; }
    VertexId stop() const { return stop_; }

    std::size_t num_vertices() const { return labels_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<CfgEdge>& edges() const { return edges_; }
    std::span<const int> out_edges(VertexId v) const { return out_[v]; }
    std::span<const VertexId> successors(VertexId v) const { return graph_.successors(v); }
    std::span<const VertexId> predecessors(VertexId v) const { return graph_.predecessors(v); }
    std::optional<SuccessorKind> edge_kind(VertexId from, VertexId to) const;

    const std::string& label(VertexId v) const { return labels_[v]; }
    int external_id(VertexId v) const { return graph_.external_id(v); }
    std::optional<VertexId> find_external(int id) const;

    const Digraph& digraph() const { return graph_; }

    /// False when pruning found stop unreachable from start; stop is then
    /// kept as an isolated vertex.
    bool stop_reachable() const { return stop_reachable_; }
    void set_stop_reachable(bool r) { stop_reachable_ = r; }

  private:
    std::vector<std::string> labels_;
    Digraph graph_;
    std::vector<CfgEdge> edges_;
    std::vector<std::vector<int>> out_;
    VertexId start_ = kNoVertex;
    VertexId stop_ = kNoVertex;
    bool stop_reachable_ = true;
};

struct CfgWithLoops {
    ControlFlowGraph cfg;
    LoopForest loops;
};

/// Expands the AST into a CFG. One vertex per assignment and per branch or
/// loop condition, a synthetic exit vertex per loop, a synthetic head vertex
/// per do-while (its entry), plus start and stop. Loop elements are recorded
/// as they are created.
CfgWithLoops build_cfg(const StructuredAst& ast);

/// Drops vertices not reachable from start. Stop is always kept and flagged
/// when unreachable.
CfgWithLoops prune_unreachable(const CfgWithLoops& in);
ControlFlowGraph prune_unreachable(const ControlFlowGraph& in);

/// Basic-block contraction: merges v into u along every edge (u,v) with
/// out(u) = 1 and in(v) = 1, except where u or v is start or stop or v is a
/// loop entry or exit. The surviving vertex keeps u's id; labels are joined.
CfgWithLoops contract_basic_blocks(const CfgWithLoops& in);

/// parse_program + build_cfg + prune_unreachable (+ optional contraction).
CfgWithLoops cfg_from_source(std::string_view source, bool contract = false);

/// Checks the graph-level invariants: start is a source, stop is a sink,
/// every vertex other than an unreachable stop is reachable from start.
/// Throws GraphError.
void check_cfg_invariants(const ControlFlowGraph& cfg);

} // namespace cfgdw
