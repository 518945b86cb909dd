#pragma once

#include "cfgdw/cfg.hpp"
#include "cfgdw/loop_forest.hpp"

#include <string>
#include <vector>

namespace cfgdw {

/// Dominator tree over the vertices reachable from its root. Unreachable
/// vertices have no immediate dominator and take part in no dominance.
class DominatorTree {
  public:
    DominatorTree() = default;
    DominatorTree(VertexId root, std::vector<VertexId> idom);

    VertexId root() const { return root_; }
    VertexId idom(VertexId v) const { return idom_[v]; }
    bool covers(VertexId v) const { return v == root_ || idom_[v] != kNoVertex; }
    /// u dominates v (reflexive).
    bool dominates(VertexId u, VertexId v) const {
        return covers(u) && covers(v) && tin_[u] <= tin_[v] && tout_[v] <= tout_[u];
    }
    const std::vector<VertexId>& preorder() const { return preorder_; }

  private:
    VertexId root_ = kNoVertex;
    std::vector<VertexId> idom_;
    std::vector<int> tin_, tout_;
    std::vector<VertexId> preorder_;
};

struct DominatorInfo {
    DominatorTree dom;       // rooted at start
    DominatorTree postdom;   // rooted at stop, over the graph without Stop-kind edges
};

/// Iterative dataflow over reverse postorder. Throws GraphError if some
/// vertex is not reachable from start.
DominatorInfo compute_dominators(const ControlFlowGraph& cfg);

/// Recomputes inside/belongs for the given entry/exit pairs from dominance:
/// inside(L) holds the vertices dominated by L's entry and not by its exit
/// (stop excluded; it always belongs to the root). Nesting parents are
/// rederived as well. Throws GraphError when the regions do not form a
/// laminar family.
LoopForest loop_regions(const ControlFlowGraph& cfg, const LoopForest& forest, const DominatorInfo& dom);

/// Recovers loop elements of a CFG given without syntax (e.g. from JSON):
/// every target of a backward edge is an entry; its exit is the first vertex
/// on the post-dominator chain that leaves the natural loop body. Throws
/// GraphError when the graph is not a structured CFG.
LoopForest recover_loops(const ControlFlowGraph& cfg, const DominatorInfo& dom);

/// Loop elements that never reach an exit, or a stop vertex that is
/// unreachable, put the graph outside what the decomposition and the game
/// handle. Throws GraphError with the reason.
void require_analyzable(const ControlFlowGraph& cfg, const LoopForest& forest);

enum class EdgeClass : std::uint8_t { Forward, Backward };

/// Syntactic classification: (u,v) is backward iff v is the entry of the
/// element u belongs to. Indexed like cfg.edges().
std::vector<EdgeClass> classify_edges(const ControlFlowGraph& cfg, const LoopForest& forest);
/// Definition by dominance: (u,v) is backward iff v dominates u.
std::vector<EdgeClass> classify_edges_by_dominators(const ControlFlowGraph& cfg, const DominatorInfo& dom);
/// Syntactic classification, cross-checked against dominance. Throws
/// GraphError naming the first disagreeing edge.
std::vector<EdgeClass> classify_edges_checked(const ControlFlowGraph& cfg, const LoopForest& forest,
                                              const DominatorInfo& dom);

struct CycleViolation {
    std::vector<VertexId> cycle;
    LoopId loop;
};

struct CycleReport {
    bool evaluated = false;        // false when the graph exceeds the size bound
    std::size_t cycles_checked = 0;
    std::vector<CycleViolation> violations;
};

/// Enumerates every simple directed cycle C (only for graphs with at most
/// max_vertices vertices) and checks that whenever C lies inside L and meets
/// belongs(L), L's entry lies on C.
CycleReport check_cycle_entries(const ControlFlowGraph& cfg, const LoopForest& forest, std::size_t max_vertices = 12);

/// Loop forest for any CFG: the syntactic one when present, otherwise
/// recovered from dominators. Convenience used by the CLI and tests.
CfgWithLoops with_recovered_loops(ControlFlowGraph cfg);

} // namespace cfgdw
