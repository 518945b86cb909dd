#pragma once

#include "cfgdw/cfg.hpp"
#include "cfgdw/decomposition.hpp"
#include "cfgdw/digraph.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace cfgdw {

enum class Player : std::uint8_t { Even, Odd };

/// Product arena of a CFG with an m-vertex formula skeleton. Vertex (s, k)
/// has index s * m + k; group(s) are the m vertices of state s.
struct GameGraph {
    std::size_t m = 1;
    std::size_t num_states = 0;
    Digraph graph;
    std::vector<Player> owner;
    std::vector<int> priority;

    VertexId vertex(VertexId state, int k) const { return static_cast<VertexId>(state * m + k); }
    VertexId state_of(VertexId v) const { return static_cast<VertexId>(v / m); }
    std::vector<VertexId> group(VertexId state) const;
};

/// Edge from subformula `from` of a state to subformula `to` of a successor
/// state. `only_on` restricts the rule to one transition (external ids).
struct CrossEdgeRule {
    int from = 0;
    int to = 0;
    std::optional<std::pair<int, int>> only_on;
};

enum class OwnerRule : std::uint8_t { Even, Odd, Any };

/// Graph shape of a formula: m subformula slots, the edges among the slots of
/// one state, the edges from the slots of a state to those of its successors,
/// and the owner/priority pattern (priority -1 means pick at random).
struct FormulaSkeleton {
    int m = 1;
    int d = 2;
    std::vector<std::pair<int, int>> intra_edges;
    std::vector<CrossEdgeRule> cross_edges;
    std::vector<OwnerRule> owners;
    std::vector<int> priorities;

    /// m = 1, one cross edge 0 -> 0: the arena is the CFG itself.
    static FormulaSkeleton identity();
    /// Random pattern with at least one cross edge per slot.
    static FormulaSkeleton random(int m, int d, std::uint64_t seed);

    /// Throws Error on m < 1, d < 2, slot indices out of range, or
    /// mismatched pattern sizes.
    void check() const;
};

/// Throws GraphError when a cross rule names a pair that is not a CFG edge.
GameGraph build_product_game(const ControlFlowGraph& cfg, const FormulaSkeleton& skeleton, std::uint64_t seed);

/// Same DAG, each state in a bag replaced by its group. Throws GraphError
/// for a bag vertex outside the game's state range.
DagDecomposition lift_decomposition(const DagDecomposition& d, const GameGraph& game);

} // namespace cfgdw
