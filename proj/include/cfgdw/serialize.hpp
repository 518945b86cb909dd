#pragma once

#include "cfgdw/cfg.hpp"
#include "cfgdw/decomposition.hpp"
#include "cfgdw/game.hpp"
#include "cfgdw/loop_forest.hpp"
#include "cfgdw/loops.hpp"
#include "cfgdw/parity_lift.hpp"
#include "cfgdw/validate.hpp"

#include <string>
#include <string_view>

namespace cfgdw {

// JSON documents use external vertex ids throughout. Output is
// deterministic: keys in fixed order, two-space indentation.

std::string cfg_to_json(const ControlFlowGraph& cfg);
/// Throws ParseError on malformed documents (unknown vertex, bad kind,
/// duplicate id, missing start/stop).
ControlFlowGraph cfg_from_json(std::string_view text);

std::string loops_to_json(const ControlFlowGraph& cfg, const LoopForest& forest);

std::string decomposition_to_json(const DagDecomposition& d, const Digraph& g);
/// Bag vertices are resolved against g's external ids.
DagDecomposition decomposition_from_json(std::string_view text, const Digraph& g);

std::string report_to_json(const ValidationReport& report);
std::string trace_to_json(const GameTrace& trace, const Digraph& g);
std::string game_to_json(const GameGraph& game, const ControlFlowGraph& cfg);

/// Backward edges dashed, start/stop as double circles.
std::string cfg_to_dot(const ControlFlowGraph& cfg, const LoopForest& forest);
/// Node labels list the bag.
std::string decomposition_to_dot(const DagDecomposition& d, const Digraph& g);

} // namespace cfgdw
