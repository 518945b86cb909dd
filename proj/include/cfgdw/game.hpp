#pragma once

#include "cfgdw/cfg.hpp"
#include "cfgdw/digraph.hpp"
#include "cfgdw/loop_forest.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cfgdw {

/// Cop placement by slot. For strategy f the slots are the roles
/// X(1) entry guard, X(2) exit guard, X(3) chaser; kNoVertex marks an unused
/// cop.
using CopSlots = std::vector<VertexId>;

/// Sorted, duplicate-free occupied vertices.
std::vector<VertexId> cop_set(const CopSlots& slots);

struct TraceStep {
    CopSlots slots;
    VertexId robber = kNoVertex;
    std::string note;             // strategy step that produced the placement
    LoopId loop = kNoLoop;        // strategy f: current element when the cops moved
};

enum class Outcome { CopsWin, RobberWinsCutoff };

struct GameTrace {
    std::vector<TraceStep> steps;     // steps[0] is (empty, initial robber vertex)
    Outcome outcome = Outcome::RobberWinsCutoff;
    std::string final_note;           // annotation of the capture, e.g. "4a"

    int rounds() const { return steps.empty() ? 0 : static_cast<int>(steps.size()) - 1; }
};

std::string to_string(Outcome o);

struct CopMove {
    CopSlots slots;
    std::string note;
    LoopId loop = kNoLoop;
};

class CopStrategy {
  public:
    virtual ~CopStrategy() = default;
    virtual int num_cops() const = 0;
    /// Called once before the first move.
    virtual void reset() {}
    /// Annotation of the initial position.
    virtual std::string initial_note() const { return ""; }
    virtual CopMove next(const GameTrace& so_far) = 0;
    virtual std::string capture_note(const GameTrace& trace) const;
};

class RobberStrategy {
  public:
    virtual ~RobberStrategy() = default;
    virtual VertexId start() = 0;
    /// Robber answer to the helicopter landing: any vertex reachable from
    /// `robber` in G minus (before ∩ after). Returning a vertex in `after`
    /// means the robber is caught.
    virtual VertexId respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                             VertexId robber) = 0;
};

/// The three-cop strategy on a structured CFG: two cops guard the entry and
/// exit of the current loop element while the third chases the robber or
/// blocks the exit of the nested element the robber is in, descending into
/// that element once the robber stays inside.
class StrategyF final : public CopStrategy {
  public:
    StrategyF(const ControlFlowGraph& cfg, const LoopForest& forest);

    int num_cops() const override { return 3; }
    void reset() override;
    std::string initial_note() const override { return "1"; }
    CopMove next(const GameTrace& so_far) override;
    std::string capture_note(const GameTrace& trace) const override;

  private:
    const ControlFlowGraph& cfg_;
    const LoopForest& forest_;
    LoopId current_ = kRootLoop;
    LoopId blocked_ = kNoLoop;     // element whose exit the chaser just took
    LoopId descending_ = kNoLoop;  // element whose entry X(1) just took
    CopSlots slots_;
};

enum class TieBreak { SmallestId, LargestId };

/// Stays put unless a cop lands on its vertex, then runs to the nearest
/// cop-free vertex (BFS distance in G minus the cops that stay), ties broken
/// by external vertex id.
class LazyRobber final : public RobberStrategy {
  public:
    LazyRobber(const Digraph& g, VertexId start, TieBreak tie = TieBreak::SmallestId);
    VertexId start() override { return start_; }
    VertexId respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                     VertexId robber) override;

  private:
    const Digraph& g_;
    VertexId start_;
    TieBreak tie_;
};

/// Uniformly random legal answer (including staying when possible);
/// seeded for reproducibility.
class RandomRobber final : public RobberStrategy {
  public:
    RandomRobber(const Digraph& g, VertexId start, std::uint64_t seed);
    VertexId start() override { return start_; }
    VertexId respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                     VertexId robber) override;

  private:
    const Digraph& g_;
    VertexId start_;
    std::mt19937_64 rng_;
};

/// Plays until capture or until max_rounds cop moves have been made
/// (default 4|V|). Throws GameError on an illegal robber move or an
/// oversized cop placement.
GameTrace play_game(const Digraph& g, CopStrategy& cops, RobberStrategy& robber,
                    std::optional<int> max_rounds = std::nullopt);

struct MonotonicityReport {
    bool monotone = true;
    VertexId vertex = kNoVertex;   // witness: reoccupied vertex
    int left_at = -1;              // first step without it after holding it
    int returned_at = -1;          // step where it is held again
};

/// True iff for every vertex the steps holding a cop on it form an interval.
MonotonicityReport check_cop_monotone(const GameTrace& trace);

/// dist(v, exit(L)): the largest number of belongs(L) vertices on a simple
/// path from v to L's exit that stays inside L and does not pass L's entry
/// (except as its first vertex). For the root element the target is stop.
/// Computed in linear time on the acyclic graph obtained by collapsing the
/// elements nested directly under L.
class LoopDistance {
  public:
    LoopDistance(const ControlFlowGraph& cfg, const LoopForest& forest, LoopId loop);

    LoopId loop() const { return loop_; }
    /// 0 when v has no qualifying path (see has_path) or is not inside L.
    int operator()(VertexId v) const { return dist_[v] < 0 ? 0 : dist_[v]; }
    bool has_path(VertexId v) const { return dist_[v] >= 0; }

  private:
    LoopId loop_;
    std::vector<int> dist_;
};

struct StrategyAudit {
    bool confined = true;              // robber stays inside(L) or reaches stop
    bool distance_monotone = true;     // dist never grows on a chase move
    bool distance_strict = true;       // and drops when the robber leaves belongs(L)
    int chase_moves_checked = 0;
    int round_bound = 0;               // 2|V| + 2 * loop depth
    bool within_round_bound = true;
    std::vector<std::string> problems;

    bool ok() const { return confined && distance_monotone && distance_strict && within_round_bound; }
};

/// Checks a strategy-f trace step by step: confinement of every robber answer
/// to a chase move (notes 2a/2b) and the distance function's behaviour on it.
StrategyAudit audit_strategy_f(const GameTrace& trace, const ControlFlowGraph& cfg, const LoopForest& forest);

} // namespace cfgdw
