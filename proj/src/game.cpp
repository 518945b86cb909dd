#include "cfgdw/game.hpp"
#include "cfgdw/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cfgdw {

std::vector<VertexId> cop_set(const CopSlots& slots) {
    std::vector<VertexId> out;
    for (VertexId v : slots)
        if (v != kNoVertex) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(Outcome o) { return o == Outcome::CopsWin ? "CopsWin" : "RobberWins(cutoff)"; }

std::string CopStrategy::capture_note(const GameTrace&) const { return "caught"; }

// ---------------------------------------------------------------- strategy f

StrategyF::StrategyF(const ControlFlowGraph& cfg, const LoopForest& forest) : cfg_(cfg), forest_(forest) { reset(); }

void StrategyF::reset() {
    current_ = kRootLoop;
    blocked_ = kNoLoop;
    descending_ = kNoLoop;
    slots_.assign(3, kNoVertex);
}

CopMove StrategyF::next(const GameTrace& so_far) {
    const VertexId r = so_far.steps.back().robber;
    const LoopId blocked = blocked_;
    blocked_ = kNoLoop;

    if (r == cfg_.stop()) {
        descending_ = kNoLoop;
        slots_[2] = r;
        return {slots_, "4b", current_};
    }
    if (descending_ != kNoLoop) {
        // The robber stayed inside the element X(1) just closed: recurse.
        current_ = descending_;
        descending_ = kNoLoop;
        std::swap(slots_[1], slots_[2]);
    } else if (blocked != kNoLoop && forest_.in_inside(r, blocked)) {
        slots_[0] = forest_.element(blocked).entry;
        descending_ = blocked;
        return {slots_, "5", current_};
    }

    if (forest_.belongs_of(r) == current_) {
        slots_[2] = r;
        return {slots_, "2a", current_};
    }
    LoopId inner = forest_.directly_nested_containing(current_, r);
    if (inner == kNoLoop)
        throw GameError("robber at " + std::to_string(cfg_.external_id(r)) + " escaped the current loop element");
    slots_[2] = forest_.element(inner).exit;
    blocked_ = inner;
    return {slots_, "2b", current_};
}

std::string StrategyF::capture_note(const GameTrace& trace) const {
    return trace.steps.size() > 1 && trace.steps.back().note == "5" ? "5c" : "4a";
}

// ------------------------------------------------------------------ robbers

namespace {

std::vector<bool> blocked_by(std::size_t n, const std::vector<VertexId>& before, const std::vector<VertexId>& after) {
    std::vector<bool> blocked(n, false);
    for (VertexId v : before)
        if (std::binary_search(after.begin(), after.end(), v)) blocked[v] = true;
    return blocked;
}

bool occupied(const std::vector<VertexId>& cops, VertexId v) { return std::binary_search(cops.begin(), cops.end(), v); }

} // namespace

LazyRobber::LazyRobber(const Digraph& g, VertexId start, TieBreak tie) : g_(g), start_(start), tie_(tie) {}

VertexId LazyRobber::respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after, VertexId robber) {
    if (!occupied(after, robber)) return robber;
    auto blocked = blocked_by(g_.num_vertices(), before, after);
    std::vector<int> dist(g_.num_vertices(), -1);
    std::vector<VertexId> layer{robber};
    dist[robber] = 0;
    while (!layer.empty()) {
        std::vector<VertexId> next;
        for (VertexId u : layer)
            for (VertexId w : g_.successors(u))
                if (dist[w] < 0 && !blocked[w]) {
                    dist[w] = dist[u] + 1;
                    next.push_back(w);
                }
        VertexId best = kNoVertex;
        for (VertexId w : next) {
            if (occupied(after, w)) continue;
            if (best == kNoVertex) {
                best = w;
                continue;
            }
            bool better = tie_ == TieBreak::SmallestId ? g_.external_id(w) < g_.external_id(best)
                                                       : g_.external_id(w) > g_.external_id(best);
            if (better) best = w;
        }
        if (best != kNoVertex) return best;
        layer = std::move(next);
    }
    return robber;
}

RandomRobber::RandomRobber(const Digraph& g, VertexId start, std::uint64_t seed) : g_(g), start_(start), rng_(seed) {}

VertexId RandomRobber::respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                               VertexId robber) {
    auto blocked = blocked_by(g_.num_vertices(), before, after);
    auto reach = reachable_from(g_, robber, blocked);
    std::vector<VertexId> options;
    for (VertexId v = 0; v < static_cast<VertexId>(reach.size()); ++v)
        if (reach[v] && !occupied(after, v)) options.push_back(v);
    if (options.empty()) return robber;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    return options[pick(rng_)];
}

// --------------------------------------------------------------------- play

GameTrace play_game(const Digraph& g, CopStrategy& cops, RobberStrategy& robber, std::optional<int> max_rounds) {
    const int limit = max_rounds.value_or(4 * static_cast<int>(g.num_vertices()));
    cops.reset();
    GameTrace trace;
    VertexId r = robber.start();
    if (r < 0 || static_cast<std::size_t>(r) >= g.num_vertices()) throw GameError("robber starts outside the graph");
    trace.steps.push_back({CopSlots(cops.num_cops(), kNoVertex), r, cops.initial_note(), kRootLoop});
    std::vector<VertexId> before;
    for (int round = 1; round <= limit; ++round) {
        CopMove move = cops.next(trace);
        std::vector<VertexId> after = cop_set(move.slots);
        if (after.size() > static_cast<std::size_t>(cops.num_cops()))
            throw GameError("round " + std::to_string(round) + ": more cops than available");
        VertexId r2 = robber.respond(before, after, r);
        if (r2 != r) {
            auto reach = reachable_from(g, r, blocked_by(g.num_vertices(), before, after));
            if (r2 < 0 || static_cast<std::size_t>(r2) >= g.num_vertices() || !reach[r2])
                throw GameError("round " + std::to_string(round) + ": robber move " + std::to_string(g.external_id(r)) +
                                " -> " + (r2 < 0 ? std::string("?") : std::to_string(g.external_id(r2))) +
                                " crosses a cop that stays");
        }
        trace.steps.push_back({std::move(move.slots), r2, std::move(move.note), move.loop});
        if (occupied(after, r2)) {
            trace.outcome = Outcome::CopsWin;
            trace.final_note = cops.capture_note(trace);
            return trace;
        }
        r = r2;
        before = std::move(after);
    }
    trace.outcome = Outcome::RobberWinsCutoff;
    return trace;
}

MonotonicityReport check_cop_monotone(const GameTrace& trace) {
    MonotonicityReport rep;
    std::map<VertexId, int> last_held;     // step index of the latest occupation
    std::map<VertexId, int> left;          // first step after an interval ended
    for (int i = 0; i < static_cast<int>(trace.steps.size()); ++i) {
        auto cops = cop_set(trace.steps[i].slots);
        for (VertexId v : cops) {
            auto it = last_held.find(v);
            if (it != last_held.end() && it->second != i - 1) {
                rep.monotone = false;
                rep.vertex = v;
                rep.left_at = it->second + 1;
                rep.returned_at = i;
                return rep;
            }
            last_held[v] = i;
        }
    }
    return rep;
}

// ----------------------------------------------------------------- distance

LoopDistance::LoopDistance(const ControlFlowGraph& cfg, const LoopForest& forest, LoopId loop)
    : loop_(loop), dist_(cfg.num_vertices(), -1) {
    const std::size_t n = cfg.num_vertices();
    const bool root = loop == kRootLoop;
    const VertexId entry = root ? kNoVertex : forest.element(loop).entry;
    const VertexId target = root ? cfg.stop() : forest.element(loop).exit;
    if (target == kNoVertex) return;

    // For each vertex inside a directly nested element: can it reach that
    // element's exit (resp. stop) without leaving the element?
    std::vector<char> to_exit(n, 0), to_stop(n, 0);
    std::vector<LoopId> blob(n, kNoLoop);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (v != target) blob[v] = forest.directly_nested_containing(loop, v);
    auto backwards = [&](VertexId from, std::vector<char>& mark, LoopId only) {
        std::vector<VertexId> stack;
        for (VertexId p : cfg.predecessors(from))
            if (blob[p] == only && !mark[p]) {
                mark[p] = 1;
                stack.push_back(p);
            }
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (VertexId p : cfg.predecessors(u))
                if (blob[p] == only && !mark[p]) {
                    mark[p] = 1;
                    stack.push_back(p);
                }
        }
    };
    for (LoopId child : forest.element(loop).children) {
        backwards(forest.element(child).exit, to_exit, child);
        if (root) backwards(cfg.stop(), to_stop, child);
    }

    std::vector<char> state(n, 0);   // 0 new, 1 on stack, 2 done
    std::function<int(VertexId)> value = [&](VertexId x) -> int {
        if (state[x] == 2) return dist_[x];
        if (state[x] == 1) throw GraphError("cycle avoiding the loop entry while computing distances");
        state[x] = 1;
        int d = -1;
        if (x == target) {
            d = forest.belongs_of(x) == loop ? 1 : 0;
        } else if (blob[x] != kNoLoop) {
            if (to_exit[x]) d = std::max(d, value(forest.element(blob[x]).exit));
            if (to_stop[x]) d = std::max(d, value(cfg.stop()));
        } else if (forest.belongs_of(x) == loop) {
            int best = -1;
            for (VertexId s : cfg.successors(x)) {
                if (s == entry) continue;
                if (s != target && blob[s] == kNoLoop && forest.belongs_of(s) != loop) continue;
                best = std::max(best, value(s));
            }
            if (best >= 0) d = best + 1;
        }
        state[x] = 2;
        dist_[x] = d;
        return d;
    };
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (v == target || forest.in_inside(v, loop)) value(v);
}

// -------------------------------------------------------------------- audit

StrategyAudit audit_strategy_f(const GameTrace& trace, const ControlFlowGraph& cfg, const LoopForest& forest) {
    StrategyAudit audit;
    audit.round_bound = 2 * static_cast<int>(cfg.num_vertices()) + 2 * forest.max_depth();
    audit.within_round_bound = trace.rounds() <= audit.round_bound;
    if (!audit.within_round_bound)
        audit.problems.push_back(std::to_string(trace.rounds()) + " rounds exceed the bound " +
                                 std::to_string(audit.round_bound));
    std::map<LoopId, LoopDistance> dists;
    auto dist_for = [&](LoopId l) -> const LoopDistance& {
        auto it = dists.find(l);
        if (it == dists.end()) it = dists.emplace(l, LoopDistance(cfg, forest, l)).first;
        return it->second;
    };
    auto name = [&](VertexId v) { return std::to_string(cfg.external_id(v)); };
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
        const auto& step = trace.steps[i];
        const VertexId r = trace.steps[i - 1].robber, r2 = step.robber;
        const LoopId l = step.loop;
        if (r2 != cfg.stop() && !forest.in_inside(r2, l)) {
            audit.confined = false;
            audit.problems.push_back("step " + std::to_string(i) + ": robber at " + name(r2) +
                                     " left the current element");
        }
        if (step.note != "2a" && step.note != "2b") continue;
        if (r2 == cfg.stop() || occupied(cop_set(step.slots), r2)) continue;
        ++audit.chase_moves_checked;
        const LoopDistance& dist = dist_for(l);
        int d = dist(r), d2 = dist(r2);
        if (d2 > d) {
            audit.distance_monotone = false;
            audit.problems.push_back("step " + std::to_string(i) + ": dist grew from " + std::to_string(d) + " at " +
                                     name(r) + " to " + std::to_string(d2) + " at " + name(r2));
        }
        if (forest.belongs_of(r) == l && r2 != r && dist.has_path(r) && d2 >= d) {
            audit.distance_strict = false;
            audit.problems.push_back("step " + std::to_string(i) + ": dist did not drop leaving " + name(r));
        }
    }
    return audit;
}

} // namespace cfgdw
