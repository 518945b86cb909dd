#include "cfgdw/cfg.hpp"
#include "cfgdw/error.hpp"

#include <algorithm>
#include <numeric>

namespace cfgdw {

std::string_view to_string(SuccessorKind kind) {
    switch (kind) {
    case SuccessorKind::Out: return "out";
    case SuccessorKind::Exit: return "exit";
    case SuccessorKind::Entry: return "entry";
    case SuccessorKind::Stop: return "stop";
    }
    return "?";
}

std::optional<SuccessorKind> successor_kind_from_string(std::string_view s) {
    if (s == "out") return SuccessorKind::Out;
    if (s == "exit") return SuccessorKind::Exit;
    if (s == "entry") return SuccessorKind::Entry;
    if (s == "stop") return SuccessorKind::Stop;
    return std::nullopt;
}

VertexId ControlFlowGraph::add_vertex(std::string label, int external_id) {
    VertexId v = graph_.add_vertex(external_id < 0 ? static_cast<int>(labels_.size()) : external_id);
    labels_.push_back(std::move(label));
    out_.emplace_back();
    return v;
}

void ControlFlowGraph::add_edge(VertexId from, VertexId to, SuccessorKind kind) {
    if (!graph_.add_edge(from, to)) {
        for (int e : out_[from])
            if (edges_[e].to == to) edges_[e].kind = std::min(edges_[e].kind, kind);
        return;
    }
    out_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, to, kind});
}

std::optional<SuccessorKind> ControlFlowGraph::edge_kind(VertexId from, VertexId to) const {
    for (int e : out_[from])
        if (edges_[e].to == to) return edges_[e].kind;
    return std::nullopt;
}

std::optional<VertexId> ControlFlowGraph::find_external(int id) const {
    const auto& ids = graph_.external_ids();
    for (std::size_t v = 0; v < ids.size(); ++v)
        if (ids[v] == id) return static_cast<VertexId>(v);
    return std::nullopt;
}

namespace {

struct Target {
    VertexId vertex;
    SuccessorKind kind;
};

struct PendingLoop {
    VertexId entry = kNoVertex;
    VertexId exit = kNoVertex;
    int parent = -1;   // index into the pending list, -1 for the root
};

// Vertex ids per statement, filled by the allocation pass.
struct StmtVertices {
    VertexId main = kNoVertex;   // assign, branch condition, loop condition
    VertexId head = kNoVertex;   // do-while head
    VertexId exit = kNoVertex;   // loop exit
    int loop = -1;               // pending-loop index of a loop statement
};

class Builder {
  public:
    explicit Builder(const StructuredAst& ast) : ast_(ast), slots_(ast.num_nodes) {}

    CfgWithLoops run() {
        VertexId start = vertex("start", -1);
        allocate(*ast_.root, -1);
        VertexId stop = vertex("stop", -1);
        cfg_.set_start(start);
        cfg_.set_stop(stop);

        Target first = wire(*ast_.root, {stop, SuccessorKind::Out}, -1);
        cfg_.add_edge(start, first.vertex, first.kind);

        LoopForest forest(cfg_.num_vertices());
        for (const auto& p : loops_) forest.add_loop(p.entry, p.exit, p.parent + 1);
        for (VertexId v = 0; v < static_cast<VertexId>(owner_.size()); ++v) forest.set_belongs(v, owner_[v] + 1);
        forest.finalize();
        return {std::move(cfg_), std::move(forest)};
    }

  private:
    VertexId vertex(std::string label, int loop) {
        owner_.push_back(loop);
        return cfg_.add_vertex(std::move(label));
    }

    void allocate(const Stmt& s, int loop) {
        auto& slot = slots_[s.id];
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Assign>) {
                    slot.main = vertex(n.label, loop);
                } else if constexpr (std::is_same_v<T, Sequence>) {
                    for (const auto& c : n.body) allocate(*c, loop);
                } else if constexpr (std::is_same_v<T, If>) {
                    slot.main = vertex(n.cond, loop);
                    allocate(*n.then_branch, loop);
                    if (n.else_branch) allocate(*n.else_branch, loop);
                } else if constexpr (std::is_same_v<T, While>) {
                    int me = static_cast<int>(loops_.size());
                    loops_.push_back({kNoVertex, kNoVertex, loop});
                    slot.loop = me;
                    slot.main = vertex(n.cond, me);
                    allocate(*n.body, me);
                    slot.exit = vertex("exit(" + n.cond + ")", loop);
                    loops_[me].entry = slot.main;
                    loops_[me].exit = slot.exit;
                } else if constexpr (std::is_same_v<T, DoWhile>) {
                    int me = static_cast<int>(loops_.size());
                    loops_.push_back({kNoVertex, kNoVertex, loop});
                    slot.loop = me;
                    slot.head = vertex("do", me);
                    allocate(*n.body, me);
                    slot.main = vertex(n.cond, me);
                    slot.exit = vertex("exit(" + n.cond + ")", loop);
                    loops_[me].entry = slot.head;
                    loops_[me].exit = slot.exit;
                }
            },
            s.node);
    }

    Target wire(const Stmt& s, Target cont, int loop) {
        const auto& slot = slots_[s.id];
        return std::visit(
            [&](const auto& n) -> Target {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Assign>) {
                    cfg_.add_edge(slot.main, cont.vertex, cont.kind);
                    return {slot.main, SuccessorKind::Out};
                } else if constexpr (std::is_same_v<T, Sequence>) {
                    Target next = cont;
                    for (auto it = n.body.rbegin(); it != n.body.rend(); ++it) next = wire(**it, next, loop);
                    return next;
                } else if constexpr (std::is_same_v<T, If>) {
                    Target t = wire(*n.then_branch, cont, loop);
                    Target e = n.else_branch ? wire(*n.else_branch, cont, loop) : cont;
                    cfg_.add_edge(slot.main, t.vertex, t.kind);
                    cfg_.add_edge(slot.main, e.vertex, e.kind);
                    return {slot.main, SuccessorKind::Out};
                } else if constexpr (std::is_same_v<T, While>) {
                    Target body = wire(*n.body, {slot.main, SuccessorKind::Entry}, slot.loop);
                    cfg_.add_edge(slot.main, body.vertex, body.kind);
                    if (!is_constant_true(n.cond)) cfg_.add_edge(slot.main, slot.exit, SuccessorKind::Out);
                    cfg_.add_edge(slot.exit, cont.vertex, cont.kind);
                    return {slot.main, SuccessorKind::Out};
                } else if constexpr (std::is_same_v<T, DoWhile>) {
                    Target body = wire(*n.body, {slot.main, SuccessorKind::Out}, slot.loop);
                    cfg_.add_edge(slot.head, body.vertex, body.kind);
                    cfg_.add_edge(slot.main, slot.head, SuccessorKind::Entry);
                    if (!is_constant_true(n.cond)) cfg_.add_edge(slot.main, slot.exit, SuccessorKind::Out);
                    cfg_.add_edge(slot.exit, cont.vertex, cont.kind);
                    return {slot.head, SuccessorKind::Out};
                } else if constexpr (std::is_same_v<T, Break>) {
                    return {loops_[loop].exit, SuccessorKind::Exit};
                } else if constexpr (std::is_same_v<T, Continue>) {
                    return {loops_[loop].entry, SuccessorKind::Entry};
                } else {
                    return {cfg_.stop(), SuccessorKind::Stop};
                }
            },
            s.node);
    }

    const StructuredAst& ast_;
    std::vector<StmtVertices> slots_;
    std::vector<PendingLoop> loops_;
    std::vector<int> owner_;
    ControlFlowGraph cfg_;
};

// Copies the kept vertices (in old order) and the edges between them, sorted
// by (from, to) in the new numbering.
ControlFlowGraph rebuild(const ControlFlowGraph& in, const std::vector<VertexId>& old_to_new, std::size_t n,
                         const std::vector<std::string>& labels, const std::vector<CfgEdge>& edges) {
    ControlFlowGraph out;
    std::vector<int> ext(n);
    for (VertexId v = 0; v < static_cast<VertexId>(old_to_new.size()); ++v)
        if (old_to_new[v] != kNoVertex) ext[old_to_new[v]] = in.external_id(v);
    for (std::size_t v = 0; v < n; ++v) out.add_vertex(labels[v], ext[v]);
    std::vector<CfgEdge> mapped;
    mapped.reserve(edges.size());
    for (const auto& e : edges) {
        VertexId a = old_to_new[e.from], b = old_to_new[e.to];
        if (a != kNoVertex && b != kNoVertex) mapped.push_back({a, b, e.kind});
    }
    std::stable_sort(mapped.begin(), mapped.end(),
                     [](const CfgEdge& x, const CfgEdge& y) { return std::tie(x.from, x.to) < std::tie(y.from, y.to); });
    for (const auto& e : mapped) out.add_edge(e.from, e.to, e.kind);
    out.set_start(old_to_new[in.start()]);
    out.set_stop(old_to_new[in.stop()]);
    return out;
}

std::vector<VertexId> prune_map(const ControlFlowGraph& in, std::size_t& kept, bool& stop_reachable) {
    auto seen = reachable_from(in.digraph(), in.start());
    stop_reachable = seen[in.stop()] && in.stop_reachable();
    seen[in.stop()] = true;
    std::vector<VertexId> map(in.num_vertices(), kNoVertex);
    kept = 0;
    for (std::size_t v = 0; v < in.num_vertices(); ++v)
        if (seen[v]) map[v] = static_cast<VertexId>(kept++);
    return map;
}

} // namespace

CfgWithLoops build_cfg(const StructuredAst& ast) { return Builder(ast).run(); }

ControlFlowGraph prune_unreachable(const ControlFlowGraph& in) {
    std::size_t kept;
    bool stop_ok;
    auto map = prune_map(in, kept, stop_ok);
    std::vector<std::string> labels(kept);
    for (std::size_t v = 0; v < in.num_vertices(); ++v)
        if (map[v] != kNoVertex) labels[map[v]] = in.label(static_cast<VertexId>(v));
    ControlFlowGraph out = rebuild(in, map, kept, labels, in.edges());
    out.set_stop_reachable(stop_ok);
    return out;
}

CfgWithLoops prune_unreachable(const CfgWithLoops& in) {
    std::size_t kept;
    bool stop_ok;
    auto map = prune_map(in.cfg, kept, stop_ok);
    CfgWithLoops out{prune_unreachable(in.cfg), in.loops.remap(map, kept)};
    return out;
}

CfgWithLoops contract_basic_blocks(const CfgWithLoops& in) {
    const ControlFlowGraph& g = in.cfg;
    const std::size_t n = g.num_vertices();
    auto protected_vertex = [&](VertexId v) {
        return v == g.start() || v == g.stop() || in.loops.loop_with_entry(v) != kNoLoop ||
               in.loops.loop_with_exit(v) != kNoLoop;
    };
    // next[u] = v when (u,v) is contracted. Each vertex has at most one such
    // in- and out-edge, so the contracted edges form disjoint paths.
    std::vector<VertexId> next(n, kNoVertex);
    std::vector<bool> absorbed(n, false);
    for (VertexId u = 0; u < static_cast<VertexId>(n); ++u) {
        if (g.successors(u).size() != 1 || u == g.start() || u == g.stop()) continue;
        VertexId v = g.successors(u)[0];
        if (v == u || g.predecessors(v).size() != 1 || protected_vertex(v)) continue;
        next[u] = v;
        absorbed[v] = true;
    }
    std::vector<VertexId> rep(n, kNoVertex);
    std::vector<VertexId> map(n, kNoVertex);
    std::size_t kept = 0;
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (!absorbed[v]) map[v] = static_cast<VertexId>(kept++);
    std::vector<std::string> labels(kept);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        if (absorbed[v]) continue;
        std::string label = g.label(v);
        rep[v] = v;
        for (VertexId w = next[v]; w != kNoVertex; w = next[w]) {
            rep[w] = v;
            label += ";" + g.label(w);
        }
        labels[map[v]] = std::move(label);
    }
    // Out-edges of a chain come from its last vertex; internal edges vanish.
    std::vector<CfgEdge> edges;
    edges.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        if (next[e.from] == e.to) continue;
        edges.push_back({rep[e.from], e.to, e.kind});
    }
    ControlFlowGraph cfg = rebuild(g, map, kept, labels, edges);
    cfg.set_stop_reachable(g.stop_reachable());
    return {std::move(cfg), in.loops.remap(map, kept)};
}

CfgWithLoops cfg_from_source(std::string_view source, bool contract) {
    CfgWithLoops built = prune_unreachable(build_cfg(parse_program(source)));
    return contract ? contract_basic_blocks(built) : built;
}

void check_cfg_invariants(const ControlFlowGraph& cfg) {
    if (cfg.start() == kNoVertex || cfg.stop() == kNoVertex) throw GraphError("start or stop missing");
    if (!cfg.predecessors(cfg.start()).empty())
        throw GraphError("start " + std::to_string(cfg.external_id(cfg.start())) + " has incoming edges");
    if (!cfg.successors(cfg.stop()).empty())
        throw GraphError("stop " + std::to_string(cfg.external_id(cfg.stop())) + " has outgoing edges");
    auto seen = reachable_from(cfg.digraph(), cfg.start());
    for (std::size_t v = 0; v < cfg.num_vertices(); ++v) {
        if (seen[v]) continue;
        if (static_cast<VertexId>(v) == cfg.stop() && !cfg.stop_reachable()) continue;
        throw GraphError("vertex " + std::to_string(cfg.external_id(static_cast<VertexId>(v))) +
                         " is not reachable from start");
    }
}

} // namespace cfgdw
