#include "cfgdw/loops.hpp"
#include "cfgdw/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>

namespace cfgdw {

DominatorTree::DominatorTree(VertexId root, std::vector<VertexId> idom) : root_(root), idom_(std::move(idom)) {
    const std::size_t n = idom_.size();
    std::vector<std::vector<VertexId>> children(n);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (v != root_ && idom_[v] != kNoVertex) children[idom_[v]].push_back(v);
    tin_.assign(n, -1);
    tout_.assign(n, -1);
    int clock = 0;
    std::vector<std::pair<VertexId, std::size_t>> stack{{root_, 0}};
    tin_[root_] = clock++;
    preorder_.push_back(root_);
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < children[v].size()) {
            VertexId c = children[v][next++];
            tin_[c] = clock++;
            preorder_.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            tout_[v] = clock++;
            stack.pop_back();
        }
    }
}

namespace {

// Cooper, Harvey and Kennedy's iterative scheme over reverse postorder.
// `succ`/`pred` describe the (possibly reversed, filtered) graph.
template <class Succ, class Pred>
std::vector<VertexId> immediate_dominators(std::size_t n, VertexId root, Succ succ, Pred pred) {
    std::vector<int> po_index(n, -1);
    std::vector<VertexId> postorder;
    std::vector<std::pair<VertexId, std::size_t>> stack{{root, 0}};
    std::vector<bool> seen(n, false);
    seen[root] = true;
    std::vector<VertexId> buf;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        buf.clear();
        succ(v, buf);
        if (next < buf.size()) {
            VertexId w = buf[next++];
            if (!seen[w]) {
                seen[w] = true;
                stack.emplace_back(w, 0);
            }
        } else {
            po_index[v] = static_cast<int>(postorder.size());
            postorder.push_back(v);
            stack.pop_back();
        }
    }
    std::vector<VertexId> idom(n, kNoVertex);
    idom[root] = root;
    auto intersect = [&](VertexId a, VertexId b) {
        while (a != b) {
            while (po_index[a] < po_index[b]) a = idom[a];
            while (po_index[b] < po_index[a]) b = idom[b];
        }
        return a;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
            VertexId v = *it;
            if (v == root) continue;
            VertexId cand = kNoVertex;
            buf.clear();
            pred(v, buf);
            for (VertexId p : buf) {
                if (po_index[p] < 0 || idom[p] == kNoVertex) continue;
                cand = cand == kNoVertex ? p : intersect(p, cand);
            }
            if (cand != idom[v]) {
                idom[v] = cand;
                changed = true;
            }
        }
    }
    idom[root] = kNoVertex;
    return idom;
}

std::string ext(const ControlFlowGraph& cfg, VertexId v) { return std::to_string(cfg.external_id(v)); }

} // namespace

DominatorInfo compute_dominators(const ControlFlowGraph& cfg) {
    const std::size_t n = cfg.num_vertices();
    auto seen = reachable_from(cfg.digraph(), cfg.start());
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (!seen[v] && !(v == cfg.stop() && !cfg.stop_reachable()))
            throw GraphError("vertex " + ext(cfg, v) + " is not reachable from start; prune first");

    auto fwd_succ = [&](VertexId v, std::vector<VertexId>& out) {
        for (VertexId w : cfg.successors(v)) out.push_back(w);
    };
    auto fwd_pred = [&](VertexId v, std::vector<VertexId>& out) {
        for (VertexId w : cfg.predecessors(v)) out.push_back(w);
    };
    // Reversed graph without Stop-kind edges.
    auto rev_succ = [&](VertexId v, std::vector<VertexId>& out) {
        for (VertexId u : cfg.predecessors(v))
            if (*cfg.edge_kind(u, v) != SuccessorKind::Stop) out.push_back(u);
    };
    auto rev_pred = [&](VertexId v, std::vector<VertexId>& out) {
        for (int e : cfg.out_edges(v))
            if (cfg.edges()[e].kind != SuccessorKind::Stop) out.push_back(cfg.edges()[e].to);
    };
    DominatorInfo info;
    info.dom = DominatorTree(cfg.start(), immediate_dominators(n, cfg.start(), fwd_succ, fwd_pred));
    info.postdom = DominatorTree(cfg.stop(), immediate_dominators(n, cfg.stop(), rev_succ, rev_pred));
    return info;
}

namespace {

// Persistent stack of loop ids: the elements whose inside holds a vertex,
// innermost first.
struct Chain {
    LoopId loop;
    std::shared_ptr<const Chain> next;
};
using ChainPtr = std::shared_ptr<const Chain>;

ChainPtr without(const ChainPtr& c, LoopId l) {
    if (!c) return nullptr;
    if (c->loop == l) return c->next;
    auto rest = without(c->next, l);
    if (rest == c->next) return c;
    return std::make_shared<const Chain>(Chain{c->loop, rest});
}

} // namespace

LoopForest loop_regions(const ControlFlowGraph& cfg, const LoopForest& forest, const DominatorInfo& dom) {
    const std::size_t n = cfg.num_vertices();
    std::vector<LoopId> entry_loop(n, kNoLoop), exit_loop(n, kNoLoop);
    for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l) {
        const auto& e = forest.element(l);
        if (entry_loop[e.entry] != kNoLoop) throw GraphError("two loop elements share entry " + ext(cfg, e.entry));
        entry_loop[e.entry] = l;
        if (e.exit != kNoVertex) {
            if (exit_loop[e.exit] != kNoLoop) throw GraphError("two loop elements share exit " + ext(cfg, e.exit));
            exit_loop[e.exit] = l;
        }
    }

    std::vector<ChainPtr> chain(n);
    std::vector<LoopId> parent(forest.size(), kNoLoop);
    std::vector<bool> seen_entry(forest.size(), false);
    for (VertexId v : dom.dom.preorder()) {
        ChainPtr c = v == dom.dom.root() ? nullptr : chain[dom.dom.idom(v)];
        if (exit_loop[v] != kNoLoop) c = without(c, exit_loop[v]);
        if (entry_loop[v] != kNoLoop) {
            LoopId l = entry_loop[v];
            parent[l] = c ? c->loop : kRootLoop;
            seen_entry[l] = true;
            c = std::make_shared<const Chain>(Chain{l, c});
        }
        chain[v] = c;
    }
    for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l) {
        const auto& e = forest.element(l);
        if (!seen_entry[l]) throw GraphError("loop entry " + ext(cfg, e.entry) + " is unreachable");
        if (!chain[e.entry] || chain[e.entry]->loop != l)
            throw GraphError("loop entry " + ext(cfg, e.entry) + " is dominated by its own exit");
    }
    // Laminarity: every chain must follow the derived parent relation.
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        for (const Chain* c = chain[v].get(); c; c = c->next.get()) {
            LoopId expect = c->next ? c->next->loop : kRootLoop;
            if (parent[c->loop] != expect)
                throw GraphError("loop regions at vertex " + ext(cfg, v) + " are not nested");
        }

    // New ids in dominator preorder of the entries so parents come first.
    LoopForest out(n);
    std::vector<LoopId> new_id(forest.size(), kNoLoop);
    new_id[kRootLoop] = kRootLoop;
    for (VertexId v : dom.dom.preorder()) {
        LoopId l = entry_loop[v];
        if (l == kNoLoop) continue;
        new_id[l] = out.add_loop(v, forest.element(l).exit, new_id[parent[l]]);
    }
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        bool covered = dom.dom.covers(v) && v != cfg.stop();
        out.set_belongs(v, covered && chain[v] ? new_id[chain[v]->loop] : kRootLoop);
    }
    out.finalize();
    return out;
}

LoopForest recover_loops(const ControlFlowGraph& cfg, const DominatorInfo& dom) {
    const std::size_t n = cfg.num_vertices();
    LoopForest flat(n);
    std::vector<bool> is_header(n, false);
    Digraph forward(n);
    for (const auto& e : cfg.edges()) {
        if (dom.dom.dominates(e.to, e.from)) is_header[e.to] = true;
        else forward.add_edge(e.from, e.to);
    }
    if (!is_acyclic(forward)) throw GraphError("irreducible control flow: a cycle has no dominating entry");

    std::vector<char> in_body(n, 0);
    for (VertexId h : dom.dom.preorder()) {
        if (!is_header[h]) continue;
        std::fill(in_body.begin(), in_body.end(), 0);
        in_body[h] = 1;
        std::vector<VertexId> work;
        for (VertexId u : cfg.predecessors(h))
            if (dom.dom.dominates(h, u) && !in_body[u]) {
                in_body[u] = 1;
                work.push_back(u);
            }
        while (!work.empty()) {
            VertexId u = work.back();
            work.pop_back();
            for (VertexId p : cfg.predecessors(u))
                if (!in_body[p] && dom.dom.dominates(h, p)) {
                    in_body[p] = 1;
                    work.push_back(p);
                }
        }
        // The region of a candidate exit x is everything h dominates and x
        // does not. For the real exit that region is entered only through h
        // and left only towards x or stop.
        auto is_exit = [&](VertexId x) {
            if (x == cfg.stop() || x == h || !dom.dom.dominates(h, x)) return false;
            auto in_region = [&](VertexId v) {
                return v != cfg.stop() && dom.dom.dominates(h, v) && !dom.dom.dominates(x, v);
            };
            bool reached = false;
            for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
                if (!in_region(v)) continue;
                for (VertexId w : cfg.successors(v)) {
                    if (w == x) reached = true;
                    else if (w != cfg.stop() && !in_region(w)) return false;
                }
                if (v == h) continue;
                for (VertexId p : cfg.predecessors(v))
                    if (!in_region(p)) return false;
            }
            return reached;
        };
        VertexId exit = kNoVertex;
        if (dom.postdom.covers(h)) {
            for (VertexId x = dom.postdom.idom(h); x != kNoVertex; x = dom.postdom.idom(x))
                if (!in_body[x]) {
                    if (is_exit(x)) exit = x;
                    break;
                }
        }
        if (exit == kNoVertex) {
            // Breadth-first from the natural loop through what h dominates.
            std::vector<char> seen(in_body.begin(), in_body.end());
            std::vector<VertexId> queue;
            for (VertexId u = 0; u < static_cast<VertexId>(n); ++u)
                if (in_body[u])
                    for (VertexId w : cfg.successors(u))
                        if (!seen[w] && w != cfg.stop()) {
                            seen[w] = 1;
                            queue.push_back(w);
                        }
            for (std::size_t i = 0; i < queue.size() && exit == kNoVertex; ++i) {
                VertexId x = queue[i];
                if (is_exit(x)) {
                    exit = x;
                    break;
                }
                if (!dom.dom.dominates(h, x)) continue;
                for (VertexId w : cfg.successors(x))
                    if (!seen[w] && w != cfg.stop()) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
            }
        }
        if (exit == kNoVertex || exit == cfg.stop())
            throw GraphError("loop at " + ext(cfg, h) + " has no exit vertex");
        flat.add_loop(h, exit, kRootLoop);
    }
    flat.finalize();
    return loop_regions(cfg, flat, dom);
}

void require_analyzable(const ControlFlowGraph& cfg, const LoopForest& forest) {
    if (!cfg.stop_reachable()) throw GraphError("stop is unreachable from start");
    for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l)
        if (forest.element(l).exit == kNoVertex)
            throw GraphError("loop at " + ext(cfg, forest.element(l).entry) + " never exits");
}

std::vector<EdgeClass> classify_edges(const ControlFlowGraph& cfg, const LoopForest& forest) {
    std::vector<EdgeClass> out;
    out.reserve(cfg.num_edges());
    for (const auto& e : cfg.edges()) {
        LoopId l = forest.loop_with_entry(e.to);
        out.push_back(l != kNoLoop && forest.belongs_of(e.from) == l ? EdgeClass::Backward : EdgeClass::Forward);
    }
    return out;
}

std::vector<EdgeClass> classify_edges_by_dominators(const ControlFlowGraph& cfg, const DominatorInfo& dom) {
    std::vector<EdgeClass> out;
    out.reserve(cfg.num_edges());
    for (const auto& e : cfg.edges())
        out.push_back(dom.dom.dominates(e.to, e.from) ? EdgeClass::Backward : EdgeClass::Forward);
    return out;
}

std::vector<EdgeClass> classify_edges_checked(const ControlFlowGraph& cfg, const LoopForest& forest,
                                              const DominatorInfo& dom) {
    auto syn = classify_edges(cfg, forest);
    auto by_dom = classify_edges_by_dominators(cfg, dom);
    for (std::size_t i = 0; i < syn.size(); ++i)
        if (syn[i] != by_dom[i]) {
            const auto& e = cfg.edges()[i];
            throw GraphError("edge " + ext(cfg, e.from) + "->" + ext(cfg, e.to) +
                             " is classified differently by loop structure and by dominance");
        }
    return syn;
}

CycleReport check_cycle_entries(const ControlFlowGraph& cfg, const LoopForest& forest, std::size_t max_vertices) {
    CycleReport report;
    const std::size_t n = cfg.num_vertices();
    if (n > max_vertices || n > 30) return report;
    report.evaluated = true;

    using Mask = std::uint32_t;
    std::vector<Mask> inside(forest.size(), 0), belongs(forest.size(), 0);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        belongs[forest.belongs_of(v)] |= Mask{1} << v;
        for (LoopId l = forest.belongs_of(v); l != kNoLoop; l = forest.element(l).parent) inside[l] |= Mask{1} << v;
    }
    auto check = [&](const std::vector<VertexId>& cycle) {
        ++report.cycles_checked;
        Mask c = 0;
        for (VertexId v : cycle) c |= Mask{1} << v;
        for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l) {
            if ((c & ~inside[l]) || !(c & belongs[l])) continue;
            if (!(c >> forest.element(l).entry & 1)) report.violations.push_back({cycle, l});
        }
    };
    // Simple cycles, each enumerated once from its smallest vertex.
    std::vector<VertexId> path;
    std::function<void(VertexId, VertexId, Mask)> dfs = [&](VertexId s, VertexId v, Mask on) {
        for (VertexId w : cfg.successors(v)) {
            if (w == s) {
                check(path);
            } else if (w > s && !(on >> w & 1)) {
                path.push_back(w);
                dfs(s, w, on | Mask{1} << w);
                path.pop_back();
            }
        }
    };
    for (VertexId s = 0; s < static_cast<VertexId>(n); ++s) {
        path.assign(1, s);
        dfs(s, s, Mask{1} << s);
    }
    return report;
}

CfgWithLoops with_recovered_loops(ControlFlowGraph cfg) {
    auto dom = compute_dominators(cfg);
    LoopForest forest = recover_loops(cfg, dom);
    return {std::move(cfg), std::move(forest)};
}

} // namespace cfgdw
