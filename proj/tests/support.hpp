#pragma once

// Independent reference implementations used as oracles by the tests. They
// favour obviousness over speed and share no code with the library beyond
// the graph containers.

#include "cfgdw/cfg.hpp"
#include "cfgdw/decomposition.hpp"
#include "cfgdw/digraph.hpp"
#include "cfgdw/loop_forest.hpp"
#include "cfgdw/program_gen.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using cfgdw::Digraph;
using cfgdw::VertexId;

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(CFGDW_FIXTURES) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline cfgdw::CfgWithLoops random_cfg(std::uint64_t seed, int size, bool contract = false) {
    return cfgdw::cfg_from_source(cfgdw::generate_random_program(seed, size), contract);
}

// reach[u][v]: a directed path u ->* v exists (reflexive).
inline std::vector<std::vector<char>> closure(const Digraph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<VertexId> stack{static_cast<VertexId>(s)};
        r[s][s] = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (VertexId w : g.successors(u))
                if (!r[s][w]) {
                    r[s][w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return r;
}

// u dominates v iff v cannot be reached from the root once u is deleted.
inline bool dominates(const Digraph& g, VertexId root, VertexId u, VertexId v) {
    if (u == v) return true;
    if (u == root) return true;
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<VertexId> stack{root};
    seen[root] = 1;
    seen[u] = 1;
    while (!stack.empty()) {
        VertexId x = stack.back();
        stack.pop_back();
        if (x == v) return false;
        for (VertexId w : g.successors(x))
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return true;
}

// Width the bag rule yields: {v, entry, exit} has three vertices unless v is
// the entry itself, so a loop whose only member is its entry (a contracted
// single-block do-while) gives 2.
inline int expected_width(const cfgdw::LoopForest& f) {
    int w = 1;
    for (std::size_t l = 1; l < f.size(); ++l) w = std::max(w, f.element(static_cast<cfgdw::LoopId>(l)).belongs.size() > 1 ? 3 : 2);
    return w;
}

inline std::set<VertexId> bag_set(const cfgdw::DagDecomposition& d, int node) {
    auto b = d.bag(node);
    return {b.begin(), b.end()};
}

// Condition 2 by enumerating every triple i <= k <= j.
inline bool connectivity(const cfgdw::DagDecomposition& d) {
    auto r = closure(d.dag());
    const int n = static_cast<int>(d.num_nodes());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!r[i][j]) continue;
            auto bi = bag_set(d, i), bj = bag_set(d, j);
            for (int k = 0; k < n; ++k) {
                if (!r[i][k] || !r[k][j]) continue;
                auto bk = bag_set(d, k);
                for (VertexId v : bi)
                    if (bj.count(v) && !bk.count(v)) return false;
            }
        }
    return true;
}

inline std::set<VertexId> successor_union(const cfgdw::DagDecomposition& d, const std::vector<std::vector<char>>& r,
                                          int j) {
    std::set<VertexId> out;
    for (int k = 0; k < static_cast<int>(d.num_nodes()); ++k)
        if (r[j][k])
            for (VertexId v : d.bag(k)) out.insert(v);
    return out;
}

// {sources, arcs} edge covering, straight from the definition.
inline std::pair<bool, bool> edges_covered(const cfgdw::DagDecomposition& d, const Digraph& g) {
    auto r = closure(d.dag());
    auto dag = d.dag();
    bool sources = true, arcs = true;
    for (int j = 0; j < static_cast<int>(d.num_nodes()); ++j) {
        if (!dag.predecessors(j).empty()) continue;
        auto up = successor_union(d, r, j);
        for (VertexId u : d.bag(j))
            for (VertexId v : g.successors(u))
                if (!up.count(v)) sources = false;
    }
    for (auto [i, j] : d.arcs()) {
        auto up = successor_union(d, r, j);
        auto bi = bag_set(d, i);
        for (VertexId u : d.bag(j)) {
            if (bi.count(u)) continue;
            for (VertexId v : g.successors(u))
                if (!up.count(v)) arcs = false;
        }
    }
    return {sources, arcs};
}

inline bool guards(const std::set<VertexId>& w, const std::set<VertexId>& vp, const Digraph& g) {
    for (VertexId u : vp)
        for (VertexId v : g.successors(u))
            if (!vp.count(v) && !w.count(v)) return false;
    return true;
}

// The guarding form of the edge condition.
inline bool d3(const cfgdw::DagDecomposition& d, const Digraph& g) {
    auto r = closure(d.dag());
    auto dag = d.dag();
    for (int j = 0; j < static_cast<int>(d.num_nodes()); ++j)
        if (dag.predecessors(j).empty() && !guards({}, successor_union(d, r, j), g)) return false;
    for (auto [i, j] : d.arcs()) {
        auto bi = bag_set(d, i), bj = bag_set(d, j);
        std::set<VertexId> w, vp;
        for (VertexId v : bi)
            if (bj.count(v)) w.insert(v);
        for (VertexId v : successor_union(d, r, j))
            if (!bi.count(v)) vp.insert(v);
        if (!guards(w, vp, g)) return false;
    }
    return true;
}

// Longest count of belongs(L) vertices on a simple path from v to the target
// (exit of L, or stop for the root) through inside(L), never visiting L's
// entry after the first vertex. -1 when there is no such path.
inline int dist(const cfgdw::ControlFlowGraph& cfg, const cfgdw::LoopForest& forest, cfgdw::LoopId l, VertexId v) {
    const bool root = l == cfgdw::kRootLoop;
    const VertexId entry = root ? cfgdw::kNoVertex : forest.element(l).entry;
    const VertexId target = root ? cfg.stop() : forest.element(l).exit;
    auto allowed = [&](VertexId x) {
        if (x == target) return true;
        if (x == cfg.stop()) return false;
        for (cfgdw::LoopId a = forest.belongs_of(x); a != cfgdw::kNoLoop; a = forest.element(a).parent)
            if (a == l) return true;
        return false;
    };
    int best = -1;
    std::vector<char> on(cfg.num_vertices(), 0);
    std::function<void(VertexId, int)> walk = [&](VertexId x, int count) {
        count += forest.belongs_of(x) == l ? 1 : 0;
        if (x == target) {
            best = std::max(best, count);
            return;
        }
        on[x] = 1;
        for (VertexId w : cfg.successors(x))
            if (!on[w] && w != entry && allowed(w)) walk(w, count);
        on[x] = 0;
    };
    walk(v, 0);
    return best;
}

} // namespace oracle
