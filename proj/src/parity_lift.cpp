#include "cfgdw/parity_lift.hpp"
#include "cfgdw/error.hpp"

#include <random>

namespace cfgdw {

std::vector<VertexId> GameGraph::group(VertexId state) const {
    std::vector<VertexId> out;
    for (std::size_t k = 0; k < m; ++k) out.push_back(vertex(state, static_cast<int>(k)));
    return out;
}

FormulaSkeleton FormulaSkeleton::identity() {
    FormulaSkeleton s;
    s.m = 1;
    s.d = 2;
    s.cross_edges = {{0, 0, std::nullopt}};
    s.owners = {OwnerRule::Even};
    s.priorities = {0};
    return s;
}

FormulaSkeleton FormulaSkeleton::random(int m, int d, std::uint64_t seed) {
    FormulaSkeleton s;
    s.m = m;
    s.d = d;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> slot(0, m - 1);
    for (int k = 0; k < m; ++k) {
        s.cross_edges.push_back({k, slot(rng), std::nullopt});
        if (rng() % 3 == 0) s.cross_edges.push_back({k, slot(rng), std::nullopt});
        if (m > 1 && rng() % 2 == 0) {
            int b = slot(rng);
            if (b != k) s.intra_edges.emplace_back(k, b);
        }
    }
    s.owners.assign(m, OwnerRule::Any);
    s.priorities.assign(m, -1);
    return s;
}

void FormulaSkeleton::check() const {
    if (m < 1) throw Error("formula skeleton needs m >= 1");
    if (d < 2) throw Error("formula skeleton needs at least 2 priorities");
    if (owners.size() != static_cast<std::size_t>(m) || priorities.size() != static_cast<std::size_t>(m))
        throw Error("owner and priority patterns must have m entries");
    auto in_range = [&](int k) { return k >= 0 && k < m; };
    for (const auto& [a, b] : intra_edges)
        if (!in_range(a) || !in_range(b)) throw Error("intra edge slot out of range");
    for (const auto& c : cross_edges)
        if (!in_range(c.from) || !in_range(c.to)) throw Error("cross edge slot out of range");
    for (int p : priorities)
        if (p < -1 || p >= d) throw Error("priority out of range");
}

GameGraph build_product_game(const ControlFlowGraph& cfg, const FormulaSkeleton& skeleton, std::uint64_t seed) {
    skeleton.check();
    for (const auto& c : skeleton.cross_edges) {
        if (!c.only_on) continue;
        auto s = cfg.find_external(c.only_on->first), t = cfg.find_external(c.only_on->second);
        if (!s || !t || !cfg.edge_kind(*s, *t))
            throw GraphError("cross edge requested on " + std::to_string(c.only_on->first) + "->" +
                             std::to_string(c.only_on->second) + ", which is not a transition");
    }
    GameGraph game;
    game.m = static_cast<std::size_t>(skeleton.m);
    game.num_states = cfg.num_vertices();
    game.graph = Digraph(game.num_states * game.m);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> prio(0, skeleton.d - 1);
    for (VertexId s = 0; s < static_cast<VertexId>(game.num_states); ++s)
        for (int k = 0; k < skeleton.m; ++k) {
            OwnerRule o = skeleton.owners[k];
            game.owner.push_back(o == OwnerRule::Even  ? Player::Even
                                 : o == OwnerRule::Odd ? Player::Odd
                                 : (rng() & 1)          ? Player::Odd
                                                        : Player::Even);
            game.priority.push_back(skeleton.priorities[k] >= 0 ? skeleton.priorities[k] : prio(rng));
        }
    for (VertexId s = 0; s < static_cast<VertexId>(game.num_states); ++s)
        for (const auto& [a, b] : skeleton.intra_edges) game.graph.add_edge(game.vertex(s, a), game.vertex(s, b));
    for (const auto& e : cfg.edges())
        for (const auto& c : skeleton.cross_edges) {
            if (c.only_on &&
                (c.only_on->first != cfg.external_id(e.from) || c.only_on->second != cfg.external_id(e.to)))
                continue;
            game.graph.add_edge(game.vertex(e.from, c.from), game.vertex(e.to, c.to));
        }
    return game;
}

DagDecomposition lift_decomposition(const DagDecomposition& d, const GameGraph& game) {
    std::vector<std::vector<VertexId>> bags;
    bags.reserve(d.num_nodes());
    for (std::size_t i = 0; i < d.num_nodes(); ++i) {
        std::vector<VertexId> lifted;
        for (VertexId s : d.bag(static_cast<int>(i))) {
            if (s < 0 || static_cast<std::size_t>(s) >= game.num_states)
                throw GraphError("no group for bag vertex " + std::to_string(s));
            auto g = game.group(s);
            lifted.insert(lifted.end(), g.begin(), g.end());
        }
        bags.push_back(std::move(lifted));
    }
    return DagDecomposition::from_bags(d.node_ids(), d.arcs(), bags);
}

} // namespace cfgdw
