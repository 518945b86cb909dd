#include "support.hpp"

#include "cfgdw/decomposition.hpp"
#include "cfgdw/error.hpp"
#include "cfgdw/parity_lift.hpp"
#include "cfgdw/serialize.hpp"
#include "cfgdw/validate.hpp"

#include <doctest.h>

using namespace cfgdw;

TEST_CASE("m = 1 gives the CFG back") {
    auto r = cfg_from_source("while c { if x { break; } b; } d;");
    auto game = build_product_game(r.cfg, FormulaSkeleton::identity(), 1);
    CHECK(game.graph.num_vertices() == r.cfg.num_vertices());
    CHECK(game.graph.edge_list() == r.cfg.digraph().edge_list());
    auto d = build_decomposition(r.cfg, r.loops);
    auto lifted = lift_decomposition(d, game);
    CHECK(lifted.bags() == d.bags());
    CHECK(lifted.arcs() == d.arcs());
}

TEST_CASE("m = 2 on a chain") {
    auto r = cfg_from_source("a;");
    REQUIRE(r.cfg.num_vertices() == 3);
    FormulaSkeleton sk;
    sk.m = 2;
    sk.d = 2;
    sk.intra_edges = {{0, 1}};
    sk.cross_edges = {{0, 0, std::nullopt}, {1, 0, std::nullopt}};
    sk.owners = {OwnerRule::Even, OwnerRule::Odd};
    sk.priorities = {0, 1};
    auto game = build_product_game(r.cfg, sk, 0);
    CHECK(game.graph.num_vertices() == 6);
    std::size_t cross = 0;
    for (auto [u, v] : game.graph.edge_list()) {
        VertexId s = game.state_of(u), t = game.state_of(v);
        if (s == t) continue;
        ++cross;
        CHECK(r.cfg.digraph().has_edge(s, t));
    }
    CHECK(cross == 4);
    CHECK(game.graph.num_edges() == 4 + 3);
    CHECK(game.owner[game.vertex(1, 1)] == Player::Odd);
    CHECK(game.priority[game.vertex(2, 0)] == 0);
    CHECK(game.group(1) == std::vector<VertexId>{2, 3});
}

TEST_CASE("skeleton errors") {
    auto r = cfg_from_source("a; b;");
    FormulaSkeleton sk = FormulaSkeleton::identity();
    sk.d = 1;
    CHECK_THROWS_AS(build_product_game(r.cfg, sk, 0), Error);
    sk = FormulaSkeleton::identity();
    sk.m = 0;
    CHECK_THROWS_AS(sk.check(), Error);
    sk = FormulaSkeleton::identity();
    sk.cross_edges.push_back({0, 0, std::pair{2, 0}});
    CHECK_THROWS_AS(build_product_game(r.cfg, sk, 0), GraphError);
    sk = FormulaSkeleton::identity();
    sk.cross_edges = {{0, 3, std::nullopt}};
    CHECK_THROWS_AS(sk.check(), Error);

    auto d = build_decomposition(r.cfg, r.loops);
    auto small = build_product_game(cfg_from_source("a;").cfg, FormulaSkeleton::identity(), 0);
    CHECK_THROWS_AS(lift_decomposition(d, small), GraphError);
}

TEST_CASE("product invariants and lifted widths") {
    int pairs = 0;
    for (std::uint64_t seed = 0; pairs < 240; ++seed) {
        auto r = oracle::random_cfg(seed, 3 + static_cast<int>(seed % 40), seed % 2 == 0);
        if (!r.cfg.stop_reachable()) continue;
        const int m = 1 + static_cast<int>(seed % 4);
        auto sk = FormulaSkeleton::random(m, 2 + static_cast<int>(seed % 3), seed);
        auto game = build_product_game(r.cfg, sk, seed);
        ++pairs;
        REQUIRE(game.graph.num_vertices() == static_cast<std::size_t>(m) * r.cfg.num_vertices());
        for (auto [u, v] : game.graph.edge_list()) {
            VertexId s = game.state_of(u), t = game.state_of(v);
            if (s != t) REQUIRE(r.cfg.digraph().has_edge(s, t));
        }
        for (int p : game.priority) CHECK((p >= 0 && p < sk.d));
        auto d = build_decomposition(r.cfg, r.loops);
        auto lifted = lift_decomposition(d, game);
        CHECK(width(lifted) == width(d) * m);
        CHECK(width(lifted) == oracle::expected_width(r.loops) * m);
        CHECK(lifted.arcs().size() == d.arcs().size());
        auto rep = validate(lifted, game.graph);
        REQUIRE_MESSAGE(rep.valid(), "seed " << seed);
        CHECK(rep.d3_original);
    }
}

TEST_CASE("product game is seeded") {
    auto r = oracle::random_cfg(4, 30);
    auto sk = FormulaSkeleton::random(3, 4, 9);
    auto a = build_product_game(r.cfg, sk, 17), b = build_product_game(r.cfg, sk, 17);
    CHECK(game_to_json(a, r.cfg) == game_to_json(b, r.cfg));
}
