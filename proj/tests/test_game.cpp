#include "support.hpp"

#include "cfgdw/error.hpp"
#include "cfgdw/game.hpp"
#include "cfgdw/game_solver.hpp"
#include "cfgdw/loops.hpp"
#include "cfgdw/serialize.hpp"

#include <doctest.h>

#include <tuple>

using namespace cfgdw;

namespace {

CfgWithLoops two_loops() { return with_recovered_loops(cfg_from_json(oracle::read_fixture("two_loops.json"))); }

// (slots, robber, note) with external ids, -1 for an unused cop.
using Row = std::tuple<std::vector<int>, int, std::string>;

std::vector<Row> rows(const GameTrace& t, const Digraph& g) {
    std::vector<Row> out;
    for (const auto& s : t.steps) {
        std::vector<int> slots;
        for (VertexId v : s.slots) slots.push_back(v == kNoVertex ? -1 : g.external_id(v));
        out.emplace_back(slots, g.external_id(s.robber), s.note);
    }
    return out;
}

GameTrace play_f(const CfgWithLoops& r, TieBreak tie, VertexId start) {
    StrategyF f(r.cfg, r.loops);
    LazyRobber robber(r.cfg.digraph(), start, tie);
    return play_game(r.cfg.digraph(), f, robber);
}

} // namespace

TEST_CASE("golden trace I") {
    auto r = two_loops();
    auto t = play_f(r, TieBreak::LargestId, *r.cfg.find_external(0));
    std::vector<Row> expect{
        {{-1, -1, -1}, 0, "1"},  {{-1, -1, 0}, 1, "2a"}, {{-1, -1, 3}, 1, "2b"},
        {{1, -1, 3}, 2, "5"},    {{1, 3, 2}, 9, "2a"},   {{1, 3, 12}, 9, "2b"},
        {{9, 3, 12}, 10, "5"},   {{9, 12, 10}, 11, "2a"}, {{9, 12, 11}, 11, "2a"},
    };
    CHECK(rows(t, r.cfg.digraph()) == expect);
    CHECK(t.outcome == Outcome::CopsWin);
    CHECK(t.final_note == "4a");
    CHECK(check_cop_monotone(t).monotone);
}

TEST_CASE("golden trace II") {
    auto r = two_loops();
    auto t = play_f(r, TieBreak::SmallestId, *r.cfg.find_external(0));
    std::vector<Row> expect{
        {{-1, -1, -1}, 0, "1"}, {{-1, -1, 0}, 1, "2a"}, {{-1, -1, 3}, 1, "2b"},
        {{1, -1, 3}, 2, "5"},   {{1, 3, 2}, 5, "2a"},   {{1, 3, 8}, 5, "2b"},
        {{5, 3, 8}, 6, "5"},    {{5, 8, 6}, 7, "2a"},   {{5, 8, 7}, 7, "2a"},
    };
    CHECK(rows(t, r.cfg.digraph()) == expect);
    CHECK(t.outcome == Outcome::CopsWin);
    CHECK(t.final_note == "4a");
    CHECK(t.rounds() <= 10);
}

TEST_CASE("cop monotonicity check") {
    GameTrace t;
    CHECK(check_cop_monotone(t).monotone);
    t.steps.push_back({{kNoVertex}, 0, "", kNoLoop});
    CHECK(check_cop_monotone(t).monotone);
    t.steps.push_back({{2}, 1, "", kNoLoop});
    t.steps.push_back({{3}, 1, "", kNoLoop});
    t.steps.push_back({{2}, 1, "", kNoLoop});
    auto rep = check_cop_monotone(t);
    CHECK(!rep.monotone);
    CHECK(rep.vertex == 2);
    CHECK(rep.left_at == 2);
    CHECK(rep.returned_at == 3);
}

TEST_CASE("lazy robber") {
    auto r = cfg_from_source("a; if x { b; } else { c; } d;");
    const auto& g = r.cfg.digraph();
    LazyRobber lazy(g, 2);
    CHECK(lazy.respond({}, {0}, 2) == 2);
    // Cop lands on x: nearest free vertices b and c are tied; smallest id wins.
    CHECK(lazy.respond({}, {2}, 2) == 3);
    LazyRobber big(g, 2, TieBreak::LargestId);
    CHECK(big.respond({}, {2}, 2) == 4);
    // Everything ahead is occupied or blocked by cops that stay.
    CHECK(lazy.respond({3, 4}, {2, 3, 4}, 2) == 2);
}

TEST_CASE("illegal robber moves are rejected") {
    struct Backwards final : RobberStrategy {
        VertexId start() override { return 2; }
        VertexId respond(const std::vector<VertexId>&, const std::vector<VertexId>&, VertexId) override { return 1; }
    };
    auto r = cfg_from_source("a; b;");
    StrategyF f(r.cfg, r.loops);
    Backwards rob;
    CHECK_THROWS_AS(play_game(r.cfg.digraph(), f, rob), GameError);
}

TEST_CASE("robber on stop is caught next") {
    auto r = cfg_from_source("a; b;");
    StrategyF f(r.cfg, r.loops);
    LazyRobber lazy(r.cfg.digraph(), r.cfg.stop());
    auto t = play_game(r.cfg.digraph(), f, lazy);
    CHECK(t.outcome == Outcome::CopsWin);
    CHECK(t.rounds() == 1);
    CHECK(t.steps.back().slots[2] == r.cfg.stop());
    CHECK(t.final_note == "4a");
}

TEST_CASE("single vertex graph") {
    Digraph g(1);
    CopsRobberSolver solver(g, 1);
    CHECK(solver.cops_win());
    OptimalRobber robber(g, solver);
    OptimalCops cops(solver);
    auto t = play_game(g, cops, robber);
    CHECK(t.outcome == Outcome::CopsWin);
    CHECK(t.rounds() == 1);
    CHECK(brute_force_cop_number(g, 3).cop_number == 1);
}

TEST_CASE("distance examples") {
    auto r = cfg_from_source("while c { a; b; }", true);
    LoopDistance dist(r.cfg, r.loops, 1);
    VertexId c = r.loops.element(1).entry;
    CHECK(dist(c) == 1);
    VertexId u = r.cfg.successors(c)[0] == r.loops.element(1).exit ? r.cfg.successors(c)[1] : r.cfg.successors(c)[0];
    CHECK(!dist.has_path(u));
    CHECK(dist(u) == 0);

    // Vertices of a nested element count nothing: they inherit its exit's value.
    auto n = cfg_from_source("while c { x; while d { y; } z; }", true);
    LoopId outer = n.loops.loop_with_entry(1);
    LoopId inner = n.loops.element(outer).children.at(0);
    LoopDistance od(n.cfg, n.loops, outer);
    for (VertexId v : n.loops.inside(inner)) CHECK(od(v) == od(n.loops.element(inner).exit));
}

TEST_CASE("distance matches the simple path oracle") {
    int instances = 0;
    for (std::uint64_t seed = 0; seed < 3000 && instances < 400; ++seed) {
        auto r = oracle::random_cfg(seed, 2 + static_cast<int>(seed % 7), true);
        if (!r.cfg.stop_reachable() || r.cfg.num_vertices() > 8) continue;
        ++instances;
        for (LoopId l = 0; l < static_cast<LoopId>(r.loops.size()); ++l) {
            LoopDistance dist(r.cfg, r.loops, l);
            for (VertexId v : r.loops.inside(l)) {
                int want = oracle::dist(r.cfg, r.loops, l, v);
                REQUIRE_MESSAGE(dist.has_path(v) == (want >= 0), "seed " << seed << " loop " << l << " v " << v);
                REQUIRE(dist(v) == std::max(want, 0));
            }
        }
    }
    CHECK(instances >= 100);
    // Bigger graphs: compare while the enumeration stays cheap.
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto r = oracle::random_cfg(seed, 14, true);
        if (!r.cfg.stop_reachable() || r.cfg.num_vertices() > 16) continue;
        for (LoopId l = 0; l < static_cast<LoopId>(r.loops.size()); ++l) {
            LoopDistance dist(r.cfg, r.loops, l);
            for (VertexId v : r.loops.inside(l)) CHECK(dist(v) == std::max(oracle::dist(r.cfg, r.loops, l, v), 0));
        }
    }
}

TEST_CASE("strategy f against every robber") {
    int games = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 50), seed % 2 == 0);
        if (!r.cfg.stop_reachable()) continue;
        const auto& g = r.cfg.digraph();
        const auto n = static_cast<VertexId>(g.num_vertices());
        for (VertexId start : {VertexId{0}, static_cast<VertexId>(seed % n), static_cast<VertexId>(n - 1)}) {
            StrategyF f(r.cfg, r.loops);
            LazyRobber lazy(g, start);
            RandomRobber rnd(g, start, seed * 31 + start);
            for (RobberStrategy* rob : {static_cast<RobberStrategy*>(&lazy), static_cast<RobberStrategy*>(&rnd)}) {
                auto t = play_game(g, f, *rob);
                ++games;
                REQUIRE_MESSAGE(t.outcome == Outcome::CopsWin, "seed " << seed);
                CHECK(check_cop_monotone(t).monotone);
                auto audit = audit_strategy_f(t, r.cfg, r.loops);
                CHECK_MESSAGE(audit.ok(), "seed " << seed << ": " << (audit.problems.empty() ? "" : audit.problems[0]));
                for (const auto& s : t.steps) CHECK(cop_set(s.slots).size() <= 3);
            }
        }
    }
    CHECK(games > 1000);
}

TEST_CASE("strategy f against the optimal robber on small graphs") {
    int games = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 30), true);
        if (!r.cfg.stop_reachable() || r.cfg.num_vertices() > kMaxMonotoneVertices) continue;
        const auto& g = r.cfg.digraph();
        CopsRobberSolver solver(g, 3);
        OptimalRobber rob(g, solver);
        StrategyF f(r.cfg, r.loops);
        auto t = play_game(g, f, rob);
        ++games;
        REQUIRE_MESSAGE(t.outcome == Outcome::CopsWin, "seed " << seed);
        CHECK(check_cop_monotone(t).monotone);
        CHECK(audit_strategy_f(t, r.cfg, r.loops).ok());
    }
    CHECK(games > 100);
}

TEST_CASE("cop numbers") {
    SUBCASE("DAG") {
        auto r = cfg_from_source("a; if x { b; } else { c; } d;");
        CHECK(brute_force_cop_number(r.cfg.digraph(), 3).cop_number == 1);
    }
    SUBCASE("single loop") {
        auto r = cfg_from_source(oracle::read_fixture("while_loop.spl"));
        auto res = brute_force_cop_number(r.cfg.digraph(), 3);
        REQUIRE(res.cop_number.has_value());
        CHECK(*res.cop_number >= 2);
        CHECK(*res.cop_number <= 3);
        CHECK(*res.cop_number == 2);
    }
    SUBCASE("two inner loops") {
        auto r = two_loops();
        auto res = brute_force_cop_number(r.cfg.digraph(), 3);
        CHECK(res.cop_number == 3);
        CHECK(res.lower_bound == 3);
    }
    SUBCASE("too large") {
        auto r = oracle::random_cfg(3, 200);
        CHECK_THROWS(brute_force_cop_number(r.cfg.digraph(), 3));
    }
    SUBCASE("budget") {
        auto r = two_loops();
        try {
            brute_force_cop_number(r.cfg.digraph(), 3, 1000);
            FAIL("expected the budget to run out");
        } catch (const StateBudgetExceeded& e) {
            CHECK(e.lower_bound() >= 1);
        }
    }
}

TEST_CASE("small CFGs never need more than three cops") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200 && checked < 40; ++seed) {
        auto r = oracle::random_cfg(seed, 2 + static_cast<int>(seed % 9), true);
        if (!r.cfg.stop_reachable() || r.cfg.num_vertices() > 12) continue;
        ++checked;
        const auto& g = r.cfg.digraph();
        auto res = brute_force_cop_number(g, 3);
        REQUIRE(res.cop_number.has_value());
        CHECK(*res.cop_number <= 3);
        if (r.loops.num_loops() == 0) CHECK(*res.cop_number == 1);
        // A monotone win is a win; the unrestricted game never needs more cops.
        CopsRobberSolver solver(g, *res.cop_number);
        CHECK(solver.cops_win());
        if (*res.cop_number > 1) CHECK(!monotone_cops_win(g, *res.cop_number - 1));
    }
    CHECK(checked >= 20);
}

TEST_CASE("two cops lose on two inner loops") {
    auto r = two_loops();
    const auto& g = r.cfg.digraph();
    CopsRobberSolver two(g, 2);
    CHECK(!two.cops_win());
    OptimalRobber rob(g, two);
    OptimalCops cops(two);
    auto t = play_game(g, cops, rob, 200);
    CHECK(t.outcome == Outcome::RobberWinsCutoff);
    CHECK(t.rounds() == 200);
    // The robber keeps to the two inner cycles.
    std::set<int> visited;
    for (std::size_t i = 20; i < t.steps.size(); ++i) visited.insert(g.external_id(t.steps[i].robber));
    for (int v : visited) CHECK(((v >= 5 && v <= 7) || (v >= 9 && v <= 11) || v == 1 || v == 2 || v == 8 || v == 12));

    CopsRobberSolver three(g, 3);
    CHECK(three.cops_win());
}

TEST_CASE("trace JSON") {
    auto r = two_loops();
    auto t = play_f(r, TieBreak::SmallestId, *r.cfg.find_external(0));
    auto j = trace_to_json(t, r.cfg.digraph());
    CHECK(j.find("\"outcome\": \"CopsWin\"") != std::string::npos);
    CHECK(j.find("\"note\": \"2b\"") != std::string::npos);
}
