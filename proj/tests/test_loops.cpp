#include "support.hpp"

#include "cfgdw/error.hpp"
#include "cfgdw/loops.hpp"
#include "cfgdw/serialize.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace cfgdw;

namespace {

VertexId ext(const ControlFlowGraph& g, int id) { return *g.find_external(id); }

CfgWithLoops two_loops() { return with_recovered_loops(cfg_from_json(oracle::read_fixture("two_loops.json"))); }

std::vector<int> ext_ids(const ControlFlowGraph& g, const std::vector<VertexId>& vs) {
    std::vector<int> out;
    for (VertexId v : vs) out.push_back(g.external_id(v));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("dominator examples") {
    SUBCASE("chain") {
        auto r = cfg_from_source("a;");
        auto d = compute_dominators(r.cfg);
        VertexId a = 1;
        CHECK(d.dom.idom(a) == r.cfg.start());
        CHECK(d.dom.idom(r.cfg.stop()) == a);
    }
    SUBCASE("diamond") {
        auto r = cfg_from_source("if c { a; } else { b; }");
        auto d = compute_dominators(r.cfg);
        CHECK(r.cfg.label(d.dom.idom(r.cfg.stop())) == "c");
    }
    SUBCASE("while loop") {
        auto r = cfg_from_source("while c { b; }");
        auto d = compute_dominators(r.cfg);
        CHECK(d.dom.dominates(1, 2));
        CHECK(d.dom.dominates(1, 3));
        CHECK(!d.dom.dominates(2, 3));
    }
}

TEST_CASE("dominators agree with the deletion oracle") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        auto r = oracle::random_cfg(seed, 25);
        if (!r.cfg.stop_reachable()) continue;
        auto d = compute_dominators(r.cfg);
        const auto& g = r.cfg.digraph();
        const auto n = static_cast<VertexId>(g.num_vertices());
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v)
                REQUIRE_MESSAGE(d.dom.dominates(u, v) == oracle::dominates(g, r.cfg.start(), u, v),
                                "seed " << seed << " u " << u << " v " << v);
        // Post-dominators: reversed graph without Stop-kind edges, rooted at stop.
        Digraph rev(g.num_vertices());
        for (const auto& e : r.cfg.edges())
            if (e.kind != SuccessorKind::Stop) rev.add_edge(e.to, e.from);
        auto reach = reachable_from(rev, r.cfg.stop());
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v) {
                if (!reach[u] || !reach[v]) continue;
                REQUIRE_MESSAGE(d.postdom.dominates(u, v) == oracle::dominates(rev, r.cfg.stop(), u, v),
                                "seed " << seed);
            }
    }
}

TEST_CASE("unreachable vertices are rejected") {
    ControlFlowGraph g;
    auto s = g.add_vertex("start"), a = g.add_vertex("a"), t = g.add_vertex("stop");
    g.add_edge(s, t, SuccessorKind::Out);
    g.add_edge(a, t, SuccessorKind::Out);
    g.set_start(s);
    g.set_stop(t);
    CHECK_THROWS_AS(compute_dominators(g), GraphError);
}

TEST_CASE("loop regions") {
    SUBCASE("loop free") {
        auto r = cfg_from_source("a; if x { b; }");
        auto f = loop_regions(r.cfg, r.loops, compute_dominators(r.cfg));
        CHECK(f.num_loops() == 0);
        CHECK(f.element(kRootLoop).belongs.size() == r.cfg.num_vertices());
    }
    SUBCASE("while loop") {
        auto r = cfg_from_source("while c { b; }");
        auto f = loop_regions(r.cfg, r.loops, compute_dominators(r.cfg));
        REQUIRE(f.num_loops() == 1);
        CHECK(f.inside(1) == std::vector<VertexId>{1, 2});
        CHECK(f.element(1).belongs == std::vector<VertexId>{1, 2});
        CHECK(f.element(kRootLoop).belongs == std::vector<VertexId>{0, 3, 4});
    }
    SUBCASE("two inner loops") {
        auto r = two_loops();
        const auto& g = r.cfg;
        REQUIRE(r.loops.num_loops() == 3);
        LoopId l1 = r.loops.loop_with_entry(ext(g, 5)), l2 = r.loops.loop_with_entry(ext(g, 9));
        LoopId outer = r.loops.loop_with_entry(ext(g, 1));
        CHECK(ext_ids(g, r.loops.element(l1).belongs) == std::vector<int>{5, 6, 7});
        CHECK(ext_ids(g, r.loops.element(l2).belongs) == std::vector<int>{9, 10, 11});
        CHECK(ext_ids(g, r.loops.element(outer).belongs) == std::vector<int>{1, 2, 8, 12});
        CHECK(g.external_id(r.loops.element(l1).exit) == 8);
        CHECK(g.external_id(r.loops.element(l2).exit) == 12);
        CHECK(g.external_id(r.loops.element(outer).exit) == 3);
        CHECK(r.loops.element(l1).parent == outer);
        CHECK(r.loops.element(l2).parent == outer);
    }
}

TEST_CASE("syntactic forest matches dominator regions") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 50), seed % 2 == 1);
        if (!r.cfg.stop_reachable()) continue;
        auto dom = compute_dominators(r.cfg);
        auto f = loop_regions(r.cfg, r.loops, dom);
        REQUIRE(f.size() == r.loops.size());
        for (LoopId l = 0; l < static_cast<LoopId>(f.size()); ++l) {
            CHECK_MESSAGE(f.inside(l) == r.loops.inside(l), "seed " << seed << " loop " << l);
            CHECK(f.element(l).belongs == r.loops.element(l).belongs);
            CHECK(f.element(l).parent == r.loops.element(l).parent);
        }
        // Recovering loops with no syntax at all finds the same elements.
        auto rec = recover_loops(r.cfg, dom);
        REQUIRE(rec.num_loops() == r.loops.num_loops());
        for (LoopId l = 1; l < static_cast<LoopId>(rec.size()); ++l) {
            LoopId s = r.loops.loop_with_entry(rec.element(l).entry);
            REQUIRE(s != kNoLoop);
            CHECK(rec.element(l).exit == r.loops.element(s).exit);
            CHECK(rec.element(l).belongs == r.loops.element(s).belongs);
        }
    }
}

TEST_CASE("forest invariants over many programs") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 60));
        const auto& f = r.loops;
        std::size_t total = 0;
        for (const auto& e : f.elements()) total += e.belongs.size();
        REQUIRE(total == r.cfg.num_vertices());
        for (LoopId l = 1; l < static_cast<LoopId>(f.size()); ++l) {
            const auto& e = f.element(l);
            CHECK(f.in_inside(e.entry, l));
            CHECK(!f.in_inside(e.exit, l));
            CHECK(f.belongs_of(e.exit) == e.parent);
            for (LoopId o = 1; o < static_cast<LoopId>(f.size()); ++o) {
                if (o == l || f.is_within(l, o) || f.is_within(o, l)) continue;
                auto a = f.inside(l), b = f.inside(o);
                std::vector<VertexId> common;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
                CHECK(common.empty());
            }
        }
        CHECK(f.inside(kRootLoop).size() == r.cfg.num_vertices());
    }
}

TEST_CASE("backward edges") {
    SUBCASE("while loop") {
        auto r = cfg_from_source("while c { b; }");
        auto cls = classify_edges_checked(r.cfg, r.loops, compute_dominators(r.cfg));
        for (std::size_t i = 0; i < cls.size(); ++i) {
            const auto& e = r.cfg.edges()[i];
            CHECK((cls[i] == EdgeClass::Backward) == (e.from == 2 && e.to == 1));
        }
    }
    SUBCASE("loop free") {
        auto r = cfg_from_source("a; if x { b; } else { c; } d;");
        for (auto c : classify_edges(r.cfg, r.loops)) CHECK(c == EdgeClass::Forward);
    }
    SUBCASE("two inner loops") {
        auto r = two_loops();
        auto cls = classify_edges_checked(r.cfg, r.loops, compute_dominators(r.cfg));
        std::vector<std::pair<int, int>> back;
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (cls[i] == EdgeClass::Backward)
                back.emplace_back(r.cfg.external_id(r.cfg.edges()[i].from), r.cfg.external_id(r.cfg.edges()[i].to));
        std::sort(back.begin(), back.end());
        CHECK(back == std::vector<std::pair<int, int>>{{7, 5}, {8, 1}, {11, 9}, {12, 1}});
    }
}

TEST_CASE("syntactic classification equals dominance and removal leaves a DAG") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 50), seed % 3 == 0);
        if (!r.cfg.stop_reachable()) continue;
        auto dom = compute_dominators(r.cfg);
        auto a = classify_edges(r.cfg, r.loops);
        auto b = classify_edges_by_dominators(r.cfg, dom);
        REQUIRE(a == b);
        Digraph rest(r.cfg.num_vertices());
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] == EdgeClass::Forward) rest.add_edge(r.cfg.edges()[i].from, r.cfg.edges()[i].to);
        CHECK(is_acyclic(rest));
    }
}

TEST_CASE("cycles pass through the entry") {
    auto w = cfg_from_source("while c { b; }");
    auto rep = check_cycle_entries(w.cfg, w.loops);
    CHECK(rep.evaluated);
    CHECK(rep.cycles_checked == 1);
    CHECK(rep.violations.empty());

    auto f = two_loops();
    auto rf = check_cycle_entries(f.cfg, f.loops, 16);
    CHECK(rf.evaluated);
    CHECK(rf.cycles_checked >= 3);
    CHECK(rf.violations.empty());

    auto nested = cfg_from_source("while a { while b { x; } do { y; } while c; }", true);
    auto rn = check_cycle_entries(nested.cfg, nested.loops);
    CHECK(rn.evaluated);
    CHECK(rn.violations.empty());

    // Dropping the inner element leaves its cycle without the outer entry.
    auto two = cfg_from_source("while a { while b { x; } }");
    LoopId outer = two.loops.loop_with_entry(1);
    LoopForest flat(two.cfg.num_vertices());
    LoopId l = flat.add_loop(two.loops.element(outer).entry, two.loops.element(outer).exit, kRootLoop);
    for (VertexId v : two.loops.inside(outer)) flat.set_belongs(v, l);
    flat.finalize();
    CHECK(!check_cycle_entries(two.cfg, flat).violations.empty());

    int checked = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto r = oracle::random_cfg(seed, 12, true);
        auto rep2 = check_cycle_entries(r.cfg, r.loops);
        if (!rep2.evaluated) continue;
        ++checked;
        CHECK(rep2.violations.empty());
    }
    CHECK(checked > 50);
}

TEST_CASE("non-structured JSON input is rejected") {
    // Two entries into one cycle.
    const char* irreducible = R"({"vertices":[{"id":0,"label":"s"},{"id":1,"label":"a"},{"id":2,"label":"b"},
        {"id":3,"label":"t"}],"edges":[{"from":0,"to":1,"kind":"out"},{"from":0,"to":2,"kind":"out"},
        {"from":1,"to":2,"kind":"out"},{"from":2,"to":1,"kind":"out"},{"from":2,"to":3,"kind":"out"}],
        "start":0,"stop":3})";
    CHECK_THROWS_AS(with_recovered_loops(cfg_from_json(irreducible)), GraphError);
}

TEST_CASE("loop forest JSON lists every element") {
    auto r = cfg_from_source("while c { while d { a; } }");
    auto j = loops_to_json(r.cfg, r.loops);
    CHECK(j.find("\"loops\"") != std::string::npos);
    CHECK(j.find("\"belongs\"") != std::string::npos);
}

TEST_CASE("loops recovered from JSON find break exits") {
    // After contraction the loop exit merges with the code after the loop,
    // and a break block is reached only through a branch.
    auto r = cfg_from_source("while c { if x { s; break; } if y { t; } else { u; } } v; if w { z; } return;", true);
    auto back = with_recovered_loops(cfg_from_json(cfg_to_json(r.cfg)));
    REQUIRE(back.loops.num_loops() == 1);
    CHECK(back.cfg.external_id(back.loops.element(1).entry) == r.cfg.external_id(r.loops.element(1).entry));
    CHECK(back.cfg.external_id(back.loops.element(1).exit) == r.cfg.external_id(r.loops.element(1).exit));
}
