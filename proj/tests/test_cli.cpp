#include "support.hpp"

#include "cfgdw/cli.hpp"
#include "cfgdw/serialize.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfgdw;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(CFGDW_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name, const std::string& text) {
    auto dir = fs::temp_directory_path() / "cfgdw_cli_tests";
    fs::create_directories(dir);
    auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(PipelineConfig c) {
    std::ostringstream out, err;
    int code = run(c, out, err);
    return {code, out.str(), err.str()};
}

PipelineConfig cmd(const std::string& command, const std::string& input) {
    PipelineConfig c;
    c.command = command;
    c.input = input;
    return c;
}

} // namespace

TEST_CASE("decompose the while loop") {
    auto r = call(cmd("decompose", fixture("while_loop.spl")));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"arcs\"") != std::string::npos);
    auto g = cfg_from_source(oracle::read_fixture("while_loop.spl"));
    auto d = decomposition_from_json(r.out, g.cfg.digraph());
    CHECK(width(d) == 3);
}

TEST_CASE("validate exit codes") {
    CHECK(call(cmd("validate", fixture("two_loops.json"))).code == 0);
    CHECK(call(cmd("validate", fixture("nested.spl"))).code == 0);

    auto g = cfg_from_source(oracle::read_fixture("while_loop.spl"));
    auto text = decomposition_to_json(build_decomposition(g.cfg, g.loops), g.cfg.digraph());
    // Drop vertex 3 (the loop exit) from the bag of node 1.
    auto pos = text.find("\"1\": [");
    REQUIRE(pos != std::string::npos);
    auto end = text.find(']', pos);
    text.replace(pos, end - pos + 1, "\"1\": [1]");
    auto c = cmd("validate", fixture("while_loop.spl"));
    c.decomposition = scratch("broken.json", text).string();
    auto r = call(c);
    CHECK(r.code == 1);
    CHECK(r.out.find("\"connectivity\": false") != std::string::npos);
    CHECK(r.out.find("witness") != std::string::npos);
}

TEST_CASE("error exit codes") {
    CHECK(call(cmd("build", "/nonexistent/prog.spl")).code == 2);
    auto bad = scratch("bad.spl", "while { a; }");
    auto r = call(cmd("build", bad.string()));
    CHECK(r.code == 3);
    CHECK(r.err.find("1:") != std::string::npos);
    CHECK(call(cmd("build", scratch("bad.json", "{\"vertices\": 3}").string())).code == 3);
    CHECK(call(cmd("decompose", scratch("spin.spl", "while 1 { a; }").string())).code == 3);
    auto out = cmd("build", fixture("while_loop.spl"));
    out.output = "/nonexistent/dir/out.json";
    CHECK(call(out).code == 2);
}

TEST_CASE("play reproduces the golden trace") {
    auto c = cmd("play", fixture("two_loops.json"));
    c.robber = "lazy-max";
    auto r = call(c);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"final_note\": \"4a\"") != std::string::npos);
    c.cops = "optimal";
    c.num_cops = 2;
    c.robber = "optimal";
    c.max_rounds = 200;
    CHECK(call(c).code == 1);
}

TEST_CASE("oracle and lift") {
    auto r = call(cmd("oracle", fixture("while_loop.spl")));
    CHECK(r.code == 0);
    CHECK(r.out.find("\"cop_number\": 2") != std::string::npos);
    auto l = cmd("lift", fixture("nested.spl"));
    l.m = 3;
    l.seed = 4;
    auto lr = call(l);
    CHECK(lr.code == 0);
    CHECK(lr.out.find("\"width\": 9") != std::string::npos);
    CHECK(lr.out.find("\"valid\": true") != std::string::npos);
}

TEST_CASE("dot export") {
    auto c = cmd("export-dot", fixture("while_loop.spl"));
    auto r = call(c);
    CHECK(r.code == 0);
    CHECK(r.out.find("digraph") != std::string::npos);
    CHECK(r.out.find("dashed") != std::string::npos);
    c.what = "decomposition";
    CHECK(call(c).out.find("digraph") != std::string::npos);
}

TEST_CASE("every command is deterministic") {
    for (std::string command : {"build", "decompose", "validate", "play", "lift", "export-dot"}) {
        auto c = cmd(command, fixture("nested.spl"));
        c.seed = 12;
        if (command == "play") c.robber = "random";
        auto a = call(c), b = call(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("generate") {
    PipelineConfig c;
    c.command = "generate";
    c.seed = 0;
    c.size = 1;
    auto r = call(c);
    CHECK(r.code == 0);
    auto ast = parse_program(r.out);
    CHECK(count_statements(*ast.root) == 1);
    c.seed = 42;
    c.size = 300;
    CHECK(call(c).out == call(c).out);
}

TEST_CASE("generated programs pass the whole pipeline") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto r = oracle::random_cfg(seed, 1 + static_cast<int>(seed % 80));
        if (!r.cfg.stop_reachable()) continue;
        auto d = build_decomposition(r.cfg, r.loops);
        REQUIRE_MESSAGE(validate(d, r.cfg.digraph()).valid(), "seed " << seed);
    }
}
