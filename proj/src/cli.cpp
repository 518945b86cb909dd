#include "cfgdw/cli.hpp"
#include "cfgdw/cfg.hpp"
#include "cfgdw/decomposition.hpp"
#include "cfgdw/error.hpp"
#include "cfgdw/game.hpp"
#include "cfgdw/game_solver.hpp"
#include "cfgdw/loops.hpp"
#include "cfgdw/parity_lift.hpp"
#include "cfgdw/program_gen.hpp"
#include "cfgdw/serialize.hpp"
#include "cfgdw/validate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace cfgdw {
namespace {

constexpr const char* kGrammar = R"(Input programs (.spl):
  program := stmt*
  stmt    := IDENT ';'
           | 'if' cond block ('else' (block | if-stmt))?
           | 'while' cond block
           | 'do' block 'while' cond ';'
           | 'break' ';' | 'continue' ';' | 'return' ';'
           | block
  block   := '{' stmt* '}'
  cond    := IDENT | '1' | '(' (IDENT | '1') ')'
  '//' starts a comment. A condition of 1 is constant true.
Files ending in .json are read as CFG JSON:
  {"vertices": [{"id", "label"}], "edges": [{"from", "to", "kind"}], "start", "stop"}
Exit codes: 0 ok, 1 validation failed / robber escaped, 2 I/O error, 3 bad input.)";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const PipelineConfig& c, std::ostream& out, const std::string& text) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f || !(f << text)) throw IoError("cannot write " + c.output);
}

CfgWithLoops load(const PipelineConfig& c) {
    if (c.input.empty()) throw IoError("no input file given");
    std::string text = read_file(c.input);
    InputKind kind = c.kind;
    if (kind == InputKind::Auto)
        kind = c.input.size() >= 5 && c.input.compare(c.input.size() - 5, 5, ".json") == 0 ? InputKind::CfgJson
                                                                                            : InputKind::Source;
    CfgWithLoops g;
    if (kind == InputKind::Source) {
        g = cfg_from_source(text, c.contract);
    } else {
        g = with_recovered_loops(prune_unreachable(cfg_from_json(text)));
        if (c.contract) g = contract_basic_blocks(g);
    }
    check_cfg_invariants(g.cfg);
    return g;
}

VertexId robber_start(const PipelineConfig& c, const ControlFlowGraph& cfg) {
    if (!c.robber_start) return cfg.start();
    auto v = cfg.find_external(*c.robber_start);
    if (!v) throw GraphError("robber start " + std::to_string(*c.robber_start) + " is not a vertex");
    return *v;
}

int play(const PipelineConfig& c, const CfgWithLoops& g, std::ostream& out) {
    require_analyzable(g.cfg, g.loops);
    const Digraph& dg = g.cfg.digraph();
    std::unique_ptr<CopsRobberSolver> robber_solver, cop_solver;
    std::unique_ptr<CopStrategy> cops;
    if (c.cops == "f") {
        cops = std::make_unique<StrategyF>(g.cfg, g.loops);
    } else if (c.cops == "optimal") {
        cop_solver = std::make_unique<CopsRobberSolver>(dg, c.num_cops);
        cops = std::make_unique<OptimalCops>(*cop_solver);
    } else {
        throw Error("unknown cop strategy '" + c.cops + "'");
    }
    std::unique_ptr<RobberStrategy> robber;
    if (c.robber == "lazy") {
        robber = std::make_unique<LazyRobber>(dg, robber_start(c, g.cfg), TieBreak::SmallestId);
    } else if (c.robber == "lazy-max") {
        robber = std::make_unique<LazyRobber>(dg, robber_start(c, g.cfg), TieBreak::LargestId);
    } else if (c.robber == "random") {
        robber = std::make_unique<RandomRobber>(dg, robber_start(c, g.cfg), c.seed);
    } else if (c.robber == "optimal") {
        robber_solver = std::make_unique<CopsRobberSolver>(dg, cops->num_cops());
        robber = std::make_unique<OptimalRobber>(dg, *robber_solver);
    } else {
        throw Error("unknown robber strategy '" + c.robber + "'");
    }
    GameTrace trace = play_game(dg, *cops, *robber, c.max_rounds);
    emit(c, out, trace_to_json(trace, dg));
    return trace.outcome == Outcome::CopsWin ? 0 : 1;
}

int dispatch(const PipelineConfig& c, std::ostream& out) {
    if (c.command == "generate") {
        emit(c, out, generate_random_program(c.seed, c.size));
        return 0;
    }
    CfgWithLoops g = load(c);
    const Digraph& dg = g.cfg.digraph();
    if (c.command == "build") {
        emit(c, out, c.what == "loops" ? loops_to_json(g.cfg, g.loops) : cfg_to_json(g.cfg));
        return 0;
    }
    if (c.command == "oracle") {
        auto res = brute_force_cop_number(dg, c.k_max);
        std::ostringstream s;
        s << "{\"cop_number\": " << (res.cop_number ? std::to_string(*res.cop_number) : "null")
          << ", \"lower_bound\": " << res.lower_bound << ", \"states\": " << res.states << "}\n";
        emit(c, out, s.str());
        return 0;
    }
    if (c.command == "play") return play(c, g, out);

    require_analyzable(g.cfg, g.loops);
    if (c.command == "export-dot" && c.what == "cfg") {
        emit(c, out, cfg_to_dot(g.cfg, g.loops));
        return 0;
    }
    DagDecomposition d = c.decomposition.empty() ? build_decomposition(g.cfg, g.loops)
                                                 : decomposition_from_json(read_file(c.decomposition), dg);
    if (c.command == "decompose") {
        emit(c, out, decomposition_to_json(d, dg));
        return 0;
    }
    if (c.command == "export-dot") {
        emit(c, out, decomposition_to_dot(d, dg));
        return 0;
    }
    if (c.command == "validate") {
        ValidationReport r = validate(d, dg);
        emit(c, out, report_to_json(r));
        return r.valid() ? 0 : 1;
    }
    if (c.command == "lift") {
        FormulaSkeleton sk = FormulaSkeleton::random(c.m, 2 + static_cast<int>(c.seed % 4), c.seed);
        GameGraph game = build_product_game(g.cfg, sk, c.seed);
        DagDecomposition lifted = lift_decomposition(d, game);
        ValidationReport r = validate(lifted, game.graph);
        std::ostringstream s;
        s << "{\n\"game\": " << game_to_json(game, g.cfg) << ",\n\"decomposition\": "
          << decomposition_to_json(lifted, game.graph) << ",\n\"width\": " << width(lifted)
          << ",\n\"valid\": " << (r.valid() ? "true" : "false") << "\n}\n";
        emit(c, out, s.str());
        return r.valid() ? 0 : 1;
    }
    throw Error("unknown command '" + c.command + "'");
}

} // namespace

int run(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(config, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Control-flow graphs, their width-3 DAG decompositions, and the cops-and-robber game"};
    app.footer(kGrammar);
    app.require_subcommand(1);
    PipelineConfig c;
    std::string kind = "auto";

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", c.input, "Program (.spl) or CFG (.json)");
        sub->add_option("--graph", c.input, "Same as the positional input");
        sub->add_option("--kind", kind, "Input kind")->check(CLI::IsMember({"auto", "source", "cfg-json"}));
        sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
        sub->add_flag("--contract", c.contract, "Contract basic blocks first");
    };
    auto* build = app.add_subcommand("build", "Write the CFG (or its loop forest) as JSON");
    common(build);
    build->add_option("--what", c.what, "cfg or loops")->check(CLI::IsMember({"cfg", "loops"}));
    auto* decompose = app.add_subcommand("decompose", "Write the DAG decomposition as JSON");
    common(decompose);
    auto* validate_cmd = app.add_subcommand("validate", "Check a decomposition; exit 0 iff valid");
    common(validate_cmd);
    validate_cmd->add_option("--decomposition", c.decomposition, "Decomposition JSON to check (default: build one)");
    auto* play_cmd = app.add_subcommand("play", "Play the cops-and-robber game and write the trace");
    common(play_cmd);
    play_cmd->add_option("--cops", c.cops, "f or optimal")->check(CLI::IsMember({"f", "optimal"}));
    play_cmd->add_option("--num-cops", c.num_cops, "Cop count for --cops optimal");
    play_cmd->add_option("--robber", c.robber, "lazy, lazy-max, optimal or random")
        ->check(CLI::IsMember({"lazy", "lazy-max", "optimal", "random"}));
    play_cmd->add_option("--robber-start", c.robber_start, "Initial robber vertex (default: start)");
    play_cmd->add_option("--max-rounds", c.max_rounds, "Round limit (default 4|V|)");
    play_cmd->add_option("--seed", c.seed, "Seed for the random robber");
    auto* oracle = app.add_subcommand("oracle", "Brute-force cop number of the cop-monotone game");
    common(oracle);
    oracle->add_option("--k-max", c.k_max, "Largest cop count to try");
    auto* lift = app.add_subcommand("lift", "Product game with a random formula skeleton and lifted decomposition");
    common(lift);
    lift->add_option("--m", c.m, "Skeleton size")->check(CLI::Range(1, 64));
    lift->add_option("--seed", c.seed, "Seed");
    auto* dot = app.add_subcommand("export-dot", "Graphviz output of the CFG or the decomposition");
    common(dot);
    dot->add_option("--what", c.what, "cfg or decomposition")->check(CLI::IsMember({"cfg", "decomposition"}));
    auto* gen = app.add_subcommand("generate", "Random structured program");
    gen->add_option("--seed", c.seed, "Seed");
    gen->add_option("--size", c.size, "Statement count")->check(CLI::PositiveNumber);
    gen->add_option("-o,--output", c.output, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    c.command = app.get_subcommands().front()->get_name();
    c.kind = kind == "source" ? InputKind::Source : kind == "cfg-json" ? InputKind::CfgJson : InputKind::Auto;
    return run(c, std::cout, std::cerr);
}

} // namespace cfgdw
