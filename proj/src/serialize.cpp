#include "cfgdw/serialize.hpp"
#include "cfgdw/error.hpp"

#include <json.hpp>

#include <map>
#include <sstream>

namespace cfgdw {

using ojson = nlohmann::ordered_json;

namespace {

ojson parse(std::string_view text) {
    try {
        return ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <class T>
T field(const ojson& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const ojson::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

ojson ids(const Digraph& g, std::span<const VertexId> vs) {
    ojson a = ojson::array();
    for (VertexId v : vs) a.push_back(g.external_id(v));
    return a;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string cfg_to_json(const ControlFlowGraph& cfg) {
    ojson j;
    j["vertices"] = ojson::array();
    for (VertexId v = 0; v < static_cast<VertexId>(cfg.num_vertices()); ++v)
        j["vertices"].push_back({{"id", cfg.external_id(v)}, {"label", cfg.label(v)}});
    j["edges"] = ojson::array();
    for (const auto& e : cfg.edges())
        j["edges"].push_back(
            {{"from", cfg.external_id(e.from)}, {"to", cfg.external_id(e.to)}, {"kind", std::string(to_string(e.kind))}});
    j["start"] = cfg.external_id(cfg.start());
    j["stop"] = cfg.external_id(cfg.stop());
    return j.dump(2) + "\n";
}

ControlFlowGraph cfg_from_json(std::string_view text) {
    ojson j = parse(text);
    ControlFlowGraph cfg;
    std::map<int, VertexId> index;
    auto vertices = field<ojson>(j, "vertices");
    if (!vertices.is_array()) throw ParseError("'vertices' must be an array");
    for (const auto& v : vertices) {
        int id = field<int>(v, "id");
        std::string label = v.contains("label") ? field<std::string>(v, "label") : std::to_string(id);
        if (id < 0) throw ParseError("vertex ids must be non-negative");
        if (index.count(id)) throw ParseError("duplicate vertex id " + std::to_string(id));
        index[id] = cfg.add_vertex(label, id);
    }
    auto lookup = [&](int id) {
        auto it = index.find(id);
        if (it == index.end()) throw ParseError("unknown vertex " + std::to_string(id));
        return it->second;
    };
    auto edges = field<ojson>(j, "edges");
    if (!edges.is_array()) throw ParseError("'edges' must be an array");
    for (const auto& e : edges) {
        std::string kind_text = e.contains("kind") ? field<std::string>(e, "kind") : "out";
        auto kind = successor_kind_from_string(kind_text);
        if (!kind) throw ParseError("unknown edge kind '" + kind_text + "'");
        cfg.add_edge(lookup(field<int>(e, "from")), lookup(field<int>(e, "to")), *kind);
    }
    cfg.set_start(lookup(field<int>(j, "start")));
    cfg.set_stop(lookup(field<int>(j, "stop")));
    cfg.set_stop_reachable(reachable_from(cfg.digraph(), cfg.start())[cfg.stop()]);
    return cfg;
}

std::string loops_to_json(const ControlFlowGraph& cfg, const LoopForest& forest) {
    const Digraph& g = cfg.digraph();
    ojson j;
    j["loops"] = ojson::array();
    for (LoopId l = 1; l < static_cast<LoopId>(forest.size()); ++l) {
        const auto& e = forest.element(l);
        ojson o;
        o["entry"] = cfg.external_id(e.entry);
        o["exit"] = e.exit == kNoVertex ? ojson(nullptr) : ojson(cfg.external_id(e.exit));
        o["parent"] = e.parent == kRootLoop ? ojson(nullptr) : ojson(e.parent - 1);
        auto inside = forest.inside(l);
        o["inside"] = ids(g, inside);
        o["belongs"] = ids(g, e.belongs);
        j["loops"].push_back(std::move(o));
    }
    j["root"] = {{"belongs", ids(g, forest.element(kRootLoop).belongs)}};
    return j.dump(2) + "\n";
}

std::string decomposition_to_json(const DagDecomposition& d, const Digraph& g) {
    ojson j;
    j["nodes"] = d.node_ids();
    j["arcs"] = ojson::array();
    for (const auto& [a, b] : d.arcs()) j["arcs"].push_back({d.node_ids()[a], d.node_ids()[b]});
    j["bags"] = ojson::object();
    for (std::size_t i = 0; i < d.num_nodes(); ++i)
        j["bags"][std::to_string(d.node_ids()[i])] = ids(g, d.bag(static_cast<int>(i)));
    return j.dump(2) + "\n";
}

DagDecomposition decomposition_from_json(std::string_view text, const Digraph& g) {
    ojson j = parse(text);
    auto nodes = field<std::vector<int>>(j, "nodes");
    std::map<int, int> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!node_index.emplace(nodes[i], static_cast<int>(i)).second)
            throw ParseError("duplicate node " + std::to_string(nodes[i]));
    auto node = [&](int id) {
        auto it = node_index.find(id);
        if (it == node_index.end()) throw ParseError("unknown node " + std::to_string(id));
        return it->second;
    };
    std::map<int, VertexId> vertex_index;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) vertex_index[g.external_id(v)] = v;
    std::vector<DagDecomposition::Arc> arcs;
    for (const auto& a : field<std::vector<std::vector<int>>>(j, "arcs")) {
        if (a.size() != 2) throw ParseError("arcs must be pairs");
        arcs.emplace_back(node(a[0]), node(a[1]));
    }
    std::vector<std::vector<VertexId>> bags(nodes.size());
    auto bag_obj = field<ojson>(j, "bags");
    if (!bag_obj.is_object()) throw ParseError("'bags' must be an object");
    for (const auto& [key, value] : bag_obj.items()) {
        int id;
        try {
            id = std::stoi(key);
        } catch (const std::exception&) {
            throw ParseError("bag key '" + key + "' is not a node id");
        }
        auto& bag = bags[node(id)];
        for (int v : value.get<std::vector<int>>()) {
            auto it = vertex_index.find(v);
            if (it == vertex_index.end()) throw ParseError("bag of node " + key + " names unknown vertex " + std::to_string(v));
            bag.push_back(it->second);
        }
    }
    try {
        return DagDecomposition::from_bags(nodes, std::move(arcs), bags);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

std::string report_to_json(const ValidationReport& r) {
    ojson j;
    j["valid"] = r.valid();
    j["acyclic"] = r.acyclic;
    j["vertices_covered"] = r.vertices_covered;
    j["connectivity"] = r.connectivity;
    j["edges_covered_3a"] = r.edges_covered_3a;
    j["edges_covered_3b"] = r.edges_covered_3b;
    j["d3_original"] = r.d3_evaluated ? ojson(r.d3_original) : ojson(nullptr);
    j["width"] = r.width;
    j["violations"] = ojson::array();
    for (const auto& v : r.violations)
        j["violations"].push_back(
            {{"condition", v.condition}, {"witness", v.witness}, {"nodes", v.nodes}, {"vertices", v.vertices}});
    return j.dump(2) + "\n";
}

std::string trace_to_json(const GameTrace& trace, const Digraph& g) {
    ojson j;
    j["steps"] = ojson::array();
    for (const auto& s : trace.steps) {
        ojson step;
        step["cops"] = ids(g, cop_set(s.slots));
        step["slots"] = ojson::array();
        for (VertexId v : s.slots) step["slots"].push_back(v == kNoVertex ? ojson(nullptr) : ojson(g.external_id(v)));
        step["robber"] = g.external_id(s.robber);
        step["note"] = s.note;
        j["steps"].push_back(std::move(step));
    }
    j["outcome"] = to_string(trace.outcome);
    j["final_note"] = trace.final_note;
    return j.dump(2) + "\n";
}

std::string game_to_json(const GameGraph& game, const ControlFlowGraph& cfg) {
    ojson j;
    j["m"] = game.m;
    j["vertices"] = ojson::array();
    for (VertexId v = 0; v < static_cast<VertexId>(game.graph.num_vertices()); ++v)
        j["vertices"].push_back({{"id", v},
                                 {"state", cfg.external_id(game.state_of(v))},
                                 {"sub", static_cast<int>(v % game.m)},
                                 {"owner", game.owner[v] == Player::Even ? "even" : "odd"},
                                 {"priority", game.priority[v]}});
    j["edges"] = ojson::array();
    for (const auto& [a, b] : game.graph.edge_list()) j["edges"].push_back({a, b});
    return j.dump(2) + "\n";
}

std::string cfg_to_dot(const ControlFlowGraph& cfg, const LoopForest& forest) {
    std::ostringstream out;
    auto cls = classify_edges(cfg, forest);
    out << "digraph cfg {\n  node [shape=box];\n";
    for (VertexId v = 0; v < static_cast<VertexId>(cfg.num_vertices()); ++v) {
        out << "  v" << cfg.external_id(v) << " [label=" << quote(std::to_string(cfg.external_id(v)) + ": " + cfg.label(v));
        if (v == cfg.start() || v == cfg.stop()) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (std::size_t i = 0; i < cfg.edges().size(); ++i) {
        const auto& e = cfg.edges()[i];
        out << "  v" << cfg.external_id(e.from) << " -> v" << cfg.external_id(e.to);
        if (cls[i] == EdgeClass::Backward) out << " [style=dashed]";
        else if (e.kind != SuccessorKind::Out) out << " [label=" << quote(std::string(to_string(e.kind))) << "]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string decomposition_to_dot(const DagDecomposition& d, const Digraph& g) {
    std::ostringstream out;
    out << "digraph decomposition {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < d.num_nodes(); ++i) {
        std::string label = std::to_string(d.node_ids()[i]) + "\\n{";
        bool first = true;
        for (VertexId v : d.bag(static_cast<int>(i))) {
            label += (first ? "" : ", ") + std::to_string(g.external_id(v));
            first = false;
        }
        label += "}";
        out << "  n" << d.node_ids()[i] << " [label=" << quote(label) << "];\n";
    }
    for (const auto& [a, b] : d.arcs()) out << "  n" << d.node_ids()[a] << " -> n" << d.node_ids()[b] << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace cfgdw
