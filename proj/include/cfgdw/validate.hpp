#pragma once

#include "cfgdw/decomposition.hpp"
#include "cfgdw/digraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfgdw {

struct Violation {
    std::string condition;      // "acyclic", "vertices_covered", "connectivity", "3a", "3b", "d3"
    std::string witness;        // human-readable, external ids
    std::vector<int> nodes;     // decomposition node ids involved (external)
    std::vector<int> vertices;  // graph vertex ids involved (external)
};

struct ValidationReport {
    bool acyclic = false;
    bool vertices_covered = false;
    bool connectivity = false;
    bool edges_covered_3a = false;   // sources
    bool edges_covered_3b = false;   // arcs
    bool d3_evaluated = false;
    bool d3_original = false;
    int width = 0;
    std::vector<Violation> violations;

    bool valid() const {
        return acyclic && vertices_covered && connectivity && edges_covered_3a && edges_covered_3b;
    }
};

struct ValidateOptions {
    bool check_d3 = true;
    /// D3 is evaluated only when nodes * vertices stays under this many bits.
    std::size_t d3_max_bits = std::size_t{1} << 28;
    /// Memory bound for one accumulated bit matrix; larger inputs are
    /// processed in vertex chunks.
    std::size_t chunk_budget_bytes = std::size_t{64} << 20;
    std::size_t max_witnesses = 16;
};

/// Checks every condition of a DAG decomposition of g. Successor-bag unions
/// X_{>=j} (and predecessor unions X_{<=j}) are accumulated once along a
/// topological order with the bitset kernels.
ValidationReport validate(const DagDecomposition& d, const Digraph& g, const ValidateOptions& opts = {});

// The individual conditions, for callers that want a single answer.
bool check_vertices_covered(const DagDecomposition& d, const Digraph& g);
bool check_connectivity(const DagDecomposition& d, std::size_t num_vertices);
/// {3a (sources), 3b (arcs)}
std::pair<bool, bool> check_edges_covered(const DagDecomposition& d, const Digraph& g);
bool check_d3(const DagDecomposition& d, const Digraph& g);

/// W guards V': every edge leaving a vertex of V' lands in V' or W.
bool guards(const std::vector<VertexId>& w, const std::vector<VertexId>& v_prime, const Digraph& g);

} // namespace cfgdw
