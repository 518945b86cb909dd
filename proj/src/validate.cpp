#include "cfgdw/validate.hpp"
#include "cfgdw/error.hpp"
#include "cfgdw/simd/bitset_kernels.hpp"

#include <algorithm>
#include <bit>

namespace cfgdw {
namespace {

using Word = std::uint64_t;

// Row-major bit matrix: one row per decomposition node, columns are the
// vertices lo..lo+64*words-1 of the current chunk.
struct BitMatrix {
    std::size_t words = 0;
    std::vector<Word> bits;

    BitMatrix(std::size_t rows, std::size_t w) : words(w), bits(rows * w, 0) {}
    Word* row(std::size_t r) { return bits.data() + r * words; }
    const Word* row(std::size_t r) const { return bits.data() + r * words; }
    bool test(std::size_t r, std::size_t col) const { return row(r)[col >> 6] >> (col & 63) & 1; }
};

class Validator {
  public:
    Validator(const DagDecomposition& d, const Digraph& g, const ValidateOptions& opts)
        : d_(d), g_(g), opts_(opts), dag_(d.dag()), k_(simd::active_kernels()) {}

    ValidationReport run() {
        const std::size_t n = g_.num_vertices();
        for (std::size_t i = 0; i < d_.num_nodes(); ++i)
            for (VertexId v : d_.bag(static_cast<int>(i)))
                if (v < 0 || static_cast<std::size_t>(v) >= n) throw Error("bag vertex out of range");

        report_.width = width(d_);
        topo_ = topological_order(dag_);
        report_.acyclic = topo_.size() == d_.num_nodes();
        if (!report_.acyclic) add("acyclic", "decomposition digraph has a cycle", {}, {});
        check_covered();
        if (!report_.acyclic) return report_;

        report_.connectivity = true;
        report_.edges_covered_3a = true;
        report_.edges_covered_3b = true;
        const std::size_t nodes = std::max<std::size_t>(d_.num_nodes(), 1);
        const std::size_t total_words = (n + 63) / 64;
        std::size_t chunk_words = std::max<std::size_t>(1, opts_.chunk_budget_bytes / (8 * nodes));
        chunk_words = std::min(chunk_words, std::max<std::size_t>(total_words, 1));
        for (std::size_t w0 = 0; w0 < total_words; w0 += chunk_words) {
            std::size_t words = std::min(chunk_words, total_words - w0);
            chunk(w0 * 64, words);
        }

        if (opts_.check_d3 && d_.num_nodes() * std::max<std::size_t>(n, 1) <= opts_.d3_max_bits) {
            report_.d3_evaluated = true;
            report_.d3_original = d3();
        }
        return report_;
    }

  private:
    std::string node_name(int node) const { return std::to_string(d_.node_ids()[node]); }
    std::string vertex_name(VertexId v) const { return std::to_string(g_.external_id(v)); }

    void add(std::string condition, std::string witness, std::vector<int> nodes, std::vector<VertexId> vertices) {
        if (report_.violations.size() >= opts_.max_witnesses) return;
        Violation v{std::move(condition), std::move(witness), {}, {}};
        for (int x : nodes) v.nodes.push_back(d_.node_ids()[x]);
        for (VertexId x : vertices) v.vertices.push_back(g_.external_id(x));
        report_.violations.push_back(std::move(v));
    }

    void check_covered() {
        std::vector<bool> seen(g_.num_vertices(), false);
        for (std::size_t i = 0; i < d_.num_nodes(); ++i)
            for (VertexId v : d_.bag(static_cast<int>(i))) seen[v] = true;
        report_.vertices_covered = true;
        for (VertexId v = 0; v < static_cast<VertexId>(seen.size()); ++v)
            if (!seen[v]) {
                report_.vertices_covered = false;
                add("vertices_covered", "vertex " + vertex_name(v) + " is in no bag", {}, {v});
                break;
            }
    }

    void set_bag(Word* row, int node, std::size_t lo, std::size_t words, bool on) const {
        for (VertexId v : d_.bag(node)) {
            std::size_t c = static_cast<std::size_t>(v);
            if (c < lo || c >= lo + 64 * words) continue;
            c -= lo;
            if (on) row[c >> 6] |= Word{1} << (c & 63);
            else row[c >> 6] &= ~(Word{1} << (c & 63));
        }
    }

    // down[k] = union of bags of nodes reachable from k (k included).
    BitMatrix downward(std::size_t lo, std::size_t words) const {
        BitMatrix m(d_.num_nodes(), words);
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            VertexId k = *it;
            set_bag(m.row(k), k, lo, words, true);
            for (VertexId s : dag_.successors(k)) k_.or_into(m.row(k), m.row(s), words);
        }
        return m;
    }

    BitMatrix upward(std::size_t lo, std::size_t words) const {
        BitMatrix m(d_.num_nodes(), words);
        for (VertexId k : topo_) {
            set_bag(m.row(k), k, lo, words, true);
            for (VertexId p : dag_.predecessors(k)) k_.or_into(m.row(k), m.row(p), words);
        }
        return m;
    }

    // Node containing v reachable from `from` along (reverse) arcs.
    int find_holder(int from, VertexId v, bool forward) const {
        std::vector<bool> seen(d_.num_nodes(), false);
        std::vector<int> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (x != from && d_.bag_contains(x, v)) return x;
            auto next = forward ? dag_.successors(x) : dag_.predecessors(x);
            for (VertexId y : next)
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
        }
        return -1;
    }

    void chunk(std::size_t lo, std::size_t words) {
        const std::size_t hi = lo + 64 * words;
        BitMatrix down = downward(lo, words);
        {
            BitMatrix up = upward(lo, words);
            std::vector<Word> scratch(words, 0);
            for (std::size_t k = 0; k < d_.num_nodes(); ++k) {
                set_bag(scratch.data(), static_cast<int>(k), lo, words, true);
                std::ptrdiff_t w = k_.find_and_andnot(up.row(k), down.row(k), scratch.data(), words);
                if (w >= 0) {
                    report_.connectivity = false;
                    Word bits = up.row(k)[w] & down.row(k)[w] & ~scratch[w];
                    VertexId v = static_cast<VertexId>(lo + 64 * static_cast<std::size_t>(w) + std::countr_zero(bits));
                    int i = find_holder(static_cast<int>(k), v, false);
                    int j = find_holder(static_cast<int>(k), v, true);
                    add("connectivity",
                        "vertex " + vertex_name(v) + " in bags of nodes " + node_name(i) + " and " + node_name(j) +
                            " but not of node " + node_name(static_cast<int>(k)) + " between them",
                        {i, static_cast<int>(k), j}, {v});
                }
                set_bag(scratch.data(), static_cast<int>(k), lo, words, false);
            }
        }
        auto covered = [&](int j, VertexId u, bool source) {
            for (VertexId w : g_.successors(u)) {
                std::size_t c = static_cast<std::size_t>(w);
                if (c < lo || c >= hi || down.test(j, c - lo)) continue;
                (source ? report_.edges_covered_3a : report_.edges_covered_3b) = false;
                return std::make_pair(false, w);
            }
            return std::make_pair(true, VertexId{kNoVertex});
        };
        for (std::size_t j = 0; j < d_.num_nodes(); ++j) {
            if (!dag_.predecessors(static_cast<VertexId>(j)).empty()) continue;
            for (VertexId u : d_.bag(static_cast<int>(j))) {
                auto [ok, w] = covered(static_cast<int>(j), u, true);
                if (!ok)
                    add("3a",
                        "edge " + vertex_name(u) + "->" + vertex_name(w) + " from source node " +
                            node_name(static_cast<int>(j)) + " has no successor bag holding " + vertex_name(w),
                        {static_cast<int>(j)}, {u, w});
            }
        }
        for (const auto& [i, j] : d_.arcs()) {
            for (VertexId u : d_.bag(j)) {
                if (d_.bag_contains(i, u)) continue;
                auto [ok, w] = covered(j, u, false);
                if (!ok)
                    add("3b",
                        "edge " + vertex_name(u) + "->" + vertex_name(w) + " introduced on arc " + node_name(i) +
                            "->" + node_name(j) + " has no successor bag holding " + vertex_name(w),
                        {i, j}, {u, w});
            }
        }
    }

    bool d3() {
        const std::size_t words = (g_.num_vertices() + 63) / 64;
        BitMatrix down = downward(0, words);
        bool ok = true;
        auto scan = [&](int top, int d, int dp) {
            // Edges leaving down[top] \ X_d must land in it or in X_d ∩ X_dp.
            const Word* row = down.row(top);
            for (std::size_t w = 0; w < words; ++w)
                for (Word bits = row[w]; bits; bits &= bits - 1) {
                    VertexId u = static_cast<VertexId>(64 * w + std::countr_zero(bits));
                    if (d >= 0 && d_.bag_contains(d, u)) continue;
                    for (VertexId x : g_.successors(u)) {
                        bool inside = down.test(top, x) && (d < 0 || !d_.bag_contains(d, x));
                        bool guard = d >= 0 && d_.bag_contains(d, x) && d_.bag_contains(dp, x);
                        if (inside || guard) continue;
                        ok = false;
                        if (d < 0)
                            add("d3", "successor union of source node " + node_name(top) + " is left by edge " +
                                          vertex_name(u) + "->" + vertex_name(x),
                                {top}, {u, x});
                        else
                            add("d3", "arc " + node_name(d) + "->" + node_name(dp) + ": edge " + vertex_name(u) +
                                          "->" + vertex_name(x) + " escapes the guard",
                                {d, dp}, {u, x});
                        return;
                    }
                }
        };
        for (std::size_t j = 0; j < d_.num_nodes(); ++j)
            if (dag_.predecessors(static_cast<VertexId>(j)).empty()) scan(static_cast<int>(j), -1, -1);
        for (const auto& [i, j] : d_.arcs()) scan(j, i, j);
        return ok;
    }

    const DagDecomposition& d_;
    const Digraph& g_;
    const ValidateOptions& opts_;
    Digraph dag_;
    const simd::BitsetKernels& k_;
    std::vector<VertexId> topo_;
    ValidationReport report_;
};

} // namespace

ValidationReport validate(const DagDecomposition& d, const Digraph& g, const ValidateOptions& opts) {
    return Validator(d, g, opts).run();
}

bool check_vertices_covered(const DagDecomposition& d, const Digraph& g) {
    ValidateOptions o;
    o.check_d3 = false;
    return validate(d, g, o).vertices_covered;
}

bool check_connectivity(const DagDecomposition& d, std::size_t num_vertices) {
    ValidateOptions o;
    o.check_d3 = false;
    return validate(d, Digraph(num_vertices), o).connectivity;
}

std::pair<bool, bool> check_edges_covered(const DagDecomposition& d, const Digraph& g) {
    ValidateOptions o;
    o.check_d3 = false;
    auto r = validate(d, g, o);
    return {r.edges_covered_3a, r.edges_covered_3b};
}

bool check_d3(const DagDecomposition& d, const Digraph& g) {
    ValidateOptions o;
    o.d3_max_bits = static_cast<std::size_t>(-1);
    auto r = validate(d, g, o);
    return r.acyclic && r.d3_original;
}

bool guards(const std::vector<VertexId>& w, const std::vector<VertexId>& v_prime, const Digraph& g) {
    std::vector<char> in_v(g.num_vertices(), 0), in_w(g.num_vertices(), 0);
    for (VertexId v : v_prime) in_v[v] = 1;
    for (VertexId v : w) in_w[v] = 1;
    for (VertexId u : v_prime)
        for (VertexId x : g.successors(u))
            if (!in_v[x] && !in_w[x]) return false;
    return true;
}

} // namespace cfgdw
