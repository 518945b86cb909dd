#pragma once

#include "cfgdw/digraph.hpp"

#include <cstdint>
#include <vector>

namespace cfgdw {

using LoopId = std::int32_t;
inline constexpr LoopId kNoLoop = -1;
/// The hypothetical element enclosing the whole graph. It has no entry or
/// exit vertex; inside(root) = V and outside(root) is empty.
inline constexpr LoopId kRootLoop = 0;

struct LoopElement {
    VertexId entry = kNoVertex;
    VertexId exit = kNoVertex;
    LoopId parent = kNoLoop;
    int depth = 0;                          // root has depth 0
    std::vector<LoopId> children;
    std::vector<VertexId> belongs;          // sorted
};

/// Nesting forest of loop elements plus the belongs-to map. Every vertex
/// belongs to exactly one element; inside(L) is the union of belongs over the
/// subtree rooted at L.
class LoopForest {
  public:
    LoopForest() : LoopForest(0) {}
    explicit LoopForest(std::size_t num_vertices);

    LoopId add_loop(VertexId entry, VertexId exit, LoopId parent);
    void set_belongs(VertexId v, LoopId loop) { belongs_of_[v] = loop; }
    /// Rebuilds belongs lists, depths and the ancestor index. Must be called
    /// after mutation and before queries.
    void finalize();

    std::size_t num_vertices() const { return belongs_of_.size(); }
    /// Number of elements including the root.
    std::size_t size() const { return elements_.size(); }
    std::size_t num_loops() const { return elements_.size() - 1; }

    const LoopElement& element(LoopId l) const { return elements_[l]; }
    const std::vector<LoopElement>& elements() const { return elements_; }
    LoopId belongs_of(VertexId v) const { return belongs_of_[v]; }
    const std::vector<LoopId>& belongs_map() const { return belongs_of_; }

    /// True iff `inner` equals `outer` or is nested (transitively) under it.
    bool is_within(LoopId inner, LoopId outer) const {
        return tin_[outer] <= tin_[inner] && tout_[inner] <= tout_[outer];
    }
    bool in_inside(VertexId v, LoopId l) const { return is_within(belongs_of_[v], l); }
    /// The element nested directly under `l` whose inside contains v, or
    /// kNoLoop if v belongs to l itself or is not inside l.
    LoopId directly_nested_containing(LoopId l, VertexId v) const;

    LoopId loop_with_entry(VertexId v) const { return entry_of_[v]; }
    LoopId loop_with_exit(VertexId v) const { return exit_of_[v]; }

    std::vector<VertexId> inside(LoopId l) const;
    int max_depth() const;

    /// Carries the forest over to a renumbered vertex set; old_to_new maps to
    /// kNoVertex for removed vertices. Elements whose entry disappeared are
    /// dropped along with their subtree.
    LoopForest remap(const std::vector<VertexId>& old_to_new, std::size_t new_size) const;

  private:
    std::vector<LoopElement> elements_;
    std::vector<LoopId> belongs_of_;
    std::vector<LoopId> entry_of_;
    std::vector<LoopId> exit_of_;
    std::vector<int> tin_;
    std::vector<int> tout_;
};

} // namespace cfgdw
