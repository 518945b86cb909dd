#include "cfgdw/loop_forest.hpp"

#include <algorithm>

namespace cfgdw {

LoopForest::LoopForest(std::size_t num_vertices)
    : elements_(1), belongs_of_(num_vertices, kRootLoop), entry_of_(num_vertices, kNoLoop),
      exit_of_(num_vertices, kNoLoop) {
    finalize();
}

LoopId LoopForest::add_loop(VertexId entry, VertexId exit, LoopId parent) {
    LoopId id = static_cast<LoopId>(elements_.size());
    LoopElement e;
    e.entry = entry;
    e.exit = exit;
    e.parent = parent;
    elements_.push_back(std::move(e));
    elements_[parent].children.push_back(id);
    if (entry != kNoVertex) entry_of_[entry] = id;
    if (exit != kNoVertex) exit_of_[exit] = id;
    return id;
}

void LoopForest::finalize() {
    for (auto& e : elements_) e.belongs.clear();
    for (VertexId v = 0; v < static_cast<VertexId>(belongs_of_.size()); ++v)
        elements_[belongs_of_[v]].belongs.push_back(v);

    tin_.assign(elements_.size(), 0);
    tout_.assign(elements_.size(), 0);
    int clock = 0;
    std::vector<std::pair<LoopId, std::size_t>> stack{{kRootLoop, 0}};
    elements_[kRootLoop].depth = 0;
    tin_[kRootLoop] = clock++;
    while (!stack.empty()) {
        auto& [l, next] = stack.back();
        if (next < elements_[l].children.size()) {
            LoopId c = elements_[l].children[next++];
            elements_[c].depth = elements_[l].depth + 1;
            tin_[c] = clock++;
            stack.emplace_back(c, 0);
        } else {
            tout_[l] = clock++;
            stack.pop_back();
        }
    }
}

LoopId LoopForest::directly_nested_containing(LoopId l, VertexId v) const {
    LoopId cur = belongs_of_[v];
    if (cur == l || !is_within(cur, l)) return kNoLoop;
    while (elements_[cur].parent != l) cur = elements_[cur].parent;
    return cur;
}

std::vector<VertexId> LoopForest::inside(LoopId l) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < static_cast<VertexId>(belongs_of_.size()); ++v)
        if (in_inside(v, l)) out.push_back(v);
    return out;
}

int LoopForest::max_depth() const {
    int d = 0;
    for (const auto& e : elements_) d = std::max(d, e.depth);
    return d;
}

LoopForest LoopForest::remap(const std::vector<VertexId>& old_to_new, std::size_t new_size) const {
    LoopForest out(new_size);
    std::vector<LoopId> new_id(elements_.size(), kNoLoop);
    new_id[kRootLoop] = kRootLoop;
    for (LoopId l = 1; l < static_cast<LoopId>(elements_.size()); ++l) {
        const auto& e = elements_[l];
        if (new_id[e.parent] == kNoLoop || old_to_new[e.entry] == kNoVertex) continue;
        VertexId exit = e.exit == kNoVertex ? kNoVertex : old_to_new[e.exit];
        new_id[l] = out.add_loop(old_to_new[e.entry], exit, new_id[e.parent]);
    }
    for (VertexId v = 0; v < static_cast<VertexId>(belongs_of_.size()); ++v) {
        if (old_to_new[v] == kNoVertex) continue;
        LoopId l = belongs_of_[v];
        while (new_id[l] == kNoLoop) l = elements_[l].parent;
        out.belongs_of_[old_to_new[v]] = new_id[l];
    }
    out.finalize();
    return out;
}

} // namespace cfgdw
