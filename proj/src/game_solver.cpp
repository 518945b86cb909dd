#include "cfgdw/game_solver.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace cfgdw {
namespace {

VertexMask mask_of(const std::vector<VertexId>& vs) {
    VertexMask m = 0;
    for (VertexId v : vs) m |= VertexMask{1} << v;
    return m;
}

std::vector<VertexMask> small_sets(std::size_t n, int k) {
    std::vector<VertexMask> out;
    for (VertexMask m = 0; m < (VertexMask{1} << n); ++m)
        if (std::popcount(m) <= k) out.push_back(m);
    return out;
}

void require_small(const Digraph& g, std::size_t limit) {
    if (g.num_vertices() > limit)
        throw Error("exhaustive game search supports at most " + std::to_string(limit) + " vertices, got " +
                    std::to_string(g.num_vertices()));
}

} // namespace

MaskedReach::MaskedReach(const Digraph& g, int max_blocked)
    : n_(g.num_vertices()), succ_(g.num_vertices(), 0), max_blocked_(max_blocked) {
    require_small(g, kMaxSolverVertices);
    for (VertexId u = 0; u < static_cast<VertexId>(n_); ++u)
        for (VertexId w : g.successors(u)) succ_[u] |= VertexMask{1} << w;
    cache_.assign((std::size_t{1} << n_) * n_, 0);
    have_.assign(cache_.size(), 0);
}

VertexMask MaskedReach::operator()(VertexMask blocked, VertexId r) const {
    std::size_t idx = static_cast<std::size_t>(blocked) * n_ + r;
    if (have_[idx]) return cache_[idx];
    VertexMask seen = 0;
    if (!(blocked >> r & 1)) {
        seen = VertexMask{1} << r;
        VertexMask frontier = seen;
        while (frontier) {
            VertexMask next = 0;
            for (VertexMask f = frontier; f; f &= f - 1) next |= succ_[std::countr_zero(f)];
            next &= ~blocked & ~seen;
            seen |= next;
            frontier = next;
        }
    }
    have_[idx] = 1;
    cache_[idx] = seen;
    return seen;
}

// ------------------------------------------------------------- non-monotone

CopsRobberSolver::CopsRobberSolver(const Digraph& g, int k)
    : n_(g.num_vertices()), k_(k), reach_(g, k), placements_(small_sets(g.num_vertices(), k)),
      rank_((std::size_t{1} << g.num_vertices()) * g.num_vertices(), 0) {
    // won[X] = robber vertices r (not in X) from which cops on X force capture.
    std::vector<VertexMask> won(std::size_t{1} << n_, 0);
    for (int t = 1;; ++t) {
        std::vector<std::pair<VertexMask, VertexId>> fresh;
        for (VertexMask x : placements_)
            for (VertexId r = 0; r < static_cast<VertexId>(n_); ++r) {
                if ((x >> r & 1) || rank_[index(x, r)]) continue;
                for (VertexMask x2 : placements_) {
                    VertexMask replies = reach_(x & x2, r) & ~x2;
                    if ((replies & ~won[x2]) == 0) {
                        fresh.emplace_back(x, r);
                        break;
                    }
                }
            }
        if (fresh.empty()) break;
        for (auto [x, r] : fresh) {
            rank_[index(x, r)] = static_cast<std::uint16_t>(t);
            won[x] |= VertexMask{1} << r;
        }
    }
}

bool CopsRobberSolver::cops_win() const {
    for (VertexId r = 0; r < static_cast<VertexId>(n_); ++r)
        if (!cops_win(0, r)) return false;
    return true;
}

VertexMask CopsRobberSolver::replies(VertexMask before, VertexMask after, VertexId robber) const {
    return reach_(before & after, robber) & ~after;
}

namespace {

// Larger is better for the robber; 0 (escape) beats every finite rank.
int robber_value(int rank) { return rank == 0 ? 1 << 20 : rank; }

} // namespace

OptimalRobber::OptimalRobber(const Digraph& g, const CopsRobberSolver& solver) : g_(g), solver_(solver) {}

VertexId OptimalRobber::start() {
    VertexId best = 0;
    for (VertexId r = 1; r < static_cast<VertexId>(g_.num_vertices()); ++r) {
        int a = robber_value(solver_.rank(0, r)), b = robber_value(solver_.rank(0, best));
        if (a > b || (a == b && g_.external_id(r) < g_.external_id(best))) best = r;
    }
    return best;
}

VertexId OptimalRobber::respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                                VertexId robber) {
    VertexMask x = mask_of(before), x2 = mask_of(after);
    VertexMask options = solver_.replies(x, x2, robber);
    if (!options) return robber;
    VertexId best = kNoVertex;
    for (VertexMask o = options; o; o &= o - 1) {
        VertexId r = std::countr_zero(o);
        if (best == kNoVertex) {
            best = r;
            continue;
        }
        int a = robber_value(solver_.rank(x2, r)), b = robber_value(solver_.rank(x2, best));
        if (a > b || (a == b && g_.external_id(r) < g_.external_id(best))) best = r;
    }
    return best;
}

OptimalCops::OptimalCops(const CopsRobberSolver& solver) : solver_(solver) {}

CopMove OptimalCops::next(const GameTrace& so_far) {
    const auto& last = so_far.steps.back();
    VertexMask x = mask_of(cop_set(last.slots));
    VertexId r = last.robber;
    int t = solver_.rank(x, r);
    VertexMask choice = 0;
    int best = -1;
    for (VertexMask x2 : solver_.placements()) {
        VertexMask rep = solver_.replies(x, x2, r);
        // Score: worst robber rank after the move (escape counts as worst),
        // then the number of robber options.
        int worst = 0;
        for (VertexMask o = rep; o; o &= o - 1) worst = std::max(worst, robber_value(solver_.rank(x2, std::countr_zero(o))));
        int score = worst * 64 + std::popcount(rep);
        if (t > 0 && worst >= t) continue;
        if (best < 0 || score < best) {
            best = score;
            choice = x2;
        }
    }
    CopMove move;
    for (VertexMask c = choice; c; c &= c - 1) move.slots.push_back(std::countr_zero(c));
    move.slots.resize(solver_.k(), kNoVertex);
    move.note = t > 0 ? "force" : "hold";
    return move;
}

// ----------------------------------------------------------------- monotone

namespace {

class MonotoneSearch {
  public:
    MonotoneSearch(const Digraph& g, int k, std::size_t budget)
        : n_(g.num_vertices()), k_(k), budget_(budget), reach_(g, k), placements_(small_sets(g.num_vertices(), k)) {}

    bool cops_win() {
        for (VertexId r = 0; r < static_cast<VertexId>(n_); ++r)
            if (!win(0, r, 0)) return false;
        return true;
    }
    std::size_t states() const { return memo_.size(); }

  private:
    // Robber vertices with the same reach in G - x are interchangeable.
    VertexId canonical(VertexMask x, VertexId r) const {
        VertexMask mine = reach_(x, r);
        for (VertexMask o = mine; o; o &= o - 1) {
            VertexId v = std::countr_zero(o);
            if (v >= r) break;
            if (reach_(x, v) == mine) return v;
        }
        return r;
    }

    bool win(VertexMask x, VertexId r, VertexMask vac) {
        const VertexMask world = reach_(0, r);
        x &= world;
        vac &= world;
        const std::uint64_t key = (std::uint64_t{x} << 36) | (std::uint64_t{vac} << 8) | static_cast<std::uint64_t>(r);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= budget_) throw StateBudgetExceeded(k_, k_, memo_.size());
        memo_.emplace(key, false);

        bool result = false;
        for (VertexMask x2 : placements_) {
            if (x2 == x || (x2 & vac) || (x2 & ~x & ~world)) continue;
            const VertexMask vac2 = vac | (x & ~x2);
            const VertexMask rep = reach_(x & x2, r) & ~x2;
            bool all = true;
            VertexMask done = 0;
            for (VertexMask o = rep; o && all; o &= o - 1) {
                VertexId r2 = canonical(x2, std::countr_zero(o));
                if (done >> r2 & 1) continue;
                done |= VertexMask{1} << r2;
                all = win(x2, r2, vac2);
            }
            if (all) {
                result = true;
                break;
            }
        }
        memo_[key] = result;
        return result;
    }

    std::size_t n_;
    int k_;
    std::size_t budget_;
    MaskedReach reach_;
    std::vector<VertexMask> placements_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

} // namespace

bool monotone_cops_win(const Digraph& g, int k, std::size_t state_budget, std::size_t* states_out) {
    require_small(g, kMaxMonotoneVertices);
    MonotoneSearch search(g, k, state_budget);
    bool w = search.cops_win();
    if (states_out) *states_out = search.states();
    return w;
}

CopNumberResult brute_force_cop_number(const Digraph& g, int k_max, std::size_t state_budget) {
    require_small(g, kMaxMonotoneVertices);
    CopNumberResult res;
    res.lower_bound = g.num_vertices() > 0 ? 1 : 0;
    for (int k = 1; k <= k_max; ++k) {
        std::size_t states = 0;
        bool w;
        try {
            w = monotone_cops_win(g, k, state_budget, &states);
        } catch (const StateBudgetExceeded&) {
            throw StateBudgetExceeded(k, res.lower_bound, res.states + state_budget);
        }
        res.states += states;
        if (w) {
            res.cop_number = k;
            res.lower_bound = k;
            return res;
        }
        res.lower_bound = k + 1;
    }
    return res;
}

} // namespace cfgdw
