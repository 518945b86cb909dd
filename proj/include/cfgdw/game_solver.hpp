#pragma once

#include "cfgdw/digraph.hpp"
#include "cfgdw/error.hpp"
#include "cfgdw/game.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cfgdw {

using VertexMask = std::uint32_t;

/// Largest graphs the exhaustive searches accept.
inline constexpr std::size_t kMaxSolverVertices = 16;
inline constexpr std::size_t kMaxMonotoneVertices = 14;

/// Reachability cache over masked subgraphs of a small graph:
/// reach(blocked, r) = vertices reachable from r avoiding `blocked`
/// (r included unless blocked).
class MaskedReach {
  public:
    MaskedReach(const Digraph& g, int max_blocked);
    VertexMask operator()(VertexMask blocked, VertexId r) const;
    std::size_t num_vertices() const { return n_; }

  private:
    std::size_t n_;
    std::vector<VertexMask> succ_;
    int max_blocked_;
    mutable std::vector<VertexMask> cache_;
    mutable std::vector<std::uint8_t> have_;
};

/// Exact solution of the k-cops-and-robber game without the monotonicity
/// requirement (cops may return to vacated vertices). rank(X, r) is the number
/// of cop moves the cops need to force capture from cops on X and robber on
/// r, 0 if the robber escapes forever.
class CopsRobberSolver {
  public:
    CopsRobberSolver(const Digraph& g, int k);

    int k() const { return k_; }
    std::size_t num_vertices() const { return n_; }
    int rank(VertexMask cops, VertexId robber) const { return rank_[index(cops, robber)]; }
    bool cops_win(VertexMask cops, VertexId robber) const { return rank(cops, robber) > 0; }
    /// Cops win against every initial robber vertex.
    bool cops_win() const;
    /// Robber answers to the move before -> after, excluding capture.
    VertexMask replies(VertexMask before, VertexMask after, VertexId robber) const;
    const MaskedReach& reach() const { return reach_; }
    const std::vector<VertexMask>& placements() const { return placements_; }

  private:
    std::size_t index(VertexMask cops, VertexId r) const { return static_cast<std::size_t>(cops) * n_ + r; }

    std::size_t n_;
    int k_;
    MaskedReach reach_;
    std::vector<VertexMask> placements_;   // all sets of at most k vertices
    std::vector<std::uint16_t> rank_;
};

/// Robber that maximizes survival: escapes forever from any position the
/// solver marks robber-winning, otherwise delays capture as long as possible.
class OptimalRobber final : public RobberStrategy {
  public:
    OptimalRobber(const Digraph& g, const CopsRobberSolver& solver);
    VertexId start() override;
    VertexId respond(const std::vector<VertexId>& before, const std::vector<VertexId>& after,
                     VertexId robber) override;

  private:
    const Digraph& g_;
    const CopsRobberSolver& solver_;
};

/// k cops playing the solver's strategy: shortest forced capture when winning,
/// otherwise the placement leaving the robber the fewest vertices.
class OptimalCops final : public CopStrategy {
  public:
    explicit OptimalCops(const CopsRobberSolver& solver);
    int num_cops() const override { return solver_.k(); }
    CopMove next(const GameTrace& so_far) override;

  private:
    const CopsRobberSolver& solver_;
};

class StateBudgetExceeded : public Error {
  public:
    StateBudgetExceeded(int k, int lower_bound, std::size_t states)
        : Error("state budget exceeded while testing k=" + std::to_string(k) + " (cop number >= " +
                std::to_string(lower_bound) + ", " + std::to_string(states) + " states)"),
          k_(k), lower_bound_(lower_bound) {}
    int k() const { return k_; }
    int lower_bound() const { return lower_bound_; }

  private:
    int k_;
    int lower_bound_;
};

/// Exhaustive search of the cop-monotone k-cops game: state (cops, robber,
/// vacated vertices), cops never return to a vacated vertex.
bool monotone_cops_win(const Digraph& g, int k, std::size_t state_budget = 40'000'000,
                       std::size_t* states_out = nullptr);

struct CopNumberResult {
    std::optional<int> cop_number;   // empty if larger than k_max
    int lower_bound = 0;
    std::size_t states = 0;
};

/// Smallest k <= k_max with a cop-monotone winning strategy. Throws
/// StateBudgetExceeded with the proven lower bound.
CopNumberResult brute_force_cop_number(const Digraph& g, int k_max, std::size_t state_budget = 40'000'000);

} // namespace cfgdw
