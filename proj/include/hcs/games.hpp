#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hcs/hcs.hpp"

namespace hcs {

enum class Player : std::uint8_t { P0 = 0, P1 = 1 };

inline Player opponent(Player p) { return p == Player::P0 ? Player::P1 : Player::P0; }

enum class ObjectiveKind { Reach, Safe };

// Reach: Player 0 wants to visit `states`. Safe: Player 0 wants to avoid them.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::Reach;
  std::vector<StateId> states;

  bool operator==(const Objective&) const = default;
};

// Game on a finite-state HCS. Blocked states are completed per owner: a
// Player-0 state gets edges to a losing sink, a Player-1 state gets edges to a
// winning sink, so a player who cannot move loses.
class HcsGame {
 public:
  // Throws InputError on VASS guards, owner arity mismatch, or out-of-range
  // objective states.
  HcsGame(Hcs hcs, std::vector<Player> owner, Objective objective);

  const Hcs& hcs() const noexcept { return hcs_; }
  const std::vector<Player>& owner() const noexcept { return owner_; }
  Player owner(StateId q) const { return owner_.at(q); }
  const Objective& objective() const noexcept { return objective_; }
  // States of the input HCS (the completed HCS may have up to two more).
  std::size_t input_states() const noexcept { return input_states_; }

 private:
  Hcs hcs_;
  std::vector<Player> owner_;
  Objective objective_;
  std::size_t input_states_ = 0;
};

struct ArenaEdge {
  StateId from = 0;
  SymbolId label = 0;  // kEpsilon for ε
  StateId to = 0;
};

struct ArenaStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  // |Q|·(|Q_1|+…+|Q_m|)^m and |δ|·(|δ_1|+…+|δ_m|)^m, saturating. Zero for
  // hand-built arenas.
  std::uint64_t vertex_bound = 0;
  std::uint64_t edge_bound = 0;

  bool within_bounds() const { return vertices <= vertex_bound && edges <= edge_bound; }
};

// Explicit game graph. Edges are grouped by source vertex.
class Arena {
 public:
  // Throws InputError on out-of-range vertices.
  Arena(std::vector<Player> owner, std::vector<ArenaEdge> edges, StateId initial, std::vector<StateId> marked,
        ObjectiveKind objective);

  std::size_t num_vertices() const noexcept { return owner_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  Player owner(StateId v) const { return owner_[v]; }
  const std::vector<Player>& owners() const noexcept { return owner_; }
  StateId initial() const noexcept { return initial_; }
  ObjectiveKind objective() const noexcept { return objective_; }
  // Target set for Reach, forbidden set for Safe.
  bool marked(StateId v) const { return marked_[v] != 0; }
  std::vector<StateId> marked_vertices() const;

  const std::vector<ArenaEdge>& edges() const noexcept { return edges_; }
  const ArenaEdge& edge(std::size_t e) const { return edges_.at(e); }
  // Edge index range [first, last) leaving v.
  std::pair<std::size_t, std::size_t> out_range(StateId v) const { return {offsets_[v], offsets_[v + 1]}; }

  // Product arenas only: the (underlying state, guard states) tuple of v.
  bool has_product_labels() const noexcept { return !underlying_.empty(); }
  StateId underlying_state(StateId v) const { return underlying_.at(v); }
  std::vector<StateId> guard_states(StateId v) const;

  ArenaStats stats() const;

 private:
  friend Arena build_arena(const HcsGame& game, std::size_t cap);

  std::vector<Player> owner_;
  std::vector<ArenaEdge> edges_;
  std::vector<std::size_t> offsets_;
  StateId initial_ = 0;
  std::vector<std::uint8_t> marked_;
  ObjectiveKind objective_;
  std::vector<StateId> underlying_;
  std::vector<StateId> guard_states_;  // num_vertices × guard_count_
  std::size_t guard_count_ = 0;
  std::uint64_t vertex_bound_ = 0;
  std::uint64_t edge_bound_ = 0;
};

// Reachable part of the product of the underlying automaton and the complete
// guard DFAs. Throws ResourceError beyond `cap` vertices.
Arena build_arena(const HcsGame& game, std::size_t cap = kDefaultStateCap);

inline constexpr std::uint32_t kNoEdge = std::numeric_limits<std::uint32_t>::max();

struct GameSolution {
  Player winner = Player::P0;  // from the initial vertex
  std::vector<std::uint8_t> region0;  // 1 where Player 0 wins
  // Per vertex: chosen edge index or kNoEdge. strategy0 is defined exactly on
  // Player-0 vertices of region 0 (minus the target for Reach); strategy1 on
  // Player-1 vertices of region 1 (minus the forbidden set for Safe).
  std::vector<std::uint32_t> strategy0;
  std::vector<std::uint32_t> strategy1;
  // Attractor rank of the objective's reaching player; kNoEdge outside it.
  std::vector<std::uint32_t> rank;
  ArenaStats stats;

  std::size_t region0_size() const;
};

// Attractor computation. Strategies pick the least edge index that decreases
// the attractor rank (attracting player) or stays outside the attractor
// (other player). Throws ContractError on an objective mismatch.
GameSolution solve_reachability(const Arena& arena);
GameSolution solve_safety(const Arena& arena);
GameSolution solve_arena(const Arena& arena);

GameSolution solve_hcs_game(const HcsGame& game, std::size_t cap = kDefaultStateCap);

// Same graph with every owner flipped and the objective switched.
Arena dual_arena(const Arena& arena);

struct CountdownEdge {
  StateId from = 0;
  std::uint64_t weight = 1;
  StateId to = 0;

  auto operator<=>(const CountdownEdge&) const = default;
};

struct CountdownGame {
  std::vector<std::string> states;
  StateId initial = 0;
  std::uint64_t target = 0;
  std::vector<CountdownEdge> edges;

  // Throws InputError on zero weights, out-of-range states, or no states.
  void validate() const;
  bool normalized() const;  // all weights and the target are powers of two (or target 0)
  bool operator==(const CountdownGame&) const = default;
};

// Backward fixpoint over (state, remaining value). A configuration with a
// nonzero value and no weight d ≤ value is lost by Player 0. Throws
// ResourceError when (target + 1)·|states| exceeds cap.
Player solve_countdown(const CountdownGame& game, std::size_t cap = kDefaultStateCap);
// Count-up view from 0 to the target, with Player 0 choosing (s, d, s_d) and
// Player 1 choosing a successor of s_d, solved on an explicit arena.
Player solve_countup(const CountdownGame& game, std::size_t cap = kDefaultStateCap);

// Weights above the target are dropped (they can never be played). With
// target 0 every state has an unguarded ε edge to the goal. Throws InputError
// unless the game is normalized.
HcsGame countdown_to_hcs_game(const CountdownGame& game);
// Bit-counter guard D_i for target 2^k over the reduction alphabet.
FiniteAutomaton counter_guard(std::size_t i, std::size_t k);
Alphabet countdown_alphabet(std::size_t k);

// Equivalent game whose weights and target are powers of two. Weights are
// scaled by 2^B; each non-power weight d at s becomes a forced chain starting
// with a tag 2^j (j < B, unique per distinct weight at s), followed by the bits
// of (d-1)·2^B and then 2^j, 2^{j+1}, …, 2^{B-1}. The counter is a multiple of
// 2^B only at original states, so no chain can end the game early. A
// non-power target is padded by a forced prefix chain from a fresh initial
// state. Already-normalized games are returned unchanged.
CountdownGame normalize_countdown(const CountdownGame& game);

}  // namespace hcs
