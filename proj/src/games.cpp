#include "hcs/games.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "detail/util.hpp"

namespace hcs {

namespace {

// Adds owner-aware sinks for (state, symbol) pairs without an unguarded move.
Hcs complete_for_game(const Hcs& hcs, std::vector<Player>& owner, Objective& objective) {
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t k = hcs.alphabet().size();
  const auto all = u.transitions();
  std::vector<std::pair<StateId, SymbolId>> missing;
  bool need[2] = {false, false};
  for (StateId q = 0; q < u.num_states(); ++q) {
    for (SymbolId a = 0; a < k; ++a) {
      auto out = u.outgoing(q, a);
      bool free_move = std::any_of(out.begin(), out.end(), [&](const Transition& t) {
        return !hcs.transition_guard(static_cast<std::size_t>(&t - all.data()));
      });
      if (!free_move) {
        missing.emplace_back(q, a);
        need[static_cast<int>(owner[q])] = true;
      }
    }
  }
  if (missing.empty()) return hcs;

  std::vector<std::string> states = u.state_names();
  auto transitions = hcs.guarded_transitions();
  StateId sink[2] = {0, 0};
  // sink[p] absorbs blocked states of player p; it is a win for the opponent.
  for (int p = 0; p < 2; ++p) {
    if (!need[p]) continue;
    sink[p] = static_cast<StateId>(states.size());
    states.push_back(detail::fresh_name(p == 0 ? "sink_lose" : "sink_win", states));
    owner.push_back(static_cast<Player>(p));
    for (SymbolId a = 0; a < k; ++a) transitions.push_back({sink[p], a, sink[p], std::nullopt});
    const bool marked = (p == 1) == (objective.kind == ObjectiveKind::Reach);
    if (marked) objective.states.push_back(sink[p]);
  }
  for (auto [q, a] : missing) transitions.push_back({q, a, sink[static_cast<int>(owner[q])], std::nullopt});
  return Hcs(hcs.alphabet(), std::move(states), u.initial(), u.accepting(), std::move(transitions), hcs.guards());
}

}  // namespace

HcsGame::HcsGame(Hcs hcs, std::vector<Player> owner, Objective objective)
    : hcs_(std::move(hcs)), owner_(std::move(owner)), objective_(std::move(objective)) {
  if (!hcs_.all_guards_finite_state()) throw InputError("games need finite-state guards");
  input_states_ = hcs_.underlying().num_states();
  if (owner_.size() != input_states_) throw InputError("owner map must cover every state");
  for (StateId q : objective_.states) {
    if (q >= input_states_) throw InputError("objective state out of range");
  }
  hcs_ = complete_for_game(hcs_, owner_, objective_);
  detail::sort_unique(objective_.states);
}

Arena::Arena(std::vector<Player> owner, std::vector<ArenaEdge> edges, StateId initial, std::vector<StateId> marked,
             ObjectiveKind objective)
    : owner_(std::move(owner)), edges_(std::move(edges)), initial_(initial), objective_(objective) {
  const std::size_t n = owner_.size();
  if (n == 0) throw InputError("arena has no vertices");
  if (initial_ >= n) throw InputError("initial vertex out of range");
  marked_.assign(n, 0);
  for (StateId v : marked) {
    if (v >= n) throw InputError("marked vertex out of range");
    marked_[v] = 1;
  }
  for (const auto& e : edges_) {
    if (e.from >= n || e.to >= n) throw InputError("edge vertex out of range");
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const ArenaEdge& a, const ArenaEdge& b) { return a.from < b.from; });
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) ++offsets_[e.from + 1];
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
}

std::vector<StateId> Arena::marked_vertices() const {
  std::vector<StateId> out;
  for (StateId v = 0; v < marked_.size(); ++v) {
    if (marked_[v]) out.push_back(v);
  }
  return out;
}

std::vector<StateId> Arena::guard_states(StateId v) const {
  if (!has_product_labels()) throw ContractError("arena has no product labels");
  auto first = guard_states_.begin() + static_cast<std::ptrdiff_t>(v * guard_count_);
  return {first, first + static_cast<std::ptrdiff_t>(guard_count_)};
}

ArenaStats Arena::stats() const { return {num_vertices(), num_edges(), vertex_bound_, edge_bound_}; }

namespace {

// Interns (state, guard states) tuples; packs them into 64 bits when they fit.
class TupleTable {
 public:
  explicit TupleTable(const std::vector<std::size_t>& ranges) {
    for (std::size_t r : ranges) {
      unsigned width = static_cast<unsigned>(std::bit_width(r));
      shifts_.push_back(total_);
      total_ += width;
    }
    packed_ = total_ <= 64;
  }

  // Returns (id, inserted).
  std::pair<StateId, bool> intern(const std::vector<StateId>& tuple, StateId next_id) {
    if (packed_) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < tuple.size(); ++i) key |= static_cast<std::uint64_t>(tuple[i]) << shifts_[i];
      auto [it, inserted] = small_.try_emplace(key, next_id);
      return {it->second, inserted};
    }
    auto [it, inserted] = large_.try_emplace(tuple, next_id);
    return {it->second, inserted};
  }

 private:
  std::vector<unsigned> shifts_;
  unsigned total_ = 0;
  bool packed_ = true;
  std::unordered_map<std::uint64_t, StateId> small_;
  std::unordered_map<std::vector<StateId>, StateId, detail::VectorHash> large_;
};

}  // namespace

Arena build_arena(const HcsGame& game, std::size_t cap) {
  const Hcs& hcs = game.hcs();
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t k = hcs.alphabet().size();
  const std::size_t m = hcs.guard_count();

  std::vector<FiniteAutomaton> dfas;
  std::vector<std::vector<StateId>> next(m);
  std::vector<std::size_t> ranges{u.num_states()};
  std::uint64_t guard_states = 0;
  std::uint64_t guard_transitions = 0;
  for (std::size_t i = 0; i < m; ++i) {
    dfas.push_back(compile_guard(hcs.guard(i), cap));
    next[i].resize(dfas[i].num_states() * k);
    for (const auto& t : dfas[i].transitions()) next[i][t.from * k + t.label] = t.to;
    ranges.push_back(dfas[i].num_states());
    guard_states += dfas[i].num_states();
    guard_transitions += dfas[i].transitions().size();
  }

  std::vector<char> target(u.num_states(), 0);
  for (StateId q : game.objective().states) target[q] = 1;

  TupleTable table(ranges);
  std::vector<StateId> underlying;
  std::vector<StateId> guards;  // flat, stride m
  std::vector<ArenaEdge> edges;

  std::vector<StateId> tuple(m + 1);
  auto add = [&](StateId q, const StateId* gs) {
    tuple[0] = q;
    std::copy(gs, gs + m, tuple.begin() + 1);
    auto [id, inserted] = table.intern(tuple, static_cast<StateId>(underlying.size()));
    if (inserted) {
      if (underlying.size() >= cap) throw ResourceError("arena exceeds the vertex cap", cap);
      underlying.push_back(q);
      guards.insert(guards.end(), gs, gs + m);
    }
    return id;
  };

  std::vector<StateId> init(m);
  for (std::size_t i = 0; i < m; ++i) init[i] = dfas[i].initial();
  add(u.initial(), init.data());

  const auto all = u.transitions();
  std::vector<StateId> current(m);
  std::vector<StateId> successors(k * m);
  std::vector<char> computed(k);
  for (StateId v = 0; v < underlying.size(); ++v) {
    const StateId q = underlying[v];
    std::copy_n(guards.begin() + static_cast<std::ptrdiff_t>(v * m), m, current.begin());
    std::fill(computed.begin(), computed.end(), 0);
    auto [first, last] = u.outgoing_range(q);
    for (std::size_t t = first; t < last; ++t) {
      const Transition& tr = all[t];
      if (auto g = hcs.transition_guard(t); g && !dfas[*g].is_accepting(current[*g])) continue;
      const StateId* gs = current.data();
      if (tr.label != kEpsilon) {
        StateId* out = successors.data() + tr.label * m;
        if (!computed[tr.label]) {
          for (std::size_t i = 0; i < m; ++i) out[i] = next[i][current[i] * k + tr.label];
          computed[tr.label] = 1;
        }
        gs = out;
      }
      edges.push_back({v, tr.label, add(tr.to, gs)});
    }
  }

  const std::size_t n = underlying.size();
  std::vector<Player> owner(n);
  std::vector<StateId> marked;
  for (StateId v = 0; v < n; ++v) {
    owner[v] = game.owner(underlying[v]);
    if (target[underlying[v]]) marked.push_back(v);
  }
  Arena arena(std::move(owner), std::move(edges), 0, std::move(marked), game.objective().kind);
  arena.underlying_ = std::move(underlying);
  arena.guard_states_ = std::move(guards);
  arena.guard_count_ = m;
  arena.vertex_bound_ = detail::saturating_mul(u.num_states(), detail::saturating_pow(guard_states, m));
  arena.edge_bound_ = detail::saturating_mul(all.size(), detail::saturating_pow(guard_transitions, m));
  return arena;
}

std::size_t GameSolution::region0_size() const {
  return static_cast<std::size_t>(std::count(region0.begin(), region0.end(), 1));
}

namespace {

struct Attractor {
  std::vector<std::uint8_t> in;
  std::vector<std::uint32_t> rank;
};

// Vertices from which `player` can force a visit to `goal`. A vertex of the
// other player without moves is attracted too (a player who cannot move loses).
Attractor attractor(const Arena& arena, Player player, const std::vector<StateId>& goal) {
  const std::size_t n = arena.num_vertices();
  const auto& edges = arena.edges();
  std::vector<std::size_t> pred_offsets(n + 1, 0);
  for (const auto& e : edges) ++pred_offsets[e.to + 1];
  for (std::size_t v = 0; v < n; ++v) pred_offsets[v + 1] += pred_offsets[v];
  std::vector<StateId> preds(edges.size());
  {
    std::vector<std::size_t> fill(pred_offsets.begin(), pred_offsets.end() - 1);
    for (const auto& e : edges) preds[fill[e.to]++] = e.from;
  }

  Attractor result{std::vector<std::uint8_t>(n, 0), std::vector<std::uint32_t>(n, kNoEdge)};
  std::vector<std::size_t> count(n);
  std::vector<StateId> queue;
  for (StateId v = 0; v < n; ++v) {
    auto [first, last] = arena.out_range(v);
    count[v] = last - first;
  }
  auto enter = [&](StateId v, std::uint32_t rank) {
    result.in[v] = 1;
    result.rank[v] = rank;
    queue.push_back(v);
  };
  for (StateId v : goal) {
    if (!result.in[v]) enter(v, 0);
  }
  for (StateId v = 0; v < n; ++v) {
    if (!result.in[v] && count[v] == 0 && arena.owner(v) != player) enter(v, 0);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const StateId v = queue[head];
    for (std::size_t i = pred_offsets[v]; i < pred_offsets[v + 1]; ++i) {
      const StateId u = preds[i];
      if (result.in[u]) continue;
      if (arena.owner(u) == player || --count[u] == 0) enter(u, result.rank[v] + 1);
    }
  }
  return result;
}

// Least edge leaving v into a vertex accepted by `good`.
template <class Good>
std::uint32_t first_edge(const Arena& arena, StateId v, Good good) {
  auto [first, last] = arena.out_range(v);
  for (std::size_t e = first; e < last; ++e) {
    if (good(arena.edge(e).to)) return static_cast<std::uint32_t>(e);
  }
  return kNoEdge;
}

// `reacher` attracts to the marked set; the other player stays outside.
GameSolution solve(const Arena& arena, Player reacher) {
  const std::size_t n = arena.num_vertices();
  const Attractor attr = attractor(arena, reacher, arena.marked_vertices());
  GameSolution sol;
  sol.region0.assign(n, 0);
  sol.strategy0.assign(n, kNoEdge);
  sol.strategy1.assign(n, kNoEdge);
  sol.rank = attr.rank;
  sol.stats = arena.stats();
  auto& reach_strategy = reacher == Player::P0 ? sol.strategy0 : sol.strategy1;
  auto& stay_strategy = reacher == Player::P0 ? sol.strategy1 : sol.strategy0;
  for (StateId v = 0; v < n; ++v) {
    const bool reached = attr.in[v] != 0;
    sol.region0[v] = reached == (reacher == Player::P0);
    if (reached && arena.owner(v) == reacher && attr.rank[v] > 0) {
      reach_strategy[v] = first_edge(arena, v, [&](StateId w) { return attr.rank[w] < attr.rank[v]; });
    } else if (!reached && arena.owner(v) != reacher) {
      stay_strategy[v] = first_edge(arena, v, [&](StateId w) { return !attr.in[w]; });
    }
  }
  sol.winner = sol.region0[arena.initial()] ? Player::P0 : Player::P1;
  return sol;
}

}  // namespace

GameSolution solve_reachability(const Arena& arena) {
  if (arena.objective() != ObjectiveKind::Reach) throw ContractError("solve_reachability needs a Reach arena");
  return solve(arena, Player::P0);
}

GameSolution solve_safety(const Arena& arena) {
  if (arena.objective() != ObjectiveKind::Safe) throw ContractError("solve_safety needs a Safe arena");
  return solve(arena, Player::P1);
}

GameSolution solve_arena(const Arena& arena) {
  return arena.objective() == ObjectiveKind::Reach ? solve_reachability(arena) : solve_safety(arena);
}

GameSolution solve_hcs_game(const HcsGame& game, std::size_t cap) { return solve_arena(build_arena(game, cap)); }

Arena dual_arena(const Arena& arena) {
  std::vector<Player> owner = arena.owners();
  for (auto& p : owner) p = opponent(p);
  const ObjectiveKind kind = arena.objective() == ObjectiveKind::Reach ? ObjectiveKind::Safe : ObjectiveKind::Reach;
  return Arena(std::move(owner), arena.edges(), arena.initial(), arena.marked_vertices(), kind);
}

}  // namespace hcs
