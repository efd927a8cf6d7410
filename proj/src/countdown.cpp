#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <unordered_set>

#include "detail/util.hpp"
#include "hcs/games.hpp"

namespace hcs {

void CountdownGame::validate() const {
  if (states.empty()) throw InputError("countdown game has no states");
  if (initial >= states.size()) throw InputError("initial state out of range");
  std::unordered_set<std::string> seen;
  for (const auto& s : states) {
    if (s.empty()) throw InputError("empty state name");
    if (!seen.insert(s).second) throw InputError("duplicate state name: " + s);
  }
  for (const auto& e : edges) {
    if (e.from >= states.size() || e.to >= states.size()) throw InputError("edge state out of range");
    if (e.weight == 0) throw InputError("countdown weights must be positive");
  }
}

bool CountdownGame::normalized() const {
  if (target != 0 && !std::has_single_bit(target)) return false;
  return std::all_of(edges.begin(), edges.end(), [](const CountdownEdge& e) { return std::has_single_bit(e.weight); });
}

namespace {

// Successor lists per (state, weight).
std::map<std::pair<StateId, std::uint64_t>, std::vector<StateId>> moves(const CountdownGame& game) {
  std::map<std::pair<StateId, std::uint64_t>, std::vector<StateId>> out;
  for (const auto& e : game.edges) out[{e.from, e.weight}].push_back(e.to);
  for (auto& [key, succ] : out) detail::sort_unique(succ);
  return out;
}

void check_table(const CountdownGame& game, std::size_t cap) {
  const std::uint64_t cells = detail::saturating_mul(detail::saturating_add(game.target, 1), game.states.size());
  if (cells > cap) throw ResourceError("countdown table exceeds the cap", cap);
}

}  // namespace

Player solve_countdown(const CountdownGame& game, std::size_t cap) {
  game.validate();
  check_table(game, cap);
  const std::size_t n = game.states.size();
  const auto by_weight = moves(game);
  const std::size_t x = game.target;
  std::vector<char> win((x + 1) * n, 0);
  for (std::size_t s = 0; s < n; ++s) win[s] = 1;
  for (std::size_t v = 1; v <= x; ++v) {
    for (const auto& [key, succ] : by_weight) {
      const auto [s, d] = key;
      if (d > v || win[v * n + s]) continue;
      const bool all = std::all_of(succ.begin(), succ.end(), [&](StateId t) { return win[(v - d) * n + t] != 0; });
      if (all) win[v * n + s] = 1;
    }
  }
  return win[x * n + game.initial] ? Player::P0 : Player::P1;
}

Player solve_countup(const CountdownGame& game, std::size_t cap) {
  game.validate();
  check_table(game, cap);
  const auto by_weight = moves(game);
  const std::uint64_t x = game.target;

  // Vertex keys: (state, weight, count); weight 0 marks a Player-0 vertex.
  std::map<std::tuple<StateId, std::uint64_t, std::uint64_t>, StateId> ids;
  std::vector<std::tuple<StateId, std::uint64_t, std::uint64_t>> keys;
  std::vector<Player> owner;
  std::vector<ArenaEdge> edges;
  std::vector<StateId> goal;
  auto id = [&](StateId s, std::uint64_t d, std::uint64_t c) {
    auto [it, inserted] = ids.try_emplace({s, d, c}, static_cast<StateId>(keys.size()));
    if (inserted) {
      if (keys.size() >= cap) throw ResourceError("count-up arena exceeds the cap", cap);
      keys.emplace_back(s, d, c);
      owner.push_back(d == 0 ? Player::P0 : Player::P1);
      if (d == 0 && c == x) goal.push_back(it->second);
    }
    return it->second;
  };
  id(game.initial, 0, 0);
  for (StateId v = 0; v < keys.size(); ++v) {
    const auto [s, d, c] = keys[v];
    if (d == 0) {
      if (c == x) continue;
      for (auto it = by_weight.lower_bound({s, 0}); it != by_weight.end() && it->first.first == s; ++it) {
        const std::uint64_t w = it->first.second;
        if (w <= x - c) edges.push_back({v, 0, id(s, w, c)});
      }
    } else {
      for (StateId t : by_weight.at({s, d})) edges.push_back({v, 0, id(t, 0, c + d)});
    }
  }
  Arena arena(std::move(owner), std::move(edges), 0, std::move(goal), ObjectiveKind::Reach);
  return solve_reachability(arena).winner;
}

namespace {

std::string power_name(std::size_t i) { return "2^" + std::to_string(i); }

}  // namespace

Alphabet countdown_alphabet(std::size_t k) {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i <= k; ++i) symbols.push_back(power_name(i));
  for (std::size_t i = 0; i < k; ++i) symbols.push_back("c" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) symbols.push_back("n" + std::to_string(i));
  return Alphabet(std::move(symbols));
}

FiniteAutomaton counter_guard(std::size_t i, std::size_t k) {
  if (i > k) throw ContractError("counter guard index exceeds k");
  const Alphabet sigma = countdown_alphabet(k);
  const std::size_t size = sigma.size();
  const auto pow = [](std::size_t j) { return static_cast<SymbolId>(j); };
  const auto carry = [&](std::size_t j) { return static_cast<SymbolId>(k + 1 + j); };
  const auto none = [&](std::size_t j) { return static_cast<SymbolId>(2 * k + 1 + j); };
  const std::string idx = std::to_string(i);
  std::vector<Transition> ts;

  if (i == k) {
    // p_k, q_k, r_k.
    const StateId p = 0, q = 1, r = 2;
    for (SymbolId a = 0; a < size; ++a) {
      const bool inc = a == pow(k) || (k > 0 && a == carry(k - 1));
      ts.push_back({p, a, inc ? q : p});
      const bool keep = a >= none(0) && k > 0;
      ts.push_back({q, a, keep ? q : r});
      ts.push_back({r, a, r});
    }
    return FiniteAutomaton(sigma, {"p" + idx, "q" + idx, "r" + idx}, p, {q}, std::move(ts));
  }

  // p_i, q_i, a_i, r_i for i < k.
  const StateId p = 0, q = 1, c = 2, r = 3;
  for (SymbolId a = 0; a < size; ++a) {
    const bool inc = a == pow(i) || (i > 0 && a == carry(i - 1));
    const bool own_carry = a == carry(i);
    ts.push_back({p, a, inc ? q : own_carry ? r : p});
    ts.push_back({q, a, inc ? c : own_carry ? r : q});
    ts.push_back({c, a, own_carry ? p : (inc || a == none(i)) ? r : c});
    ts.push_back({r, a, r});
  }
  return FiniteAutomaton(sigma, {"p" + idx, "q" + idx, "a" + idx, "r" + idx}, p, {p}, std::move(ts));
}

HcsGame countdown_to_hcs_game(const CountdownGame& game) {
  game.validate();
  if (!game.normalized()) throw InputError("countdown weights and target must be powers of two; normalize first");

  std::vector<std::string> taken = game.states;
  auto fresh = [&](const std::string& base) {
    taken.push_back(detail::fresh_name(base, taken));
    return taken.back();
  };

  if (game.target == 0) {
    HcsBuilder b(countdown_alphabet(0));
    std::vector<Player> owner;
    for (const auto& s : game.states) {
      b.add_state(s);
      owner.push_back(Player::P0);
    }
    b.set_initial(game.initial);
    const StateId goal = b.add_state(fresh("goal"), true);
    owner.push_back(Player::P0);
    for (StateId s = 0; s < game.states.size(); ++s) b.add_transition(s, kEpsilon, goal);
    return HcsGame(b.build(), std::move(owner), {ObjectiveKind::Reach, {goal}});
  }

  const std::size_t k = static_cast<std::size_t>(std::countr_zero(game.target));
  HcsBuilder b(countdown_alphabet(k));
  std::vector<Player> owner;
  auto state = [&](const std::string& name, Player p, bool accepting = false) {
    owner.push_back(p);
    return b.add_state(name, accepting);
  };
  for (const auto& s : game.states) state(s, Player::P0);
  b.set_initial(game.initial);
  for (std::size_t i = 0; i <= k; ++i) b.add_guard("D" + std::to_string(i), counter_guard(i, k));

  for (const auto& [key, succ] : moves(game)) {
    const auto [s, d] = key;
    if (d > game.target) continue;
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(d));
    const std::string base = game.states[s] + "/" + power_name(bit) + "/";
    StateId at = s;
    SymbolId label = static_cast<SymbolId>(bit);
    for (std::size_t j = 0; j < k; ++j) {
      const StateId link = state(fresh(base + std::to_string(j)), Player::P0);
      b.add_transition(at, label, link);
      if (j > 0) b.add_transition(at, static_cast<SymbolId>(2 * k + j), link);  // n_{j-1}
      at = link;
      label = static_cast<SymbolId>(k + 1 + j);  // c_j
    }
    const StateId dispatch = state(fresh(base + "t"), Player::P1);
    b.add_transition(at, label, dispatch);
    if (k > 0) b.add_transition(at, static_cast<SymbolId>(3 * k), dispatch);  // n_{k-1}
    for (StateId t : succ) b.add_transition(dispatch, kEpsilon, t);
  }

  std::vector<StateId> chain;
  for (std::size_t i = 0; i <= k + 1; ++i) chain.push_back(state(fresh("e" + std::to_string(i)), Player::P0, i == k + 1));
  for (StateId s = 0; s < game.states.size(); ++s) b.add_transition(s, kEpsilon, chain[0]);
  for (std::size_t i = 0; i <= k; ++i) b.add_transition(chain[i], kEpsilon, chain[i + 1], "D" + std::to_string(i));
  return HcsGame(b.build(), std::move(owner), {ObjectiveKind::Reach, {chain.back()}});
}

CountdownGame normalize_countdown(const CountdownGame& game) {
  game.validate();
  if (game.normalized()) return game;

  // Tag index per (state, non-power weight).
  std::map<std::pair<StateId, std::uint64_t>, unsigned> tag;
  std::vector<unsigned> per_state(game.states.size(), 0);
  for (const auto& e : game.edges) {
    if (std::has_single_bit(e.weight)) continue;
    if (tag.try_emplace({e.from, e.weight}, per_state[e.from]).second) ++per_state[e.from];
  }
  const unsigned scale_bits = *std::max_element(per_state.begin(), per_state.end());
  auto scaled = [&](std::uint64_t v) {
    if (v > (std::numeric_limits<std::uint64_t>::max() >> (scale_bits + 1))) {
      throw InputError("countdown values too large to normalize");
    }
    return v << scale_bits;
  };
  auto bits_desc = [](std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (int b = 63; b >= 0; --b) {
      if (v >> b & 1) out.push_back(std::uint64_t{1} << b);
    }
    return out;
  };

  CountdownGame out;
  out.states = game.states;
  out.initial = game.initial;
  auto fresh = [&](const std::string& base) {
    out.states.push_back(detail::fresh_name(base, out.states));
    return static_cast<StateId>(out.states.size() - 1);
  };
  // Forced chain from `from` over `weights`; the last step fans out to `targets`.
  auto chain = [&](StateId from, const std::vector<std::uint64_t>& weights, const std::vector<StateId>& targets,
                   const std::string& base) {
    StateId at = from;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      const StateId link = fresh(base + "#" + std::to_string(i + 1));
      out.edges.push_back({at, weights[i], link});
      at = link;
    }
    for (StateId t : targets) out.edges.push_back({at, weights.back(), t});
  };

  for (const auto& [key, succ] : moves(game)) {
    const auto [s, d] = key;
    if (std::has_single_bit(d)) {
      for (StateId t : succ) out.edges.push_back({s, scaled(d), t});
      continue;
    }
    const unsigned j = tag.at(key);
    std::vector<std::uint64_t> weights{std::uint64_t{1} << j};
    for (std::uint64_t w : bits_desc(scaled(d - 1))) weights.push_back(w);
    for (unsigned b = j; b < scale_bits; ++b) weights.push_back(std::uint64_t{1} << b);
    chain(s, weights, succ, game.states[s] + "~" + std::to_string(d));
  }

  out.target = scaled(game.target);
  if (out.target != 0 && !std::has_single_bit(out.target)) {
    const std::uint64_t padded = std::bit_ceil(out.target);
    const StateId start = fresh("start");
    chain(start, bits_desc(padded - out.target), {game.initial}, "start");
    out.initial = start;
    out.target = padded;
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace hcs
