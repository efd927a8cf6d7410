#include "game_oracles.hpp"

#include <map>

#include "fixtures.hpp"

namespace hcs::oracles {


std::size_t for_each_countdown_game(std::size_t max_states, std::size_t max_edges,
                                    const std::vector<std::uint64_t>& weights,
                                    const std::vector<std::uint64_t>& targets,
                                    const std::function<void(const CountdownGame&)>& visit) {
  std::size_t visited = 0;
  for (std::size_t n = 1; n <= max_states; ++n) {
    std::vector<std::pair<std::uint64_t, StateId>> options;
    for (std::uint64_t w : weights) {
      for (StateId t = 0; t < n; ++t) options.emplace_back(w, t);
    }
    // Edge subsets of size ≤ max_edges, as sorted index lists.
    std::vector<std::vector<std::size_t>> subsets{{}};
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (subsets[i].size() == max_edges) continue;
      const std::size_t start = subsets[i].empty() ? 0 : subsets[i].back() + 1;
      for (std::size_t o = start; o < options.size(); ++o) {
        auto next = subsets[i];
        next.push_back(o);
        subsets.push_back(std::move(next));
      }
    }
    std::vector<std::size_t> choice(n, 0);
    CountdownGame game;
    for (std::size_t s = 0; s < n; ++s) game.states.push_back("s" + std::to_string(s));
    while (true) {
      game.edges.clear();
      for (StateId s = 0; s < n; ++s) {
        for (std::size_t o : subsets[choice[s]]) game.edges.push_back({s, options[o].first, options[o].second});
      }
      for (std::uint64_t x : targets) {
        game.target = x;
        visit(game);
        ++visited;
      }
      std::size_t pos = 0;
      while (pos < n && ++choice[pos] == subsets.size()) choice[pos++] = 0;
      if (pos == n) break;
    }
  }
  return visited;
}

Player countdown_by_recursion(const CountdownGame& game) {
  std::map<std::pair<StateId, std::uint64_t>, bool> memo;
  std::function<bool(StateId, std::uint64_t)> wins = [&](StateId s, std::uint64_t v) -> bool {
    if (v == 0) return true;
    auto it = memo.find({s, v});
    if (it != memo.end()) return it->second;
    bool result = false;
    for (const auto& e : game.edges) {
      if (e.from != s || e.weight > v) continue;
      bool all = true;
      for (const auto& f : game.edges) {
        if (f.from == s && f.weight == e.weight && !wins(f.to, v - e.weight)) all = false;
      }
      if (all) {
        result = true;
        break;
      }
    }
    memo[{s, v}] = result;
    return result;
  };
  return wins(game.initial, game.target) ? Player::P0 : Player::P1;
}

bool strategy_closed(const Arena& arena, const GameSolution& sol, Player player) {
  const auto& strategy = player == Player::P0 ? sol.strategy0 : sol.strategy1;
  const bool reacher = (player == Player::P0) == (arena.objective() == ObjectiveKind::Reach);
  auto in_region = [&](StateId v) { return (sol.region0[v] != 0) == (player == Player::P0); };
  for (StateId v = 0; v < arena.num_vertices(); ++v) {
    if (!in_region(v)) continue;
    if (reacher && sol.rank[v] == 0) continue;
    auto [first, last] = arena.out_range(v);
    if (arena.owner(v) == player) {
      const std::uint32_t e = strategy[v];
      if (e == kNoEdge || e < first || e >= last) return false;
      const StateId w = arena.edge(e).to;
      if (!in_region(w)) return false;
      if (reacher && !(sol.rank[w] < sol.rank[v])) return false;
    } else {
      for (std::size_t e = first; e < last; ++e) {
        const StateId w = arena.edge(e).to;
        if (!in_region(w)) return false;
        if (reacher && !(sol.rank[w] < sol.rank[v])) return false;
      }
    }
  }
  return true;
}

std::vector<Player> alternating_owner(std::size_t n) {
  std::vector<Player> owner(n);
  for (std::size_t q = 0; q < n; ++q) owner[q] = q % 2 ? Player::P1 : Player::P0;
  return owner;
}


Arena random_arena(std::mt19937& rng, std::size_t n, ObjectiveKind kind) {
  std::vector<Player> owner(n);
  std::vector<ArenaEdge> edges;
  std::vector<StateId> marked;
  for (StateId v = 0; v < n; ++v) {
    owner[v] = rng() % 2 ? Player::P1 : Player::P0;
    if (rng() % 4 == 0) marked.push_back(v);
    const std::size_t degree = rng() % 3;  // dead ends included
    for (std::size_t i = 0; i < degree; ++i) edges.push_back({v, 0, static_cast<StateId>(rng() % n)});
  }
  return Arena(std::move(owner), std::move(edges), 0, std::move(marked), kind);
}

// HCS fixtures read as games: accepting states are the target.
std::vector<HcsGame> game_fixtures() {
  std::vector<HcsGame> games;
  for (const auto& [name, h] : fixtures::regular_hcs_fixtures()) {
    const auto& acc = h.underlying().accepting();
    const std::size_t n = h.underlying().num_states();
    games.emplace_back(h, alternating_owner(n), Objective{ObjectiveKind::Reach, acc});
    games.emplace_back(h, std::vector<Player>(n, Player::P0), Objective{ObjectiveKind::Safe, acc});
  }
  for (std::uint64_t x : {1, 2, 4, 8}) {
    CountdownGame g{{"s", "t"}, 0, x, {{0, 1, 0}, {0, 2, 1}, {0, 2, 0}, {1, 4, 0}}};
    games.push_back(countdown_to_hcs_game(g));
  }
  return games;
}

}  // namespace hcs::oracles
