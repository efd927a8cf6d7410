#include "hcs/vass.hpp"

#include <algorithm>
#include <unordered_set>

#include "detail/util.hpp"

namespace hcs {

Vass::Vass(Alphabet alphabet, std::size_t dim, std::vector<std::string> states, StateId initial,
           std::vector<StateId> accepting, std::vector<VassTransition> transitions, VassMode mode)
    : alphabet_(std::move(alphabet)),
      dim_(dim),
      states_(std::move(states)),
      initial_(initial),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)),
      mode_(mode) {
  const std::size_t n = states_.size();
  if (dim_ == 0) throw InputError("VASS dimension must be at least 1");
  if (n == 0) throw InputError("VASS has no states");
  {
    std::unordered_set<std::string> seen;
    for (const auto& s : states_) {
      if (s.empty()) throw InputError("empty state name");
      if (!seen.insert(s).second) throw InputError("duplicate state name: " + s);
    }
  }
  if (initial_ >= n) throw InputError("initial state out of range");
  detail::sort_unique(accepting_);
  accepting_mask_.assign(n, 0);
  for (StateId q : accepting_) {
    if (q >= n) throw InputError("accepting state out of range");
    accepting_mask_[q] = 1;
  }
  for (const auto& t : transitions_) {
    if (t.from >= n || t.to >= n) throw InputError("transition state out of range");
    if (t.label != kEpsilon && t.label >= alphabet_.size()) throw InputError("transition label out of range");
    if (t.update.size() != dim_) throw InputError("update vector has wrong dimension");
    for (Counter u : t.update) {
      if (u == kOmega || u == std::numeric_limits<Counter>::min()) throw InputError("update out of range");
    }
  }
  std::sort(transitions_.begin(), transitions_.end(), [](const VassTransition& a, const VassTransition& b) {
    return std::tie(a.from, a.label, a.to, a.update) < std::tie(b.from, b.label, b.to, b.update);
  });
  for (std::size_t i = 1; i < transitions_.size(); ++i) {
    if (transitions_[i] == transitions_[i - 1]) throw InputError("duplicate VASS transition");
  }
  offsets_.assign(n + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.from + 1];
  for (std::size_t q = 0; q < n; ++q) offsets_[q + 1] += offsets_[q];

  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.epsilon()) deterministic_ = false;
    if (i > 0 && transitions_[i - 1].from == t.from && transitions_[i - 1].label == t.label) {
      deterministic_ = false;
    }
  }
  complete_ = deterministic_ && transitions_.size() == n * alphabet_.size();
}

std::optional<StateId> Vass::find_state(std::string_view name) const {
  for (StateId q = 0; q < states_.size(); ++q) {
    if (states_[q] == name) return q;
  }
  return std::nullopt;
}

std::span<const VassTransition> Vass::outgoing(StateId q) const {
  return std::span<const VassTransition>(transitions_).subspan(offsets_[q], offsets_[q + 1] - offsets_[q]);
}

std::span<const VassTransition> Vass::outgoing(StateId q, SymbolId label) const {
  auto all = outgoing(q);
  std::size_t lo = 0;
  while (lo < all.size() && all[lo].label < label) ++lo;
  std::size_t hi = lo;
  while (hi < all.size() && all[hi].label == label) ++hi;
  return all.subspan(lo, hi - lo);
}

bool Vass::has_epsilon_cycle() const {
  // Colour-based DFS over the ε-subgraph.
  std::vector<int> colour(states_.size(), 0);
  std::vector<std::pair<StateId, std::size_t>> stack;
  for (StateId root = 0; root < states_.size(); ++root) {
    if (colour[root]) continue;
    stack.emplace_back(root, 0);
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [q, i] = stack.back();
      auto eps = outgoing(q, kEpsilon);
      if (i == eps.size()) {
        colour[q] = 2;
        stack.pop_back();
        continue;
      }
      StateId r = eps[i++].to;
      if (colour[r] == 1) return true;
      if (colour[r] == 0) {
        colour[r] = 1;
        stack.emplace_back(r, 0);
      }
    }
  }
  return false;
}

std::uint64_t Vass::unary_size() const {
  std::uint64_t size = states_.size();
  for (const auto& t : transitions_) {
    std::uint64_t m = 1;
    for (Counter u : t.update) m = std::max<std::uint64_t>(m, static_cast<std::uint64_t>(u < 0 ? -u : u));
    size = detail::saturating_add(size, m);
  }
  return size;
}

bool Vass::operator==(const Vass& other) const {
  return alphabet_ == other.alphabet_ && dim_ == other.dim_ && states_ == other.states_ &&
         initial_ == other.initial_ && accepting_ == other.accepting_ && transitions_ == other.transitions_ &&
         mode_ == other.mode_;
}

bool covered_by(const VassConfig& smaller, const VassConfig& larger) {
  if (smaller.state != larger.state) return false;
  for (std::size_t i = 0; i < smaller.counters.size(); ++i) {
    if (larger.counters[i] == kOmega) continue;
    if (smaller.counters[i] == kOmega || smaller.counters[i] > larger.counters[i]) return false;
  }
  return true;
}

std::optional<VassConfig> fire(const VassConfig& c, const VassTransition& t) {
  if (c.state != t.from) return std::nullopt;
  VassConfig next{t.to, c.counters};
  for (std::size_t i = 0; i < next.counters.size(); ++i) {
    if (next.counters[i] == kOmega) continue;
    next.counters[i] += t.update[i];
    if (next.counters[i] < 0) return std::nullopt;
  }
  return next;
}

namespace {

// Keeps only maximal configurations (one copy of each).
std::vector<VassConfig> antichain(std::vector<VassConfig> configs) {
  detail::sort_unique(configs);
  std::vector<VassConfig> result;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < configs.size() && !dominated; ++j) {
      dominated = j != i && covered_by(configs[i], configs[j]) && configs[i] != configs[j];
    }
    if (!dominated) result.push_back(configs[i]);
  }
  return result;
}

// ε-closure with Karp–Miller acceleration along ε-paths.
std::vector<VassConfig> cover_closure(const Vass& vass, const std::vector<VassConfig>& roots) {
  struct Node {
    VassConfig config;
    long parent;
  };
  std::vector<Node> nodes;
  for (const auto& c : roots) nodes.push_back({c, -1});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& t : vass.outgoing(nodes[i].config.state, kEpsilon)) {
      auto next = fire(nodes[i].config, t);
      if (!next) continue;
      for (long a = static_cast<long>(i); a >= 0; a = nodes[static_cast<std::size_t>(a)].parent) {
        const VassConfig& anc = nodes[static_cast<std::size_t>(a)].config;
        if (!covered_by(anc, *next)) continue;
        for (std::size_t d = 0; d < next->counters.size(); ++d) {
          if (anc.counters[d] != next->counters[d]) next->counters[d] = kOmega;
        }
      }
      bool known = std::any_of(nodes.begin(), nodes.end(), [&](const Node& n) { return covered_by(*next, n.config); });
      if (!known) nodes.push_back({std::move(*next), static_cast<long>(i)});
    }
  }
  std::vector<VassConfig> configs;
  for (auto& n : nodes) configs.push_back(std::move(n.config));
  return antichain(std::move(configs));
}

std::vector<VassConfig> reach_closure(const Vass& vass, std::vector<VassConfig> configs) {
  detail::sort_unique(configs);
  std::vector<VassConfig> frontier = configs;
  while (!frontier.empty()) {
    std::vector<VassConfig> next;
    for (const auto& c : frontier) {
      for (const auto& t : vass.outgoing(c.state, kEpsilon)) {
        if (auto r = fire(c, t)) next.push_back(std::move(*r));
      }
    }
    detail::sort_unique(next);
    std::vector<VassConfig> fresh;
    std::set_difference(next.begin(), next.end(), configs.begin(), configs.end(), std::back_inserter(fresh));
    std::vector<VassConfig> merged;
    std::merge(configs.begin(), configs.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
    configs = std::move(merged);
    frontier = std::move(fresh);
  }
  return configs;
}

std::vector<VassConfig> closure(const Vass& vass, std::vector<VassConfig> configs) {
  if (configs.empty()) return configs;
  if (vass.mode() == VassMode::Cover) return cover_closure(vass, configs);
  if (vass.has_epsilon_cycle()) throw ContractError("Reach-mode VASS with an epsilon cycle is not supported");
  return reach_closure(vass, std::move(configs));
}

}  // namespace

VassRunState vass_start(const Vass& vass) {
  return vass_start_from(vass, VassConfig{vass.initial(), std::vector<Counter>(vass.dim(), 0)});
}

VassRunState vass_start_from(const Vass& vass, const VassConfig& start) {
  if (start.state >= vass.num_states() || start.counters.size() != vass.dim()) {
    throw InputError("start configuration does not fit the VASS");
  }
  if (std::any_of(start.counters.begin(), start.counters.end(), [](Counter x) { return x < 0; })) {
    throw InputError("start configuration has a negative counter");
  }
  return {closure(vass, {start})};
}

VassRunState vass_step(const Vass& vass, const VassRunState& state, SymbolId symbol) {
  std::vector<VassConfig> next;
  for (const auto& c : state.configs) {
    for (const auto& t : vass.outgoing(c.state, symbol)) {
      if (auto r = fire(c, t)) next.push_back(std::move(*r));
    }
  }
  if (vass.mode() == VassMode::Cover) return {closure(vass, antichain(std::move(next)))};
  return {closure(vass, std::move(next))};
}

bool vass_accepting(const Vass& vass, const VassRunState& state) {
  for (const auto& c : state.configs) {
    if (!vass.is_accepting(c.state)) continue;
    if (vass.mode() == VassMode::Cover) return true;
    if (std::all_of(c.counters.begin(), c.counters.end(), [](Counter x) { return x == 0; })) return true;
  }
  return false;
}

bool vass_accepts(const Vass& vass, const Word& word) {
  return vass_accepts_from(vass, VassConfig{vass.initial(), std::vector<Counter>(vass.dim(), 0)}, word);
}

bool vass_accepts_from(const Vass& vass, const VassConfig& start, const Word& word) {
  for (SymbolId s : word) {
    if (s >= vass.alphabet().size()) throw InputError("symbol index out of range");
  }
  VassRunState state = vass_start_from(vass, start);
  for (SymbolId s : word) {
    state = vass_step(vass, state, s);
    if (state.dead()) return false;
  }
  return vass_accepting(vass, state);
}

bool vass_accepts(const Vass& vass, std::span<const std::string> word) {
  return vass_accepts(vass, parse_word(vass.alphabet(), word));
}

Vass complete_vass(const Vass& vass) {
  if (!vass.is_deterministic()) throw ContractError("complete_vass requires a deterministic VASS");
  if (vass.is_complete()) return vass;
  std::vector<std::string> names = vass.state_names();
  const StateId sink = static_cast<StateId>(names.size());
  names.push_back(detail::fresh_name("sink", vass.state_names()));
  std::vector<VassTransition> transitions(vass.transitions().begin(), vass.transitions().end());
  const std::vector<Counter> zero(vass.dim(), 0);
  for (StateId q = 0; q <= sink; ++q) {
    for (SymbolId a = 0; a < vass.alphabet().size(); ++a) {
      if (q == sink || vass.outgoing(q, a).empty()) transitions.push_back({q, a, zero, sink});
    }
  }
  return Vass(vass.alphabet(), vass.dim(), std::move(names), vass.initial(), vass.accepting(),
              std::move(transitions), vass.mode());
}

}  // namespace hcs
