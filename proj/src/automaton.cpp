#include "hcs/automaton.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "detail/util.hpp"

namespace hcs {

FiniteAutomaton::FiniteAutomaton(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                                 std::vector<StateId> accepting, std::vector<Transition> transitions)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)) {
  const std::size_t n = states_.size();
  if (n == 0) throw InputError("automaton has no states");
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
  }
  std::sort(transitions_.begin(), transitions_.end());
  for (std::size_t i = 1; i < transitions_.size(); ++i) {
    if (transitions_[i] == transitions_[i - 1]) {
      const auto& t = transitions_[i];
      throw InputError("duplicate transition " + states_[t.from] + " -" + label_name(alphabet_, t.label) +
                       "-> " + states_[t.to]);
    }
  }
  offsets_.assign(n + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.from + 1];
  for (std::size_t q = 0; q < n; ++q) offsets_[q + 1] += offsets_[q];

  deterministic_ = true;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.epsilon()) deterministic_ = false;
    if (i > 0 && transitions_[i - 1].from == t.from && transitions_[i - 1].label == t.label) {
      deterministic_ = false;
    }
  }
  complete_ = deterministic_ && transitions_.size() == n * alphabet_.size();
}

std::optional<StateId> FiniteAutomaton::find_state(std::string_view name) const {
  for (StateId q = 0; q < states_.size(); ++q) {
    if (states_[q] == name) return q;
  }
  return std::nullopt;
}

std::span<const Transition> FiniteAutomaton::outgoing(StateId q) const {
  return std::span<const Transition>(transitions_).subspan(offsets_[q], offsets_[q + 1] - offsets_[q]);
}

std::span<const Transition> FiniteAutomaton::outgoing(StateId q, SymbolId label) const {
  auto all = outgoing(q);
  auto lo = std::lower_bound(all.begin(), all.end(), label,
                             [](const Transition& t, SymbolId l) { return t.label < l; });
  auto hi = std::upper_bound(lo, all.end(), label,
                             [](SymbolId l, const Transition& t) { return l < t.label; });
  return all.subspan(static_cast<std::size_t>(lo - all.begin()), static_cast<std::size_t>(hi - lo));
}

std::optional<StateId> FiniteAutomaton::next(StateId q, SymbolId symbol) const {
  auto range = outgoing(q, symbol);
  if (range.empty()) return std::nullopt;
  return range.front().to;
}

bool FiniteAutomaton::operator==(const FiniteAutomaton& other) const {
  return alphabet_ == other.alphabet_ && states_ == other.states_ && initial_ == other.initial_ &&
         accepting_ == other.accepting_ && transitions_ == other.transitions_;
}

StateId AutomatonBuilder::add_state(std::string name, bool accepting) {
  states_.push_back(std::move(name));
  accepting_.push_back(accepting);
  return static_cast<StateId>(states_.size() - 1);
}

void AutomatonBuilder::set_accepting(StateId q, bool accepting) { accepting_.at(q) = accepting; }

void AutomatonBuilder::add_transition(StateId from, std::string_view label, StateId to) {
  add_transition(from, label == kEpsilonName ? kEpsilon : alphabet_.require(label), to);
}

FiniteAutomaton AutomatonBuilder::build() const {
  std::vector<StateId> accepting;
  for (StateId q = 0; q < accepting_.size(); ++q) {
    if (accepting_[q]) accepting.push_back(q);
  }
  std::vector<Transition> transitions = transitions_;
  detail::sort_unique(transitions);
  return FiniteAutomaton(alphabet_, states_, initial_, std::move(accepting), std::move(transitions));
}

Word to_word(const FiniteAutomaton& automaton, std::span<const std::string> symbols) {
  return parse_word(automaton.alphabet(), symbols);
}

std::vector<StateId> epsilon_closure(const FiniteAutomaton& automaton, std::vector<StateId> states) {
  std::vector<char> in(automaton.num_states(), 0);
  std::vector<StateId> stack;
  for (StateId q : states) {
    if (!in[q]) {
      in[q] = 1;
      stack.push_back(q);
    }
  }
  std::vector<StateId> closure = stack;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const auto& t : automaton.outgoing(q, kEpsilon)) {
      if (!in[t.to]) {
        in[t.to] = 1;
        closure.push_back(t.to);
        stack.push_back(t.to);
      }
    }
  }
  std::sort(closure.begin(), closure.end());
  return closure;
}

namespace {

std::vector<StateId> step_set(const FiniteAutomaton& a, const std::vector<StateId>& set, SymbolId symbol) {
  std::vector<StateId> next;
  for (StateId q : set) {
    for (const auto& t : a.outgoing(q, symbol)) next.push_back(t.to);
  }
  detail::sort_unique(next);
  return next;
}

}  // namespace

bool accepts(const FiniteAutomaton& automaton, const Word& word) {
  for (SymbolId s : word) {
    if (s >= automaton.alphabet().size()) throw InputError("symbol index out of range");
  }
  auto current = epsilon_closure(automaton, {automaton.initial()});
  for (SymbolId s : word) {
    current = epsilon_closure(automaton, step_set(automaton, current, s));
    if (current.empty()) return false;
  }
  return std::any_of(current.begin(), current.end(), [&](StateId q) { return automaton.is_accepting(q); });
}

bool accepts(const FiniteAutomaton& automaton, std::span<const std::string> word) {
  return accepts(automaton, to_word(automaton, word));
}

FiniteAutomaton determinize(const FiniteAutomaton& nfa, std::size_t cap) {
  const std::size_t k = nfa.alphabet().size();
  std::unordered_map<std::vector<StateId>, StateId, detail::VectorHash> index;
  std::vector<std::vector<StateId>> subsets;
  std::vector<Transition> transitions;

  auto intern = [&](std::vector<StateId> subset) {
    auto [it, inserted] = index.emplace(subset, static_cast<StateId>(subsets.size()));
    if (inserted) {
      if (subsets.size() >= cap) throw ResourceError("determinize exceeded the state cap", cap);
      subsets.push_back(std::move(subset));
    }
    return it->second;
  };

  intern(epsilon_closure(nfa, {nfa.initial()}));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (SymbolId a = 0; a < k; ++a) {
      auto next = epsilon_closure(nfa, step_set(nfa, subsets[i], a));
      StateId j = intern(std::move(next));
      transitions.push_back({static_cast<StateId>(i), a, j});
    }
  }

  std::vector<std::string> names;
  std::vector<StateId> accepting;
  for (StateId i = 0; i < subsets.size(); ++i) {
    names.push_back(detail::join_names(nfa.state_names(), subsets[i]));
    if (std::any_of(subsets[i].begin(), subsets[i].end(), [&](StateId q) { return nfa.is_accepting(q); })) {
      accepting.push_back(i);
    }
  }
  return FiniteAutomaton(nfa.alphabet(), std::move(names), 0, std::move(accepting), std::move(transitions));
}

FiniteAutomaton complete(const FiniteAutomaton& dfa) {
  if (!dfa.is_deterministic()) throw ContractError("complete() requires a deterministic automaton");
  if (dfa.is_complete()) return dfa;
  std::vector<std::string> names = dfa.state_names();
  const StateId sink = static_cast<StateId>(names.size());
  names.push_back(detail::fresh_name("sink", dfa.state_names()));
  std::vector<Transition> transitions(dfa.transitions().begin(), dfa.transitions().end());
  for (StateId q = 0; q <= sink; ++q) {
    for (SymbolId a = 0; a < dfa.alphabet().size(); ++a) {
      if (q == sink || !dfa.next(q, a)) transitions.push_back({q, a, sink});
    }
  }
  return FiniteAutomaton(dfa.alphabet(), std::move(names), dfa.initial(), dfa.accepting(),
                         std::move(transitions));
}

namespace {

// Dense transition table of a complete DFA.
struct Table {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<StateId> next;
  std::vector<char> accepting;
  StateId initial = 0;

  explicit Table(const FiniteAutomaton& dfa)
      : n(dfa.num_states()), k(dfa.alphabet().size()), next(n * k), accepting(n), initial(dfa.initial()) {
    for (const auto& t : dfa.transitions()) next[t.from * k + t.label] = t.to;
    for (StateId q = 0; q < n; ++q) accepting[q] = dfa.is_accepting(q);
  }
  StateId step(StateId q, SymbolId a) const { return next[q * k + a]; }
};

// Refinable partition used by Hopcroft's algorithm.
class Partition {
 public:
  explicit Partition(std::size_t n) : elems_(n), loc_(n), block_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) elems_[i] = loc_[i] = i;
    blocks_.push_back({0, n, 0});
  }

  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t block_of(std::size_t x) const { return block_[x]; }
  std::size_t block_size(std::size_t b) const { return blocks_[b].end - blocks_[b].begin; }
  std::vector<std::size_t> members(std::size_t b) const {
    return {elems_.begin() + static_cast<long>(blocks_[b].begin), elems_.begin() + static_cast<long>(blocks_[b].end)};
  }

  void mark(std::size_t x) {
    std::size_t b = block_[x];
    Block& blk = blocks_[b];
    std::size_t pos = loc_[x];
    std::size_t boundary = blk.begin + blk.marked;
    if (pos < boundary) return;
    if (blk.marked == 0) touched_.push_back(b);
    std::swap(elems_[pos], elems_[boundary]);
    loc_[elems_[pos]] = pos;
    loc_[elems_[boundary]] = boundary;
    ++blk.marked;
  }

  // Splits each touched block into marked and unmarked parts; returns (old, new) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> split() {
    std::vector<std::pair<std::size_t, std::size_t>> splits;
    for (std::size_t b : touched_) {
      Block& blk = blocks_[b];
      std::size_t marked = blk.marked;
      blk.marked = 0;
      if (marked == blk.end - blk.begin) continue;
      std::size_t nb = blocks_.size();
      Block fresh{blk.begin, blk.begin + marked, 0};
      blk.begin += marked;
      for (std::size_t i = fresh.begin; i < fresh.end; ++i) block_[elems_[i]] = nb;
      blocks_.push_back(fresh);
      splits.emplace_back(b, nb);
    }
    touched_.clear();
    return splits;
  }

 private:
  struct Block {
    std::size_t begin, end, marked;
  };
  std::vector<std::size_t> elems_, loc_, block_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> touched_;
};

}  // namespace

FiniteAutomaton minimize(const FiniteAutomaton& input) {
  if (!input.is_deterministic()) throw ContractError("minimize requires a deterministic automaton");
  const FiniteAutomaton dfa = complete(input);
  const Table full(dfa);
  const std::size_t k = full.k;

  // Reachable part, in BFS order.
  std::vector<StateId> order{full.initial};
  std::vector<long> renum(full.n, -1);
  renum[full.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (SymbolId a = 0; a < k; ++a) {
      StateId r = full.step(order[i], a);
      if (renum[r] < 0) {
        renum[r] = static_cast<long>(order.size());
        order.push_back(r);
      }
    }
  }
  const std::size_t n = order.size();
  std::vector<StateId> delta(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (SymbolId a = 0; a < k; ++a) delta[i * k + a] = static_cast<StateId>(renum[full.step(order[i], a)]);
  }

  // Inverse transitions in CSR form per symbol.
  std::vector<std::size_t> inv_offset(k * n + 1, 0);
  std::vector<StateId> inv(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    for (SymbolId a = 0; a < k; ++a) ++inv_offset[a * n + delta[q * k + a] + 1];
  }
  for (std::size_t i = 0; i < k * n; ++i) inv_offset[i + 1] += inv_offset[i];
  {
    std::vector<std::size_t> fill(inv_offset.begin(), inv_offset.end() - 1);
    for (std::size_t q = 0; q < n; ++q) {
      for (SymbolId a = 0; a < k; ++a) inv[fill[a * n + delta[q * k + a]]++] = static_cast<StateId>(q);
    }
  }

  Partition partition(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (full.accepting[order[i]]) partition.mark(i);
  }
  partition.split();

  std::vector<std::pair<std::size_t, SymbolId>> work;
  std::vector<std::vector<char>> queued;  // queued[block][symbol]
  auto enqueue = [&](std::size_t b, SymbolId a) {
    if (queued.size() <= b) queued.resize(b + 1, std::vector<char>(k, 0));
    if (!queued[b][a]) {
      queued[b][a] = 1;
      work.emplace_back(b, a);
    }
  };
  for (std::size_t b = 0; b < partition.num_blocks(); ++b) {
    for (SymbolId a = 0; a < k; ++a) enqueue(b, a);
  }
  while (!work.empty()) {
    auto [b, a] = work.back();
    work.pop_back();
    queued[b][a] = 0;
    for (std::size_t r : partition.members(b)) {
      for (std::size_t i = inv_offset[a * n + r]; i < inv_offset[a * n + r + 1]; ++i) partition.mark(inv[i]);
    }
    for (auto [old_block, new_block] : partition.split()) {
      for (SymbolId c = 0; c < k; ++c) {
        bool old_queued = queued.size() > old_block && queued[old_block][c];
        if (old_queued || partition.block_size(new_block) <= partition.block_size(old_block)) {
          enqueue(new_block, c);
        } else {
          enqueue(old_block, c);
        }
      }
    }
  }

  // Quotient, renumbered by BFS over blocks.
  std::vector<long> block_id(partition.num_blocks(), -1);
  std::vector<std::size_t> reps;
  auto visit = [&](std::size_t state) {
    std::size_t b = partition.block_of(state);
    if (block_id[b] < 0) {
      block_id[b] = static_cast<long>(reps.size());
      reps.push_back(state);
    }
    return static_cast<StateId>(block_id[b]);
  };
  visit(0);
  std::vector<Transition> transitions;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (SymbolId a = 0; a < k; ++a) {
      StateId to = visit(delta[reps[i] * k + a]);
      transitions.push_back({static_cast<StateId>(i), a, to});
    }
  }
  std::vector<std::string> names;
  std::vector<StateId> accepting;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    names.push_back("s" + std::to_string(i));
    if (full.accepting[order[reps[i]]]) accepting.push_back(static_cast<StateId>(i));
  }
  return FiniteAutomaton(dfa.alphabet(), std::move(names), 0, std::move(accepting), std::move(transitions));
}

std::optional<Word> shortest_accepted(const FiniteAutomaton& automaton) {
  const std::size_t n = automaton.num_states();
  std::vector<long> parent(n, -2);
  std::vector<SymbolId> via(n, kEpsilon);
  std::deque<StateId> queue{automaton.initial()};
  parent[automaton.initial()] = -1;
  // 0-1 BFS: ε edges cost nothing.
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (automaton.is_accepting(q)) {
      Word word;
      for (long cur = q; parent[static_cast<std::size_t>(cur)] >= 0; cur = parent[static_cast<std::size_t>(cur)]) {
        if (via[static_cast<std::size_t>(cur)] != kEpsilon) word.push_back(via[static_cast<std::size_t>(cur)]);
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    for (const auto& t : automaton.outgoing(q)) {
      if (parent[t.to] != -2) continue;
      parent[t.to] = q;
      via[t.to] = t.label;
      if (t.epsilon()) {
        queue.push_front(t.to);
      } else {
        queue.push_back(t.to);
      }
    }
  }
  return std::nullopt;
}

bool is_empty(const FiniteAutomaton& automaton) { return !shortest_accepted(automaton).has_value(); }

namespace {

FiniteAutomaton as_complete_dfa(const FiniteAutomaton& a, std::size_t cap) {
  if (a.is_complete()) return a;
  if (a.is_deterministic()) return complete(a);
  return determinize(a, cap);
}

std::optional<Word> pair_search(const Table& ta, const Table& tb, StateId p, StateId q, std::size_t cap) {
  const std::size_t k = ta.k;
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, SymbolId>> parent;
  auto key = [](StateId x, StateId y) { return (static_cast<std::uint64_t>(x) << 32) | y; };
  std::deque<std::uint64_t> queue{key(p, q)};
  parent.emplace(key(p, q), std::make_pair(~0ULL, kEpsilon));
  while (!queue.empty()) {
    std::uint64_t cur = queue.front();
    queue.pop_front();
    StateId x = static_cast<StateId>(cur >> 32);
    StateId y = static_cast<StateId>(cur & 0xffffffffULL);
    if (ta.accepting[x] != tb.accepting[y]) {
      Word word;
      for (std::uint64_t c = cur; parent.at(c).first != ~0ULL; c = parent.at(c).first) {
        word.push_back(parent.at(c).second);
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    for (SymbolId a = 0; a < k; ++a) {
      std::uint64_t nxt = key(ta.step(x, a), tb.step(y, a));
      if (parent.emplace(nxt, std::make_pair(cur, a)).second) {
        if (parent.size() > cap) throw ResourceError("product search exceeded the state cap", cap);
        queue.push_back(nxt);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Word> find_difference(const FiniteAutomaton& a, const FiniteAutomaton& b, std::size_t cap) {
  if (!(a.alphabet() == b.alphabet())) throw InputError("alphabet mismatch");
  const FiniteAutomaton da = as_complete_dfa(a, cap);
  const FiniteAutomaton db = as_complete_dfa(b, cap);
  return pair_search(Table(da), Table(db), da.initial(), db.initial(), cap);
}

bool equivalent(const FiniteAutomaton& a, const FiniteAutomaton& b, std::size_t cap) {
  return !find_difference(a, b, cap).has_value();
}

std::optional<Word> distinguishing_word(const FiniteAutomaton& dfa, StateId p, StateId q) {
  if (!dfa.is_deterministic()) throw ContractError("distinguishing_word requires a deterministic automaton");
  const FiniteAutomaton full = complete(dfa);
  const Table t(full);
  return pair_search(t, t, p, q, kDefaultStateCap);
}

}  // namespace hcs
