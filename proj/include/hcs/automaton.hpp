#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcs/alphabet.hpp"
#include "hcs/errors.hpp"

namespace hcs {

struct Transition {
  StateId from = 0;
  SymbolId label = 0;  // kEpsilon for ε
  StateId to = 0;

  bool epsilon() const noexcept { return label == kEpsilon; }
  auto operator<=>(const Transition&) const = default;
};

// NFA or DFA over a named alphabet. Transitions are kept sorted by
// (from, label, to), so the outgoing transitions of a state form a
// contiguous range and transition indices are canonical.
class FiniteAutomaton {
 public:
  // Throws InputError on out-of-range indices, duplicate state names, or
  // duplicate transitions.
  FiniteAutomaton(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                  std::vector<StateId> accepting, std::vector<Transition> transitions);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return states_.size(); }
  const std::vector<std::string>& state_names() const noexcept { return states_; }
  const std::string& state_name(StateId q) const { return states_.at(q); }
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const noexcept { return initial_; }
  const std::vector<StateId>& accepting() const noexcept { return accepting_; }
  bool is_accepting(StateId q) const { return accepting_mask_[q] != 0; }

  std::span<const Transition> transitions() const noexcept { return transitions_; }
  std::span<const Transition> outgoing(StateId q) const;
  // Index range [first, last) of outgoing(q) inside transitions().
  std::pair<std::size_t, std::size_t> outgoing_range(StateId q) const {
    return {offsets_[q], offsets_[q + 1]};
  }
  // Transitions from q with the given label (ε included when label is kEpsilon).
  std::span<const Transition> outgoing(StateId q, SymbolId label) const;

  bool is_deterministic() const noexcept { return deterministic_; }
  // Deterministic and one transition per (state, symbol).
  bool is_complete() const noexcept { return complete_; }
  // Successor in a deterministic automaton, if any.
  std::optional<StateId> next(StateId q, SymbolId symbol) const;

  // |Q| + |δ|.
  std::size_t size() const noexcept { return states_.size() + transitions_.size(); }

  bool operator==(const FiniteAutomaton& other) const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> states_;
  StateId initial_;
  std::vector<StateId> accepting_;
  std::vector<char> accepting_mask_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
  bool deterministic_ = true;
  bool complete_ = true;
};

// Incremental construction helper; duplicate transitions are merged.
class AutomatonBuilder {
 public:
  explicit AutomatonBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  StateId add_state(std::string name, bool accepting = false);
  void set_initial(StateId q) { initial_ = q; }
  void set_accepting(StateId q, bool accepting = true);
  void add_transition(StateId from, SymbolId label, StateId to) {
    transitions_.push_back({from, label, to});
  }
  void add_transition(StateId from, std::string_view label, StateId to);
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return states_.size(); }

  FiniteAutomaton build() const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> states_;
  std::vector<bool> accepting_;
  StateId initial_ = 0;
  std::vector<Transition> transitions_;
};

Word to_word(const FiniteAutomaton& automaton, std::span<const std::string> symbols);

bool accepts(const FiniteAutomaton& automaton, const Word& word);
// Throws InputError naming the first unknown symbol.
bool accepts(const FiniteAutomaton& automaton, std::span<const std::string> word);

// Sorted ε-closure of a set of states.
std::vector<StateId> epsilon_closure(const FiniteAutomaton& automaton, std::vector<StateId> states);

// Subset construction. Output is deterministic, complete (the empty subset is
// the sink), and numbered in BFS order with symbols in alphabet order.
FiniteAutomaton determinize(const FiniteAutomaton& nfa, std::size_t cap = kDefaultStateCap);

// Adds a rejecting sink for missing (state, symbol) pairs. Requires a deterministic input.
FiniteAutomaton complete(const FiniteAutomaton& dfa);

// Hopcroft refinement on the reachable part, renumbered in BFS order.
// Throws ContractError on non-deterministic input.
FiniteAutomaton minimize(const FiniteAutomaton& dfa);

bool is_empty(const FiniteAutomaton& automaton);
// Shortest accepted word, if the language is non-empty.
std::optional<Word> shortest_accepted(const FiniteAutomaton& automaton);

// Shortest word in the symmetric difference. Throws InputError on alphabet mismatch.
std::optional<Word> find_difference(const FiniteAutomaton& a, const FiniteAutomaton& b,
                                    std::size_t cap = kDefaultStateCap);
bool equivalent(const FiniteAutomaton& a, const FiniteAutomaton& b,
                std::size_t cap = kDefaultStateCap);

// Shortest word accepted from exactly one of p and q in a deterministic automaton.
std::optional<Word> distinguishing_word(const FiniteAutomaton& dfa, StateId p, StateId q);

}  // namespace hcs
