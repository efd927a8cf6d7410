#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hcs/automaton.hpp"
#include "hcs/vass.hpp"

namespace hcs {

class Hcs;

enum class GuardKind { Regular, Vass, Nested };

// Guard language given by an NFA/DFA, a VASS, or another HCS.
class GuardAutomaton {
 public:
  GuardAutomaton(FiniteAutomaton automaton);  // NOLINT(google-explicit-constructor)
  GuardAutomaton(Vass vass);                  // NOLINT(google-explicit-constructor)
  GuardAutomaton(Hcs hcs);                    // NOLINT(google-explicit-constructor)

  GuardKind kind() const noexcept;
  const Alphabet& alphabet() const;
  // Each accessor throws ContractError on a kind mismatch.
  const FiniteAutomaton& regular() const;
  const Vass& vass() const;
  const Hcs& nested() const;

  // States across all nesting levels.
  std::size_t num_states() const;
  // ‖G‖: |Q|+|δ| for automata and HCS, unary size for VASS.
  std::uint64_t size() const;
  // True when every guard reachable through nesting is Regular or Nested.
  bool is_finite_state() const;

  bool operator==(const GuardAutomaton& other) const;

 private:
  std::variant<FiniteAutomaton, Vass, std::shared_ptr<const Hcs>> value_;
};

struct GuardedTransition {
  StateId from = 0;
  SymbolId label = 0;  // kEpsilon for ε
  StateId to = 0;
  std::optional<std::string> guard;  // nullopt: trivial guard Σ*
};

// Underlying automaton plus a guard table. The table is ordered by guard name;
// guard indices below refer to that order.
class Hcs {
 public:
  // Throws InputError on unknown guard names, duplicate guard names, alphabet
  // mismatches, or one transition carrying two different guards.
  Hcs(Alphabet alphabet, std::vector<std::string> states, StateId initial, std::vector<StateId> accepting,
      std::vector<GuardedTransition> transitions, std::vector<std::pair<std::string, GuardAutomaton>> guards);

  const Alphabet& alphabet() const noexcept { return underlying_.alphabet(); }
  const FiniteAutomaton& underlying() const noexcept { return underlying_; }

  std::size_t guard_count() const noexcept { return guards_.size(); }
  const std::string& guard_name(std::size_t i) const { return guards_.at(i).first; }
  const GuardAutomaton& guard(std::size_t i) const { return guards_.at(i).second; }
  const std::vector<std::pair<std::string, GuardAutomaton>>& guards() const noexcept { return guards_; }
  std::optional<std::size_t> find_guard(std::string_view name) const;

  // Guard table index of transition t of underlying(), if guarded.
  std::optional<std::size_t> transition_guard(std::size_t t) const { return transition_guards_.at(t); }
  std::vector<GuardedTransition> guarded_transitions() const;

  bool is_deterministic() const noexcept { return underlying_.is_deterministic(); }
  bool all_guards_finite_state() const;

  // Underlying states plus guard states across all nesting levels.
  std::size_t total_states() const;
  // ‖U‖ + Σ‖G_i‖.
  std::uint64_t size() const;

  bool operator==(const Hcs& other) const;

 private:
  struct SortedTag {};
  Hcs(Alphabet alphabet, std::vector<std::string> states, StateId initial, std::vector<StateId> accepting,
      std::vector<GuardedTransition> sorted, std::vector<std::pair<std::string, GuardAutomaton>> guards, SortedTag);

  FiniteAutomaton underlying_;
  std::vector<std::pair<std::string, GuardAutomaton>> guards_;
  std::vector<std::optional<std::size_t>> transition_guards_;
};

class HcsBuilder {
 public:
  explicit HcsBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  StateId add_state(std::string name, bool accepting = false);
  void set_initial(StateId q) { initial_ = q; }
  void set_accepting(StateId q, bool accepting = true) { accepting_.at(q) = accepting; }
  void add_transition(StateId from, SymbolId label, StateId to, std::optional<std::string> guard = std::nullopt);
  void add_transition(StateId from, std::string_view label, StateId to,
                      std::optional<std::string> guard = std::nullopt);
  void add_guard(std::string name, GuardAutomaton guard);
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return states_.size(); }

  Hcs build() const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> states_;
  std::vector<bool> accepting_;
  StateId initial_ = 0;
  std::vector<GuardedTransition> transitions_;
  std::vector<std::pair<std::string, GuardAutomaton>> guards_;
};

struct HcsConfiguration;

// Runtime state of one guard: a DFA state, a VASS run state (empty = DEAD),
// or a nested HCS configuration.
struct GuardState {
  std::variant<StateId, VassRunState, std::shared_ptr<const HcsConfiguration>> value;

  bool operator==(const GuardState& other) const;
};

struct HcsConfiguration {
  std::vector<StateId> underlying_states;  // sorted
  std::vector<GuardState> guard_states;    // one per guard table entry
  std::size_t history_length = 0;

  // Equality ignores history_length: it does not influence future behaviour.
  bool operator==(const HcsConfiguration& other) const;
};

std::size_t hash_value(const GuardState& state);
std::size_t hash_value(const HcsConfiguration& config);

// Executes HCS semantics. Guards only read the Σ-projection of the history:
// ε moves leave guard states untouched and guards on ε-transitions are
// evaluated against the history read so far.
class HcsSimulator {
 public:
  explicit HcsSimulator(const Hcs& hcs);
  ~HcsSimulator();
  HcsSimulator(HcsSimulator&&) noexcept;
  HcsSimulator& operator=(HcsSimulator&&) noexcept;

  const Hcs& hcs() const noexcept { return *hcs_; }

  std::vector<GuardState> initial_guards() const;
  std::vector<GuardState> advance_guards(const std::vector<GuardState>& guards, SymbolId symbol) const;
  bool guard_accepts(std::size_t guard, const GuardState& state) const;
  // Whether transition t of the underlying automaton is admissible under `guards`.
  bool enabled(std::size_t t, const std::vector<GuardState>& guards) const;
  // Guard-aware ε-closure, sorted.
  std::vector<StateId> closure(std::vector<StateId> states, const std::vector<GuardState>& guards) const;

  HcsConfiguration initial() const;
  // kEpsilon recomputes the closure without extending the history.
  HcsConfiguration step(const HcsConfiguration& config, SymbolId symbol) const;
  bool accepting(const HcsConfiguration& config) const;
  bool member(const Word& word) const;

  struct Engine;

 private:
  std::shared_ptr<const Hcs> hcs_;
  std::vector<std::unique_ptr<Engine>> engines_;
};

// Throws InputError on unknown symbols.
bool member(const Hcs& hcs, const Word& word);
bool member(const Hcs& hcs, std::span<const std::string> word);

// Breadth-first search over (underlying state, guard states) pairs; returns a
// shortest accepted word. With max_length set, words longer than it are not
// explored, which makes the search terminate for any guard kind.
std::optional<Word> find_accepted_word(const Hcs& hcs, std::size_t cap = kDefaultStateCap,
                                       std::optional<std::size_t> max_length = std::nullopt);
// Requires Regular or Nested guards only.
bool is_empty(const Hcs& hcs, std::size_t cap = kDefaultStateCap);

// Complete guard DFA for a Regular or Nested guard.
FiniteAutomaton compile_guard(const GuardAutomaton& guard, std::size_t cap = kDefaultStateCap);

// Tuple construction (Q', q_1, ..., q_m) over complete guard DFAs with
// guard-aware ε-closure; Q' = ∅ is a single sink. BFS-numbered.
FiniteAutomaton determinize_hcs(const Hcs& hcs, std::size_t cap = kDefaultStateCap);
// 2^{|Q| + Σ n_i}, saturating.
std::uint64_t determinization_bound(const Hcs& hcs);

// Replaces each Nested guard by the DFA determinize_hcs builds for it.
Hcs flatten_nested(const Hcs& hcs, std::size_t cap = kDefaultStateCap);

// Adds unguarded edges to a fresh rejecting sink for every (state, symbol)
// without an unguarded transition on that symbol.
Hcs make_non_blocking(const Hcs& hcs);

// Σ-loop on q0 followed by ε-steps q_{i-1} -ε:G_i-> q_i; accepting q_k.
// L = ∩ L(G_i), and Σ* when `guards` is empty.
Hcs build_intersection_nfa(const Alphabet& alphabet, std::vector<GuardAutomaton> guards);
// Deterministic variant over Σ ∪ {$}: L = {w $^k : w ∈ ∩ L(G_i)}.
Hcs build_intersection_dfa(const Alphabet& alphabet, std::vector<GuardAutomaton> guards);

// Same language over a larger alphabet whose prefix is the guard's alphabet.
GuardAutomaton extend_alphabet(const GuardAutomaton& guard, const Alphabet& alphabet);

}  // namespace hcs
