#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcs/alphabet.hpp"
#include "hcs/errors.hpp"

namespace hcs {

using Counter = std::int64_t;
// Unbounded counter value in Karp–Miller labels.
inline constexpr Counter kOmega = std::numeric_limits<Counter>::max();

enum class VassMode { Cover, Reach };

struct VassTransition {
  StateId from = 0;
  SymbolId label = 0;  // kEpsilon for ε
  std::vector<Counter> update;
  StateId to = 0;

  bool epsilon() const noexcept { return label == kEpsilon; }
  auto operator<=>(const VassTransition&) const = default;
};

class Vass {
 public:
  // Throws InputError on out-of-range data, wrong update arity, dim 0, or duplicates.
  Vass(Alphabet alphabet, std::size_t dim, std::vector<std::string> states, StateId initial,
       std::vector<StateId> accepting, std::vector<VassTransition> transitions, VassMode mode);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_states() const noexcept { return states_.size(); }
  const std::vector<std::string>& state_names() const noexcept { return states_; }
  const std::string& state_name(StateId q) const { return states_.at(q); }
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const noexcept { return initial_; }
  const std::vector<StateId>& accepting() const noexcept { return accepting_; }
  bool is_accepting(StateId q) const { return accepting_mask_[q] != 0; }
  VassMode mode() const noexcept { return mode_; }

  std::span<const VassTransition> transitions() const noexcept { return transitions_; }
  std::span<const VassTransition> outgoing(StateId q) const;
  std::span<const VassTransition> outgoing(StateId q, SymbolId label) const;
  std::size_t transition_index(const VassTransition& t) const {
    return static_cast<std::size_t>(&t - transitions_.data());
  }

  // No ε transitions and at most one transition per (state, symbol).
  bool is_deterministic() const noexcept { return deterministic_; }
  bool is_complete() const noexcept { return complete_; }
  bool has_epsilon_cycle() const;

  // |Q| + Σ_t max{1, |u_1|, ..., |u_d|}.
  std::uint64_t unary_size() const;

  bool operator==(const Vass& other) const;

 private:
  Alphabet alphabet_;
  std::size_t dim_;
  std::vector<std::string> states_;
  StateId initial_;
  std::vector<StateId> accepting_;
  std::vector<char> accepting_mask_;
  std::vector<VassTransition> transitions_;
  std::vector<std::size_t> offsets_;
  VassMode mode_;
  bool deterministic_ = true;
  bool complete_ = true;
};

struct VassConfig {
  StateId state = 0;
  std::vector<Counter> counters;

  auto operator<=>(const VassConfig&) const = default;
};

// Componentwise ≤ on counters (kOmega is the top element); states must match.
bool covered_by(const VassConfig& smaller, const VassConfig& larger);

// Fires t from c if the counters stay non-negative. kOmega absorbs updates.
std::optional<VassConfig> fire(const VassConfig& c, const VassTransition& t);

// Runtime state of a VASS read as a guard: the configurations reachable on the
// prefix so far. Empty means DEAD. In Cover mode the set is an antichain of
// maximal configurations (ω components may arise from ε-cycles); in Reach mode
// it is the exact set.
struct VassRunState {
  std::vector<VassConfig> configs;

  bool dead() const noexcept { return configs.empty(); }
  auto operator<=>(const VassRunState&) const = default;
};

VassRunState vass_start(const Vass& vass);
// Run state after the ε-closure of an arbitrary configuration.
VassRunState vass_start_from(const Vass& vass, const VassConfig& start);
// Throws ContractError for Reach mode with an ε-cycle.
VassRunState vass_step(const Vass& vass, const VassRunState& state, SymbolId symbol);
bool vass_accepting(const Vass& vass, const VassRunState& state);

bool vass_accepts(const Vass& vass, const Word& word);
bool vass_accepts(const Vass& vass, std::span<const std::string> word);
// Runs `word` from an arbitrary start configuration.
bool vass_accepts_from(const Vass& vass, const VassConfig& start, const Word& word);

// Adds a non-accepting sink with zero updates for missing (state, symbol) pairs.
// Requires a deterministic VASS.
Vass complete_vass(const Vass& vass);

}  // namespace hcs
