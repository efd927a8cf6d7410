#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcs/hcs.hpp"
#include "hcs/vass.hpp"

namespace hcs {

// member() for HCS with VASS guards; each guard query is answered by the
// guard's run state on the Σ-prefix read so far.
bool hcs_vass_member(const Hcs& hcs, const Word& word);

// Product of the underlying automaton with complete Cover-DVASS guards (Regular
// and Nested guards enter as their complete DFAs with no counters), over
// reachable state tuples, plus a fresh accepting state t entered by ε from
// every tuple whose first component is accepting. Dimension is Σ d_i (at
// least 1). Guards are completed with a zero-update sink. Guard death cannot
// be checked statically, so the caller must assert it via `non_dying`.
// Throws InputError on Reach-mode or non-deterministic VASS guards, or
// when non_dying is false.
Vass product_vass(const Hcs& hcs, bool non_dying, std::size_t cap = kDefaultStateCap);
// 2(‖U‖ + Σ‖G_i‖)^{m+2}, saturating, with guards completed as in product_vass.
std::uint64_t product_size_bound(const Hcs& hcs);

enum class CoverEngine { KarpMiller, Backward };

struct CoverabilityInstance {
  Vass vass;
  VassConfig source;  // counters default to 0 when empty
  VassConfig target;  // cover (state, ≥ counters)
};

struct CoverabilityResult {
  bool coverable = false;
  // Transition indices into vass.transitions(), replayable from the source.
  std::vector<std::size_t> witness;
  std::size_t nodes = 0;
};

// Karp–Miller tree with ω-acceleration along ancestors and pruning of nodes
// covered by earlier ones, or backward saturation over minimal bases. When the
// Karp–Miller branch carries ω the witness is rebuilt from the backward basis.
// Throws InputError on a Reach-mode VASS and ResourceError beyond cap nodes.
CoverabilityResult decide_coverability(const CoverabilityInstance& instance, CoverEngine engine,
                                       std::size_t cap = kDefaultStateCap);
Word witness_word(const Vass& vass, const std::vector<std::size_t>& witness);

enum class EmptinessEngine { Product, OnTheFly, Bounded };

enum class EmptinessVerdict { Empty, Nonempty, Unknown };

struct EmptinessResult {
  EmptinessVerdict verdict = EmptinessVerdict::Unknown;
  EmptinessEngine engine = EmptinessEngine::Bounded;  // the engine that ran
  std::optional<Word> witness;  // set when non-empty and a word is known
  std::size_t nodes = 0;  // not counted by the bounded search
};

// Emptiness of an HCS with Cover-DVASS, Regular or Nested guards.
//  - Product: product_vass then backward coverability of (t, 0). Requires
//    non_dying.
//  - OnTheFly: Karp–Miller over (underlying state, per-guard configuration or
//    DEAD); DEAD is below every live configuration of the same guard and
//    acceleration happens only between nodes with equal discrete parts.
//  - Bounded: word search up to max_length; never reports Empty.
// Guards other than Regular, Nested or Cover-DVASS fall back to the bounded
// search with any engine, so they yield Nonempty or Unknown.
EmptinessResult hcs_cover_empty(const Hcs& hcs, EmptinessEngine engine, bool non_dying = false,
                                std::size_t max_length = 8, std::size_t cap = kDefaultStateCap);

enum class CounterAction { Inc1, Dec1, Zero1, Inc2, Dec2, Zero2 };

std::string action_name(CounterAction a);
Alphabet counter_action_alphabet();

struct TwoCounterMachine {
  struct Step {
    StateId from = 0;
    CounterAction action = CounterAction::Inc1;
    StateId to = 0;

    bool operator==(const Step&) const = default;
  };
  std::vector<std::string> states;
  std::vector<Step> transitions;
  StateId source = 0;
  StateId target = 0;

  // Throws InputError on out-of-range states or an action-determinacy violation.
  void validate() const;
  bool operator==(const TwoCounterMachine&) const = default;
};

// Underlying automaton = the machine plus states r, s with target -zero1-> r
// -zero2-> s (s the only accepting state); every zero_i move is guarded by a
// one-state Reach-1-DVASS G_i tracking counter i.
Hcs two_cm_to_hcs(const TwoCounterMachine& machine);

struct BoundedResult {
  bool nonempty = false;
  Word witness;
  std::size_t max_length = 0;
};

// Exhaustive search over words of length ≤ max_length.
BoundedResult bounded_reach_empty(const Hcs& hcs, std::size_t max_length, std::size_t cap = kDefaultStateCap);

// Delimited Kleene star {$} ∪ {$w_1$…$w_k$ : w_i ∈ L(vass)} over Σ ∪ {$}.
// The guard G$ is the VASS behind a fresh initial p0 that loops on Σ ∪ {$}
// and moves to the old initial state on $. Throws InputError if "$" is taken.
Hcs delimited_star_hcs(const Vass& vass);

}  // namespace hcs
