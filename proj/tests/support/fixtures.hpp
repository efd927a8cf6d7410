#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hcs/hcs.hpp"
#include "hcs/vass_guards.hpp"

namespace hcs::fixtures {

Alphabet ab();

// Guards shared by the two small examples over {a, b}.
FiniteAutomaton alternating();     // (ab)* + a(ba)*
FiniteAutomaton length_mod3();     // |w| ≡ 0 mod 3
FiniteAutomaton contains_aa();     // Σ* aa Σ*, as an NFA
Hcs example_u1();
Hcs example_u2();

Hcs four_eyes();
// Two traffic-light controllers nested inside a one-state outer system.
Hcs traffic_lights();

Hcs intersection_nfa_c2_c3();
Hcs intersection_dfa_c2_c3();
Hcs intersection_nfa_aa_alternating();

// Depth-2 nesting: outer Σ-loop guarded by an HCS for C2 ∩ C3 over {a}.
Hcs nested_c2_c3();

// All HCS fixtures with finite-state guards, named.
std::vector<std::pair<std::string, Hcs>> regular_hcs_fixtures();

// Cover-1-VASS for {a^n b^m : m ≤ n}.
Vass an_bm_vass();
// Six-state machine with zero tests on both counters: source p1, target p6.
TwoCounterMachine zero_test_machine();

// HCS with Cover-DVASS guards that can never drive a counter negative.
std::vector<std::pair<std::string, Hcs>> non_dying_vass_fixtures();
// Only accepting move guarded by "counter ≥ 1" with no increment: empty.
Hcs dying_guard_empty();

}  // namespace hcs::fixtures
