#include "fixtures.hpp"

#include "hcs/succinct.hpp"

namespace hcs::fixtures {

Alphabet ab() { return Alphabet({"a", "b"}); }

FiniteAutomaton alternating() {
  AutomatonBuilder b(ab());
  StateId even = b.add_state("even", true);
  StateId odd = b.add_state("odd", true);
  b.add_transition(even, "a", odd);
  b.add_transition(odd, "b", even);
  return b.build();
}

FiniteAutomaton length_mod3() {
  AutomatonBuilder b(ab());
  for (int i = 0; i < 3; ++i) b.add_state("m" + std::to_string(i), i == 0);
  for (StateId i = 0; i < 3; ++i) {
    b.add_transition(i, "a", (i + 1) % 3);
    b.add_transition(i, "b", (i + 1) % 3);
  }
  return b.build();
}

FiniteAutomaton contains_aa() {
  AutomatonBuilder b(ab());
  StateId s0 = b.add_state("n0");
  StateId s1 = b.add_state("n1");
  StateId s2 = b.add_state("n2", true);
  b.add_transition(s0, "a", s0);
  b.add_transition(s0, "b", s0);
  b.add_transition(s0, "a", s1);
  b.add_transition(s1, "a", s2);
  b.add_transition(s2, "a", s2);
  b.add_transition(s2, "b", s2);
  return b.build();
}

namespace {

void add_example_guards(HcsBuilder& b) {
  b.add_guard("L1", alternating());
  b.add_guard("L2", length_mod3());
  b.add_guard("L3", contains_aa());
}

}  // namespace

Hcs example_u1() {
  HcsBuilder b(ab());
  StateId q1 = b.add_state("q1");
  StateId q2 = b.add_state("q2");
  StateId q3 = b.add_state("q3");
  StateId q4 = b.add_state("q4", true);
  add_example_guards(b);
  b.add_transition(q1, "a", q2, "L1");
  b.add_transition(q2, "a", q3, "L2");
  b.add_transition(q3, "a", q4, "L3");
  for (StateId q : {q1, q2, q3}) b.add_transition(q, "b", q);
  b.add_transition(q4, "a", q4);
  b.add_transition(q4, "b", q4);
  return b.build();
}

Hcs example_u2() {
  HcsBuilder b(ab());
  StateId p1 = b.add_state("p1");
  StateId p2 = b.add_state("p2");
  StateId p3 = b.add_state("p3");
  StateId p4 = b.add_state("p4");
  StateId p5 = b.add_state("p5", true);
  add_example_guards(b);
  b.add_transition(p1, "a", p2);
  b.add_transition(p1, "b", p3);
  b.add_transition(p2, "a", p4, "L1");
  b.add_transition(p3, "b", p4, "L2");
  b.add_transition(p4, "a", p5, "L3");
  b.add_transition(p4, "b", p5, "L3");
  b.add_transition(p2, "b", p2);
  b.add_transition(p3, "a", p3);
  b.add_transition(p5, "a", p5);
  b.add_transition(p5, "b", p5);
  return b.build();
}

namespace {

// Two states: waits for `key`, then accepts forever.
FiniteAutomaton seen(const Alphabet& sigma, const std::string& key) {
  AutomatonBuilder b(sigma);
  StateId wait = b.add_state("wait");
  StateId done = b.add_state("seen", true);
  for (SymbolId a = 0; a < sigma.size(); ++a) {
    b.add_transition(wait, a, sigma.symbol(a) == key ? done : wait);
    b.add_transition(done, a, done);
  }
  return b.build();
}

}  // namespace

Hcs four_eyes() {
  Alphabet sigma({"SubmitA", "SubmitB", "Approve1", "Approve2", "CompleteA", "CompleteB"});
  HcsBuilder b(sigma);
  StateId q0 = b.add_state("q0");
  StateId q1 = b.add_state("q1");
  StateId q2 = b.add_state("q2");
  StateId q3 = b.add_state("q3");
  StateId q4 = b.add_state("q4", true);
  b.add_guard("approved1", seen(sigma, "Approve1"));
  b.add_guard("approved2", seen(sigma, "Approve2"));
  b.add_guard("submittedA", seen(sigma, "SubmitA"));
  b.add_guard("submittedB", seen(sigma, "SubmitB"));
  b.add_transition(q0, "SubmitA", q1);
  b.add_transition(q0, "SubmitB", q1);
  b.add_transition(q1, "Approve1", q1);
  b.add_transition(q1, "Approve2", q1);
  b.add_transition(q1, "eps", q2, "approved1");
  b.add_transition(q2, "eps", q3, "approved2");
  b.add_transition(q3, "CompleteA", q4, "submittedA");
  b.add_transition(q3, "CompleteB", q4, "submittedB");
  return b.build();
}

namespace {

const std::vector<std::string> kLightActions{"turn-green", "turn-orange", "turn-red"};

Alphabet lights_alphabet() {
  std::vector<std::string> symbols;
  for (const char* light : {"T1", "T2"}) {
    for (const auto& action : kLightActions) symbols.push_back(std::string(light) + ":" + action);
  }
  return Alphabet(symbols);
}

// Accepts when `light` has turned red since it last turned green or orange.
FiniteAutomaton is_red(const Alphabet& sigma, const std::string& light) {
  AutomatonBuilder b(sigma);
  StateId unknown = b.add_state("not-red");
  StateId red = b.add_state("red", true);
  for (SymbolId a = 0; a < sigma.size(); ++a) {
    const std::string& s = sigma.symbol(a);
    bool to_red = s == light + ":turn-red";
    bool leave_red = s == light + ":turn-green" || s == light + ":turn-orange";
    b.add_transition(unknown, a, to_red ? red : unknown);
    b.add_transition(red, a, leave_red ? unknown : red);
  }
  return b.build();
}

// Green, orange, red cycle for `light`; turning green needs `other` red.
Hcs controller(const Alphabet& sigma, const std::string& light, const std::string& other) {
  HcsBuilder b(sigma);
  StateId red = b.add_state("red", true);
  StateId green = b.add_state("green", true);
  StateId orange = b.add_state("orange", true);
  b.add_guard(other + "-red", is_red(sigma, other));
  b.add_transition(red, light + ":turn-green", green, other + "-red");
  b.add_transition(green, light + ":turn-orange", orange);
  b.add_transition(orange, light + ":turn-red", red);
  for (StateId q : {red, green, orange}) {
    for (const auto& action : kLightActions) b.add_transition(q, other + ":" + action, q);
  }
  return b.build();
}

}  // namespace

Hcs traffic_lights() {
  Alphabet sigma = lights_alphabet();
  HcsBuilder b(sigma);
  StateId q0 = b.add_state("q0", true);
  b.add_guard("controller1", controller(sigma, "T1", "T2"));
  b.add_guard("controller2", controller(sigma, "T2", "T1"));
  for (const auto& action : kLightActions) {
    b.add_transition(q0, "T1:" + action, q0, "controller1");
    b.add_transition(q0, "T2:" + action, q0, "controller2");
  }
  return b.build();
}

Hcs intersection_nfa_c2_c3() { return build_intersection_nfa(Alphabet({"a"}), {cycle_dfa(2), cycle_dfa(3)}); }

Hcs intersection_dfa_c2_c3() { return build_intersection_dfa(Alphabet({"a"}), {cycle_dfa(2), cycle_dfa(3)}); }

Hcs intersection_nfa_aa_alternating() { return build_intersection_nfa(ab(), {contains_aa(), alternating()}); }

Hcs nested_c2_c3() {
  Alphabet sigma({"a"});
  HcsBuilder b(sigma);
  StateId q0 = b.add_state("q0");
  StateId q1 = b.add_state("q1", true);
  b.add_guard("inner", intersection_nfa_c2_c3());
  b.add_transition(q0, "a", q0);
  b.add_transition(q0, "eps", q1, "inner");
  return b.build();
}

std::vector<std::pair<std::string, Hcs>> regular_hcs_fixtures() {
  return {
      {"example_u1", example_u1()},
      {"example_u2", example_u2()},
      {"four_eyes", four_eyes()},
      {"traffic_lights", traffic_lights()},
      {"intersection_nfa_c2_c3", intersection_nfa_c2_c3()},
      {"intersection_dfa_c2_c3", intersection_dfa_c2_c3()},
      {"intersection_nfa_aa_alternating", intersection_nfa_aa_alternating()},
      {"nested_c2_c3", nested_c2_c3()},
      {"prime_family_2", prime_family(2)},
  };
}

Vass an_bm_vass() {
  return Vass(ab(), 1, {"q0", "q1"}, 0, {1},
              {{0, 0, {1}, 0}, {0, kEpsilon, {0}, 1}, {1, 1, {-1}, 1}}, VassMode::Cover);
}

TwoCounterMachine zero_test_machine() {
  using A = CounterAction;
  TwoCounterMachine m;
  m.states = {"p1", "p2", "p3", "p4", "p5", "p6"};
  m.transitions = {{0, A::Inc1, 0}, {0, A::Zero2, 1}, {0, A::Zero1, 2}, {2, A::Inc2, 1},
                   {1, A::Dec1, 3}, {3, A::Inc2, 4}, {4, A::Inc2, 1}, {1, A::Zero1, 5}};
  m.source = 0;
  m.target = 5;
  return m;
}

namespace {

// Counts a's once a has been seen; updates are never negative.
Vass count_a_guard() {
  return Vass(ab(), 1, {"g0", "g1"}, 0, {1},
              {{0, 0, {1}, 1}, {0, 1, {0}, 0}, {1, 0, {1}, 1}, {1, 1, {0}, 1}}, VassMode::Cover);
}

// Decrements only from n1, which is entered by an increment.
Vass step_down_guard() {
  return Vass(ab(), 1, {"n0", "n1"}, 0, {1},
              {{0, 0, {1}, 1}, {0, 1, {0}, 0}, {1, 0, {1}, 1}, {1, 1, {-1}, 0}}, VassMode::Cover);
}

// Two counters; accepting state unreachable.
Vass never_accepting_guard() {
  return Vass(ab(), 2, {"h0", "h1"}, 0, {1}, {{0, 0, {1, 0}, 0}, {0, 1, {0, 1}, 0}}, VassMode::Cover);
}

}  // namespace

std::vector<std::pair<std::string, Hcs>> non_dying_vass_fixtures() {
  std::vector<std::pair<std::string, Hcs>> out;
  {
    HcsBuilder b(ab());
    StateId q0 = b.add_state("q0");
    StateId q1 = b.add_state("q1", true);
    b.add_transition(q0, "a", q0);
    b.add_transition(q0, "b", q1, "G");
    b.add_transition(q1, "a", q1);
    b.add_transition(q1, "b", q1);
    b.add_guard("G", count_a_guard());
    out.emplace_back("count_a", b.build());
  }
  {
    HcsBuilder b(ab());
    StateId s0 = b.add_state("s0");
    StateId s1 = b.add_state("s1");
    StateId s2 = b.add_state("s2", true);
    b.add_transition(s0, "a", s0);
    b.add_transition(s0, "b", s0);
    b.add_transition(s0, kEpsilon, s1, "H");
    b.add_transition(s1, "a", s2, "K");
    b.add_transition(s1, "b", s0);
    b.add_guard("H", step_down_guard());
    b.add_guard("K", length_mod3());
    out.emplace_back("step_down_mixed", b.build());
  }
  {
    HcsBuilder b(ab());
    StateId s0 = b.add_state("s0");
    StateId s1 = b.add_state("s1", true);
    b.add_transition(s0, "a", s0);
    b.add_transition(s0, "b", s0, "G");
    b.add_transition(s0, "a", s1, "N");
    b.add_guard("G", count_a_guard());
    b.add_guard("N", never_accepting_guard());
    out.emplace_back("never_accepting", b.build());
  }
  {
    HcsBuilder b(ab());
    StateId s0 = b.add_state("s0", true);
    StateId s1 = b.add_state("s1");
    b.add_transition(s0, "a", s1);
    b.add_transition(s1, "b", s0);
    out.emplace_back("no_guards", b.build());
  }
  return out;
}

Hcs dying_guard_empty() {
  HcsBuilder b(ab());
  StateId s0 = b.add_state("s0");
  StateId s1 = b.add_state("s1", true);
  b.add_transition(s0, "a", s0);
  b.add_transition(s0, "b", s0);
  b.add_transition(s0, kEpsilon, s1, "G");
  b.add_guard("G", Vass(ab(), 1, {"g0", "g1"}, 0, {1},
                        {{0, 0, {-1}, 1}, {0, 1, {0}, 0}, {1, 0, {0}, 1}, {1, 1, {0}, 1}}, VassMode::Cover));
  return b.build();
}

}  // namespace hcs::fixtures
