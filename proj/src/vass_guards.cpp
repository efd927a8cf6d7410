#include "hcs/vass_guards.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "detail/util.hpp"

namespace hcs {

namespace {

constexpr StateId kNone = std::numeric_limits<StateId>::max();
constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

bool is_cover_dvass(const GuardAutomaton& g) {
  return g.kind() == GuardKind::Vass && g.vass().mode() == VassMode::Cover && g.vass().is_deterministic();
}

bool supported_guards(const Hcs& hcs) {
  return std::all_of(hcs.guards().begin(), hcs.guards().end(),
                     [](const auto& entry) { return entry.second.kind() != GuardKind::Vass || is_cover_dvass(entry.second); });
}

// A deterministic guard as a transition table. Missing entries are kNone.
struct DetGuard {
  std::size_t dim = 0;
  std::size_t num_states = 0;
  StateId initial = 0;
  std::vector<char> accepting;
  std::vector<std::string> names;
  std::vector<StateId> next;                 // num_states × |Σ|
  std::vector<std::vector<Counter>> update;  // parallel to next; empty for dim 0
  std::uint64_t size = 0;
};

DetGuard make_det_guard(const GuardAutomaton& guard, bool complete, std::size_t symbols, std::size_t cap) {
  DetGuard g;
  if (guard.kind() == GuardKind::Vass) {
    if (!is_cover_dvass(guard)) throw InputError("guard must be a deterministic Cover-mode VASS");
    const Vass v = complete ? complete_vass(guard.vass()) : guard.vass();
    g.dim = v.dim();
    g.num_states = v.num_states();
    g.initial = v.initial();
    g.names = v.state_names();
    g.size = v.unary_size();
    g.accepting.resize(g.num_states);
    g.next.assign(g.num_states * symbols, kNone);
    g.update.assign(g.num_states * symbols, {});
    for (StateId q = 0; q < g.num_states; ++q) {
      g.accepting[q] = v.is_accepting(q);
      for (SymbolId a = 0; a < symbols; ++a) {
        auto out = v.outgoing(q, a);
        if (out.empty()) continue;
        g.next[q * symbols + a] = out.front().to;
        g.update[q * symbols + a] = out.front().update;
      }
    }
    return g;
  }
  const FiniteAutomaton dfa = compile_guard(guard, cap);
  g.num_states = dfa.num_states();
  g.initial = dfa.initial();
  g.names = dfa.state_names();
  g.size = dfa.size();
  g.accepting.resize(g.num_states);
  g.next.assign(g.num_states * symbols, kNone);
  g.update.assign(g.num_states * symbols, {});
  for (StateId q = 0; q < g.num_states; ++q) {
    g.accepting[q] = dfa.is_accepting(q);
    for (SymbolId a = 0; a < symbols; ++a) {
      if (auto n = dfa.next(q, a)) g.next[q * symbols + a] = *n;
    }
  }
  return g;
}

std::vector<DetGuard> make_det_guards(const Hcs& hcs, bool complete, std::size_t cap) {
  std::vector<DetGuard> guards;
  for (const auto& entry : hcs.guards()) {
    guards.push_back(make_det_guard(entry.second, complete, hcs.alphabet().size(), cap));
  }
  return guards;
}

Counter add_counter(Counter x, Counter u) { return x == kOmega ? kOmega : x + u; }

bool leq_counters(const std::vector<Counter>& a, const std::vector<Counter>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] != kOmega && (a[i] == kOmega || a[i] > b[i])) return false;
  }
  return true;
}

bool has_omega(const std::vector<Counter>& c) {
  return std::find(c.begin(), c.end(), kOmega) != c.end();
}

// Sets ω wherever `ancestor` is strictly below `c`, given ancestor ≤ c.
void accelerate(const std::vector<Counter>& ancestor, std::vector<Counter>& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (ancestor[i] != c[i]) c[i] = kOmega;
  }
}

void check_config(const Vass& vass, const VassConfig& c, const char* what) {
  if (c.state >= vass.num_states() || c.counters.size() != vass.dim()) {
    throw InputError(std::string(what) + " configuration does not fit the VASS");
  }
  if (std::any_of(c.counters.begin(), c.counters.end(), [](Counter x) { return x < 0 || x == kOmega; })) {
    throw InputError(std::string(what) + " configuration needs finite non-negative counters");
  }
}

CoverabilityResult backward(const Vass& vass, const VassConfig& source, const VassConfig& target,
                            std::size_t cap) {
  struct Element {
    VassConfig config;
    std::size_t via = kNoIndex;  // transition fired from this element
    std::size_t next = kNoIndex;
    bool active = true;
  };
  CoverabilityResult result;
  std::vector<Element> elements{{target}};
  auto finish = [&](std::size_t e) {
    result.coverable = true;
    for (; elements[e].via != kNoIndex; e = elements[e].next) result.witness.push_back(elements[e].via);
  };
  result.nodes = 1;
  if (covered_by(target, source)) {
    finish(0);
    return result;
  }
  std::vector<std::vector<std::size_t>> incoming(vass.num_states());
  for (std::size_t t = 0; t < vass.transitions().size(); ++t) incoming[vass.transitions()[t].to].push_back(t);
  std::vector<std::vector<std::size_t>> basis(vass.num_states());
  basis[target.state].push_back(0);
  std::deque<std::size_t> work{0};
  while (!work.empty()) {
    const std::size_t e = work.front();
    work.pop_front();
    if (!elements[e].active) continue;
    for (std::size_t t : incoming[elements[e].config.state]) {
      const VassTransition& tr = vass.transitions()[t];
      VassConfig pre{tr.from, elements[e].config.counters};
      for (std::size_t i = 0; i < pre.counters.size(); ++i) {
        pre.counters[i] = std::max<Counter>(0, pre.counters[i] - tr.update[i]);
      }
      auto& bucket = basis[tr.from];
      if (std::any_of(bucket.begin(), bucket.end(), [&](std::size_t b) { return covered_by(elements[b].config, pre); })) {
        continue;
      }
      std::erase_if(bucket, [&](std::size_t b) {
        if (!covered_by(pre, elements[b].config)) return false;
        elements[b].active = false;
        return true;
      });
      if (++result.nodes > cap) throw ResourceError("backward coverability basis exceeded cap", cap);
      const std::size_t id = elements.size();
      elements.push_back({std::move(pre), t, e});
      bucket.push_back(id);
      if (covered_by(elements[id].config, source)) {
        finish(id);
        return result;
      }
      work.push_back(id);
    }
  }
  return result;
}

CoverabilityResult karp_miller(const Vass& vass, const VassConfig& source, const VassConfig& target,
                               std::size_t cap) {
  struct Node {
    VassConfig config;
    std::size_t parent = kNoIndex;
    std::size_t via = kNoIndex;
  };
  CoverabilityResult result;
  std::vector<Node> nodes{{source}};
  std::vector<std::vector<std::size_t>> processed(vass.num_states());
  std::deque<std::size_t> work{0};
  while (!work.empty()) {
    const std::size_t n = work.front();
    work.pop_front();
    const VassConfig config = nodes[n].config;
    if (covered_by(target, config)) {
      result.coverable = true;
      result.nodes = nodes.size();
      if (has_omega(config.counters)) {
        result.witness = backward(vass, source, target, cap).witness;
      } else {
        for (std::size_t m = n; nodes[m].via != kNoIndex; m = nodes[m].parent) result.witness.push_back(nodes[m].via);
        std::reverse(result.witness.begin(), result.witness.end());
      }
      return result;
    }
    auto& seen = processed[config.state];
    if (std::any_of(seen.begin(), seen.end(), [&](std::size_t m) { return covered_by(config, nodes[m].config); })) {
      continue;
    }
    seen.push_back(n);
    for (const VassTransition& tr : vass.outgoing(config.state)) {
      auto next = fire(config, tr);
      if (!next) continue;
      for (std::size_t a = n; a != kNoIndex; a = nodes[a].parent) {
        if (covered_by(nodes[a].config, *next)) accelerate(nodes[a].config.counters, next->counters);
      }
      if (nodes.size() >= cap) throw ResourceError("Karp-Miller tree exceeded cap", cap);
      nodes.push_back({std::move(*next), n, vass.transition_index(tr)});
      work.push_back(nodes.size() - 1);
    }
  }
  result.nodes = nodes.size();
  return result;
}

// Karp–Miller over (underlying state, guard states, live guard counters).
// A VASS guard in state kNone is DEAD; its counters are kept at 0.
EmptinessResult on_the_fly(const Hcs& hcs, std::size_t cap) {
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t symbols = hcs.alphabet().size();
  const std::vector<DetGuard> guards = make_det_guards(hcs, false, cap);
  std::vector<std::size_t> offset(guards.size() + 1, 0);
  for (std::size_t i = 0; i < guards.size(); ++i) offset[i + 1] = offset[i] + guards[i].dim;

  struct Node {
    StateId q;
    std::vector<StateId> g;
    std::vector<Counter> c;
    std::size_t parent = kNoIndex;
    SymbolId label = kEpsilon;
  };
  auto leq = [&](const Node& a, const Node& b) {
    if (a.q != b.q) return false;
    for (std::size_t i = 0; i < guards.size(); ++i) {
      if (guards[i].dim == 0) {
        if (a.g[i] != b.g[i]) return false;
        continue;
      }
      if (a.g[i] == kNone) continue;
      if (a.g[i] != b.g[i]) return false;
      for (std::size_t k = offset[i]; k < offset[i + 1]; ++k) {
        if (b.c[k] != kOmega && (a.c[k] == kOmega || a.c[k] > b.c[k])) return false;
      }
    }
    return true;
  };
  auto guard_open = [&](const Node& n, std::size_t t) {
    auto gi = hcs.transition_guard(t);
    if (!gi) return true;
    return n.g[*gi] != kNone && guards[*gi].accepting[n.g[*gi]] != 0;
  };

  Node root{u.initial(), {}, std::vector<Counter>(offset.back(), 0)};
  for (const auto& g : guards) root.g.push_back(g.initial);
  std::vector<Node> nodes{std::move(root)};
  std::vector<std::vector<std::size_t>> processed(u.num_states());
  std::deque<std::size_t> work{0};
  EmptinessResult result;
  result.engine = EmptinessEngine::OnTheFly;
  while (!work.empty()) {
    const std::size_t n = work.front();
    work.pop_front();
    if (u.is_accepting(nodes[n].q)) {
      result.verdict = EmptinessVerdict::Nonempty;
      result.nodes = nodes.size();
      if (!has_omega(nodes[n].c)) {
        Word w;
        for (std::size_t m = n; m != 0; m = nodes[m].parent) {
          if (nodes[m].label != kEpsilon) w.push_back(nodes[m].label);
        }
        std::reverse(w.begin(), w.end());
        result.witness = std::move(w);
      }
      return result;
    }
    auto& seen = processed[nodes[n].q];
    if (std::any_of(seen.begin(), seen.end(), [&](std::size_t m) { return leq(nodes[n], nodes[m]); })) continue;
    seen.push_back(n);
    const auto [first, last] = u.outgoing_range(nodes[n].q);
    for (std::size_t t = first; t < last; ++t) {
      if (!guard_open(nodes[n], t)) continue;
      const Transition& tr = u.transitions()[t];
      Node child{tr.to, nodes[n].g, nodes[n].c, n, tr.label};
      if (!tr.epsilon()) {
        for (std::size_t i = 0; i < guards.size(); ++i) {
          StateId& s = child.g[i];
          if (s == kNone) continue;
          const std::size_t cell = s * symbols + tr.label;
          s = guards[i].next[cell];
          if (guards[i].dim == 0) continue;
          bool alive = s != kNone;
          for (std::size_t k = 0; alive && k < guards[i].dim; ++k) {
            Counter& x = child.c[offset[i] + k];
            x = add_counter(x, guards[i].update[cell][k]);
            alive = x >= 0;
          }
          if (!alive) {
            s = kNone;
            std::fill(child.c.begin() + static_cast<long>(offset[i]), child.c.begin() + static_cast<long>(offset[i + 1]), 0);
          }
        }
      }
      for (std::size_t a = n; a != kNoIndex; a = nodes[a].parent) {
        if (nodes[a].q == child.q && nodes[a].g == child.g && leq_counters(nodes[a].c, child.c)) {
          accelerate(nodes[a].c, child.c);
        }
      }
      if (nodes.size() >= cap) throw ResourceError("on-the-fly emptiness tree exceeded cap", cap);
      nodes.push_back(std::move(child));
      work.push_back(nodes.size() - 1);
    }
  }
  result.verdict = EmptinessVerdict::Empty;
  result.nodes = nodes.size();
  return result;
}

EmptinessResult bounded(const Hcs& hcs, std::size_t max_length, std::size_t cap) {
  EmptinessResult result;
  if (auto w = find_accepted_word(hcs, cap, max_length)) {
    result.verdict = EmptinessVerdict::Nonempty;
    result.witness = std::move(*w);
  }
  return result;
}

}  // namespace

bool hcs_vass_member(const Hcs& hcs, const Word& word) { return member(hcs, word); }

Vass product_vass(const Hcs& hcs, bool non_dying, std::size_t cap) {
  if (!non_dying) throw InputError("product_vass requires the caller to assert that guards never die");
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t symbols = hcs.alphabet().size();
  const std::vector<DetGuard> guards = make_det_guards(hcs, true, cap);
  std::vector<std::size_t> offset(guards.size() + 1, 0);
  for (std::size_t i = 0; i < guards.size(); ++i) offset[i + 1] = offset[i] + guards[i].dim;
  const std::size_t dim = std::max<std::size_t>(1, offset.back());

  std::unordered_map<std::vector<StateId>, StateId, detail::VectorHash> index;
  std::vector<std::vector<StateId>> tuples;
  auto intern = [&](std::vector<StateId> tuple) {
    auto [it, fresh] = index.emplace(tuple, static_cast<StateId>(tuples.size()));
    if (fresh) {
      if (tuples.size() >= cap) throw ResourceError("product VASS exceeded cap", cap);
      tuples.push_back(std::move(tuple));
    }
    return it->second;
  };
  std::vector<StateId> start{u.initial()};
  for (const auto& g : guards) start.push_back(g.initial);
  intern(std::move(start));

  std::vector<VassTransition> transitions;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const std::vector<StateId> tuple = tuples[i];
    const auto [first, last] = u.outgoing_range(tuple[0]);
    for (std::size_t t = first; t < last; ++t) {
      if (auto gi = hcs.transition_guard(t); gi && !guards[*gi].accepting[tuple[*gi + 1]]) continue;
      const Transition& tr = u.transitions()[t];
      std::vector<StateId> next = tuple;
      next[0] = tr.to;
      std::vector<Counter> update(dim, 0);
      if (!tr.epsilon()) {
        for (std::size_t g = 0; g < guards.size(); ++g) {
          const std::size_t cell = tuple[g + 1] * symbols + tr.label;
          next[g + 1] = guards[g].next[cell];
          std::copy(guards[g].update[cell].begin(), guards[g].update[cell].end(),
                    update.begin() + static_cast<long>(offset[g]));
        }
      }
      const StateId to = intern(std::move(next));
      transitions.push_back({static_cast<StateId>(i), tr.label, std::move(update), to});
    }
  }

  std::vector<std::string> names;
  for (const auto& tuple : tuples) {
    std::string name = "(" + u.state_name(tuple[0]);
    for (std::size_t g = 0; g < guards.size(); ++g) name += "," + guards[g].names[tuple[g + 1]];
    names.push_back(name + ")");
  }
  const StateId final_state = static_cast<StateId>(names.size());
  names.push_back(detail::fresh_name("t", names));
  for (StateId i = 0; i < final_state; ++i) {
    if (u.is_accepting(tuples[i][0])) transitions.push_back({i, kEpsilon, std::vector<Counter>(dim, 0), final_state});
  }
  return Vass(hcs.alphabet(), dim, std::move(names), 0, {final_state}, std::move(transitions), VassMode::Cover);
}

std::uint64_t product_size_bound(const Hcs& hcs) {
  std::uint64_t base = hcs.underlying().size();
  for (const auto& entry : hcs.guards()) {
    const GuardAutomaton& g = entry.second;
    const std::uint64_t size = g.kind() == GuardKind::Vass && g.vass().is_deterministic()
                                   ? complete_vass(g.vass()).unary_size()
                                   : g.kind() == GuardKind::Vass ? g.size() : compile_guard(g).size();
    base = detail::saturating_add(base, size);
  }
  return detail::saturating_mul(2, detail::saturating_pow(base, hcs.guard_count() + 2));
}

CoverabilityResult decide_coverability(const CoverabilityInstance& instance, CoverEngine engine, std::size_t cap) {
  const Vass& vass = instance.vass;
  if (vass.mode() != VassMode::Cover) throw InputError("coverability needs a Cover-mode VASS");
  VassConfig source = instance.source;
  if (source.counters.empty()) source.counters.assign(vass.dim(), 0);
  check_config(vass, source, "source");
  check_config(vass, instance.target, "target");
  return engine == CoverEngine::Backward ? backward(vass, source, instance.target, cap)
                                         : karp_miller(vass, source, instance.target, cap);
}

Word witness_word(const Vass& vass, const std::vector<std::size_t>& witness) {
  Word word;
  for (std::size_t t : witness) {
    const VassTransition& tr = vass.transitions()[t];
    if (!tr.epsilon()) word.push_back(tr.label);
  }
  return word;
}

EmptinessResult hcs_cover_empty(const Hcs& hcs, EmptinessEngine engine, bool non_dying, std::size_t max_length,
                                std::size_t cap) {
  if (engine == EmptinessEngine::Bounded || !supported_guards(hcs)) return bounded(hcs, max_length, cap);
  if (engine == EmptinessEngine::OnTheFly) return on_the_fly(hcs, cap);
  const Vass product = product_vass(hcs, non_dying, cap);
  const VassConfig source{product.initial(), std::vector<Counter>(product.dim(), 0)};
  const VassConfig target{product.accepting().front(), std::vector<Counter>(product.dim(), 0)};
  const CoverabilityResult cover = decide_coverability({product, source, target}, CoverEngine::Backward, cap);
  EmptinessResult result;
  result.engine = EmptinessEngine::Product;
  result.nodes = cover.nodes;
  result.verdict = cover.coverable ? EmptinessVerdict::Nonempty : EmptinessVerdict::Empty;
  if (cover.coverable) result.witness = witness_word(product, cover.witness);
  return result;
}

std::string action_name(CounterAction a) {
  static const char* const names[] = {"inc1", "dec1", "zero1", "inc2", "dec2", "zero2"};
  return names[static_cast<int>(a)];
}

Alphabet counter_action_alphabet() {
  std::vector<std::string> names;
  for (int a = 0; a < 6; ++a) names.push_back(action_name(static_cast<CounterAction>(a)));
  return Alphabet(std::move(names));
}

void TwoCounterMachine::validate() const {
  const std::size_t n = states.size();
  if (n == 0) throw InputError("2CM has no states");
  if (source >= n || target >= n) throw InputError("2CM source or target out of range");
  std::vector<char> used(n * 6, 0);
  for (const Step& s : transitions) {
    if (s.from >= n || s.to >= n) throw InputError("2CM transition state out of range");
    char& slot = used[s.from * 6 + static_cast<std::size_t>(s.action)];
    if (slot) throw InputError("2CM violates action determinacy at state " + states[s.from] + " on " + action_name(s.action));
    slot = 1;
  }
}

Hcs two_cm_to_hcs(const TwoCounterMachine& machine) {
  machine.validate();
  const Alphabet alphabet = counter_action_alphabet();
  HcsBuilder builder(alphabet);
  for (const auto& name : machine.states) builder.add_state(name);
  std::vector<std::string> taken = machine.states;
  const std::string r_name = detail::fresh_name("r", taken);
  taken.push_back(r_name);
  const StateId r = builder.add_state(r_name);
  const StateId s = builder.add_state(detail::fresh_name("s", taken), true);
  builder.set_initial(machine.source);
  auto guard_of = [](CounterAction a) -> std::optional<std::string> {
    if (a == CounterAction::Zero1) return "G1";
    if (a == CounterAction::Zero2) return "G2";
    return std::nullopt;
  };
  for (const auto& step : machine.transitions) {
    builder.add_transition(step.from, static_cast<SymbolId>(step.action), step.to, guard_of(step.action));
  }
  builder.add_transition(machine.target, static_cast<SymbolId>(CounterAction::Zero1), r, "G1");
  builder.add_transition(r, static_cast<SymbolId>(CounterAction::Zero2), s, "G2");
  for (int i = 0; i < 2; ++i) {
    const auto inc = static_cast<SymbolId>(i == 0 ? CounterAction::Inc1 : CounterAction::Inc2);
    const auto dec = static_cast<SymbolId>(i == 0 ? CounterAction::Dec1 : CounterAction::Dec2);
    std::vector<VassTransition> loops;
    for (SymbolId a = 0; a < alphabet.size(); ++a) {
      loops.push_back({0, a, {a == inc ? 1 : a == dec ? -1 : 0}, 0});
    }
    builder.add_guard(i == 0 ? "G1" : "G2", Vass(alphabet, 1, {"g"}, 0, {0}, std::move(loops), VassMode::Reach));
  }
  return builder.build();
}

BoundedResult bounded_reach_empty(const Hcs& hcs, std::size_t max_length, std::size_t cap) {
  BoundedResult result;
  result.max_length = max_length;
  if (auto w = find_accepted_word(hcs, cap, max_length)) {
    result.nonempty = true;
    result.witness = std::move(*w);
  }
  return result;
}

Hcs delimited_star_hcs(const Vass& vass) {
  if (vass.alphabet().contains("$")) throw InputError("delimiter $ already in the VASS alphabet");
  const Alphabet alphabet = vass.alphabet().extended("$");
  const SymbolId dollar = alphabet.require("$");

  std::vector<std::string> names{detail::fresh_name("p0", vass.state_names())};
  names.insert(names.end(), vass.state_names().begin(), vass.state_names().end());
  std::vector<StateId> accepting;
  for (StateId q : vass.accepting()) accepting.push_back(q + 1);
  std::vector<VassTransition> transitions;
  const std::vector<Counter> zero(vass.dim(), 0);
  for (SymbolId a = 0; a < alphabet.size(); ++a) transitions.push_back({0, a, zero, 0});
  transitions.push_back({0, dollar, zero, vass.initial() + 1});
  for (const VassTransition& t : vass.transitions()) transitions.push_back({t.from + 1, t.label, t.update, t.to + 1});
  Vass guard(alphabet, vass.dim(), std::move(names), 0, std::move(accepting), std::move(transitions), vass.mode());

  HcsBuilder builder(alphabet);
  const StateId q0 = builder.add_state("q0");
  const StateId q1 = builder.add_state("q1", true);
  const StateId q2 = builder.add_state("q2");
  builder.set_initial(q0);
  builder.add_transition(q0, dollar, q1);
  for (SymbolId a = 0; a < vass.alphabet().size(); ++a) {
    builder.add_transition(q1, a, q2);
    builder.add_transition(q2, a, q2);
  }
  builder.add_transition(q2, dollar, q1, "G$");
  // Empty blocks: only taken when ε ∈ L(vass).
  builder.add_transition(q1, dollar, q1, "G$");
  builder.add_guard("G$", std::move(guard));
  return builder.build();
}

}  // namespace hcs
