#include <algorithm>
#include <unordered_map>

#include "detail/util.hpp"
#include "hcs/hcs.hpp"

namespace hcs {

FiniteAutomaton compile_guard(const GuardAutomaton& guard, std::size_t cap) {
  switch (guard.kind()) {
    case GuardKind::Regular: {
      const FiniteAutomaton& a = guard.regular();
      if (a.is_complete()) return a;
      if (a.is_deterministic()) return complete(a);
      return determinize(a, cap);
    }
    case GuardKind::Nested:
      return determinize_hcs(guard.nested(), cap);
    case GuardKind::Vass:
      break;
  }
  throw InputError("VASS guards have no finite-state compilation");
}

FiniteAutomaton determinize_hcs(const Hcs& hcs, std::size_t cap) {
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t k = hcs.alphabet().size();
  const std::size_t m = hcs.guard_count();

  std::vector<FiniteAutomaton> dfas;
  std::vector<std::vector<StateId>> next(m);
  for (std::size_t i = 0; i < m; ++i) {
    dfas.push_back(compile_guard(hcs.guard(i), cap));
    next[i].resize(dfas[i].num_states() * k);
    for (const auto& t : dfas[i].transitions()) next[i][t.from * k + t.label] = t.to;
  }
  const auto all = u.transitions();
  auto enabled = [&](std::size_t t, const StateId* guards) {
    auto g = hcs.transition_guard(t);
    return !g || dfas[*g].is_accepting(guards[*g]);
  };
  auto closure = [&](std::vector<StateId> set, const StateId* guards) {
    std::vector<char> in(u.num_states(), 0);
    for (StateId q : set) in[q] = 1;
    std::vector<StateId> stack = set;
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      for (const auto& t : u.outgoing(q, kEpsilon)) {
        if (in[t.to] || !enabled(static_cast<std::size_t>(&t - all.data()), guards)) continue;
        in[t.to] = 1;
        set.push_back(t.to);
        stack.push_back(t.to);
      }
    }
    detail::sort_unique(set);
    return set;
  };

  // Key layout: m guard states followed by the sorted subset Q'.
  std::unordered_map<std::vector<StateId>, StateId, detail::VectorHash> index;
  std::vector<std::vector<StateId>> keys;
  long sink = -1;
  std::vector<Transition> transitions;

  auto intern = [&](std::vector<StateId> key) -> StateId {
    if (key.size() == m) {
      if (sink < 0) {
        sink = static_cast<long>(keys.size());
        if (keys.size() >= cap) throw ResourceError("determinize_hcs exceeded the state cap", cap);
        keys.push_back({});
      }
      return static_cast<StateId>(sink);
    }
    auto [it, inserted] = index.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) {
      if (keys.size() >= cap) throw ResourceError("determinize_hcs exceeded the state cap", cap);
      keys.push_back(std::move(key));
    }
    return it->second;
  };

  {
    std::vector<StateId> key;
    for (const auto& d : dfas) key.push_back(d.initial());
    auto start = closure({u.initial()}, key.data());
    key.insert(key.end(), start.begin(), start.end());
    intern(std::move(key));
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (static_cast<long>(i) == sink) {
      for (SymbolId a = 0; a < k; ++a) transitions.push_back({static_cast<StateId>(i), a, static_cast<StateId>(i)});
      continue;
    }
    for (SymbolId a = 0; a < k; ++a) {
      const std::vector<StateId>& key = keys[i];
      std::vector<StateId> targets;
      for (std::size_t j = m; j < key.size(); ++j) {
        for (const auto& t : u.outgoing(key[j], a)) {
          if (enabled(static_cast<std::size_t>(&t - all.data()), key.data())) targets.push_back(t.to);
        }
      }
      std::vector<StateId> nkey(m);
      for (std::size_t g = 0; g < m; ++g) nkey[g] = next[g][key[g] * k + a];
      auto set = closure(std::move(targets), nkey.data());
      nkey.insert(nkey.end(), set.begin(), set.end());
      StateId to = intern(std::move(nkey));
      transitions.push_back({static_cast<StateId>(i), a, to});
    }
  }

  std::vector<std::string> names;
  std::vector<StateId> accepting;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (static_cast<long>(i) == sink) {
      names.push_back("{}");
      continue;
    }
    const auto& key = keys[i];
    std::string name = "{";
    bool acc = false;
    for (std::size_t j = m; j < key.size(); ++j) {
      if (j > m) name += ',';
      name += u.state_name(key[j]);
      acc = acc || u.is_accepting(key[j]);
    }
    name += '}';
    if (m > 0) {
      name += '[';
      for (std::size_t g = 0; g < m; ++g) {
        if (g) name += ',';
        name += dfas[g].state_name(key[g]);
      }
      name += ']';
    }
    names.push_back(std::move(name));
    if (acc) accepting.push_back(static_cast<StateId>(i));
  }
  // Names built from guard DFA state names can collide; disambiguate.
  {
    std::unordered_map<std::string, std::size_t> count;
    for (auto& n : names) {
      std::size_t c = count[n]++;
      if (c > 0) n += "#" + std::to_string(c);
    }
  }
  return FiniteAutomaton(hcs.alphabet(), std::move(names), 0, std::move(accepting), std::move(transitions));
}

std::uint64_t determinization_bound(const Hcs& hcs) {
  std::size_t exponent = hcs.underlying().num_states();
  for (const auto& [name, g] : hcs.guards()) exponent += g.num_states();
  return detail::saturating_pow(2, exponent);
}

namespace {

Hcs rebuild(const Hcs& hcs, std::vector<std::pair<std::string, GuardAutomaton>> guards) {
  const FiniteAutomaton& u = hcs.underlying();
  return Hcs(hcs.alphabet(), u.state_names(), u.initial(), u.accepting(), hcs.guarded_transitions(),
             std::move(guards));
}

}  // namespace

Hcs flatten_nested(const Hcs& hcs, std::size_t cap) {
  std::vector<std::pair<std::string, GuardAutomaton>> guards;
  bool changed = false;
  for (const auto& [name, g] : hcs.guards()) {
    switch (g.kind()) {
      case GuardKind::Regular:
        guards.emplace_back(name, g);
        break;
      case GuardKind::Nested:
        guards.emplace_back(name, GuardAutomaton(determinize_hcs(g.nested(), cap)));
        changed = true;
        break;
      case GuardKind::Vass:
        throw InputError("flatten_nested supports Regular and Nested guards only");
    }
  }
  if (!changed) return hcs;
  return rebuild(hcs, std::move(guards));
}

Hcs make_non_blocking(const Hcs& hcs) {
  const FiniteAutomaton& u = hcs.underlying();
  const std::size_t k = hcs.alphabet().size();
  std::vector<std::pair<StateId, SymbolId>> missing;
  const auto all = u.transitions();
  for (StateId q = 0; q < u.num_states(); ++q) {
    for (SymbolId a = 0; a < k; ++a) {
      auto out = u.outgoing(q, a);
      bool free_move = std::any_of(out.begin(), out.end(), [&](const Transition& t) {
        return !hcs.transition_guard(static_cast<std::size_t>(&t - all.data()));
      });
      if (!free_move) missing.emplace_back(q, a);
    }
  }
  if (missing.empty()) return hcs;

  std::vector<std::string> states = u.state_names();
  const StateId sink = static_cast<StateId>(states.size());
  states.push_back(detail::fresh_name("sink", u.state_names()));
  auto transitions = hcs.guarded_transitions();
  for (auto [q, a] : missing) transitions.push_back({q, a, sink, std::nullopt});
  for (SymbolId a = 0; a < k; ++a) transitions.push_back({sink, a, sink, std::nullopt});
  return Hcs(hcs.alphabet(), std::move(states), u.initial(), u.accepting(), std::move(transitions), hcs.guards());
}

GuardAutomaton extend_alphabet(const GuardAutomaton& guard, const Alphabet& alphabet) {
  const Alphabet& old = guard.alphabet();
  if (old.size() > alphabet.size() ||
      !std::equal(old.symbols().begin(), old.symbols().end(), alphabet.symbols().begin())) {
    throw ContractError("extended alphabet must start with the guard's alphabet");
  }
  switch (guard.kind()) {
    case GuardKind::Regular: {
      const FiniteAutomaton& a = guard.regular();
      return FiniteAutomaton(alphabet, a.state_names(), a.initial(), a.accepting(),
                             {a.transitions().begin(), a.transitions().end()});
    }
    case GuardKind::Vass: {
      const Vass& v = guard.vass();
      return Vass(alphabet, v.dim(), v.state_names(), v.initial(), v.accepting(),
                  {v.transitions().begin(), v.transitions().end()}, v.mode());
    }
    case GuardKind::Nested: {
      const Hcs& h = guard.nested();
      std::vector<std::pair<std::string, GuardAutomaton>> guards;
      for (const auto& [name, g] : h.guards()) guards.emplace_back(name, extend_alphabet(g, alphabet));
      const FiniteAutomaton& u = h.underlying();
      return Hcs(alphabet, u.state_names(), u.initial(), u.accepting(), h.guarded_transitions(), std::move(guards));
    }
  }
  throw ContractError("unknown guard kind");
}

namespace {

// Language {w $^count : w ∈ L(guard)}; `guard` is already over Σ ∪ {$}.
GuardAutomaton append_dollars(const GuardAutomaton& guard, SymbolId dollar, std::size_t count) {
  if (count == 0) return guard;
  switch (guard.kind()) {
    case GuardKind::Regular: {
      const FiniteAutomaton& a = guard.regular();
      std::vector<std::string> states = a.state_names();
      std::vector<Transition> transitions(a.transitions().begin(), a.transitions().end());
      const StateId first = static_cast<StateId>(states.size());
      for (std::size_t j = 1; j <= count; ++j) states.push_back(detail::fresh_name("$" + std::to_string(j), a.state_names()));
      for (StateId f : a.accepting()) transitions.push_back({f, dollar, first});
      for (std::size_t j = 1; j < count; ++j) {
        transitions.push_back({static_cast<StateId>(first + j - 1), dollar, static_cast<StateId>(first + j)});
      }
      return FiniteAutomaton(a.alphabet(), std::move(states), a.initial(),
                             {static_cast<StateId>(first + count - 1)}, std::move(transitions));
    }
    case GuardKind::Vass: {
      const Vass& v = guard.vass();
      std::vector<std::string> states = v.state_names();
      std::vector<VassTransition> transitions(v.transitions().begin(), v.transitions().end());
      const std::vector<Counter> zero(v.dim(), 0);
      const StateId first = static_cast<StateId>(states.size());
      for (std::size_t j = 1; j <= count; ++j) states.push_back(detail::fresh_name("$" + std::to_string(j), v.state_names()));
      for (StateId f : v.accepting()) transitions.push_back({f, dollar, zero, first});
      for (std::size_t j = 1; j < count; ++j) {
        transitions.push_back({static_cast<StateId>(first + j - 1), dollar, zero, static_cast<StateId>(first + j)});
      }
      return Vass(v.alphabet(), v.dim(), std::move(states), v.initial(), {static_cast<StateId>(first + count - 1)},
                  std::move(transitions), v.mode());
    }
    case GuardKind::Nested: {
      const Hcs& h = guard.nested();
      const FiniteAutomaton& u = h.underlying();
      std::vector<std::string> states = u.state_names();
      auto transitions = h.guarded_transitions();
      const StateId first = static_cast<StateId>(states.size());
      for (std::size_t j = 1; j <= count; ++j) states.push_back(detail::fresh_name("$" + std::to_string(j), u.state_names()));
      for (StateId f : u.accepting()) transitions.push_back({f, dollar, first, std::nullopt});
      for (std::size_t j = 1; j < count; ++j) {
        transitions.push_back(
            {static_cast<StateId>(first + j - 1), dollar, static_cast<StateId>(first + j), std::nullopt});
      }
      return Hcs(h.alphabet(), std::move(states), u.initial(), {static_cast<StateId>(first + count - 1)},
                 std::move(transitions), h.guards());
    }
  }
  throw ContractError("unknown guard kind");
}

void check_alphabets(const Alphabet& alphabet, const std::vector<GuardAutomaton>& guards) {
  for (const auto& g : guards) {
    if (!(g.alphabet() == alphabet)) throw InputError("intersection guards must share one alphabet");
  }
}

}  // namespace

Hcs build_intersection_nfa(const Alphabet& alphabet, std::vector<GuardAutomaton> guards) {
  check_alphabets(alphabet, guards);
  const std::size_t k = guards.size();
  HcsBuilder b(alphabet);
  for (std::size_t i = 0; i <= k; ++i) b.add_state("q" + std::to_string(i), i == k);
  for (SymbolId a = 0; a < alphabet.size(); ++a) b.add_transition(0, a, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    std::string name = "G" + std::to_string(i);
    b.add_guard(name, std::move(guards[i - 1]));
    b.add_transition(static_cast<StateId>(i - 1), kEpsilon, static_cast<StateId>(i), name);
  }
  return b.build();
}

Hcs build_intersection_dfa(const Alphabet& alphabet, std::vector<GuardAutomaton> guards) {
  check_alphabets(alphabet, guards);
  if (alphabet.contains("$")) throw InputError("alphabet already contains the delimiter \"$\"");
  const Alphabet extended = alphabet.extended("$");
  const SymbolId dollar = *extended.find("$");
  const std::size_t k = guards.size();
  HcsBuilder b(extended);
  for (std::size_t i = 0; i <= k; ++i) b.add_state("q" + std::to_string(i), i == k);
  for (SymbolId a = 0; a < alphabet.size(); ++a) b.add_transition(0, a, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    std::string name = "G" + std::to_string(i);
    b.add_guard(name, append_dollars(extend_alphabet(guards[i - 1], extended), dollar, i - 1));
    b.add_transition(static_cast<StateId>(i - 1), dollar, static_cast<StateId>(i), name);
  }
  return b.build();
}

}  // namespace hcs
