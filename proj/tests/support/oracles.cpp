#include "oracles.hpp"

#include <map>
#include <set>
#include <utility>

namespace hcs::oracles {

bool run_exists(const FiniteAutomaton& a, const Word& word) {
  std::set<std::pair<StateId, std::size_t>> seen;
  std::vector<std::pair<StateId, std::size_t>> stack{{a.initial(), 0}};
  while (!stack.empty()) {
    auto [q, i] = stack.back();
    stack.pop_back();
    if (!seen.insert({q, i}).second) continue;
    if (i == word.size() && a.is_accepting(q)) return true;
    for (const auto& t : a.transitions()) {
      if (t.from != q) continue;
      if (t.epsilon()) {
        stack.push_back({t.to, i});
      } else if (i < word.size() && t.label == word[i]) {
        stack.push_back({t.to, i + 1});
      }
    }
  }
  return false;
}

FiniteAutomaton random_nfa(std::mt19937& rng, std::size_t states, std::size_t symbols, double density,
                           bool epsilon) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < states; ++i) names.push_back("r" + std::to_string(i));
  std::vector<std::string> sigma;
  for (std::size_t i = 0; i < symbols; ++i) sigma.push_back(std::string(1, static_cast<char>('a' + i)));
  std::bernoulli_distribution edge(density);
  std::bernoulli_distribution eps(epsilon ? density / 3 : 0.0);
  std::bernoulli_distribution acc(0.35);
  std::vector<Transition> transitions;
  std::vector<StateId> accepting;
  for (StateId p = 0; p < states; ++p) {
    if (acc(rng)) accepting.push_back(p);
    for (StateId q = 0; q < states; ++q) {
      for (SymbolId s = 0; s < symbols; ++s) {
        if (edge(rng)) transitions.push_back({p, s, q});
      }
      if (p != q && eps(rng)) transitions.push_back({p, kEpsilon, q});
    }
  }
  return FiniteAutomaton(Alphabet(sigma), names, 0, accepting, transitions);
}

std::size_t naive_class_count(const FiniteAutomaton& dfa) {
  const std::size_t k = dfa.alphabet().size();
  std::vector<StateId> reachable{dfa.initial()};
  std::set<StateId> seen{dfa.initial()};
  for (std::size_t i = 0; i < reachable.size(); ++i) {
    for (SymbolId a = 0; a < k; ++a) {
      StateId r = *dfa.next(reachable[i], a);
      if (seen.insert(r).second) reachable.push_back(r);
    }
  }
  std::map<StateId, int> cls;
  for (StateId q : reachable) cls[q] = dfa.is_accepting(q) ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<int>, int> ids;
    std::map<StateId, int> next;
    for (StateId q : reachable) {
      std::vector<int> sig{cls[q]};
      for (SymbolId a = 0; a < k; ++a) sig.push_back(cls[*dfa.next(q, a)]);
      auto it = ids.emplace(sig, static_cast<int>(ids.size())).first;
      next[q] = it->second;
    }
    if (ids.size() == count) return count;
    count = ids.size();
    cls = std::move(next);
  }
}

}  // namespace hcs::oracles
