#include "hcs/hcs.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "detail/util.hpp"

namespace hcs {

// --- GuardAutomaton ---------------------------------------------------------

GuardAutomaton::GuardAutomaton(FiniteAutomaton automaton) : value_(std::move(automaton)) {}
GuardAutomaton::GuardAutomaton(Vass vass) : value_(std::move(vass)) {}
GuardAutomaton::GuardAutomaton(Hcs hcs) : value_(std::make_shared<const Hcs>(std::move(hcs))) {}

GuardKind GuardAutomaton::kind() const noexcept {
  switch (value_.index()) {
    case 0:
      return GuardKind::Regular;
    case 1:
      return GuardKind::Vass;
    default:
      return GuardKind::Nested;
  }
}

const Alphabet& GuardAutomaton::alphabet() const {
  switch (kind()) {
    case GuardKind::Regular:
      return regular().alphabet();
    case GuardKind::Vass:
      return vass().alphabet();
    default:
      return nested().alphabet();
  }
}

const FiniteAutomaton& GuardAutomaton::regular() const {
  if (auto* a = std::get_if<FiniteAutomaton>(&value_)) return *a;
  throw ContractError("guard is not a finite automaton");
}

const Vass& GuardAutomaton::vass() const {
  if (auto* v = std::get_if<Vass>(&value_)) return *v;
  throw ContractError("guard is not a VASS");
}

const Hcs& GuardAutomaton::nested() const {
  if (auto* h = std::get_if<std::shared_ptr<const Hcs>>(&value_)) return **h;
  throw ContractError("guard is not a nested HCS");
}

std::size_t GuardAutomaton::num_states() const {
  switch (kind()) {
    case GuardKind::Regular:
      return regular().num_states();
    case GuardKind::Vass:
      return vass().num_states();
    default:
      return nested().total_states();
  }
}

std::uint64_t GuardAutomaton::size() const {
  switch (kind()) {
    case GuardKind::Regular:
      return regular().size();
    case GuardKind::Vass:
      return vass().unary_size();
    default:
      return nested().size();
  }
}

bool GuardAutomaton::is_finite_state() const {
  switch (kind()) {
    case GuardKind::Regular:
      return true;
    case GuardKind::Vass:
      return false;
    default:
      return nested().all_guards_finite_state();
  }
}

bool GuardAutomaton::operator==(const GuardAutomaton& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case GuardKind::Regular:
      return regular() == other.regular();
    case GuardKind::Vass:
      return vass() == other.vass();
    default:
      return nested() == other.nested();
  }
}

// --- Hcs --------------------------------------------------------------------

namespace {

FiniteAutomaton make_underlying(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                                std::vector<StateId> accepting, const std::vector<GuardedTransition>& sorted) {
  std::vector<Transition> plain;
  plain.reserve(sorted.size());
  for (const auto& t : sorted) plain.push_back({t.from, t.label, t.to});
  return FiniteAutomaton(std::move(alphabet), std::move(states), initial, std::move(accepting), std::move(plain));
}

std::vector<GuardedTransition> sorted_transitions(std::vector<GuardedTransition> transitions) {
  auto triple = [](const GuardedTransition& t) { return std::tie(t.from, t.label, t.to); };
  std::sort(transitions.begin(), transitions.end(),
            [&](const GuardedTransition& a, const GuardedTransition& b) { return triple(a) < triple(b); });
  for (std::size_t i = 1; i < transitions.size(); ++i) {
    if (triple(transitions[i]) == triple(transitions[i - 1])) {
      throw InputError(transitions[i].guard == transitions[i - 1].guard
                           ? "duplicate transition in HCS"
                           : "transition carries two different guards");
    }
  }
  return transitions;
}

}  // namespace

Hcs::Hcs(Alphabet alphabet, std::vector<std::string> states, StateId initial, std::vector<StateId> accepting,
         std::vector<GuardedTransition> transitions, std::vector<std::pair<std::string, GuardAutomaton>> guards)
    : Hcs(std::move(alphabet), std::move(states), initial, std::move(accepting),
          sorted_transitions(std::move(transitions)), std::move(guards), SortedTag{}) {}

Hcs::Hcs(Alphabet alphabet, std::vector<std::string> states, StateId initial, std::vector<StateId> accepting,
         std::vector<GuardedTransition> sorted, std::vector<std::pair<std::string, GuardAutomaton>> guards,
         SortedTag)
    : underlying_(make_underlying(std::move(alphabet), std::move(states), initial, std::move(accepting), sorted)),
      guards_(std::move(guards)) {
  std::sort(guards_.begin(), guards_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < guards_.size(); ++i) {
    if (guards_[i].first.empty()) throw InputError("empty guard name");
    if (i > 0 && guards_[i].first == guards_[i - 1].first) throw InputError("duplicate guard name: " + guards_[i].first);
    if (!(guards_[i].second.alphabet() == underlying_.alphabet())) {
      throw InputError("guard " + guards_[i].first + " does not share the HCS alphabet");
    }
  }
  transition_guards_.reserve(sorted.size());
  for (const auto& t : sorted) {
    if (!t.guard) {
      transition_guards_.push_back(std::nullopt);
      continue;
    }
    auto g = find_guard(*t.guard);
    if (!g) throw InputError("unknown guard: " + *t.guard);
    transition_guards_.push_back(*g);
  }
}

std::optional<std::size_t> Hcs::find_guard(std::string_view name) const {
  auto it = std::lower_bound(guards_.begin(), guards_.end(), name,
                             [](const auto& entry, std::string_view n) { return entry.first < n; });
  if (it == guards_.end() || it->first != name) return std::nullopt;
  return static_cast<std::size_t>(it - guards_.begin());
}

std::vector<GuardedTransition> Hcs::guarded_transitions() const {
  std::vector<GuardedTransition> result;
  auto ts = underlying_.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::optional<std::string> guard;
    if (transition_guards_[i]) guard = guards_[*transition_guards_[i]].first;
    result.push_back({ts[i].from, ts[i].label, ts[i].to, guard});
  }
  return result;
}

bool Hcs::all_guards_finite_state() const {
  return std::all_of(guards_.begin(), guards_.end(), [](const auto& g) { return g.second.is_finite_state(); });
}

std::size_t Hcs::total_states() const {
  std::size_t n = underlying_.num_states();
  for (const auto& [name, g] : guards_) n += g.num_states();
  return n;
}

std::uint64_t Hcs::size() const {
  std::uint64_t s = underlying_.size();
  for (const auto& [name, g] : guards_) s = detail::saturating_add(s, g.size());
  return s;
}

bool Hcs::operator==(const Hcs& other) const {
  return underlying_ == other.underlying_ && guards_ == other.guards_ &&
         transition_guards_ == other.transition_guards_;
}

// --- HcsBuilder -------------------------------------------------------------

StateId HcsBuilder::add_state(std::string name, bool accepting) {
  states_.push_back(std::move(name));
  accepting_.push_back(accepting);
  return static_cast<StateId>(states_.size() - 1);
}

void HcsBuilder::add_transition(StateId from, SymbolId label, StateId to, std::optional<std::string> guard) {
  transitions_.push_back({from, label, to, std::move(guard)});
}

void HcsBuilder::add_transition(StateId from, std::string_view label, StateId to, std::optional<std::string> guard) {
  add_transition(from, label == kEpsilonName ? kEpsilon : alphabet_.require(label), to, std::move(guard));
}

void HcsBuilder::add_guard(std::string name, GuardAutomaton guard) {
  guards_.emplace_back(std::move(name), std::move(guard));
}

Hcs HcsBuilder::build() const {
  std::vector<StateId> accepting;
  for (StateId q = 0; q < accepting_.size(); ++q) {
    if (accepting_[q]) accepting.push_back(q);
  }
  auto transitions = transitions_;
  std::sort(transitions.begin(), transitions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.label, a.to, a.guard) < std::tie(b.from, b.label, b.to, b.guard);
  });
  transitions.erase(std::unique(transitions.begin(), transitions.end(),
                                [](const auto& a, const auto& b) {
                                  return std::tie(a.from, a.label, a.to, a.guard) ==
                                         std::tie(b.from, b.label, b.to, b.guard);
                                }),
                    transitions.end());
  return Hcs(alphabet_, states_, initial_, std::move(accepting), std::move(transitions), guards_);
}

// --- runtime states ---------------------------------------------------------

bool GuardState::operator==(const GuardState& other) const {
  if (value.index() != other.value.index()) return false;
  if (auto* p = std::get_if<std::shared_ptr<const HcsConfiguration>>(&value)) {
    const auto& q = std::get<std::shared_ptr<const HcsConfiguration>>(other.value);
    return p->get() == q.get() || **p == *q;
  }
  return value == other.value;
}

bool HcsConfiguration::operator==(const HcsConfiguration& other) const {
  return underlying_states == other.underlying_states && guard_states == other.guard_states;
}

std::size_t hash_value(const GuardState& state) {
  std::size_t seed = state.value.index();
  if (auto* q = std::get_if<StateId>(&state.value)) {
    detail::hash_combine(seed, *q);
  } else if (auto* v = std::get_if<VassRunState>(&state.value)) {
    for (const auto& c : v->configs) {
      detail::hash_combine(seed, c.state);
      for (Counter x : c.counters) detail::hash_combine(seed, std::hash<Counter>{}(x));
    }
  } else {
    detail::hash_combine(seed, hash_value(*std::get<std::shared_ptr<const HcsConfiguration>>(state.value)));
  }
  return seed;
}

std::size_t hash_value(const HcsConfiguration& config) {
  std::size_t seed = detail::VectorHash{}(config.underlying_states);
  for (const auto& g : config.guard_states) detail::hash_combine(seed, hash_value(g));
  return seed;
}

// --- simulator --------------------------------------------------------------

struct HcsSimulator::Engine {
  virtual ~Engine() = default;
  virtual GuardState initial() const = 0;
  virtual GuardState step(const GuardState& state, SymbolId symbol) const = 0;
  virtual bool accepts(const GuardState& state) const = 0;
};

namespace {

class RegularEngine final : public HcsSimulator::Engine {
 public:
  explicit RegularEngine(const FiniteAutomaton& guard) : dfa_(compile_guard(GuardAutomaton(guard))) {
    k_ = dfa_.alphabet().size();
    next_.resize(dfa_.num_states() * k_);
    for (const auto& t : dfa_.transitions()) next_[t.from * k_ + t.label] = t.to;
  }
  GuardState initial() const override { return {dfa_.initial()}; }
  GuardState step(const GuardState& s, SymbolId a) const override {
    return {next_[std::get<StateId>(s.value) * k_ + a]};
  }
  bool accepts(const GuardState& s) const override { return dfa_.is_accepting(std::get<StateId>(s.value)); }

 private:
  FiniteAutomaton dfa_;
  std::size_t k_ = 0;
  std::vector<StateId> next_;
};

class VassEngine final : public HcsSimulator::Engine {
 public:
  explicit VassEngine(const Vass& vass) : vass_(vass) {}
  GuardState initial() const override { return {vass_start(vass_)}; }
  GuardState step(const GuardState& s, SymbolId a) const override {
    return {vass_step(vass_, std::get<VassRunState>(s.value), a)};
  }
  bool accepts(const GuardState& s) const override { return vass_accepting(vass_, std::get<VassRunState>(s.value)); }

 private:
  Vass vass_;
};

class NestedEngine final : public HcsSimulator::Engine {
 public:
  explicit NestedEngine(const Hcs& inner) : sim_(inner) {}
  GuardState initial() const override { return {std::make_shared<const HcsConfiguration>(sim_.initial())}; }
  GuardState step(const GuardState& s, SymbolId a) const override {
    const auto& config = *std::get<std::shared_ptr<const HcsConfiguration>>(s.value);
    return {std::make_shared<const HcsConfiguration>(sim_.step(config, a))};
  }
  bool accepts(const GuardState& s) const override {
    return sim_.accepting(*std::get<std::shared_ptr<const HcsConfiguration>>(s.value));
  }

 private:
  HcsSimulator sim_;
};

}  // namespace

HcsSimulator::HcsSimulator(const Hcs& hcs) : hcs_(std::make_shared<const Hcs>(hcs)) {
  for (const auto& [name, guard] : hcs_->guards()) {
    switch (guard.kind()) {
      case GuardKind::Regular:
        engines_.push_back(std::make_unique<RegularEngine>(guard.regular()));
        break;
      case GuardKind::Vass:
        engines_.push_back(std::make_unique<VassEngine>(guard.vass()));
        break;
      case GuardKind::Nested:
        engines_.push_back(std::make_unique<NestedEngine>(guard.nested()));
        break;
    }
  }
}

HcsSimulator::~HcsSimulator() = default;
HcsSimulator::HcsSimulator(HcsSimulator&&) noexcept = default;
HcsSimulator& HcsSimulator::operator=(HcsSimulator&&) noexcept = default;

std::vector<GuardState> HcsSimulator::initial_guards() const {
  std::vector<GuardState> guards;
  guards.reserve(engines_.size());
  for (const auto& e : engines_) guards.push_back(e->initial());
  return guards;
}

std::vector<GuardState> HcsSimulator::advance_guards(const std::vector<GuardState>& guards, SymbolId symbol) const {
  if (symbol == kEpsilon) return guards;
  std::vector<GuardState> next;
  next.reserve(guards.size());
  for (std::size_t i = 0; i < guards.size(); ++i) next.push_back(engines_[i]->step(guards[i], symbol));
  return next;
}

bool HcsSimulator::guard_accepts(std::size_t guard, const GuardState& state) const {
  return engines_.at(guard)->accepts(state);
}

bool HcsSimulator::enabled(std::size_t t, const std::vector<GuardState>& guards) const {
  auto g = hcs_->transition_guard(t);
  return !g || engines_[*g]->accepts(guards[*g]);
}

std::vector<StateId> HcsSimulator::closure(std::vector<StateId> states, const std::vector<GuardState>& guards) const {
  const FiniteAutomaton& u = hcs_->underlying();
  std::vector<char> in(u.num_states(), 0);
  std::vector<StateId> stack;
  for (StateId q : states) {
    if (!in[q]) {
      in[q] = 1;
      stack.push_back(q);
    }
  }
  std::vector<StateId> result = stack;
  const auto all = u.transitions();
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const auto& t : u.outgoing(q, kEpsilon)) {
      std::size_t index = static_cast<std::size_t>(&t - all.data());
      if (in[t.to] || !enabled(index, guards)) continue;
      in[t.to] = 1;
      result.push_back(t.to);
      stack.push_back(t.to);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

HcsConfiguration HcsSimulator::initial() const {
  HcsConfiguration config;
  config.guard_states = initial_guards();
  config.underlying_states = closure({hcs_->underlying().initial()}, config.guard_states);
  return config;
}

HcsConfiguration HcsSimulator::step(const HcsConfiguration& config, SymbolId symbol) const {
  if (symbol == kEpsilon) {
    return {closure(config.underlying_states, config.guard_states), config.guard_states, config.history_length};
  }
  const FiniteAutomaton& u = hcs_->underlying();
  const auto all = u.transitions();
  std::vector<StateId> targets;
  for (StateId q : config.underlying_states) {
    for (const auto& t : u.outgoing(q, symbol)) {
      if (enabled(static_cast<std::size_t>(&t - all.data()), config.guard_states)) targets.push_back(t.to);
    }
  }
  HcsConfiguration next;
  next.guard_states = advance_guards(config.guard_states, symbol);
  next.underlying_states = closure(std::move(targets), next.guard_states);
  next.history_length = config.history_length + 1;
  return next;
}

bool HcsSimulator::accepting(const HcsConfiguration& config) const {
  return std::any_of(config.underlying_states.begin(), config.underlying_states.end(),
                     [&](StateId q) { return hcs_->underlying().is_accepting(q); });
}

bool HcsSimulator::member(const Word& word) const {
  HcsConfiguration config = initial();
  for (SymbolId s : word) {
    if (s >= hcs_->alphabet().size()) throw InputError("symbol index out of range");
    config = step(config, s);
    if (config.underlying_states.empty()) return false;
  }
  return accepting(config);
}

bool member(const Hcs& hcs, const Word& word) { return HcsSimulator(hcs).member(word); }

bool member(const Hcs& hcs, std::span<const std::string> word) {
  return member(hcs, parse_word(hcs.alphabet(), word));
}

// --- emptiness --------------------------------------------------------------

namespace {

struct PointKey {
  StateId state;
  std::vector<GuardState> guards;

  bool operator==(const PointKey& other) const { return state == other.state && guards == other.guards; }
};

struct PointHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t seed = k.state;
    for (const auto& g : k.guards) detail::hash_combine(seed, hash_value(g));
    return seed;
  }
};

}  // namespace

std::optional<Word> find_accepted_word(const Hcs& hcs, std::size_t cap, std::optional<std::size_t> max_length) {
  const HcsSimulator sim(hcs);
  const FiniteAutomaton& u = hcs.underlying();
  const auto all = u.transitions();

  struct Node {
    PointKey key;
    long parent;
    SymbolId via;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<PointKey, std::size_t, PointHash> seen;
  std::deque<std::pair<std::size_t, std::size_t>> queue;

  // 0-1 BFS with relaxation: ε moves keep the word length.
  auto visit = [&](PointKey key, long parent, SymbolId via, std::size_t depth, bool front) {
    std::size_t index;
    auto it = seen.find(key);
    if (it == seen.end()) {
      if (nodes.size() >= cap) throw ResourceError("HCS exploration exceeded the configuration cap", cap);
      index = nodes.size();
      seen.emplace(key, index);
      nodes.push_back({std::move(key), parent, via, depth});
    } else {
      index = it->second;
      if (nodes[index].depth <= depth) return;
      nodes[index].parent = parent;
      nodes[index].via = via;
      nodes[index].depth = depth;
    }
    if (front) {
      queue.emplace_front(index, depth);
    } else {
      queue.emplace_back(index, depth);
    }
  };

  visit({u.initial(), sim.initial_guards()}, -1, kEpsilon, 0, false);
  while (!queue.empty()) {
    auto [i, queued_depth] = queue.front();
    queue.pop_front();
    if (queued_depth != nodes[i].depth) continue;
    const StateId q = nodes[i].key.state;
    if (u.is_accepting(q)) {
      Word word;
      for (long cur = static_cast<long>(i); cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
        if (nodes[static_cast<std::size_t>(cur)].via != kEpsilon) word.push_back(nodes[static_cast<std::size_t>(cur)].via);
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    const std::size_t depth = nodes[i].depth;
    for (const auto& t : u.outgoing(q)) {
      if (!sim.enabled(static_cast<std::size_t>(&t - all.data()), nodes[i].key.guards)) continue;
      if (t.epsilon()) {
        visit({t.to, nodes[i].key.guards}, static_cast<long>(i), kEpsilon, depth, true);
      } else if (!max_length || depth < *max_length) {
        visit({t.to, sim.advance_guards(nodes[i].key.guards, t.label)}, static_cast<long>(i), t.label, depth + 1,
              false);
      }
    }
  }
  return std::nullopt;
}

bool is_empty(const Hcs& hcs, std::size_t cap) {
  if (!hcs.all_guards_finite_state()) {
    throw InputError("HCS emptiness needs Regular or Nested guards; use the VASS-guard engines");
  }
  return !find_accepted_word(hcs, cap).has_value();
}

}  // namespace hcs
