#include "hcs/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace hcs {

namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& j, std::initializer_list<std::string_view> required,
                std::initializer_list<std::string_view> optional, std::string_view what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (std::string_view key : required) {
    if (!j.contains(key)) throw InputError(std::string(what) + " is missing \"" + std::string(key) + "\"");
  }
  for (const auto& [key, value] : j.items()) {
    const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw InputError(std::string(what) + " has unknown field \"" + key + "\"");
  }
}

std::vector<std::string> strings(const Json& j, std::string_view what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(std::string(what) + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::string string_field(const Json& j, std::string_view key) {
  const Json& x = j.at(key);
  if (!x.is_string()) throw InputError("field \"" + std::string(key) + "\" must be a string");
  return x.get<std::string>();
}

std::uint64_t unsigned_field(const Json& j, std::string_view key) {
  const Json& x = j.at(key);
  if (!x.is_number_unsigned()) throw InputError("field \"" + std::string(key) + "\" must be a non-negative integer");
  return x.get<std::uint64_t>();
}

class Names {
 public:
  Names(const std::vector<std::string>& names, std::string what) : what_(std::move(what)) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!index_.emplace(names[i], static_cast<StateId>(i)).second) {
        throw InputError("duplicate " + what_ + " \"" + names[i] + "\"");
      }
    }
  }
  StateId operator()(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown " + what_ + " \"" + name + "\"");
    return it->second;
  }

 private:
  std::string what_;
  std::unordered_map<std::string, StateId> index_;
};

SymbolId parse_label(const Alphabet& alphabet, const std::string& name) {
  return name == kEpsilonName ? kEpsilon : alphabet.require(name);
}

std::vector<StateId> lookup_all(const Names& names, const std::vector<std::string>& list) {
  std::vector<StateId> out;
  for (const auto& n : list) out.push_back(names(n));
  return out;
}

Json names_json(const std::vector<std::string>& names, const std::vector<StateId>& ids) {
  Json out = Json::array();
  for (StateId q : ids) out.push_back(names[q]);
  return out;
}

// ---- automata -------------------------------------------------------------

FiniteAutomaton automaton_from_json(const Json& j, bool must_be_dfa) {
  check_keys(j, {"type", "alphabet", "states", "initial", "accepting", "transitions"}, {}, "automaton");
  Alphabet alphabet(strings(j.at("alphabet"), "alphabet"));
  const auto states = strings(j.at("states"), "states");
  Names names(states, "state");
  std::vector<Transition> ts;
  if (!j.at("transitions").is_array()) throw InputError("transitions must be an array");
  for (const auto& t : j.at("transitions")) {
    check_keys(t, {"from", "label", "to"}, {}, "transition");
    ts.push_back({names(string_field(t, "from")), parse_label(alphabet, string_field(t, "label")),
                  names(string_field(t, "to"))});
  }
  FiniteAutomaton a(alphabet, states, names(string_field(j, "initial")),
                    lookup_all(names, strings(j.at("accepting"), "accepting")), ts);
  if (must_be_dfa && !a.is_deterministic()) throw InputError("document of type dfa is not deterministic");
  return a;
}

Json automaton_to_json(const FiniteAutomaton& a) {
  Json j;
  j["type"] = a.is_deterministic() ? "dfa" : "nfa";
  j["alphabet"] = a.alphabet().symbols();
  j["states"] = a.state_names();
  j["initial"] = a.state_name(a.initial());
  j["accepting"] = names_json(a.state_names(), a.accepting());
  j["transitions"] = Json::array();
  for (const auto& t : a.transitions()) {
    j["transitions"].push_back(
        {{"from", a.state_name(t.from)}, {"label", label_name(a.alphabet(), t.label)}, {"to", a.state_name(t.to)}});
  }
  return j;
}

// ---- vass -----------------------------------------------------------------

Vass vass_from_json(const Json& j) {
  check_keys(j, {"type", "alphabet", "dim", "mode", "states", "initial", "accepting", "transitions"}, {}, "vass");
  Alphabet alphabet(strings(j.at("alphabet"), "alphabet"));
  const std::size_t dim = unsigned_field(j, "dim");
  const std::string mode = string_field(j, "mode");
  if (mode != "cover" && mode != "reach") throw InputError("vass mode must be \"cover\" or \"reach\"");
  const auto states = strings(j.at("states"), "states");
  Names names(states, "state");
  std::vector<VassTransition> ts;
  if (!j.at("transitions").is_array()) throw InputError("transitions must be an array");
  for (const auto& t : j.at("transitions")) {
    check_keys(t, {"from", "label", "update", "to"}, {}, "vass transition");
    std::vector<Counter> update;
    if (!t.at("update").is_array()) throw InputError("update must be an array of integers");
    for (const auto& x : t.at("update")) {
      if (!x.is_number_integer()) throw InputError("update must be an array of integers");
      update.push_back(x.get<Counter>());
    }
    ts.push_back({names(string_field(t, "from")), parse_label(alphabet, string_field(t, "label")), std::move(update),
                  names(string_field(t, "to"))});
  }
  return Vass(alphabet, dim, states, names(string_field(j, "initial")),
              lookup_all(names, strings(j.at("accepting"), "accepting")), std::move(ts),
              mode == "cover" ? VassMode::Cover : VassMode::Reach);
}

Json vass_to_json(const Vass& v) {
  Json j;
  j["type"] = "vass";
  j["alphabet"] = v.alphabet().symbols();
  j["dim"] = v.dim();
  j["mode"] = v.mode() == VassMode::Cover ? "cover" : "reach";
  j["states"] = v.state_names();
  j["initial"] = v.state_name(v.initial());
  j["accepting"] = names_json(v.state_names(), v.accepting());
  j["transitions"] = Json::array();
  for (const auto& t : v.transitions()) {
    j["transitions"].push_back({{"from", v.state_name(t.from)},
                                {"label", label_name(v.alphabet(), t.label)},
                                {"update", t.update},
                                {"to", v.state_name(t.to)}});
  }
  return j;
}

// ---- hcs and games --------------------------------------------------------

Hcs hcs_from_json(const Json& j, bool game);

GuardAutomaton guard_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InputError("guard must be a model document with a \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "nfa" || type == "dfa") return automaton_from_json(j, type == "dfa");
  if (type == "vass") return vass_from_json(j);
  if (type == "hcs") return hcs_from_json(j, false);
  throw InputError("guard documents must be nfa, dfa, vass or hcs, not " + type);
}

Hcs hcs_from_json(const Json& j, bool game) {
  if (game) {
    check_keys(j, {"type", "alphabet", "states", "initial", "accepting", "transitions", "owner", "objective"},
               {"guards"}, "game");
  } else {
    check_keys(j, {"type", "alphabet", "states", "initial", "accepting", "transitions"}, {"guards"}, "hcs");
  }
  Alphabet alphabet(strings(j.at("alphabet"), "alphabet"));
  const auto states = strings(j.at("states"), "states");
  Names names(states, "state");
  std::vector<std::pair<std::string, GuardAutomaton>> guards;
  if (j.contains("guards")) {
    if (!j.at("guards").is_object()) throw InputError("guards must be an object of documents");
    for (const auto& [name, doc] : j.at("guards").items()) guards.emplace_back(name, guard_from_json(doc));
  }
  std::vector<GuardedTransition> ts;
  if (!j.at("transitions").is_array()) throw InputError("transitions must be an array");
  for (const auto& t : j.at("transitions")) {
    check_keys(t, {"from", "label", "to"}, {"guard"}, "transition");
    std::optional<std::string> guard;
    if (t.contains("guard")) guard = string_field(t, "guard");
    ts.push_back({names(string_field(t, "from")), parse_label(alphabet, string_field(t, "label")),
                  names(string_field(t, "to")), guard});
  }
  return Hcs(alphabet, states, names(string_field(j, "initial")),
             lookup_all(names, strings(j.at("accepting"), "accepting")), std::move(ts), std::move(guards));
}

Json guard_to_json(const GuardAutomaton& g);

Json hcs_to_json(const Hcs& h, std::string_view type) {
  const FiniteAutomaton& u = h.underlying();
  Json j;
  j["type"] = type;
  j["alphabet"] = h.alphabet().symbols();
  j["states"] = u.state_names();
  j["initial"] = u.state_name(u.initial());
  j["accepting"] = names_json(u.state_names(), u.accepting());
  j["transitions"] = Json::array();
  for (const auto& t : h.guarded_transitions()) {
    Json x = {{"from", u.state_name(t.from)}, {"label", label_name(h.alphabet(), t.label)}, {"to", u.state_name(t.to)}};
    if (t.guard) x["guard"] = *t.guard;
    j["transitions"].push_back(std::move(x));
  }
  j["guards"] = Json::object();
  for (const auto& [name, guard] : h.guards()) j["guards"][name] = guard_to_json(guard);
  return j;
}

Json guard_to_json(const GuardAutomaton& g) {
  switch (g.kind()) {
    case GuardKind::Regular:
      return automaton_to_json(g.regular());
    case GuardKind::Vass:
      return vass_to_json(g.vass());
    case GuardKind::Nested:
      break;
  }
  return hcs_to_json(g.nested(), "hcs");
}

GameModel game_from_json(const Json& j) {
  Hcs hcs = hcs_from_json(j, true);
  const auto& names = hcs.underlying().state_names();
  Names index(names, "state");
  const Json& owner_json = j.at("owner");
  if (!owner_json.is_object()) throw InputError("owner must map every state to 0 or 1");
  std::vector<int> owner(names.size(), -1);
  for (const auto& [name, value] : owner_json.items()) {
    if (!value.is_number_unsigned() || value.get<unsigned>() > 1) throw InputError("owner values must be 0 or 1");
    owner[index(name)] = static_cast<int>(value.get<unsigned>());
  }
  std::vector<Player> players;
  for (std::size_t q = 0; q < names.size(); ++q) {
    if (owner[q] < 0) throw InputError("owner missing for state \"" + names[q] + "\"");
    players.push_back(owner[q] == 0 ? Player::P0 : Player::P1);
  }
  const Json& obj = j.at("objective");
  check_keys(obj, {"kind", "states"}, {}, "objective");
  const std::string kind = string_field(obj, "kind");
  if (kind != "reach" && kind != "safe") throw InputError("objective kind must be \"reach\" or \"safe\"");
  Objective objective{kind == "reach" ? ObjectiveKind::Reach : ObjectiveKind::Safe,
                      lookup_all(index, strings(obj.at("states"), "objective states"))};
  std::sort(objective.states.begin(), objective.states.end());
  objective.states.erase(std::unique(objective.states.begin(), objective.states.end()), objective.states.end());
  GameModel model{std::move(hcs), std::move(players), std::move(objective)};
  model.game();  // validation
  return model;
}

Json game_to_json(const GameModel& m) {
  Json j = hcs_to_json(m.hcs, "game");
  const auto& names = m.hcs.underlying().state_names();
  j["owner"] = Json::object();
  for (std::size_t q = 0; q < names.size(); ++q) j["owner"][names[q]] = static_cast<int>(m.owner[q]);
  j["objective"] = {{"kind", m.objective.kind == ObjectiveKind::Reach ? "reach" : "safe"},
                    {"states", names_json(names, m.objective.states)}};
  return j;
}

// ---- countdown and 2cm ----------------------------------------------------

CountdownGame countdown_from_json(const Json& j) {
  check_keys(j, {"type", "states", "initial", "target", "edges"}, {}, "countdown");
  CountdownGame g;
  g.states = strings(j.at("states"), "states");
  Names names(g.states, "state");
  g.initial = names(string_field(j, "initial"));
  g.target = unsigned_field(j, "target");
  if (!j.at("edges").is_array()) throw InputError("edges must be an array");
  for (const auto& e : j.at("edges")) {
    check_keys(e, {"from", "weight", "to"}, {}, "countdown edge");
    g.edges.push_back({names(string_field(e, "from")), unsigned_field(e, "weight"), names(string_field(e, "to"))});
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) throw InputError("duplicate countdown edge");
  g.validate();
  return g;
}

Json countdown_to_json(const CountdownGame& g) {
  Json j;
  j["type"] = "countdown";
  j["states"] = g.states;
  j["initial"] = g.states.at(g.initial);
  j["target"] = g.target;
  j["edges"] = Json::array();
  std::vector<CountdownEdge> edges = g.edges;
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    j["edges"].push_back({{"from", g.states.at(e.from)}, {"weight", e.weight}, {"to", g.states.at(e.to)}});
  }
  return j;
}

bool step_less(const TwoCounterMachine::Step& a, const TwoCounterMachine::Step& b) {
  return std::tie(a.from, a.action, a.to) < std::tie(b.from, b.action, b.to);
}

TwoCounterMachine machine_from_json(const Json& j) {
  check_keys(j, {"type", "states", "transitions", "source", "target"}, {}, "2cm");
  TwoCounterMachine m;
  m.states = strings(j.at("states"), "states");
  Names names(m.states, "state");
  const Alphabet actions = counter_action_alphabet();
  if (!j.at("transitions").is_array()) throw InputError("transitions must be an array");
  for (const auto& t : j.at("transitions")) {
    check_keys(t, {"from", "action", "to"}, {}, "2cm transition");
    const auto action = actions.find(string_field(t, "action"));
    if (!action) throw InputError("unknown counter action \"" + string_field(t, "action") + "\"");
    m.transitions.push_back({names(string_field(t, "from")), static_cast<CounterAction>(*action),
                             names(string_field(t, "to"))});
  }
  std::sort(m.transitions.begin(), m.transitions.end(), step_less);
  m.source = names(string_field(j, "source"));
  m.target = names(string_field(j, "target"));
  m.validate();
  return m;
}

Json machine_to_json(const TwoCounterMachine& m) {
  Json j;
  j["type"] = "2cm";
  j["states"] = m.states;
  j["transitions"] = Json::array();
  auto steps = m.transitions;
  std::sort(steps.begin(), steps.end(), step_less);
  for (const auto& s : steps) {
    j["transitions"].push_back(
        {{"from", m.states.at(s.from)}, {"action", action_name(s.action)}, {"to", m.states.at(s.to)}});
  }
  j["source"] = m.states.at(m.source);
  j["target"] = m.states.at(m.target);
  return j;
}

}  // namespace

GameModel game_model(const HcsGame& game) {
  Objective objective = game.objective();
  std::sort(objective.states.begin(), objective.states.end());
  return {game.hcs(), game.owner(), std::move(objective)};
}

std::string document_type(const Document& doc) {
  struct Visitor {
    std::string operator()(const FiniteAutomaton& a) const { return a.is_deterministic() ? "dfa" : "nfa"; }
    std::string operator()(const Hcs&) const { return "hcs"; }
    std::string operator()(const GameModel&) const { return "game"; }
    std::string operator()(const Vass&) const { return "vass"; }
    std::string operator()(const CountdownGame&) const { return "countdown"; }
    std::string operator()(const TwoCounterMachine&) const { return "2cm"; }
  };
  return std::visit(Visitor{}, doc);
}

Document parse_document(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
      throw InputError("model document needs a string \"type\" field");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "nfa" || type == "dfa") return automaton_from_json(j, type == "dfa");
    if (type == "hcs") return hcs_from_json(j, false);
    if (type == "game") return game_from_json(j);
    if (type == "vass") return vass_from_json(j);
    if (type == "countdown") return countdown_from_json(j);
    if (type == "2cm") return machine_from_json(j);
    throw InputError("unknown document type \"" + type + "\"");
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string serialize_document(const Document& doc) {
  struct Visitor {
    Json operator()(const FiniteAutomaton& a) const { return automaton_to_json(a); }
    Json operator()(const Hcs& h) const { return hcs_to_json(h, "hcs"); }
    Json operator()(const GameModel& g) const { return game_to_json(g); }
    Json operator()(const Vass& v) const { return vass_to_json(v); }
    Json operator()(const CountdownGame& g) const { return countdown_to_json(g); }
    Json operator()(const TwoCounterMachine& m) const { return machine_to_json(m); }
  };
  return std::visit(Visitor{}, doc).dump(2) + "\n";
}

Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_document(text.str());
}

void write_document(const std::string& path, const Document& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << serialize_document(doc);
  if (!out) throw InputError("cannot write " + path);
}

}  // namespace hcs
