#include "hcs/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcs/io.hpp"
#include "hcs/succinct.hpp"

namespace hcs {

namespace {

using Json = nlohmann::ordered_json;

struct GlobalOptions {
  std::size_t cap = kDefaultStateCap;
  std::uint64_t seed = 0;
  bool quiet = false;
};

Json word_json(const Alphabet& alphabet, const Word& word) { return word_names(alphabet, word); }

const Alphabet& document_alphabet(const Document& doc) {
  if (auto* a = std::get_if<FiniteAutomaton>(&doc)) return a->alphabet();
  if (auto* h = std::get_if<Hcs>(&doc)) return h->alphabet();
  if (auto* g = std::get_if<GameModel>(&doc)) return g->hcs.alphabet();
  if (auto* v = std::get_if<Vass>(&doc)) return v->alphabet();
  throw InputError("a " + document_type(doc) + " document has no word semantics");
}

const Hcs* document_hcs(const Document& doc) {
  if (auto* h = std::get_if<Hcs>(&doc)) return h;
  if (auto* g = std::get_if<GameModel>(&doc)) return &g->hcs;
  return nullptr;
}

Word read_word(const Alphabet& alphabet, const std::string& text, const std::string& chars) {
  if (!chars.empty()) return parse_word_chars(alphabet, chars);
  return parse_word(alphabet, text);
}

Json cmd_member(const Document& doc, const Word& word) {
  bool accepted = false;
  if (auto* a = std::get_if<FiniteAutomaton>(&doc)) {
    accepted = accepts(*a, word);
  } else if (auto* v = std::get_if<Vass>(&doc)) {
    accepted = vass_accepts(*v, word);
  } else if (const Hcs* h = document_hcs(doc)) {
    accepted = member(*h, word);
  } else {
    throw InputError("member expects an nfa, dfa, vass, hcs or game document");
  }
  return {{"accepted", accepted}};
}

EmptinessEngine parse_engine(const std::string& name) {
  if (name == "product") return EmptinessEngine::Product;
  if (name == "onthefly") return EmptinessEngine::OnTheFly;
  if (name == "bounded") return EmptinessEngine::Bounded;
  throw InputError("unknown emptiness engine " + name);
}

std::string engine_name(EmptinessEngine e) {
  switch (e) {
    case EmptinessEngine::Product:
      return "product";
    case EmptinessEngine::OnTheFly:
      return "onthefly";
    case EmptinessEngine::Bounded:
      break;
  }
  return "bounded";
}

std::string verdict_name(EmptinessVerdict v) {
  switch (v) {
    case EmptinessVerdict::Empty:
      return "empty";
    case EmptinessVerdict::Nonempty:
      return "nonempty";
    case EmptinessVerdict::Unknown:
      break;
  }
  return "unknown";
}

struct EmptyOptions {
  std::string engine;
  std::size_t max_length = 8;
  bool non_dying = false;
};

Json cmd_empty(const Document& doc, const EmptyOptions& opt, std::size_t cap) {
  Json out;
  if (auto* a = std::get_if<FiniteAutomaton>(&doc)) {
    out["empty"] = is_empty(*a);
    if (auto w = shortest_accepted(*a)) out["witness"] = word_json(a->alphabet(), *w);
    return out;
  }
  if (auto* v = std::get_if<Vass>(&doc)) {
    if (v->mode() != VassMode::Cover) throw InputError("emptiness of a Reach-mode VASS is not supported");
    std::size_t nodes = 0;
    for (StateId f : v->accepting()) {
      const VassConfig source{v->initial(), std::vector<Counter>(v->dim(), 0)};
      const auto r = decide_coverability({*v, source, {f, std::vector<Counter>(v->dim(), 0)}}, CoverEngine::Backward, cap);
      nodes += r.nodes;
      if (r.coverable) {
        out["empty"] = false;
        out["witness"] = word_json(v->alphabet(), witness_word(*v, r.witness));
        out["nodes_explored"] = nodes;
        return out;
      }
    }
    out["empty"] = true;
    out["nodes_explored"] = nodes;
    return out;
  }
  const Hcs* h = document_hcs(doc);
  if (!h) throw InputError("empty expects an nfa, dfa, vass, hcs or game document");
  if (opt.engine.empty() && h->all_guards_finite_state()) {
    out["empty"] = is_empty(*h, cap);
    if (auto w = find_accepted_word(*h, cap)) out["witness"] = word_json(h->alphabet(), *w);
    return out;
  }
  const EmptinessResult r = hcs_cover_empty(*h, parse_engine(opt.engine.empty() ? "onthefly" : opt.engine),
                                            opt.non_dying, opt.max_length, cap);
  if (r.verdict == EmptinessVerdict::Unknown) {
    out["empty"] = nullptr;
  } else {
    out["empty"] = r.verdict == EmptinessVerdict::Empty;
  }
  out["verdict"] = verdict_name(r.verdict);
  out["engine"] = engine_name(r.engine);
  if (r.engine != EmptinessEngine::Bounded) out["nodes_explored"] = r.nodes;
  if (r.witness) out["witness"] = word_json(h->alphabet(), *r.witness);
  if (r.verdict == EmptinessVerdict::Unknown) out["unknown_up_to"] = opt.max_length;
  return out;
}

FiniteAutomaton as_automaton(const Document& doc, std::size_t cap) {
  if (auto* a = std::get_if<FiniteAutomaton>(&doc)) return *a;
  if (const Hcs* h = document_hcs(doc)) return determinize_hcs(*h, cap);
  throw InputError("expected an nfa, dfa, hcs or game document");
}

FiniteAutomaton as_dfa(const Document& doc, std::size_t cap) {
  if (auto* a = std::get_if<FiniteAutomaton>(&doc)) return determinize(*a, cap);
  return as_automaton(doc, cap);
}

Json automaton_summary(const FiniteAutomaton& a) {
  return {{"states", a.num_states()}, {"transitions", a.transitions().size()}};
}

Json cmd_game_solve(const GameModel& model, std::size_t cap) {
  const HcsGame game = model.game();
  const Arena arena = build_arena(game, cap);
  const GameSolution sol = solve_arena(arena);
  const Alphabet& alphabet = game.hcs().alphabet();
  auto strategy = [&](const std::vector<std::uint32_t>& choice) {
    Json edges = Json::array();
    for (std::size_t v = 0; v < choice.size(); ++v) {
      if (choice[v] == kNoEdge) continue;
      const ArenaEdge& e = arena.edge(choice[v]);
      edges.push_back(Json::array({e.from, label_name(alphabet, e.label), e.to}));
    }
    return edges;
  };
  const ArenaStats stats = sol.stats;
  return {{"winner", static_cast<int>(sol.winner)},
          {"region0", sol.region0_size()},
          {"region1", arena.num_vertices() - sol.region0_size()},
          {"vertices", stats.vertices},
          {"edges", stats.edges},
          {"vertex_bound", stats.vertex_bound},
          {"edge_bound", stats.edge_bound},
          {"strategy0", strategy(sol.strategy0)},
          {"strategy1", strategy(sol.strategy1)}};
}

CoverEngine parse_cover_engine(const std::string& name) {
  if (name == "km") return CoverEngine::KarpMiller;
  if (name == "backward") return CoverEngine::Backward;
  throw InputError("unknown coverability engine " + name);
}

Json report_json(const SuccinctnessReport& r) {
  return {{"k", r.k},
          {"primes", r.primes},
          {"hcs_size", r.hcs_size},
          {"determinized_states", r.determinized_states},
          {"minimal_dfa_states", r.minimal_dfa_states},
          {"product_of_primes", r.product_of_primes},
          {"bound_2k", r.bound_2k},
          {"chain_holds", r.chain_holds()}};
}

template <class T>
const T& expect(const Document& doc, const char* type) {
  if (auto* x = std::get_if<T>(&doc)) return *x;
  throw InputError(std::string("expected a ") + type + " document, got " + document_type(doc));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"History-constrained systems toolkit", "hcstool"};
  app.fallthrough();
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--max-states", global.cap, "Cap on states, vertices or tree nodes")->capture_default_str();
  app.add_option("--seed", global.seed, "Seed for generators");
  app.add_flag("--quiet", global.quiet, "Suppress diagnostics");

  std::string model, model_b, out_path, word, word_chars, target, counters, cover_engine = "backward";
  EmptyOptions empty_opt;
  bool normalize = false, table = false;
  std::size_t k = 0;

  auto* member_cmd = app.add_subcommand("member", "Membership of a word");
  member_cmd->add_option("--model", model)->required();
  member_cmd->add_option("--word", word, "Whitespace-separated symbols");
  member_cmd->add_option("--word-chars", word_chars, "One symbol per character");

  auto* empty_cmd = app.add_subcommand("empty", "Language emptiness");
  empty_cmd->add_option("--model", model)->required();
  empty_cmd->add_option("--engine", empty_opt.engine)->check(CLI::IsMember({"product", "onthefly", "bounded"}));
  empty_cmd->add_option("--max-len", empty_opt.max_length)->capture_default_str();
  empty_cmd->add_flag("--non-dying", empty_opt.non_dying, "Assert that VASS guards never die");

  auto* det_cmd = app.add_subcommand("determinize", "Subset or tuple construction");
  det_cmd->add_option("--model", model)->required();
  det_cmd->add_option("--out", out_path);

  auto* min_cmd = app.add_subcommand("minimize", "Minimal DFA");
  min_cmd->add_option("--model", model)->required();
  min_cmd->add_option("--out", out_path);

  auto* equiv_cmd = app.add_subcommand("equiv", "Language equivalence");
  equiv_cmd->add_option("--a", model)->required();
  equiv_cmd->add_option("--b", model_b)->required();

  auto* game_cmd = app.add_subcommand("game", "HCS games");
  game_cmd->require_subcommand(1);
  auto* game_solve = game_cmd->add_subcommand("solve", "Solve an HCS game");
  game_solve->add_option("--model", model)->required();

  auto* countdown_cmd = app.add_subcommand("countdown", "Countdown games");
  countdown_cmd->require_subcommand(1);
  auto* countdown_solve = countdown_cmd->add_subcommand("solve", "Solve a countdown game");
  countdown_solve->add_option("--model", model)->required();
  auto* countdown_hcs = countdown_cmd->add_subcommand("to-hcs", "Reduce to an HCS game");
  countdown_hcs->add_option("--model", model)->required();
  countdown_hcs->add_option("--out", out_path);
  countdown_hcs->add_flag("--normalize", normalize, "Normalize weights and target first");

  auto* mcm_cmd = app.add_subcommand("mcm", "Two-counter machines");
  mcm_cmd->require_subcommand(1);
  auto* mcm_hcs = mcm_cmd->add_subcommand("to-hcs", "Reduce to an HCS with Reach-VASS guards");
  mcm_hcs->add_option("--model", model)->required();
  mcm_hcs->add_option("--out", out_path);

  auto* vass_cmd = app.add_subcommand("vass", "VASS analyses");
  vass_cmd->require_subcommand(1);
  auto* vass_cover = vass_cmd->add_subcommand("cover", "Coverability of a target state");
  vass_cover->add_option("--model", model)->required();
  vass_cover->add_option("--target", target)->required();
  vass_cover->add_option("--counters", counters, "Target counters, whitespace-separated (default 0)");
  vass_cover->add_option("--engine", cover_engine)->check(CLI::IsMember({"km", "backward"}))->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Benchmarks");
  bench_cmd->require_subcommand(1);
  auto* bench_primes = bench_cmd->add_subcommand("primes", "Succinctness family for k = 1..K");
  bench_primes->add_option("--k", k)->required();
  bench_primes->add_flag("--table", table, "Print an aligned text table instead of JSON");

  auto* fmt_cmd = app.add_subcommand("fmt", "Canonicalize a model document");
  fmt_cmd->add_option("--model", model)->required();
  fmt_cmd->add_option("--out", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  auto diagnose = [&](const std::string& kind, const char* what) {
    if (!global.quiet) err << "hcstool: " << kind << ": " << what << '\n';
  };
  const std::size_t cap = global.cap;
  try {
    Json verdict;
    if (member_cmd->parsed()) {
      const Document doc = read_document(model);
      verdict = cmd_member(doc, read_word(document_alphabet(doc), word, word_chars));
    } else if (empty_cmd->parsed()) {
      verdict = cmd_empty(read_document(model), empty_opt, cap);
    } else if (det_cmd->parsed() || min_cmd->parsed()) {
      const Document doc = read_document(model);
      FiniteAutomaton result = det_cmd->parsed() ? as_dfa(doc, cap) : minimize(as_dfa(doc, cap));
      if (!out_path.empty()) write_document(out_path, result);
      verdict = automaton_summary(result);
    } else if (equiv_cmd->parsed()) {
      const FiniteAutomaton a = as_automaton(read_document(model), cap);
      const FiniteAutomaton b = as_automaton(read_document(model_b), cap);
      const auto diff = find_difference(a, b, cap);
      verdict["equivalent"] = !diff.has_value();
      if (diff) verdict["witness"] = word_json(a.alphabet(), *diff);
    } else if (game_solve->parsed()) {
      verdict = cmd_game_solve(expect<GameModel>(read_document(model), "game"), cap);
    } else if (countdown_solve->parsed()) {
      const Document doc = read_document(model);
      verdict["winner"] = static_cast<int>(solve_countdown(expect<CountdownGame>(doc, "countdown"), cap));
    } else if (countdown_hcs->parsed()) {
      CountdownGame game = expect<CountdownGame>(read_document(model), "countdown");
      if (normalize) game = normalize_countdown(game);
      const HcsGame reduced = countdown_to_hcs_game(game);
      if (!out_path.empty()) write_document(out_path, game_model(reduced));
      verdict = {{"states", reduced.hcs().underlying().num_states()},
                 {"guards", reduced.hcs().guard_count()},
                 {"normalized", normalize}};
    } else if (mcm_hcs->parsed()) {
      const Hcs hcs = two_cm_to_hcs(expect<TwoCounterMachine>(read_document(model), "2cm"));
      if (!out_path.empty()) write_document(out_path, hcs);
      verdict = {{"states", hcs.underlying().num_states()}, {"guards", hcs.guard_count()}};
    } else if (vass_cover->parsed()) {
      const Vass vass = expect<Vass>(read_document(model), "vass");
      const auto state = vass.find_state(target);
      if (!state) throw InputError("unknown target state \"" + target + "\"");
      VassConfig goal{*state, std::vector<Counter>(vass.dim(), 0)};
      if (!counters.empty()) {
        std::istringstream in(counters);
        std::vector<Counter> values;
        Counter x = 0;
        while (in >> x) values.push_back(x);
        if (!in.eof() || values.size() != vass.dim()) throw InputError("--counters needs one integer per dimension");
        goal.counters = std::move(values);
      }
      const VassConfig source{vass.initial(), std::vector<Counter>(vass.dim(), 0)};
      const auto r = decide_coverability({vass, source, goal}, parse_cover_engine(cover_engine), cap);
      verdict["coverable"] = r.coverable;
      if (r.coverable) verdict["witness"] = word_json(vass.alphabet(), witness_word(vass, r.witness));
      verdict["engine"] = cover_engine;
      verdict["nodes_explored"] = r.nodes;
    } else if (bench_primes->parsed()) {
      std::vector<SuccinctnessReport> reports;
      for (std::size_t i = 1; i <= k; ++i) reports.push_back(verify_succinctness(i));
      if (k == 0) verify_succinctness(0);
      if (table) {
        out << format_report_table(reports);
        return kExitOk;
      }
      verdict["reports"] = Json::array();
      for (const auto& r : reports) verdict["reports"].push_back(report_json(r));
    } else if (fmt_cmd->parsed()) {
      const Document doc = read_document(model);
      if (out_path.empty()) {
        out << serialize_document(doc);
      } else {
        write_document(out_path, doc);
      }
      return kExitOk;
    }
    out << verdict.dump() << '\n';
    return kExitOk;
  } catch (const ResourceError& e) {
    diagnose("resource limit", e.what());
    return kExitResource;
  } catch (const InputError& e) {
    diagnose("input error", e.what());
    return kExitInput;
  } catch (const ContractError& e) {
    diagnose("contract error", e.what());
    return kExitInput;
  }
}

}  // namespace hcs
