#include "corpus_check.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "hcs/cli.hpp"
#include "hcs/io.hpp"

namespace hcs::oracles {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

class Checker {
 public:
  explicit Checker(CorpusReport& report) : report_(report) {}

  void fail(const std::string& file, const std::string& what) { report_.failures.push_back(file + ": " + what); }

  Json call(const std::string& file, const std::vector<std::string>& args) {
    ++report_.cli_calls;
    CliResult r = run_cli(args);
    if (r.code != 0) {
      fail(file, "exit " + std::to_string(r.code) + " for " + args.front() + ": " + r.err);
      return Json();
    }
    try {
      return Json::parse(r.out);
    } catch (const Json::exception&) {
      fail(file, "non-JSON output for " + args.front());
      return Json();
    }
  }

  void words(const std::string& file, const std::string& path, const Alphabet& alphabet,
             const std::function<bool(const Word&)>& library) {
    const std::size_t length = alphabet.size() > 3 ? 2 : 3;
    for (const Word& w : all_words(alphabet.size(), length)) {
      const Json j = call(file, {"member", "--model", path, "--word", format_word(alphabet, w)});
      if (j.is_null()) return;
      if (j.at("accepted").get<bool>() != library(w)) fail(file, "member disagrees on " + format_word(alphabet, w));
    }
  }

  void hcs_checks(const std::string& file, const std::string& path, const Hcs& hcs) {
    words(file, path, hcs.alphabet(), [&](const Word& w) { return member(hcs, w); });
    const Json e = call(file, {"empty", "--model", path});
    if (e.is_null()) return;
    if (hcs.all_guards_finite_state()) {
      if (e.at("empty").get<bool>() != is_empty(hcs)) fail(file, "empty disagrees");
      const Json d = call(file, {"determinize", "--model", path});
      if (!d.is_null() && d.at("states").get<std::size_t>() != determinize_hcs(hcs).num_states()) {
        fail(file, "determinize disagrees");
      }
    } else {
      const auto r = hcs_cover_empty(hcs, EmptinessEngine::OnTheFly);
      const Json expected = r.verdict == EmptinessVerdict::Unknown ? Json() : Json(r.verdict == EmptinessVerdict::Empty);
      if (e.at("empty") != expected) fail(file, "empty disagrees");
    }
  }

  void check(const fs::path& file_path) {
    const std::string file = file_path.filename().string();
    const std::string path = file_path.string();
    ++report_.documents;
    try {
      check_document(file_path, file, path, read_document(path));
    } catch (const std::exception& e) {
      fail(file, std::string("exception: ") + e.what());
    }
  }

  void check_document(const fs::path& file_path, const std::string& file, const std::string& path,
                      const Document& doc) {

    const std::string text = serialize_document(doc);
    if (!(parse_document(text) == doc)) fail(file, "round trip changed the model");
    if (serialize_document(parse_document(text)) != text) fail(file, "serialization not idempotent");
    if (slurp(file_path) != text) fail(file, "file is not in canonical form");
    CliResult fmt = run_cli({"fmt", "--model", path});
    ++report_.cli_calls;
    if (fmt.code != 0 || fmt.out != text) fail(file, "fmt output differs from the library serialization");

    if (auto* a = std::get_if<FiniteAutomaton>(&doc)) {
      words(file, path, a->alphabet(), [&](const Word& w) { return accepts(*a, w); });
      const Json e = call(file, {"empty", "--model", path});
      if (!e.is_null() && e.at("empty").get<bool>() != is_empty(*a)) fail(file, "empty disagrees");
      const Json m = call(file, {"minimize", "--model", path});
      if (!m.is_null() && m.at("states").get<std::size_t>() != minimize(determinize(*a)).num_states()) {
        fail(file, "minimize disagrees");
      }
    } else if (auto* h = std::get_if<Hcs>(&doc)) {
      hcs_checks(file, path, *h);
    } else if (auto* g = std::get_if<GameModel>(&doc)) {
      hcs_checks(file, path, g->hcs);
      const Json s = call(file, {"game", "solve", "--model", path});
      if (!s.is_null() && s.at("winner").get<int>() != static_cast<int>(solve_hcs_game(g->game()).winner)) {
        fail(file, "game winner disagrees");
      }
    } else if (auto* v = std::get_if<Vass>(&doc)) {
      words(file, path, v->alphabet(), [&](const Word& w) { return vass_accepts(*v, w); });
      if (v->mode() == VassMode::Cover) {
        for (StateId q = 0; q < v->num_states(); ++q) {
          for (const char* engine : {"km", "backward"}) {
            const Json c = call(file, {"vass", "cover", "--model", path, "--target", v->state_name(q), "--engine", engine});
            const VassConfig zero{v->initial(), std::vector<Counter>(v->dim(), 0)};
            const bool expected = decide_coverability({*v, zero, {q, zero.counters}}, CoverEngine::Backward).coverable;
            if (!c.is_null() && c.at("coverable").get<bool>() != expected) fail(file, "cover disagrees");
          }
        }
      }
    } else if (auto* c = std::get_if<CountdownGame>(&doc)) {
      const Json s = call(file, {"countdown", "solve", "--model", path});
      if (!s.is_null() && s.at("winner").get<int>() != static_cast<int>(solve_countdown(*c))) {
        fail(file, "countdown winner disagrees");
      }
      const Json r = call(file, {"countdown", "to-hcs", "--model", path, "--normalize"});
      const HcsGame reduced = countdown_to_hcs_game(normalize_countdown(*c));
      if (!r.is_null() && r.at("states").get<std::size_t>() != reduced.hcs().underlying().num_states()) {
        fail(file, "countdown reduction disagrees");
      }
    } else if (auto* m = std::get_if<TwoCounterMachine>(&doc)) {
      const fs::path out = fs::temp_directory_path() / ("hcs_corpus_" + file);
      const Json r = call(file, {"mcm", "to-hcs", "--model", path, "--out", out.string()});
      if (!r.is_null() && slurp(out) != serialize_document(two_cm_to_hcs(*m))) fail(file, "2CM reduction disagrees");
      fs::remove(out);
    }
  }

 private:
  CorpusReport& report_;
};

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

CorpusReport check_corpus(const std::string& dir) {
  CorpusReport report;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Checker checker(report);
  for (const auto& f : files) checker.check(f);
  if (files.empty()) report.failures.push_back(dir + ": no documents");
  return report;
}

}  // namespace hcs::oracles
