#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "hcs/vass_guards.hpp"
#include "vass_oracles.hpp"

using namespace hcs;

namespace {

Word w(const Alphabet& alphabet, const std::string& text) { return parse_word(alphabet, text); }

// Replays a coverability witness and returns the final configuration.
std::optional<VassConfig> replay(const Vass& vass, VassConfig c, const std::vector<std::size_t>& witness) {
  for (std::size_t t : witness) {
    if (vass.transitions()[t].from != c.state) return std::nullopt;
    auto next = fire(c, vass.transitions()[t]);
    if (!next) return std::nullopt;
    c = *next;
  }
  return c;
}

Vass simple_cover(bool with_increment) {
  Alphabet alphabet({"a", "b"});
  std::vector<VassTransition> ts{{0, 1, {-1}, 1}};
  if (with_increment) ts.push_back({0, 0, {1}, 0});
  return Vass(alphabet, 1, {"q", "t"}, 0, {1}, ts, VassMode::Cover);
}

std::string chars(const Alphabet& alphabet, const Word& word) {
  std::string s;
  for (SymbolId a : word) s += alphabet.symbol(a);
  return s;
}

}  // namespace

TEST_CASE("vass_accepts on the a^n b^m language and a Reach guard") {
  const Vass v = fixtures::an_bm_vass();
  CHECK(vass_accepts(v, w(v.alphabet(), "a a b")));
  CHECK_FALSE(vass_accepts(v, w(v.alphabet(), "a b b")));
  CHECK(vass_accepts(v, Word{}));
  for (const Word& word : all_words(2, 8)) {
    CHECK(vass_accepts(v, word) == oracles::in_an_bm(chars(v.alphabet(), word)));
  }
  const Hcs zero_test = two_cm_to_hcs(fixtures::zero_test_machine());
  const Vass& g1 = zero_test.guard(*zero_test.find_guard("G1")).vass();
  CHECK(vass_accepts(g1, w(g1.alphabet(), "inc1 dec1")));
  CHECK_FALSE(vass_accepts(g1, w(g1.alphabet(), "inc1")));
  CHECK_FALSE(vass_accepts(g1, w(g1.alphabet(), "dec1 inc1")));
}

TEST_CASE("Cover acceptance is monotone in the start counters") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> unit(-1, 1);
  std::uniform_int_distribution<int> small(0, 2);
  Alphabet alphabet({"a", "b"});
  for (int round = 0; round < 60; ++round) {
    std::vector<VassTransition> ts;
    std::set<std::tuple<StateId, SymbolId, StateId, Counter>> seen;
    for (int i = 0; i < 6; ++i) {
      StateId from = static_cast<StateId>(small(rng)), to = static_cast<StateId>(small(rng));
      SymbolId label = small(rng) == 2 ? kEpsilon : static_cast<SymbolId>(small(rng) % 2);
      Counter u = unit(rng);
      if (seen.insert({from, label, to, u}).second) ts.push_back({from, label, {u}, to});
    }
    const Vass v(alphabet, 1, {"x", "y", "z"}, 0, {2}, ts, VassMode::Cover);
    for (const Word& word : all_words(2, 4)) {
      for (Counter x = 0; x < 3; ++x) {
        for (StateId q = 0; q < 3; ++q) {
          if (!vass_accepts_from(v, {q, {x}}, word)) continue;
          CHECK(vass_accepts_from(v, {q, {x + 1}}, word));
          CHECK(vass_accepts_from(v, {q, {x + 3}}, word));
        }
      }
    }
  }
}

TEST_CASE("hcs_vass_member on the delimited star") {
  const Hcs star = delimited_star_hcs(fixtures::an_bm_vass());
  const Alphabet& s = star.alphabet();
  CHECK(hcs_vass_member(star, w(s, "$")));
  CHECK(hcs_vass_member(star, w(s, "$ a a b $ a b $")));
  CHECK_FALSE(hcs_vass_member(star, w(s, "$ a b b $")));
  CHECK_FALSE(hcs_vass_member(star, w(s, "$ b a $")));
  CHECK(hcs_vass_member(star, w(s, "$ a b $ $")));
  CHECK_FALSE(hcs_vass_member(star, Word{}));
}

TEST_CASE("delimited star matches the definition on all words up to 6") {
  const Hcs star = delimited_star_hcs(fixtures::an_bm_vass());
  const Alphabet& s = star.alphabet();
  REQUIRE(s.symbols() == std::vector<std::string>{"a", "b", "$"});
  std::size_t accepted = 0;
  for (const Word& word : all_words(3, 6)) {
    const bool expected = oracles::in_delimited_star(chars(s, word));
    accepted += expected;
    CHECK(hcs_vass_member(star, word) == expected);
  }
  CHECK(accepted > 20);
  CHECK_THROWS_AS(delimited_star_hcs(Vass(Alphabet({"$"}), 1, {"q"}, 0, {0}, {}, VassMode::Cover)), InputError);
}

TEST_CASE("delimited star structure") {
  const Hcs star = delimited_star_hcs(fixtures::an_bm_vass());
  CHECK(star.underlying().num_states() == 3);
  CHECK(star.guard_count() == 1);
  const Vass& g = star.guard(0).vass();
  CHECK(g.num_states() == 3);
  CHECK(g.state_name(g.initial()) == "p0");
  CHECK_FALSE(g.is_deterministic());
}

TEST_CASE("coverability examples") {
  for (CoverEngine engine : {CoverEngine::KarpMiller, CoverEngine::Backward}) {
    const Vass yes = simple_cover(true);
    auto r = decide_coverability({yes, {0, {0}}, {1, {0}}}, engine);
    REQUIRE(r.coverable);
    CHECK(witness_word(yes, r.witness) == w(yes.alphabet(), "a b"));
    CHECK_FALSE(decide_coverability({simple_cover(false), {0, {0}}, {1, {0}}}, engine).coverable);
    CHECK(decide_coverability({yes, {0, {}}, {0, {5}}}, engine).coverable);
    CHECK(decide_coverability({yes, {0, {}}, {1, {1}}}, engine).coverable);
    CHECK_THROWS_AS(decide_coverability({yes, {0, {0, 0}}, {1, {0}}}, engine), InputError);
  }
  const Vass reach(Alphabet({"a"}), 1, {"q"}, 0, {0}, {}, VassMode::Reach);
  CHECK_THROWS_AS(decide_coverability({reach, {0, {0}}, {0, {0}}}, CoverEngine::Backward), InputError);
  const Vass pump(Alphabet({"a"}), 1, {"q"}, 0, {0}, {{0, 0, {1}, 0}}, VassMode::Cover);
  CHECK_THROWS_AS(decide_coverability({pump, {0, {0}}, {0, {100}}}, CoverEngine::Backward, 10), ResourceError);
}

TEST_CASE("coverability engines agree with bounded brute force") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<Counter> goal(0, 2);
  std::size_t positive = 0;
  for (int round = 0; round < 300; ++round) {
    const std::size_t states = 1 + round % 4;
    const Vass v = oracles::random_cover_vass(rng, states, 2, 2 + round % 6);
    const VassConfig source{0, {0, 0}};
    const VassConfig target{static_cast<StateId>(states - 1), {goal(rng), goal(rng)}};
    const bool brute = oracles::brute_coverable(v, source, target);
    const auto km = decide_coverability({v, source, target}, CoverEngine::KarpMiller);
    const auto bw = decide_coverability({v, source, target}, CoverEngine::Backward);
    INFO("round " << round);
    CHECK(km.coverable == brute);
    CHECK(bw.coverable == brute);
    positive += brute;
    for (const auto* r : {&km, &bw}) {
      if (!r->coverable) continue;
      auto end = replay(v, source, r->witness);
      REQUIRE(end);
      CHECK(covered_by(target, *end));
    }
  }
  CHECK(positive > 30);
  CHECK(positive < 270);
}

TEST_CASE("Karp-Miller witness through an accelerated branch") {
  // Two a-pumps then a b-drain of three.
  Alphabet alphabet({"a", "b"});
  const Vass v(alphabet, 1, {"p", "q", "t"}, 0, {2},
               {{0, 0, {1}, 0}, {0, 1, {0}, 1}, {1, 1, {-3}, 2}}, VassMode::Cover);
  auto r = decide_coverability({v, {0, {0}}, {2, {0}}}, CoverEngine::KarpMiller);
  REQUIRE(r.coverable);
  auto end = replay(v, {0, {0}}, r.witness);
  REQUIRE(end);
  CHECK(end->state == 2);
  CHECK(witness_word(v, r.witness) == w(alphabet, "a a a b b"));
}

TEST_CASE("product_vass on non-dying fixtures") {
  for (const auto& [name, hcs] : fixtures::non_dying_vass_fixtures()) {
    INFO(name);
    const Vass product = product_vass(hcs, true);
    CHECK(product.mode() == VassMode::Cover);
    CHECK(product.unary_size() <= product_size_bound(hcs));
    for (const Word& word : all_words(hcs.alphabet().size(), 6)) {
      CHECK(vass_accepts(product, word) == hcs_vass_member(hcs, word));
    }
    CHECK_THROWS_AS(product_vass(hcs, false), InputError);
  }
}

TEST_CASE("product_vass with no guards adds t") {
  const auto fixtures = fixtures::non_dying_vass_fixtures();
  const Hcs& plain = fixtures.back().second;
  REQUIRE(plain.guard_count() == 0);
  const Vass product = product_vass(plain, true);
  CHECK(product.dim() == 1);
  CHECK(product.num_states() == plain.underlying().num_states() + 1);
  CHECK(product.transitions().size() == plain.underlying().transitions().size() + plain.underlying().accepting().size());
  CHECK(product.state_name(product.accepting().front()) == "t");
}

TEST_CASE("product_vass rejects unsupported guards") {
  const Hcs zero_test = two_cm_to_hcs(fixtures::zero_test_machine());
  CHECK_THROWS_AS(product_vass(zero_test, true), InputError);
  const Hcs star = delimited_star_hcs(fixtures::an_bm_vass());
  CHECK_THROWS_AS(product_vass(star, true), InputError);
}

TEST_CASE("emptiness engines") {
  for (const auto& [name, hcs] : fixtures::non_dying_vass_fixtures()) {
    INFO(name);
    const auto product = hcs_cover_empty(hcs, EmptinessEngine::Product, true);
    const auto fly = hcs_cover_empty(hcs, EmptinessEngine::OnTheFly);
    CHECK(product.verdict == fly.verdict);
    CHECK(product.verdict != EmptinessVerdict::Unknown);
    CHECK((product.verdict == EmptinessVerdict::Empty) == (name == "never_accepting"));
    for (const auto* r : {&product, &fly}) {
      if (r->witness) CHECK(hcs_vass_member(hcs, *r->witness));
    }
  }
  const Hcs dying = fixtures::dying_guard_empty();
  CHECK(hcs_cover_empty(dying, EmptinessEngine::OnTheFly).verdict == EmptinessVerdict::Empty);
  CHECK(hcs_cover_empty(dying, EmptinessEngine::Product, true).verdict == EmptinessVerdict::Empty);
  CHECK_THROWS_AS(hcs_cover_empty(dying, EmptinessEngine::Product, false), InputError);
  CHECK(hcs_cover_empty(dying, EmptinessEngine::Bounded).verdict == EmptinessVerdict::Unknown);

  const Hcs star = delimited_star_hcs(fixtures::an_bm_vass());
  for (auto engine : {EmptinessEngine::Product, EmptinessEngine::OnTheFly, EmptinessEngine::Bounded}) {
    const auto r = hcs_cover_empty(star, engine);
    CHECK(r.verdict == EmptinessVerdict::Nonempty);
    REQUIRE(r.witness);
    CHECK(*r.witness == w(star.alphabet(), "$"));
  }
}

TEST_CASE("on-the-fly emptiness on random dying guards") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> unit(-1, 1);
  Alphabet alphabet({"a", "b"});
  std::size_t empty = 0;
  for (int round = 0; round < 150; ++round) {
    std::vector<VassTransition> gt;
    for (StateId q = 0; q < 2; ++q) {
      for (SymbolId a = 0; a < 2; ++a) {
        if (coin(rng) == 0) continue;
        gt.push_back({q, a, {unit(rng), unit(rng)}, static_cast<StateId>(coin(rng) % 2)});
      }
    }
    const Vass guard(alphabet, 2, {"g0", "g1"}, 0, {static_cast<StateId>(round % 2)}, gt, VassMode::Cover);
    HcsBuilder b(alphabet);
    for (int i = 0; i < 3; ++i) b.add_state("s" + std::to_string(i), i == 2);
    for (int i = 0; i < 6; ++i) {
      StateId from = static_cast<StateId>(coin(rng) % 3), to = static_cast<StateId>(coin(rng) % 3);
      SymbolId label = coin(rng) == 0 ? kEpsilon : static_cast<SymbolId>(coin(rng) % 2);
      b.add_transition(from, label, to, coin(rng) < 2 ? std::optional<std::string>("G") : std::nullopt);
    }
    b.add_guard("G", guard);
    Hcs hcs = [&] {
      try {
        return b.build();
      } catch (const InputError&) {
        return fixtures::dying_guard_empty();  // one transition drew two guards
      }
    }();
    INFO("round " << round);
    const auto fly = hcs_cover_empty(hcs, EmptinessEngine::OnTheFly);
    const auto bounded = find_accepted_word(hcs, kDefaultStateCap, 8);
    if (fly.verdict == EmptinessVerdict::Empty) {
      ++empty;
      CHECK_FALSE(bounded);
    } else {
      REQUIRE(fly.verdict == EmptinessVerdict::Nonempty);
      if (fly.witness) CHECK(hcs_vass_member(hcs, *fly.witness));
      CHECK(bounded);
    }
  }
  CHECK(empty > 10);
  CHECK(empty < 140);
}

TEST_CASE("product and on-the-fly agree on random non-dying guards") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> coin(0, 3);
  Alphabet alphabet({"a", "b"});
  for (int round = 0; round < 100; ++round) {
    std::vector<VassTransition> gt;
    for (StateId q = 0; q < 2; ++q) {
      for (SymbolId a = 0; a < 2; ++a) {
        if (coin(rng) == 0) continue;
        gt.push_back({q, a, {coin(rng) % 2}, static_cast<StateId>(coin(rng) % 2)});
      }
    }
    const Vass guard(alphabet, 1, {"g0", "g1"}, 0, {1}, gt, VassMode::Cover);
    HcsBuilder b(alphabet);
    for (int i = 0; i < 3; ++i) b.add_state("s" + std::to_string(i), i == 2);
    std::set<std::tuple<StateId, SymbolId, StateId>> used;
    for (int i = 0; i < 6; ++i) {
      StateId from = static_cast<StateId>(coin(rng) % 3), to = static_cast<StateId>(coin(rng) % 3);
      SymbolId label = static_cast<SymbolId>(coin(rng) % 2);
      if (!used.insert({from, label, to}).second) continue;
      b.add_transition(from, label, to, coin(rng) < 2 ? std::optional<std::string>("G") : std::nullopt);
    }
    b.add_guard("G", guard);
    const Hcs hcs = b.build();
    INFO("round " << round);
    const Vass product = product_vass(hcs, true);
    CHECK(product.unary_size() <= product_size_bound(hcs));
    for (const Word& word : all_words(2, 5)) CHECK(vass_accepts(product, word) == hcs_vass_member(hcs, word));
    CHECK(hcs_cover_empty(hcs, EmptinessEngine::Product, true).verdict ==
          hcs_cover_empty(hcs, EmptinessEngine::OnTheFly).verdict);
  }
}

TEST_CASE("two_cm_to_hcs examples") {
  const auto fixtures = oracles::small_2cm_fixtures();
  const Hcs to_p = two_cm_to_hcs(fixtures[0]);
  const Alphabet& a = to_p.alphabet();
  CHECK(hcs_vass_member(to_p, w(a, "zero1 zero2")));
  CHECK(hcs_vass_member(to_p, w(a, "inc1 dec1 zero1 zero2")));
  CHECK_FALSE(hcs_vass_member(to_p, w(a, "inc1 zero1 zero2")));
  auto found = bounded_reach_empty(to_p, 4);
  CHECK(found.nonempty);
  CHECK(found.witness == w(a, "zero1 zero2"));

  const Hcs to_q = two_cm_to_hcs(fixtures[1]);
  auto unknown = bounded_reach_empty(to_q, 6);
  CHECK_FALSE(unknown.nonempty);
  CHECK(unknown.max_length == 6);
  CHECK(hcs_cover_empty(to_q, EmptinessEngine::OnTheFly, false, 6).verdict == EmptinessVerdict::Unknown);

  TwoCounterMachine bad = fixtures[0];
  bad.transitions.push_back({0, CounterAction::Inc1, 0});
  CHECK_THROWS_AS(two_cm_to_hcs(bad), InputError);
  bad.transitions.pop_back();
  bad.transitions.push_back({0, CounterAction::Inc1, 9});
  CHECK_THROWS_AS(two_cm_to_hcs(bad), InputError);
}

TEST_CASE("bounded search with max length 0") {
  HcsBuilder b(fixtures::ab());
  b.add_state("q", true);
  auto r = bounded_reach_empty(b.build(), 0);
  CHECK(r.nonempty);
  CHECK(r.witness.empty());
}

TEST_CASE("2CM reduction matches direct simulation") {
  std::size_t nonempty = 0;
  for (const auto& machine : oracles::small_2cm_fixtures()) {
    const Hcs hcs = two_cm_to_hcs(machine);
    const auto expected = oracles::two_cm_language(machine, 6);
    CHECK(oracles::hcs_language(hcs, 6) == expected);
    nonempty += !expected.empty();
  }
  CHECK(nonempty > 5);
}

TEST_CASE("zero-testing machine matches the golden structure") {
  const Hcs hcs = two_cm_to_hcs(fixtures::zero_test_machine());
  CHECK(oracles::render_vass_hcs(hcs) == oracles::read_golden("zero_test_hcs.txt"));
  for (const auto& [name, guard] : hcs.guards()) {
    CHECK(guard.vass().is_deterministic());
    CHECK(guard.vass().is_complete());
  }
  const auto r = bounded_reach_empty(hcs, 4);
  REQUIRE(r.nonempty);
  CHECK(r.witness == w(hcs.alphabet(), "zero2 zero1 zero1 zero2"));
}
