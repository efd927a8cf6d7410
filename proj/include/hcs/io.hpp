#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hcs/automaton.hpp"
#include "hcs/games.hpp"
#include "hcs/hcs.hpp"
#include "hcs/vass.hpp"
#include "hcs/vass_guards.hpp"

namespace hcs {

// Game document before owner-aware completion.
struct GameModel {
  Hcs hcs;
  std::vector<Player> owner;
  Objective objective;  // states sorted

  HcsGame game() const { return HcsGame(hcs, owner, objective); }
  bool operator==(const GameModel&) const = default;
};

GameModel game_model(const HcsGame& game);

// One JSON model file. "nfa" and "dfa" both load as FiniteAutomaton; a "dfa"
// document must be deterministic.
using Document = std::variant<FiniteAutomaton, Hcs, GameModel, Vass, CountdownGame, TwoCounterMachine>;

std::string document_type(const Document& doc);

// Throws InputError on malformed JSON, unknown or missing fields, unknown
// names, or model validation failures.
Document parse_document(std::string_view text);
// Canonical form: fixed key order, sorted edges, two-space indent, final newline.
std::string serialize_document(const Document& doc);

// Throws InputError when the file cannot be read or written.
Document read_document(const std::string& path);
void write_document(const std::string& path, const Document& doc);

}  // namespace hcs
