#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hcs {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

// Label of an ε-transition. Never a valid alphabet index.
inline constexpr SymbolId kEpsilon = std::numeric_limits<SymbolId>::max();
inline constexpr std::string_view kEpsilonName = "eps";

using Word = std::vector<SymbolId>;

class Alphabet {
 public:
  Alphabet() = default;
  // Throws InputError on empty, duplicate, or reserved ("eps") names.
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& symbol(SymbolId id) const { return symbols_.at(id); }
  std::optional<SymbolId> find(std::string_view name) const;
  // Throws InputError naming the symbol when absent.
  SymbolId require(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  // Copy with one more symbol appended.
  Alphabet extended(std::string symbol) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

// Symbol names, or "eps" for kEpsilon.
std::string label_name(const Alphabet& alphabet, SymbolId label);

Word parse_word(const Alphabet& alphabet, std::span<const std::string> symbols);
// Whitespace-separated symbol names.
Word parse_word(const Alphabet& alphabet, std::string_view text);
// One symbol per character; every alphabet symbol must be a single character.
Word parse_word_chars(const Alphabet& alphabet, std::string_view text);
std::vector<std::string> word_names(const Alphabet& alphabet, const Word& word);
std::string format_word(const Alphabet& alphabet, const Word& word);

// All words over `symbols` symbols of length at most max_length, shortest first.
std::vector<Word> all_words(std::size_t symbols, std::size_t max_length);

}  // namespace hcs
