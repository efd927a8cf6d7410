#include "hcs/alphabet.hpp"

#include <sstream>

#include "hcs/errors.hpp"

namespace hcs {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  for (SymbolId i = 0; i < symbols_.size(); ++i) {
    const std::string& s = symbols_[i];
    if (s.empty()) throw InputError("empty symbol name in alphabet");
    if (s == kEpsilonName) throw InputError("\"eps\" is reserved for epsilon and cannot be a symbol");
    if (!index_.emplace(s, i).second) throw InputError("duplicate symbol in alphabet: " + s);
  }
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId Alphabet::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw InputError("unknown symbol: " + std::string(name));
}

Alphabet Alphabet::extended(std::string symbol) const {
  std::vector<std::string> symbols = symbols_;
  symbols.push_back(std::move(symbol));
  return Alphabet(std::move(symbols));
}

std::string label_name(const Alphabet& alphabet, SymbolId label) {
  return label == kEpsilon ? std::string(kEpsilonName) : alphabet.symbol(label);
}

Word parse_word(const Alphabet& alphabet, std::span<const std::string> symbols) {
  Word word;
  word.reserve(symbols.size());
  for (const auto& s : symbols) word.push_back(alphabet.require(s));
  return word;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string token; in >> token;) tokens.push_back(token);
  return parse_word(alphabet, tokens);
}

Word parse_word_chars(const Alphabet& alphabet, std::string_view text) {
  for (const auto& s : alphabet.symbols()) {
    if (s.size() != 1) throw InputError("character words need single-character symbols, found: " + s);
  }
  Word word;
  for (char c : text) {
    if (c == ' ' || c == '\t') continue;
    word.push_back(alphabet.require(std::string(1, c)));
  }
  return word;
}

std::vector<std::string> word_names(const Alphabet& alphabet, const Word& word) {
  std::vector<std::string> names;
  names.reserve(word.size());
  for (SymbolId s : word) names.push_back(label_name(alphabet, s));
  return names;
}

std::string format_word(const Alphabet& alphabet, const Word& word) {
  std::string out;
  for (SymbolId s : word) {
    if (!out.empty()) out += ' ';
    out += label_name(alphabet, s);
  }
  return out;
}

std::vector<Word> all_words(std::size_t symbols, std::size_t max_length) {
  std::vector<Word> words{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length && symbols > 0; ++len) {
    std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (SymbolId s = 0; s < symbols; ++s) {
        Word w = words[i];
        w.push_back(s);
        words.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return words;
}

}  // namespace hcs
