#pragma once

// Index-based rule store shared by the parsers, the intersection machinery
// and the grammar builders. Unlike Gf2Grammar it allows empty bodies on any
// nonterminal and keeps duplicate productions (they cancel on conversion).

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gf2/grammar.hpp"

namespace gf2 {

struct CfgSymbol {
  bool terminal = false;
  int id = 0;  ///< letter code for terminals, nonterminal index otherwise

  static CfgSymbol t(char c) { return {true, static_cast<unsigned char>(c)}; }
  static CfgSymbol n(int i) { return {false, i}; }
  char letter() const { return static_cast<char>(id); }

  friend bool operator==(const CfgSymbol&, const CfgSymbol&) = default;
  friend auto operator<=>(const CfgSymbol&, const CfgSymbol&) = default;
};

struct Production {
  int head = 0;
  std::vector<CfgSymbol> body;
};

struct Cfg {
  std::vector<std::string> names;
  std::vector<Production> productions;
  int start = 0;

  int size() const { return static_cast<int>(names.size()); }
  /// Index of `name`, adding it when new.
  int intern(const std::string& name);
  std::optional<int> find(const std::string& name) const;
  /// A name not used yet, derived from `base`.
  std::string fresh_name(const std::string& base) const;
  void add(int head, std::vector<CfgSymbol> body) { productions.push_back({head, std::move(body)}); }

  std::vector<std::vector<int>> productions_by_head() const;

 private:
  std::unordered_map<std::string, int> index_;
};

Cfg to_cfg(const Gf2Grammar& g);

/// Converts back to a validated Gf2Grammar, preserving the parity of every
/// word's derivation count: empty bodies are eliminated with their parity
/// multiplicities, duplicate productions cancel, useless nonterminals are
/// dropped. When the start symbol keeps an odd number of empty derivations
/// and occurs in a body, a fresh start is introduced.
Gf2Grammar to_grammar(const Cfg& cfg, const std::string& alphabet);

/// Nonterminals that derive the empty word (boolean).
std::vector<std::uint8_t> nullable_set(const Cfg& cfg);
/// Nonterminals that derive some terminal word.
std::vector<std::uint8_t> productive_set(const Cfg& cfg);

/// Order in which nonterminals can be evaluated on a fixed span: X precedes
/// A whenever A -> ... X ... with every other body symbol nullable. Throws
/// DomainError("grammar_core") when that relation has a cycle.
std::vector<int> span_order(const Cfg& cfg);

/// Parity of the number of empty-word derivations of each nonterminal,
/// evaluated along `order`.
std::vector<std::uint8_t> epsilon_parity(const Cfg& cfg, const std::vector<int>& order);

/// Bodies of length <= 2 via right-to-left splitting (fresh names
/// `Bin_<suffix>`).
Cfg binarize_cfg(const Cfg& cfg);

/// Keeps only nonterminals that are productive and reachable from `roots`;
/// `remap` receives old -> new index (-1 when dropped).
Cfg prune(const Cfg& cfg, const std::vector<int>& roots, std::vector<int>* remap = nullptr);

}  // namespace gf2
