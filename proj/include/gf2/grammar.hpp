#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gf2/series.hpp"

namespace gf2 {

struct Symbol {
  enum class Kind : std::uint8_t { terminal, nonterminal };

  Kind kind = Kind::terminal;
  std::string name;

  static Symbol terminal(char c) { return {Kind::terminal, std::string(1, c)}; }
  static Symbol nonterminal(std::string n) { return {Kind::nonterminal, std::move(n)}; }

  bool is_terminal() const noexcept { return kind == Kind::terminal; }
  char letter() const { return name.at(0); }

  auto operator<=>(const Symbol&) const = default;
};

struct Rule {
  std::string head;
  std::vector<Symbol> body;

  auto operator<=>(const Rule&) const = default;
};

using RuleSet = std::set<Rule>;

/// Inserts `r` unless present, removes it if present: rule sets combine by
/// symmetric difference.
void toggle(RuleSet& rules, Rule r);

/// A grammar read under parity semantics: a word belongs to the language iff
/// it has an odd number of derivation trees.
///
/// The empty body is only allowed through the dedicated start -> () rule,
/// recorded in `epsilon_at_start()` rather than in `rules()`.
class Gf2Grammar {
 public:
  Gf2Grammar() = default;
  /// Validates and builds. `terminals` is the ordered alphabet a1..ak.
  Gf2Grammar(std::string terminals, std::vector<std::string> nonterminals, std::string start,
             RuleSet rules, bool epsilon_at_start);

  const std::string& terminals() const noexcept { return terminals_; }
  const std::vector<std::string>& nonterminals() const noexcept { return nonterminals_; }
  const std::string& start() const noexcept { return start_; }
  const RuleSet& rules() const noexcept { return rules_; }
  bool epsilon_at_start() const noexcept { return epsilon_at_start_; }

  /// Every rule body holds at most one nonterminal.
  bool is_linear() const;
  bool has_nonterminal(std::string_view name) const;

 private:
  std::string terminals_;
  std::vector<std::string> nonterminals_;
  std::string start_;
  RuleSet rules_;
  bool epsilon_at_start_ = false;
};

/// Grammar file format: `# comment`, `start: S`, optional `alphabet: a b c`,
/// rule lines `A -> a B c | ()`. Repeated rules cancel pairwise.
Gf2Grammar parse_grammar(std::string_view text);
std::string to_text(const Gf2Grammar& g);

/// Throws DomainError unless every word has finitely many derivation trees
/// (no nonterminal derives itself through rules whose other symbols can
/// vanish).
void require_cycle_free(const Gf2Grammar& g);

/// Splits long bodies right to left: A -> X1 X2 ... Xn becomes
/// A -> X1 <X2...Xn>, with one fresh nonterminal per distinct suffix. The
/// map on derivation trees is a bijection.
Gf2Grammar binarize(const Gf2Grammar& g);

/// Incremental parity CYK. Keeps the table for the current word; `push`
/// appends a letter (filling one new column), `pop` removes it.
class ParityParser {
 public:
  explicit ParityParser(const Gf2Grammar& g);
  ~ParityParser();
  ParityParser(ParityParser&&) noexcept;
  ParityParser& operator=(ParityParser&&) noexcept;

  void push(char letter);
  void pop();
  void clear();
  std::size_t length() const;
  /// Parity of derivations of the current word from the start symbol.
  bool accepts() const;

  bool member(std::string_view word);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// (number of derivation trees of w) mod 2.
bool parity_member(const Gf2Grammar& g, std::string_view word);

/// Exact derivation-tree count, top-down over the original (unbinarized)
/// rules with integer arithmetic. Words longer than 12 letters are refused.
std::uint64_t count_derivations_bruteforce(const Gf2Grammar& g, std::string_view word);

/// a_1^{e_1} ... a_k^{e_k} over `letters`.
std::string bounded_word(const std::string& letters, const Exponents& e);

/// Truncation of the series of L(g) intersected with a1* a2* ... ak*,
/// letters taken from `letters` (the grammar's alphabet by default).
TruncatedSeries bounded_series(const Gf2Grammar& g, const Exponents& bounds);
TruncatedSeries bounded_series(const Gf2Grammar& g, const Exponents& bounds,
                               const std::string& letters);

}  // namespace gf2
