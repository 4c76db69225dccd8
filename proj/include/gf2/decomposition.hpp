#pragma once

// Analysis of a grammar restricted to a1* a2* ... ak*: intersection with a
// small DFA, the linear system over the typed nonterminals of type 1 -> k,
// its truncated solution, and the recursive summand decomposition of linear
// grammars.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gf2/cfg.hpp"
#include "gf2/grammar.hpp"
#include "gf2/polynomial.hpp"
#include "gf2/series.hpp"
#include "gf2/stratified.hpp"

namespace gf2 {

enum class Automaton {
  bounded,      ///< states 1..k, a_j moves state p to j when j >= p
  three_state,  ///< states 1, (2..k-1), k for a1* {a2..a(k-1)}* ak*
};

struct TypedNonterminal {
  std::string base;
  int from = 0;  ///< state index, 0-based
  int to = 0;
};

/// A grammar whose nonterminals are annotated A_{p->q}: A restricted to
/// words that drive the automaton from state p to state q.
struct TypedGrammar {
  Automaton automaton = Automaton::bounded;
  std::string letters;  ///< a1..ak of the automaton
  Cfg cfg;
  std::vector<TypedNonterminal> types;  ///< indexed like cfg.names
  std::vector<int> starts;              ///< start symbol typed from the initial state

  int state_count() const;
  std::string state_name(int state) const;
  /// e.g. `S_{1->3}`.
  std::string display(int nt) const;
  /// Typed nonterminal of `base` with the given states, if present.
  std::optional<int> find(const std::string& base, int from, int to) const;
};

/// Rules A -> c, A -> cB, A -> Bc and A -> () only, same parity language.
/// Unit rules are removed by path parity, longer bodies are chained through
/// fresh nonterminals. Throws DomainError("decomposition") for non-linear
/// input or a cyclic grammar.
Cfg linear_normal_form(const Cfg& cfg);

TypedGrammar intersect_bounded_dfa(const Gf2Grammar& g, int k);
TypedGrammar intersect_linear_3state(const Gf2Grammar& g, int k);
/// Works on any linear rule store (normalized internally); `letters` are the
/// automaton's a1..ak, other letters are dropped.
TypedGrammar intersect_linear_3state(const Cfg& cfg, const std::string& letters);

/// Series of every typed nonterminal of a bounded-DFA typed grammar, over
/// tg.letters. Each typed nonterminal only generates words of a_p* ... a_q*,
/// so a product over a split state r convolves along axis r alone.
std::vector<TruncatedSeries> typed_series(const TypedGrammar& tg, const Exponents& bounds);

/// The bounded language of the typed grammar: sum over its start symbols.
TruncatedSeries typed_start_series(const TypedGrammar& tg, const Exponents& bounds);

/// A factor of a product in the system: a fixed polynomial, the series of a
/// typed nonterminal, or the bounded series of a grammar over a sub-alphabet.
struct SeriesFactor {
  enum class Kind { polynomial, typed, grammar };

  Kind kind = Kind::polynomial;
  Gf2Polynomial polynomial;
  int typed = -1;
  std::shared_ptr<const Gf2Grammar> grammar;
  std::string letters;

  static SeriesFactor poly(Gf2Polynomial p);
  static SeriesFactor of_typed(int nt);
  static SeriesFactor of_grammar(Gf2Grammar g, std::string letters);
};

using SeriesTerm = std::vector<SeriesFactor>;  ///< product, empty is 1
using SeriesExpr = std::vector<SeriesTerm>;    ///< sum, empty is 0

struct RhsClass {
  std::string tag;
  std::vector<SeriesExpr> f;  ///< one per unknown
};

/// A x = f over the typed nonterminals of type 1 -> k. Terms stay symbolic
/// until a truncation box is chosen.
struct LinearSystem {
  std::string letters;
  bool linear = false;
  std::vector<std::string> unknowns;
  std::vector<std::vector<SeriesExpr>> matrix;
  std::vector<RhsClass> rhs;
  /// Linear case: exact entries, polynomials in a1 and ak.
  std::vector<std::vector<Gf2Polynomial>> polynomial_matrix;
  std::shared_ptr<const TypedGrammar> source;

  std::size_t size() const { return unknowns.size(); }
};

LinearSystem extract_system(const TypedGrammar& tg);

TruncatedSeries evaluate(const SeriesExpr& e, const LinearSystem& sys, const Exponents& bounds);

struct SystemSolution {
  Exponents bounds;
  std::vector<TruncatedSeries> x;
  /// A^-1 f_tag for every rhs class, in the order of sys.rhs.
  std::vector<std::pair<std::string, std::vector<TruncatedSeries>>> partial;
  /// Unknown eliminated at each step.
  std::vector<std::string> elimination_order;
  /// Product of the pivots.
  TruncatedSeries det;
  bool residual_ok = false;
};

/// Gauss-Jordan elimination over truncated series. Each step takes the first
/// remaining row whose entry has constant term 1; throws NoInvertiblePivot
/// when there is none.
SystemSolution solve_truncated(const LinearSystem& sys, const Exponents& bounds);

/// Exact determinant and adjugate of a polynomial matrix with invertible
/// determinant (computed by series elimination inside the degree box).
Gf2Polynomial determinant(const std::vector<std::vector<Gf2Polynomial>>& m);
std::vector<std::vector<Gf2Polynomial>> adjugate(const std::vector<std::vector<Gf2Polynomial>>& m);

struct Summand {
  PairSet pairs;  ///< keys of `denominators`
  Gf2Polynomial numerator;
  std::map<Pair, Gf2Polynomial> denominators;

  TruncatedSeries value(const Exponents& bounds) const;
};

struct SummandDecomposition {
  std::string letters;
  Exponents bounds;
  TruncatedSeries target;
  std::vector<Summand> summands;

  TruncatedSeries resum() const;
  bool verified() const { return resum() == target; }
};

/// Linear grammars only. Summands with equal pair-sets are merged over a
/// common denominator, so each pair-set appears at most once; trivial
/// denominators (the polynomial 1) are omitted.
SummandDecomposition decompose_linear(const Gf2Grammar& g, int k, const Exponents& bounds);

/// (a^k + a^(k-1) c + ... + c^k) * multiplier, over the variables "ac".
Gf2Polynomial d_k(int k, const Gf2Polynomial& multiplier);
/// Multiplier 1 + a q_a + c q_c.
Gf2Polynomial d_k(int k, const Gf2Polynomial& q_a, const Gf2Polynomial& q_c);

/// Largest min(l, m) over monomials a^l b^k c^m of s; empty when the b^k
/// slice is zero. `s` has three variables read as a, b, c.
std::optional<int> separation_bound(const TruncatedSeries& s, int k);

}  // namespace gf2
