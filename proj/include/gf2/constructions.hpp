#pragma once

// Grammar builders: GF(2)-operations on grammars, division of a bounded
// language by an invertible polynomial, and grammars for the quotient
// representations over tree-like and path-like pair sets.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gf2/grammar.hpp"
#include "gf2/polynomial.hpp"
#include "gf2/series.hpp"
#include "gf2/stratified.hpp"

namespace gf2 {

/// w is accepted iff it has an odd number of factorizations w = uv with u in
/// L(g1) and v in L(g2). Nonterminals of g2 that clash with g1 are renamed;
/// the alphabet is g1's letters followed by g2's new ones.
Gf2Grammar gf2_concat(const Gf2Grammar& g1, const Gf2Grammar& g2);

/// Parity of membership is the XOR of the two.
Gf2Grammar sym_diff(const Gf2Grammar& g1, const Gf2Grammar& g2);

/// New start S' with S' -> S and S' -> a1^u S' ak^v for every monomial
/// a1^u ak^v of p + 1, so that series(S') * p = series(S). `p` is over the
/// grammar's letters and uses only the first and the last.
Gf2Grammar divide_by_invertible(const Gf2Grammar& g, const Gf2Polynomial& p, int k);

/// A univariate factor A_i: either a grammar over the letter a_i alone or
/// numerator / denominator in a_i (denominator invertible).
struct LeafComponent {
  std::optional<Gf2Grammar> grammar;
  Gf2Polynomial numerator;
  Gf2Polynomial denominator;
};

/// numerator (or A_1 ... A_k) / product of p_(i,j), with p_(i,j) invertible
/// and in F2[a_i, a_j]. All polynomials are over `letters`.
struct RepresentationSpec {
  int k = 0;
  StratifiedKind kind = StratifiedKind::treelike;
  std::string letters;
  /// Tree-like: the recursion to follow; when absent, the first tree-like
  /// set holding every denominator pair is used.
  std::optional<StratifiedSet> witness;
  Gf2Polynomial numerator;             ///< path-like
  std::vector<LeafComponent> leaves;   ///< tree-like, one per letter
  std::map<Pair, Gf2Polynomial> denominators;

  /// Throws DomainError("constructions") when the spec is inconsistent.
  void validate() const;
  /// The represented series, truncated.
  TruncatedSeries series(const Exponents& bounds) const;
};

/// Defaults: letters a, b, c, ...; leaves 1; numerator 1.
RepresentationSpec make_spec(int k, StratifiedKind kind);

/// Spec file: `k: 3`, `kind: treelike|pathlike`, optional `alphabet: a b c`,
/// `numerator: <poly>`, `denom i j: <poly>`, `leaf i: <poly>[ / <poly>]`,
/// `leaf i grammar: <path>` (relative to `base_dir`), `witness: {(1,2),...}`.
RepresentationSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir = {});

/// Recursion of the witness: the two parts of each split are concatenated,
/// then divided by p_(l,r). Checks the result against spec.series(bounds).
Gf2Grammar build_treelike(const RepresentationSpec& spec, const Exponents& bounds);

/// Linear grammar for numerator / product of denominators. The pairs must lie
/// on one trimming chain of [1,k] (each step drops the first or the last
/// letter); numerator monomials are split by the power of the trimmed
/// letter. Checks the result against spec.series(bounds).
Gf2Grammar build_pathlike_linear(const RepresentationSpec& spec, const Exponents& bounds);

}  // namespace gf2
