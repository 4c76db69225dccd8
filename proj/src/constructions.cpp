#include "gf2/constructions.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "gf2/cfg.hpp"
#include "gf2/error.hpp"

namespace gf2 {

namespace {

// Copies `from` into `into`, renaming clashing nonterminals; returns the
// index of from's start symbol.
int import_cfg(Cfg& into, const Cfg& from) {
  std::vector<int> map(from.names.size());
  for (std::size_t i = 0; i < from.names.size(); ++i) map[i] = into.intern(into.fresh_name(from.names[i]));
  for (const auto& p : from.productions) {
    std::vector<CfgSymbol> body;
    for (const auto& s : p.body) body.push_back(s.terminal ? s : CfgSymbol::n(map[static_cast<std::size_t>(s.id)]));
    into.add(map[static_cast<std::size_t>(p.head)], std::move(body));
  }
  return from.names.empty() ? into.intern(into.fresh_name("Empty")) : map[static_cast<std::size_t>(from.start)];
}

std::string merged_letters(const std::string& x, const std::string& y) {
  std::string out = x;
  for (char c : y) {
    if (out.find(c) == std::string::npos) out += c;
  }
  return out;
}

std::vector<CfgSymbol> repeat(char c, int n) { return std::vector<CfgSymbol>(static_cast<std::size_t>(n), CfgSymbol::t(c)); }

// S -> one word per monomial.
int finite_language(Cfg& cfg, const Gf2Polynomial& p, const std::string& letters) {
  const int s = cfg.intern(cfg.fresh_name("F"));
  for (const auto& e : p.monomials()) {
    std::vector<CfgSymbol> body;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto run = repeat(letters[i], e[i]);
      body.insert(body.end(), run.begin(), run.end());
    }
    cfg.add(s, std::move(body));
  }
  return s;
}

// D -> S | first^u D last^v for every monomial of p + 1 (axes `first` and
// `last` of p; equal axes give D -> first^u D).
int divide(Cfg& cfg, int s, const Gf2Polynomial& p, const std::string& letters, int first, int last) {
  if (!p.is_invertible()) throw DomainError("constructions", "cannot divide by the non-invertible " + p.to_string());
  const int d = cfg.intern(cfg.fresh_name("D"));
  cfg.add(d, {CfgSymbol::n(s)});
  const auto shifted = p + Gf2Polynomial::constant(p.vars(), true);
  for (const auto& e : shifted.monomials()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0 && static_cast<int>(i) != first && static_cast<int>(i) != last) {
        throw DomainError("constructions", p.to_string() + " uses letters other than " + letters[static_cast<std::size_t>(first)] +
                                               " and " + letters[static_cast<std::size_t>(last)]);
      }
    }
    const int u = e[static_cast<std::size_t>(first)];
    const int v = first == last ? 0 : e[static_cast<std::size_t>(last)];
    auto body = repeat(letters[static_cast<std::size_t>(first)], u);
    body.push_back(CfgSymbol::n(d));
    const auto tail = repeat(letters[static_cast<std::size_t>(last)], v);
    body.insert(body.end(), tail.begin(), tail.end());
    cfg.add(d, std::move(body));
  }
  return d;
}

bool on_axes(const Gf2Polynomial& p, std::initializer_list<int> axes) {
  return (p.used_axes() & ~Gf2Polynomial::axes(axes)) == 0;
}

// p = sum over u of axis^u * parts[u], with parts free of `axis`.
std::map<int, Gf2Polynomial> split_by_axis(const Gf2Polynomial& p, int axis) {
  std::map<int, std::vector<Exponents>> mons;
  for (auto e : p.monomials()) {
    const int u = e[static_cast<std::size_t>(axis)];
    e[static_cast<std::size_t>(axis)] = 0;
    mons[u].push_back(e);
  }
  std::map<int, Gf2Polynomial> out;
  for (auto& [u, list] : mons) out.emplace(u, Gf2Polynomial::from_monomials(p.vars(), list));
  return out;
}

void check_result(const Gf2Grammar& g, const RepresentationSpec& spec, const Exponents& bounds) {
  if (bounded_series(g, bounds, spec.letters) != spec.series(bounds)) {
    throw DomainError("constructions", "built grammar does not match the spec series within the bounds");
  }
}

}  // namespace

Gf2Grammar gf2_concat(const Gf2Grammar& g1, const Gf2Grammar& g2) {
  Cfg cfg;
  const int s1 = import_cfg(cfg, to_cfg(g1));
  const int s2 = import_cfg(cfg, to_cfg(g2));
  cfg.start = cfg.intern(cfg.fresh_name("S"));
  cfg.add(cfg.start, {CfgSymbol::n(s1), CfgSymbol::n(s2)});
  return to_grammar(cfg, merged_letters(g1.terminals(), g2.terminals()));
}

Gf2Grammar sym_diff(const Gf2Grammar& g1, const Gf2Grammar& g2) {
  Cfg cfg;
  const int s1 = import_cfg(cfg, to_cfg(g1));
  const int s2 = import_cfg(cfg, to_cfg(g2));
  cfg.start = cfg.intern(cfg.fresh_name("S"));
  cfg.add(cfg.start, {CfgSymbol::n(s1)});
  cfg.add(cfg.start, {CfgSymbol::n(s2)});
  return to_grammar(cfg, merged_letters(g1.terminals(), g2.terminals()));
}

Gf2Grammar divide_by_invertible(const Gf2Grammar& g, const Gf2Polynomial& p, int k) {
  if (k < 1 || static_cast<int>(g.terminals().size()) != k) {
    throw DomainError("constructions", "k = " + std::to_string(k) + " does not match the alphabet '" + g.terminals() + "'");
  }
  if (p.vars() != g.terminals()) {
    throw DomainError("constructions", "polynomial variables '" + p.vars() + "' differ from the alphabet '" + g.terminals() + "'");
  }
  if (!p.is_invertible()) throw DomainError("constructions", "cannot divide by the non-invertible " + p.to_string());
  Cfg cfg;
  const int s = import_cfg(cfg, to_cfg(g));
  cfg.start = divide(cfg, s, p, g.terminals(), 0, k - 1);
  return to_grammar(cfg, g.terminals());
}

// ---------------------------------------------------------------------------
// Specs

RepresentationSpec make_spec(int k, StratifiedKind kind) {
  if (k < 2 || k > 26) throw DomainError("constructions", "k must lie in 2..26");
  RepresentationSpec s;
  s.k = k;
  s.kind = kind;
  for (int i = 0; i < k; ++i) s.letters += static_cast<char>('a' + i);
  s.numerator = Gf2Polynomial::constant(s.letters, true);
  for (int i = 0; i < k; ++i) s.leaves.push_back({std::nullopt, s.numerator, s.numerator});
  return s;
}

void RepresentationSpec::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("constructions", what); };
  if (k < 2 || static_cast<int>(letters.size()) != k) fail("spec needs k >= 2 letters");
  for (const auto& [pair, p] : denominators) {
    const auto [i, j] = pair;
    if (i < 1 || j > k || i >= j) fail("denominator pair (" + std::to_string(i) + "," + std::to_string(j) + ") is outside X_k");
    if (p.vars() != letters) fail("denominator variables differ from the alphabet");
    if (!p.is_invertible()) fail("denominator " + p.to_string() + " for (" + std::to_string(i) + "," + std::to_string(j) + ") is not invertible");
    if (!on_axes(p, {i - 1, j - 1})) {
      fail("denominator " + p.to_string() + " is not in F2[" + letters[static_cast<std::size_t>(i - 1)] + "," +
           letters[static_cast<std::size_t>(j - 1)] + "]");
    }
  }
  PairSet keys;
  for (const auto& [pair, p] : denominators) keys.insert(pair);
  if (kind == StratifiedKind::treelike) {
    if (static_cast<int>(leaves.size()) != k) fail("tree-like spec needs one leaf per letter");
    for (int i = 0; i < k; ++i) {
      const auto& leaf = leaves[static_cast<std::size_t>(i)];
      const char c = letters[static_cast<std::size_t>(i)];
      if (leaf.grammar) {
        for (char t : leaf.grammar->terminals()) {
          if (t != c) fail(std::string("leaf ") + std::to_string(i + 1) + " grammar uses letter " + t);
        }
        continue;
      }
      if (leaf.numerator.vars() != letters || leaf.denominator.vars() != letters) fail("leaf variables differ from the alphabet");
      if (!on_axes(leaf.numerator, {i}) || !on_axes(leaf.denominator, {i})) {
        fail("leaf " + std::to_string(i + 1) + " is not univariate in " + std::string(1, c));
      }
      if (!leaf.denominator.is_invertible()) fail("leaf " + std::to_string(i + 1) + " denominator is not invertible");
    }
    if (witness) {
      if (!is_treelike(witness->pairs, k)) fail("witness " + render(witness->pairs) + " is not tree-like");
      if (!std::includes(witness->pairs.begin(), witness->pairs.end(), keys.begin(), keys.end())) {
        fail("denominator pairs " + render(keys) + " are not inside the witness " + render(witness->pairs));
      }
    }
  } else if (kind == StratifiedKind::pathlike) {
    if (numerator.vars() != letters) fail("numerator variables differ from the alphabet");
    if (!is_chain_supported(keys, k)) {
      fail("denominator pairs " + render(keys) +
           " do not lie on one trimming chain of [1,k]; a single linear recursion cannot produce them");
    }
  } else {
    fail("spec kind must be tree-like or path-like");
  }
}

TruncatedSeries RepresentationSpec::series(const Exponents& bounds) const {
  validate();
  if (bounds.size() != letters.size()) throw DomainError("constructions", "bounds do not match k");
  TruncatedSeries out = kind == StratifiedKind::pathlike ? numerator.lift(bounds) : TruncatedSeries::one(letters, bounds);
  if (kind == StratifiedKind::treelike) {
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto& leaf = leaves[i];
      if (leaf.grammar) {
        const auto s = bounded_series(*leaf.grammar, {bounds[i]}, std::string(1, letters[i]));
        TruncatedSeries lifted(letters, bounds);
        for (const auto& e : s.support()) {
          Exponents full(bounds.size(), 0);
          full[i] = e[0];
          lifted.set(full, true);
        }
        out = out * lifted;
      } else {
        out = out * leaf.numerator.lift(bounds) * inverse(leaf.denominator, bounds);
      }
    }
  }
  for (const auto& [pair, p] : denominators) out = out * inverse(p, bounds);
  return out;
}

RepresentationSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir) {
  struct Pending {
    int line;
    std::string value;
  };
  std::optional<int> k;
  std::optional<StratifiedKind> kind;
  std::string letters;
  std::optional<Pending> numerator;
  std::optional<Pending> witness;
  std::map<Pair, Pending> denoms;
  std::map<int, Pending> leaf_polys;
  std::map<int, Pending> leaf_files;

  static const std::regex header(R"(^\s*([A-Za-z]+)((?:\s+\d+)*)\s*(grammar)?\s*:\s*(.*?)\s*$)");
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(line, m, header)) throw ParseError("constructions", line_no, "expected `key: value`");
    const std::string key = m[1];
    std::vector<int> nums;
    std::istringstream ns(m[2].str());
    for (int v; ns >> v;) nums.push_back(v);
    const bool grammar_file = m[3].matched;
    const std::string value = m[4];
    auto want = [&](std::size_t count) {
      if (nums.size() != count || (grammar_file && key != "leaf")) {
        throw ParseError("constructions", line_no, "malformed `" + key + "` line");
      }
    };
    if (key == "k") {
      want(0);
      try {
        k = std::stoi(value);
      } catch (const std::exception&) {
        throw ParseError("constructions", line_no, "k must be an integer");
      }
    } else if (key == "kind") {
      want(0);
      if (value == "treelike" || value == "tree-like") kind = StratifiedKind::treelike;
      else if (value == "pathlike" || value == "path-like") kind = StratifiedKind::pathlike;
      else throw ParseError("constructions", line_no, "kind must be treelike or pathlike");
    } else if (key == "alphabet") {
      want(0);
      letters.clear();
      for (char c : value) {
        if (c == ' ' || c == '\t') continue;
        if (c < 'a' || c > 'z' || letters.find(c) != std::string::npos) {
          throw ParseError("constructions", line_no, "alphabet letters must be distinct a-z");
        }
        letters += c;
      }
    } else if (key == "numerator") {
      want(0);
      numerator = Pending{line_no, value};
    } else if (key == "denom") {
      want(2);
      denoms[{nums[0], nums[1]}] = Pending{line_no, value};
    } else if (key == "leaf") {
      want(1);
      (grammar_file ? leaf_files : leaf_polys)[nums[0]] = Pending{line_no, value};
    } else if (key == "witness") {
      want(0);
      witness = Pending{line_no, value};
    } else {
      throw ParseError("constructions", line_no, "unknown key `" + key + "`");
    }
  }
  if (!k) throw ParseError("constructions", line_no, "missing `k:`");
  if (!kind) throw ParseError("constructions", line_no, "missing `kind:`");
  RepresentationSpec spec = make_spec(*k, *kind);
  if (!letters.empty()) {
    if (static_cast<int>(letters.size()) != *k) throw ParseError("constructions", line_no, "alphabet size differs from k");
    spec = make_spec(*k, *kind);
    spec.letters = letters;
    spec.numerator = Gf2Polynomial::constant(letters, true);
    for (auto& leaf : spec.leaves) leaf.numerator = leaf.denominator = spec.numerator;
  }
  auto poly = [&](const Pending& p, const std::string& expr) {
    try {
      return parse_polynomial(expr, spec.letters);
    } catch (const Error& e) {
      throw ParseError("constructions", p.line, e.what());
    }
  };
  if (numerator) spec.numerator = poly(*numerator, numerator->value);
  for (const auto& [pair, p] : denoms) spec.denominators[pair] = poly(p, p.value);
  for (const auto& [i, p] : leaf_polys) {
    if (i < 1 || i > *k) throw ParseError("constructions", p.line, "leaf index out of range");
    auto& leaf = spec.leaves[static_cast<std::size_t>(i - 1)];
    const auto slash = p.value.find('/');
    leaf.numerator = poly(p, p.value.substr(0, slash));
    if (slash != std::string::npos) leaf.denominator = poly(p, p.value.substr(slash + 1));
  }
  for (const auto& [i, p] : leaf_files) {
    if (i < 1 || i > *k) throw ParseError("constructions", p.line, "leaf index out of range");
    std::ifstream file(base_dir / p.value);
    if (!file) throw ParseError("constructions", p.line, "cannot open leaf grammar " + p.value);
    std::stringstream buf;
    buf << file.rdbuf();
    spec.leaves[static_cast<std::size_t>(i - 1)].grammar = parse_grammar(buf.str());
  }
  if (witness) {
    static const std::regex pair_re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    PairSet pairs;
    for (std::sregex_iterator it(witness->value.begin(), witness->value.end(), pair_re), end; it != end; ++it) {
      pairs.insert({std::stoi((*it)[1]), std::stoi((*it)[2])});
    }
    if (spec.kind != StratifiedKind::treelike) throw ParseError("constructions", witness->line, "witness is for tree-like specs");
    for (const auto& s : enumerate_treelike(*k)) {
      if (s.pairs == pairs) spec.witness = s;
    }
    if (!spec.witness) throw ParseError("constructions", witness->line, render(pairs) + " is not tree-like");
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const RepresentationSpec& spec, Cfg& cfg) : spec_(spec), cfg_(cfg) {}

  int leaf(int i) {
    const auto& l = spec_.leaves[static_cast<std::size_t>(i)];
    if (l.grammar) return import_cfg(cfg_, to_cfg(*l.grammar));
    const int s = finite_language(cfg_, l.numerator, spec_.letters);
    return divide(cfg_, s, l.denominator, spec_.letters, i, i);
  }

  // Node [l, r] (1-based) owning letters lo..r.
  int build(const RecursionNode& node, int lo) {
    int s = 0;
    if (node.children.empty()) {
      s = cfg_.intern(cfg_.fresh_name("P"));
      std::vector<CfgSymbol> body;
      for (int i = lo; i <= node.r; ++i) body.push_back(CfgSymbol::n(leaf(i - 1)));
      cfg_.add(s, std::move(body));
    } else {
      const int left = build(node.children[0], lo);
      const int right = build(node.children[1], node.split + 1);
      s = cfg_.intern(cfg_.fresh_name("C"));
      cfg_.add(s, {CfgSymbol::n(left), CfgSymbol::n(right)});
    }
    if (auto it = spec_.denominators.find({node.l, node.r}); it != spec_.denominators.end()) {
      s = divide(cfg_, s, it->second, spec_.letters, node.l - 1, node.r - 1);
    }
    return s;
  }

 private:
  const RepresentationSpec& spec_;
  Cfg& cfg_;
};

class PathBuilder {
 public:
  PathBuilder(const RepresentationSpec& spec, Cfg& cfg) : spec_(spec), cfg_(cfg) {}

  // Nonterminal for n / product of `dens` over letters l..r (0-based), or -1
  // for the empty language.
  int build(const Gf2Polynomial& n, int l, int r, std::map<Pair, Gf2Polynomial> dens) {
    if (n.is_zero()) return -1;
    if (dens.empty()) return finite_language(cfg_, n, spec_.letters);
    auto outer = dens.begin();
    for (auto it = dens.begin(); it != dens.end(); ++it) {
      if (it->first.second - it->first.first > outer->first.second - outer->first.first) outer = it;
    }
    const int i = outer->first.first - 1;
    const int j = outer->first.second - 1;
    if (i != l || j != r) return trim(n, l, r, i > l, std::move(dens));
    const Gf2Polynomial p = outer->second;
    dens.erase(outer);
    int s = 0;
    if (dens.empty()) {
      s = finite_language(cfg_, n, spec_.letters);
    } else {
      bool inside_right = true;  // every remaining pair avoids letter l
      for (const auto& [pair, q] : dens) inside_right = inside_right && pair.first - 1 > l;
      s = trim(n, l, r, inside_right, std::move(dens));
      if (s < 0) return -1;
    }
    return divide(cfg_, s, p, spec_.letters, l, r);
  }

 private:
  // Splits n by the power of the first (or last) letter and wraps the
  // grammars of the pieces: T -> a_l^u G_u, or T -> G_v a_r^v.
  int trim(const Gf2Polynomial& n, int l, int r, bool first, std::map<Pair, Gf2Polynomial> dens) {
    const int axis = first ? l : r;
    const char c = spec_.letters[static_cast<std::size_t>(axis)];
    const int t = cfg_.intern(cfg_.fresh_name("T"));
    for (const auto& [u, part] : split_by_axis(n, axis)) {
      const int g = first ? build(part, l + 1, r, dens) : build(part, l, r - 1, dens);
      if (g < 0) continue;
      auto body = first ? repeat(c, u) : std::vector<CfgSymbol>{};
      body.push_back(CfgSymbol::n(g));
      if (!first) {
        const auto tail = repeat(c, u);
        body.insert(body.end(), tail.begin(), tail.end());
      }
      cfg_.add(t, std::move(body));
    }
    return t;
  }

  const RepresentationSpec& spec_;
  Cfg& cfg_;
};

}  // namespace

Gf2Grammar build_treelike(const RepresentationSpec& spec, const Exponents& bounds) {
  if (spec.kind != StratifiedKind::treelike) throw DomainError("constructions", "build_treelike needs a tree-like spec");
  spec.validate();
  std::optional<StratifiedSet> witness = spec.witness;
  if (!witness) {
    for (const auto& s : enumerate_treelike(spec.k)) {
      const bool covers = std::all_of(spec.denominators.begin(), spec.denominators.end(),
                                      [&](const auto& d) { return s.pairs.count(d.first) != 0; });
      if (covers) {
        witness = s;
        break;
      }
    }
    if (!witness) throw DomainError("constructions", "no tree-like set holds every denominator pair");
  }
  Cfg cfg;
  TreeBuilder b(spec, cfg);
  cfg.start = b.build(witness->recursion, 1);
  auto g = to_grammar(cfg, spec.letters);
  check_result(g, spec, bounds);
  return g;
}

Gf2Grammar build_pathlike_linear(const RepresentationSpec& spec, const Exponents& bounds) {
  if (spec.kind != StratifiedKind::pathlike) throw DomainError("constructions", "build_pathlike_linear needs a path-like spec");
  spec.validate();
  Cfg cfg;
  PathBuilder b(spec, cfg);
  const int s = b.build(spec.numerator, 0, spec.k - 1, spec.denominators);
  cfg.start = s >= 0 ? s : cfg.intern(cfg.fresh_name("S"));
  auto g = to_grammar(cfg, spec.letters);
  if (!g.is_linear()) throw DomainError("constructions", "internal error: path-like build produced a non-linear rule");
  check_result(g, spec, bounds);
  return g;
}

}  // namespace gf2
