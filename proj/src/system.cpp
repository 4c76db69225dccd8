#include <algorithm>
#include <map>

#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"

namespace gf2 {

SeriesFactor SeriesFactor::poly(Gf2Polynomial p) {
  SeriesFactor f;
  f.kind = Kind::polynomial;
  f.polynomial = std::move(p);
  return f;
}

SeriesFactor SeriesFactor::of_typed(int nt) {
  SeriesFactor f;
  f.kind = Kind::typed;
  f.typed = nt;
  return f;
}

SeriesFactor SeriesFactor::of_grammar(Gf2Grammar g, std::string letters) {
  SeriesFactor f;
  f.kind = Kind::grammar;
  f.grammar = std::make_shared<const Gf2Grammar>(std::move(g));
  f.letters = std::move(letters);
  return f;
}

namespace {

Gf2Polynomial letter_poly(const std::string& letters, std::size_t axis) {
  return Gf2Polynomial::variable(letters, static_cast<int>(axis));
}

// Language of `roots` (a union under a fresh start) as a grammar over
// `letters`; empty when none of the roots is productive.
std::optional<Gf2Grammar> sub_grammar(const Cfg& cfg, const std::vector<std::vector<CfgSymbol>>& bodies,
                                      const std::string& letters) {
  if (bodies.empty()) return std::nullopt;
  Cfg joined = cfg;
  const int top = joined.intern(joined.fresh_name("T"));
  for (const auto& b : bodies) joined.add(top, b);
  joined.start = top;
  std::vector<int> remap;
  Cfg pruned = prune(joined, {top}, &remap);
  if (remap[static_cast<std::size_t>(top)] < 0) return std::nullopt;
  Gf2Grammar g = to_grammar(pruned, letters);
  if (g.rules().empty() && !g.epsilon_at_start()) return std::nullopt;
  return g;
}

void add_term(SeriesExpr& e, SeriesTerm t) { e.push_back(std::move(t)); }

class Evaluator {
 public:
  Evaluator(const LinearSystem& sys, Exponents bounds) : sys_(sys), bounds_(std::move(bounds)) {
    if (bounds_.size() != sys.letters.size()) throw DomainError("decomposition", "bounds do not match the system letters");
  }

  TruncatedSeries factor(const SeriesFactor& f) {
    switch (f.kind) {
      case SeriesFactor::Kind::polynomial:
        return f.polynomial.lift(bounds_);
      case SeriesFactor::Kind::typed:
        if (!typed_) {
          if (!sys_.source) throw DomainError("decomposition", "typed factor without a source grammar");
          typed_ = typed_series(*sys_.source, bounds_);
        }
        return (*typed_)[static_cast<std::size_t>(f.typed)];
      case SeriesFactor::Kind::grammar: {
        Exponents sub;
        std::vector<std::size_t> axis;
        for (char c : f.letters) {
          const auto pos = sys_.letters.find(c);
          if (pos == std::string::npos) throw DomainError("decomposition", std::string("letter ") + c + " outside the system");
          axis.push_back(pos);
          sub.push_back(bounds_[pos]);
        }
        const auto s = bounded_series(*f.grammar, sub, f.letters);
        TruncatedSeries out(sys_.letters, bounds_);
        for (const auto& e : s.support()) {
          Exponents full(bounds_.size(), 0);
          for (std::size_t i = 0; i < e.size(); ++i) full[axis[i]] = e[i];
          out.set(full, true);
        }
        return out;
      }
    }
    return TruncatedSeries(sys_.letters, bounds_);
  }

  TruncatedSeries expr(const SeriesExpr& e) {
    TruncatedSeries sum(sys_.letters, bounds_);
    for (const auto& term : e) {
      TruncatedSeries prod = TruncatedSeries::one(sys_.letters, bounds_);
      for (const auto& f : term) prod = prod * factor(f);
      sum += prod;
    }
    return sum;
  }

 private:
  const LinearSystem& sys_;
  Exponents bounds_;
  std::optional<std::vector<TruncatedSeries>> typed_;
};

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

// Gauss-Jordan on [a | b]: a becomes the identity, b becomes a^-1 b.
// Returns the product of the pivots; `order` receives the original row used
// for each column.
TruncatedSeries eliminate(SeriesMatrix& a, SeriesMatrix& b, const std::vector<std::string>& names,
                          std::vector<std::string>* order) {
  const std::size_t n = a.size();
  std::vector<std::size_t> row_id(n);
  for (std::size_t i = 0; i < n; ++i) row_id[i] = i;
  TruncatedSeries det;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    while (p < n && !a[p][j].constant_term()) ++p;
    if (p == n) {
      throw NoInvertiblePivot("no remaining equation has an invertible coefficient for " + names[j] +
                              "; the truncated solver cannot continue");
    }
    std::swap(a[p], a[j]);
    std::swap(b[p], b[j]);
    std::swap(row_id[p], row_id[j]);
    if (order) order->push_back(names[row_id[j]]);
    det = j == 0 ? a[j][j] : det * a[j][j];
    const TruncatedSeries inv = inverse(a[j][j]);
    for (auto& v : a[j]) v = v * inv;
    for (auto& v : b[j]) v = v * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || a[i][j].is_zero()) continue;
      const TruncatedSeries factor = a[i][j];
      for (std::size_t c = 0; c < n; ++c) a[i][c] += factor * a[j][c];
      for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] += factor * b[j][c];
    }
  }
  return det;
}

}  // namespace

TruncatedSeries evaluate(const SeriesExpr& e, const LinearSystem& sys, const Exponents& bounds) {
  Evaluator ev(sys, bounds);
  return ev.expr(e);
}

LinearSystem extract_system(const TypedGrammar& tg) {
  const std::string& letters = tg.letters;
  const std::size_t k = letters.size();
  if (k < 2) throw DomainError("decomposition", "a system needs at least two letters");
  LinearSystem sys;
  sys.letters = letters;
  sys.linear = tg.automaton == Automaton::three_state;
  sys.source = std::make_shared<const TypedGrammar>(tg);
  const int final_state = tg.state_count() - 1;

  std::vector<int> unknown_of(tg.types.size(), -1);
  std::vector<int> unknown_nt;
  for (std::size_t i = 0; i < tg.types.size(); ++i) {
    if (tg.types[i].from == 0 && tg.types[i].to == final_state) {
      unknown_of[i] = static_cast<int>(unknown_nt.size());
      unknown_nt.push_back(static_cast<int>(i));
      sys.unknowns.push_back(tg.display(static_cast<int>(i)));
    }
  }
  const std::size_t n = unknown_nt.size();
  auto unknown = [&](const CfgSymbol& s) { return s.terminal ? -1 : unknown_of[static_cast<std::size_t>(s.id)]; };
  const auto by_head = tg.cfg.productions_by_head();

  if (sys.linear) {
    const Gf2Polynomial first = letter_poly(letters, 0);
    const Gf2Polynomial last = letter_poly(letters, k - 1);
    sys.polynomial_matrix.assign(n, std::vector<Gf2Polynomial>(n, Gf2Polynomial(letters)));
    RhsClass prefix{std::to_string(1) + "->" + std::to_string(k - 1), std::vector<SeriesExpr>(n)};
    RhsClass suffix{std::to_string(2) + "->" + std::to_string(k), std::vector<SeriesExpr>(n)};
    const std::string prefix_letters = letters.substr(0, k - 1);
    const std::string suffix_letters = letters.substr(1);
    for (std::size_t x = 0; x < n; ++x) {
      auto& row = sys.polynomial_matrix[x];
      row[x] = Gf2Polynomial::constant(letters, true);
      std::vector<std::vector<CfgSymbol>> pre;
      std::vector<std::vector<CfgSymbol>> suf;
      for (int pi : by_head[static_cast<std::size_t>(unknown_nt[x])]) {
        const auto& body = tg.cfg.productions[static_cast<std::size_t>(pi)].body;
        if (body.size() == 1) {
          suf.push_back(body);  // completely final: the last letter alone
        } else if (body[0].terminal) {
          const int u = unknown(body[1]);
          if (u >= 0) row[static_cast<std::size_t>(u)] = row[static_cast<std::size_t>(u)] + first;
          else suf.push_back(body);
        } else {
          const int u = unknown(body[0]);
          if (u >= 0) row[static_cast<std::size_t>(u)] = row[static_cast<std::size_t>(u)] + last;
          else pre.push_back({body[0]});
        }
      }
      if (auto g = sub_grammar(tg.cfg, pre, prefix_letters)) {
        add_term(prefix.f[x], {SeriesFactor::of_grammar(std::move(*g), prefix_letters), SeriesFactor::poly(last)});
      }
      if (auto g = sub_grammar(tg.cfg, suf, suffix_letters)) {
        add_term(suffix.f[x], {SeriesFactor::of_grammar(std::move(*g), suffix_letters)});
      }
    }
    sys.matrix.assign(n, std::vector<SeriesExpr>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!sys.polynomial_matrix[i][j].is_zero()) sys.matrix[i][j].push_back({SeriesFactor::poly(sys.polynomial_matrix[i][j])});
      }
    }
    sys.rhs = {std::move(prefix), std::move(suffix)};
    return sys;
  }

  // Bounded automaton: matrix coefficients come from siblings of types
  // (1 -> 1) and (k -> k); every other rule is a simplifying split at the
  // state it passes through, or completely final.
  sys.matrix.assign(n, std::vector<SeriesExpr>(n));
  std::map<int, RhsClass> classes;  // key: split state, k for final
  auto rhs_for = [&](int key) -> RhsClass& {
    auto it = classes.find(key);
    if (it == classes.end()) {
      const std::string tag = key == static_cast<int>(k) ? "final" : "m=" + std::to_string(key + 1);
      it = classes.emplace(key, RhsClass{tag, std::vector<SeriesExpr>(n)}).first;
    }
    return it->second;
  };
  auto factor_of = [&](const CfgSymbol& s) {
    if (s.terminal) return SeriesFactor::poly(letter_poly(letters, letters.find(s.letter())));
    return SeriesFactor::of_typed(s.id);
  };
  for (std::size_t x = 0; x < n; ++x) {
    sys.matrix[x][x].push_back({});
    for (int pi : by_head[static_cast<std::size_t>(unknown_nt[x])]) {
      const auto& body = tg.cfg.productions[static_cast<std::size_t>(pi)].body;
      if (body.size() == 1) {
        const int u = unknown(body[0]);
        if (u >= 0) sys.matrix[x][static_cast<std::size_t>(u)].push_back({});
        else rhs_for(static_cast<int>(k)).f[x].push_back({factor_of(body[0])});
        continue;
      }
      const int r = body[0].terminal ? static_cast<int>(letters.find(body[0].letter()))
                                     : tg.types[static_cast<std::size_t>(body[0].id)].to;
      if (const int u = unknown(body[1]); u >= 0) {
        sys.matrix[x][static_cast<std::size_t>(u)].push_back({factor_of(body[0])});
      } else if (const int v = unknown(body[0]); v >= 0) {
        sys.matrix[x][static_cast<std::size_t>(v)].push_back({factor_of(body[1])});
      } else {
        const bool final = r == 0 || r == final_state;
        rhs_for(final ? static_cast<int>(k) : r).f[x].push_back({factor_of(body[0]), factor_of(body[1])});
      }
    }
  }
  for (auto& [key, c] : classes) sys.rhs.push_back(std::move(c));
  return sys;
}

SystemSolution solve_truncated(const LinearSystem& sys, const Exponents& bounds) {
  Evaluator ev(sys, bounds);
  const std::size_t n = sys.size();
  SeriesMatrix a(n, std::vector<TruncatedSeries>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = ev.expr(sys.matrix[i][j]);
  }
  SeriesMatrix b(n, std::vector<TruncatedSeries>(sys.rhs.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < sys.rhs.size(); ++c) b[i][c] = ev.expr(sys.rhs[c].f[i]);
  }
  const SeriesMatrix a0 = a;
  std::vector<TruncatedSeries> f(n, TruncatedSeries(sys.letters, bounds));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : b[i]) f[i] += v;
  }

  SystemSolution sol;
  sol.bounds = bounds;
  sol.det = n == 0 ? TruncatedSeries::one(sys.letters, bounds) : eliminate(a, b, sys.unknowns, &sol.elimination_order);
  sol.x.assign(n, TruncatedSeries(sys.letters, bounds));
  for (std::size_t c = 0; c < sys.rhs.size(); ++c) {
    std::vector<TruncatedSeries> part;
    for (std::size_t i = 0; i < n; ++i) {
      part.push_back(b[i][c]);
      sol.x[i] += b[i][c];
    }
    sol.partial.emplace_back(sys.rhs[c].tag, std::move(part));
  }
  sol.residual_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    TruncatedSeries lhs(sys.letters, bounds);
    for (std::size_t j = 0; j < n; ++j) lhs += a0[i][j] * sol.x[j];
    sol.residual_ok = sol.residual_ok && lhs == f[i];
  }
  return sol;
}

namespace {

using PolyMatrix = std::vector<std::vector<Gf2Polynomial>>;

// Determinant and inverse inside the box that holds every minor.
std::pair<TruncatedSeries, SeriesMatrix> invert_in_degree_box(const PolyMatrix& m) {
  const std::size_t n = m.size();
  const std::string& vars = m[0][0].vars();
  Exponents box(vars.size(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t v = 0; v < vars.size(); ++v) {
      int deg = 0;
      for (std::size_t i = 0; i < n; ++i) deg = std::max(deg, m[i][j].degree(static_cast<int>(v)));
      box[v] += deg;
    }
  }
  SeriesMatrix a(n, std::vector<TruncatedSeries>(n));
  SeriesMatrix b(n, std::vector<TruncatedSeries>(n, TruncatedSeries(vars, box)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j].lift(box);
    b[i][i] = TruncatedSeries::one(vars, box);
  }
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "x" + std::to_string(i + 1);
  TruncatedSeries det = eliminate(a, b, names, nullptr);
  return {std::move(det), std::move(b)};
}

}  // namespace

Gf2Polynomial determinant(const std::vector<std::vector<Gf2Polynomial>>& m) {
  if (m.empty()) throw DomainError("decomposition", "determinant of an empty matrix");
  return Gf2Polynomial(invert_in_degree_box(m).first);
}

std::vector<std::vector<Gf2Polynomial>> adjugate(const std::vector<std::vector<Gf2Polynomial>>& m) {
  if (m.empty()) return {};
  auto [det, inv] = invert_in_degree_box(m);
  PolyMatrix out(m.size(), std::vector<Gf2Polynomial>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = Gf2Polynomial(det * inv[i][j]);
  }
  return out;
}

}  // namespace gf2
