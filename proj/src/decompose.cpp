#include <algorithm>
#include <map>

#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"

namespace gf2 {

TruncatedSeries Summand::value(const Exponents& bounds) const {
  TruncatedSeries out = numerator.lift(bounds);
  for (const auto& [pair, p] : denominators) out = out * inverse(p, bounds);
  return out;
}

TruncatedSeries SummandDecomposition::resum() const {
  TruncatedSeries out(letters, bounds);
  for (const auto& s : summands) out += s.value(bounds);
  return out;
}

namespace {

struct Part {
  Gf2Polynomial numerator;
  std::map<Pair, Gf2Polynomial> denominators;
};

PairSet keys(const Part& p) {
  PairSet out;
  for (const auto& [pair, d] : p.denominators) out.insert(pair);
  return out;
}

void multiply_denominator(Part& part, const Pair& pair, const Gf2Polynomial& d) {
  if (d == Gf2Polynomial::constant(d.vars(), true)) return;
  auto it = part.denominators.find(pair);
  if (it == part.denominators.end()) part.denominators.emplace(pair, d);
  else it->second = it->second * d;
}

// One part per pair-set: a/p + b/q = (a q + b p) / (p q), pair by pair, with
// equal denominators shared.
std::vector<Part> consolidate(std::vector<Part> parts) {
  std::map<PairSet, Part> merged;
  for (auto& part : parts) {
    if (part.numerator.is_zero()) continue;
    const PairSet key = keys(part);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, std::move(part));
      continue;
    }
    Part& acc = it->second;
    Gf2Polynomial mine = part.numerator;
    for (const auto& pair : key) {
      const auto& p = acc.denominators.at(pair);
      const auto& q = part.denominators.at(pair);
      if (p == q) continue;
      acc.numerator = acc.numerator * q;
      mine = mine * p;
      acc.denominators.at(pair) = p * q;
    }
    acc.numerator = acc.numerator + mine;
  }
  std::vector<Part> out;
  for (auto& [key, part] : merged) {
    if (!part.numerator.is_zero()) out.push_back(std::move(part));
  }
  return out;
}

Cfg union_cfg(const Cfg& cfg, const std::vector<int>& roots) {
  Cfg joined = cfg;
  const int top = joined.intern(joined.fresh_name("T"));
  for (int r : roots) joined.add(top, {CfgSymbol::n(r)});
  joined.start = top;
  std::vector<int> remap;
  Cfg pruned = prune(joined, {top}, &remap);
  return remap[static_cast<std::size_t>(top)] < 0 ? Cfg{} : pruned;
}

class Decomposer {
 public:
  explicit Decomposer(std::string letters) : letters_(std::move(letters)) {}

  // Parts of the series of `cfg` restricted to a_l* ... a_r* (0-based).
  std::vector<Part> analyze(const Cfg& cfg, int l, int r, const Pair& parent) {
    if (cfg.size() == 0) return {};
    if (l == r) return single_letter(cfg, l, parent);
    const std::string segment = letters_.substr(static_cast<std::size_t>(l), static_cast<std::size_t>(r - l + 1));
    const TypedGrammar tg = intersect_linear_3state(cfg, segment);
    if (tg.starts.empty()) return {};
    const Pair here{l + 1, r + 1};
    std::vector<Part> parts;

    // Words without the last letter.
    std::vector<int> low;
    std::optional<int> top;
    for (int s : tg.starts) {
      if (tg.types[static_cast<std::size_t>(s)].to < 2) low.push_back(s);
      else top = s;
    }
    for (auto& p : analyze(union_cfg(tg.cfg, low), l, r - 1, here)) parts.push_back(std::move(p));

    if (top) {
      const LinearSystem sys = extract_system(tg);
      const auto it = std::find(sys.unknowns.begin(), sys.unknowns.end(), tg.display(*top));
      const std::size_t s = static_cast<std::size_t>(it - sys.unknowns.begin());
      std::vector<int> axes;
      for (int i = l; i <= r; ++i) axes.push_back(i);
      const Gf2Polynomial det = determinant(sys.polynomial_matrix).embed(letters_, axes);
      const auto adj = adjugate(sys.polynomial_matrix);
      for (std::size_t x = 0; x < sys.size(); ++x) {
        if (adj[s][x].is_zero()) continue;
        const Gf2Polynomial weight = adj[s][x].embed(letters_, axes);
        for (std::size_t c = 0; c < sys.rhs.size(); ++c) {
          const bool prefix = c == 0;
          for (const auto& term : sys.rhs[c].f[x]) {
            Gf2Polynomial w = weight;
            const SeriesFactor* grammar = nullptr;
            for (const auto& f : term) {
              if (f.kind == SeriesFactor::Kind::grammar) grammar = &f;
              else w = w * f.polynomial.embed(letters_, axes);
            }
            const auto sub = prefix ? analyze(to_cfg(*grammar->grammar), l, r - 1, here)
                                    : analyze(to_cfg(*grammar->grammar), l + 1, r, here);
            for (auto p : sub) {
              p.numerator = p.numerator * w;
              multiply_denominator(p, here, det);
              parts.push_back(std::move(p));
            }
          }
        }
      }
    }
    return consolidate(std::move(parts));
  }

 private:
  // One-state system over a single letter c: x_A = c (sum over A -> cB and
  // A -> Bc of x_B) + [A -> ()] + c [A -> c].
  std::vector<Part> single_letter(const Cfg& cfg, int l, const Pair& parent) {
    const Cfg nf = linear_normal_form(cfg);
    if (nf.size() == 0) return {};
    const char c = letters_[static_cast<std::size_t>(l)];
    const std::size_t n = static_cast<std::size_t>(nf.size());
    const Gf2Polynomial zero(letters_);
    const Gf2Polynomial one = Gf2Polynomial::constant(letters_, true);
    const Gf2Polynomial var = Gf2Polynomial::variable(letters_, l);
    std::vector<std::vector<Gf2Polynomial>> m(n, std::vector<Gf2Polynomial>(n, zero));
    std::vector<Gf2Polynomial> f(n, zero);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = one;
    for (const auto& p : nf.productions) {
      const std::size_t a = static_cast<std::size_t>(p.head);
      if (p.body.empty()) {
        f[a] = f[a] + one;
      } else if (p.body.size() == 1) {
        if (p.body[0].letter() == c) f[a] = f[a] + var;
      } else {
        const auto& t = p.body[0].terminal ? p.body[0] : p.body[1];
        const auto& b = p.body[0].terminal ? p.body[1] : p.body[0];
        if (t.letter() == c) m[a][static_cast<std::size_t>(b.id)] = m[a][static_cast<std::size_t>(b.id)] + var;
      }
    }
    const auto adj = adjugate(m);
    Part part{zero, {}};
    const std::size_t s = static_cast<std::size_t>(nf.start);
    for (std::size_t x = 0; x < n; ++x) part.numerator = part.numerator + adj[s][x] * f[x];
    if (part.numerator.is_zero()) return {};
    multiply_denominator(part, parent, determinant(m));
    return {std::move(part)};
  }

  std::string letters_;
};

}  // namespace

SummandDecomposition decompose_linear(const Gf2Grammar& g, int k, const Exponents& bounds) {
  if (k < 2 || static_cast<int>(g.terminals().size()) != k) {
    throw DomainError("decomposition", "k = " + std::to_string(k) + " does not match the alphabet '" +
                                           g.terminals() + "' (k >= 2 required)");
  }
  if (!g.is_linear()) throw DomainError("decomposition", "decompose_linear needs a linear grammar");
  if (bounds.size() != static_cast<std::size_t>(k)) throw DomainError("decomposition", "bounds do not match k");
  require_cycle_free(g);
  Decomposer d(g.terminals());
  SummandDecomposition out;
  out.letters = g.terminals();
  out.bounds = bounds;
  out.target = bounded_series(g, bounds);
  for (auto& p : d.analyze(to_cfg(g), 0, k - 1, {1, k})) {
    Summand s;
    s.pairs = keys(p);
    s.numerator = std::move(p.numerator);
    s.denominators = std::move(p.denominators);
    out.summands.push_back(std::move(s));
  }
  return out;
}

Gf2Polynomial d_k(int k, const Gf2Polynomial& multiplier) {
  if (k < 0) throw DomainError("decomposition", "d_k needs k >= 0");
  if (multiplier.vars() != "ac") throw DomainError("decomposition", "d_k multiplier must be a polynomial in a and c");
  std::vector<Exponents> slice;
  for (int i = 0; i <= k; ++i) slice.push_back({i, k - i});
  return Gf2Polynomial::from_monomials("ac", slice) * multiplier;
}

Gf2Polynomial d_k(int k, const Gf2Polynomial& q_a, const Gf2Polynomial& q_c) {
  const auto a = Gf2Polynomial::variable("ac", 0);
  const auto c = Gf2Polynomial::variable("ac", 1);
  return d_k(k, Gf2Polynomial::constant("ac", true) + a * q_a + c * q_c);
}

std::optional<int> separation_bound(const TruncatedSeries& s, int k) {
  if (s.arity() != 3) throw DomainError("decomposition", "separation_bound needs a series in three variables");
  if (k < 0 || k > s.bounds()[1]) {
    throw DomainError("decomposition", "b^" + std::to_string(k) + " lies outside the series bounds");
  }
  std::optional<int> best;
  for (const auto& e : s.support()) {
    if (e[1] != k) continue;
    const int v = std::min(e[0], e[2]);
    if (!best || v > *best) best = v;
  }
  return best;
}

}  // namespace gf2
