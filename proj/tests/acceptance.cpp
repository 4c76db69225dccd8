// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gf2/constructions.hpp"
#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"
#include "gf2/stratified.hpp"
#include "oracles.hpp"

using namespace gf2;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

Gf2Polynomial poly(const std::string& expr, const std::string& vars) { return parse_polynomial(expr, vars); }

// 1 + (random monomials of degree <= max_deg in the given axes, no constant).
Gf2Polynomial random_invertible(std::mt19937& rng, const std::string& vars, std::vector<int> axes, int max_deg,
                                int terms) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  Gf2Polynomial p = Gf2Polynomial::constant(vars, true);
  for (int t = 0; t < terms; ++t) {
    Exponents e(vars.size(), 0);
    for (int a : axes) e[static_cast<std::size_t>(a)] = deg(rng);
    if (std::all_of(e.begin(), e.end(), [](int v) { return v == 0; })) e[static_cast<std::size_t>(axes.front())] = 1;
    p = p + Gf2Polynomial::monomial(vars, e);
  }
  if (!p.is_invertible()) p = p + Gf2Polynomial::constant(vars, true);
  return p;
}

Gf2Polynomial random_polynomial(std::mt19937& rng, const std::string& vars, int max_deg, int terms) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  Gf2Polynomial p(vars);
  for (int t = 0; t < terms; ++t) {
    Exponents e(vars.size());
    for (auto& v : e) v = deg(rng);
    p = p + Gf2Polynomial::monomial(vars, e);
  }
  return p;
}

// ---------------------------------------------------------------------------

void criterion1(Check& c) {
  std::mt19937 rng(20260101);
  const auto words = oracle::all_words("ab", 10);
  int grammars = 0, resampled = 0;
  std::size_t accepted = 0;
  while (grammars < 50) {
    // 9 rules plus a possible S -> () keeps every grammar at <= 10 rules.
    const auto g = parse_grammar(oracle::random_grammar_text(rng, "ab", 5, 9));
    try {
      require_cycle_free(g);
    } catch (const DomainError&) {
      ++resampled;
      continue;
    }
    std::vector<bool> expect;
    try {
      for (const auto& w : words) expect.push_back(count_derivations_bruteforce(g, w) % 2 == 1);
    } catch (const ResourceLimit&) {
      ++resampled;
      continue;
    }
    ++grammars;
    ParityParser parser(g);
    for (std::size_t i = 0; i < words.size(); ++i) {
      const bool got = parser.member(words[i]);
      accepted += got;
      c.expect(got == expect[i], "grammar " + std::to_string(grammars) + " word '" + words[i] + "'");
    }
  }
  c.note << grammars << " grammars x " << words.size() << " words, " << accepted << " accepted, " << resampled
         << " cyclic/overflowing grammars resampled";
}

void criterion2(Check& c) {
  auto sets = [](int k) {
    std::vector<PairSet> out;
    for (const auto& s : enumerate_treelike(k)) out.push_back(s.pairs);
    return out;
  };
  c.expect(sets(2) == std::vector<PairSet>{{{1, 2}}}, "k = 2");
  c.expect(sets(3) == std::vector<PairSet>{{{1, 2}, {1, 3}, {2, 3}}}, "k = 3");
  const std::vector<PairSet> four = {{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}}, {{1, 2}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
  c.expect(sets(4) == four, "k = 4");
  c.note << "k = 2, 3, 4 give 1, 1, 2 sets; k = 4: " << render(four[0]) << " " << render(four[1]);
}

// Unrolls [l, r] -> [l+1, r], [l, r-1] until single pairs remain.
void unroll(int l, int r, PairSet& out) {
  out.insert({l, r});
  if (r - l < 2) return;
  unroll(l + 1, r, out);
  unroll(l, r - 1, out);
}

void criterion3(Check& c) {
  for (int k = 2; k <= 8; ++k) {
    PairSet unrolled;
    unroll(1, k, unrolled);
    PairSet xk;
    for (int i = 1; i <= k; ++i) {
      for (int j = i + 1; j <= k; ++j) xk.insert({i, j});
    }
    c.expect(unrolled == xk, "unrolled recursion is X_" + std::to_string(k));
    c.expect(pathlike(k).pairs == xk, "pathlike(" + std::to_string(k) + ")");
  }
  c.note << "k = 2..8";
}

void criterion4(Check& c) {
  // (a) d_k * (a + c) telescopes to a^(k+1) + c^(k+1).
  for (int k = 0; k <= 10; ++k) {
    const auto expect = Gf2Polynomial::monomial("ac", {k + 1, 0}) + Gf2Polynomial::monomial("ac", {0, k + 1});
    c.expect(d_k(k, poly("a + c", "ac")) == expect, "(a) k = " + std::to_string(k));
  }
  // (b) Invertible multipliers keep the whole degree-k slice.
  std::mt19937 rng(404);
  for (int t = 0; t < 200; ++t) {
    const auto qa = random_polynomial(rng, "ac", 3, 3);
    const auto qc = random_polynomial(rng, "ac", 3, 3);
    for (int k = 0; k <= 10; ++k) {
      const auto d = d_k(k, qa, qc);
      for (int i = 0; i <= k; ++i) c.expect(d.coefficient({i, k - i}), "(b) multiplier " + std::to_string(t));
    }
  }
  // (c) sum a^n b^(n+m) c^m, written down directly.
  const Exponents box{16, 16, 16};
  TruncatedSeries w("abc", box);
  for (int n = 0; n <= 16; ++n) {
    for (int m = 0; n + m <= 16; ++m) w.set({n, n + m, m}, true);
  }
  const auto concat = gf2_concat(parse_grammar("start: S\nS -> a S b | ()\n"), parse_grammar("start: S\nS -> b S c | ()\n"));
  c.expect(bounded_series(concat, box) == w, "(c) concatenation series");
  for (int k = 0; k <= 16; ++k) {
    c.expect(separation_bound(w, k) == k / 2, "(c) bound at b^" + std::to_string(k));
    if (k >= 2) c.expect(*separation_bound(w, k) > *separation_bound(w, k - 2), "(c) growth");
  }
  const auto g = inverse(poly("1 + a*b", "abc"), box);
  const auto h = inverse(poly("1 + b*c", "abc"), box);
  for (int t = 0; t < 40; ++t) {
    const auto p = random_polynomial(rng, "abc", 3, 4);
    const auto sp = p.lift(box) * g;
    const auto sr = p.lift(box) * h;
    for (int k = 0; k <= 16; ++k) {
      const auto bp = separation_bound(sp, k);
      const auto br = separation_bound(sr, k);
      c.expect(!bp || *bp <= p.degree(2), "(c) p * G(a,b)");
      c.expect(!br || *br <= p.degree(0), "(c) r * H(b,c)");
    }
  }
  c.note << "(a) k <= 10, (b) 200 multipliers x k <= 10, (c) k <= 16 and 40 single summands of each kind";
}

const std::vector<const char*> kNormalForm = {
    "S -> a A | b\nA -> S c\n",
    "S -> a S | S c | b\n",
    "S -> a S | B c\nB -> b B | b\n",
    "S -> a A | a B\nA -> S c\nB -> b B | b\n",
    "S -> a A | b | ()\nA -> S c\n",
    "S -> A c | c\nA -> a A | b A | a\n",
    "S -> a A\nA -> b B\nB -> c | B c\n",
    "S -> a A | b B\nA -> S c | b\nB -> b B | B c | c\n",
    "S -> a S | b S | c S | a | b | c\n",
    "S -> a A | A c | b\nA -> a S | S c | c\n",
    "S -> a A | B c\nA -> a A | B c\nB -> b | b B\n",
    "S -> a S | S c | b B\nB -> b B | c\n",
    "S -> a A | c\nA -> a S | b\n",
    "S -> A c | B c\nA -> a A | a B\nB -> b B | b\n",
    "S -> a A | S c | ()\nA -> b A | b | A c\n",
    "S -> a B | b C\nB -> S c | b B | b\nC -> c C | c\n",
    "S -> a S | a A\nA -> A c | b A | b\n",
    "S -> a A | b B | c C\nA -> S c\nB -> S b\nC -> c\n",
    "S -> a A | b\nA -> a B | S c\nB -> S c | c\n",
    "S -> b S | S b | a A\nA -> A c | c\n",
};

void criterion5(Check& c) {
  std::vector<Gf2Grammar> grammars;
  for (const char* text : kNormalForm) grammars.push_back(parse_grammar(std::string("alphabet: a b c\nstart: S\n") + text));
  std::mt19937 rng(515);
  while (grammars.size() < kNormalForm.size() + 30) {
    grammars.push_back(parse_grammar(oracle::random_linear_grammar_text(rng, "abc", 4, 8, true)));
  }
  const Exponents box{12, 12, 12};
  std::size_t systems = 0, total = 0, summands = 0;
  for (std::size_t n = 0; n < grammars.size(); ++n) {
    const auto& g = grammars[n];
    const std::string id = (n < kNormalForm.size() ? "hand-written " : "random ") + std::to_string(n + 1);
    c.expect(g.is_linear(), id + " is linear");
    const auto sys = extract_system(intersect_linear_3state(g, 3));
    const auto& m = sys.polynomial_matrix;
    systems += sys.size() > 0;
    total += sys.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) c.expect(m[i][j].is_invertible() == (i == j), id + " matrix shape");
    }
    // An empty system (no word reaches the last letter) has determinant 1.
    if (!m.empty()) c.expect(determinant(m).is_invertible(), id + " det invertible");
    const auto sol = solve_truncated(sys, box);
    c.expect(sol.residual_ok, id + " residual");
    // Residual once more, term by term: sum_j A_ij x_j == sum of f_i.
    for (std::size_t i = 0; i < sys.size(); ++i) {
      TruncatedSeries lhs("abc", box), rhs("abc", box);
      for (std::size_t j = 0; j < sys.size(); ++j) lhs += m[i][j].lift(box) * sol.x[j];
      for (const auto& cls : sys.rhs) rhs += evaluate(cls.f[i], sys, box);
      c.expect(lhs == rhs, id + " A x = f");
    }
    const auto d = decompose_linear(g, 3, box);
    summands += d.summands.size();
    c.expect(d.target == bounded_series(g, box), id + " target");
    c.expect(d.verified(), id + " re-summation");
  }
  c.note << grammars.size() << " grammars (" << kNormalForm.size() << " hand-written), " << systems
         << " non-empty systems, " << total << " unknowns, " << summands << " summands at (12,12,12)";
}

void criterion6(Check& c) {
  std::mt19937 rng(616);
  // Path-like.
  int built = 0;
  for (int t = 0; t < 20; ++t) {
    const int k = t == 0 ? 2 : 2 + t % 2;
    auto spec = make_spec(k, StratifiedKind::pathlike);
    std::vector<Gf2Polynomial> dens;
    if (t == 0) {
      spec.denominators[{1, 2}] = poly("1 + a*b", "ab");
    } else {
      spec.numerator = random_polynomial(rng, spec.letters, 2, 3);
      const auto chains = path_chains(k);
      const auto& chain = chains[static_cast<std::size_t>(t) % chains.size()].pairs;
      for (const auto& pair : chain) {
        if (pair == Pair{1, k} || rng() % 2) {
          spec.denominators[pair] = random_invertible(rng, spec.letters, {pair.first - 1, pair.second - 1}, 2, 2);
        }
      }
    }
    for (const auto& [pair, p] : spec.denominators) dens.push_back(p);
    const Exponents box(static_cast<std::size_t>(k), 8);
    const auto g = build_pathlike_linear(spec, box);
    c.expect(g.is_linear(), "path-like " + std::to_string(t) + " linear");
    c.expect(quotient_check(spec.numerator.lift(box), dens, bounded_series(g, box)), "path-like " + std::to_string(t));
    if (t == 0) {
      for (const auto& w : oracle::all_words("ab", 10)) {
        const auto n = w.size() / 2;
        c.expect(parity_member(g, w) == (w.size() % 2 == 0 && w == std::string(n, 'a') + std::string(n, 'b')),
                 "1/(1+ab) is {a^n b^n}");
      }
    }
    ++built;
  }
  // Tree-like over three letters; leaves mix rational functions and grammars.
  const Exponents box{8, 8, 8};
  for (int t = 0; t < 20; ++t) {
    auto spec = make_spec(3, StratifiedKind::treelike);
    Gf2Polynomial numerator = Gf2Polynomial::constant("abc", true);
    std::vector<Gf2Polynomial> dens;
    for (int i = 0; i < 3; ++i) {
      const char x = spec.letters[static_cast<std::size_t>(i)];
      auto& leaf = spec.leaves[static_cast<std::size_t>(i)];
      const std::string xs(1, x);
      switch ((t + i) % 4) {
        case 0:
          break;
        case 1:
          leaf.numerator = random_polynomial(rng, spec.letters, 0, 1) + Gf2Polynomial::variable(spec.letters, i);
          leaf.numerator = leaf.numerator + Gf2Polynomial::constant(spec.letters, true);
          leaf.denominator = random_invertible(rng, spec.letters, {i}, 3, 2);
          numerator = numerator * leaf.numerator;
          dens.push_back(leaf.denominator);
          break;
        case 2:
          leaf.grammar = parse_grammar("start: S\nS -> " + xs + " " + xs + " S | ()\n");
          dens.push_back(poly("1 + " + xs + "^2", spec.letters));
          break;
        default:
          leaf.grammar = parse_grammar("start: S\nS -> " + xs + " S | " + xs + "\n");
          numerator = numerator * Gf2Polynomial::variable(spec.letters, i);
          dens.push_back(poly("1 + " + xs, spec.letters));
      }
    }
    for (const Pair pair : {Pair{1, 2}, Pair{2, 3}, Pair{1, 3}}) {
      if (t == 0 || rng() % 3 != 0) {
        spec.denominators[pair] = random_invertible(rng, spec.letters, {pair.first - 1, pair.second - 1}, 2, 2);
        dens.push_back(spec.denominators[pair]);
      }
    }
    const auto g = build_treelike(spec, box);
    c.expect(quotient_check(numerator.lift(box), dens, bounded_series(g, box)), "tree-like " + std::to_string(t));
    ++built;
  }
  c.note << built << " grammars built (20 path-like incl. 1/(1+ab), 20 tree-like) at (8,8,8)";
}

void criterion7(Check& c) {
  const auto g = gf2_concat(parse_grammar("start: S\nS -> a S b | ()\n"), parse_grammar("start: S\nS -> b S c | ()\n"));
  ParityParser parser(g);
  std::string w;
  std::size_t words = 0, members = 0;
  // Depth-first over all words, extending the parser one letter at a time.
  std::function<void()> visit = [&] {
    ++words;
    const auto i = w.find_first_not_of('a');
    const auto j = i == std::string::npos ? w.size() : w.find_first_not_of('b', i);
    const auto l = j == std::string::npos ? w.size() : w.find_first_not_of('c', j);
    const std::size_t na = std::min(i, w.size());
    const std::size_t nb = std::min(j, w.size()) - na;
    const bool expect = l == std::string::npos || l == w.size() ? nb == na + (w.size() - na - nb) : false;
    const bool got = parser.accepts();
    members += got;
    c.expect(got == expect, "word '" + w + "'");
    if (w.size() == 15) return;
    for (char x : {'a', 'b', 'c'}) {
      parser.push(x);
      w.push_back(x);
      visit();
      w.pop_back();
      parser.pop();
    }
  };
  visit();
  c.note << words << " words of length <= 15, " << members << " members";
}

void criterion8(Check& c) {
  std::mt19937 rng(808);
  const Exponents box{10, 10};
  const auto one = TruncatedSeries::one("ab", box);
  for (int t = 0; t < 1000; ++t) {
    const auto x = oracle::random_series(rng, "ab", box);
    const auto y = oracle::random_series(rng, "ab", box);
    const auto z = oracle::random_series(rng, "ab", box);
    const std::string id = "triple " + std::to_string(t);
    c.expect(oracle::sparse(x * y) == oracle::multiply(oracle::sparse(x), oracle::sparse(y), box), id + " product");
    c.expect((x * y) * z == x * (y * z), id + " associativity");
    c.expect(x * (y + z) == x * y + x * z, id + " distributivity");
    c.expect(x * y == y * x, id + " commutativity");
    c.expect((x + y) * (x + y) == x * x + y * y, id + " (x+y)^2");
    oracle::Sparse frob;
    for (const auto& e : x.support()) {
      if (2 * e[0] <= box[0] && 2 * e[1] <= box[1]) frob.insert({2 * e[0], 2 * e[1]});
    }
    c.expect(oracle::sparse(x * x) == frob, id + " x^2 = x(a^2, b^2)");
    auto u = x;
    u.set({0, 0}, true);
    const auto inv = inverse(u);
    c.expect(u * inv == one, id + " inverse");
    c.expect(oracle::multiply(oracle::sparse(u), oracle::sparse(inv), box) == oracle::Sparse{{0, 0}}, id + " inverse (schoolbook)");
  }
  c.note << "1000 triples at (10,10)";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_s;  // 0: none
    void (*run)(Check&);
  };
  const std::vector<Criterion> all = {
      {1, "parity_member equals brute-force derivation count mod 2", 60, criterion1},
      {2, "tree-like enumeration for k = 2, 3, 4", 0, criterion2},
      {3, "pathlike(k) = X_k for 2 <= k <= 8", 0, criterion3},
      {4, "d_k and separation-bound mechanics", 30, criterion4},
      {5, "linear pipeline soundness over k = 3", 120, criterion5},
      {6, "lower-bound builders match their spec series", 0, criterion6},
      {7, "{a^n b^n} (.) {b^m c^m} = {a^n b^(n+m) c^m} up to length 15", 0, criterion7},
      {8, "series-ring axioms on random triples", 0, criterion8},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_s > 0 && s > cr.limit_s) {
      c.ok = false;
      c.note << "; over the " << cr.limit_s << " s limit";
    }
    failed += !c.ok;
    char time[32];
    std::snprintf(time, sizeof time, "%.2f s", s);
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " [" << time << "] ("
              << c.note.str() << ")" << std::endl;
  }
  return failed;
}
