#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "gf2/constructions.hpp"
#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"
#include "oracles.hpp"

using namespace gf2;

namespace {

using Predicate = std::function<bool(const std::string&)>;

Gf2Polynomial poly(const char* expr, const std::string& vars) { return parse_polynomial(expr, vars); }

// Number of factorizations w = uv with p1(u) and p2(v), mod 2.
bool concat_parity(const Predicate& p1, const Predicate& p2, const std::string& w) {
  bool odd = false;
  for (std::size_t i = 0; i <= w.size(); ++i) odd ^= p1(w.substr(0, i)) && p2(w.substr(i));
  return odd;
}

// x^n y^n, n >= lo.
Predicate balanced(char x, char y, std::size_t lo = 0) {
  return [=](const std::string& w) {
    const std::size_t n = w.size() / 2;
    return w.size() % 2 == 0 && n >= lo && w == std::string(n, x) + std::string(n, y);
  };
}

// series * product(denominators) == numerator on the series box, with the
// products taken monomial by monomial.
bool times_denominators(const TruncatedSeries& s, const std::vector<Gf2Polynomial>& dens,
                        const oracle::Sparse& numerator) {
  oracle::Sparse acc = oracle::sparse(s);
  for (const auto& d : dens) {
    const auto m = d.monomials();
    acc = oracle::multiply(acc, oracle::Sparse(m.begin(), m.end()), s.bounds());
  }
  oracle::Sparse want;
  for (const auto& e : numerator) {
    if (within(e, s.bounds())) want.insert(e);
  }
  return acc == want;
}

oracle::Sparse monomials(const Gf2Polynomial& p) {
  const auto m = p.monomials();
  return {m.begin(), m.end()};
}

}  // namespace

TEST_CASE("gf2_concat") {
  SUBCASE("a^n b^n then b^m c^m") {
    const auto g1 = parse_grammar("start: S\nS -> a S b | ()\n");
    const auto g2 = parse_grammar("start: S\nS -> b S c | ()\n");
    const auto g = gf2_concat(g1, g2);
    CHECK(g.terminals() == "abc");
    ParityParser parser(g);
    for (const auto& w : oracle::all_words("abc", 9)) {
      CHECK_MESSAGE(parser.member(w) == concat_parity(balanced('a', 'b'), balanced('b', 'c'), w), w);
    }
    CHECK(parser.member("aabbbbcc"));
    CHECK(parser.member(std::string(5, 'a') + std::string(5, 'b')));
  }
  SUBCASE("long words") {
    const auto g = gf2_concat(parse_grammar("start: S\nS -> a S b | ()\n"), parse_grammar("start: S\nS -> b S c | ()\n"));
    ParityParser parser(g);
    for (int i = 0; i <= 5; ++i) {
      for (int j = 0; j <= 5; ++j) {
        for (int l = 0; l <= 5; ++l) {
          const std::string w = std::string(i, 'a') + std::string(j, 'b') + std::string(l, 'c');
          CHECK(parser.member(w) == (j == i + l));
        }
      }
    }
  }
  SUBCASE("epsilon is the unit") {
    const auto g = parse_grammar("start: S\nS -> a S b | a b\n");
    const auto e = parse_grammar("start: S\nS -> ()\n");
    const auto left = gf2_concat(g, e);
    const auto right = gf2_concat(e, g);
    for (const auto& w : oracle::all_words("ab", 10)) {
      CHECK(parity_member(left, w) == parity_member(g, w));
      CHECK(parity_member(right, w) == parity_member(g, w));
    }
  }
  SUBCASE("a* a* has the even lengths") {
    const auto star = parse_grammar("start: S\nS -> a S | ()\n");
    const auto g = gf2_concat(star, star);
    for (std::size_t n = 0; n <= 15; ++n) CHECK(parity_member(g, std::string(n, 'a')) == (n % 2 == 0));
  }
  SUBCASE("clashing names are kept apart") {
    const auto g1 = parse_grammar("start: S\nS -> A\nA -> a\n");
    const auto g2 = parse_grammar("start: S\nS -> A\nA -> b\n");
    const auto g = gf2_concat(g1, g2);
    CHECK(parity_member(g, "ab"));
    CHECK_FALSE(parity_member(g, "aa"));
    CHECK_FALSE(parity_member(g, "bb"));
  }
}

TEST_CASE("sym_diff") {
  const auto g1 = parse_grammar("start: S\nS -> a S b | ()\n");
  const auto g2 = parse_grammar("start: S\nS -> a S | B | ()\nB -> b B | b\n");
  const auto g = sym_diff(g1, g2);
  const Predicate in2 = [](const std::string& w) {
    const auto n = w.find_first_not_of('a');
    return n == std::string::npos || w.find_first_not_of('b', n) == std::string::npos;
  };
  for (const auto& w : oracle::all_words("ab", 10)) CHECK((parity_member(g, w)) == (balanced('a', 'b')(w) != in2(w)));
  SUBCASE("self difference is empty") {
    const auto z = sym_diff(g1, g1);
    for (const auto& w : oracle::all_words("ab", 8)) CHECK_FALSE(parity_member(z, w));
  }
}

TEST_CASE("divide_by_invertible") {
  SUBCASE("a b over 1 + ab") {
    const auto g = divide_by_invertible(parse_grammar("start: S\nS -> a b\n"), poly("1 + a*b", "ab"), 2);
    for (const auto& w : oracle::all_words("ab", 12)) CHECK(parity_member(g, w) == balanced('a', 'b', 1)(w));
  }
  SUBCASE("series identity") {
    std::mt19937 rng(5);
    const auto g = parse_grammar("start: S\nS -> a S c | B\nB -> b B | b\n");
    const Exponents box{8, 8, 8};
    for (const char* p : {"1 + a", "1 + c", "1 + a*c + a^2", "1 + a*c^2 + c^3 + a^2*c"}) {
      const auto q = poly(p, "abc");
      const auto d = divide_by_invertible(g, q, 3);
      CHECK(times_denominators(bounded_series(d, box), {q}, oracle::sparse(bounded_series(g, box))));
      CHECK(d.is_linear());
    }
  }
  CHECK_THROWS_AS(divide_by_invertible(parse_grammar("start: S\nS -> a b\n"), poly("a*b", "ab"), 2), DomainError);
  CHECK_THROWS_AS(divide_by_invertible(parse_grammar("start: S\nS -> a b c\n"), poly("1 + b", "abc"), 3), DomainError);
  CHECK_THROWS_AS(divide_by_invertible(parse_grammar("start: S\nS -> a b\n"), poly("1 + a", "ab"), 3), DomainError);
}

TEST_CASE("build_treelike") {
  SUBCASE("1 / ((1+ab)(1+ac))") {
    auto spec = make_spec(3, StratifiedKind::treelike);
    spec.denominators[{1, 2}] = poly("1 + a*b", "abc");
    spec.denominators[{1, 3}] = poly("1 + a*c", "abc");
    const Exponents box{8, 8, 8};
    const auto g = build_treelike(spec, box);
    CHECK(times_denominators(bounded_series(g, box), {poly("1 + a*b", "abc"), poly("1 + a*c", "abc")}, {{0, 0, 0}}));
    CHECK(quotient_check(poly("1", "abc").lift(box), {poly("1 + a*b", "abc"), poly("1 + a*c", "abc")},
                         bounded_series(g, box)));
  }
  SUBCASE("leaves") {
    auto spec = make_spec(3, StratifiedKind::treelike);
    spec.leaves[0].denominator = poly("1 + a", "abc");
    spec.leaves[1].grammar = parse_grammar("start: S\nS -> b b S | ()\n");
    spec.leaves[2].numerator = poly("c + c^2", "abc");
    spec.denominators[{2, 3}] = poly("1 + b*c + b^2", "abc");
    spec.denominators[{1, 3}] = poly("1 + a^2*c", "abc");
    const Exponents box{7, 7, 7};
    const auto g = build_treelike(spec, box);
    // Leaf 2 is 1 / (1 + b^2).
    CHECK(times_denominators(bounded_series(g, box),
                             {poly("1 + a", "abc"), poly("1 + b^2", "abc"), poly("1 + b*c + b^2", "abc"),
                              poly("1 + a^2*c", "abc")},
                             monomials(poly("c + c^2", "abc"))));
  }
  SUBCASE("k = 4 with an explicit witness") {
    auto spec = make_spec(4, StratifiedKind::treelike);
    for (const auto& s : enumerate_treelike(4)) {
      if (s.pairs.count({2, 4})) spec.witness = s;
    }
    REQUIRE(spec.witness);
    spec.denominators[{2, 4}] = poly("1 + b*d", "abcd");
    spec.denominators[{1, 4}] = poly("1 + a + d^2", "abcd");
    spec.denominators[{3, 4}] = poly("1 + c*d", "abcd");
    const Exponents box{5, 5, 5, 5};
    const auto g = build_treelike(spec, box);
    std::vector<Gf2Polynomial> dens;
    for (const auto& [pair, p] : spec.denominators) dens.push_back(p);
    CHECK(times_denominators(bounded_series(g, box), dens, {{0, 0, 0, 0}}));
    spec.witness.reset();
    CHECK_NOTHROW(build_treelike(spec, box));
  }
  SUBCASE("rejections") {
    auto spec = make_spec(3, StratifiedKind::treelike);
    spec.denominators[{1, 2}] = poly("a*b", "abc");
    CHECK_THROWS_AS(build_treelike(spec, {4, 4, 4}), DomainError);
    spec.denominators[{1, 2}] = poly("1 + c", "abc");
    CHECK_THROWS_AS(build_treelike(spec, {4, 4, 4}), DomainError);
    spec = make_spec(4, StratifiedKind::treelike);
    spec.denominators[{1, 3}] = poly("1 + a", "abcd");
    spec.denominators[{2, 4}] = poly("1 + b", "abcd");
    CHECK_THROWS_AS(build_treelike(spec, {4, 4, 4, 4}), DomainError);
  }
}

TEST_CASE("build_pathlike_linear") {
  SUBCASE("1 / (1 + ab)") {
    auto spec = make_spec(2, StratifiedKind::pathlike);
    spec.denominators[{1, 2}] = poly("1 + a*b", "ab");
    const auto g = build_pathlike_linear(spec, {10, 10});
    CHECK(g.is_linear());
    for (const auto& w : oracle::all_words("ab", 12)) CHECK(parity_member(g, w) == balanced('a', 'b')(w));
  }
  SUBCASE("chains over three letters") {
    const Exponents box{8, 8, 8};
    const std::vector<std::map<Pair, const char*>> cases = {
        {{{1, 3}, "1 + a*c"}, {{1, 2}, "1 + a*b"}},
        {{{1, 3}, "1 + a*c + c^2"}, {{2, 3}, "1 + b^2*c"}},
        {{{2, 3}, "1 + b*c"}},
        {{{1, 2}, "1 + a + b"}},
        {},
    };
    for (const char* num : {"b", "1 + a*b*c", "a^2*b + c + b*c^3", "a*c + b^2"}) {
      for (const auto& dens : cases) {
        auto spec = make_spec(3, StratifiedKind::pathlike);
        spec.numerator = poly(num, "abc");
        std::vector<Gf2Polynomial> list;
        for (const auto& [pair, p] : dens) {
          spec.denominators[pair] = poly(p, "abc");
          list.push_back(poly(p, "abc"));
        }
        const auto g = build_pathlike_linear(spec, box);
        CHECK(g.is_linear());
        CHECK(times_denominators(bounded_series(g, box), list, monomials(spec.numerator)));
        const auto d = decompose_linear(g, 3, box);
        CHECK(d.verified());
      }
    }
  }
  SUBCASE("zero numerator") {
    auto spec = make_spec(2, StratifiedKind::pathlike);
    spec.numerator = Gf2Polynomial("ab");
    spec.denominators[{1, 2}] = poly("1 + a*b", "ab");
    CHECK(bounded_series(build_pathlike_linear(spec, {4, 4}), {4, 4}).is_zero());
  }
  SUBCASE("pairs off one chain") {
    auto spec = make_spec(3, StratifiedKind::pathlike);
    spec.numerator = poly("b", "abc");
    spec.denominators[{1, 2}] = poly("1 + a*b", "abc");
    spec.denominators[{2, 3}] = poly("1 + b*c", "abc");
    spec.denominators[{1, 3}] = poly("1 + a*c", "abc");
    CHECK_THROWS_AS(build_pathlike_linear(spec, {6, 6, 6}), DomainError);
    // Still a valid series; only the linear construction is unavailable.
    spec.denominators.erase({1, 3});
    CHECK_THROWS_AS(build_pathlike_linear(spec, {6, 6, 6}), DomainError);
  }
}

TEST_CASE("parse_spec") {
  SUBCASE("path-like") {
    const auto spec = parse_spec("k: 3\nkind: pathlike  # comment\nnumerator: b\ndenom 1 2: 1 + a*b\ndenom 1 3: 1 + a*c\n");
    CHECK(spec.k == 3);
    CHECK(spec.letters == "abc");
    CHECK(spec.numerator == poly("b", "abc"));
    CHECK(spec.denominators.size() == 2);
    CHECK_NOTHROW(build_pathlike_linear(spec, {6, 6, 6}));
  }
  SUBCASE("tree-like with alphabet, leaves and witness") {
    const auto dir = std::filesystem::temp_directory_path() / "gf2_spec_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "leaf.gf2") << "start: S\nS -> y S | ()\n";
    const auto spec = parse_spec(
        "k: 3\nkind: tree-like\nalphabet: x y z\nleaf 1: 1 / 1 + x\nleaf 2 grammar: leaf.gf2\n"
        "denom 1 3: 1 + x*z\nwitness: {(1,2),(2,3),(1,3)}\n",
        dir);
    CHECK(spec.letters == "xyz");
    REQUIRE(spec.leaves[1].grammar);
    CHECK(spec.leaves[0].denominator == poly("1 + x", "xyz"));
    REQUIRE(spec.witness);
    const Exponents box{6, 6, 6};
    const auto g = build_treelike(spec, box);
    CHECK(g.terminals() == "xyz");
    CHECK(times_denominators(bounded_series(g, box), {poly("1 + x", "xyz"), poly("1 + y", "xyz"), poly("1 + x*z", "xyz")},
                             {{0, 0, 0}}));
  }
  CHECK_THROWS_AS(parse_spec("kind: pathlike\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("k: 2\nkind: pathlike\ncolour: red\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("k: 2\nkind: pathlike\ndenom 1 2: 1 + q\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("k: 2\nkind: pathlike\ndenom 1 2: a*b\n"), DomainError);
  CHECK_THROWS_AS(parse_spec("k: 4\nkind: treelike\nwitness: {(1,2)}\n"), ParseError);
  try {
    parse_spec("k: 2\nkind: pathlike\n\nbogus\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.module() == "constructions");
  }
}
