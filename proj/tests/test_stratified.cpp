#include <doctest.h>

#include <random>

#include "gf2/error.hpp"
#include "gf2/stratified.hpp"

using namespace gf2;

namespace {

// Tree-like sets over [1,k] are the triangulations of a convex k-gon with
// vertices 1..k: sides (i,i+1) and (1,k) plus k-3 non-crossing diagonals.
// Brute force over every subset of diagonals.
std::set<PairSet> triangulations(int k) {
  std::vector<Pair> diagonals;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 2; j <= k; ++j) {
      if (!(i == 1 && j == k)) diagonals.push_back({i, j});
    }
  }
  auto cross = [](Pair a, Pair b) {
    return (a.first < b.first && b.first < a.second && a.second < b.second) ||
           (b.first < a.first && a.first < b.second && b.second < a.second);
  };
  std::set<PairSet> out;
  const std::size_t n = diagonals.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    if (__builtin_popcountl(mask) != k - 3) continue;
    std::vector<Pair> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1ul) chosen.push_back(diagonals[i]);
    }
    bool ok = true;
    for (std::size_t a = 0; a < chosen.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < chosen.size() && ok; ++b) ok = !cross(chosen[a], chosen[b]);
    }
    if (!ok) continue;
    PairSet s(chosen.begin(), chosen.end());
    for (int i = 1; i < k; ++i) s.insert({i, i + 1});
    s.insert({1, k});
    out.insert(s);
  }
  return out;
}

long catalan(int n) {
  long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

void check_recursion(const RecursionNode& n, const PairSet& pairs) {
  CHECK(pairs.count({n.l, n.r}) == 1);
  for (const auto& c : n.children) check_recursion(c, pairs);
}

}  // namespace

TEST_CASE("enumerate_treelike small cases") {
  const auto two = enumerate_treelike(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].pairs == PairSet{{1, 2}});
  CHECK(enumerate_treelike(3).size() == 1);
  const auto four = enumerate_treelike(4);
  REQUIRE(four.size() == 2);
  std::set<PairSet> got{four[0].pairs, four[1].pairs};
  CHECK(got == std::set<PairSet>{{{1, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 4}}, {{1, 2}, {2, 3}, {2, 4}, {3, 4}, {1, 4}}});
  CHECK(enumerate_treelike(5).size() == 5);
  CHECK_THROWS_AS(enumerate_treelike(1), DomainError);
}

TEST_CASE("tree-like sets match the polygon triangulation brute force") {
  for (int k = 3; k <= 8; ++k) {
    const auto sets = enumerate_treelike(k);
    CHECK(static_cast<long>(sets.size()) == catalan(k - 2));
    std::set<PairSet> got;
    for (const auto& s : sets) {
      got.insert(s.pairs);
      CHECK(s.pairs.size() == static_cast<std::size_t>(2 * k - 3));
      CHECK(s.pairs.count({1, k}) == 1);
      for (int i = 1; i < k; ++i) CHECK(s.pairs.count({i, i + 1}) == 1);
      check_recursion(s.recursion, s.pairs);
      CHECK(is_treelike(s.pairs, k));
    }
    // No two recursions collapsed to the same pair-set.
    CHECK(got.size() == sets.size());
    CHECK(got == triangulations(k));
  }
}

TEST_CASE("is_treelike") {
  CHECK(is_treelike({{1, 2}, {1, 3}, {2, 3}}, 3));
  CHECK_FALSE(is_treelike({{1, 2}}, 3));
  CHECK(is_treelike({{1, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 4}}, 4));
  CHECK(is_treelike({{1, 2}, {2, 3}, {2, 4}, {3, 4}, {1, 4}}, 4));
  CHECK_FALSE(is_treelike(all_pairs(4), 4));

  std::mt19937 rng(13);
  for (int k = 4; k <= 7; ++k) {
    const auto truth = triangulations(k);
    const auto x = all_pairs(k);
    for (int t = 0; t < 200; ++t) {
      PairSet s;
      std::bernoulli_distribution coin(0.5);
      for (const auto& p : x) {
        if (coin(rng)) s.insert(p);
      }
      CHECK(is_treelike(s, k) == (truth.count(s) == 1));
    }
  }
}

TEST_CASE("pathlike is all of X_k") {
  CHECK(pathlike(2).pairs == PairSet{{1, 2}});
  CHECK(pathlike(3).pairs == PairSet{{1, 2}, {2, 3}, {1, 3}});
  for (int k = 2; k <= 8; ++k) {
    const auto p = pathlike(k);
    CHECK(p.pairs == all_pairs(k));
    CHECK(p.pairs.size() == static_cast<std::size_t>(k * (k - 1) / 2));
    check_recursion(p.recursion, p.pairs);
  }
}

TEST_CASE("path_chains") {
  for (int k = 2; k <= 7; ++k) {
    const auto chains = path_chains(k);
    CHECK(chains.size() == (1u << (k - 2)));
    std::set<PairSet> distinct;
    for (const auto& c : chains) {
      distinct.insert(c.pairs);
      CHECK(c.pairs.size() == static_cast<std::size_t>(k - 1));
      CHECK(is_chain_supported(c.pairs, k));
    }
    CHECK(distinct.size() == chains.size());
  }
  CHECK(is_chain_supported({{1, 3}, {2, 3}}, 3));
  CHECK_FALSE(is_chain_supported({{1, 2}, {2, 3}}, 3));
}

TEST_CASE("render") {
  CHECK(render({{1, 3}, {1, 2}, {2, 3}}) == "{(1,2),(1,3),(2,3)}");
  CHECK(render({}) == "{}");
}
