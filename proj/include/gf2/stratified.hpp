#pragma once

// Tree-like and path-like subsets of X_k = {(i,j) : 1 <= i < j <= k}.

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gf2 {

using Pair = std::pair<int, int>;
using PairSet = std::set<Pair>;

/// One visited segment [l, r]. `split` is the interior point m chosen for a
/// tree-like node (0 for leaves and for path-like nodes).
struct RecursionNode {
  int l = 0;
  int r = 0;
  int split = 0;
  std::vector<RecursionNode> children;
};

enum class StratifiedKind { treelike, pathlike, other };

struct StratifiedSet {
  int k = 0;
  PairSet pairs;
  RecursionNode recursion;
  StratifiedKind kind = StratifiedKind::other;
};

/// All of X_k.
PairSet all_pairs(int k);

/// Every distinct tree-like subset of X_k with one witnessing recursion,
/// ordered by pair-set.
std::vector<StratifiedSet> enumerate_treelike(int k);

/// The path-like set over [1,k]; the recursion visits both trimmed segments,
/// so the pairs are all of X_k. The recursion is kept as a tree and grows as
/// 2^(k-2); k is capped at 20.
StratifiedSet pathlike(int k);

/// The 2^(k-2) single-branch trimming chains [1,k] -> ... -> [i,i+1], each
/// dropping either the first or the last letter per step. These are the
/// supports that one linear recursion step at a time can produce.
std::vector<StratifiedSet> path_chains(int k);

/// Whether some tree-like recursion over [1,k] generates exactly `pairs`.
bool is_treelike(const PairSet& pairs, int k);

/// True when the pairs lie on a single trimming chain of [1,k].
bool is_chain_supported(const PairSet& pairs, int k);

/// `{(1,2),(1,3),...}`, lexicographic.
std::string render(const PairSet& pairs);

}  // namespace gf2
