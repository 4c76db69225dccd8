#include "gf2/stratified.hpp"

#include <map>
#include <optional>

#include "gf2/error.hpp"

namespace gf2 {

namespace {

void require_k(int k, int cap = 0) {
  if (k < 2) throw DomainError("stratified", "k must be at least 2, got " + std::to_string(k));
  if (cap > 0 && k > cap) {
    throw ResourceLimit("stratified", "k = " + std::to_string(k) + " exceeds the cap of " + std::to_string(cap));
  }
}

struct Built {
  PairSet pairs;
  RecursionNode node;
};

// All tree-like recursions of [l, r], deduplicated by pair-set.
const std::vector<Built>& treelike_segment(int l, int r, std::map<Pair, std::vector<Built>>& memo) {
  if (auto it = memo.find({l, r}); it != memo.end()) return it->second;
  std::vector<Built> out;
  if (r == l + 1) {
    out.push_back({{{l, r}}, {l, r, 0, {}}});
  } else {
    std::map<PairSet, RecursionNode> seen;
    for (int m = l + 1; m < r; ++m) {
      const auto& left = treelike_segment(l, m, memo);
      const auto& right = treelike_segment(m, r, memo);
      for (const auto& a : left) {
        for (const auto& b : right) {
          PairSet p = a.pairs;
          p.insert(b.pairs.begin(), b.pairs.end());
          p.insert({l, r});
          seen.try_emplace(std::move(p), RecursionNode{l, r, m, {a.node, b.node}});
        }
      }
    }
    for (auto& [p, n] : seen) out.push_back({p, std::move(n)});
  }
  return memo[{l, r}] = std::move(out);
}

RecursionNode pathlike_node(int l, int r) {
  RecursionNode n{l, r, 0, {}};
  if (r - l >= 2) {
    n.children.push_back(pathlike_node(l, r - 1));
    n.children.push_back(pathlike_node(l + 1, r));
  }
  return n;
}

}  // namespace

PairSet all_pairs(int k) {
  PairSet out;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) out.insert({i, j});
  }
  return out;
}

std::vector<StratifiedSet> enumerate_treelike(int k) {
  require_k(k, 16);
  std::map<Pair, std::vector<Built>> memo;
  std::vector<StratifiedSet> out;
  for (const auto& b : treelike_segment(1, k, memo)) out.push_back({k, b.pairs, b.node, StratifiedKind::treelike});
  return out;
}

StratifiedSet pathlike(int k) {
  require_k(k, 20);
  return {k, all_pairs(k), pathlike_node(1, k), StratifiedKind::pathlike};
}

std::vector<StratifiedSet> path_chains(int k) {
  require_k(k, 20);
  std::vector<StratifiedSet> out;
  const unsigned count = 1u << (k - 2);
  for (unsigned choice = 0; choice < count; ++choice) {
    StratifiedSet s{k, {}, {}, StratifiedKind::pathlike};
    int l = 1;
    int r = k;
    RecursionNode* node = &s.recursion;
    for (int step = 0;; ++step) {
      *node = {l, r, 0, {}};
      s.pairs.insert({l, r});
      if (r - l < 2) break;
      // Bit `step` set: drop the first letter, otherwise the last.
      if (choice >> step & 1u) ++l;
      else --r;
      node->children.emplace_back();
      node = &node->children.back();
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool is_treelike(const PairSet& pairs, int k) {
  if (k < 2) return false;
  for (const auto& [i, j] : pairs) {
    if (i < 1 || j > k || i >= j) return false;
  }
  auto inside = [&](int l, int r) {
    PairSet s;
    for (const auto& p : pairs) {
      if (p.first >= l && p.second <= r) s.insert(p);
    }
    return s;
  };
  std::map<Pair, bool> memo;
  // ok(l, r): some recursion of [l, r] generates exactly the pairs inside it.
  auto ok = [&](auto&& self, int l, int r) -> bool {
    if (auto it = memo.find({l, r}); it != memo.end()) return it->second;
    bool result = false;
    const PairSet mine = inside(l, r);
    if (mine.count({l, r}) != 0) {
      if (r == l + 1) {
        result = true;
      } else {
        for (int m = l + 1; m < r && !result; ++m) {
          bool covered = true;
          for (const auto& [i, j] : mine) {
            if ((i != l || j != r) && !(j <= m) && !(i >= m)) covered = false;
          }
          result = covered && self(self, l, m) && self(self, m, r);
        }
      }
    }
    return memo[{l, r}] = result;
  };
  return pairs.size() == static_cast<std::size_t>(2 * k - 3) && ok(ok, 1, k);
}

bool is_chain_supported(const PairSet& pairs, int k) {
  for (const auto& [i, j] : pairs) {
    if (i < 1 || j > k || i >= j) return false;
  }
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      const bool a_in_b = a.first >= b.first && a.second <= b.second;
      const bool b_in_a = b.first >= a.first && b.second <= a.second;
      if (!a_in_b && !b_in_a) return false;
    }
  }
  return true;
}

std::string render(const PairSet& pairs) {
  std::string out = "{";
  for (const auto& [i, j] : pairs) {
    if (out.size() > 1) out += ',';
    out += '(' + std::to_string(i) + ',' + std::to_string(j) + ')';
  }
  return out + '}';
}

}  // namespace gf2
