#include "gf2/cfg.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "gf2/error.hpp"

namespace gf2 {

int Cfg::intern(const std::string& name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  const int id = size();
  names.push_back(name);
  index_.emplace(name, id);
  return id;
}

std::optional<int> Cfg::find(const std::string& name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string Cfg::fresh_name(const std::string& base) const {
  if (!find(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!find(candidate)) return candidate;
  }
}

std::vector<std::vector<int>> Cfg::productions_by_head() const {
  std::vector<std::vector<int>> out(names.size());
  for (std::size_t i = 0; i < productions.size(); ++i) {
    out.at(static_cast<std::size_t>(productions[i].head)).push_back(static_cast<int>(i));
  }
  return out;
}

Cfg to_cfg(const Gf2Grammar& g) {
  Cfg cfg;
  for (const auto& n : g.nonterminals()) cfg.intern(n);
  cfg.start = cfg.intern(g.start());
  for (const auto& r : g.rules()) {
    std::vector<CfgSymbol> body;
    for (const auto& s : r.body) {
      body.push_back(s.is_terminal() ? CfgSymbol::t(s.letter()) : CfgSymbol::n(cfg.intern(s.name)));
    }
    cfg.add(cfg.intern(r.head), std::move(body));
  }
  if (g.epsilon_at_start()) cfg.add(cfg.start, {});
  return cfg;
}

std::vector<std::uint8_t> nullable_set(const Cfg& cfg) {
  std::vector<std::uint8_t> nullable(cfg.names.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : cfg.productions) {
      if (nullable[static_cast<std::size_t>(p.head)]) continue;
      const bool all = std::all_of(p.body.begin(), p.body.end(), [&](const CfgSymbol& s) {
        return !s.terminal && nullable[static_cast<std::size_t>(s.id)];
      });
      if (all) {
        nullable[static_cast<std::size_t>(p.head)] = 1;
        changed = true;
      }
    }
  }
  return nullable;
}

std::vector<std::uint8_t> productive_set(const Cfg& cfg) {
  std::vector<std::uint8_t> productive(cfg.names.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : cfg.productions) {
      if (productive[static_cast<std::size_t>(p.head)]) continue;
      const bool all = std::all_of(p.body.begin(), p.body.end(), [&](const CfgSymbol& s) {
        return s.terminal || productive[static_cast<std::size_t>(s.id)];
      });
      if (all) {
        productive[static_cast<std::size_t>(p.head)] = 1;
        changed = true;
      }
    }
  }
  return productive;
}

std::vector<int> span_order(const Cfg& cfg) {
  const auto productive = productive_set(cfg);
  const auto nullable = nullable_set(cfg);
  const std::size_t n = cfg.names.size();
  std::vector<std::vector<int>> deps(n);
  for (const auto& p : cfg.productions) {
    const bool usable = std::all_of(p.body.begin(), p.body.end(), [&](const CfgSymbol& s) {
      return s.terminal || productive[static_cast<std::size_t>(s.id)];
    });
    if (!usable) continue;
    for (std::size_t i = 0; i < p.body.size(); ++i) {
      if (p.body[i].terminal) continue;
      bool others_vanish = true;
      for (std::size_t j = 0; j < p.body.size() && others_vanish; ++j) {
        if (j == i) continue;
        others_vanish = !p.body[j].terminal && nullable[static_cast<std::size_t>(p.body[j].id)];
      }
      if (others_vanish) deps[static_cast<std::size_t>(p.head)].push_back(p.body[i].id);
    }
  }
  // Depth-first topological sort, dependencies first.
  std::vector<int> order;
  std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::function<void(int)> visit = [&](int v) {
    auto& st = state[static_cast<std::size_t>(v)];
    if (st == 2) return;
    if (st == 1) {
      throw DomainError("grammar_core", "cyclic grammar: nonterminal " + cfg.names[static_cast<std::size_t>(v)] +
                                            " derives itself, derivation counts are infinite");
    }
    st = 1;
    for (int d : deps[static_cast<std::size_t>(v)]) visit(d);
    st = 2;
    order.push_back(v);
  };
  for (int v = 0; v < static_cast<int>(n); ++v) visit(v);
  return order;
}

std::vector<std::uint8_t> epsilon_parity(const Cfg& cfg, const std::vector<int>& order) {
  const auto by_head = cfg.productions_by_head();
  std::vector<std::uint8_t> eps(cfg.names.size(), 0);
  for (int a : order) {
    std::uint8_t v = 0;
    for (int pi : by_head[static_cast<std::size_t>(a)]) {
      std::uint8_t prod = 1;
      for (const auto& s : cfg.productions[static_cast<std::size_t>(pi)].body) {
        prod &= s.terminal ? 0 : eps[static_cast<std::size_t>(s.id)];
      }
      v ^= prod;
    }
    eps[static_cast<std::size_t>(a)] = v;
  }
  return eps;
}

namespace {

std::string symbol_key(const Cfg& cfg, const CfgSymbol& s) {
  return s.terminal ? std::string(1, s.letter()) : cfg.names[static_cast<std::size_t>(s.id)];
}

}  // namespace

Cfg binarize_cfg(const Cfg& cfg) {
  Cfg out = cfg;
  out.productions.clear();
  std::map<std::vector<CfgSymbol>, int> suffix_names;
  // Fresh nonterminal for body[from..], created once per distinct suffix.
  std::function<int(const std::vector<CfgSymbol>&)> suffix = [&](const std::vector<CfgSymbol>& body) {
    if (auto it = suffix_names.find(body); it != suffix_names.end()) return it->second;
    std::string name = "Bin";
    for (const auto& s : body) name += "_" + symbol_key(cfg, s);
    const int id = out.intern(out.fresh_name(name));
    suffix_names.emplace(body, id);
    if (body.size() <= 2) {
      out.add(id, body);
    } else {
      out.add(id, {body.front(), CfgSymbol::n(suffix({body.begin() + 1, body.end()}))});
    }
    return id;
  };
  for (const auto& p : cfg.productions) {
    if (p.body.size() <= 2) {
      out.add(p.head, p.body);
    } else {
      out.add(p.head, {p.body.front(), CfgSymbol::n(suffix({p.body.begin() + 1, p.body.end()}))});
    }
  }
  return out;
}

Cfg prune(const Cfg& cfg, const std::vector<int>& roots, std::vector<int>* remap) {
  const auto productive = productive_set(cfg);
  const auto by_head = cfg.productions_by_head();
  auto usable = [&](const Production& p) {
    return std::all_of(p.body.begin(), p.body.end(), [&](const CfgSymbol& s) {
      return s.terminal || productive[static_cast<std::size_t>(s.id)];
    });
  };
  std::vector<std::uint8_t> reached(cfg.names.size(), 0);
  std::vector<int> stack;
  for (int r : roots) {
    if (productive[static_cast<std::size_t>(r)] && !reached[static_cast<std::size_t>(r)]) {
      reached[static_cast<std::size_t>(r)] = 1;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int pi : by_head[static_cast<std::size_t>(v)]) {
      const auto& p = cfg.productions[static_cast<std::size_t>(pi)];
      if (!usable(p)) continue;
      for (const auto& s : p.body) {
        if (!s.terminal && !reached[static_cast<std::size_t>(s.id)]) {
          reached[static_cast<std::size_t>(s.id)] = 1;
          stack.push_back(s.id);
        }
      }
    }
  }
  Cfg out;
  std::vector<int> map(cfg.names.size(), -1);
  for (std::size_t i = 0; i < cfg.names.size(); ++i) {
    if (reached[i]) map[i] = out.intern(cfg.names[i]);
  }
  for (const auto& p : cfg.productions) {
    if (map[static_cast<std::size_t>(p.head)] < 0 || !usable(p)) continue;
    std::vector<CfgSymbol> body;
    for (const auto& s : p.body) body.push_back(s.terminal ? s : CfgSymbol::n(map[static_cast<std::size_t>(s.id)]));
    out.add(map[static_cast<std::size_t>(p.head)], std::move(body));
  }
  const bool start_kept = cfg.start >= 0 && cfg.start < cfg.size() && map[static_cast<std::size_t>(cfg.start)] >= 0;
  out.start = start_kept ? map[static_cast<std::size_t>(cfg.start)] : 0;
  if (remap) *remap = std::move(map);
  return out;
}

Gf2Grammar to_grammar(const Cfg& cfg, const std::string& alphabet) {
  const auto order = span_order(cfg);
  const auto nullable = nullable_set(cfg);
  const auto eps = epsilon_parity(cfg, order);

  // Rules for the nonempty part of every nonterminal. A derivation of a
  // nonempty word picks, for each nullable body position, whether that
  // position derives the empty word; the count of those choices is the
  // product of the empty-derivation counts, so only odd products survive.
  RuleSet rules;
  for (const auto& p : cfg.productions) {
    if (p.body.empty()) continue;
    std::vector<std::size_t> vanishing;
    for (std::size_t i = 0; i < p.body.size(); ++i) {
      if (!p.body[i].terminal && nullable[static_cast<std::size_t>(p.body[i].id)]) vanishing.push_back(i);
    }
    const std::size_t subsets = std::size_t{1} << vanishing.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<bool> dropped(p.body.size(), false);
      bool odd = true;
      for (std::size_t b = 0; b < vanishing.size(); ++b) {
        if ((mask >> b) & 1U) {
          dropped[vanishing[b]] = true;
          odd = odd && eps[static_cast<std::size_t>(p.body[vanishing[b]].id)];
        }
      }
      if (!odd) continue;
      Rule r{cfg.names[static_cast<std::size_t>(p.head)], {}};
      for (std::size_t i = 0; i < p.body.size(); ++i) {
        if (dropped[i]) continue;
        const auto& s = p.body[i];
        r.body.push_back(s.terminal ? Symbol::terminal(s.letter())
                                    : Symbol::nonterminal(cfg.names[static_cast<std::size_t>(s.id)]));
      }
      if (!r.body.empty()) toggle(rules, std::move(r));
    }
  }

  std::string start = cfg.names.at(static_cast<std::size_t>(cfg.start));
  const bool start_eps = eps[static_cast<std::size_t>(cfg.start)] != 0;
  if (start_eps) {
    const bool start_in_body = std::any_of(rules.begin(), rules.end(), [&](const Rule& r) {
      return std::any_of(r.body.begin(), r.body.end(),
                         [&](const Symbol& s) { return !s.is_terminal() && s.name == start; });
    });
    if (start_in_body) {
      const std::string fresh = cfg.fresh_name(start + "0");
      toggle(rules, Rule{fresh, {Symbol::nonterminal(start)}});
      start = fresh;
    }
  }

  // Drop useless nonterminals through a second round trip over indices.
  Cfg tmp;
  tmp.start = tmp.intern(start);
  for (const auto& n : cfg.names) tmp.intern(n);
  for (const auto& r : rules) {
    std::vector<CfgSymbol> body;
    for (const auto& s : r.body) body.push_back(s.is_terminal() ? CfgSymbol::t(s.letter()) : CfgSymbol::n(tmp.intern(s.name)));
    tmp.add(tmp.intern(r.head), std::move(body));
  }
  const Cfg pruned = prune(tmp, {tmp.start});
  RuleSet kept;
  std::vector<std::string> nts;
  for (const auto& n : pruned.names) nts.push_back(n);
  if (nts.empty() || pruned.names.at(static_cast<std::size_t>(pruned.start)) != start) {
    nts.insert(nts.begin(), start);
  }
  for (const auto& p : pruned.productions) {
    Rule r{pruned.names[static_cast<std::size_t>(p.head)], {}};
    for (const auto& s : p.body) {
      r.body.push_back(s.terminal ? Symbol::terminal(s.letter())
                                  : Symbol::nonterminal(pruned.names[static_cast<std::size_t>(s.id)]));
    }
    kept.insert(std::move(r));
  }
  return Gf2Grammar(alphabet, std::move(nts), start, std::move(kept), start_eps);
}

}  // namespace gf2
