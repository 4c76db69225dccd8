#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"

namespace gf2 {

namespace {

constexpr int kNone = -1;

int nonterminals_in(const std::vector<CfgSymbol>& body, std::size_t* where = nullptr) {
  int count = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (!body[i].terminal) {
      ++count;
      if (where) *where = i;
    }
  }
  return count;
}

// Emits `body` for `head` as normal-form productions, chaining through fresh
// nonterminals. Unit bodies are kept for the second pass.
void emit_chained(Cfg& out, int head, std::vector<CfgSymbol> body) {
  while (true) {
    std::size_t pos = 0;
    const bool has_nt = nonterminals_in(body, &pos) == 1;
    if (!has_nt && body.size() <= 1) {
      out.add(head, std::move(body));
      return;
    }
    if (has_nt && body.size() == 1) {
      out.add(head, std::move(body));
      return;
    }
    if (has_nt && body.size() == 2) {
      out.add(head, std::move(body));
      return;
    }
    const std::string& base = out.names[static_cast<std::size_t>(head)];
    const int next = out.intern(out.fresh_name(base));
    if (!has_nt || pos > 0) {
      // Peel the first letter: head -> c next.
      out.add(head, {body.front(), CfgSymbol::n(next)});
      body.erase(body.begin());
    } else {
      // Nonterminal first: peel the last letter, head -> next c.
      out.add(head, {CfgSymbol::n(next), body.back()});
      body.pop_back();
    }
    head = next;
  }
}

}  // namespace

Cfg linear_normal_form(const Cfg& cfg) {
  for (const auto& p : cfg.productions) {
    if (nonterminals_in(p.body) > 1) {
      throw DomainError("decomposition", "grammar is not linear: a rule of " +
                                             cfg.names[static_cast<std::size_t>(p.head)] +
                                             " has two nonterminals");
    }
  }
  (void)span_order(cfg);
  // Unproductive parts may hold unit cycles; they derive nothing anyway.
  const Cfg useful = cfg.size() == 0 ? cfg : prune(cfg, {cfg.start});
  if (useful.productions.empty()) return Cfg{};

  Cfg chained;
  for (const auto& n : useful.names) chained.intern(n);
  chained.start = useful.start;
  for (const auto& p : useful.productions) emit_chained(chained, p.head, p.body);

  // Parity of the number of unit paths A =>* B, including the empty path.
  const std::size_t n = static_cast<std::size_t>(chained.size());
  std::vector<std::vector<int>> unit_edges(n);
  for (const auto& p : chained.productions) {
    if (p.body.size() == 1 && !p.body[0].terminal) unit_edges[static_cast<std::size_t>(p.head)].push_back(p.body[0].id);
  }
  std::vector<std::vector<std::uint8_t>> paths(n);
  std::vector<std::uint8_t> state(n, 0);
  auto visit = [&](auto&& self, std::size_t a) -> void {
    if (state[a] == 2) return;
    if (state[a] == 1) throw DomainError("decomposition", "cyclic unit rules");
    state[a] = 1;
    paths[a].assign(n, 0);
    paths[a][a] = 1;
    for (int b : unit_edges[a]) {
      self(self, static_cast<std::size_t>(b));
      for (std::size_t c = 0; c < n; ++c) paths[a][c] ^= paths[static_cast<std::size_t>(b)][c];
    }
    state[a] = 2;
  };
  for (std::size_t a = 0; a < n; ++a) visit(visit, a);

  const auto by_head = chained.productions_by_head();
  Cfg out;
  for (const auto& name : chained.names) out.intern(name);
  out.start = chained.start;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!paths[a][b]) continue;
      for (int pi : by_head[b]) {
        const auto& body = chained.productions[static_cast<std::size_t>(pi)].body;
        if (body.size() == 1 && !body[0].terminal) continue;
        out.add(static_cast<int>(a), body);
      }
    }
  }
  return prune(out, {out.start});
}

// ---------------------------------------------------------------------------
// Typed grammars

int TypedGrammar::state_count() const {
  return automaton == Automaton::bounded ? static_cast<int>(letters.size()) : 3;
}

std::string TypedGrammar::state_name(int state) const {
  if (automaton == Automaton::bounded) return std::to_string(state + 1);
  const int k = static_cast<int>(letters.size());
  switch (state) {
    case 0: return "1";
    case 1: return k == 3 ? "2" : "2.." + std::to_string(k - 1);
    default: return std::to_string(k);
  }
}

std::string TypedGrammar::display(int nt) const {
  const auto& t = types.at(static_cast<std::size_t>(nt));
  return t.base + "_{" + state_name(t.from) + "->" + state_name(t.to) + "}";
}

std::optional<int> TypedGrammar::find(const std::string& base, int from, int to) const {
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i].base == base && types[i].from == from && types[i].to == to) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

class TypedBuilder {
 public:
  TypedBuilder(const Cfg& source, TypedGrammar& tg) : source_(source), tg_(tg) {}

  int get(int nt, int from, int to) {
    const auto key = std::make_tuple(nt, from, to);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const std::string& base = source_.names[static_cast<std::size_t>(nt)];
    auto label = [&](int s) {
      if (tg_.automaton == Automaton::bounded) return std::to_string(s + 1);
      return std::string(s == 0 ? "1" : s == 1 ? "m" : std::to_string(tg_.letters.size()));
    };
    const int id = tg_.cfg.intern(tg_.cfg.fresh_name(base + "_" + label(from) + "_" + label(to)));
    tg_.types.push_back({base, from, to});
    index_.emplace(key, id);
    return id;
  }

  void finish(int start) {
    for (int q = 0; q < tg_.state_count(); ++q) {
      if (auto it = index_.find({start, 0, q}); it != index_.end()) tg_.starts.push_back(it->second);
    }
    std::vector<int> remap;
    Cfg pruned = prune(tg_.cfg, tg_.starts, &remap);
    std::vector<TypedNonterminal> types(static_cast<std::size_t>(pruned.size()));
    for (std::size_t i = 0; i < remap.size(); ++i) {
      if (remap[i] >= 0) types[static_cast<std::size_t>(remap[i])] = tg_.types[i];
    }
    std::vector<int> starts;
    for (int s : tg_.starts) {
      if (remap[static_cast<std::size_t>(s)] >= 0) starts.push_back(remap[static_cast<std::size_t>(s)]);
    }
    tg_.cfg = std::move(pruned);
    tg_.types = std::move(types);
    tg_.starts = std::move(starts);
    if (!tg_.starts.empty()) tg_.cfg.start = tg_.starts.front();
  }

 private:
  const Cfg& source_;
  TypedGrammar& tg_;
  std::map<std::tuple<int, int, int>, int> index_;
};

int letter_index(const std::string& letters, char c) {
  const auto pos = letters.find(c);
  return pos == std::string::npos ? kNone : static_cast<int>(pos);
}

}  // namespace

TypedGrammar intersect_bounded_dfa(const Gf2Grammar& g, int k) {
  if (k < 1 || static_cast<int>(g.terminals().size()) != k) {
    throw DomainError("decomposition", "k = " + std::to_string(k) + " does not match the alphabet '" +
                                           g.terminals() + "'");
  }
  require_cycle_free(g);
  const Cfg source = binarize_cfg(to_cfg(g));
  TypedGrammar tg;
  tg.automaton = Automaton::bounded;
  tg.letters = g.terminals();
  TypedBuilder b(source, tg);
  auto step = [&](int p, char c) {
    const int j = letter_index(tg.letters, c);
    return j >= p ? j : kNone;
  };
  for (const auto& prod : source.productions) {
    const auto& body = prod.body;
    for (int p = 0; p < k; ++p) {
      if (body.empty()) {
        tg.cfg.add(b.get(prod.head, p, p), {});
      } else if (body.size() == 1 && body[0].terminal) {
        const int q = step(p, body[0].letter());
        if (q != kNone) tg.cfg.add(b.get(prod.head, p, q), {body[0]});
      } else if (body.size() == 1) {
        for (int q = p; q < k; ++q) tg.cfg.add(b.get(prod.head, p, q), {CfgSymbol::n(b.get(body[0].id, p, q))});
      } else {
        for (int r = p; r < k; ++r) {
          CfgSymbol left = body[0];
          if (left.terminal) {
            if (step(p, left.letter()) != r) continue;
          } else {
            left = CfgSymbol::n(b.get(left.id, p, r));
          }
          for (int q = r; q < k; ++q) {
            CfgSymbol right = body[1];
            if (right.terminal) {
              if (step(r, right.letter()) != q) continue;
            } else {
              right = CfgSymbol::n(b.get(right.id, r, q));
            }
            tg.cfg.add(b.get(prod.head, p, q), {left, right});
          }
        }
      }
    }
  }
  b.finish(source.start);
  return tg;
}

TypedGrammar intersect_linear_3state(const Gf2Grammar& g, int k) {
  if (static_cast<int>(g.terminals().size()) != k) {
    throw DomainError("decomposition", "k = " + std::to_string(k) + " does not match the alphabet '" +
                                           g.terminals() + "'");
  }
  if (!g.is_linear()) throw DomainError("decomposition", "grammar is not linear");
  return intersect_linear_3state(to_cfg(g), g.terminals());
}

TypedGrammar intersect_linear_3state(const Cfg& cfg, const std::string& letters) {
  if (letters.size() < 2) throw DomainError("decomposition", "the three-state automaton needs k >= 2");
  const Cfg nf = linear_normal_form(cfg);
  TypedGrammar tg;
  tg.automaton = Automaton::three_state;
  tg.letters = letters;
  const int last = static_cast<int>(letters.size()) - 1;
  auto step = [&](int s, char c) {
    const int j = letter_index(letters, c);
    if (j == kNone) return kNone;
    if (j == 0) return s == 0 ? 0 : kNone;
    if (j == last) return 2;
    return s <= 1 ? 1 : kNone;
  };
  TypedBuilder b(nf, tg);
  for (const auto& prod : nf.productions) {
    const auto& body = prod.body;
    for (int p = 0; p < 3; ++p) {
      if (body.empty()) {
        tg.cfg.add(b.get(prod.head, p, p), {});
      } else if (body.size() == 1) {
        const int q = step(p, body[0].letter());
        if (q != kNone) tg.cfg.add(b.get(prod.head, p, q), {body[0]});
      } else if (body[0].terminal) {
        const int mid = step(p, body[0].letter());
        if (mid == kNone) continue;
        for (int q = mid; q < 3; ++q) {
          tg.cfg.add(b.get(prod.head, p, q), {body[0], CfgSymbol::n(b.get(body[1].id, mid, q))});
        }
      } else {
        for (int r = p; r < 3; ++r) {
          const int q = step(r, body[1].letter());
          if (q == kNone) continue;
          tg.cfg.add(b.get(prod.head, p, q), {CfgSymbol::n(b.get(body[0].id, p, r)), body[1]});
        }
      }
    }
  }
  b.finish(nf.start);
  return tg;
}

// ---------------------------------------------------------------------------
// Series of typed nonterminals

std::vector<TruncatedSeries> typed_series(const TypedGrammar& tg, const Exponents& bounds) {
  if (tg.automaton != Automaton::bounded) {
    throw DomainError("decomposition", "typed series are defined for the bounded automaton only");
  }
  const std::size_t k = tg.letters.size();
  if (bounds.size() != k) throw DomainError("decomposition", "bounds do not match the letter count");
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t i = k; i-- > 1;) stride[i - 1] = stride[i] * static_cast<std::size_t>(bounds[i] + 1);
  const std::size_t cells = k == 0 ? 1 : stride[0] * static_cast<std::size_t>(bounds[0] + 1);

  std::vector<Exponents> cell_exp(cells, Exponents(k, 0));
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = 0; i < k; ++i) {
      cell_exp[c][i] = static_cast<int>(rest / stride[i]);
      rest %= stride[i];
    }
  }
  std::vector<std::size_t> graded(cells);
  std::iota(graded.begin(), graded.end(), std::size_t{0});
  auto degree = [&](std::size_t c) { return std::accumulate(cell_exp[c].begin(), cell_exp[c].end(), 0); };
  std::stable_sort(graded.begin(), graded.end(), [&](std::size_t x, std::size_t y) { return degree(x) < degree(y); });

  const auto order = span_order(tg.cfg);
  const auto by_head = tg.cfg.productions_by_head();
  const std::size_t n = static_cast<std::size_t>(tg.cfg.size());
  std::vector<std::vector<std::uint8_t>> val(n, std::vector<std::uint8_t>(cells, 0));

  auto terminal_at = [&](char c, std::size_t cell) {
    const int j = letter_index(tg.letters, c);
    return j != kNone && bounds[static_cast<std::size_t>(j)] >= 1 && cell == stride[static_cast<std::size_t>(j)];
  };
  auto symbol_at = [&](const CfgSymbol& s, std::size_t cell) -> bool {
    return s.terminal ? terminal_at(s.letter(), cell) : val[static_cast<std::size_t>(s.id)][cell] != 0;
  };

  for (std::size_t cell : graded) {
    const Exponents& e = cell_exp[cell];
    for (int a : order) {
      const auto& t = tg.types[static_cast<std::size_t>(a)];
      bool inside = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (e[i] != 0 && (static_cast<int>(i) < t.from || static_cast<int>(i) > t.to)) inside = false;
      }
      if (!inside) continue;
      std::uint8_t bit = 0;
      for (int pi : by_head[static_cast<std::size_t>(a)]) {
        const auto& body = tg.cfg.productions[static_cast<std::size_t>(pi)].body;
        if (body.empty()) {
          bit ^= cell == 0 ? 1 : 0;
        } else if (body.size() == 1) {
          bit ^= symbol_at(body[0], cell) ? 1 : 0;
        } else {
          const auto& x = body[0];
          const int r = x.terminal ? letter_index(tg.letters, x.letter()) : tg.types[static_cast<std::size_t>(x.id)].to;
          const std::size_t ur = static_cast<std::size_t>(r);
          std::size_t left_base = 0;
          std::size_t right_base = 0;
          for (std::size_t i = 0; i < k; ++i) {
            if (i < ur) left_base += static_cast<std::size_t>(e[i]) * stride[i];
            if (i > ur) right_base += static_cast<std::size_t>(e[i]) * stride[i];
          }
          for (int s = 0; s <= e[ur]; ++s) {
            const std::size_t left = left_base + static_cast<std::size_t>(s) * stride[ur];
            const std::size_t right = right_base + static_cast<std::size_t>(e[ur] - s) * stride[ur];
            if (symbol_at(x, left) && symbol_at(body[1], right)) bit ^= 1;
          }
        }
      }
      val[static_cast<std::size_t>(a)][cell] = bit;
    }
  }

  std::vector<TruncatedSeries> out;
  out.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    TruncatedSeries s(tg.letters, bounds);
    for (std::size_t c = 0; c < cells; ++c) {
      if (val[a][c]) s.set(cell_exp[c], true);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TruncatedSeries typed_start_series(const TypedGrammar& tg, const Exponents& bounds) {
  if (tg.automaton == Automaton::bounded) {
    const auto all = typed_series(tg, bounds);
    TruncatedSeries out(tg.letters, bounds);
    for (int s : tg.starts) out += all[static_cast<std::size_t>(s)];
    return out;
  }
  // Three-state: the typed grammar may accept words outside a1*...ak*, which
  // the bounded series ignores.
  Cfg joined = tg.cfg;
  const int top = joined.intern(joined.fresh_name("Start"));
  for (int s : tg.starts) joined.add(top, {CfgSymbol::n(s)});
  joined.start = top;
  return bounded_series(to_grammar(joined, tg.letters), bounds, tg.letters);
}

}  // namespace gf2
