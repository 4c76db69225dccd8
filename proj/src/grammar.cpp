#include "gf2/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <tuple>
#include <sstream>

#include "gf2/cfg.hpp"
#include "gf2/error.hpp"

namespace gf2 {

namespace {

bool valid_nonterminal_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool valid_terminal(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

void toggle(RuleSet& rules, Rule r) {
  auto [it, inserted] = rules.insert(std::move(r));
  if (!inserted) rules.erase(it);
}

Gf2Grammar::Gf2Grammar(std::string terminals, std::vector<std::string> nonterminals, std::string start,
                       RuleSet rules, bool epsilon_at_start)
    : terminals_(std::move(terminals)),
      nonterminals_(std::move(nonterminals)),
      start_(std::move(start)),
      rules_(std::move(rules)),
      epsilon_at_start_(epsilon_at_start) {
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    if (!valid_terminal(terminals_[i])) {
      throw DomainError("grammar_core", "invalid terminal '" + std::string(1, terminals_[i]) + "'");
    }
    if (terminals_.find(terminals_[i]) != i) {
      throw DomainError("grammar_core", "terminal listed twice in alphabet");
    }
  }
  std::set<std::string> declared;
  for (const auto& n : nonterminals_) {
    if (!valid_nonterminal_name(n)) throw DomainError("grammar_core", "invalid nonterminal name '" + n + "'");
    if (!declared.insert(n).second) throw DomainError("grammar_core", "nonterminal " + n + " declared twice");
  }
  if (!declared.count(start_)) throw DomainError("grammar_core", "start symbol " + start_ + " is not declared");
  for (const auto& r : rules_) {
    if (!declared.count(r.head)) throw DomainError("grammar_core", "undeclared symbol " + r.head);
    if (r.body.empty()) {
      throw DomainError("grammar_core", "empty body for " + r.head + " (only start -> () is allowed)");
    }
    for (const auto& s : r.body) {
      if (s.is_terminal()) {
        if (s.name.size() != 1 || terminals_.find(s.letter()) == std::string::npos) {
          throw DomainError("grammar_core", "terminal '" + s.name + "' is not in the alphabet");
        }
      } else if (!declared.count(s.name)) {
        throw DomainError("grammar_core", "undeclared symbol " + s.name);
      }
    }
  }
}

bool Gf2Grammar::is_linear() const {
  return std::all_of(rules_.begin(), rules_.end(), [](const Rule& r) {
    return std::count_if(r.body.begin(), r.body.end(), [](const Symbol& s) { return !s.is_terminal(); }) <= 1;
  });
}

bool Gf2Grammar::has_nonterminal(std::string_view name) const {
  return std::find(nonterminals_.begin(), nonterminals_.end(), name) != nonterminals_.end();
}

namespace {

std::string strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Tokens of one alternative; returns nullopt for `()`.
std::optional<std::vector<Symbol>> parse_alternative(std::string_view alt, int line) {
  const std::string t = strip(alt);
  if (t.empty()) throw ParseError("grammar_core", line, "empty alternative (write () for the empty word)");
  std::vector<Symbol> body;
  std::size_t i = 0;
  bool saw_eps = false;
  while (i < t.size()) {
    const char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      std::size_t j = i + 1;
      while (j < t.size() && std::isspace(static_cast<unsigned char>(t[j]))) ++j;
      if (j >= t.size() || t[j] != ')') throw ParseError("grammar_core", line, "expected ')' after '('");
      saw_eps = true;
      i = j + 1;
    } else if (valid_terminal(c)) {
      body.push_back(Symbol::terminal(c));
      ++i;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_')) ++j;
      body.push_back(Symbol::nonterminal(t.substr(i, j - i)));
      i = j;
    } else {
      throw ParseError("grammar_core", line, "unexpected character '" + std::string(1, c) + "'");
    }
  }
  if (saw_eps) {
    if (!body.empty()) throw ParseError("grammar_core", line, "() must stand alone in an alternative");
    return std::nullopt;
  }
  return body;
}

}  // namespace

Gf2Grammar parse_grammar(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::string start;
  int start_line = 0;
  std::optional<std::string> alphabet;
  std::vector<std::string> heads;
  std::map<std::string, int> first_use;
  std::vector<std::pair<std::string, int>> eps_heads;
  RuleSet rules;
  std::set<char> letters;

  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (t.rfind("start:", 0) == 0) {
      start = strip(t.substr(6));
      if (!valid_nonterminal_name(start)) throw ParseError("grammar_core", lineno, "bad start symbol '" + start + "'");
      start_line = lineno;
      continue;
    }
    if (t.rfind("alphabet:", 0) == 0) {
      std::istringstream ls(t.substr(9));
      std::string tok;
      std::string a;
      while (ls >> tok) {
        if (tok.size() != 1 || !valid_terminal(tok[0])) throw ParseError("grammar_core", lineno, "bad letter '" + tok + "'");
        if (a.find(tok[0]) != std::string::npos) throw ParseError("grammar_core", lineno, "letter listed twice");
        a += tok;
      }
      alphabet = a;
      continue;
    }
    const auto arrow = t.find("->");
    if (arrow == std::string::npos) throw ParseError("grammar_core", lineno, "expected 'A -> ...'");
    const std::string head = strip(t.substr(0, arrow));
    if (!valid_nonterminal_name(head)) throw ParseError("grammar_core", lineno, "bad nonterminal '" + head + "'");
    if (std::find(heads.begin(), heads.end(), head) == heads.end()) heads.push_back(head);
    std::string rest = t.substr(arrow + 2);
    std::size_t pos = 0;
    while (true) {
      const auto bar = rest.find('|', pos);
      const std::string_view alt = std::string_view(rest).substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
      auto body = parse_alternative(alt, lineno);
      if (!body) {
        eps_heads.emplace_back(head, lineno);
      } else {
        for (const auto& s : *body) {
          if (s.is_terminal()) letters.insert(s.letter());
          else first_use.emplace(s.name, lineno);
        }
        toggle(rules, Rule{head, std::move(*body)});
      }
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
  }

  if (start.empty()) {
    if (heads.empty()) throw ParseError("grammar_core", 0, "grammar has no rules and no start: line");
    start = heads.front();
  }
  for (const auto& [name, ln] : first_use) {
    if (name != start && std::find(heads.begin(), heads.end(), name) == heads.end()) {
      throw ParseError("grammar_core", ln, "undeclared symbol " + name);
    }
  }
  bool eps = false;
  for (const auto& [head, ln] : eps_heads) {
    if (head != start) throw ParseError("grammar_core", ln, "() is only allowed for the start symbol " + start);
    eps = !eps;  // repeated () cancels like any other rule
  }
  std::string terminals;
  if (alphabet) {
    terminals = *alphabet;
    for (char c : letters) {
      if (terminals.find(c) == std::string::npos) {
        throw ParseError("grammar_core", 0, "letter '" + std::string(1, c) + "' missing from alphabet:");
      }
    }
  } else {
    terminals.assign(letters.begin(), letters.end());
  }
  std::vector<std::string> nts{start};
  for (const auto& h : heads) {
    if (h != start) nts.push_back(h);
  }
  (void)start_line;
  return Gf2Grammar(terminals, std::move(nts), start, std::move(rules), eps);
}

std::string to_text(const Gf2Grammar& g) {
  std::set<std::string> with_rules;
  for (const auto& r : g.rules()) with_rules.insert(r.head);
  std::ostringstream os;
  os << "alphabet:";
  for (char c : g.terminals()) os << ' ' << c;
  os << "\nstart: " << g.start() << '\n';
  for (const auto& n : g.nonterminals()) {
    std::vector<std::string> alts;
    for (const auto& r : g.rules()) {
      if (r.head != n) continue;
      // Rules through a nonterminal without rules derive nothing; the text
      // format cannot declare such a symbol, so they are left out.
      const bool dead = std::any_of(r.body.begin(), r.body.end(), [&](const Symbol& s) {
        return !s.is_terminal() && !with_rules.count(s.name) && !(s.name == g.start() && g.epsilon_at_start());
      });
      if (dead) continue;
      std::string alt;
      for (const auto& s : r.body) {
        if (!alt.empty()) alt += ' ';
        alt += s.name;
      }
      alts.push_back(std::move(alt));
    }
    if (n == g.start() && g.epsilon_at_start()) alts.emplace_back("()");
    if (alts.empty()) continue;
    os << n << " ->";
    for (std::size_t i = 0; i < alts.size(); ++i) os << (i ? " | " : " ") << alts[i];
    os << '\n';
  }
  return os.str();
}

void require_cycle_free(const Gf2Grammar& g) { (void)span_order(to_cfg(g)); }

Gf2Grammar binarize(const Gf2Grammar& g) {
  const Cfg b = binarize_cfg(to_cfg(g));
  RuleSet rules;
  for (const auto& p : b.productions) {
    if (p.body.empty()) continue;
    Rule r{b.names[static_cast<std::size_t>(p.head)], {}};
    for (const auto& s : p.body) {
      r.body.push_back(s.terminal ? Symbol::terminal(s.letter()) : Symbol::nonterminal(b.names[static_cast<std::size_t>(s.id)]));
    }
    rules.insert(std::move(r));
  }
  return Gf2Grammar(g.terminals(), b.names, g.start(), std::move(rules), g.epsilon_at_start());
}

// ---------------------------------------------------------------------------
// Parity CYK

struct ParityParser::Impl {
  struct Binary {
    CfgSymbol left;
    CfgSymbol right;
  };
  struct Head {
    int nt = 0;
    std::vector<char> letters;      // A -> t
    std::vector<int> units;         // A -> X
    std::vector<Binary> binaries;   // A -> X Y
  };

  int n_nt = 0;
  int start = 0;
  std::vector<Head> heads;  // in span order
  std::vector<std::uint8_t> eps;
  std::string word;
  std::vector<std::vector<std::uint8_t>> cols;  // cols[j][i * n_nt + A] for span [i, j)

  explicit Impl(const Gf2Grammar& g) {
    const Cfg cfg = binarize_cfg(to_cfg(g));
    n_nt = cfg.size();
    start = cfg.start;
    const auto order = span_order(cfg);
    eps = epsilon_parity(cfg, order);
    const auto by_head = cfg.productions_by_head();
    for (int a : order) {
      Head h;
      h.nt = a;
      for (int pi : by_head[static_cast<std::size_t>(a)]) {
        const auto& body = cfg.productions[static_cast<std::size_t>(pi)].body;
        if (body.size() == 1 && body[0].terminal) h.letters.push_back(body[0].letter());
        else if (body.size() == 1) h.units.push_back(body[0].id);
        else if (body.size() == 2) h.binaries.push_back({body[0], body[1]});
      }
      heads.push_back(std::move(h));
    }
    cols.emplace_back();
  }

  // Parity of `s` deriving word[i, m); column m must already hold span [i, m).
  std::uint8_t value(const CfgSymbol& s, std::size_t i, std::size_t m, const std::vector<std::uint8_t>& current,
                     std::size_t j) const {
    if (s.terminal) return (m == i + 1 && word[i] == s.letter()) ? 1 : 0;
    if (i == m) return eps[static_cast<std::size_t>(s.id)];
    const auto& col = m == j ? current : cols[m];
    return col[i * static_cast<std::size_t>(n_nt) + static_cast<std::size_t>(s.id)];
  }

  void push(char c) {
    word.push_back(c);
    const std::size_t j = word.size();
    std::vector<std::uint8_t> col(j * static_cast<std::size_t>(n_nt), 0);
    for (std::size_t i = j; i-- > 0;) {
      for (const auto& h : heads) {
        std::uint8_t v = 0;
        if (i + 1 == j) {
          for (char t : h.letters) v ^= (word[i] == t) ? 1 : 0;
        }
        for (int u : h.units) v ^= col[i * static_cast<std::size_t>(n_nt) + static_cast<std::size_t>(u)];
        for (const auto& b : h.binaries) {
          for (std::size_t m = i; m <= j; ++m) {
            if (value(b.left, i, m, col, j) && value(b.right, m, j, col, j)) v ^= 1;
          }
        }
        col[i * static_cast<std::size_t>(n_nt) + static_cast<std::size_t>(h.nt)] = v;
      }
    }
    cols.push_back(std::move(col));
  }
};

ParityParser::ParityParser(const Gf2Grammar& g) : impl_(std::make_unique<Impl>(g)) {}
ParityParser::~ParityParser() = default;
ParityParser::ParityParser(ParityParser&&) noexcept = default;
ParityParser& ParityParser::operator=(ParityParser&&) noexcept = default;

void ParityParser::push(char letter) { impl_->push(letter); }

void ParityParser::pop() {
  if (impl_->word.empty()) return;
  impl_->word.pop_back();
  impl_->cols.pop_back();
}

void ParityParser::clear() {
  impl_->word.clear();
  impl_->cols.resize(1);
}

std::size_t ParityParser::length() const { return impl_->word.size(); }

bool ParityParser::accepts() const {
  const std::size_t n = impl_->word.size();
  if (n == 0) return impl_->eps[static_cast<std::size_t>(impl_->start)] != 0;
  return impl_->cols[n][static_cast<std::size_t>(impl_->start)] != 0;
}

bool ParityParser::member(std::string_view word) {
  clear();
  for (char c : word) push(c);
  return accepts();
}

bool parity_member(const Gf2Grammar& g, std::string_view word) {
  for (char c : word) {
    if (g.terminals().find(c) == std::string::npos) {
      throw DomainError("grammar_core", "word uses letter '" + std::string(1, c) + "' outside the alphabet");
    }
  }
  ParityParser p(g);
  return p.member(word);
}

// ---------------------------------------------------------------------------
// Brute-force derivation counting

namespace {

constexpr std::size_t kBruteForceMaxLength = 12;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceLimit("grammar_core", "derivation count overflows 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceLimit("grammar_core", "derivation count overflows 64 bits");
  return r;
}

class DerivationCounter {
 public:
  DerivationCounter(const Cfg& cfg, std::string_view word)
      : cfg_(cfg),
        by_head_(cfg.productions_by_head()),
        nullable_(nullable_set(cfg)),
        productive_(productive_set(cfg)),
        word_(word) {}

  std::uint64_t count(int nt, std::size_t i, std::size_t j) {
    const Key key{nt, i, j};
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (!it->second) throw DomainError("grammar_core", "cyclic derivation while counting");
      return *it->second;
    }
    memo_[key] = std::nullopt;
    std::uint64_t total = 0;
    for (int pi : by_head_[static_cast<std::size_t>(nt)]) {
      const auto& body = cfg_.productions[static_cast<std::size_t>(pi)].body;
      // Rules through unproductive symbols derive nothing; skipping them keeps
      // the recursion on the acyclic part of the grammar.
      const bool usable = std::all_of(body.begin(), body.end(), [&](const CfgSymbol& s) {
        return s.terminal || productive_[static_cast<std::size_t>(s.id)];
      });
      if (usable) total = checked_add(total, sequence(body, 0, i, j));
    }
    memo_[key] = total;
    return total;
  }

 private:
  using Key = std::tuple<int, std::size_t, std::size_t>;

  // Ways for body[pos..] to derive word[i, j).
  std::uint64_t sequence(const std::vector<CfgSymbol>& body, std::size_t pos, std::size_t i, std::size_t j) {
    if (pos == body.size()) return i == j ? 1 : 0;
    const auto& s = body[pos];
    if (s.terminal) {
      return (i < j && word_[i] == s.letter()) ? sequence(body, pos + 1, i + 1, j) : 0;
    }
    std::uint64_t total = 0;
    for (std::size_t m = i; m <= j; ++m) {
      if (m == i && !nullable_[static_cast<std::size_t>(s.id)]) continue;
      const std::uint64_t rest = sequence(body, pos + 1, m, j);
      if (rest == 0) continue;
      const std::uint64_t here = count(s.id, i, m);
      if (here == 0) continue;
      total = checked_add(total, checked_mul(here, rest));
    }
    return total;
  }

  const Cfg& cfg_;
  std::vector<std::vector<int>> by_head_;
  std::vector<std::uint8_t> nullable_;
  std::vector<std::uint8_t> productive_;
  std::string_view word_;
  std::map<Key, std::optional<std::uint64_t>> memo_;
};

}  // namespace

std::uint64_t count_derivations_bruteforce(const Gf2Grammar& g, std::string_view word) {
  if (word.size() > kBruteForceMaxLength) {
    throw ResourceLimit("grammar_core", "brute-force counting is capped at " +
                                            std::to_string(kBruteForceMaxLength) + " letters");
  }
  const Cfg cfg = to_cfg(g);
  (void)span_order(cfg);
  DerivationCounter counter(cfg, word);
  return counter.count(cfg.start, 0, word.size());
}

// ---------------------------------------------------------------------------
// Bounded series

std::string bounded_word(const std::string& letters, const Exponents& e) {
  if (letters.size() != e.size()) throw DomainError("grammar_core", "exponent arity differs from letter count");
  std::string w;
  for (std::size_t i = 0; i < e.size(); ++i) w.append(static_cast<std::size_t>(e[i]), letters[i]);
  return w;
}

TruncatedSeries bounded_series(const Gf2Grammar& g, const Exponents& bounds) {
  return bounded_series(g, bounds, g.terminals());
}

TruncatedSeries bounded_series(const Gf2Grammar& g, const Exponents& bounds, const std::string& letters) {
  if (letters.size() != bounds.size()) {
    throw DomainError("grammar_core", "bounds have " + std::to_string(bounds.size()) + " entries for " +
                                          std::to_string(letters.size()) + " letters");
  }
  TruncatedSeries out(letters, bounds);
  ParityParser parser(g);
  Exponents e(bounds.size(), 0);
  // Depth-first walk of the trie of bounded words: each node extends its
  // parent by one letter, so the parser fills one column per word.
  auto visit = [&](auto&& self, std::size_t from) -> void {
    if (parser.accepts()) out.set(e, true);
    for (std::size_t l = from; l < letters.size(); ++l) {
      if (e[l] >= bounds[l]) continue;
      parser.push(letters[l]);
      ++e[l];
      self(self, l);
      --e[l];
      parser.pop();
    }
  };
  visit(visit, 0);
  return out;
}

}  // namespace gf2
