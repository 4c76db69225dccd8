#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "gf2/constructions.hpp"
#include "gf2/decomposition.hpp"
#include "gf2/error.hpp"
#include "gf2/stratified.hpp"

namespace gf2::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Gf2Grammar load_grammar(const std::string& path) { return parse_grammar(slurp(path)); }

// "8" applies to every letter; "8,6,4" gives one bound per letter.
Exponents parse_bounds(const std::string& text, std::size_t k) {
  Exponents out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw UsageError("--bounds takes positive integers, got '" + text + "'");
    out.push_back(v);
  }
  if (out.size() == 1) out.assign(k, out[0]);
  if (out.size() != k) {
    throw UsageError("--bounds has " + std::to_string(out.size()) + " entries but the alphabet has " + std::to_string(k));
  }
  return out;
}

std::string join(const Exponents& e, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? sep : "") + std::to_string(e[i]);
  return out;
}

std::string render_factor(const SeriesFactor& f, const TypedGrammar& tg) {
  switch (f.kind) {
    case SeriesFactor::Kind::polynomial: {
      const auto s = f.polynomial.to_string();
      return s.find('+') == std::string::npos ? s : "(" + s + ")";
    }
    case SeriesFactor::Kind::typed:
      return tg.display(f.typed);
    case SeriesFactor::Kind::grammar:
      return "L[" + f.letters + "](" + std::to_string(f.grammar->rules().size()) + " rules)";
  }
  return "?";
}

std::string render_expr(const SeriesExpr& e, const TypedGrammar& tg) {
  if (e.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::string term;
    for (const auto& f : e[i]) term += (term.empty() ? "" : "*") + render_factor(f, tg);
    out += (i ? " + " : "") + (term.empty() ? "1" : term);
  }
  return out;
}

std::string det_text(const LinearSystem& sys) {
  return sys.size() == 0 ? "1" : determinant(sys.polynomial_matrix).to_string();
}

void report_system(const Gf2Grammar& g, const Exponents& bounds, std::ostream& out) {
  const int k = static_cast<int>(g.terminals().size());
  const bool linear = g.is_linear();
  const TypedGrammar tg = linear ? intersect_linear_3state(g, k) : intersect_bounded_dfa(g, k);
  const LinearSystem sys = extract_system(tg);
  out << "automaton: " << (linear ? "three-state" : "bounded") << "\n";
  out << "letters: " << sys.letters << "\n";
  out << "unknowns: " << sys.size() << "\n";
  for (std::size_t i = 0; i < sys.size(); ++i) out << "  x" << i + 1 << " = " << sys.unknowns[i] << "\n";
  out << "A:\n";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    out << "  " << sys.unknowns[i] << ":";
    for (std::size_t j = 0; j < sys.size(); ++j) {
      out << (j ? " | " : " ") << (linear ? sys.polynomial_matrix[i][j].to_string() : render_expr(sys.matrix[i][j], tg));
    }
    out << "\n";
  }
  out << "f tags:";
  for (const auto& c : sys.rhs) out << " " << c.tag;
  out << "\n";
  for (const auto& c : sys.rhs) {
    out << "f[" << c.tag << "]:\n";
    for (std::size_t i = 0; i < sys.size(); ++i) out << "  " << sys.unknowns[i] << ": " << render_expr(c.f[i], tg) << "\n";
  }
  if (linear) out << "det: " << det_text(sys) << "\n";
  const auto sol = solve_truncated(sys, bounds);
  out << "bounds: " << join(bounds, " ") << "\n";
  out << "elimination order:";
  for (const auto& n : sol.elimination_order) out << " " << n;
  out << "\n";
  if (!linear) {
    out << "det (truncated):\n";
    std::istringstream lines(to_text(sol.det));
    for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
  }
  out << "residual: " << (sol.residual_ok ? "ok" : "FAILED") << "\n";
}

void report_decomposition(const Gf2Grammar& g, const Exponents& bounds, bool machine,
                          const std::optional<std::string>& numerator_dir, std::ostream& out) {
  const int k = static_cast<int>(g.terminals().size());
  const auto tg = intersect_linear_3state(g, k);
  const auto sys = extract_system(tg);
  const auto d = decompose_linear(g, k, bounds);
  const bool ok = d.verified();
  if (numerator_dir) fs::create_directories(*numerator_dir);
  auto numerator_file = [&](std::size_t i, const Summand& s) -> std::string {
    if (!numerator_dir) return {};
    const auto path = fs::path(*numerator_dir) / ("summand_" + std::to_string(i + 1) + ".series");
    std::ofstream(path) << to_text(s.numerator.lift(bounds));
    return path.string();
  };
  if (machine) {
    out << "letters: " << d.letters << "\nbounds: " << join(bounds, ",") << "\n";
    out << "system.size: " << sys.size() << "\n";
    out << "system.det: " << det_text(sys) << "\n";
    out << "summands: " << d.summands.size() << "\n";
    for (std::size_t i = 0; i < d.summands.size(); ++i) {
      const auto& s = d.summands[i];
      const std::string key = "summand." + std::to_string(i + 1);
      out << "\n" << key << ".pairs: " << render(s.pairs) << "\n";
      out << key << ".numerator: " << s.numerator.to_string() << "\n";
      if (const auto f = numerator_file(i, s); !f.empty()) out << key << ".numerator_file: " << f << "\n";
      for (const auto& [pair, p] : s.denominators) {
        out << key << ".denominator(" << pair.first << "," << pair.second << "): " << p.to_string() << "\n";
      }
    }
    out << "\nresidual: " << (ok ? "ok" : "mismatch") << "\n";
    return;
  }
  out << "grammar over " << d.letters << ", bounds " << join(bounds, " ") << "\n";
  out << "system: " << sys.size() << " x " << sys.size() << ", det = " << det_text(sys)
      << "\n";
  out << d.summands.size() << " summand(s)\n";
  for (std::size_t i = 0; i < d.summands.size(); ++i) {
    const auto& s = d.summands[i];
    out << "[" << i + 1 << "] pairs " << render(s.pairs) << "\n";
    out << "    numerator: " << s.numerator.to_string() << "\n";
    if (const auto f = numerator_file(i, s); !f.empty()) out << "    numerator series: " << f << "\n";
    for (const auto& [pair, p] : s.denominators) {
      out << "    denominator (" << pair.first << "," << pair.second << "): " << p.to_string() << "\n";
    }
  }
  out << "re-summation: " << (ok ? "matches bounded_series" : "DOES NOT match bounded_series") << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GF(2)-grammar toolkit for bounded languages"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  std::string output;
  app.add_option("-o,--output", output, "Write the report to this file");

  std::string g1, g2, word, bounds_text = "16", poly_text, spec_path, series_path;
  std::string qa = "0", qc = "0";
  std::optional<std::string> multiplier, numerator_dir;
  int k = 0;
  bool machine = false;

  auto* member = app.add_subcommand("member", "Print 1 if the word is in L(g), else 0");
  member->add_option("grammar", g1)->required();
  member->add_option("word", word, "Word (use '' for the empty word)")->required();

  auto* series = app.add_subcommand("series", "Truncated series of L(g) within a1* ... ak*");
  series->add_option("grammar", g1)->required();
  series->add_option("--bounds", bounds_text, "Degree bound per letter: N or N1,N2,...")->capture_default_str();

  auto* concat = app.add_subcommand("concat", "GF(2)-concatenation of two grammars");
  concat->add_option("g1", g1)->required();
  concat->add_option("g2", g2)->required();

  auto* symdiff = app.add_subcommand("symdiff", "Symmetric difference of two grammars");
  symdiff->add_option("g1", g1)->required();
  symdiff->add_option("g2", g2)->required();

  auto* divide = app.add_subcommand("divide", "Grammar for L(g) / p, p invertible in the first and last letter");
  divide->add_option("grammar", g1)->required();
  divide->add_option("--poly", poly_text, "Polynomial such as '1 + a*c'")->required();

  auto* system = app.add_subcommand("system", "Linear system A x = f over the typed nonterminals");
  system->add_option("grammar", g1)->required();
  system->add_option("--bounds", bounds_text, "Truncation for the elimination")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "Summand decomposition of a linear grammar");
  decompose->add_option("grammar", g1)->required();
  decompose->add_option("--bounds", bounds_text, "Truncation for the re-summation check")->capture_default_str();
  decompose->add_flag("--machine", machine, "key: value report");
  decompose->add_option("--numerator-dir", numerator_dir, "Write each numerator series to this directory");

  auto* treelike = app.add_subcommand("treelike", "All tree-like pair sets over k letters");
  treelike->add_option("k", k)->required();

  auto* pathlike_cmd = app.add_subcommand("pathlike", "The path-like pair set over k letters");
  pathlike_cmd->add_option("k", k)->required();

  auto* build = app.add_subcommand("build", "Grammar for a representation spec file");
  build->add_option("spec", spec_path)->required();
  build->add_option("--bounds", bounds_text, "Truncation for the self-check")->capture_default_str();

  auto* dk = app.add_subcommand("dk", "Degree-k slice of (sum_i a^i c^(k-i)) * multiplier");
  dk->add_option("k", k)->required();
  dk->add_option("--qa", qa, "q_a in 1 + a*q_a + c*q_c")->capture_default_str();
  dk->add_option("--qc", qc, "q_c in 1 + a*q_a + c*q_c")->capture_default_str();
  dk->add_option("--multiplier", multiplier, "Use this multiplier instead of 1 + a*q_a + c*q_c");

  auto* sep = app.add_subcommand("sep", "max min(l, m) over monomials a^l b^k c^m of a series");
  sep->add_option("series", series_path)->required();
  sep->add_option("k", k)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::ostringstream report;
  try {
    if (member->parsed()) {
      report << (parity_member(load_grammar(g1), word) ? 1 : 0) << "\n";
    } else if (series->parsed()) {
      const auto g = load_grammar(g1);
      report << to_text(bounded_series(g, parse_bounds(bounds_text, g.terminals().size())));
    } else if (concat->parsed()) {
      report << to_text(gf2_concat(load_grammar(g1), load_grammar(g2)));
    } else if (symdiff->parsed()) {
      report << to_text(sym_diff(load_grammar(g1), load_grammar(g2)));
    } else if (divide->parsed()) {
      const auto g = load_grammar(g1);
      const auto p = parse_polynomial(poly_text, g.terminals());
      report << to_text(divide_by_invertible(g, p, static_cast<int>(g.terminals().size())));
    } else if (system->parsed()) {
      const auto g = load_grammar(g1);
      report_system(g, parse_bounds(bounds_text, g.terminals().size()), report);
    } else if (decompose->parsed()) {
      const auto g = load_grammar(g1);
      report_decomposition(g, parse_bounds(bounds_text, g.terminals().size()), machine, numerator_dir, report);
    } else if (treelike->parsed()) {
      for (const auto& s : enumerate_treelike(k)) report << render(s.pairs) << "\n";
    } else if (pathlike_cmd->parsed()) {
      report << render(pathlike(k).pairs) << "\n";
    } else if (build->parsed()) {
      const auto spec = parse_spec(slurp(spec_path), fs::path(spec_path).parent_path());
      const auto b = parse_bounds(bounds_text, spec.letters.size());
      report << to_text(spec.kind == StratifiedKind::pathlike ? build_pathlike_linear(spec, b) : build_treelike(spec, b));
    } else if (dk->parsed()) {
      const auto p = multiplier ? d_k(k, parse_polynomial(*multiplier, "ac"))
                                : d_k(k, parse_polynomial(qa, "ac"), parse_polynomial(qc, "ac"));
      report << p.to_string() << "\n";
    } else if (sep->parsed()) {
      const auto b = separation_bound(parse_series(slurp(series_path)), k);
      report << (b ? std::to_string(*b) : "none") << "\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error [" << e.module() << "]: " << e.what() << "\n";
    return 1;
  }

  if (output.empty()) {
    out << report.str();
  } else {
    std::ofstream file(output);
    if (!file) {
      err << "usage error: cannot write " << output << "\n";
      return 2;
    }
    file << report.str();
  }
  return 0;
}

}  // namespace gf2::cli
