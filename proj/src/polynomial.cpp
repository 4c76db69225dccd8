#include "gf2/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "gf2/error.hpp"

namespace gf2 {

Gf2Polynomial::Gf2Polynomial(std::string vars)
    : vars_(std::move(vars)),
      box_(vars_.size(), 0),
      coeffs_(vars_, box_),
      tag_(all_axes(static_cast<int>(vars_.size()))) {}

Gf2Polynomial::Gf2Polynomial(const TruncatedSeries& s)
    : vars_(s.vars()), box_(s.bounds()), coeffs_(s), tag_(all_axes(s.arity())) {
  normalize();
}

void Gf2Polynomial::normalize() {
  Exponents box(vars_.size(), 0);
  for (const auto& m : coeffs_.support()) {
    for (std::size_t i = 0; i < m.size(); ++i) box[i] = std::max(box[i], m[i]);
  }
  if (box != box_) {
    coeffs_ = coeffs_.truncated(box);
    box_ = std::move(box);
  }
}

Gf2Polynomial Gf2Polynomial::constant(std::string vars, bool value) {
  Gf2Polynomial p(std::move(vars));
  if (value) p.coeffs_.flip(p.box_);
  return p;
}

Gf2Polynomial Gf2Polynomial::variable(std::string vars, int axis) {
  Exponents e(vars.size(), 0);
  e.at(static_cast<std::size_t>(axis)) = 1;
  return monomial(std::move(vars), e);
}

Gf2Polynomial Gf2Polynomial::monomial(std::string vars, const Exponents& e) {
  return from_monomials(std::move(vars), {e});
}

Gf2Polynomial Gf2Polynomial::from_monomials(std::string vars, const std::vector<Exponents>& mons) {
  Exponents box(vars.size(), 0);
  for (const auto& m : mons) {
    if (m.size() != vars.size()) throw DomainError("series_ring", "monomial arity mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] < 0) throw DomainError("series_ring", "negative exponent");
      box[i] = std::max(box[i], m[i]);
    }
  }
  TruncatedSeries s(vars, box);
  for (const auto& m : mons) s.flip(m);
  return Gf2Polynomial(s);
}

Gf2Polynomial::AxisMask Gf2Polynomial::axes(std::initializer_list<int> list) {
  AxisMask m = 0;
  for (int a : list) m |= AxisMask{1} << a;
  return m;
}

Gf2Polynomial Gf2Polynomial::tagged(AxisMask mask) const {
  if ((used_axes() & ~mask) != 0) {
    throw DomainError("series_ring", "polynomial " + to_string() +
                                         " uses variables outside its declared subset");
  }
  Gf2Polynomial out = *this;
  out.tag_ = mask;
  return out;
}

Gf2Polynomial::AxisMask Gf2Polynomial::used_axes() const {
  AxisMask m = 0;
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (box_[i] > 0) m |= AxisMask{1} << i;
  }
  return m;
}

bool Gf2Polynomial::is_zero() const { return coeffs_.is_zero(); }

bool Gf2Polynomial::is_invertible() const { return coeffs_.constant_term(); }

bool Gf2Polynomial::coefficient(const Exponents& e) const { return coeffs_.coefficient(e); }

int Gf2Polynomial::degree(int axis) const {
  if (is_zero()) return -1;
  return box_.at(static_cast<std::size_t>(axis));
}

std::vector<Exponents> Gf2Polynomial::monomials() const { return coeffs_.support(); }

TruncatedSeries Gf2Polynomial::lift(const Exponents& bounds) const {
  if (bounds.size() != vars_.size()) throw DomainError("series_ring", "lift: variable-count mismatch");
  TruncatedSeries out(vars_, bounds);
  for (const auto& m : monomials()) {
    if (within(m, bounds)) out.flip(m);
  }
  return out;
}

Gf2Polynomial Gf2Polynomial::embed(std::string vars, const std::vector<int>& axis_map) const {
  if (axis_map.size() != vars_.size()) throw DomainError("series_ring", "embed: axis map arity");
  std::vector<Exponents> mons;
  for (const auto& m : monomials()) {
    Exponents e(vars.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) e.at(static_cast<std::size_t>(axis_map[i])) = m[i];
    mons.push_back(std::move(e));
  }
  return from_monomials(std::move(vars), mons);
}

Gf2Polynomial operator+(const Gf2Polynomial& x, const Gf2Polynomial& y) {
  if (x.vars_ != y.vars_) throw DomainError("series_ring", "add: variable mismatch");
  Exponents box(x.box_.size());
  for (std::size_t i = 0; i < box.size(); ++i) box[i] = std::max(x.box_[i], y.box_[i]);
  Gf2Polynomial out(x.lift(box) + y.lift(box));
  out.tag_ = x.tag_ | y.tag_;
  return out;
}

Gf2Polynomial operator*(const Gf2Polynomial& x, const Gf2Polynomial& y) {
  if (x.vars_ != y.vars_) throw DomainError("series_ring", "mul: variable mismatch");
  Exponents box(x.box_.size());
  for (std::size_t i = 0; i < box.size(); ++i) box[i] = x.box_[i] + y.box_[i];
  Gf2Polynomial out(x.lift(box) * y.lift(box));
  out.tag_ = x.tag_ | y.tag_;
  return out;
}

bool operator==(const Gf2Polynomial& x, const Gf2Polynomial& y) {
  return x.vars_ == y.vars_ && x.box_ == y.box_ && x.coeffs_ == y.coeffs_;
}

std::string Gf2Polynomial::to_string() const {
  auto mons = monomials();
  if (mons.empty()) return "0";
  std::sort(mons.begin(), mons.end(), [](const Exponents& a, const Exponents& b) {
    int da = 0;
    int db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    if (da != db) return da < db;
    return a > b;
  });
  std::ostringstream os;
  for (std::size_t k = 0; k < mons.size(); ++k) {
    if (k > 0) os << " + ";
    bool first = true;
    for (std::size_t i = 0; i < mons[k].size(); ++i) {
      if (mons[k][i] == 0) continue;
      if (!first) os << '*';
      first = false;
      os << vars_[i];
      if (mons[k][i] > 1) os << '^' << mons[k][i];
    }
    if (first) os << '1';
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Gf2Polynomial& p) { return os << p.to_string(); }

bool is_invertible(const Gf2Polynomial& p) { return p.is_invertible(); }

TruncatedSeries inverse(const Gf2Polynomial& p, const Exponents& bounds) {
  if (!p.is_invertible()) {
    throw DomainError("series_ring", "inverse: " + p.to_string() + " has constant term 0");
  }
  return inverse(p.lift(bounds));
}

bool quotient_check(const TruncatedSeries& numerator, const std::vector<Gf2Polynomial>& denominators,
                    const TruncatedSeries& candidate) {
  const Exponents box = min_bounds(numerator.bounds(), candidate.bounds());
  TruncatedSeries product = candidate.truncated(box);
  for (const auto& d : denominators) product = product * d.lift(box);
  return product == numerator.truncated(box);
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::string& vars) : text_(text), vars_(vars) {}

  Gf2Polynomial parse() {
    Gf2Polynomial p = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("series_ring", 0,
                     "polynomial '" + std::string(text_) + "' at column " +
                         std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Gf2Polynomial sum() {
    Gf2Polynomial p = product();
    while (eat('+')) p = p + product();
    return p;
  }

  Gf2Polynomial product() {
    Gf2Polynomial p = power();
    while (eat('*')) p = p * power();
    return p;
  }

  Gf2Polynomial power() {
    Gf2Polynomial base = atom();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
      Gf2Polynomial r = Gf2Polynomial::constant(vars_, true);
      for (int i = 0; i < n; ++i) r = r * base;
      return r;
    }
    return base;
  }

  Gf2Polynomial atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Gf2Polynomial p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return Gf2Polynomial::constant(vars_, c == '1');
    }
    const auto axis = vars_.find(c);
    if (axis == std::string::npos) fail("unknown variable '" + std::string(1, c) + "'");
    ++pos_;
    return Gf2Polynomial::variable(vars_, static_cast<int>(axis));
  }

  std::string_view text_;
  const std::string& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Gf2Polynomial parse_polynomial(std::string_view expr, const std::string& vars) {
  return PolyParser(expr, vars).parse();
}

}  // namespace gf2
