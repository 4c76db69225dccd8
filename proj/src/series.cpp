#include "gf2/series.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>

#include "gf2/error.hpp"

namespace gf2 {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(int last_bound) {
  return (static_cast<std::size_t>(last_bound) + kWordBits) / kWordBits;
}

// Mixed-radix strides of the row index over all axes but the last.
std::vector<std::size_t> row_strides(const Exponents& bounds) {
  const std::size_t k = bounds.size();
  std::vector<std::size_t> strides(k > 0 ? k - 1 : 0, 1);
  for (std::size_t i = strides.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(bounds[i] + 1);
  }
  return strides;
}

// Advances `e` (restricted to its first `axes` components) through the box,
// last of those axes fastest. Returns false after the final vector.
bool next_prefix(Exponents& e, const Exponents& box, std::size_t axes) {
  for (std::size_t i = axes; i-- > 0;) {
    if (e[i] < box[i]) {
      ++e[i];
      return true;
    }
    e[i] = 0;
  }
  return false;
}

// dst ^= (src << shift), dst has dst_words words; bits of src past
// src_words are zero.
void shift_xor(std::uint64_t* dst, std::size_t dst_words, const std::uint64_t* src,
               std::size_t src_words, std::size_t shift) {
  const std::size_t ws = shift / kWordBits;
  const std::size_t bs = shift % kWordBits;
  for (std::size_t i = ws; i < dst_words; ++i) {
    const std::size_t j = i - ws;
    std::uint64_t v = j < src_words ? src[j] << bs : 0;
    if (bs != 0 && j >= 1 && j - 1 < src_words) v |= src[j - 1] >> (kWordBits - bs);
    dst[i] ^= v;
  }
}

}  // namespace

Exponents min_bounds(const Exponents& x, const Exponents& y) {
  if (x.size() != y.size()) throw DomainError("series_ring", "variable-count mismatch");
  Exponents out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

bool within(const Exponents& x, const Exponents& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] > y[i]) return false;
  }
  return true;
}

TruncatedSeries::TruncatedSeries(std::string vars, Exponents bounds)
    : vars_(std::move(vars)), bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw DomainError("series_ring", "series needs at least one variable");
  if (vars_.size() != bounds_.size()) {
    throw DomainError("series_ring", "variable names and bounds differ in length");
  }
  for (int b : bounds_) {
    if (b < 0) throw DomainError("series_ring", "negative truncation bound");
  }
  rows_ = 1;
  for (std::size_t i = 0; i + 1 < bounds_.size(); ++i) {
    rows_ *= static_cast<std::size_t>(bounds_[i] + 1);
  }
  words_ = words_for(bounds_.back());
  bits_.assign(rows_ * words_, 0);
}

TruncatedSeries TruncatedSeries::one(std::string vars, Exponents bounds) {
  TruncatedSeries s(std::move(vars), std::move(bounds));
  s.bits_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(std::string vars, Exponents bounds,
                                          const Exponents& e) {
  TruncatedSeries s(std::move(vars), std::move(bounds));
  s.set(e, true);
  return s;
}

std::size_t TruncatedSeries::row_index(const Exponents& e) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i + 1 < bounds_.size(); ++i) {
    idx = idx * static_cast<std::size_t>(bounds_[i] + 1) + static_cast<std::size_t>(e[i]);
  }
  return idx;
}

bool TruncatedSeries::coefficient(const Exponents& e) const {
  if (e.size() != bounds_.size()) throw DomainError("series_ring", "exponent arity mismatch");
  if (!within(e, bounds_)) return false;
  const auto bit = static_cast<std::size_t>(e.back());
  return (row(row_index(e))[bit / kWordBits] >> (bit % kWordBits)) & 1U;
}

void TruncatedSeries::set(const Exponents& e, bool value) {
  if (coefficient(e) != value) flip(e);
}

void TruncatedSeries::flip(const Exponents& e) {
  if (e.size() != bounds_.size()) throw DomainError("series_ring", "exponent arity mismatch");
  if (!within(e, bounds_)) throw DomainError("series_ring", "exponent outside truncation box");
  const auto bit = static_cast<std::size_t>(e.back());
  row(row_index(e))[bit / kWordBits] ^= std::uint64_t{1} << (bit % kWordBits);
}

bool TruncatedSeries::constant_term() const { return !bits_.empty() && (bits_[0] & 1U); }

bool TruncatedSeries::is_zero() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t TruncatedSeries::popcount() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<Exponents> TruncatedSeries::support() const {
  std::vector<Exponents> out;
  if (bounds_.empty()) return out;
  const std::size_t k = bounds_.size();
  Exponents e(k, 0);
  std::size_t r = 0;
  do {
    const std::uint64_t* words = row(r);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t v = words[w];
      while (v != 0) {
        const int b = std::countr_zero(v);
        v &= v - 1;
        e[k - 1] = static_cast<int>(w * kWordBits) + b;
        out.push_back(e);
      }
    }
    e[k - 1] = 0;
    ++r;
  } while (next_prefix(e, bounds_, k - 1));
  return out;
}

void TruncatedSeries::mask_tails() {
  const std::size_t used = static_cast<std::size_t>(bounds_.back()) + 1;
  const std::size_t rem = used % kWordBits;
  if (rem == 0) return;
  const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
  for (std::size_t r = 0; r < rows_; ++r) row(r)[words_ - 1] &= mask;
}

TruncatedSeries TruncatedSeries::truncated(const Exponents& box) const {
  if (box.size() != bounds_.size()) throw DomainError("series_ring", "variable-count mismatch");
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i] > bounds_[i]) {
      throw DomainError("series_ring", "cannot widen a truncation box");
    }
  }
  if (box == bounds_) return *this;
  TruncatedSeries out(vars_, box);
  const std::size_t k = box.size();
  Exponents e(k, 0);
  std::size_t r = 0;
  do {
    const std::uint64_t* src = row(row_index(e));
    std::copy(src, src + out.words_, out.row(r));
    ++r;
  } while (next_prefix(e, box, k - 1));
  out.mask_tails();
  return out;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& other, const char* op) const {
  if (arity() != other.arity()) {
    throw DomainError("series_ring", std::string(op) + ": variable-count mismatch");
  }
  if (vars_ != other.vars_) {
    throw DomainError("series_ring", std::string(op) + ": variables " + vars_ + " vs " +
                                         other.vars_);
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  check_compatible(other, "add");
  if (other.bounds_ != bounds_) {
    const Exponents box = min_bounds(bounds_, other.bounds_);
    *this = truncated(box);
    const TruncatedSeries rhs = other.truncated(box);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= rhs.bits_[i];
    return *this;
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

TruncatedSeries operator+(const TruncatedSeries& x, const TruncatedSeries& y) {
  TruncatedSeries out = x;
  out += y;
  return out;
}

TruncatedSeries operator*(const TruncatedSeries& x, const TruncatedSeries& y) {
  x.check_compatible(y, "mul");
  const Exponents box = min_bounds(x.bounds_, y.bounds_);
  // Walk the set bits of the sparser factor, XOR shifted rows of the other.
  const TruncatedSeries& sparse = x.popcount() <= y.popcount() ? x : y;
  const TruncatedSeries& dense = &sparse == &x ? y : x;

  TruncatedSeries out(x.vars_, box);
  const std::size_t k = box.size();
  const auto strides = row_strides(box);
  const int last = box.back();

  struct DenseRow {
    const std::uint64_t* words;
    std::size_t offset;
    Exponents prefix;
  };
  std::vector<DenseRow> dense_rows;
  {
    Exponents e(k, 0);
    do {
      std::size_t off = 0;
      for (std::size_t i = 0; i + 1 < k; ++i) off += strides[i] * static_cast<std::size_t>(e[i]);
      dense_rows.push_back({dense.row(dense.row_index(e)), off, e});
    } while (next_prefix(e, box, k - 1));
  }

  Exponents e(k, 0);
  do {
    const std::uint64_t* words = sparse.row(sparse.row_index(e));
    std::size_t base = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) base += strides[i] * static_cast<std::size_t>(e[i]);
    for (std::size_t w = 0; w < sparse.words_; ++w) {
      std::uint64_t v = words[w];
      while (v != 0) {
        const int b = std::countr_zero(v);
        v &= v - 1;
        const int shift = static_cast<int>(w * kWordBits) + b;
        if (shift > last) break;
        for (const auto& dr : dense_rows) {
          bool fits = true;
          for (std::size_t i = 0; i + 1 < k; ++i) {
            if (e[i] + dr.prefix[i] > box[i]) {
              fits = false;
              break;
            }
          }
          if (!fits) continue;
          shift_xor(out.row(base + dr.offset), out.words_, dr.words, dense.words_,
                    static_cast<std::size_t>(shift));
        }
      }
    }
  } while (next_prefix(e, box, k - 1));
  out.mask_tails();
  return out;
}

Comparison compare(const TruncatedSeries& x, const TruncatedSeries& y) {
  if (x.arity() != y.arity()) throw DomainError("series_ring", "compare: variable-count mismatch");
  Exponents box = min_bounds(x.bounds(), y.bounds());
  const TruncatedSeries diff = x.truncated(box) + y.truncated(box);
  return {diff.is_zero(), std::move(box)};
}

bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
  return compare(x, y).equal;
}

TruncatedSeries inverse(const TruncatedSeries& x) {
  if (!x.constant_term()) {
    throw DomainError("series_ring", "inverse: constant term is 0, series is not a unit");
  }
  // s <- 1 + (x + 1) s; each step fixes one more total degree.
  TruncatedSeries tail = x;
  tail.flip(Exponents(static_cast<std::size_t>(x.arity()), 0));
  const TruncatedSeries unit = TruncatedSeries::one(x.vars(), x.bounds());
  TruncatedSeries s = unit;
  int steps = 0;
  for (int b : x.bounds()) steps += b;
  for (int i = 0; i < steps; ++i) {
    TruncatedSeries next = unit + tail * s;
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

TruncatedSeries power(const TruncatedSeries& x, int n) {
  if (n < 0) throw DomainError("series_ring", "negative power");
  TruncatedSeries result = TruncatedSeries::one(x.vars(), x.bounds());
  TruncatedSeries base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::string to_text(const TruncatedSeries& s) {
  std::ostringstream os;
  os << "vars:";
  for (char v : s.vars()) os << ' ' << v;
  os << "\nbounds:";
  for (int b : s.bounds()) os << ' ' << b;
  os << '\n';
  const auto mons = s.support();
  if (mons.empty()) os << "0\n";
  for (const auto& m : mons) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i > 0) os << ' ';
      os << s.vars()[i] << '^' << m[i];
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

TruncatedSeries parse_series(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string vars;
  Exponents bounds;
  bool have_vars = false;
  bool have_bounds = false;
  std::vector<std::pair<int, Exponents>> monomials;
  bool saw_zero = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("vars:", 0) == 0) {
      std::istringstream ls(t.substr(5));
      std::string tok;
      while (ls >> tok) {
        if (tok.size() != 1) throw ParseError("series_ring", lineno, "bad variable '" + tok + "'");
        vars += tok;
      }
      have_vars = true;
    } else if (t.rfind("bounds:", 0) == 0) {
      std::istringstream ls(t.substr(7));
      int b = 0;
      while (ls >> b) bounds.push_back(b);
      if (!ls.eof()) throw ParseError("series_ring", lineno, "bad bounds line");
      have_bounds = true;
    } else if (t == "0") {
      saw_zero = true;
    } else {
      if (!have_vars) throw ParseError("series_ring", lineno, "monomial before vars: line");
      Exponents e(vars.size(), 0);
      std::vector<bool> seen(vars.size(), false);
      std::istringstream ls(t);
      std::string tok;
      while (ls >> tok) {
        const auto caret = tok.find('^');
        if (caret != 1) throw ParseError("series_ring", lineno, "bad factor '" + tok + "'");
        const auto idx = vars.find(tok[0]);
        if (idx == std::string::npos) {
          throw ParseError("series_ring", lineno, "unknown variable in '" + tok + "'");
        }
        try {
          std::size_t used = 0;
          const int p = std::stoi(tok.substr(2), &used);
          if (used != tok.size() - 2 || p < 0) throw std::invalid_argument(tok);
          if (seen[idx]) throw ParseError("series_ring", lineno, "repeated variable");
          seen[idx] = true;
          e[idx] = p;
        } catch (const std::logic_error&) {
          throw ParseError("series_ring", lineno, "bad exponent in '" + tok + "'");
        }
      }
      monomials.emplace_back(lineno, e);
    }
  }
  if (!have_vars || !have_bounds) throw ParseError("series_ring", 0, "missing vars: or bounds: header");
  if (vars.size() != bounds.size()) throw ParseError("series_ring", 0, "vars and bounds differ in length");
  if (saw_zero && !monomials.empty()) throw ParseError("series_ring", 0, "'0' mixed with monomials");
  TruncatedSeries s(vars, bounds);
  for (const auto& [ln, e] : monomials) {
    if (!within(e, bounds)) throw ParseError("series_ring", ln, "monomial outside bounds");
    if (s.coefficient(e)) throw ParseError("series_ring", ln, "duplicate monomial");
    s.set(e, true);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s) { return os << to_text(s); }

}  // namespace gf2
