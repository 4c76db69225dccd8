#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gf2 {

/// Exponents (e1, ..., ek) of the monomial a1^e1 ... ak^ek. Also used as a
/// per-variable truncation box.
using Exponents = std::vector<int>;

/// Componentwise minimum of two boxes of equal length.
Exponents min_bounds(const Exponents& x, const Exponents& y);

/// True iff x <= y componentwise.
bool within(const Exponents& x, const Exponents& y);

/// A formal power series over GF(2) in the commuting variables `vars`
/// (one letter each), known exactly for every exponent vector inside the
/// per-variable box `bounds`.
///
/// Coefficients are bit-packed: the last variable indexes bits inside a row
/// of 64-bit words, the remaining variables index rows in row-major order.
/// Binary operations work on the common box (componentwise minimum).
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(std::string vars, Exponents bounds);

  static TruncatedSeries one(std::string vars, Exponents bounds);
  static TruncatedSeries monomial(std::string vars, Exponents bounds,
                                  const Exponents& e);

  const std::string& vars() const noexcept { return vars_; }
  const Exponents& bounds() const noexcept { return bounds_; }
  int arity() const noexcept { return static_cast<int>(bounds_.size()); }

  /// Coefficient at `e`; exponents outside the box read as false.
  bool coefficient(const Exponents& e) const;
  void set(const Exponents& e, bool value);
  void flip(const Exponents& e);

  bool constant_term() const;
  bool is_zero() const;
  std::size_t popcount() const;

  /// Monomials with coefficient 1, sorted lexicographically.
  std::vector<Exponents> support() const;

  /// Same series, viewed inside a box no larger than the current one on any
  /// axis (a smaller axis truncates; a larger one throws).
  TruncatedSeries truncated(const Exponents& box) const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  friend TruncatedSeries operator+(const TruncatedSeries& x,
                                   const TruncatedSeries& y);
  friend TruncatedSeries operator*(const TruncatedSeries& x,
                                   const TruncatedSeries& y);

  /// Truncation-aware equality: compares inside the common box only.
  friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y);

 private:
  std::size_t row_count() const noexcept { return rows_; }
  std::size_t words_per_row() const noexcept { return words_; }
  std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }
  const std::uint64_t* row(std::size_t r) const {
    return bits_.data() + r * words_;
  }
  std::size_t row_index(const Exponents& e) const;
  void check_compatible(const TruncatedSeries& other, const char* op) const;
  void mask_tails();

  std::string vars_;
  Exponents bounds_;
  std::size_t rows_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Result of a truncation-aware comparison.
struct Comparison {
  bool equal;
  Exponents box;  ///< the common box the comparison was exact on
};

Comparison compare(const TruncatedSeries& x, const TruncatedSeries& y);

/// Multiplicative inverse of a series with constant term 1, inside its box.
TruncatedSeries inverse(const TruncatedSeries& x);

/// x^n inside x's box.
TruncatedSeries power(const TruncatedSeries& x, int n);

/// Series text format: `vars:` and `bounds:` header lines, then one monomial
/// per line (`a^2 b^0 c^1`) in lexicographic order, or `0` for zero.
std::string to_text(const TruncatedSeries& s);
TruncatedSeries parse_series(std::string_view text);

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s);

}  // namespace gf2
