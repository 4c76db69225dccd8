#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gf2/series.hpp"

namespace gf2 {

/// A polynomial over GF(2): a series with finite support, stored exactly in
/// its own degree box. Carries a variable-subset tag; a polynomial tagged
/// with axes {i, j} lives in GF(2)[a_i, a_j] and construction rejects
/// support on any other axis.
class Gf2Polynomial {
 public:
  using AxisMask = std::uint32_t;

  Gf2Polynomial() = default;
  /// The zero polynomial in `vars`.
  explicit Gf2Polynomial(std::string vars);
  /// Exact polynomial equal to `s` (the series must be known exactly, i.e.
  /// the caller vouches that nothing lies outside the box).
  explicit Gf2Polynomial(const TruncatedSeries& s);

  static Gf2Polynomial constant(std::string vars, bool value);
  static Gf2Polynomial variable(std::string vars, int axis);
  static Gf2Polynomial monomial(std::string vars, const Exponents& e);
  static Gf2Polynomial from_monomials(std::string vars, const std::vector<Exponents>& mons);

  static AxisMask all_axes(int arity) { return arity >= 32 ? ~AxisMask{0} : (AxisMask{1} << arity) - 1; }
  static AxisMask axes(std::initializer_list<int> list);

  const std::string& vars() const noexcept { return vars_; }
  int arity() const noexcept { return static_cast<int>(vars_.size()); }

  /// Returns a copy tagged with `mask`; throws if support leaves the mask.
  Gf2Polynomial tagged(AxisMask mask) const;
  AxisMask tag() const noexcept { return tag_; }
  /// Axes actually used by the support.
  AxisMask used_axes() const;

  bool is_zero() const;
  bool is_invertible() const;
  bool coefficient(const Exponents& e) const;
  int degree(int axis) const;  ///< -1 for the zero polynomial
  const Exponents& degree_box() const noexcept { return box_; }
  std::vector<Exponents> monomials() const;

  /// This polynomial as a series truncated to (or zero-padded up to) `bounds`.
  TruncatedSeries lift(const Exponents& bounds) const;

  /// Same support re-expressed over a larger variable list: axis i moves to
  /// `axis_map[i]` in `vars`.
  Gf2Polynomial embed(std::string vars, const std::vector<int>& axis_map) const;

  friend Gf2Polynomial operator+(const Gf2Polynomial& x, const Gf2Polynomial& y);
  friend Gf2Polynomial operator*(const Gf2Polynomial& x, const Gf2Polynomial& y);
  friend bool operator==(const Gf2Polynomial& x, const Gf2Polynomial& y);

  /// `1 + a*c + a^2*b`; graded-lexicographic, `0` for zero.
  std::string to_string() const;

 private:
  void normalize();

  std::string vars_;
  Exponents box_;
  TruncatedSeries coeffs_;
  AxisMask tag_ = 0;
};

bool is_invertible(const Gf2Polynomial& p);

/// Power-series inverse of an invertible polynomial inside `bounds`.
TruncatedSeries inverse(const Gf2Polynomial& p, const Exponents& bounds);

/// True iff candidate * prod(denominators) == numerator on the common box.
bool quotient_check(const TruncatedSeries& numerator,
                    const std::vector<Gf2Polynomial>& denominators,
                    const TruncatedSeries& candidate);

/// Parses `+`, `*`, `^`, parentheses, `0`, `1` and single-letter variables
/// drawn from `vars`.
Gf2Polynomial parse_polynomial(std::string_view expr, const std::string& vars);

std::ostream& operator<<(std::ostream& os, const Gf2Polynomial& p);

}  // namespace gf2
