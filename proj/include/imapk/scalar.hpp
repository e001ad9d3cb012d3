#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imapk/poly.hpp"

namespace imapk {

/// Real algebraic number field Q(alpha), alpha the unique root of `min_poly`
/// inside an open isolating interval. Immutable once built.
class NumberField {
 public:
  static constexpr int kDefaultMaxDegree = 8;

  /// `poly` in ascending coefficients. Rational roots other than alpha are
  /// divided out; fails with InvalidField if the polynomial is not squarefree,
  /// the interval does not isolate exactly one root, or alpha is rational.
  static std::shared_ptr<const NumberField> create(const std::vector<mpq_class>& poly, const mpq_class& lo,
                                                   const mpq_class& hi, int max_degree = kDefaultMaxDegree);

  int degree() const { return min_poly_.degree(); }
  const QPoly& min_poly() const { return min_poly_; }
  const mpq_class& lo() const { return lo_; }
  const mpq_class& hi() const { return hi_; }
  /// No factor of degree < 4 can exist (deg <= 3 and no rational root).
  bool known_irreducible() const { return known_irreducible_; }

  /// Same defining polynomial and the two isolating intervals select the same root.
  bool same_as(const NumberField& other) const;

  /// Narrow isolating interval of alpha with width at most `width`.
  QInterval isolate(const mpq_class& width) const;
  /// Bisect once around alpha, returning the half that still holds it. If the
  /// midpoint is alpha itself the degenerate interval [mid, mid] is returned.
  QInterval bisect(const QInterval& iv) const;

  /// "poly:[c0,...,cd]; iso:[lo,hi]"
  std::string to_string() const;

 private:
  NumberField() = default;
  QPoly min_poly_;
  mpq_class lo_, hi_;
  QInterval fine_;  // refined at construction, width <= 2^-64
  int sign_at_lo_ = 0;
  bool known_irreducible_ = false;
};

using FieldPtr = std::shared_ptr<const NumberField>;

enum class Ordering { LT = -1, EQ = 0, GT = 1 };

/// Exact real number: a rational, or an element sum(e_i * alpha^i) of a number
/// field. Canonical form: values whose coefficients beyond the constant term
/// vanish are stored as plain rationals (null field).
class Scalar {
 public:
  Scalar() : coeffs_{mpq_class(0)} {}
  Scalar(long v) : coeffs_{mpq_class(v)} {}  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& q);                 // NOLINT(google-explicit-constructor)
  Scalar(long num, long den);
  Scalar(FieldPtr field, std::vector<mpq_class> coeffs);

  static Scalar generator(const FieldPtr& field);

  bool is_rational() const { return field_ == nullptr; }
  const mpq_class& rational() const;  // throws unless is_rational()
  const FieldPtr& field() const { return field_; }
  /// Coefficients in the power basis (a single entry for rationals).
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  int sign() const;
  bool is_zero() const { return sign() == 0; }

  friend Ordering compare(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) { return compare(a, b) == Ordering::EQ; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) == Ordering::LT; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) == Ordering::GT; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) != Ordering::GT; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) != Ordering::LT; }

  /// Rational enclosure of width at most `width`.
  QInterval enclose(const mpq_class& width) const;
  mpz_class floor() const;
  double to_double() const;

  /// Hash of the canonical coefficient vector. Consistent with == whenever
  /// the field polynomial is irreducible.
  std::size_t hash() const;
  /// Coefficient-wise equality, no sign determination.
  bool same_representation(const Scalar& other) const;

  /// "p/q", "p", or "poly:[...]; iso:[lo,hi]; elem:[e0,...]".
  std::string to_string() const;
  /// Text used inside map specs when the field is already declared: "p/q" or "alg:[e0,...]".
  std::string to_short_string() const;

 private:
  void canonicalize();
  FieldPtr field_;
  std::vector<mpq_class> coeffs_;
};

struct ScalarHash {
  std::size_t operator()(const Scalar& s) const { return s.hash(); }
};
struct ScalarSameRepr {
  bool operator()(const Scalar& a, const Scalar& b) const { return a.same_representation(b); }
};

/// The common field of a set of scalars (null when all are rational).
/// Throws MixedFieldContexts on disagreement.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

mpq_class parse_rational(std::string_view text);
/// Parses "p/q", "p", "alg:[...]" (needs `field`), or the full algebraic form.
Scalar parse_scalar(std::string_view text, const FieldPtr& field = nullptr);

/// p-adic valuation of a nonzero rational.
long valuation(const mpq_class& q, const mpz_class& prime);

}  // namespace imapk
