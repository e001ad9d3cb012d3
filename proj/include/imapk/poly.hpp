#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace imapk {

/// Closed rational interval [lo, hi].
struct QInterval {
  mpq_class lo;
  mpq_class hi;

  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  mpq_class width() const { return hi - lo; }
};

QInterval operator+(const QInterval& a, const QInterval& b);
QInterval operator*(const QInterval& a, const QInterval& b);
QInterval operator*(const mpq_class& c, const QInterval& a);

/// Dense univariate polynomial over Q, ascending coefficients, always trimmed
/// (the zero polynomial has no coefficients and degree -1).
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> coeffs);

  static QPoly constant(const mpq_class& c);
  static QPoly monomial(const mpq_class& c, int degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  mpq_class coeff(int i) const;
  const mpq_class& lead() const { return coeffs_.back(); }

  mpq_class eval(const mpq_class& x) const;
  QInterval eval(const QInterval& x) const;
  QPoly derivative() const;
  QPoly monic() const;

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const mpq_class& c, const QPoly& a);
  QPoly operator-() const;
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string(char var = 't') const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

/// Quotient and remainder; `b` must be nonzero.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
/// Monic gcd (zero when both inputs are zero).
QPoly gcd(const QPoly& a, const QPoly& b);

struct ExtendedGcd {
  QPoly g;  // monic
  QPoly s;
  QPoly t;  // s*a + t*b = g
};
ExtendedGcd extended_gcd(const QPoly& a, const QPoly& b);

/// Squarefree part p / gcd(p, p').
QPoly squarefree_part(const QPoly& p);

class SturmSequence {
 public:
  explicit SturmSequence(const QPoly& squarefree);
  int sign_changes(const mpq_class& x) const;
  /// Number of distinct real roots in the half-open interval (lo, hi].
  int count_roots(const mpq_class& lo, const mpq_class& hi) const;

 private:
  std::vector<QPoly> chain_;
};

/// Distinct rational roots, ascending. Coefficients beyond `max_bits` bits
/// make the divisor enumeration impractical; such inputs return nothing.
std::vector<mpq_class> rational_roots(const QPoly& p, unsigned max_bits = 40);

/// Integer polynomial, ascending coefficients, trimmed.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  /// Throws NonIntegerDependence if some coefficient is not integral.
  static IntPoly from_rational(const QPoly& p);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  mpz_class coeff(int i) const;
  mpz_class eval(const mpz_class& x) const;
  QPoly to_rational() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// e.g. "t^2 - t - 1"
  std::string to_string(char var = 't') const;

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

}  // namespace imapk
