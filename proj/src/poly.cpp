#include "imapk/poly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "imapk/error.hpp"

namespace imapk {

QInterval operator+(const QInterval& a, const QInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

QInterval operator*(const QInterval& a, const QInterval& b) {
  mpq_class p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

QInterval operator*(const mpq_class& c, const QInterval& a) {
  if (sgn(c) >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

QPoly QPoly::constant(const mpq_class& c) { return QPoly({c}); }

QPoly QPoly::monomial(const mpq_class& c, int degree) {
  std::vector<mpq_class> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

mpq_class QPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<size_t>(i)];
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QInterval QPoly::eval(const QInterval& x) const {
  QInterval acc{0, 0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x;
    acc.lo += *it;
    acc.hi += *it;
  }
  return acc;
}

QPoly QPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<mpq_class> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  mpq_class inv = 1 / lead();
  return inv * *this;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
  return QPoly(std::move(r));
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> r(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return QPoly(std::move(r));
}

QPoly operator*(const mpq_class& c, const QPoly& a) {
  std::vector<mpq_class> r = a.coeffs_;
  for (auto& x : r) x *= c;
  return QPoly(std::move(r));
}

static std::string format_term(const std::string& coeff_abs, int power, char var) {
  std::ostringstream os;
  if (power == 0) return coeff_abs;
  if (coeff_abs != "1") os << coeff_abs << "*";
  os << var;
  if (power > 1) os << "^" << power;
  return os.str();
}

template <class Num>
static std::string poly_to_string(const std::vector<Num>& c, char var) {
  if (c.empty()) return "0";
  std::string out;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    const Num& x = c[static_cast<size_t>(i)];
    if (sgn(x) == 0) continue;
    Num a = abs(x);
    std::string term = format_term(a.get_str(), i, var);
    if (out.empty()) {
      out = (sgn(x) < 0 ? "-" : "") + term;
    } else {
      out += (sgn(x) < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

std::string QPoly::to_string(char var) const { return poly_to_string(coeffs_, var); }

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::vector<mpq_class> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {QPoly{}, a};
  std::vector<mpq_class> quo(static_cast<size_t>(a.degree() - db) + 1);
  const mpq_class inv = 1 / b.lead();
  for (int i = a.degree(); i >= db; --i) {
    mpq_class q = rem[static_cast<size_t>(i)] * inv;
    if (sgn(q) == 0) continue;
    quo[static_cast<size_t>(i - db)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(i - db + j)] -= q * b.coeffs()[static_cast<size_t>(j)];
  }
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtendedGcd extended_gcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::constant(1), s1;
  QPoly t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    QPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {};
  mpq_class inv = 1 / r0.lead();
  return {inv * r0, inv * s0, inv * t0};
}

QPoly squarefree_part(const QPoly& p) {
  if (p.degree() <= 0) return p.monic();
  QPoly g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

// ---------------------------------------------------------------- Sturm

SturmSequence::SturmSequence(const QPoly& squarefree) {
  chain_.push_back(squarefree);
  chain_.push_back(squarefree.derivative());
  while (!chain_.back().is_zero()) {
    QPoly r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
    chain_.push_back(-r);
  }
  chain_.pop_back();
}

int SturmSequence::sign_changes(const mpq_class& x) const {
  int changes = 0, last = 0;
  for (const auto& p : chain_) {
    int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmSequence::count_roots(const mpq_class& lo, const mpq_class& hi) const {
  if (chain_.empty() || lo >= hi) return 0;
  return sign_changes(lo) - sign_changes(hi);
}

// ---------------------------------------------------------------- rational roots

static std::vector<mpz_class> positive_divisors(const mpz_class& n) {
  std::vector<std::pair<mpz_class, unsigned>> factors;
  mpz_class m = abs(n);
  for (mpz_class p = 2; p * p <= m; ++p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) factors.emplace_back(p, e);
  }
  if (m > 1) factors.emplace_back(m, 1);
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : factors) {
    const size_t base = divs.size();
    mpz_class pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

std::vector<mpq_class> rational_roots(const QPoly& p, unsigned max_bits) {
  std::vector<mpq_class> roots;
  if (p.degree() <= 0) return roots;
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> ic;
  for (const auto& c : p.coeffs()) ic.push_back(mpz_class(c * l));
  size_t shift = 0;
  while (shift < ic.size() && ic[shift] == 0) ++shift;
  if (shift > 0) roots.emplace_back(0);
  if (ic.size() - shift <= 1) return roots;
  const mpz_class& a0 = ic[shift];
  const mpz_class& an = ic.back();
  if (mpz_sizeinbase(a0.get_mpz_t(), 2) > max_bits || mpz_sizeinbase(an.get_mpz_t(), 2) > max_bits)
    return roots;
  std::set<mpq_class> found;
  for (const auto& num : positive_divisors(a0)) {
    for (const auto& den : positive_divisors(an)) {
      for (int s : {1, -1}) {
        mpq_class cand(num * s, den);
        cand.canonicalize();
        if (sgn(p.eval(cand)) == 0) found.insert(cand);
      }
    }
  }
  roots.insert(roots.end(), found.begin(), found.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::from_rational(const QPoly& p) {
  std::vector<mpz_class> c;
  for (const auto& q : p.coeffs()) {
    if (q.get_den() != 1)
      fail(ErrorKind::NonIntegerDependence, "coefficient " + q.get_str() + " of " + p.to_string() + " is not integral");
    c.push_back(q.get_num());
  }
  return IntPoly(std::move(c));
}

mpz_class IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<size_t>(i)];
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QPoly IntPoly::to_rational() const {
  std::vector<mpq_class> c(coeffs_.begin(), coeffs_.end());
  return QPoly(std::move(c));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] -= b.coeffs_[i];
  return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> r(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPoly(std::move(r));
}

std::string IntPoly::to_string(char var) const { return poly_to_string(coeffs_, var); }

}  // namespace imapk
