#include "imapk/scalar.hpp"

#include <cctype>
#include <functional>

#include "imapk/error.hpp"

namespace imapk {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// "[a, b, c]" -> {"a", "b", "c"}
std::vector<std::string_view> split_list(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(ErrorKind::ParseError, "expected [..] list, got '" + std::string(s) + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<mpq_class> parse_rational_list(std::string_view s) {
  std::vector<mpq_class> out;
  for (auto item : split_list(s)) out.push_back(parse_rational(item));
  return out;
}

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = std::hash<long>{}(static_cast<long>(z->_mp_size));
  if (mpz_size(z) > 0) h ^= std::hash<unsigned long>{}(mpz_getlimbn(z, 0)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string list_to_string(const std::vector<mpq_class>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + "]";
}

QPoly reduce_mod(const QPoly& e, const QPoly& m) {
  if (e.degree() < m.degree()) return e;
  return divmod(e, m).second;
}

}  // namespace

// ---------------------------------------------------------------- NumberField

std::shared_ptr<const NumberField> NumberField::create(const std::vector<mpq_class>& poly, const mpq_class& lo,
                                                       const mpq_class& hi, int max_degree) {
  QPoly p = QPoly(poly).monic();
  if (p.degree() < 2) fail(ErrorKind::InvalidField, "minimal polynomial must have degree >= 2");
  if (p.degree() > max_degree)
    fail(ErrorKind::InvalidField, "degree " + std::to_string(p.degree()) + " exceeds cap " + std::to_string(max_degree));
  if (lo >= hi) fail(ErrorKind::InvalidField, "isolating interval must satisfy lo < hi");
  if (gcd(p, p.derivative()).degree() > 0) fail(ErrorKind::InvalidField, p.to_string('x') + " is not squarefree");
  const int s_lo = sgn(p.eval(lo)), s_hi = sgn(p.eval(hi));
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi)
    fail(ErrorKind::InvalidField, "no sign change of " + p.to_string('x') + " across the isolating interval");
  if (SturmSequence(p).count_roots(lo, hi) != 1)
    fail(ErrorKind::InvalidField, "isolating interval holds more than one root of " + p.to_string('x'));

  for (const auto& r : rational_roots(p)) {
    if (r > lo && r < hi) fail(ErrorKind::InvalidField, "isolated root " + r.get_str() + " is rational");
    p = divmod(p, QPoly({-r, mpq_class(1)})).first;
  }
  if (p.degree() < 2) fail(ErrorKind::InvalidField, "isolated root is rational");

  auto f = std::shared_ptr<NumberField>(new NumberField());
  f->min_poly_ = p;
  f->lo_ = lo;
  f->hi_ = hi;
  f->sign_at_lo_ = sgn(p.eval(lo));
  bool small = true;
  for (const auto& c : p.coeffs())
    if (mpz_sizeinbase(c.get_num_mpz_t(), 2) > 40 || mpz_sizeinbase(c.get_den_mpz_t(), 2) > 40) small = false;
  f->known_irreducible_ = p.degree() <= 3 && small;
  QInterval iv{lo, hi};
  mpq_class target(1);
  target /= mpq_class(mpz_class(1) << 64);
  while (iv.width() > target) iv = f->bisect(iv);
  f->fine_ = iv;
  return f;
}

QInterval NumberField::bisect(const QInterval& iv) const {
  mpq_class mid = (iv.lo + iv.hi) / 2;
  int s = sgn(min_poly_.eval(mid));
  if (s == 0) return {mid, mid};
  if (s == sign_at_lo_) return {mid, iv.hi};
  return {iv.lo, mid};
}

QInterval NumberField::isolate(const mpq_class& width) const {
  QInterval iv = fine_.width() <= width ? fine_ : QInterval{lo_, hi_};
  while (iv.width() > width) iv = bisect(iv);
  return iv;
}

bool NumberField::same_as(const NumberField& other) const {
  if (this == &other) return true;
  if (!(min_poly_ == other.min_poly_)) return false;
  mpq_class l = std::max(lo_, other.lo_), h = std::min(hi_, other.hi_);
  if (l >= h) return false;
  return SturmSequence(min_poly_).count_roots(l, h) == 1;
}

std::string NumberField::to_string() const {
  return "poly:" + list_to_string(min_poly_.coeffs()) + "; iso:[" + lo_.get_str() + "," + hi_.get_str() + "]";
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(const mpq_class& q) : coeffs_{q} { coeffs_[0].canonicalize(); }

Scalar::Scalar(long num, long den) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  coeffs_ = {q};
}

Scalar::Scalar(FieldPtr field, std::vector<mpq_class> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  canonicalize();
}

Scalar Scalar::generator(const FieldPtr& field) { return Scalar(field, {mpq_class(0), mpq_class(1)}); }

void Scalar::canonicalize() {
  for (auto& c : coeffs_) c.canonicalize();
  if (field_ && static_cast<int>(coeffs_.size()) > field_->degree()) {
    coeffs_ = reduce_mod(QPoly(coeffs_), field_->min_poly()).coeffs();
  }
  while (coeffs_.size() > 1 && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.emplace_back(0);
  if (coeffs_.size() == 1) field_.reset();
}

const mpq_class& Scalar::rational() const {
  if (field_) fail(ErrorKind::MixedFieldContexts, "scalar " + to_string() + " is not rational");
  return coeffs_[0];
}

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a == b || a->same_as(*b)) return a;
  fail(ErrorKind::MixedFieldContexts, "scalars from " + a->to_string() + " and " + b->to_string());
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  FieldPtr f = common_field(a.field_, b.field_);
  std::vector<mpq_class> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
  return Scalar(f, std::move(r));
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  FieldPtr f = common_field(a.field_, b.field_);
  if (!f) return Scalar(a.coeffs_[0] * b.coeffs_[0]);
  QPoly prod = QPoly(a.coeffs_) * QPoly(b.coeffs_);
  return Scalar(f, reduce_mod(prod, f->min_poly()).coeffs());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  FieldPtr f = common_field(a.field_, b.field_);
  if (b.is_rational()) {
    if (sgn(b.coeffs_[0]) == 0) fail(ErrorKind::DivisionByZero, "division of " + a.to_string() + " by zero");
    mpq_class inv = 1 / b.coeffs_[0];
    return a * Scalar(inv);
  }
  const QPoly& m = f->min_poly();
  ExtendedGcd eg = extended_gcd(QPoly(b.coeffs_), m);
  if (eg.g.degree() > 0) {
    if (b.sign() == 0) fail(ErrorKind::DivisionByZero, "division by " + b.to_string() + " which is zero");
    fail(ErrorKind::ReducibleMinPoly, "divisor shares factor " + eg.g.to_string('x') + " with the field polynomial");
  }
  return a * Scalar(f, eg.s.coeffs());
}

int Scalar::sign() const {
  if (!field_) return sgn(coeffs_[0]);
  const QPoly e(coeffs_);
  const NumberField& f = *field_;
  if (!f.known_irreducible()) {
    QPoly g = gcd(e, f.min_poly());
    if (g.degree() > 0 && SturmSequence(g).count_roots(f.lo(), f.hi()) == 1) return 0;
  }
  mpq_class width(1);
  width /= mpq_class(mpz_class(1) << 64);
  QInterval iv = f.isolate(width);
  for (;;) {
    if (iv.lo == iv.hi) return sgn(e.eval(iv.lo));
    QInterval val = e.eval(iv);
    if (sgn(val.lo) > 0) return 1;
    if (sgn(val.hi) < 0) return -1;
    iv = f.bisect(iv);
  }
}

Ordering compare(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) {
    int c = cmp(a.coeffs_[0], b.coeffs_[0]);
    return c < 0 ? Ordering::LT : (c > 0 ? Ordering::GT : Ordering::EQ);
  }
  int s = (a - b).sign();
  return s < 0 ? Ordering::LT : (s > 0 ? Ordering::GT : Ordering::EQ);
}

QInterval Scalar::enclose(const mpq_class& width) const {
  if (!field_) return {coeffs_[0], coeffs_[0]};
  const QPoly e(coeffs_);
  QInterval iv = field_->isolate(width);
  for (;;) {
    if (iv.lo == iv.hi) {
      mpq_class v = e.eval(iv.lo);
      return {v, v};
    }
    QInterval val = e.eval(iv);
    if (val.width() <= width) return val;
    iv = field_->bisect(iv);
  }
}

mpz_class Scalar::floor() const {
  QInterval iv = enclose(mpq_class(1, 2));
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), iv.lo.get_num_mpz_t(), iv.lo.get_den_mpz_t());
  if (*this >= Scalar(mpq_class(k + 1))) return k + 1;
  return k;
}

double Scalar::to_double() const {
  QInterval iv = enclose(mpq_class(1, mpz_class(1) << 60));
  mpq_class mid = (iv.lo + iv.hi) / 2;
  return mid.get_d();
}

std::size_t Scalar::hash() const {
  std::size_t h = coeffs_.size();
  for (const auto& c : coeffs_) {
    h ^= hash_mpz(c.get_num_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= hash_mpz(c.get_den_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool Scalar::same_representation(const Scalar& other) const {
  if (coeffs_ != other.coeffs_) return false;
  if (!field_ || !other.field_) return !field_ && !other.field_;
  return field_ == other.field_ || field_->same_as(*other.field_);
}

std::string Scalar::to_string() const {
  if (!field_) return coeffs_[0].get_str();
  std::vector<mpq_class> padded = coeffs_;
  padded.resize(static_cast<size_t>(field_->degree()));
  return field_->to_string() + "; elem:" + list_to_string(padded);
}

std::string Scalar::to_short_string() const {
  if (!field_) return coeffs_[0].get_str();
  std::vector<mpq_class> padded = coeffs_;
  padded.resize(static_cast<size_t>(field_->degree()));
  return "alg:" + list_to_string(padded);
}

// ---------------------------------------------------------------- parsing

mpq_class parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto bad = [&] { fail(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'"); };
  if (s.empty()) bad();
  size_t slash = s.find('/');
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (!t.empty() && allow_sign && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string num(trim(s.substr(0, slash)));
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num, true)) bad();
  mpz_class n(num, 10), d(1);
  if (slash != std::string_view::npos) {
    std::string den(trim(s.substr(slash + 1)));
    if (!valid_int(den, false)) bad();
    d = mpz_class(den, 10);
    if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  }
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

Scalar parse_scalar(std::string_view text, const FieldPtr& field) {
  std::string_view s = trim(text);
  if (s.rfind("alg:", 0) == 0) {
    if (!field) fail(ErrorKind::ParseError, "'" + std::string(s) + "' needs a field declaration");
    auto coeffs = parse_rational_list(s.substr(4));
    if (static_cast<int>(coeffs.size()) > field->degree())
      fail(ErrorKind::ParseError, "element has more coefficients than the field degree");
    return Scalar(field, std::move(coeffs));
  }
  if (s.rfind("poly:", 0) == 0) {
    size_t iso = s.find("iso:"), elem = s.find("elem:");
    if (iso == std::string_view::npos || elem == std::string_view::npos)
      fail(ErrorKind::ParseError, "algebraic scalar needs poly:, iso: and elem: parts");
    auto cut = [](std::string_view part) {
      part = trim(part);
      if (!part.empty() && part.back() == ';') part.remove_suffix(1);
      return part;
    };
    auto poly = parse_rational_list(cut(s.substr(5, iso - 5)));
    auto bounds = parse_rational_list(cut(s.substr(iso + 4, elem - iso - 4)));
    auto coeffs = parse_rational_list(cut(s.substr(elem + 5)));
    if (bounds.size() != 2) fail(ErrorKind::ParseError, "iso: needs exactly two bounds");
    FieldPtr f = NumberField::create(poly, bounds[0], bounds[1]);
    if (field && f->same_as(*field)) f = field;
    return Scalar(f, std::move(coeffs));
  }
  return Scalar(parse_rational(s));
}

long valuation(const mpq_class& q, const mpz_class& prime) {
  if (sgn(q) == 0) fail(ErrorKind::DivisionByZero, "valuation of zero");
  auto v = [&](mpz_class z) {
    long e = 0;
    z = abs(z);
    while (z % prime == 0) {
      z /= prime;
      ++e;
    }
    return e;
  };
  return v(q.get_num()) - v(q.get_den());
}

}  // namespace imapk
