#include "imapk/entropy.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "imapk/error.hpp"

namespace imapk {

namespace {

QPoly strip_zero_roots(QPoly p) {
  std::size_t z = 0;
  while (z < p.coeffs().size() && p.coeffs()[z] == 0) ++z;
  return QPoly(std::vector<mpq_class>(p.coeffs().begin() + static_cast<long>(z), p.coeffs().end()));
}

std::string display(const Scalar& s) {
  if (s.is_rational()) return s.rational().get_str();
  std::ostringstream o;
  o << s.to_short_string() << " ~ " << std::setprecision(12) << s.to_double();
  return o.str();
}

}  // namespace

PerronEnclosure perron_enclosure(const IntMatrix& a, const mpq_class& tol) {
  if (!a.square()) fail(ErrorKind::NotSquare, "incidence matrix must be square");
  if (sgn(tol) <= 0) fail(ErrorKind::ParameterOutOfRange, "tolerance must be positive");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) < 0) fail(ErrorKind::ParameterOutOfRange, "matrix entries must be nonnegative");

  PerronEnclosure out;
  QPoly chi = characteristic_polynomial(a).to_rational();
  QPoly p = squarefree_part(strip_zero_roots(chi));
  if (p.degree() <= 0) {
    out.lo = out.hi = 0;
    out.exact = Scalar(0);
    out.factor = QPoly({0, 1});
    return out;
  }
  mpz_class rmax = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mpz_class s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
    rmax = std::max(rmax, s);
  }
  mpq_class top(rmax);

  // Rational roots are split off; what remains has only irrational roots.
  QPoly rest = p;
  mpq_class best_rational = 0;
  bool any_rational = false;
  for (const auto& r : rational_roots(p)) {
    rest = divmod(rest, QPoly({-r, 1})).first;
    if (!any_rational || r > best_rational) best_rational = r;
    any_rational = true;
  }
  mpq_class floor_lo = any_rational ? std::max(best_rational, mpq_class(1)) : mpq_class(1);
  if (rest.degree() <= 0 || SturmSequence(rest).count_roots(floor_lo, top) == 0) {
    out.lo = out.hi = best_rational;
    out.exact = Scalar(best_rational);
    out.factor = QPoly({-best_rational, 1});
    return out;
  }
  SturmSequence sturm(rest);
  mpq_class lo = floor_lo, hi = top;
  while (sturm.count_roots(lo, hi) > 1 || hi - lo > tol) {
    mpq_class mid = (lo + hi) / 2;
    if (sturm.count_roots(mid, hi) >= 1) lo = mid;
    else hi = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.factor = rest.monic();
  if (rest.degree() == 2) {
    auto field = NumberField::create(out.factor.coeffs(), lo, hi);
    out.exact = Scalar::generator(field);
  }
  return out;
}

std::string_view to_string(EntropyReport::Method m) {
  switch (m) {
    case EntropyReport::Method::PerronMarkov: return "perron_markov";
    case EntropyReport::Method::UniformSlope: return "uniform_slope";
    case EntropyReport::Method::Unknown: return "unknown";
  }
  return "";
}

std::string EntropyReport::entropy_text() const {
  if (exact_s) return *exact_s == Scalar(1) ? "0" : "ln " + display(*exact_s);
  if (s_enclosure) return "ln s, s in [" + display(s_enclosure->first) + ", " + display(s_enclosure->second) + "]";
  return "unknown";
}

nlohmann::json EntropyReport::to_json() const {
  nlohmann::json j = {{"method", to_string(method)}, {"entropy_note", entropy_text()}, {"notes", notes}};
  j["s_enclosure"] = s_enclosure ? nlohmann::json::array({s_enclosure->first.to_string(), s_enclosure->second.to_string()})
                                 : nlohmann::json(nullptr);
  j["exact_s"] = exact_s ? nlohmann::json(exact_s->to_string()) : nlohmann::json(nullptr);
  if (exact_s) j["exact_s_approx"] = exact_s->to_double();
  return j;
}

std::optional<Scalar> uniform_slope(const PMMap& m) {
  auto mag = [](const Scalar& s) { return s.sign() < 0 ? -s : s; };
  Scalar s = mag(m.branch(0).slope);
  for (std::size_t i = 1; i < m.branch_count(); ++i)
    if (mag(m.branch(i).slope) != s) return std::nullopt;
  return s;
}

EntropyReport entropy_report(const PMMap& m, const FlagReport& flags, const std::optional<MarkovData>& markov,
                             const mpq_class& tol) {
  EntropyReport r;
  auto slope = uniform_slope(m);
  if (markov) {
    auto p = perron_enclosure(markov->matrix, tol);
    r.method = EntropyReport::Method::PerronMarkov;
    r.s_enclosure = std::make_pair(Scalar(p.lo), Scalar(p.hi));
    r.exact_s = p.exact;
    if (p.exact && !p.exact->is_rational()) r.notes.push_back("Perron root is a root of " + p.factor.to_string('t'));
    if (slope && flags.transitive == Tri::Yes) r.notes.push_back("uniform slope " + display(*slope));
  } else if (slope && (flags.transitive == Tri::Yes || *slope == Scalar(1))) {
    r.method = EntropyReport::Method::UniformSlope;
    r.s_enclosure = std::make_pair(*slope, *slope);
    r.exact_s = *slope;
    if (*slope == Scalar(1)) r.notes.push_back("piecewise isometry: zero entropy");
  }
  if (flags.transitive == Tri::Yes && flags.essentially_injective == Tri::No && r.method != EntropyReport::Method::Unknown) {
    std::string h = r.exact_s ? r.entropy_text() : "h";
    r.notes.push_back("unique trace on F_tau scaled by exp(-h)");
    r.notes.push_back("unique KMS state at inverse temperature beta = " + h);
  }
  return r;
}

}  // namespace imapk
