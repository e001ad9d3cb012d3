#include "imapk/ktheory.hpp"

#include <algorithm>

#include "imapk/error.hpp"
#include "imapk/json_util.hpp"

namespace imapk {

std::string_view to_string(Cyclicity c) {
  switch (c) {
    case Cyclicity::Certified: return "certified";
    case Cyclicity::Asserted: return "asserted";
    case Cyclicity::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(MinPolyReport::Method m) {
  switch (m) {
    case MinPolyReport::Method::Iteration: return "iteration";
    case MinPolyReport::Method::UnimodalClosedForm: return "unimodal_closed_form";
    case MinPolyReport::Method::BetaClosedForm: return "beta_closed_form";
  }
  return "";
}

std::string_view to_string(UnimodalCase c) {
  switch (c) {
    case UnimodalCase::PeriodicP3: return "periodic_p>=3";
    case UnimodalCase::Periodic2: return "periodic_2";
    case UnimodalCase::Fixed: return "fixed";
    case UnimodalCase::EventuallyPeriodicK2: return "eventually_periodic_k>1";
    case UnimodalCase::EventuallyPeriodicK1: return "eventually_periodic_k=1";
  }
  return "";
}

std::string_view to_string(BetaCase c) {
  switch (c) {
    case BetaCase::Tau1Fixed: return "tau1_fixed";
    case BetaCase::Generic: return "generic";
    case BetaCase::HitsZero: return "hits_zero";
  }
  return "";
}

nlohmann::json MinPolyReport::to_json() const {
  return {{"poly", poly.to_string()},
          {"method", to_string(method)},
          {"n_value", json_int(n_value())},
          {"cyclicity", to_string(cyclicity)},
          {"cyclicity_source", cyclicity_source}};
}

namespace {

bool surjective(const PMMap& m) {
  std::vector<std::pair<Scalar, Scalar>> images;
  for (std::size_t i = 0; i < m.branch_count(); ++i) images.push_back(branch_image(m, i));
  auto r = merge_intervals(std::move(images));
  return r.size() == 1 && r[0].first == Scalar(0) && r[0].second == Scalar(1);
}

// Solves sum_i c_i cols[i] = rhs exactly; empty when inconsistent.
std::optional<std::vector<mpq_class>> solve(const std::vector<std::vector<mpz_class>>& cols,
                                            const std::vector<mpz_class>& rhs) {
  const std::size_t rows = rhs.size(), n = cols.size();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(n + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = cols[c][r];
    a[r][n] = rhs[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[row][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][n] != 0) return std::nullopt;
  std::vector<mpq_class> x(n, 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a[r][n] / a[r][pivot_col[r]];
  return x;
}

// t^j - c_0 t^{j-1} - ... - c_{j-1}
IntPoly recurrence_poly(const std::vector<mpz_class>& c, std::size_t j) {
  std::vector<mpz_class> coeffs(j + 1);
  coeffs[j] = 1;
  for (std::size_t i = 0; i < j; ++i) coeffs[j - 1 - i] = -c[i];
  return IntPoly(std::move(coeffs));
}

}  // namespace

MinPolyIteration minimal_polynomial_iter(const PMMap& m, std::size_t cap, std::size_t max_degree) {
  if (!surjective(m)) fail(ErrorKind::NotSurjective, "the minimal polynomial route needs a surjective map");
  MinPolyIteration out;
  out.orbit.push_back(indicator(0, 1));
  for (std::size_t k = 1; k <= max_degree; ++k) {
    StepFn next = transfer(m, out.orbit.back());
    std::vector<StepFn> all = out.orbit;
    all.push_back(next);
    std::vector<Scalar> splits = common_splits(all);
    out.iterations = k;
    out.breakpoints = splits.size();
    if (splits.size() > cap) return out;
    std::vector<std::vector<mpz_class>> cols;
    for (const auto& v : out.orbit) cols.push_back(values_on(v, splits));
    auto c = solve(cols, values_on(next, splits));
    out.orbit.push_back(std::move(next));
    if (!c) continue;

    // m(t) = t^k - sum c_i t^i
    QPoly q = QPoly::monomial(1, static_cast<int>(k));
    for (std::size_t i = 0; i < c->size(); ++i) q = q - QPoly::monomial((*c)[i], static_cast<int>(i));
    IntPoly poly;
    try {
      poly = IntPoly::from_rational(q);
    } catch (const Error&) {
      fail(ErrorKind::NonIntegerDependence,
           "L^" + std::to_string(k) + " I(0,1) depends on lower powers with non-integral coefficients: " +
               q.to_string('t'));
    }
    std::vector<mpz_class> coeffs(poly.coeffs().begin(), poly.coeffs().end());
    if (!linear_comb(coeffs, out.orbit).is_zero())
      fail(ErrorKind::NonIntegerDependence, "dependence failed to re-verify");
    out.report = MinPolyReport{std::move(poly), MinPolyReport::Method::Iteration, Cyclicity::Unknown, ""};
    return out;
  }
  return out;
}

IntPoly unimodal_minpoly(const std::vector<int>& signs, std::size_t k, std::size_t p, UnimodalCase c) {
  auto bad = [](const std::string& why) { fail(ErrorKind::InconsistentCaseData, why); };
  switch (c) {
    case UnimodalCase::PeriodicP3:
      if (k != 0 || p < 3) bad("periodic_p>=3 needs k = 0 and p >= 3");
      break;
    case UnimodalCase::Periodic2:
      if (k != 0 || p != 2) bad("periodic_2 needs k = 0 and p = 2");
      return IntPoly({-1, 1});
    case UnimodalCase::Fixed:
      if (k != 0 || p != 1) bad("fixed needs k = 0 and p = 1");
      return IntPoly({-2, 1});
    case UnimodalCase::EventuallyPeriodicK2:
      if (k < 2 || p <= k) bad("eventually_periodic_k>1 needs 1 < k < p");
      break;
    case UnimodalCase::EventuallyPeriodicK1:
      if (k != 1 || p <= 1) bad("eventually_periodic_k=1 needs k = 1 < p");
      break;
  }
  if (signs.size() < p) bad("itinerary shorter than p");
  for (int s : signs)
    if (s != 1 && s != -1) bad("itinerary entries must be +1 or -1");
  if (signs[0] != 1) bad("0 lies left of the turning point, so n_0 = +1");

  // a_j = n_0 ... n_j, and Q_j = t^j - t^{j-1} - a_0 t^{j-2} - ... - a_{j-2}
  std::vector<mpz_class> a;
  mpz_class prod = 1;
  for (std::size_t j = 0; j < p; ++j) a.push_back(prod *= signs[j]);
  auto Q = [&](std::size_t j) {
    std::vector<mpz_class> c{1};
    c.insert(c.end(), a.begin(), a.begin() + static_cast<long>(j - 1));
    return recurrence_poly(c, j);
  };
  switch (c) {
    case UnimodalCase::PeriodicP3: return Q(p - 1);
    case UnimodalCase::EventuallyPeriodicK2: return Q(p) - IntPoly({a[k - 1] * a[p - 1]}) * Q(k);
    case UnimodalCase::EventuallyPeriodicK1: return Q(p) - IntPoly({a[p - 1]}) * Q(1);
    default: break;
  }
  return IntPoly();
}

IntPoly beta_minpoly(const std::vector<long>& digits, std::size_t k, std::size_t p, BetaCase c) {
  auto bad = [](const std::string& why) { fail(ErrorKind::InconsistentCaseData, why); };
  if (digits.size() < std::max<std::size_t>(p, 1)) bad("itinerary shorter than p");
  std::vector<mpz_class> n(digits.begin(), digits.end());
  switch (c) {
    case BetaCase::Tau1Fixed:
      if (k != 0 || p != 1) bad("tau1_fixed needs k = 0 and p = 1");
      return recurrence_poly(n, 1);
    case BetaCase::Generic:
      if (p < 2 || k >= p) bad("generic needs k < p and p >= 2");
      return recurrence_poly(n, p) - recurrence_poly(n, k);
    case BetaCase::HitsZero:
      if (p < 2 || k >= p) bad("hits_zero needs k < p and p >= 2");
      return recurrence_poly(n, p - 1);
  }
  return IntPoly();
}

std::optional<UnimodalShape> unimodal_shape(const PMMap& m) {
  if (m.branch_count() != 2 || !m.is_continuous()) return std::nullopt;
  if (!m.branch(0).increasing() || m.branch(1).increasing()) return std::nullopt;
  if (!surjective(m) || m.branch(1)(Scalar(1)) != Scalar(0)) return std::nullopt;
  return UnimodalShape{m.partition()[1]};
}

UnimodalOrbitData unimodal_orbit_data(const PMMap& m, std::size_t cap) {
  auto shape = unimodal_shape(m);
  if (!shape) fail(ErrorKind::WrongFamily, "not a surjective unimodal map with tau(1) = 0");
  OrbitResult r = forward_orbit_single(m, Scalar(0), cap);
  UnimodalOrbitData d;
  d.status = r.status;
  for (const auto& x : r.points) d.signs.push_back(x <= shape->turning_point ? 1 : -1);
  if (r.status.kind != OrbitStatus::Kind::Closed) return d;
  d.k = r.status.preperiod;
  d.p = r.status.preperiod + r.status.period;
  if (d.k == 0)
    d.which = d.p == 1 ? UnimodalCase::Fixed : d.p == 2 ? UnimodalCase::Periodic2 : UnimodalCase::PeriodicP3;
  else
    d.which = d.k == 1 ? UnimodalCase::EventuallyPeriodicK1 : UnimodalCase::EventuallyPeriodicK2;
  return d;
}

BetaOrbitData beta_orbit_data(const PMMap& m, const Scalar& beta, std::size_t cap) {
  OrbitResult r = forward_orbit_single(m, Scalar(1), cap);
  BetaOrbitData d;
  d.status = r.status;
  for (const auto& x : r.points) d.digits.push_back((beta * x).floor().get_si());
  if (r.status.kind != OrbitStatus::Kind::Closed) return d;
  d.k = r.status.preperiod;
  d.p = r.status.preperiod + r.status.period;
  if (d.p == 1)
    d.which = BetaCase::Tau1Fixed;
  else if (r.points[d.k].is_zero())
    d.which = BetaCase::HitsZero;
  else
    d.which = BetaCase::Generic;
  return d;
}

nlohmann::json KPair::to_json() const {
  nlohmann::json j = groups.to_json();
  j["strength"] = strength;
  j["route"] = route;
  return j;
}

KPair kgroups_from_minpoly(const MinPolyReport& r) {
  if (r.cyclicity == Cyclicity::Unknown)
    fail(ErrorKind::CyclicityNotEstablished,
         "I(0,1) is not known to be cyclic; pass --assert-cyclic to use the minimal polynomial");
  KPair k;
  const mpz_class n = r.n_value();
  if (n == 0) {
    k.groups.free_rank = 1;
    k.groups.k1_rank = 1;
  } else if (n > 1) {
    k.groups.torsion.push_back(n);
  }
  k.groups.generator_note = "[1]_0 generates";
  k.groups.unit_generates = true;
  k.strength = r.cyclicity == Cyclicity::Certified ? "unconditional" : "asserted";
  k.route = "minimal polynomial " + r.poly.to_string() + ", n = |m(1)| = " + n.get_str();
  return k;
}

KPair nonperiodic_kgroups(Family family, InfinityEvidence evidence) {
  if (family == Family::Other)
    fail(ErrorKind::WrongFamily, "the non-periodic route applies to unimodal maps and beta-transformations");
  KPair k;
  k.groups.free_rank = 1;
  k.groups.k1_rank = 0;
  k.groups.unit_generates = true;
  k.groups.generator_note = "[1]_0 generates";
  switch (evidence) {
    case InfinityEvidence::Certificate: k.strength = "unconditional"; break;
    case InfinityEvidence::Asserted: k.strength = "asserted"; break;
    case InfinityEvidence::CapReached: k.strength = "conditional on non-eventual-periodicity"; break;
  }
  k.route = family == Family::Unimodal ? "critical orbit of a unimodal map is infinite"
                                       : "orbit of 1 under a beta-transformation is infinite";
  return k;
}

nlohmann::json ModuleGenerators::to_json() const {
  auto list = [](const std::vector<std::pair<Scalar, Scalar>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [c, d] : v) a.push_back({c.to_string(), d.to_string()});
    return a;
  };
  return {{"M", M.to_string()}, {"J1", list(j1)}, {"J2", list(j2)}};
}

ModuleGenerators module_generators(const PMMap& m, std::optional<Scalar> M) {
  if (!surjective(m)) fail(ErrorKind::NotSurjective, "module generators need a surjective map");
  std::vector<Scalar> candidates;
  for (std::size_t i = 0; i < m.branch_count(); ++i) {
    candidates.push_back(m.branch(i)(m.left(i)));
    candidates.push_back(m.branch(i)(m.right(i)));
  }
  const auto& part = m.partition();
  if (M) {
    if (std::none_of(candidates.begin(), candidates.end(), [&](const Scalar& c) { return c == *M; }))
      fail(ErrorKind::SemanticError, M->to_string() + " is not the image of a branch endpoint");
  } else {
    auto it = std::find_if(candidates.begin(), candidates.end(),
                           [&](const Scalar& c) { return std::binary_search(part.begin(), part.end(), c); });
    M = it != candidates.end() ? *it : candidates.front();
  }
  ModuleGenerators g{*M, {}, {}};
  std::vector<Scalar> pts = part;
  if (!m.is_continuous()) pts.push_back(*M);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) g.j1.emplace_back(pts[i], pts[i + 1]);
  for (std::size_t i = 1; i + 1 < part.size(); ++i) {
    Scalar u = m.branch(i - 1)(part[i]), v = m.branch(i)(part[i]);
    if (u == v) continue;
    if (v < u) std::swap(u, v);
    g.j2.emplace_back(u, v);
  }
  return g;
}

std::string Classification::verdict_string() const {
  switch (verdict) {
    case Verdict::CuntzAlgebra: return "CuntzAlgebra(" + cuntz_index.get_str() + ")";
    case Verdict::CuntzInfinity: return "CuntzInfinity";
    case Verdict::CuntzKrieger: return "CuntzKrieger(" + (matrix ? matrix->to_string() : std::string("A")) + ")";
    case Verdict::InvariantsOnly: return "InvariantsOnly";
  }
  return "";
}

nlohmann::json Classification::to_json() const {
  nlohmann::json j = {{"verdict", verdict_string()},
                      {"hypotheses", hypotheses},
                      {"notes", notes},
                      {"paper_refs", paper_refs}};
  if (k) j["k_groups"] = k->to_json();
  if (matrix) j["matrix"] = imapk::to_json(*matrix);
  j["needed_assertion"] = needed_assertion ? nlohmann::json(*needed_assertion) : nlohmann::json(nullptr);
  return j;
}

namespace {

std::string provenance(const FlagReport& f, const std::string& key) {
  for (const auto& p : f.provenance)
    if (p.rfind(key + ":", 0) == 0 || p.rfind("not " + key + ":", 0) == 0) return p;
  return key;
}

void add_ref(std::vector<std::string>& refs, const std::string& r) {
  if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
}

bool cyclic_k0(const KPair& k) { return k.groups.k1_rank == 0 && k.groups.free_rank == 0 && k.groups.unit_generates; }

}  // namespace

Classification classify(const PMMap&, const ClassifyInputs& in) {
  Classification c;
  const FlagReport& f = in.flags;
  const bool transitive = f.transitive == Tri::Yes;
  const bool not_inj = f.essentially_injective == Tri::No;
  const bool pure_inf = transitive && not_inj;

  if (f.o_simple == Tri::Yes) c.notes.push_back("O_tau is simple (tau transitive)");
  if (f.f_simple == Tri::Yes) c.notes.push_back("F_tau is simple (tau topologically exact)");
  if (pure_inf) {
    c.notes.push_back("O_tau is separable, simple, purely infinite, nuclear and in the UCT class");
    c.notes.push_back("unique KMS state at inverse temperature h_tau; F_tau has a unique trace scaled by exp(-h_tau)");
    add_ref(c.paper_refs, "Thm 1.35");
    add_ref(c.paper_refs, "Thm 1.41");
    add_ref(c.paper_refs, "Thm 1.42");
  }
  if (f.essentially_injective == Tri::Yes) {
    c.notes.push_back("essentially injective: the pure-infiniteness criterion is inapplicable");
    add_ref(c.paper_refs, "Thm 1.35");
  }
  if (f.o_simple != Tri::Unknown) add_ref(c.paper_refs, "Prop 1.10");
  if (f.f_simple != Tri::Unknown) add_ref(c.paper_refs, "Prop 1.9");

  auto base_hypotheses = [&] {
    c.hypotheses.push_back(provenance(f, "transitive"));
    c.hypotheses.push_back(provenance(f, "essentially injective"));
  };

  // Cuntz algebra: cyclic K0 = Z/n with [1] a generator, K1 = 0.
  const KPair* cyclic = nullptr;
  if (in.minpoly_k && cyclic_k0(*in.minpoly_k)) cyclic = &*in.minpoly_k;
  else if (in.markov_k && cyclic_k0(*in.markov_k)) cyclic = &*in.markov_k;
  if (pure_inf && cyclic) {
    c.verdict = Classification::Verdict::CuntzAlgebra;
    mpz_class n = cyclic->groups.torsion.empty() ? mpz_class(1) : cyclic->groups.torsion.front();
    c.cuntz_index = n + 1;
    c.k = *cyclic;
    base_hypotheses();
    if (in.markov) c.hypotheses.push_back("Markov partition from the " + in.markov->source);
    c.hypotheses.push_back("K-data: K0 = " + cyclic->groups.k0_string() + ", K1 = 0 via " + cyclic->route + " (" +
                           cyclic->strength + ")");
    add_ref(c.paper_refs, "Thm 1.35.1");
    add_ref(c.paper_refs, cyclic == &*in.minpoly_k ? "Prop 1.47.3" : "Cor 1.45");
    return c;
  }

  if (pure_inf && in.nonperiodic_k) {
    const KPair& k = *in.nonperiodic_k;
    if (k.strength.rfind("conditional", 0) == 0) {
      c.notes.push_back("CuntzInfinity conditional on non-eventual-periodicity (orbit cap reached)");
      c.needed_assertion = "--assert-orbit-infinite";
    } else {
      c.verdict = Classification::Verdict::CuntzInfinity;
      c.k = k;
      base_hypotheses();
      c.hypotheses.push_back("K-data: K0 = ℤ, K1 = 0 via " + k.route + " (" + k.strength + ")");
      add_ref(c.paper_refs, "Thm 1.35.1");
      add_ref(c.paper_refs, "Thm 1.50.5");
      add_ref(c.paper_refs, "Prop 1.60");
      return c;
    }
  }

  if (in.markov && in.separation && in.separation->kind == SeparationResult::Kind::Separates) {
    c.verdict = Classification::Verdict::CuntzKrieger;
    c.matrix = in.markov->matrix;
    c.k = in.markov_k;
    c.hypotheses.push_back("Markov partition from the " + in.markov->source);
    c.hypotheses.push_back("itineraries separate points: " + in.separation->reason);
    add_ref(c.paper_refs, "Prop 1.47");
    add_ref(c.paper_refs, "Prop 1.85");
    add_ref(c.paper_refs, "Cor 1.45");
    return c;
  }

  c.verdict = Classification::Verdict::InvariantsOnly;
  if (in.family_k) c.k = in.family_k;
  else if (in.markov_k) c.k = in.markov_k;
  else if (in.minpoly_k) c.k = in.minpoly_k;
  else if (in.nonperiodic_k) c.k = in.nonperiodic_k;
  if (!transitive) c.hypotheses.push_back(provenance(f, "transitive"));
  if (!not_inj) c.hypotheses.push_back(provenance(f, "essentially injective"));
  if (!c.needed_assertion && pure_inf && !in.pending_assertions.empty()) c.needed_assertion = in.pending_assertions.front();
  return c;
}

}  // namespace imapk
