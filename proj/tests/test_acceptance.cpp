// One PASS/FAIL line per acceptance criterion.

#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "imapk/cli/report.hpp"
#include "imapk/entropy.hpp"
#include "imapk/error.hpp"
#include "imapk/families.hpp"
#include "imapk/ktheory.hpp"
#include "imapk/markov.hpp"
#include "imapk/snf.hpp"
#include "imapk/stepfun.hpp"
#include "maps.hpp"
#include "snf_oracle.hpp"

using namespace imapk;
using namespace testmaps;
using nlohmann::json;

namespace {

struct Check {
  bool ok = true;
  std::string first_failure;
  void operator()(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int n, const char* title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c(false, std::string("exception: ") + e.what());
  }
  if (!c.ok) ++failures;
  std::printf("%s  criterion %d: %s%s\n", c.ok ? "PASS" : "FAIL", n, title,
              c.ok ? "" : ("  [" + c.first_failure + "]").c_str());
}

json run_all(const std::string& spec) { return cli::run_text(cli::Command::All, spec).json; }

std::string verdict(const json& r) { return r["classification"]["verdict"].get<std::string>(); }

KPair minpoly_k(const IntPoly& p) {
  return kgroups_from_minpoly(MinPolyReport{p, MinPolyReport::Method::Iteration, Cyclicity::Certified, "family"});
}

bool same_groups(const KGroups& a, const KGroups& b) {
  return a.torsion == b.torsion && a.free_rank == b.free_rank && a.k1_rank == b.k1_rank;
}

mpz_class torsion_order(const KGroups& g) {
  if (g.free_rank > 0) return 0;
  mpz_class o = 1;
  for (const auto& t : g.torsion) o *= t;
  return o;
}

bool critical_value(const PMMap& m, const StepFn& f, const Scalar& x) {
  for (std::size_t i = 0; i < m.branch_count(); ++i) {
    std::vector<Scalar> pts{m.left(i), m.right(i)};
    pts.insert(pts.end(), f.splits().begin(), f.splits().end());
    for (const auto& p : pts)
      if (p >= m.left(i) && p <= m.right(i) && m.branch(i)(p) == x) return true;
  }
  return false;
}

long r_adic(const mpq_class& q, unsigned long r) {
  long v = 0;
  mpz_class n = q.get_num(), d = q.get_den();
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), r)) n /= r, ++v;
  while (mpz_divisible_ui_p(d.get_mpz_t(), r)) d /= r, --v;
  return v;
}

}  // namespace

int main() {
  criterion(1, "tent map end to end", [](Check& c) {
    auto d = detect_markov(tent());
    c(d.data.has_value(), "tent is Markov");
    c(d.data->partition == std::vector<Scalar>{0, Scalar(1, 2), 1}, "partition {0,1/2,1}");
    c(d.data->matrix == IntMatrix{{1, 1}, {1, 1}}, "A = [[1,1],[1,1]]");
    KGroups k = kgroups_from_incidence(d.data->matrix);
    c(k.trivial() && k.k1_rank == 0, "K0 = 0, K1 = 0");
    auto it = minimal_polynomial_iter(tent());
    c(it.report && it.report->poly == IntPoly({-2, 1}), "m = t - 2");
    auto p = perron_enclosure(d.data->matrix);
    c(p.exact && *p.exact == Scalar(2), "s = 2 exactly");
    c(stationary_dimension_triple(d.data->matrix).annotation == "ℤ[1/2], automorphism ×2", "dimension triple");
    json r = run_all("map { family = tent }");
    c(verdict(r) == "CuntzAlgebra(2)", "verdict CuntzAlgebra(2)");
    c(r["entropy"]["entropy_note"] == "ln 2" && r["entropy"]["exact_s"] == "2", "entropy ln 2");
  });

  criterion(2, "three-vertex matrix and its realization", [](Check& c) {
    IntMatrix a{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    auto s = smith_normal_form(IntMatrix::identity(3) - a);
    c(s.diagonal() == std::vector<mpz_class>{1, 2, 2}, "SNF(I - A) = diag(1,2,2)");
    c(s.U * (IntMatrix::identity(3) - a) * s.V == s.D, "U M V = D");
    KGroups k = kgroups_from_incidence(a);
    c(k.k0_string() == "ℤ/2 ⊕ ℤ/2" && k.k1_string() == "0", "K0 = Z/2 + Z/2, K1 = 0");
    c(graph_flags(a).primitive, "primitive");
    auto b = build(FamilySpec::markov_realization(a));
    auto d = detect_markov(b.map);
    c(d.data && d.data->size() == 4, "refined canonical partition is 4x4");
    c(d.data && same_groups(kgroups_from_incidence(d.data->matrix), k), "same K-groups after refinement");
    c(markov_from_partition(b.map, *b.realized_partition).matrix == a, "realized partition gives A");
  });

  criterion(3, "restricted tent T_sqrt2", [](Check& c) {
    auto it = minimal_polynomial_iter(tent_sqrt2());
    c(it.report && it.report->poly == IntPoly({-2, 0, 1}), "iteration gives t^2 - 2");
    c(it.iterations <= 3, "within 3 iterations");
    IntPoly closed = unimodal_minpoly({1, -1}, 1, 2, UnimodalCase::EventuallyPeriodicK1);
    c(closed == IntPoly({-2, 0, 1}), "closed form gives t^2 - 2");
    c(it.report && it.report->n_value() == 1, "n = 1");
    KPair k = minpoly_k(closed);
    c(k.groups.trivial() && k.groups.k1_rank == 0, "K0 = 0, K1 = 0");
    json r = run_all("field { poly = [-2,0,1]; iso = [1,2] }\nmap { family = restricted_tent; s = alg:[0,1] }");
    c(verdict(r) == "CuntzAlgebra(2)", "verdict CuntzAlgebra(2)");
  });

  criterion(4, "beta-transformations", [](Check& c) {
    auto two = build(FamilySpec::beta_map(2));
    auto it2 = minimal_polynomial_iter(two.map);
    auto d2 = beta_orbit_data(two.map, 2);
    c(it2.report && it2.report->poly == IntPoly({-2, 1}), "beta 2: iteration t - 2");
    c(d2.which && beta_minpoly(d2.digits, d2.k, d2.p, *d2.which) == IntPoly({-2, 1}), "beta 2: closed form t - 2");
    auto md2 = detect_markov(two.map);
    c(md2.data && kgroups_from_incidence(md2.data->matrix).trivial(), "beta 2: Markov route K0 = 0");
    c(minpoly_k(IntPoly({-2, 1})).groups.trivial(), "beta 2: minpoly route K0 = 0");
    c(verdict(run_all("map { family = beta; beta = 2 }")) == "CuntzAlgebra(2)", "beta 2: O_2");

    Scalar phi = Scalar::generator(golden_field());
    auto g = build(FamilySpec::beta_map(phi));
    auto gd = detect_markov(g.map);
    c(gd.data && gd.data->matrix == IntMatrix{{1, 1}, {1, 0}}, "golden: A = [[1,1],[1,0]]");
    auto git = minimal_polynomial_iter(g.map);
    c(git.report && git.report->poly == IntPoly({-1, -1, 1}), "golden: iteration t^2 - t - 1");
    c(beta_minpoly({1, 1, 0}, 2, 3, BetaCase::HitsZero) == IntPoly({-1, -1, 1}), "golden: closed form");
    c(gd.data && kgroups_from_incidence(gd.data->matrix).trivial(), "golden: K0 = 0, K1 = 0");
    auto ge = entropy_report(g.map, dynamics_flags(g.map), gd.data);
    c(ge.exact_s && *ge.exact_s == phi, "golden: entropy exactly ln phi");

    auto h = build(FamilySpec::beta_map(Scalar(3, 2)));
    auto o = forward_orbit_single(h.map, 1);
    c(o.status.kind == OrbitStatus::Kind::ProvablyInfinite, "3/2: ProvablyInfinite");
    json r = run_all("map { family = beta; beta = 3/2 }");
    c(verdict(r) == "CuntzInfinity", "3/2: CuntzInfinity");
    c(r["classification"]["k_groups"]["k0"]["text"] == "ℤ" && r["classification"]["k_groups"]["k1"]["text"] == "0",
      "3/2: K0 = Z, K1 = 0");
    c(r["classification"]["k_groups"]["strength"] == "unconditional", "3/2: unconditional");
  });

  criterion(5, "golden interval exchange", [](Check& c) {
    Scalar phi = Scalar::generator(golden_field());
    PMMap m = rotation(Scalar(1) / phi);
    auto idoc = idoc_check(m, 1000);
    c(idoc.kind != IdocResult::Kind::Fails, "IDOC holds to cap 1000");
    auto k = exchange_kgroups(m, idoc);
    c(k && k->groups.free_rank == 2 && k->groups.torsion.empty() && k->groups.k1_rank == 1, "K0 = Z^2, K1 = Z");
    c(dynamics_flags(m).essentially_injective == Tri::Yes, "essentially injective");
    json r = run_all(
        "field { poly = [-1,-1,1]; iso = [1,2] }\n"
        "map { family = interval_exchange; lengths = [alg:[2,-1], alg:[-1,1]]; permutation = [2,1] }\n"
        "options { cap = 1000 }");
    c(verdict(r) == "InvariantsOnly", "verdict InvariantsOnly");
    bool note = false;
    for (const auto& n : r["classification"]["notes"])
      note |= n.get<std::string>().find("pure-infiniteness criterion is inapplicable") != std::string::npos;
    c(note, "inapplicability note");
  });

  criterion(6, "route consistency and SNF certificates", [](Check& c) {
    struct Example {
      PMMap map;
      bool cyclic;
    };
    std::vector<Example> examples{{tent(), true},          {golden_beta(), true},       {tent_sqrt2(), true},
                                  {beta_rational(2), true}, {beta_rational(3), true}, {three_vertex_realization(), false}};
    for (const auto& [m, cyclic] : examples) {
      auto d = detect_markov(m);
      c(d.data.has_value(), "Markov example");
      IntMatrix ay = restrict_to(d.data->matrix, graph_flags(d.data->matrix).eventual_range);
      KGroups k = kgroups_from_incidence(ay);
      auto it = minimal_polynomial_iter(m);
      c(it.report.has_value(), "minimal polynomial found");
      if (!it.report) continue;
      if (cyclic)
        c(it.report->n_value() == torsion_order(k), "|m(1)| = torsion order");
      else
        c(k.torsion.size() > 1, "uncertified example has non-cyclic K0");
    }
    std::mt19937 rng(2024);
    for (int t = 0; t < 200; ++t) {
      std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
      IntMatrix a = oracle::random_01(rng, n, 0.45);
      IntMatrix m = IntMatrix::identity(n) - a;
      auto s = smith_normal_form(m);
      c(s.U * m * s.V == s.D, "U M V = D");
      c(abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1, "unimodular");
      auto diag = s.diagonal();
      for (std::size_t i = 0; i + 1 < diag.size(); ++i)
        c(diag[i + 1] == 0 || (diag[i] != 0 && diag[i + 1] % diag[i] == 0), "divisibility chain");
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) c(s.D(i, j) == 0, "D diagonal");
      c(graph_flags(a).primitive == oracle::primitive_by_powers(a), "primitivity vs Wielandt oracle");
    }
  });

  criterion(7, "transfer operator oracle", [](Check& c) {
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> pt(0, 30), coef(-3, 3);
    auto random_step = [&] {
      std::vector<mpz_class> cs;
      std::vector<StepFn> fs;
      for (int i = 0; i < 3; ++i) {
        cs.emplace_back(coef(rng));
        fs.push_back(indicator(Scalar(pt(rng), 30), Scalar(pt(rng), 30)));
      }
      return linear_comb(cs, fs);
    };
    for (int t = 0; t < 100; ++t) {
      PMMap m = random_map(rng, 1 + t % 5);
      StepFn f = random_step(), g = random_step();
      StepFn tf = transfer(m, f);
      int samples = 0;
      while (samples < 20) {
        Scalar x(std::uniform_int_distribution<long>(1, 100002)(rng), 100003);
        if (critical_value(m, f, x)) continue;
        mpz_class sum = 0;
        for (const auto& y : preimages(m, x)) sum += f.at(y);
        c(tf.at(x) == sum, "transfer(f)(x) = sum over preimages");
        ++samples;
      }
      mpz_class a = coef(rng), b = coef(rng);
      c(transfer(m, linear_comb({a, b}, {f, g})) == linear_comb({a, b}, {tf, transfer(m, g)}), "linearity");
      StepFn pos = indicator(Scalar(pt(rng), 30), 1) + indicator(0, Scalar(pt(rng), 30));
      c(is_nonnegative(transfer(m, pos)), "positivity");
    }
  });

  criterion(8, "orbit certificates", [](Check& c) {
    std::mt19937 rng(8);
    std::vector<PMMap> maps{tent(), golden_beta(), tent_sqrt2(), three_vertex_realization(), beta_rational(3)};
    for (int t = 0; t < 30; ++t) maps.push_back(random_grid_map(rng, 5));
    for (const PMMap& m : maps)
      for (const auto& a : m.partition()) {
        auto r = forward_orbit_single(m, a, 500);
        if (r.status.kind != OrbitStatus::Kind::Closed) continue;
        Scalar x = a;
        std::vector<Scalar> direct{x};
        for (std::size_t i = 0; i < r.status.preperiod + r.status.period; ++i) direct.push_back(x = eval_right_continuous(m, x));
        c(direct.back() == direct[r.status.preperiod], "Closed(k,p) repeats at k + p");
        for (std::size_t i = 0; i < r.status.preperiod + r.status.period; ++i)
          for (std::size_t j = i + 1; j < r.status.preperiod + r.status.period; ++j)
            c(direct[i] != direct[j], "no earlier repeat");
      }
    int tested = 0;
    while (tested < 20) {
      long q = std::uniform_int_distribution<long>(2, 12)(rng);
      long p = std::uniform_int_distribution<long>(q + 1, 3 * q - 1)(rng);
      mpq_class beta(p, q);
      beta.canonicalize();
      if (beta.get_den() == 1) continue;
      ++tested;
      PMMap m = beta_rational(Scalar(beta));
      auto r = forward_orbit_single(m, 1, 1000);
      c(r.status.kind == OrbitStatus::Kind::ProvablyInfinite && r.status.certificate, "certificate issued");
      unsigned long prime = r.status.certificate->prime.get_ui();
      c(beta.get_den() % prime == 0, "certificate prime divides the denominator");
      Scalar x = r.points[r.status.certificate->step];
      std::set<std::string> seen;
      long v = r_adic(x.rational(), prime);
      for (int k = 0; k < 60; ++k) {
        c(seen.insert(x.rational().get_str()).second, "no repeat after the certificate");
        x = eval_right_continuous(m, x);
        long w = r_adic(x.rational(), prime);
        c(!x.is_zero() && w < v, "valuation strictly decreases");
        v = w;
      }
    }
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
