#include "doctest.h"

#include <random>

#include "imapk/error.hpp"
#include "imapk/ktheory.hpp"
#include "maps.hpp"

using namespace imapk;
using namespace testmaps;

namespace {

IntPoly iterated(const PMMap& m) {
  auto it = minimal_polynomial_iter(m);
  REQUIRE(it.report);
  return it.report->poly;
}

/// Continuous unimodal map: 0 -> a, c -> 1, 1 -> 0.
PMMap unimodal(const Scalar& c, const Scalar& a) {
  Scalar s = (Scalar(1) - a) / c, r = Scalar(1) / (Scalar(1) - c);
  return validate_map({0, c, 1}, {{s, a}, {-r, r}});
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::SemanticError;
}

}  // namespace

TEST_CASE("minimal polynomial by iteration") {
  CHECK(iterated(tent()) == IntPoly({-2, 1}));
  auto t = minimal_polynomial_iter(tent_sqrt2());
  REQUIRE(t.report);
  CHECK(t.report->poly == IntPoly({-2, 0, 1}));
  CHECK(t.iterations <= 3);
  CHECK(t.report->n_value() == 1);
  CHECK(iterated(golden_beta()) == IntPoly({-1, -1, 1}));
  CHECK(iterated(beta_rational(2)) == IntPoly({-2, 1}));
  CHECK(iterated(beta_rational(3)) == IntPoly({-3, 1}));

  auto half = validate_map({0, 1}, {{Scalar(1, 2), 0}});
  CHECK(kind_of([&] { minimal_polynomial_iter(half); }) == ErrorKind::NotSurjective);
}

TEST_CASE("iteration stops at the caps") {
  auto r = minimal_polynomial_iter(beta_rational(Scalar(3, 2)), 1000, 6);
  CHECK_FALSE(r.report);
  CHECK(r.iterations == 6);
  auto b = minimal_polynomial_iter(beta_rational(Scalar(3, 2)), 4);
  CHECK_FALSE(b.report);
  CHECK(b.breakpoints > 4);
}

TEST_CASE("every emitted minimal polynomial annihilates I(0,1)") {
  std::mt19937 rng(41);
  int found = 0;
  for (int trial = 0; trial < 60; ++trial) {
    PMMap m = random_grid_map(rng, 4);
    if (dynamics_flags(m).surjective != Tri::Yes) continue;
    try {
      auto r = minimal_polynomial_iter(m, 4000, 12);
      if (!r.report) continue;
      ++found;
      const auto& c = r.report->poly.coeffs();
      CHECK(linear_comb(std::vector<mpz_class>(c.begin(), c.end()),
                        std::vector<StepFn>(r.orbit.begin(), r.orbit.begin() + static_cast<long>(c.size())))
                .is_zero());
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonIntegerDependence);
    }
  }
  CHECK(found > 5);
}

TEST_CASE("unimodal closed forms") {
  CHECK(unimodal_minpoly({1}, 0, 1, UnimodalCase::Fixed) == IntPoly({-2, 1}));
  CHECK(unimodal_minpoly({1, -1}, 0, 2, UnimodalCase::Periodic2) == IntPoly({-1, 1}));
  CHECK(unimodal_minpoly({1, -1}, 1, 2, UnimodalCase::EventuallyPeriodicK1) == IntPoly({-2, 0, 1}));
  CHECK(kind_of([] { unimodal_minpoly({1, 1}, 0, 2, UnimodalCase::PeriodicP3); }) ==
        ErrorKind::InconsistentCaseData);
  CHECK(kind_of([] { unimodal_minpoly({-1, 1}, 1, 2, UnimodalCase::EventuallyPeriodicK1); }) ==
        ErrorKind::InconsistentCaseData);
  CHECK(kind_of([] { unimodal_minpoly({1}, 1, 3, UnimodalCase::EventuallyPeriodicK1); }) ==
        ErrorKind::InconsistentCaseData);
}

TEST_CASE("unimodal orbit data") {
  auto d = unimodal_orbit_data(tent());
  REQUIRE(d.which);
  CHECK(*d.which == UnimodalCase::Fixed);
  CHECK(unimodal_minpoly(d.signs, d.k, d.p, *d.which) == IntPoly({-2, 1}));

  auto s = unimodal_orbit_data(tent_sqrt2());
  REQUIRE(s.which);
  CHECK(*s.which == UnimodalCase::EventuallyPeriodicK1);
  CHECK(s.k == 1);
  CHECK(s.p == 2);
  CHECK(s.signs[0] == 1);
  CHECK(s.signs[1] == -1);
  CHECK(unimodal_minpoly(s.signs, s.k, s.p, *s.which) == IntPoly({-2, 0, 1}));

  CHECK_FALSE(unimodal_shape(golden_beta()));
  CHECK(kind_of([] { unimodal_orbit_data(golden_beta()); }) == ErrorKind::WrongFamily);
}

TEST_CASE("unimodal closed form agrees with iteration") {
  std::mt19937 rng(7);
  std::map<UnimodalCase, int> seen;
  for (int trial = 0; trial < 400; ++trial) {
    long cd = std::uniform_int_distribution<long>(2, 9)(rng);
    Scalar c(std::uniform_int_distribution<long>(1, cd - 1)(rng), cd);
    long ad = std::uniform_int_distribution<long>(1, 9)(rng);
    Scalar a(std::uniform_int_distribution<long>(0, ad - 1)(rng), ad);
    PMMap m = unimodal(c, a);
    auto d = unimodal_orbit_data(m, 200);
    if (!d.which) continue;
    auto r = minimal_polynomial_iter(m, 4000, 24);
    if (!r.report) continue;
    CAPTURE(c.to_string());
    CAPTURE(a.to_string());
    CHECK(unimodal_minpoly(d.signs, d.k, d.p, *d.which) == r.report->poly);
    ++seen[*d.which];
  }
  CHECK(seen.size() >= 3);
  CHECK(seen[UnimodalCase::EventuallyPeriodicK2] > 0);
  CHECK(seen[UnimodalCase::PeriodicP3] > 0);
}

TEST_CASE("beta closed forms") {
  CHECK(beta_minpoly({2}, 0, 1, BetaCase::Tau1Fixed) == IntPoly({-2, 1}));
  CHECK(beta_minpoly({1, 1, 0}, 2, 3, BetaCase::HitsZero) == IntPoly({-1, -1, 1}));
  CHECK(beta_minpoly({1, 0, 1}, 1, 3, BetaCase::Generic) ==
        IntPoly({-1, 0, -1, 1}) - IntPoly({-1, 1}));
  CHECK(kind_of([] { beta_minpoly({1}, 0, 1, BetaCase::Generic); }) == ErrorKind::InconsistentCaseData);

  auto g = beta_orbit_data(golden_beta(), Scalar::generator(golden_field()));
  REQUIRE(g.which);
  CHECK(*g.which == BetaCase::HitsZero);
  CHECK(g.k == 2);
  CHECK(g.p == 3);
  CHECK(beta_minpoly(g.digits, g.k, g.p, *g.which) == iterated(golden_beta()));

  for (long b : {2, 3, 5}) {
    auto d = beta_orbit_data(beta_rational(b), Scalar(b));
    REQUIRE(d.which);
    CHECK(*d.which == BetaCase::Tau1Fixed);
    IntPoly p = beta_minpoly(d.digits, d.k, d.p, *d.which);
    CHECK(p == iterated(beta_rational(b)));
    CHECK(abs(p.eval(1)) == b - 1);
  }

  auto h = beta_orbit_data(beta_rational(Scalar(3, 2)), Scalar(3, 2));
  CHECK(h.status.kind == OrbitStatus::Kind::ProvablyInfinite);
  CHECK_FALSE(h.which);
}

TEST_CASE("K-groups from the minimal polynomial") {
  MinPolyReport r{IntPoly({-2, 0, 1}), MinPolyReport::Method::Iteration, Cyclicity::Certified, "unimodal"};
  auto k = kgroups_from_minpoly(r);
  CHECK(k.groups.k0_string() == "0");
  CHECK(k.groups.k1_string() == "0");
  CHECK(k.strength == "unconditional");

  r.poly = IntPoly({-2, 1});
  CHECK(kgroups_from_minpoly(r).groups.k0_string() == "0");

  r.poly = IntPoly({-1, 1});
  r.cyclicity = Cyclicity::Asserted;
  k = kgroups_from_minpoly(r);
  CHECK(k.groups.k0_string() == "ℤ");
  CHECK(k.groups.k1_string() == "ℤ");
  CHECK(k.strength == "asserted");

  r.poly = IntPoly({-4, 1});
  CHECK(kgroups_from_minpoly(r).groups.k0_string() == "ℤ/3");
  CHECK(kgroups_from_minpoly(r).groups.generator_note == "[1]_0 generates");

  r.cyclicity = Cyclicity::Unknown;
  CHECK(kind_of([&] { kgroups_from_minpoly(r); }) == ErrorKind::CyclicityNotEstablished);
}

TEST_CASE("non-periodic K-groups") {
  auto k = nonperiodic_kgroups(Family::Beta, InfinityEvidence::Certificate);
  CHECK(k.groups.k0_string() == "ℤ");
  CHECK(k.groups.k1_string() == "0");
  CHECK(k.strength == "unconditional");
  CHECK(nonperiodic_kgroups(Family::Unimodal, InfinityEvidence::Asserted).strength == "asserted");
  CHECK(nonperiodic_kgroups(Family::Unimodal, InfinityEvidence::CapReached).strength ==
        "conditional on non-eventual-periodicity");
  CHECK(kind_of([] { nonperiodic_kgroups(Family::Other, InfinityEvidence::Certificate); }) ==
        ErrorKind::WrongFamily);
}

TEST_CASE("module generators") {
  auto t = module_generators(tent());
  REQUIRE(t.j1.size() == 2);
  CHECK(t.j1[0] == std::pair<Scalar, Scalar>(0, Scalar(1, 2)));
  CHECK(t.j1[1] == std::pair<Scalar, Scalar>(Scalar(1, 2), 1));
  CHECK(t.j2.empty());

  Scalar phi = Scalar::generator(golden_field());
  auto g = module_generators(golden_beta(), Scalar(1));
  REQUIRE(g.j1.size() == 2);
  CHECK(g.j1[0].second == Scalar(1) / phi);
  REQUIRE(g.j2.size() == 1);
  CHECK(g.j2[0] == std::pair<Scalar, Scalar>(0, 1));

  auto three = validate_map({0, Scalar(1, 3), Scalar(2, 3), 1}, {{3, 0}, {-3, 2}, {3, -2}});
  CHECK(module_generators(three).j1.size() == 3);
  CHECK(module_generators(three).j2.empty());

  auto half = validate_map({0, 1}, {{Scalar(1, 2), 0}});
  CHECK(kind_of([&] { module_generators(half); }) == ErrorKind::NotSurjective);
  CHECK(kind_of([] { module_generators(tent(), Scalar(1, 3)); }) == ErrorKind::SemanticError);
}

TEST_CASE("route consistency: |m(1)| is the torsion order of coker(I - A)") {
  for (const PMMap& m : {tent(), golden_beta(), tent_sqrt2(), beta_rational(2), beta_rational(3)}) {
    auto d = detect_markov(m);
    REQUIRE(d.data);
    KGroups g = kgroups_from_incidence(d.data->matrix);
    mpz_class order = g.free_rank > 0 ? mpz_class(0) : mpz_class(1);
    if (g.free_rank == 0)
      for (const auto& t : g.torsion) order *= t;
    CHECK(iterated(m).eval(1) * iterated(m).eval(1) == order * order);
  }
}

namespace {

ClassifyInputs inputs_for(const PMMap& m) {
  ClassifyInputs in;
  in.flags = dynamics_flags(m);
  auto d = detect_markov(m);
  if (d.data) {
    in.markov = d.data;
    auto g = graph_flags(d.data->matrix);
    apply_certificate(in.flags, markov_certificate(*d.data, g, in.flags.surjective == Tri::Yes));
    in.separation = separation_check(m, *d.data);
    KPair k;
    k.groups = kgroups_from_incidence(d.data->matrix);
    k.strength = "unconditional";
    k.route = "coker/ker of I - A";
    in.markov_k = k;
  }
  return in;
}

}  // namespace

TEST_CASE("classification") {
  auto in = inputs_for(tent());
  auto r = minimal_polynomial_iter(tent());
  r.report->cyclicity = Cyclicity::Certified;
  in.minpoly_k = kgroups_from_minpoly(*r.report);
  auto c = classify(tent(), in);
  CHECK(c.verdict_string() == "CuntzAlgebra(2)");
  CHECK(c.hypotheses.size() >= 3);

  auto rot = inputs_for(rotation(Scalar(1, 2)));
  auto cr = classify(rotation(Scalar(1, 2)), rot);
  CHECK(cr.verdict == Classification::Verdict::InvariantsOnly);

  // No transitivity certificate: no Cuntz verdict even with cyclic K-data.
  ClassifyInputs bare;
  bare.flags = dynamics_flags(tent());
  bare.minpoly_k = in.minpoly_k;
  CHECK(classify(tent(), bare).verdict == Classification::Verdict::InvariantsOnly);

  ClassifyInputs inf;
  inf.flags = dynamics_flags(beta_rational(Scalar(3, 2)));
  apply_certificate(inf.flags, {Tri::Yes, Tri::Yes, Tri::Yes, "beta-transformations are exact"});
  inf.nonperiodic_k = nonperiodic_kgroups(Family::Beta, InfinityEvidence::CapReached);
  auto ci = classify(beta_rational(Scalar(3, 2)), inf);
  CHECK(ci.verdict == Classification::Verdict::InvariantsOnly);
  CHECK(ci.needed_assertion == std::optional<std::string>("--assert-orbit-infinite"));
  inf.nonperiodic_k = nonperiodic_kgroups(Family::Beta, InfinityEvidence::Certificate);
  ci = classify(beta_rational(Scalar(3, 2)), inf);
  CHECK(ci.verdict_string() == "CuntzInfinity");
  bool has_t = false, has_i = false;
  for (const auto& h : ci.hypotheses) {
    has_t |= h.find("transitive") != std::string::npos;
    has_i |= h.find("essentially injective") != std::string::npos;
  }
  CHECK(has_t);
  CHECK(has_i);
}
