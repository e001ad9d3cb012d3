#include "doctest.h"

#include <algorithm>
#include <random>

#include "imapk/error.hpp"
#include "imapk/orbit.hpp"
#include "maps.hpp"

using namespace imapk;
using namespace testmaps;

namespace {

bool contains(const std::vector<Scalar>& v, const Scalar& x) {
  return std::any_of(v.begin(), v.end(), [&](const Scalar& y) { return y == x; });
}

// Re-verifies a Closed status on the recorded thread paths.
void check_closed_threads(const PMMap& m, const OrbitResult& r) {
  for (const auto& t : r.threads) {
    if (t.end != OrbitThread::End::Cycle) continue;
    REQUIRE(t.period >= 1);
    REQUIRE(t.points.size() == t.preperiod + t.period + 1);
    CHECK(t.points[t.preperiod] == t.points.back());
    for (size_t i = 0; i + 1 < t.points.size(); ++i) {
      CHECK(contains(eval_multivalued(m, t.points[i]), t.points[i + 1]));
      for (size_t j = i + 1; j + 1 < t.points.size(); ++j) CHECK(t.points[i] != t.points[j]);
    }
  }
}

}  // namespace

TEST_CASE("tent orbit of 1/2 closes at the fixed point 0") {
  PMMap t = tent();
  OrbitResult r = forward_orbit(t, Scalar(1, 2), 100);
  REQUIRE(r.status.kind == OrbitStatus::Kind::Closed);
  CHECK(r.status.preperiod == 2);
  CHECK(r.status.period == 1);
  CHECK(r.points == std::vector<Scalar>{Scalar(1, 2), 1, 0, 0});
  CHECK(r.status.to_string() == "Closed(k=2, p=1)");
  check_closed_threads(t, r);
  CHECK_THROWS_AS(forward_orbit(t, Scalar(2), 10), Error);
}

TEST_CASE("beta 3/2 orbit of 1 is provably infinite") {
  PMMap m = beta_rational(Scalar(3, 2));
  OrbitResult r = forward_orbit(m, Scalar(1), 100);
  REQUIRE(r.status.kind == OrbitStatus::Kind::ProvablyInfinite);
  REQUIRE(r.status.certificate);
  CHECK(r.status.certificate->prime == 2);

  // the certificate's claim, checked by hand: 1, 1/2, 3/4, 1/8, 3/16, ... denominators strictly grow
  OrbitResult s = forward_orbit_single(m, Scalar(1), 10);
  std::vector<Scalar> pts{1};
  Scalar x = 1;
  for (int i = 0; i < 10; ++i) pts.push_back(x = eval_multivalued(m, x).front());
  CHECK(pts[1] == Scalar(1, 2));
  CHECK(pts[2] == Scalar(3, 4));
  CHECK(pts[3] == Scalar(1, 8));
  CHECK(pts[4] == Scalar(3, 16));
  for (size_t i = 0; i + 1 < pts.size(); ++i) CHECK(pts[i].rational().get_den() < pts[i + 1].rational().get_den());
}

TEST_CASE("golden beta orbit of 1 branches and closes") {
  PMMap g = golden_beta();
  Scalar phi = Scalar::generator(golden_field());
  OrbitResult r = forward_orbit(g, Scalar(1), 100);
  REQUIRE(r.status.kind == OrbitStatus::Kind::Closed);
  CHECK(r.threads.size() == 2);
  CHECK(r.point_set.size() == 3);
  for (const Scalar& p : {Scalar(1), Scalar(1) / phi, Scalar(0)}) CHECK(contains(r.point_set, p));
  CHECK(r.status.preperiod == 0);
  CHECK(r.status.period == 2);
  check_closed_threads(g, r);
}

TEST_CASE("cap reached without a certificate") {
  Scalar phi = Scalar::generator(golden_field());
  OrbitResult r = forward_orbit(rotation(Scalar(1) / phi), Scalar(0), 50);
  CHECK(r.status.kind == OrbitStatus::Kind::CapReached);
  CHECK(r.status.cap == 50);
}

TEST_CASE("orbits are deterministic") {
  PMMap m = three_vertex_realization();
  auto a = forward_orbit(m, Scalar(1, 3), 100);
  auto b = forward_orbit(m, Scalar(1, 3), 100);
  REQUIRE(a.point_set.size() == b.point_set.size());
  for (size_t i = 0; i < a.point_set.size(); ++i) CHECK(a.point_set[i].same_representation(b.point_set[i]));
  CHECK(a.threads.size() == b.threads.size());
}

TEST_CASE("critical closure examples") {
  auto c = critical_closure(tent());
  CHECK(c.complete);
  CHECK(c.points == std::vector<Scalar>{0, Scalar(1, 2), 1});

  c = critical_closure(beta_rational(Scalar(3, 2)));
  CHECK_FALSE(c.complete);
  CHECK(c.certificate);

  c = critical_closure(three_vertex_realization());
  CHECK(c.complete);
  CHECK(c.points == std::vector<Scalar>{0, Scalar(1, 3), Scalar(1, 2), Scalar(2, 3), 1});

  c = critical_closure(tent_sqrt2());
  CHECK(c.complete);
  CHECK(c.points.size() == 4);
}

TEST_CASE("property: complete closures are forward invariant") {
  std::mt19937 rng(3);
  int complete = 0;
  for (int trial = 0; trial < 60; ++trial) {
    PMMap m = random_map(rng, 2 + trial % 3, 6);
    auto c = critical_closure(m, 500);
    for (const auto& a : m.partition()) CHECK(contains(c.points, a));
    if (!c.complete) continue;
    ++complete;
    for (const auto& x : c.points)
      for (const auto& y : eval_multivalued(m, x)) CHECK(contains(c.points, y));
  }
  CHECK(complete > 0);
  for (int trial = 0; trial < 30; ++trial) {
    PMMap m = random_grid_map(rng, 2 + trial % 5);
    auto c = critical_closure(m, 500);
    REQUIRE(c.complete);
    for (const auto& x : c.points)
      for (const auto& y : eval_multivalued(m, x)) CHECK(contains(c.points, y));
  }
}

TEST_CASE("property: valuation certificates are sound on the next iterates") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    long q = std::uniform_int_distribution<long>(2, 7)(rng);
    long p = std::uniform_int_distribution<long>(q + 1, 3 * q - 1)(rng);
    Scalar beta(p, q);
    if (beta.is_rational() && beta.rational().get_den() == 1) continue;
    PMMap m = beta_rational(beta);
    OrbitResult r = forward_orbit_single(m, Scalar(1), 1000);
    REQUIRE(r.status.kind == OrbitStatus::Kind::ProvablyInfinite);
    const mpz_class prime = r.status.certificate->prime;
    Scalar x = r.points.back();
    long v = valuation(x.rational(), prime);
    for (int i = 0; i < 10; ++i) {
      x = eval_right_continuous(m, x);
      REQUIRE_FALSE(x.is_zero());
      long w = valuation(x.rational(), prime);
      CHECK(w < v);
      v = w;
    }
  }
}

TEST_CASE("idoc examples") {
  Scalar phi = Scalar::generator(golden_field());
  auto r = idoc_check(rotation(Scalar(1) / phi), 1000);
  CHECK(r.kind == IdocResult::Kind::HoldsUpToCap);

  r = idoc_check(rotation(Scalar(1, 3)), 1000);
  CHECK(r.kind == IdocResult::Kind::Fails);
  CHECK_FALSE(r.witness.empty());

  PMMap three = validate_map({0, Scalar(1, 5), Scalar(1, 2), 1},
                             {{1, Scalar(4, 5)}, {1, Scalar(3, 10)}, {1, Scalar(-1, 2)}});
  REQUIRE(is_exchange_map(three));
  CHECK(idoc_check(three, 1000).kind == IdocResult::Kind::Fails);

  CHECK_FALSE(is_exchange_map(tent()));
  CHECK_THROWS_AS(idoc_check(tent(), 10), Error);
}
