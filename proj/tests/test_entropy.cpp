#include "doctest.h"

#include <cmath>
#include <random>

#include "imapk/entropy.hpp"
#include "imapk/error.hpp"
#include "maps.hpp"
#include "snf_oracle.hpp"

using namespace imapk;
using namespace testmaps;

namespace {

// Collatz-Wielandt bounds from x = (A + I)^k 1; rigorous for irreducible A.
std::pair<double, double> collatz_wielandt(const IntMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 400; ++it) {
    std::vector<double> y(n, 0.0);
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = x[i];
      for (std::size_t j = 0; j < n; ++j) y[i] += a(i, j).get_d() * x[j];
      norm = std::max(norm, y[i]);
    }
    for (auto& v : y) v /= norm;
    x = y;
  }
  double lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = 0;
    for (std::size_t j = 0; j < n; ++j) ax += a(i, j).get_d() * x[j];
    lo = std::min(lo, ax / x[i]);
    hi = std::max(hi, ax / x[i]);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("perron examples") {
  auto p = perron_enclosure(IntMatrix{{1, 1}, {1, 1}});
  REQUIRE(p.exact);
  CHECK(*p.exact == Scalar(2));
  CHECK(p.lo == 2);
  CHECK(p.hi == 2);

  auto g = perron_enclosure(IntMatrix{{1, 1}, {1, 0}});
  REQUIRE(g.exact);
  CHECK(*g.exact == Scalar::generator(golden_field()));
  CHECK(g.lo < mpq_class(16181, 10000));
  CHECK(g.hi > mpq_class(16180, 10000));

  auto perm = perron_enclosure(IntMatrix{{0, 1}, {1, 0}});
  REQUIRE(perm.exact);
  CHECK(*perm.exact == Scalar(1));

  auto nil = perron_enclosure(IntMatrix{{0, 1}, {0, 0}});
  REQUIRE(nil.exact);
  CHECK(nil.exact->is_zero());

  auto cubic = perron_enclosure(IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});  // t^3 - t - 1
  CHECK_FALSE(cubic.exact);
  CHECK(cubic.hi - cubic.lo <= mpq_class(1, 1ul << 40));
  CHECK(cubic.lo.get_d() == doctest::Approx(1.324718).epsilon(1e-6));

  IntMatrix rect(2, 3);
  CHECK_THROWS_AS(perron_enclosure(rect), Error);
}

TEST_CASE("perron enclosure against Collatz-Wielandt bounds") {
  std::mt19937 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    IntMatrix a = oracle::random_01(rng, n, 0.4);
    if (!graph_flags(a).irreducible) continue;
    ++checked;
    auto p = perron_enclosure(a, mpq_class(1, 1 << 20));
    auto [lo, hi] = collatz_wielandt(a);
    CHECK(p.lo.get_d() <= hi + 1e-6);
    CHECK(p.hi.get_d() >= lo - 1e-6);
    CHECK(p.hi - p.lo <= mpq_class(1, 1 << 20));
    if (p.lo != p.hi) {
      QPoly f = p.factor;
      CHECK(sgn(f.eval(p.lo)) * sgn(f.eval(p.hi)) < 0);
    }
    auto finer = perron_enclosure(a, mpq_class(1, 1 << 21));
    CHECK(finer.lo >= p.lo);
    CHECK(finer.hi <= p.hi);
  }
  CHECK(checked > 30);
}

TEST_CASE("entropy reports") {
  auto tflags = dynamics_flags(tent());
  auto td = detect_markov(tent());
  apply_certificate(tflags, markov_certificate(*td.data, graph_flags(td.data->matrix), true));
  auto t = entropy_report(tent(), tflags, td.data);
  CHECK(t.method == EntropyReport::Method::PerronMarkov);
  REQUIRE(t.exact_s);
  CHECK(*t.exact_s == Scalar(2));
  CHECK(t.entropy_text() == "ln 2");
  bool kms = false;
  for (const auto& n : t.notes) kms |= n == "unique KMS state at inverse temperature beta = ln 2";
  CHECK(kms);

  auto b = beta_rational(Scalar(3, 2));
  auto bflags = dynamics_flags(b);
  apply_certificate(bflags, {Tri::Yes, Tri::Yes, Tri::Yes, "beta-transformations are exact"});
  auto br = entropy_report(b, bflags, std::nullopt);
  CHECK(br.method == EntropyReport::Method::UniformSlope);
  CHECK(br.entropy_text() == "ln 3/2");

  CHECK(entropy_report(b, dynamics_flags(b), std::nullopt).method == EntropyReport::Method::Unknown);

  Scalar phi = Scalar::generator(golden_field());
  auto rot = rotation(Scalar(1) / phi);
  auto rr = entropy_report(rot, dynamics_flags(rot), std::nullopt);
  CHECK(rr.method == EntropyReport::Method::UniformSlope);
  CHECK(rr.entropy_text() == "0");

  auto j = t.to_json();
  CHECK(j["method"] == "perron_markov");
  CHECK(j["exact_s"] == "2");
}

TEST_CASE("uniform slope lies in the Perron enclosure") {
  for (const PMMap& m : {tent(), tent_sqrt2(), golden_beta(), beta_rational(3)}) {
    auto d = detect_markov(m);
    REQUIRE(d.data);
    auto s = uniform_slope(m);
    REQUIRE(s);
    auto p = perron_enclosure(d.data->matrix);
    CHECK(Scalar(p.lo) <= *s);
    CHECK(*s <= Scalar(p.hi));
    REQUIRE(p.exact);
    CHECK(*p.exact == *s);
  }
}
