#include "doctest.h"

#include <random>

#include "imapk/error.hpp"
#include "imapk/stepfun.hpp"
#include "maps.hpp"

using namespace imapk;
using namespace testmaps;

namespace {

template <class Rng>
StepFn random_indicator_sum(Rng& rng, int terms, long den = 30) {
  std::uniform_int_distribution<long> pt(0, den), coef(-3, 3);
  std::vector<mpz_class> c;
  std::vector<StepFn> f;
  for (int i = 0; i < terms; ++i) {
    c.emplace_back(coef(rng));
    f.push_back(indicator(Scalar(pt(rng), den), Scalar(pt(rng), den)));
  }
  return linear_comb(c, f);
}

// Sum of f over preimages; x must avoid the images of every split and partition point.
mpz_class preimage_sum(const PMMap& m, const StepFn& f, const Scalar& x) {
  mpz_class s = 0;
  for (const auto& y : preimages(m, x)) s += f.at(y);
  return s;
}

bool is_critical_value(const PMMap& m, const StepFn& f, const Scalar& x) {
  for (std::size_t i = 0; i < m.branch_count(); ++i) {
    std::vector<Scalar> pts{m.left(i), m.right(i)};
    pts.insert(pts.end(), f.splits().begin(), f.splits().end());
    for (const auto& p : pts)
      if (p >= m.left(i) && p <= m.right(i) && m.branch(i)(p) == x) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("indicator examples") {
  StepFn one = indicator(0, 1);
  CHECK(one == StepFn::constant(1));
  CHECK(one.splits().empty());
  CHECK(indicator(Scalar(1, 2), Scalar(1, 2)).is_zero());
  CHECK(indicator(Scalar(2, 3), Scalar(1, 3)) == indicator(Scalar(1, 3), Scalar(2, 3)));
  StepFn mid = indicator(Scalar(1, 3), Scalar(2, 3));
  CHECK(mid(CutPoint{Scalar(1, 3), Side::Minus}) == 0);
  CHECK(mid(CutPoint{Scalar(1, 3), Side::Plus}) == 1);
  CHECK(mid(CutPoint{Scalar(2, 3), Side::Minus}) == 1);
  CHECK(mid(CutPoint{Scalar(2, 3), Side::Plus}) == 0);
  CHECK_THROWS_AS(indicator(0, 2), Error);
}

TEST_CASE("linear_comb examples") {
  StepFn a = indicator(0, Scalar(1, 2)), b = indicator(Scalar(1, 2), 1);
  StepFn s = a + b;
  CHECK(s == indicator(0, 1));
  CHECK(s(CutPoint{Scalar(1, 2), Side::Minus}) == 1);
  CHECK(s(CutPoint{Scalar(1, 2), Side::Plus}) == 1);
  CHECK((a - a).is_zero());
  StepFn c = linear_comb({2, -1}, {indicator(0, 1), indicator(Scalar(1, 3), 1)});
  CHECK(c.splits().size() == 1);
  CHECK(c(CutPoint{Scalar(0), Side::Plus}) == 2);
  CHECK(c(CutPoint{Scalar(1, 3), Side::Minus}) == 2);
  CHECK(c(CutPoint{Scalar(1, 3), Side::Plus}) == 1);
  CHECK(c(CutPoint{Scalar(1), Side::Minus}) == 1);

  StepFn r = indicator(0, Scalar(1) / Scalar::generator(sqrt2_field()));
  StepFn g = indicator(0, Scalar(1) / Scalar::generator(golden_field()));
  CHECK_THROWS_AS(r + g, Error);
}

TEST_CASE("transfer examples on the tent map") {
  PMMap t = tent();
  CHECK(transfer(t, indicator(0, 1)) == 2 * indicator(0, 1));
  CHECK(transfer(t, indicator(0, Scalar(1, 4))) == indicator(0, Scalar(1, 2)));
  CHECK(transfer(t, indicator(Scalar(1, 2), 1)) == indicator(0, 1));
  // decreasing branch flips sides: [(3/4)+, 1-] goes to [0+, (1/2)-]
  CHECK(transfer(t, indicator(Scalar(3, 4), 1)) == indicator(0, Scalar(1, 2)));
}

TEST_CASE("transfer on the golden beta map") {
  PMMap g = golden_beta();
  Scalar inv = Scalar(1) / Scalar::generator(golden_field());
  StepFn v0 = indicator(0, 1);
  StepFn v1 = transfer(g, v0);
  CHECK(v1 == indicator(0, 1) + indicator(0, inv));
  StepFn v2 = transfer(g, v1);
  CHECK(v2 == v1 + v0);
  CHECK(transfer_serial(g, v1) == v2);
}

TEST_CASE("equal examples") {
  CHECK(equal(indicator(0, 1), indicator(0, 1)));
  CHECK(equal(indicator(0, Scalar(1, 2)), indicator(0, Scalar(1, 2)) + StepFn()));
  CHECK_FALSE(equal(indicator(0, Scalar(1, 2)), indicator(0, Scalar(1, 3))));
}

TEST_CASE("json rendering") {
  auto j = to_json(indicator(Scalar(1, 3), 1));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["from"]["value"] == "0");
  CHECK(j[0]["from"]["side"] == "+");
  CHECK(j[0]["to"]["value"] == "1/3");
  CHECK(j[0]["to"]["side"] == "-");
  CHECK(j[1]["value"] == 1);
}

TEST_CASE("property: linearity, positivity, counting law, parallel == serial") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    PMMap m = random_map(rng, 1 + trial % 5);
    StepFn f = random_indicator_sum(rng, 3), g = random_indicator_sum(rng, 3);
    mpz_class a = std::uniform_int_distribution<long>(-4, 4)(rng), b = std::uniform_int_distribution<long>(-4, 4)(rng);
    CHECK(transfer(m, linear_comb({a, b}, {f, g})) == linear_comb({a, b}, {transfer(m, f), transfer(m, g)}));
    CHECK(transfer(m, f) == transfer_serial(m, f));

    StepFn pos = indicator(Scalar(std::uniform_int_distribution<long>(0, 30)(rng), 30), 1) + indicator(0, 1);
    CHECK(is_nonnegative(transfer(m, pos)));

    StepFn tf = transfer(m, f);
    StepFn mass = transfer(m, indicator(0, 1));
    for (int k = 0; k < 20; ++k) {
      Scalar x(std::uniform_int_distribution<long>(1, 1008)(rng), 1009);
      if (is_critical_value(m, f, x)) continue;
      CHECK(tf.at(x) == preimage_sum(m, f, x));
      CHECK(mass.at(x) == static_cast<long>(preimages(m, x).size()));
    }
  }
}

TEST_CASE("property: injective pieces map to their images") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    PMMap m = random_map(rng, 2 + trial % 3);
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, m.branch_count() - 1)(rng);
    Scalar w = m.right(i) - m.left(i);
    Scalar c = m.left(i) + w * Scalar(1, 5), d = m.left(i) + w * Scalar(3, 5);
    const AffineBranch& br = m.branch(i);
    // E inside one branch domain and away from others: sigma is injective on E
    CHECK(transfer(m, indicator(c, d)) == indicator(br(c), br(d)));
  }
}
