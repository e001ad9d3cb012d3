#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imapk/interval_map.hpp"
#include "imapk/markov.hpp"
#include "imapk/orbit.hpp"
#include "imapk/poly.hpp"
#include "imapk/snf.hpp"
#include "imapk/stepfun.hpp"

namespace imapk {

enum class Cyclicity { Certified, Asserted, Unknown };
std::string_view to_string(Cyclicity c);

struct MinPolyReport {
  enum class Method { Iteration, UnimodalClosedForm, BetaClosedForm };
  IntPoly poly;
  Method method = Method::Iteration;
  Cyclicity cyclicity = Cyclicity::Unknown;
  std::string cyclicity_source;

  mpz_class n_value() const { return abs(poly.eval(1)); }
  nlohmann::json to_json() const;
};
std::string_view to_string(MinPolyReport::Method m);

struct MinPolyIteration {
  std::optional<MinPolyReport> report;  // empty: no dependence within the caps
  std::size_t iterations = 0;
  std::size_t breakpoints = 0;
  std::vector<StepFn> orbit;  // I(0,1), L I(0,1), ...
};

/// Minimal polynomial of L on Z[t]I(0,1) by iterating L and solving for the
/// first exact rational dependence. Gives up after `max_degree` steps or once
/// the vectors carry more than `cap` breakpoints.
MinPolyIteration minimal_polynomial_iter(const PMMap& m, std::size_t cap = kDefaultCap, std::size_t max_degree = 48);

enum class UnimodalCase { PeriodicP3, Periodic2, Fixed, EventuallyPeriodicK2, EventuallyPeriodicK1 };
enum class BetaCase { Tau1Fixed, Generic, HitsZero };
std::string_view to_string(UnimodalCase c);
std::string_view to_string(BetaCase c);

/// Closed form for a surjective unimodal map with tau(1) = 0; `signs` is the
/// itinerary of 0 (+1 left of the turning point, -1 right of it).
IntPoly unimodal_minpoly(const std::vector<int>& signs, std::size_t k, std::size_t p, UnimodalCase c);

/// Closed form for a beta-transformation; `digits` is the labeled itinerary of 1.
IntPoly beta_minpoly(const std::vector<long>& digits, std::size_t k, std::size_t p, BetaCase c);

struct UnimodalShape {
  Scalar turning_point;
};
/// Continuous, surjective, increasing then decreasing, with tau(1) = 0.
std::optional<UnimodalShape> unimodal_shape(const PMMap& m);

struct UnimodalOrbitData {
  OrbitStatus status;
  std::vector<int> signs;
  std::size_t k = 0, p = 0;
  std::optional<UnimodalCase> which;
};
UnimodalOrbitData unimodal_orbit_data(const PMMap& m, std::size_t cap = kDefaultCap);

struct BetaOrbitData {
  OrbitStatus status;
  std::vector<long> digits;  // labels of 1, tau 1, ...
  std::size_t k = 0, p = 0;
  std::optional<BetaCase> which;
};
BetaOrbitData beta_orbit_data(const PMMap& m, const Scalar& beta, std::size_t cap = kDefaultCap);

struct KPair {
  KGroups groups;
  std::string strength;  // "unconditional", "asserted", "conditional ..."
  std::string route;
  nlohmann::json to_json() const;
};

/// K0 = Z/n, K1 = 0 for n = |m(1)| != 0; K0 = K1 = Z for n = 0. Needs an established cyclic I(0,1).
KPair kgroups_from_minpoly(const MinPolyReport& r);

enum class Family { Unimodal, Beta, Other };
enum class InfinityEvidence { Certificate, Asserted, CapReached };
/// (Z, 0) when the critical orbit is infinite.
KPair nonperiodic_kgroups(Family family, InfinityEvidence evidence);

struct ModuleGenerators {
  Scalar M;
  std::vector<std::pair<Scalar, Scalar>> j1, j2;
  nlohmann::json to_json() const;
};
/// Generators of DG as a Z[t, 1/t]-module: intervals between adjacent points of
/// {a_0, ..., a_n, M} and the jump intervals at interior partition points.
ModuleGenerators module_generators(const PMMap& m, std::optional<Scalar> M = std::nullopt);

struct Classification {
  enum class Verdict { CuntzAlgebra, CuntzInfinity, CuntzKrieger, InvariantsOnly };
  Verdict verdict = Verdict::InvariantsOnly;
  mpz_class cuntz_index;         // n + 1 for CuntzAlgebra
  std::optional<IntMatrix> matrix;  // for CuntzKrieger
  std::optional<KPair> k;
  std::vector<std::string> hypotheses;
  std::vector<std::string> notes;
  std::vector<std::string> paper_refs;
  std::optional<std::string> needed_assertion;  // flag that would allow a stronger verdict

  std::string verdict_string() const;
  nlohmann::json to_json() const;
};

struct ClassifyInputs {
  FlagReport flags;
  std::optional<MarkovData> markov;
  std::optional<SeparationResult> separation;
  std::optional<KPair> markov_k;      // from coker/ker of I - A_Y
  std::optional<KPair> minpoly_k;     // from the minimal polynomial
  std::optional<KPair> nonperiodic_k; // critical orbit infinite
  std::optional<KPair> family_k;      // family-specific groups (exchange, multimodal)
  std::vector<std::string> pending_assertions;  // flags that would unlock a K-route
};

Classification classify(const PMMap& m, const ClassifyInputs& in);

}  // namespace imapk
