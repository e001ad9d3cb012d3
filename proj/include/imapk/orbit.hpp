#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imapk/interval_map.hpp"

namespace imapk {

constexpr std::size_t kDefaultCap = 10000;

/// Witness that an orbit never closes: along every branch the r-adic
/// valuation drops by at least one per step once it is <= `bound`.
struct InfinityCertificate {
  mpz_class prime;
  long bound = 0;          // min r-adic valuation of the intercepts (LONG_MAX if all vanish)
  std::size_t step = 0;    // first orbit index at which the valuation condition holds
  long valuation = 0;      // r-adic valuation of that orbit point

  std::string describe() const;
};

/// Per-map data for the valuation certificate. Empty when the map is not
/// rational or no prime divides every slope denominator.
class ValuationWitness {
 public:
  explicit ValuationWitness(const PMMap& m);
  bool applicable() const { return !primes_.empty(); }
  /// Certificate if x (the orbit point at `step`) already satisfies the condition.
  std::optional<InfinityCertificate> check(const Scalar& x, std::size_t step) const;

 private:
  std::vector<std::pair<mpz_class, long>> primes_;  // (prime, intercept valuation bound)
};

struct OrbitThread {
  enum class End { Cycle, Merged, Open, Infinite };
  std::vector<Scalar> points;
  End end = End::Open;
  std::size_t preperiod = 0;  // for Cycle: points[preperiod + period] == points[preperiod]
  std::size_t period = 0;
};

struct OrbitStatus {
  enum class Kind { Closed, CapReached, ProvablyInfinite };
  Kind kind = Kind::CapReached;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::size_t cap = 0;
  std::optional<InfinityCertificate> certificate;

  std::string to_string() const;
};

struct OrbitResult {
  Scalar seed;
  /// Path of the first thread (always the left-limit branch), closing repeat included.
  std::vector<Scalar> points;
  /// Distinct points over all threads, in discovery order.
  std::vector<Scalar> point_set;
  std::vector<OrbitThread> threads;
  OrbitStatus status;
};

/// Forward orbit under the multivalued extension; every limit value at a
/// multivalued point starts a new thread.
OrbitResult forward_orbit(const PMMap& m, const Scalar& x, std::size_t cap = kDefaultCap);

/// Orbit of x under the right-continuous single-valued map.
OrbitResult forward_orbit_single(const PMMap& m, const Scalar& x, std::size_t cap = kDefaultCap);

struct CriticalClosure {
  std::vector<Scalar> points;  // ascending
  bool complete = false;
  std::optional<InfinityCertificate> certificate;  // some critical orbit is infinite
  std::optional<Scalar> certified_point;           // the partition point whose orbit carries it
};

/// Closes the partition points under all one-sided limits.
CriticalClosure critical_closure(const PMMap& m, std::size_t cap = kDefaultCap);

struct IdocResult {
  enum class Kind { HoldsUpToCap, Fails, ProvablyInfiniteAndDisjointUpToCap };
  Kind kind = Kind::HoldsUpToCap;
  std::string witness;
  std::size_t cap = 0;
  std::string convention = "forward orbits of the right-continuous map";

  std::string to_string() const;
};

/// True iff m is a generalized interval exchange (increasing branches whose
/// half-open images tile [0,1)).
bool is_exchange_map(const PMMap& m);

/// Orbits of the interior partition points: infinite and pairwise disjoint up to `cap` steps.
IdocResult idoc_check(const PMMap& m, std::size_t cap = kDefaultCap);

}  // namespace imapk
