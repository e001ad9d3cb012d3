#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imapk/interval_map.hpp"
#include "imapk/orbit.hpp"
#include "imapk/snf.hpp"

namespace imapk {

struct MarkovData {
  std::vector<Scalar> partition;  // b_0 < ... < b_m
  IntMatrix matrix;               // A_ij = 1 iff the image of interval i covers interval j
  /// Monotonicity branches meeting each Markov interval, in order.
  std::vector<std::vector<std::size_t>> branches;
  std::string source;  // "critical closure" or "user partition"

  std::size_t size() const { return partition.size() - 1; }
  /// 1-based label of the Markov interval holding the cut point.
  std::size_t interval_of(const CutPoint& p) const;
};

struct MarkovDetection {
  enum class Kind { Markov, NotMarkovWithinCap, ProvablyNotMarkov };
  Kind kind = Kind::NotMarkovWithinCap;
  std::optional<MarkovData> data;
  std::optional<InfinityCertificate> certificate;
  std::optional<Scalar> certified_point;
  std::size_t cap = 0;

  std::string to_string() const;
};

/// Canonical Markov data from the critical closure.
MarkovDetection detect_markov(const PMMap& m, std::size_t cap = kDefaultCap);

/// Validates a user-supplied (possibly coarser) Markov partition and builds its matrix.
MarkovData markov_from_partition(const PMMap& m, std::vector<Scalar> partition);

struct GraphFlags {
  bool irreducible = false;
  bool primitive = false;
  bool permutation = false;
  bool condition_L = false;
  std::size_t period = 0;                      // 0 when reducible
  std::vector<std::size_t> component_periods;  // per strongly connected component carrying a cycle
  std::vector<std::size_t> eventual_range;     // 1-based interval labels
  std::size_t range_depth = 0;                 // steps until the range stabilized
};

GraphFlags graph_flags(const IntMatrix& a);

/// Square 0-1 matrix with boolean product.
class BoolMatrix {
 public:
  explicit BoolMatrix(std::size_t n = 0) : n_(n), a_(n * n, 0) {}
  explicit BoolMatrix(const IntMatrix& m);
  std::size_t size() const { return n_; }
  std::uint8_t operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::uint8_t& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  bool positive() const;
  bool operator==(const BoolMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> a_;
};

/// Boolean product, rows computed in parallel.
BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b);
BoolMatrix multiply_serial(const BoolMatrix& a, const BoolMatrix& b);
BoolMatrix power(const BoolMatrix& a, std::size_t k);
BoolMatrix power_serial(const BoolMatrix& a, std::size_t k);
/// A^((n-1)^2 + 1) > 0.
bool primitive_by_power(const IntMatrix& a);
bool primitive_by_power_serial(const IntMatrix& a);

struct Itinerary {
  CutPoint point;
  std::vector<std::size_t> symbols;  // 1-based Markov interval labels
};

Itinerary itinerary(const PMMap& m, const MarkovData& md, const CutPoint& x, std::size_t len,
                    std::size_t cap = kDefaultCap);

struct SeparationResult {
  enum class Kind { Separates, Fails, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;
  std::string to_string() const;
};

/// For piecewise linear Markov maps itineraries separate points iff A satisfies Condition L.
SeparationResult separation_check(const PMMap& m, const MarkovData& md);

/// Transitivity and exactness read off the incidence matrix.
DynamicsCertificate markov_certificate(const MarkovData& md, const GraphFlags& g, bool surjective);

/// Restriction of A to the eventual range (rows and columns of the surviving labels).
IntMatrix restrict_to(const IntMatrix& a, const std::vector<std::size_t>& labels);

nlohmann::json to_json(const MarkovData& md);
nlohmann::json to_json(const GraphFlags& g);

}  // namespace imapk
