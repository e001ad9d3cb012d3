#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imapk/interval_map.hpp"
#include "imapk/ktheory.hpp"
#include "imapk/orbit.hpp"
#include "imapk/snf.hpp"

namespace imapk {

struct FamilySpec {
  enum class Kind { Tent, RestrictedTent, UniformPL, Beta, IntervalExchange, Multimodal, MarkovRealization };
  Kind kind = Kind::Tent;
  Scalar s;                            // restricted_tent, uniform_pl
  Scalar beta;                         // beta
  std::vector<Scalar> partition;       // uniform_pl, multimodal
  std::vector<int> signs;              // uniform_pl
  std::vector<Scalar> values;          // multimodal: tau at each partition point
  std::vector<Scalar> lengths;         // interval_exchange
  std::vector<std::size_t> permutation;  // interval_exchange: piece i lands in slot permutation[i] (1-based)
  IntMatrix matrix;                    // markov_realization

  static FamilySpec tent() { return {}; }
  static FamilySpec restricted_tent(Scalar s);
  static FamilySpec uniform_pl(std::vector<Scalar> partition, std::vector<int> signs, Scalar s);
  static FamilySpec beta_map(Scalar beta);
  static FamilySpec interval_exchange(std::vector<Scalar> lengths, std::vector<std::size_t> permutation);
  static FamilySpec multimodal(std::vector<Scalar> partition, std::vector<Scalar> values);
  static FamilySpec markov_realization(IntMatrix a);

  std::string name() const;
  nlohmann::json to_json() const;
};

struct BuiltFamily {
  PMMap map;
  std::vector<DynamicsCertificate> certificates;
  Family family = Family::Other;
  std::optional<Scalar> beta;
  /// For markov_realization: the partition on which the incidence matrix is exactly A.
  std::optional<std::vector<Scalar>> realized_partition;
};

BuiltFamily build(const FamilySpec& f);

/// (Z^n, Z) for an n-interval exchange satisfying IDOC; empty when IDOC fails.
std::optional<KPair> exchange_kgroups(const PMMap& m, const IdocResult& idoc);

/// Checks the orbit hypotheses up to `cap`, then needs `asserted` to report (Z^(q-1), 0).
KPair multimodal_kgroups(const PMMap& m, bool asserted, std::size_t cap = 500);

}  // namespace imapk
