#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imapk/scalar.hpp"

namespace imapk {

/// x -> slope * x + intercept on one interval of monotonicity.
struct AffineBranch {
  Scalar slope;
  Scalar intercept;

  Scalar operator()(const Scalar& x) const { return slope * x + intercept; }
  Scalar inverse(const Scalar& y) const { return (y - intercept) / slope; }
  bool increasing() const { return slope.sign() > 0; }
};

enum class Side { Minus, Plus };

/// A point of the disconnected interval: x- sits immediately left of x+.
struct CutPoint {
  Scalar value;
  Side side = Side::Plus;

  std::string to_string() const;
};

Ordering compare(const CutPoint& a, const CutPoint& b);
inline bool operator==(const CutPoint& a, const CutPoint& b) { return compare(a, b) == Ordering::EQ; }
inline bool operator<(const CutPoint& a, const CutPoint& b) { return compare(a, b) == Ordering::LT; }

/// Piecewise monotonic map of [0,1] with affine branches. Values at the
/// partition points are never stored; only the one-sided limits exist.
class PMMap {
 public:
  std::size_t branch_count() const { return branches_.size(); }
  const std::vector<Scalar>& partition() const { return partition_; }
  const std::vector<AffineBranch>& branches() const { return branches_; }
  const AffineBranch& branch(std::size_t i) const { return branches_[i]; }
  const Scalar& left(std::size_t i) const { return partition_[i]; }
  const Scalar& right(std::size_t i) const { return partition_[i + 1]; }
  /// Common field of all coefficients (null for rational maps).
  const FieldPtr& field() const { return field_; }
  /// Normalization notes produced during validation (e.g. merged branches).
  const std::vector<std::string>& notes() const { return notes_; }

  /// Branch index whose open domain contains x, or nullopt if x is a partition point.
  std::optional<std::size_t> interior_branch(const Scalar& x) const;
  /// Index i with partition()[i] == x, if any.
  std::optional<std::size_t> partition_index(const Scalar& x) const;
  /// Branch whose order interval holds the cut point.
  std::size_t branch_of(const CutPoint& p) const;

  bool is_continuous() const;
  bool same_as(const PMMap& other) const;

 private:
  friend PMMap validate_map(std::vector<Scalar> partition, std::vector<AffineBranch> branches);
  std::vector<Scalar> partition_;
  std::vector<AffineBranch> branches_;
  FieldPtr field_;
  std::vector<std::string> notes_;
};

PMMap validate_map(std::vector<Scalar> partition, std::vector<AffineBranch> branches);

/// The set of one-sided limits of tau at x (left limit first), deduplicated.
std::vector<Scalar> eval_multivalued(const PMMap& m, const Scalar& x);
/// All x with y in eval_multivalued(x), ascending.
std::vector<Scalar> preimages(const PMMap& m, const Scalar& y);
/// Single-valued tau, right continuous on [0,1) and left continuous at 1.
Scalar eval_right_continuous(const PMMap& m, const Scalar& x);
/// The local homeomorphism on the disconnected interval.
CutPoint apply_sigma(const PMMap& m, const CutPoint& p);

/// Closed image [min, max] of branch i.
std::pair<Scalar, Scalar> branch_image(const PMMap& m, std::size_t i);

enum class Tri { No, Yes, Unknown };
std::string_view to_string(Tri t);

/// A certified statement about transitivity/exactness and where it came from.
struct DynamicsCertificate {
  Tri transitive = Tri::Unknown;
  Tri exact = Tri::Unknown;
  Tri af = Tri::Unknown;
  std::string source;
};

struct FlagReport {
  Tri surjective = Tri::Unknown;
  Tri eventually_surjective = Tri::Unknown;
  int stabilization_depth = -1;
  /// Closed intervals whose union is the eventual range (when stabilized).
  std::vector<std::pair<Scalar, Scalar>> eventual_range;
  Tri essentially_injective = Tri::Unknown;
  Tri transitive = Tri::Unknown;
  Tri exact = Tri::Unknown;
  Tri af = Tri::Unknown;
  Tri f_simple = Tri::Unknown;
  Tri o_simple = Tri::Unknown;
  std::vector<std::string> provenance;
};

/// Flags decidable from the map alone; transitivity and exactness stay
/// unknown until a certificate is applied (except for non-surjective maps).
FlagReport dynamics_flags(const PMMap& m, int depth = 64);
/// Merges a certificate and re-derives the simplicity flags.
void apply_certificate(FlagReport& flags, const DynamicsCertificate& cert);

/// Union of closed intervals, merged and sorted; degenerate pieces dropped.
std::vector<std::pair<Scalar, Scalar>> merge_intervals(std::vector<std::pair<Scalar, Scalar>> iv);

}  // namespace imapk
