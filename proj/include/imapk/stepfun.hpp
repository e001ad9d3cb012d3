#pragma once

#include "json.hpp"

#include <vector>

#include "imapk/interval_map.hpp"

namespace imapk {

/// Integer step function on the disconnected interval. A split at b
/// separates the piece ending at b- from the piece starting at b+.
class StepFn {
 public:
  StepFn() = default;
  /// Canonicalizes: zero jumps are dropped, splits must be strictly increasing in (0,1).
  StepFn(std::vector<Scalar> splits, std::vector<mpz_class> values);

  static StepFn constant(const mpz_class& c);

  const std::vector<Scalar>& splits() const { return splits_; }
  const std::vector<mpz_class>& values() const { return values_; }
  std::size_t piece_count() const { return values_.size(); }
  bool is_zero() const { return values_.size() == 1 && values_[0] == 0; }

  mpz_class operator()(const CutPoint& p) const;
  /// Value just right of x (x+), or at 1- for x = 1.
  mpz_class at(const Scalar& x) const;

  FieldPtr field() const;

 private:
  std::vector<Scalar> splits_;
  std::vector<mpz_class> values_{mpz_class(0)};
};

bool operator==(const StepFn& f, const StepFn& g);
inline bool operator!=(const StepFn& f, const StepFn& g) { return !(f == g); }

/// Characteristic function of I(c,d) = [c+, d-]; arguments may come in either order.
StepFn indicator(const Scalar& c, const Scalar& d);

StepFn linear_comb(const std::vector<mpz_class>& coeffs, const std::vector<StepFn>& fns);
StepFn operator+(const StepFn& f, const StepFn& g);
StepFn operator-(const StepFn& f, const StepFn& g);
StepFn operator*(const mpz_class& c, const StepFn& f);

/// Transfer operator: (Lf)(x) = sum of f(y) over sigma y = x. Branches are
/// pushed forward in parallel.
StepFn transfer(const PMMap& m, const StepFn& f);
/// Single-threaded reference for transfer, built from per-branch step functions.
StepFn transfer_serial(const PMMap& m, const StepFn& f);

bool equal(const StepFn& f, const StepFn& g);

/// Common refinement: the sorted union of splits of all fns.
std::vector<Scalar> common_splits(const std::vector<StepFn>& fns);
/// Values of f on the pieces determined by `splits` (a refinement of f's own splits).
std::vector<mpz_class> values_on(const StepFn& f, const std::vector<Scalar>& splits);

bool is_nonnegative(const StepFn& f);

nlohmann::json to_json(const StepFn& f);
nlohmann::json to_json(const CutPoint& p);

}  // namespace imapk
