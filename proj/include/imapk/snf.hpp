#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "imapk/poly.hpp"
#include "json.hpp"

namespace imapk {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix transpose() const;
  bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

/// Exact determinant by fraction-free elimination.
mpz_class determinant(const IntMatrix& m);

/// Characteristic polynomial det(tI - A).
IntPoly characteristic_polynomial(const IntMatrix& a);

struct SmithDecomposition {
  IntMatrix U, D, V;  // U * M * V == D
  std::vector<mpz_class> diagonal() const;
};

/// Pivot: nonzero entry of least absolute value, first in row-major order.
SmithDecomposition smith_normal_form(const IntMatrix& m);

struct KGroups {
  std::vector<mpz_class> torsion;  // invariant factors >= 2, each dividing the next
  std::size_t free_rank = 0;
  std::size_t k1_rank = 0;
  std::string generator_note;
  /// K0 is cyclic and generated by the class of the unit.
  bool unit_generates = false;

  bool trivial() const { return torsion.empty() && free_rank == 0; }
  std::string k0_string() const;
  std::string k1_string() const;
  nlohmann::json to_json() const;
};

/// coker and ker of I - A.
KGroups kgroups_from_incidence(const IntMatrix& a);

struct DimensionTriple {
  std::size_t size = 0;      // the group Z^m of each stage
  mpz_class det;
  IntPoly char_poly;
  std::size_t limit_rank = 0;  // m minus the algebraic multiplicity of 0
  std::string annotation;

  nlohmann::json to_json() const;
};

/// Presentation of the stationary inductive limit Z^m -> Z^m -> ... with order unit the all-ones vector.
DimensionTriple stationary_dimension_triple(const IntMatrix& a);

nlohmann::json to_json(const IntMatrix& m);

}  // namespace imapk
