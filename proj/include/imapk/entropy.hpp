#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imapk/interval_map.hpp"
#include "imapk/markov.hpp"
#include "imapk/scalar.hpp"
#include "imapk/snf.hpp"

namespace imapk {

struct PerronEnclosure {
  mpq_class lo, hi;            // spectral radius in [lo, hi]
  std::optional<Scalar> exact;  // when the root is rational or quadratic
  QPoly factor;                 // squarefree factor of the char poly holding the root
};

/// Spectral radius of a nonnegative integer matrix, bracketed to width <= tol.
PerronEnclosure perron_enclosure(const IntMatrix& a, const mpq_class& tol = mpq_class(1, 1ul << 40));

struct EntropyReport {
  enum class Method { PerronMarkov, UniformSlope, Unknown };
  Method method = Method::Unknown;
  std::optional<std::pair<Scalar, Scalar>> s_enclosure;  // e^h in [lo, hi]
  std::optional<Scalar> exact_s;
  std::vector<std::string> notes;

  std::string entropy_text() const;
  nlohmann::json to_json() const;
};

std::string_view to_string(EntropyReport::Method m);

/// Common |slope| when every branch has the same one.
std::optional<Scalar> uniform_slope(const PMMap& m);

EntropyReport entropy_report(const PMMap& m, const FlagReport& flags, const std::optional<MarkovData>& markov,
                             const mpq_class& tol = mpq_class(1, 1ul << 40));

}  // namespace imapk
