#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imapk/families.hpp"
#include "imapk/interval_map.hpp"
#include "imapk/orbit.hpp"

namespace imapk::cli {

struct RunOptions {
  std::size_t cap = kDefaultCap;
  mpq_class tol{1, 1000000};
  bool assert_cyclic = false;
  bool assert_idoc = false;
  bool assert_orbit_infinite = false;
  std::optional<std::vector<Scalar>> partition;  // coarser Markov partition
};

struct MapSpecFile {
  FieldPtr field;
  std::optional<FamilySpec> family;
  BuiltFamily built;
  RunOptions options;
};

/// Parses the specfile grammar:
///
///   field   { poly = [c0, c1, ...]; iso = [lo, hi] }
///   map     { family = beta; beta = alg:[0,1] }
///   map     { partition = [0, 1/2, 1]; branch = {slope = 2, intercept = 0}; ... }
///   options { cap = 10000; tol = 1/1000000; assert_cyclic = true; partition = [...] }
///
/// Errors carry "line L, col C" of the offending token.
MapSpecFile parse_spec(std::string_view text);

/// A spec document that re-parses to the same map.
std::string map_spec_text(const PMMap& m);

}  // namespace imapk::cli
