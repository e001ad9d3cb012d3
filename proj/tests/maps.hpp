#pragma once
// Small map zoo built straight from partition and branch data.

#include <algorithm>
#include <random>

#include "imapk/interval_map.hpp"

namespace testmaps {

using imapk::AffineBranch;
using imapk::FieldPtr;
using imapk::NumberField;
using imapk::PMMap;
using imapk::Scalar;

inline FieldPtr sqrt2_field() { return NumberField::create({-2, 0, 1}, 1, 2); }
inline FieldPtr golden_field() { return NumberField::create({-1, -1, 1}, 1, 2); }

inline PMMap tent() {
  return imapk::validate_map({0, Scalar(1, 2), 1}, {{2, 0}, {-2, 2}});
}

/// x -> beta x mod 1 for rational beta > 1.
inline PMMap beta_rational(const Scalar& beta) {
  std::vector<Scalar> part{0};
  std::vector<AffineBranch> br;
  for (long k = 1; Scalar(k) / beta < Scalar(1); ++k) {
    part.push_back(Scalar(k) / beta);
    br.push_back({beta, Scalar(1 - k)});
  }
  br.push_back({beta, Scalar(1 - static_cast<long>(part.size()))});
  part.push_back(1);
  return imapk::validate_map(part, br);
}

inline PMMap golden_beta() {
  Scalar phi = Scalar::generator(golden_field());
  return imapk::validate_map({0, Scalar(1) / phi, 1}, {{phi, 0}, {phi, -1}});
}

/// Two-interval exchange: [0,1-l) -> [l,1), [1-l,1) -> [0,l).
inline PMMap rotation(const Scalar& l) {
  return imapk::validate_map({0, Scalar(1) - l, 1}, {{1, l}, {1, l - Scalar(1)}});
}

/// Partition {0,1/3,1/2,2/3,1} with four slope-2 branches.
inline PMMap three_vertex_realization() {
  return imapk::validate_map({0, Scalar(1, 3), Scalar(1, 2), Scalar(2, 3), 1},
                             {{2, Scalar(1, 3)}, {2, Scalar(-2, 3)}, {2, Scalar(-1, 3)}, {2, Scalar(-4, 3)}});
}

/// Restricted tent of slope sqrt 2 rescaled to [0,1].
inline PMMap tent_sqrt2() {
  Scalar s = Scalar::generator(sqrt2_field());
  Scalar c = Scalar(1) - Scalar(1) / s;
  return imapk::validate_map({0, c, 1}, {{s, Scalar(2) - s}, {-s, s}});
}

}  // namespace testmaps

namespace testmaps {

/// Random rational map: `pieces` branches with endpoint images on a 1/den grid.
template <class Rng>
PMMap random_map(Rng& rng, int pieces, long den = 12) {
  std::uniform_int_distribution<long> grid(0, den);
  std::vector<long> cuts;
  while (static_cast<int>(cuts.size()) < pieces - 1) {
    long c = std::uniform_int_distribution<long>(1, 4 * den - 1)(rng);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Scalar> part{0};
  for (long c : cuts) part.push_back(Scalar(c, 4 * den));
  part.push_back(1);
  std::vector<AffineBranch> br;
  for (int i = 0; i < pieces; ++i) {
    long u = grid(rng), v = grid(rng);
    while (v == u) v = grid(rng);
    Scalar su(u, den), sv(v, den);
    Scalar slope = (sv - su) / (part[i + 1] - part[i]);
    br.push_back({slope, su - slope * part[i]});
  }
  return imapk::validate_map(part, br);
}

}  // namespace testmaps

namespace testmaps {

/// Random map whose branches each span one cell of the 1/n grid and send grid points to grid points.
template <class Rng>
PMMap random_grid_map(Rng& rng, long n) {
  std::uniform_int_distribution<long> grid(0, n);
  std::vector<Scalar> part;
  for (long i = 0; i <= n; ++i) part.push_back(Scalar(i, n));
  std::vector<AffineBranch> br;
  for (long i = 0; i < n; ++i) {
    long u = grid(rng), v = grid(rng);
    while (v == u) v = grid(rng);
    Scalar slope(v - u);
    br.push_back({slope, Scalar(u, n) - slope * part[i]});
  }
  return imapk::validate_map(part, br);
}

}  // namespace testmaps
