#include "imapk/families.hpp"

#include <algorithm>
#include <unordered_map>

#include "imapk/error.hpp"

namespace imapk {

namespace {

std::string scalars(const std::vector<Scalar>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].to_short_string();
  return s + "]";
}

[[noreturn]] void out_of_range(const std::string& why) { fail(ErrorKind::ParameterOutOfRange, why); }

PMMap build_uniform_pl(const std::vector<Scalar>& part, const std::vector<int>& signs, const Scalar& s) {
  if (part.size() < 2 || signs.size() + 1 != part.size())
    out_of_range("uniform_pl needs one sign per partition interval");
  if (s.sign() <= 0) out_of_range("uniform_pl slope must be positive");
  std::vector<AffineBranch> br;
  Scalar y = signs[0] > 0 ? Scalar(0) : Scalar(1);
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) out_of_range("uniform_pl signs must be + or -");
    Scalar slope = signs[i] > 0 ? s : -s;
    br.push_back({slope, y - slope * part[i]});
    y = br.back()(part[i + 1]);
  }
  return validate_map(part, br);
}

PMMap build_interpolating(const std::vector<Scalar>& part, const std::vector<Scalar>& values) {
  if (part.size() < 2 || values.size() != part.size())
    out_of_range("multimodal needs one value per partition point");
  std::vector<AffineBranch> br;
  for (std::size_t i = 0; i + 1 < part.size(); ++i) {
    if (!(part[i] < part[i + 1])) fail(ErrorKind::PartitionNotIncreasing, "partition must increase");
    if (values[i] == values[i + 1]) fail(ErrorKind::ZeroSlope, "equal values on piece " + std::to_string(i + 1));
    Scalar slope = (values[i + 1] - values[i]) / (part[i + 1] - part[i]);
    br.push_back({slope, values[i] - slope * part[i]});
  }
  return validate_map(part, br);
}

BuiltFamily realize(const IntMatrix& a) {
  if (!a.square() || a.rows() == 0) fail(ErrorKind::NotSquare, "realization needs a nonempty square matrix");
  const std::size_t n = a.rows();
  std::vector<Scalar> part{0}, grid;
  for (std::size_t i = 0; i <= n; ++i) grid.emplace_back(static_cast<long>(i), static_cast<long>(n));
  std::vector<AffineBranch> br;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) != 0 && a(i, j) != 1) fail(ErrorKind::NotZeroOne, "entries must be 0 or 1");
      if (a(i, j) == 0) continue;
      if (!runs.empty() && runs.back().second == j) runs.back().second = j + 1;
      else runs.emplace_back(j, j + 1);
    }
    if (runs.empty()) fail(ErrorKind::UnrealizableMatrix, "row " + std::to_string(i + 1) + " has no 1s");
    const Scalar width = (grid[i + 1] - grid[i]) / Scalar(static_cast<long>(runs.size()));
    auto pieces = [&](bool increasing) {
      std::vector<AffineBranch> row;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        Scalar x0 = grid[i] + width * Scalar(static_cast<long>(r));
        Scalar x1 = r + 1 == runs.size() ? grid[i + 1] : x0 + width;
        const auto& run = increasing ? runs[r] : runs[runs.size() - 1 - r];
        Scalar u = grid[run.first], v = grid[run.second];
        Scalar slope = (v - u) / (x1 - x0);
        row.push_back(increasing ? AffineBranch{slope, u - slope * x0} : AffineBranch{-slope, v + slope * x0});
      }
      return row;
    };
    // A row that would glue onto the previous piece is laid out decreasing instead.
    auto row = pieces(true);
    if (!br.empty() && br.back().slope == row[0].slope && br.back()(grid[i]) == row[0](grid[i])) row = pieces(false);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      br.push_back(row[r]);
      part.push_back(r + 1 == runs.size() ? grid[i + 1] : grid[i] + width * Scalar(static_cast<long>(r + 1)));
    }
  }
  BuiltFamily b{validate_map(part, br), {}, Family::Other, std::nullopt, grid};
  return b;
}

}  // namespace

FamilySpec FamilySpec::restricted_tent(Scalar s) {
  FamilySpec f;
  f.kind = Kind::RestrictedTent;
  f.s = std::move(s);
  return f;
}

FamilySpec FamilySpec::uniform_pl(std::vector<Scalar> partition, std::vector<int> signs, Scalar s) {
  FamilySpec f;
  f.kind = Kind::UniformPL;
  f.partition = std::move(partition);
  f.signs = std::move(signs);
  f.s = std::move(s);
  return f;
}

FamilySpec FamilySpec::beta_map(Scalar beta) {
  FamilySpec f;
  f.kind = Kind::Beta;
  f.beta = std::move(beta);
  return f;
}

FamilySpec FamilySpec::interval_exchange(std::vector<Scalar> lengths, std::vector<std::size_t> permutation) {
  FamilySpec f;
  f.kind = Kind::IntervalExchange;
  f.lengths = std::move(lengths);
  f.permutation = std::move(permutation);
  return f;
}

FamilySpec FamilySpec::multimodal(std::vector<Scalar> partition, std::vector<Scalar> values) {
  FamilySpec f;
  f.kind = Kind::Multimodal;
  f.partition = std::move(partition);
  f.values = std::move(values);
  return f;
}

FamilySpec FamilySpec::markov_realization(IntMatrix a) {
  FamilySpec f;
  f.kind = Kind::MarkovRealization;
  f.matrix = std::move(a);
  return f;
}

std::string FamilySpec::name() const {
  switch (kind) {
    case Kind::Tent: return "tent";
    case Kind::RestrictedTent: return "restricted_tent";
    case Kind::UniformPL: return "uniform_pl";
    case Kind::Beta: return "beta";
    case Kind::IntervalExchange: return "interval_exchange";
    case Kind::Multimodal: return "multimodal";
    case Kind::MarkovRealization: return "markov_realization";
  }
  return "";
}

nlohmann::json FamilySpec::to_json() const {
  nlohmann::json j = {{"family", name()}};
  switch (kind) {
    case Kind::Tent: break;
    case Kind::RestrictedTent: j["s"] = s.to_short_string(); break;
    case Kind::UniformPL:
      j["partition"] = scalars(partition);
      j["signs"] = signs;
      j["s"] = s.to_short_string();
      break;
    case Kind::Beta: j["beta"] = beta.to_short_string(); break;
    case Kind::IntervalExchange:
      j["lengths"] = scalars(lengths);
      j["permutation"] = permutation;
      break;
    case Kind::Multimodal:
      j["partition"] = scalars(partition);
      j["values"] = scalars(values);
      break;
    case Kind::MarkovRealization: j["matrix"] = imapk::to_json(matrix); break;
  }
  return j;
}

BuiltFamily build(const FamilySpec& f) {
  switch (f.kind) {
    case FamilySpec::Kind::Tent: {
      BuiltFamily b{build_uniform_pl({0, Scalar(1, 2), 1}, {1, -1}, 2), {}, Family::Unimodal, std::nullopt, std::nullopt};
      return b;
    }
    case FamilySpec::Kind::RestrictedTent: {
      if (!(Scalar(1) < f.s && f.s < Scalar(2))) out_of_range("restricted_tent needs 1 < s < 2");
      Scalar c = Scalar(1) - Scalar(1) / f.s;
      BuiltFamily b{validate_map({0, c, 1}, {{f.s, Scalar(2) - f.s}, {-f.s, f.s}}), {}, Family::Unimodal,
                    std::nullopt, std::nullopt};
      if (f.s * f.s > Scalar(2))
        b.certificates.push_back({Tri::Yes, Tri::Yes, Tri::Yes, "restricted tent with sqrt 2 < s < 2 is exact"});
      return b;
    }
    case FamilySpec::Kind::UniformPL:
      return {build_uniform_pl(f.partition, f.signs, f.s), {}, Family::Other, std::nullopt, std::nullopt};
    case FamilySpec::Kind::Beta: {
      if (!(f.beta > Scalar(1))) out_of_range("beta needs beta > 1");
      std::vector<Scalar> part{0};
      std::vector<AffineBranch> br;
      for (long k = 1; Scalar(k) / f.beta < Scalar(1); ++k) {
        part.push_back(Scalar(k) / f.beta);
        br.push_back({f.beta, Scalar(1 - k)});
      }
      br.push_back({f.beta, Scalar(1 - static_cast<long>(part.size()))});
      part.push_back(1);
      BuiltFamily b{validate_map(part, br), {}, Family::Beta, f.beta, std::nullopt};
      b.certificates.push_back({Tri::Yes, Tri::Yes, Tri::Yes, "beta-transformations are topologically exact"});
      return b;
    }
    case FamilySpec::Kind::IntervalExchange: {
      const std::size_t n = f.lengths.size();
      if (n == 0 || f.permutation.size() != n) out_of_range("interval_exchange needs one slot per length");
      std::vector<std::size_t> sorted = f.permutation;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < n; ++i)
        if (sorted[i] != i + 1) out_of_range("permutation must list 1..n");
      Scalar total = 0;
      for (const auto& l : f.lengths) {
        if (l.sign() <= 0) out_of_range("lengths must be positive");
        total += l;
      }
      if (total != Scalar(1)) out_of_range("lengths must sum to 1");
      std::vector<Scalar> part{0}, slot_start(n + 1, Scalar(0));
      for (std::size_t i = 0; i < n; ++i) part.push_back(part.back() + f.lengths[i]);
      std::vector<Scalar> by_slot(n);
      for (std::size_t i = 0; i < n; ++i) by_slot[f.permutation[i] - 1] = f.lengths[i];
      for (std::size_t k = 0; k < n; ++k) slot_start[k + 1] = slot_start[k] + by_slot[k];
      std::vector<AffineBranch> br;
      for (std::size_t i = 0; i < n; ++i) br.push_back({1, slot_start[f.permutation[i] - 1] - part[i]});
      return {validate_map(part, br), {}, Family::Other, std::nullopt, std::nullopt};
    }
    case FamilySpec::Kind::Multimodal:
      return {build_interpolating(f.partition, f.values), {}, Family::Other, std::nullopt, std::nullopt};
    case FamilySpec::Kind::MarkovRealization: return realize(f.matrix);
  }
  out_of_range("unknown family");
}

std::optional<KPair> exchange_kgroups(const PMMap& m, const IdocResult& idoc) {
  if (!is_exchange_map(m)) fail(ErrorKind::NotAnExchangeMap, "not a generalized interval exchange");
  if (idoc.kind == IdocResult::Kind::Fails) return std::nullopt;
  const std::size_t n = m.branch_count();
  KPair k;
  k.groups.free_rank = n;
  k.groups.k1_rank = 1;
  k.route = "interval exchange on " + std::to_string(n) + " intervals with IDOC";
  bool irrational_rotation = n == 2 && !m.branch(0).intercept.is_rational();
  if (irrational_rotation) {
    k.strength = "unconditional";
    k.route += " (irrational rotation number " + m.branch(0).intercept.to_short_string() + ")";
  } else if (idoc.kind == IdocResult::Kind::ProvablyInfiniteAndDisjointUpToCap) {
    k.strength = "conditional on IDOC (orbits certified infinite, disjoint up to cap " + std::to_string(idoc.cap) + ")";
  } else {
    k.strength = "conditional on IDOC (checked up to cap " + std::to_string(idoc.cap) + ")";
  }
  return k;
}

KPair multimodal_kgroups(const PMMap& m, bool asserted, std::size_t cap) {
  auto violated = [](const std::string& why) { fail(ErrorKind::HypothesisViolatedWithinCap, why); };
  if (!m.is_continuous()) violated("the map is not continuous");
  std::vector<std::pair<Scalar, Scalar>> images;
  for (std::size_t i = 0; i < m.branch_count(); ++i) images.push_back(branch_image(m, i));
  auto range = merge_intervals(images);
  if (range.size() != 1 || range[0].first != Scalar(0) || range[0].second != Scalar(1))
    violated("the map is not surjective");
  for (const Scalar& e : {Scalar(0), Scalar(1)}) {
    Scalar y = eval_right_continuous(m, e);
    if (y == Scalar(0) || y == Scalar(1))
      violated("tau(" + e.to_short_string() + ") = " + y.to_short_string() + " lies in {0,1}");
  }
  const auto& part = m.partition();
  std::unordered_map<Scalar, std::size_t, ScalarHash, ScalarSameRepr> owner;
  for (std::size_t i = 1; i + 1 < part.size(); ++i) {
    Scalar x = part[i];
    for (std::size_t step = 0; step <= cap; ++step) {
      auto [it, fresh] = owner.emplace(x, i);
      if (!fresh && it->second == i)
        violated("the orbit of " + part[i].to_short_string() + " is eventually periodic");
      if (!fresh)
        violated("the orbits of " + part[it->second].to_short_string() + " and " + part[i].to_short_string() +
                 " meet at " + x.to_short_string());
      x = eval_right_continuous(m, x);
    }
  }
  if (!asserted)
    fail(ErrorKind::RefusedWithoutAssertion,
         "orbit hypotheses hold up to cap " + std::to_string(cap) + "; pass --assert-orbit-infinite to conclude");
  KPair k;
  k.groups.free_rank = m.branch_count() - 1;
  k.groups.k1_rank = 0;
  k.strength = "asserted";
  k.route = "continuous " + std::to_string(m.branch_count()) + "-modal map with disjoint infinite critical orbits";
  return k;
}

}  // namespace imapk
