#include "imapk/markov.hpp"

#include <algorithm>
#include <numeric>

#include "imapk/error.hpp"
#include "imapk/json_util.hpp"

namespace imapk {

namespace {

bool member(const std::vector<Scalar>& sorted, const Scalar& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

void check_zero_one(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::NotSquare, "incidence matrix must be square");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && a(i, j) != 1) fail(ErrorKind::NotZeroOne, "entry " + a(i, j).get_str() + " is not 0 or 1");
}

}  // namespace

std::size_t MarkovData::interval_of(const CutPoint& p) const {
  auto it = std::lower_bound(partition.begin(), partition.end(), p.value);
  auto j = static_cast<std::size_t>(it - partition.begin());
  if (it != partition.end() && *it == p.value) {
    if (j == 0) return 1;
    if (j == size()) return size();
    return p.side == Side::Minus ? j : j + 1;
  }
  return j;
}

std::string MarkovDetection::to_string() const {
  switch (kind) {
    case Kind::Markov: return "Markov";
    case Kind::NotMarkovWithinCap: return "NotMarkovWithinCap(" + std::to_string(cap) + ")";
    case Kind::ProvablyNotMarkov: return "ProvablyNotMarkov";
  }
  return "";
}

MarkovData markov_from_partition(const PMMap& m, std::vector<Scalar> partition) {
  if (partition.size() < 2 || partition.front() != Scalar(0) || partition.back() != Scalar(1))
    fail(ErrorKind::InvalidMarkovPartition, "Markov partition must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    if (!(partition[i] < partition[i + 1]))
      fail(ErrorKind::InvalidMarkovPartition, "Markov partition must be strictly increasing");

  std::vector<Scalar> probe = partition;
  probe.insert(probe.end(), m.partition().begin(), m.partition().end());
  for (const auto& x : probe)
    for (const auto& y : eval_multivalued(m, x))
      if (!member(partition, y))
        fail(ErrorKind::InvalidMarkovPartition,
             "limit " + y.to_string() + " of tau at " + x.to_string() + " is not a partition point");

  MarkovData md;
  md.partition = std::move(partition);
  const std::size_t n = md.size();
  md.matrix = IntMatrix(n, n);
  md.branches.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar& lo = md.partition[i];
    const Scalar& hi = md.partition[i + 1];
    std::vector<std::pair<Scalar, Scalar>> images;
    int direction = 0;
    for (std::size_t k = 0; k < m.branch_count(); ++k) {
      if (!(m.left(k) < hi && lo < m.right(k))) continue;
      const Scalar& a = m.left(k) < lo ? lo : m.left(k);
      const Scalar& b = hi < m.right(k) ? hi : m.right(k);
      const AffineBranch& br = m.branch(k);
      int dir = br.increasing() ? 1 : -1;
      if (direction != 0 && dir != direction)
        fail(ErrorKind::InvalidMarkovPartition,
             "tau is not monotone on (" + lo.to_string() + ", " + hi.to_string() + ")");
      direction = dir;
      Scalar u = br(a), v = br(b);
      if (dir < 0) std::swap(u, v);
      if (!images.empty()) {
        const auto& prev = images.back();
        bool ordered = dir > 0 ? prev.second <= u : v <= prev.first;
        if (!ordered)
          fail(ErrorKind::InvalidMarkovPartition,
               "tau is not monotone on (" + lo.to_string() + ", " + hi.to_string() + ")");
      }
      images.emplace_back(std::move(u), std::move(v));
      md.branches[i].push_back(k);
    }
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [u, v] : images)
        if (u <= md.partition[j] && md.partition[j + 1] <= v) {
          md.matrix(i, j) = 1;
          break;
        }
  }
  md.source = "user partition";
  return md;
}

MarkovDetection detect_markov(const PMMap& m, std::size_t cap) {
  MarkovDetection d;
  d.cap = cap;
  CriticalClosure cc = critical_closure(m, cap);
  if (cc.certificate) {
    d.kind = MarkovDetection::Kind::ProvablyNotMarkov;
    d.certificate = cc.certificate;
    d.certified_point = cc.certified_point;
    return d;
  }
  if (!cc.complete) return d;
  d.kind = MarkovDetection::Kind::Markov;
  d.data = markov_from_partition(m, std::move(cc.points));
  d.data->source = "critical closure";
  return d;
}

GraphFlags graph_flags(const IntMatrix& a) {
  check_zero_one(a);
  const std::size_t n = a.rows();
  GraphFlags g;
  if (n == 0) return g;

  // reach(i,j): a walk of length >= 1 from i to j
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = a(i, j) != 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    for (std::size_t j = i + 1; j < n; ++j)
      if (comp[j] < 0 && reach[i][j] && reach[j][i]) comp[j] = ncomp;
    ++ncomp;
  }

  auto component_period = [&](int c, std::size_t root) {
    std::vector<long> level(n, -1);
    std::vector<std::size_t> queue{root};
    level[root] = 0;
    long p = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::size_t u = queue[q];
      for (std::size_t v = 0; v < n; ++v) {
        if (a(u, v) == 0 || comp[v] != c) continue;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          p = std::gcd(p, std::labs(level[u] + 1 - level[v]));
        }
      }
    }
    return static_cast<std::size_t>(p);
  };
  for (int c = 0; c < ncomp; ++c) {
    std::size_t root = static_cast<std::size_t>(std::find(comp.begin(), comp.end(), c) - comp.begin());
    if (reach[root][root]) g.component_periods.push_back(component_period(c, root));
  }
  g.irreducible = ncomp == 1 && reach[0][0];
  g.period = g.irreducible ? g.component_periods.front() : 0;
  g.primitive = g.irreducible && g.period == 1;

  std::vector<std::size_t> out(n, 0), in(n, 0), succ(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0) {
        ++out[i];
        ++in[j];
        succ[i] = j;
      }
  g.permutation = std::all_of(out.begin(), out.end(), [](std::size_t d) { return d == 1; }) &&
                  std::all_of(in.begin(), in.end(), [](std::size_t d) { return d == 1; });

  g.condition_L = true;
  for (std::size_t i = 0; i < n && g.condition_L; ++i) {
    std::size_t v = i;
    for (std::size_t step = 0; step < n && out[v] == 1; ++step) {
      v = succ[v];
      if (v == i) {
        g.condition_L = false;
        break;
      }
    }
  }

  std::vector<char> s(n, 1);
  for (;;) {
    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (s[i])
        for (std::size_t j = 0; j < n; ++j)
          if (a(i, j) != 0) next[j] = 1;
    if (next == s) break;
    s = std::move(next);
    ++g.range_depth;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (s[i]) g.eventual_range.push_back(i + 1);
  return g;
}

BoolMatrix::BoolMatrix(const IntMatrix& m) : BoolMatrix(m.rows()) {
  check_zero_one(m);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) = m(i, j) != 0;
}

bool BoolMatrix::positive() const {
  return std::all_of(a_.begin(), a_.end(), [](std::uint8_t v) { return v != 0; });
}

BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n);
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!a(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) |= b(k, j);
    }
  return c;
}

BoolMatrix multiply_serial(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint8_t v = 0;
      for (std::size_t k = 0; k < n && !v; ++k) v = a(i, k) & b(k, j);
      c(i, j) = v;
    }
  return c;
}

namespace {

template <class Mul>
BoolMatrix power_with(const BoolMatrix& a, std::size_t k, Mul mul) {
  if (k == 0) fail(ErrorKind::SemanticError, "boolean power needs k >= 1");
  BoolMatrix result = a, base = a;
  --k;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

std::size_t wielandt_exponent(std::size_t n) { return (n - 1) * (n - 1) + 1; }

}  // namespace

BoolMatrix power(const BoolMatrix& a, std::size_t k) { return power_with(a, k, multiply); }
BoolMatrix power_serial(const BoolMatrix& a, std::size_t k) { return power_with(a, k, multiply_serial); }

bool primitive_by_power(const IntMatrix& a) {
  BoolMatrix b(a);
  return b.size() > 0 && power(b, wielandt_exponent(b.size())).positive();
}

bool primitive_by_power_serial(const IntMatrix& a) {
  BoolMatrix b(a);
  return b.size() > 0 && power_serial(b, wielandt_exponent(b.size())).positive();
}

Itinerary itinerary(const PMMap& m, const MarkovData& md, const CutPoint& x, std::size_t len, std::size_t cap) {
  if (len > cap) fail(ErrorKind::LengthExceedsCap, "itinerary length " + std::to_string(len) + " exceeds cap");
  if (x.value < Scalar(0) || x.value > Scalar(1)) fail(ErrorKind::OutOfDomain, x.value.to_string() + " is outside [0,1]");
  CutPoint p = x;
  if (p.value == Scalar(0)) p.side = Side::Plus;
  if (p.value == Scalar(1)) p.side = Side::Minus;
  Itinerary it{p, {}};
  for (std::size_t k = 0; k < len; ++k) {
    it.symbols.push_back(md.interval_of(p));
    if (k + 1 < len) p = apply_sigma(m, p);
  }
  return it;
}

std::string SeparationResult::to_string() const {
  switch (kind) {
    case Kind::Separates: return "separates";
    case Kind::Fails: return "fails";
    case Kind::Unknown: return "unknown";
  }
  return "";
}

SeparationResult separation_check(const PMMap&, const MarkovData& md) {
  GraphFlags g = graph_flags(md.matrix);
  if (g.condition_L) return {SeparationResult::Kind::Separates, "piecewise linear Markov map and A satisfies Condition L"};
  return {SeparationResult::Kind::Fails, "A has a cycle without exit (Condition L fails)"};
}

DynamicsCertificate markov_certificate(const MarkovData&, const GraphFlags& g, bool surjective) {
  DynamicsCertificate c;
  c.source = "Markov incidence matrix";
  if (!surjective) {
    c.transitive = Tri::No;
    c.exact = Tri::No;
  } else {
    c.exact = g.primitive ? Tri::Yes : Tri::No;
    c.transitive = g.irreducible && !g.permutation ? Tri::Yes : Tri::No;
  }
  if (c.transitive == Tri::Yes || g.condition_L) c.af = Tri::Yes;
  return c;
}

IntMatrix restrict_to(const IntMatrix& a, const std::vector<std::size_t>& labels) {
  IntMatrix r(labels.size(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j) r(i, j) = a(labels[i] - 1, labels[j] - 1);
  return r;
}

nlohmann::json to_json(const MarkovData& md) {
  nlohmann::json part = nlohmann::json::array(), br = nlohmann::json::array();
  for (const auto& b : md.partition) part.push_back(b.to_string());
  for (const auto& row : md.branches) {
    nlohmann::json r = nlohmann::json::array();
    for (auto k : row) r.push_back(k + 1);
    br.push_back(r);
  }
  return {{"partition", part}, {"matrix", to_json(md.matrix)}, {"branches", br}, {"source", md.source}};
}

nlohmann::json to_json(const GraphFlags& g) {
  return {{"irreducible", g.irreducible},
          {"primitive", g.primitive},
          {"permutation", g.permutation},
          {"condition_L", g.condition_L},
          {"period", g.period},
          {"component_periods", g.component_periods},
          {"eventual_range", g.eventual_range}};
}

}  // namespace imapk
