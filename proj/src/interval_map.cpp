#include "imapk/interval_map.hpp"

#include <algorithm>

#include "imapk/error.hpp"

namespace imapk {

std::string CutPoint::to_string() const { return value.to_string() + (side == Side::Minus ? "-" : "+"); }

Ordering compare(const CutPoint& a, const CutPoint& b) {
  Ordering o = compare(a.value, b.value);
  if (o != Ordering::EQ) return o;
  if (a.side == b.side) return Ordering::EQ;
  return a.side == Side::Minus ? Ordering::LT : Ordering::GT;
}

std::string_view to_string(Tri t) {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

PMMap validate_map(std::vector<Scalar> partition, std::vector<AffineBranch> branches) {
  if (partition.size() < 2) fail(ErrorKind::PartitionNotIncreasing, "partition needs at least two points");
  if (branches.size() + 1 != partition.size())
    fail(ErrorKind::PartitionNotIncreasing, "expected " + std::to_string(partition.size() - 1) + " branches, got " +
                                                std::to_string(branches.size()));
  FieldPtr field;
  for (const auto& p : partition) field = common_field(field, p.field());
  for (const auto& b : branches) field = common_field(common_field(field, b.slope.field()), b.intercept.field());

  if (partition.front() != Scalar(0) || partition.back() != Scalar(1))
    fail(ErrorKind::EndpointsNotZeroOne, "partition must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < partition.size(); ++i)
    if (!(partition[i] < partition[i + 1]))
      fail(ErrorKind::PartitionNotIncreasing,
           "partition point " + partition[i + 1].to_string() + " does not exceed " + partition[i].to_string());
  const Scalar zero(0), one(1);
  for (size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].slope.is_zero()) fail(ErrorKind::ZeroSlope, "branch " + std::to_string(i + 1) + " has slope 0");
    for (const Scalar& x : {partition[i], partition[i + 1]}) {
      Scalar y = branches[i](x);
      if (y < zero || y > one)
        fail(ErrorKind::BranchImageOutsideUnitInterval,
             "branch " + std::to_string(i + 1) + " maps " + x.to_string() + " to " + y.to_string());
    }
  }

  PMMap m;
  m.field_ = field;
  m.partition_.push_back(partition[0]);
  for (size_t i = 0; i < branches.size(); ++i) {
    if (!m.branches_.empty()) {
      const AffineBranch& prev = m.branches_.back();
      const Scalar& a = partition[i];
      bool continuous = prev(a) == branches[i](a);
      bool same_sign = prev.slope.sign() == branches[i].slope.sign();
      if (continuous && same_sign) {
        if (prev.slope == branches[i].slope) {
          m.notes_.push_back("merged branches glued continuously at " + a.to_string());
          m.partition_.back() = partition[i + 1];
          continue;
        }
        m.notes_.push_back("kept monotone kink at " + a.to_string() + " as a partition point (slopes " +
                           prev.slope.to_string() + " and " + branches[i].slope.to_string() + ")");
      }
    }
    m.branches_.push_back(branches[i]);
    m.partition_.push_back(partition[i + 1]);
  }
  return m;
}

std::optional<std::size_t> PMMap::interior_branch(const Scalar& x) const {
  auto it = std::upper_bound(partition_.begin(), partition_.end(), x);
  if (it == partition_.begin() || it == partition_.end()) return std::nullopt;
  if (*(it - 1) == x) return std::nullopt;
  return static_cast<std::size_t>(it - partition_.begin() - 1);
}

std::optional<std::size_t> PMMap::partition_index(const Scalar& x) const {
  auto it = std::lower_bound(partition_.begin(), partition_.end(), x);
  if (it != partition_.end() && *it == x) return static_cast<std::size_t>(it - partition_.begin());
  return std::nullopt;
}

std::size_t PMMap::branch_of(const CutPoint& p) const {
  if (auto b = interior_branch(p.value)) return *b;
  auto idx = partition_index(p.value);
  if (!idx) fail(ErrorKind::OutOfDomain, p.value.to_string() + " is outside [0,1]");
  if (*idx == 0) return 0;
  if (*idx == partition_.size() - 1) return branches_.size() - 1;
  return p.side == Side::Plus ? *idx : *idx - 1;
}

bool PMMap::is_continuous() const {
  for (size_t i = 1; i < branches_.size(); ++i)
    if (branches_[i - 1](partition_[i]) != branches_[i](partition_[i])) return false;
  return true;
}

bool PMMap::same_as(const PMMap& other) const {
  if (partition_.size() != other.partition_.size()) return false;
  for (size_t i = 0; i < partition_.size(); ++i)
    if (partition_[i] != other.partition_[i]) return false;
  for (size_t i = 0; i < branches_.size(); ++i)
    if (branches_[i].slope != other.branches_[i].slope || branches_[i].intercept != other.branches_[i].intercept)
      return false;
  return true;
}

static void check_domain(const Scalar& x) {
  if (x < Scalar(0) || x > Scalar(1)) fail(ErrorKind::OutOfDomain, x.to_string() + " is outside [0,1]");
}

std::vector<Scalar> eval_multivalued(const PMMap& m, const Scalar& x) {
  check_domain(x);
  if (auto b = m.interior_branch(x)) return {m.branch(*b)(x)};
  std::size_t i = *m.partition_index(x);
  if (i == 0) return {m.branch(0)(x)};
  if (i == m.branch_count()) return {m.branch(i - 1)(x)};
  Scalar l = m.branch(i - 1)(x), r = m.branch(i)(x);
  if (l == r) return {l};
  return {l, r};
}

std::vector<Scalar> preimages(const PMMap& m, const Scalar& y) {
  check_domain(y);
  std::vector<Scalar> out;
  for (size_t i = 0; i < m.branch_count(); ++i) {
    Scalar x = m.branch(i).inverse(y);
    if (x < m.left(i) || x > m.right(i)) continue;
    if (!out.empty() && out.back() == x) continue;
    out.push_back(std::move(x));
  }
  return out;
}

Scalar eval_right_continuous(const PMMap& m, const Scalar& x) {
  check_domain(x);
  if (x == Scalar(1)) return m.branches().back()(x);
  auto it = std::upper_bound(m.partition().begin(), m.partition().end(), x);
  return m.branch(static_cast<std::size_t>(it - m.partition().begin() - 1))(x);
}

CutPoint apply_sigma(const PMMap& m, const CutPoint& p) {
  const AffineBranch& b = m.branch(m.branch_of(p));
  CutPoint q{b(p.value), b.increasing() ? p.side : (p.side == Side::Plus ? Side::Minus : Side::Plus)};
  if (q.value == Scalar(0)) q.side = Side::Plus;
  if (q.value == Scalar(1)) q.side = Side::Minus;
  return q;
}

std::pair<Scalar, Scalar> branch_image(const PMMap& m, std::size_t i) {
  Scalar u = m.branch(i)(m.left(i)), v = m.branch(i)(m.right(i));
  if (v < u) std::swap(u, v);
  return {u, v};
}

std::vector<std::pair<Scalar, Scalar>> merge_intervals(std::vector<std::pair<Scalar, Scalar>> iv) {
  std::erase_if(iv, [](const auto& p) { return !(p.first < p.second); });
  std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Scalar, Scalar>> out;
  for (auto& p : iv) {
    if (!out.empty() && p.first <= out.back().second) {
      if (p.second > out.back().second) out.back().second = p.second;
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

static bool same_union(const std::vector<std::pair<Scalar, Scalar>>& a, const std::vector<std::pair<Scalar, Scalar>>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
  return true;
}

FlagReport dynamics_flags(const PMMap& m, int depth) {
  FlagReport f;
  const size_t n = m.branch_count();
  std::vector<std::pair<Scalar, Scalar>> images;
  for (size_t i = 0; i < n; ++i) images.push_back(branch_image(m, i));

  auto range = merge_intervals(images);
  bool surj = range.size() == 1 && range[0].first == Scalar(0) && range[0].second == Scalar(1);
  f.surjective = surj ? Tri::Yes : Tri::No;
  f.provenance.push_back("surjective: exact union of closed branch images");

  std::vector<std::pair<Scalar, Scalar>> current{{Scalar(0), Scalar(1)}};
  for (int k = 0; k <= depth; ++k) {
    std::vector<std::pair<Scalar, Scalar>> next;
    for (const auto& [lo, hi] : current) {
      for (size_t i = 0; i < n; ++i) {
        Scalar a = std::max(lo, m.left(i)), b = std::min(hi, m.right(i));
        if (!(a < b)) continue;
        Scalar u = m.branch(i)(a), v = m.branch(i)(b);
        if (v < u) std::swap(u, v);
        next.emplace_back(u, v);
      }
    }
    next = merge_intervals(std::move(next));
    if (same_union(next, current)) {
      f.eventually_surjective = Tri::Yes;
      f.stabilization_depth = k;
      f.eventual_range = current;
      break;
    }
    current = std::move(next);
  }
  f.provenance.push_back(f.eventually_surjective == Tri::Yes
                             ? "eventually surjective: range stabilized after " + std::to_string(f.stabilization_depth) +
                                   " steps"
                             : "eventually surjective: range not stabilized within " + std::to_string(depth) + " steps");

  f.essentially_injective = Tri::Yes;
  for (size_t i = 0; i < n && f.essentially_injective == Tri::Yes; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::max(images[i].first, images[j].first) < std::min(images[i].second, images[j].second)) {
        f.essentially_injective = Tri::No;
        f.provenance.push_back("not essentially injective: open images of branches " + std::to_string(i + 1) +
                               " and " + std::to_string(j + 1) + " overlap");
        break;
      }
  if (f.essentially_injective == Tri::Yes)
    f.provenance.push_back("essentially injective: open branch images pairwise meet in at most one point");

  if (!surj) {
    f.transitive = Tri::No;
    f.exact = Tri::No;
    f.provenance.push_back("not transitive: the image of tau is not dense");
  }
  return f;
}

void apply_certificate(FlagReport& f, const DynamicsCertificate& cert) {
  auto merge = [&](Tri& slot, Tri value, std::string_view what) {
    if (value == Tri::Unknown || slot != Tri::Unknown) return;
    slot = value;
    f.provenance.push_back(std::string(what) + ": " + std::string(to_string(value)) + " (" + cert.source + ")");
  };
  merge(f.exact, cert.exact, "exact");
  merge(f.transitive, cert.exact == Tri::Yes ? Tri::Yes : cert.transitive, "transitive");
  merge(f.af, cert.af, "AF");
  if (f.af == Tri::Unknown && f.transitive == Tri::Yes) {
    f.af = Tri::Yes;
    f.provenance.push_back("AF: yes (transitive maps have no homterval)");
  }
  if (f.surjective == Tri::Yes) {
    f.f_simple = f.exact;
    f.o_simple = f.transitive;
  }
}

}  // namespace imapk
