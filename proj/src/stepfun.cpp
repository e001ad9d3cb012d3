#include "imapk/stepfun.hpp"

#include <algorithm>

#include "imapk/error.hpp"
#include "imapk/json_util.hpp"

namespace imapk {

namespace {

struct Jump {
  Scalar at;
  mpz_class delta;
};

// Sorts jumps by position, sums coincident ones and rebuilds a canonical step function.
StepFn from_jumps(mpz_class start, std::vector<Jump> jumps) {
  std::stable_sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.at < b.at; });
  std::vector<Scalar> splits;
  std::vector<mpz_class> values{start};
  for (std::size_t i = 0; i < jumps.size();) {
    mpz_class d = 0;
    std::size_t j = i;
    for (; j < jumps.size() && jumps[j].at == jumps[i].at; ++j) d += jumps[j].delta;
    if (d != 0) {
      splits.push_back(jumps[i].at);
      values.push_back(values.back() + d);
    }
    i = j;
  }
  return StepFn(std::move(splits), std::move(values));
}

std::vector<Jump> jumps_of(const StepFn& f, const mpz_class& scale = 1) {
  std::vector<Jump> out;
  for (std::size_t i = 0; i < f.splits().size(); ++i)
    out.push_back({f.splits()[i], scale * (f.values()[i + 1] - f.values()[i])});
  return out;
}

// Indices of splits strictly inside (lo, hi).
std::pair<std::size_t, std::size_t> splits_between(const StepFn& f, const Scalar& lo, const Scalar& hi) {
  const auto& s = f.splits();
  auto b = std::upper_bound(s.begin(), s.end(), lo);
  auto e = std::lower_bound(b, s.end(), hi);
  return {static_cast<std::size_t>(b - s.begin()), static_cast<std::size_t>(e - s.begin())};
}

// Jumps and the value at 0+ contributed by pushing f|branch i forward.
void push_branch(const PMMap& m, const StepFn& f, std::size_t i, mpz_class& start, std::vector<Jump>& out) {
  const AffineBranch& br = m.branch(i);
  const Scalar zero(0), one(1);
  auto [b, e] = splits_between(f, m.left(i), m.right(i));
  const mpz_class first = f(CutPoint{m.left(i), Side::Plus});
  const mpz_class last = f(CutPoint{m.right(i), Side::Minus});
  Scalar lo = br(m.left(i)), hi = br(m.right(i));
  mpz_class enter = first, leave = last;
  if (!br.increasing()) {
    std::swap(lo, hi);
    std::swap(enter, leave);
  }
  if (lo == zero)
    start += enter;
  else
    out.push_back({lo, enter});
  for (std::size_t k = b; k < e; ++k) {
    mpz_class d = f.values()[k + 1] - f.values()[k];
    out.push_back({br(f.splits()[k]), br.increasing() ? d : mpz_class(-d)});
  }
  if (hi != one) out.push_back({hi, -leave});
}

}  // namespace

StepFn::StepFn(std::vector<Scalar> splits, std::vector<mpz_class> values) {
  if (values.size() != splits.size() + 1) fail(ErrorKind::SemanticError, "step function needs one value per piece");
  values_.clear();
  values_.push_back(values[0]);
  const Scalar zero(0), one(1);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (!(splits[i] > zero && splits[i] < one)) fail(ErrorKind::OutOfDomain, "split outside (0,1)");
    if (!splits_.empty() && !(splits_.back() < splits[i]))
      fail(ErrorKind::PartitionNotIncreasing, "step function splits must increase");
    if (values[i + 1] == values_.back()) continue;
    splits_.push_back(std::move(splits[i]));
    values_.push_back(values[i + 1]);
  }
}

StepFn StepFn::constant(const mpz_class& c) { return StepFn({}, {c}); }

mpz_class StepFn::operator()(const CutPoint& p) const {
  auto it = p.side == Side::Minus ? std::lower_bound(splits_.begin(), splits_.end(), p.value)
                                  : std::upper_bound(splits_.begin(), splits_.end(), p.value);
  return values_[static_cast<std::size_t>(it - splits_.begin())];
}

mpz_class StepFn::at(const Scalar& x) const {
  return (*this)(CutPoint{x, x == Scalar(1) ? Side::Minus : Side::Plus});
}

FieldPtr StepFn::field() const {
  FieldPtr f;
  for (const auto& s : splits_) f = common_field(f, s.field());
  return f;
}

bool operator==(const StepFn& f, const StepFn& g) {
  if (f.values() != g.values() || f.splits().size() != g.splits().size()) return false;
  for (std::size_t i = 0; i < f.splits().size(); ++i)
    if (f.splits()[i] != g.splits()[i]) return false;
  return true;
}

bool equal(const StepFn& f, const StepFn& g) {
  common_field(f.field(), g.field());
  return f == g;
}

StepFn indicator(const Scalar& c, const Scalar& d) {
  const Scalar zero(0), one(1);
  for (const Scalar* x : {&c, &d})
    if (*x < zero || *x > one) fail(ErrorKind::OutOfDomain, x->to_string() + " is outside [0,1]");
  const Scalar& lo = c < d ? c : d;
  const Scalar& hi = c < d ? d : c;
  if (lo == hi) return StepFn();
  std::vector<Scalar> splits;
  std::vector<mpz_class> values;
  if (lo != zero) {
    values.push_back(0);
    splits.push_back(lo);
  }
  values.push_back(1);
  if (hi != one) {
    splits.push_back(hi);
    values.push_back(0);
  }
  return StepFn(std::move(splits), std::move(values));
}

StepFn linear_comb(const std::vector<mpz_class>& coeffs, const std::vector<StepFn>& fns) {
  if (coeffs.size() != fns.size()) fail(ErrorKind::SemanticError, "coefficient count does not match function count");
  FieldPtr field;
  for (const auto& f : fns) field = common_field(field, f.field());
  mpz_class start = 0;
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    if (coeffs[i] == 0) continue;
    start += coeffs[i] * fns[i].values()[0];
    auto j = jumps_of(fns[i], coeffs[i]);
    jumps.insert(jumps.end(), std::make_move_iterator(j.begin()), std::make_move_iterator(j.end()));
  }
  return from_jumps(start, std::move(jumps));
}

StepFn operator+(const StepFn& f, const StepFn& g) { return linear_comb({1, 1}, {f, g}); }
StepFn operator-(const StepFn& f, const StepFn& g) { return linear_comb({1, -1}, {f, g}); }
StepFn operator*(const mpz_class& c, const StepFn& f) { return linear_comb({c}, {f}); }

StepFn transfer(const PMMap& m, const StepFn& f) {
  common_field(m.field(), f.field());
  const std::size_t n = m.branch_count();
  std::vector<mpz_class> starts(n, 0);
  std::vector<std::vector<Jump>> parts(n);
#pragma omp parallel for schedule(dynamic) if (n > 2)
  for (std::size_t i = 0; i < n; ++i) push_branch(m, f, i, starts[i], parts[i]);
  mpz_class start = 0;
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < n; ++i) {
    start += starts[i];
    jumps.insert(jumps.end(), std::make_move_iterator(parts[i].begin()), std::make_move_iterator(parts[i].end()));
  }
  return from_jumps(start, std::move(jumps));
}

StepFn transfer_serial(const PMMap& m, const StepFn& f) {
  common_field(m.field(), f.field());
  StepFn total;
  for (std::size_t i = 0; i < m.branch_count(); ++i) {
    const AffineBranch& br = m.branch(i);
    // pieces of f inside the branch domain, as (left end, right end, value)
    std::vector<Scalar> ends{m.left(i)};
    auto [b, e] = splits_between(f, m.left(i), m.right(i));
    for (std::size_t k = b; k < e; ++k) ends.push_back(f.splits()[k]);
    ends.push_back(m.right(i));
    for (std::size_t k = 0; k + 1 < ends.size(); ++k) {
      mpz_class v = f(CutPoint{ends[k], Side::Plus});
      if (v != 0) total = total + v * indicator(br(ends[k]), br(ends[k + 1]));
    }
  }
  return total;
}

std::vector<Scalar> common_splits(const std::vector<StepFn>& fns) {
  std::vector<Scalar> all;
  for (const auto& f : fns) all.insert(all.end(), f.splits().begin(), f.splits().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<mpz_class> values_on(const StepFn& f, const std::vector<Scalar>& splits) {
  std::vector<mpz_class> out;
  out.reserve(splits.size() + 1);
  out.push_back(f.values()[0]);
  for (const auto& s : splits) out.push_back(f(CutPoint{s, Side::Plus}));
  return out;
}

bool is_nonnegative(const StepFn& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](const mpz_class& v) { return v >= 0; });
}

nlohmann::json to_json(const CutPoint& p) {
  return {{"value", p.value.to_string()}, {"side", p.side == Side::Minus ? "-" : "+"}};
}

nlohmann::json to_json(const StepFn& f) {
  nlohmann::json pieces = nlohmann::json::array();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    CutPoint from = i == 0 ? CutPoint{Scalar(0), Side::Plus} : CutPoint{f.splits()[i - 1], Side::Plus};
    CutPoint to = i + 1 == f.piece_count() ? CutPoint{Scalar(1), Side::Minus} : CutPoint{f.splits()[i], Side::Minus};
    pieces.push_back({{"from", to_json(from)}, {"to", to_json(to)}, {"value", json_int(f.values()[i])}});
  }
  return pieces;
}

}  // namespace imapk
