#include "imapk/orbit.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "imapk/error.hpp"

namespace imapk {

namespace {

using ScalarIndex = std::unordered_map<Scalar, std::size_t, ScalarHash, ScalarSameRepr>;
using ScalarSet = std::unordered_set<Scalar, ScalarHash, ScalarSameRepr>;

std::vector<mpz_class> prime_factors(mpz_class n) {
  std::vector<mpz_class> out;
  n = abs(n);
  for (unsigned long p = 2; p < 1000000 && mpz_class(p) * p <= n; ++p) {
    if (n % p != 0) continue;
    out.emplace_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);  // trial division stopped: treat the cofactor as one factor
  return out;
}

}  // namespace

std::string InfinityCertificate::describe() const {
  return "the " + prime.get_str() + "-adic valuation of the orbit is " + std::to_string(valuation) + " <= " +
         (bound == LONG_MAX ? std::string("inf") : std::to_string(bound)) + " at step " + std::to_string(step) +
         " and drops by at least 1 on every later step, so all later points are distinct";
}

ValuationWitness::ValuationWitness(const PMMap& m) {
  if (m.field()) return;
  mpz_class g = 0;
  for (const auto& b : m.branches()) {
    mpz_class d = b.slope.rational().get_den();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
  }
  if (g <= 1) return;
  for (const auto& r : prime_factors(g)) {
    // cofactors above the trial bound may be composite; require primality
    if (mpz_probab_prime_p(r.get_mpz_t(), 30) == 0) continue;
    long bound = LONG_MAX;
    for (const auto& b : m.branches())
      if (!b.intercept.is_zero()) bound = std::min(bound, valuation(b.intercept.rational(), r));
    primes_.emplace_back(r, bound);
  }
}

std::optional<InfinityCertificate> ValuationWitness::check(const Scalar& x, std::size_t step) const {
  if (!x.is_rational() || x.is_zero()) return std::nullopt;
  for (const auto& [r, bound] : primes_) {
    long v = valuation(x.rational(), r);
    if (v <= bound) return InfinityCertificate{r, bound, step, v};
  }
  return std::nullopt;
}

std::string OrbitStatus::to_string() const {
  switch (kind) {
    case Kind::Closed:
      return "Closed(k=" + std::to_string(preperiod) + ", p=" + std::to_string(period) + ")";
    case Kind::CapReached:
      return "CapReached(" + std::to_string(cap) + ")";
    case Kind::ProvablyInfinite:
      return "ProvablyInfinite(" + (certificate ? certificate->describe() : std::string()) + ")";
  }
  return "";
}

OrbitResult forward_orbit(const PMMap& m, const Scalar& x, std::size_t cap) {
  if (x < Scalar(0) || x > Scalar(1)) fail(ErrorKind::OutOfDomain, x.to_string() + " is outside [0,1]");
  if (cap == 0) fail(ErrorKind::LengthExceedsCap, "cap must be at least 1");
  const ValuationWitness witness(m);
  OrbitResult res;
  res.seed = x;
  res.status.cap = cap;

  struct Pending {
    std::vector<Scalar> path;  // last entry not yet checked
    ScalarIndex index;
  };
  ScalarSet seen;
  std::deque<Pending> pending;
  pending.push_back(Pending{{x}, {}});
  std::size_t steps = 0;
  bool capped = false;

  while (!pending.empty() && !res.status.certificate && !capped) {
    Pending cur = std::move(pending.front());
    pending.pop_front();
    OrbitThread thread;
    for (;;) {
      const std::size_t pos = cur.path.size() - 1;
      const Scalar y = cur.path.back();
      if (auto it = cur.index.find(y); it != cur.index.end()) {
        thread.end = OrbitThread::End::Cycle;
        thread.preperiod = it->second;
        thread.period = pos - it->second;
        break;
      }
      if (seen.count(y)) {
        thread.end = OrbitThread::End::Merged;
        break;
      }
      cur.index.emplace(y, pos);
      seen.insert(y);
      res.point_set.push_back(y);
      if (auto c = witness.check(y, pos)) {
        res.status.certificate = c;
        thread.end = OrbitThread::End::Infinite;
        break;
      }
      if (steps >= cap) {
        capped = true;
        thread.end = OrbitThread::End::Open;
        break;
      }
      ++steps;
      std::vector<Scalar> next = eval_multivalued(m, y);
      for (std::size_t j = 1; j < next.size(); ++j) {
        Pending fork{cur.path, cur.index};
        fork.path.push_back(next[j]);
        pending.push_back(std::move(fork));
      }
      cur.path.push_back(std::move(next[0]));
    }
    thread.points = std::move(cur.path);
    res.threads.push_back(std::move(thread));
  }

  res.points = res.threads.front().points;
  if (res.status.certificate) {
    res.status.kind = OrbitStatus::Kind::ProvablyInfinite;
  } else if (capped || !pending.empty()) {
    res.status.kind = OrbitStatus::Kind::CapReached;
  } else {
    res.status.kind = OrbitStatus::Kind::Closed;
    res.status.preperiod = res.threads.front().preperiod;
    res.status.period = res.threads.front().period;
  }
  return res;
}

OrbitResult forward_orbit_single(const PMMap& m, const Scalar& x, std::size_t cap) {
  if (x < Scalar(0) || x > Scalar(1)) fail(ErrorKind::OutOfDomain, x.to_string() + " is outside [0,1]");
  const ValuationWitness witness(m);
  OrbitResult res;
  res.seed = x;
  res.status.cap = cap;
  ScalarIndex index;
  OrbitThread thread;
  thread.points.push_back(x);
  for (;;) {
    const std::size_t pos = thread.points.size() - 1;
    const Scalar& y = thread.points.back();
    if (auto it = index.find(y); it != index.end()) {
      thread.end = OrbitThread::End::Cycle;
      thread.preperiod = it->second;
      thread.period = pos - it->second;
      res.status.kind = OrbitStatus::Kind::Closed;
      res.status.preperiod = thread.preperiod;
      res.status.period = thread.period;
      break;
    }
    index.emplace(y, pos);
    res.point_set.push_back(y);
    if (auto c = witness.check(y, pos)) {
      thread.end = OrbitThread::End::Infinite;
      res.status.kind = OrbitStatus::Kind::ProvablyInfinite;
      res.status.certificate = c;
      break;
    }
    if (pos >= cap) {
      res.status.kind = OrbitStatus::Kind::CapReached;
      break;
    }
    Scalar next = eval_right_continuous(m, y);
    thread.points.push_back(std::move(next));
  }
  res.points = thread.points;
  res.threads.push_back(std::move(thread));
  return res;
}

CriticalClosure critical_closure(const PMMap& m, std::size_t cap) {
  const ValuationWitness witness(m);
  CriticalClosure out;
  ScalarSet seen;
  std::deque<std::pair<Scalar, Scalar>> queue;  // (point, partition point it descends from)
  for (const auto& a : m.partition()) {
    if (!out.certificate) {
      if (auto c = witness.check(a, 0)) {
        out.certificate = c;
        out.certified_point = a;
      }
    }
    if (seen.insert(a).second) queue.emplace_back(a, a);
  }
  while (!out.certificate && !queue.empty()) {
    auto [x, origin] = std::move(queue.front());
    queue.pop_front();
    for (auto& y : eval_multivalued(m, x)) {
      if (seen.count(y)) continue;
      if (auto c = witness.check(y, 0)) {
        out.certificate = c;
        out.certified_point = origin;
        break;
      }
      seen.insert(y);
      queue.emplace_back(std::move(y), origin);
      if (seen.size() > cap) break;
    }
    if (out.certificate || seen.size() > cap) break;
  }
  out.complete = queue.empty() && !out.certificate && seen.size() <= cap;
  out.points.assign(seen.begin(), seen.end());
  std::sort(out.points.begin(), out.points.end());
  return out;
}

std::string IdocResult::to_string() const {
  switch (kind) {
    case Kind::HoldsUpToCap: return "holds_up_to_cap(" + std::to_string(cap) + ")";
    case Kind::Fails: return "fails(" + witness + ")";
    case Kind::ProvablyInfiniteAndDisjointUpToCap:
      return "provably_infinite_and_disjoint_up_to_cap(" + std::to_string(cap) + ")";
  }
  return "";
}

bool is_exchange_map(const PMMap& m) {
  std::vector<std::pair<Scalar, Scalar>> images;
  for (std::size_t i = 0; i < m.branch_count(); ++i) {
    if (!m.branch(i).increasing()) return false;
    images.push_back(branch_image(m, i));
  }
  std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Scalar at(0);
  for (const auto& [lo, hi] : images) {
    if (lo != at) return false;
    at = hi;
  }
  return at == Scalar(1);
}

IdocResult idoc_check(const PMMap& m, std::size_t cap) {
  if (!is_exchange_map(m)) fail(ErrorKind::NotAnExchangeMap, "branches must be increasing with images tiling [0,1)");
  const ValuationWitness witness(m);
  IdocResult res;
  res.cap = cap;
  std::unordered_map<Scalar, std::pair<std::size_t, std::size_t>, ScalarHash, ScalarSameRepr> owner;
  bool all_certified = m.branch_count() > 1;
  for (std::size_t i = 1; i + 1 < m.partition().size(); ++i) {
    Scalar x = m.partition()[i];
    bool certified = false;
    for (std::size_t step = 0; step <= cap; ++step) {
      auto [it, fresh] = owner.try_emplace(x, i, step);
      if (!fresh) {
        const auto [j, s] = it->second;
        res.kind = IdocResult::Kind::Fails;
        if (j == i) {
          res.witness = "orbit of a" + std::to_string(i) + " is eventually periodic: step " + std::to_string(step) +
                        " revisits step " + std::to_string(s) + " at " + x.to_string();
        } else {
          res.witness = "orbits of a" + std::to_string(j) + " and a" + std::to_string(i) + " meet at " + x.to_string() +
                        " (steps " + std::to_string(s) + " and " + std::to_string(step) + ")";
        }
        return res;
      }
      if (!certified && witness.check(x, step)) certified = true;
      if (step < cap) x = eval_right_continuous(m, x);
    }
    all_certified = all_certified && certified;
  }
  res.kind = all_certified ? IdocResult::Kind::ProvablyInfiniteAndDisjointUpToCap : IdocResult::Kind::HoldsUpToCap;
  return res;
}

}  // namespace imapk
