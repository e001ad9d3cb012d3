#include "imapk/snf.hpp"

#include <sstream>

#include "imapk/error.hpp"
#include "imapk/json_util.hpp"

namespace imapk {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::NotSquare, "ragged matrix rows");
    for (long v : r) a_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::NotSquare, "matrix shapes do not compose");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::NotSquare, "matrix shapes differ");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

mpz_class determinant(const IntMatrix& m) {
  if (!m.square()) fail(ErrorKind::NotSquare, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntPoly characteristic_polynomial(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::NotSquare, "characteristic polynomial of a non-square matrix");
  // Faddeev-LeVerrier over the rationals; every coefficient is an integer.
  const std::size_t n = a.rows();
  std::vector<mpq_class> c(n + 1);
  c[n] = 1;
  std::vector<mpq_class> M(n * n), AM(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I, with M_0 = 0
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpq_class s = 0;
        for (std::size_t l = 0; l < n; ++l)
          if (a(i, l) != 0) s += mpq_class(a(i, l)) * M[l * n + j];
        AM[i * n + j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) AM[i * n + i] += c[n - k + 1];
    M.swap(AM);
    mpq_class tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (a(i, l) != 0) tr += mpq_class(a(i, l)) * M[l * n + i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  std::vector<mpz_class> z;
  for (auto& q : c) {
    q.canonicalize();
    z.push_back(q.get_num());
  }
  return IntPoly(std::move(z));
}

std::vector<mpz_class> SmithDecomposition::diagonal() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

namespace {

struct SmithWork {
  IntMatrix U, D, V;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < D.cols(); ++j) std::swap(D(a, j), D(b, j));
    for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U(a, j), U(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < D.rows(); ++i) std::swap(D(i, a), D(i, b));
    for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V(i, a), V(i, b));
  }
  // row_dst += q * row_src
  void add_row(std::size_t dst, std::size_t src, const mpz_class& q) {
    for (std::size_t j = 0; j < D.cols(); ++j) D(dst, j) += q * D(src, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(dst, j) += q * U(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const mpz_class& q) {
    for (std::size_t i = 0; i < D.rows(); ++i) D(i, dst) += q * D(i, src);
    for (std::size_t i = 0; i < V.rows(); ++i) V(i, dst) += q * V(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < D.cols(); ++j) D(r, j) = -D(r, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(r, j) = -U(r, j);
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  SmithWork w{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  IntMatrix& D = w.D;
  const std::size_t r = m.rows(), c = m.cols();
  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    for (;;) {
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (D(i, j) != 0 && (pi == r || mpz_cmpabs(D(i, j).get_mpz_t(), D(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == r) return {std::move(w.U), std::move(w.D), std::move(w.V)};
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (D(i, t) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_row(i, t, -q);
        clean = clean && D(i, t) == 0;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (D(t, j) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_col(j, t, -q);
        clean = clean && D(t, j) == 0;
      }
      if (!clean) continue;
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == r) break;
      w.add_row(t, bad, 1);
    }
    if (D(t, t) < 0) w.negate_row(t);
  }
  return {std::move(w.U), std::move(w.D), std::move(w.V)};
}

std::string KGroups::k0_string() const {
  std::string s;
  for (const auto& d : torsion) s += (s.empty() ? "" : " ⊕ ") + ("ℤ/" + d.get_str());
  for (std::size_t i = 0; i < free_rank; ++i) s += s.empty() ? "ℤ" : " ⊕ ℤ";
  return s.empty() ? "0" : s;
}

std::string KGroups::k1_string() const {
  if (k1_rank == 0) return "0";
  return k1_rank == 1 ? "ℤ" : "ℤ^" + std::to_string(k1_rank);
}

nlohmann::json KGroups::to_json() const {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& d : torsion) t.push_back(json_int(d));
  nlohmann::json j = {{"k0", {{"torsion", t}, {"free_rank", free_rank}, {"text", k0_string()}}},
                      {"k1", {{"free_rank", k1_rank}, {"text", k1_string()}}}};
  if (!generator_note.empty()) j["generator_note"] = generator_note;
  j["unit_generates"] = unit_generates;
  return j;
}

KGroups kgroups_from_incidence(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::NotSquare, "incidence matrix must be square");
  const std::size_t n = a.rows();
  KGroups k;
  if (n == 0) return k;
  SmithDecomposition s = smith_normal_form(IntMatrix::identity(n) - a);
  for (const auto& d : s.diagonal()) {
    if (d == 0)
      ++k.free_rank;
    else if (d > 1)
      k.torsion.push_back(d);
  }
  k.k1_rank = k.free_rank;

  // the unit is the all-ones vector in coker(I - A^T), where the transfer operator acts
  SmithDecomposition st = smith_normal_form(IntMatrix::identity(n) - a.transpose());
  std::vector<std::string> coords;
  std::vector<std::pair<mpz_class, mpz_class>> unit;  // (coordinate, modulus) over nontrivial factors
  bool zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    const mpz_class& d = st.D(i, i);
    if (d == 1) continue;
    mpz_class x = 0;
    for (std::size_t j = 0; j < n; ++j) x += st.U(i, j);
    if (d != 0) x = ((x % d) + d) % d;
    zero = zero && x == 0;
    unit.emplace_back(x, d);
    coords.push_back(x.get_str() + (d == 0 ? " in Z" : " mod " + d.get_str()));
  }
  if (unit.size() <= 1) {
    if (unit.empty()) {
      k.unit_generates = true;
    } else {
      const auto& [x, d] = unit[0];
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
      k.unit_generates = d == 0 ? abs(x) == 1 : g == 1;
    }
  }
  if (coords.empty()) {
    k.generator_note = "K0 trivial";
  } else if (zero) {
    k.generator_note = "class of 1 is 0";
  } else {
    std::string s;
    for (const auto& c : coords) s += (s.empty() ? "" : ", ") + c;
    k.generator_note = "class of 1: (" + s + ")";
  }
  return k;
}

nlohmann::json DimensionTriple::to_json() const {
  return {{"group", "ℤ^" + std::to_string(size)},
          {"order_unit", "all-ones vector (class of I(0,1))"},
          {"det", json_int(det)},
          {"char_poly", char_poly.to_string()},
          {"limit_rank", limit_rank},
          {"annotation", annotation}};
}

DimensionTriple stationary_dimension_triple(const IntMatrix& a) {
  if (!a.square()) fail(ErrorKind::NotSquare, "incidence matrix must be square");
  DimensionTriple t;
  t.size = a.rows();
  t.det = determinant(a);
  t.char_poly = characteristic_polynomial(a);
  std::size_t zeros = 0;
  while (static_cast<int>(zeros) < t.char_poly.degree() && t.char_poly.coeff(static_cast<int>(zeros)) == 0) ++zeros;
  t.limit_rank = t.size - zeros;

  if (t.limit_rank == 0) {
    t.annotation = "0 (A is nilpotent)";
  } else if (t.limit_rank == 1) {
    // the nonzero part of the char poly is t - n
    mpz_class n = -t.char_poly.coeff(static_cast<int>(zeros));
    const mpz_class m = abs(n);
    t.annotation = (m == 1 ? std::string("ℤ") : "ℤ[1/" + m.get_str() + "]") + ", automorphism ×" + n.get_str();
  } else if (abs(t.det) == 1) {
    t.annotation = "ℤ^" + std::to_string(t.size) + ", automorphism A";
  } else {
    t.annotation = "inductive limit of ℤ^" + std::to_string(t.size) + " under A, rank " + std::to_string(t.limit_rank);
  }
  return t;
}

nlohmann::json to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(json_int(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace imapk
