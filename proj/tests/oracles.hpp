#pragma once

// Independent reference computations used to check the library. Nothing here
// calls into crnlap numerics: reachability is brute force, ranks come from a
// hand-rolled fraction elimination, spectra from the exact characteristic
// polynomial.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using QMatrix = std::vector<std::vector<Q>>;
using Arcs = std::vector<std::pair<std::size_t, std::size_t>>;

// reach[i][j] == true iff j is reachable from i (i reaches itself).
inline std::vector<std::vector<bool>> closure(std::size_t n, const Arcs& arcs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : arcs) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

inline std::vector<std::vector<std::size_t>> strong_components(std::size_t n, const Arcs& arcs) {
  const auto r = closure(n, arcs);
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j] && r[j][i]) {
        comp.push_back(j);
        seen[j] = true;
      }
    out.push_back(comp);
  }
  return out;
}

inline std::vector<std::vector<std::size_t>> weak_components(std::size_t n, const Arcs& arcs) {
  Arcs both = arcs;
  for (auto [a, b] : arcs) both.emplace_back(b, a);
  return strong_components(n, both);
}

struct Reach {
  std::vector<std::size_t> members;
  std::vector<std::size_t> cabal;
};

// A reach is the set reachable from a strong component that nothing outside
// it can reach; that component is the cabal. Ordered by minimum member.
inline std::vector<Reach> reaches(std::size_t n, const Arcs& arcs) {
  const auto r = closure(n, arcs);
  std::vector<Reach> out;
  for (const auto& comp : strong_components(n, arcs)) {
    const std::size_t head = comp.front();
    bool source = true;
    for (std::size_t j = 0; j < n; ++j)
      if (r[j][head] && !r[head][j]) source = false;
    if (!source) continue;
    Reach reach;
    reach.cabal = comp;
    for (std::size_t j = 0; j < n; ++j)
      if (r[head][j]) reach.members.push_back(j);
    out.push_back(reach);
  }
  std::sort(out.begin(), out.end(),
            [](const Reach& a, const Reach& b) { return a.members.front() < b.members.front(); });
  return out;
}

inline QMatrix to_q(const Eigen::MatrixXd& m) {
  QMatrix out(static_cast<std::size_t>(m.rows()), std::vector<Q>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double x = m(i, j);
      // Entries used with the oracle are integers or simple dyadic/decimal
      // rationals; round to 1e-9 and keep the fraction exact.
      const long long scaled = std::llround(x * 1e9);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Q(scaled, 1000000000LL);
    }
  return out;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    const Q inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Q f = a[i][col];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(QMatrix a) { return rref(a).size(); }

inline std::size_t rank(const Eigen::MatrixXd& m) { return rank(to_q(m)); }

// Exact nullspace basis, one vector per free column.
inline std::vector<std::vector<Q>> nullspace(QMatrix a, std::size_t cols) {
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Q>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Q> v(cols, Q(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    out.push_back(v);
  }
  return out;
}

inline QMatrix mul(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = b.empty() ? 0 : b.front().size();
  QMatrix out(n, std::vector<Q>(m, Q(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

// Coefficients c_0..c_n of det(lambda I - M) = sum_i c_i lambda^i by
// Faddeev-LeVerrier in exact arithmetic.
inline std::vector<Q> characteristic_polynomial(const QMatrix& m) {
  const std::size_t n = m.size();
  std::vector<Q> c(n + 1, Q(0));
  c[n] = 1;
  QMatrix mk(n, std::vector<Q>(n, Q(0)));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = M M_{k-1} + c_{n-k+1} I
    QMatrix next = mul(m, mk);
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = next;
    const QMatrix am = mul(m, mk);
    Q trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am[i][i];
    c[n - k] = -trace / static_cast<long long>(k);
  }
  return c;
}

// Routh-Hurwitz: true iff every root of sum_i c_i lambda^i (c_n != 0) has
// strictly negative real part. Zeros in the first column count as failure.
inline bool hurwitz_stable(std::vector<Q> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.size() <= 1) return true;
  const std::size_t n = c.size() - 1;
  std::vector<Q> hi(c.rbegin(), c.rend());  // descending powers
  std::vector<Q> r0, r1;
  for (std::size_t i = 0; i <= n; i += 2) r0.push_back(hi[i]);
  for (std::size_t i = 1; i <= n; i += 2) r1.push_back(hi[i]);
  const bool positive = r0.front() > 0;
  auto same_sign = [positive](const Q& x) { return positive ? x > 0 : x < 0; };
  if (!same_sign(r0.front())) return false;
  for (std::size_t step = 0; step < n; ++step) {
    if (r1.empty() || !same_sign(r1.front())) return false;
    std::vector<Q> r2;
    for (std::size_t j = 0; j + 1 < r0.size(); ++j) {
      const Q below = j + 1 < r1.size() ? r1[j + 1] : Q(0);
      r2.push_back((r1.front() * r0[j + 1] - r0.front() * below) / r1.front());
    }
    r0 = std::move(r1);
    r1 = std::move(r2);
    if (step + 1 == n) break;
  }
  return true;
}

// Multiplicity of the root 0 of M's characteristic polynomial, and whether
// all remaining roots have negative real part.
inline std::pair<std::size_t, bool> zero_root_profile(const Eigen::MatrixXd& m) {
  auto c = characteristic_polynomial(to_q(m));
  std::size_t k = 0;
  while (k < c.size() && c[k] == 0) ++k;
  std::vector<Q> rest(c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
  return {k, hurwitz_stable(rest)};
}

// Logistic x' = k1 x - k2 x^2 from x0.
inline double logistic(double k1, double k2, double x0, double t) {
  const double cap = k1 / k2;
  const double e = std::exp(k1 * t);
  return cap * x0 * e / (cap + x0 * (e - 1.0));
}

}  // namespace oracle
