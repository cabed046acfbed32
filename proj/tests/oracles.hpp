#pragma once
// Reference implementations used only by the tests. They go through the
// 1-based value() accessor and plain loops, never through the library kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "mteq/linalg.hpp"
#include "mteq/problems.hpp"
#include "mteq/tensor.hpp"

namespace oracle {

// Advances a 1-based odometer over {1..n}^k starting at `first`. Returns false after the last.
inline bool next_index(std::vector<int>& idx, int n, std::size_t first = 0) {
  for (std::size_t p = idx.size(); p-- > first;) {
    if (idx[p] < n) {
      ++idx[p];
      return true;
    }
    idx[p] = 1;
  }
  return false;
}

// (A x^{m-1})_i = sum over i2..im of a_{i i2..im} x_{i2}...x_{im}
inline std::vector<double> contract(const mteq::DenseTensor& A, const std::vector<double>& x) {
  const int m = A.order(), n = A.dim();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(m), 1);
    idx[0] = i;
    do {
      double term = A.value(idx);
      for (int p = 1; p < m; ++p) term *= x[static_cast<std::size_t>(idx[p] - 1)];
      out[static_cast<std::size_t>(i - 1)] += term;
    } while (next_index(idx, n, 1));
  }
  return out;
}

// (A x^{m-2})_{ij} = sum over i3..im of a_{i j i3..im} x_{i3}...x_{im}
inline mteq::DenseMatrix contract2(const mteq::DenseTensor& A, const std::vector<double>& x) {
  const int m = A.order(), n = A.dim();
  mteq::DenseMatrix out(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      std::vector<int> idx(static_cast<std::size_t>(m), 1);
      idx[0] = i;
      idx[1] = j;
      double s = 0.0;
      do {
        double term = A.value(idx);
        for (int p = 2; p < m; ++p) term *= x[static_cast<std::size_t>(idx[p] - 1)];
        s += term;
      } while (next_index(idx, n, 2));
      out(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = s;
    }
  }
  return out;
}

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Central differences, step h_j = rel_step * (1 + |p_j|).
inline mteq::DenseMatrix fd_jacobian(const VecFn& F, const std::vector<double>& p,
                                     double rel_step = 1e-6) {
  const std::size_t n = p.size();
  mteq::DenseMatrix J(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = rel_step * (1.0 + std::abs(p[j]));
    auto lo = p, hi = p;
    lo[j] -= h;
    hi[j] += h;
    const auto Fl = F(lo), Fh = F(hi);
    for (std::size_t i = 0; i < n; ++i) J(i, j) = (Fh[i] - Fl[i]) / (2.0 * h);
  }
  return J;
}

// max |A - B| / max(max |B|, floor)
inline double rel_diff(const mteq::DenseMatrix& A, const mteq::DenseMatrix& B,
                       double floor = 1e-300) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < A.dim(); ++j) {
      d = std::max(d, std::abs(A(i, j) - B(i, j)));
      s = std::max(s, std::abs(B(i, j)));
    }
  return d / std::max(s, floor);
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b,
                       double floor = 1e-300) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return d / std::max(s, floor);
}

// ||a - b|| / (1 + ||rhs||), the scale used for the Euler identities.
inline double identity_error(const std::vector<double>& a, const std::vector<double>& b,
                             const std::vector<double>& rhs) {
  double d = 0.0, r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  for (double v : rhs) r += v * v;
  return std::sqrt(d) / (1.0 + std::sqrt(r));
}

// Direct check of: a_{i i2..im} = 0 for i in I whenever all of i2..im lie outside I.
inline bool reducible(const mteq::DenseTensor& A, const std::vector<std::size_t>& I) {
  const int m = A.order(), n = A.dim();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (auto i : I) in[i] = true;
  for (auto i : I) {
    std::vector<int> idx(static_cast<std::size_t>(m), 1);
    idx[0] = static_cast<int>(i) + 1;
    do {
      bool outside = true;
      for (int p = 1; p < m && outside; ++p) outside = !in[static_cast<std::size_t>(idx[p] - 1)];
      if (outside && A.value(idx) != 0.0) return false;
    } while (next_index(idx, n, 1));
  }
  return true;
}

// Largest subset of `zeros` w.r.t. which A is reducible, by enumerating all subsets.
inline std::vector<std::size_t> maximal_reducible_subset(const mteq::DenseTensor& A,
                                                         const std::vector<std::size_t>& zeros) {
  std::vector<std::size_t> best;
  const std::size_t k = zeros.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t b = 0; b < k; ++b)
      if (mask >> b & 1U) S.push_back(zeros[b]);
    if (S.size() > best.size() && reducible(A, S)) best = S;
  }
  std::sort(best.begin(), best.end());
  return best;
}

inline mteq::DenseTensor random_tensor(int m, int n, mteq::RngStream& rng, double lo = -1.0,
                                       double hi = 1.0) {
  mteq::DenseTensor A(m, n);
  for (double& v : A.mutable_data()) v = lo + (hi - lo) * rng.uniform01();
  return A;
}

inline std::vector<double> random_vector(std::size_t n, mteq::RngStream& rng, double lo,
                                         double hi) {
  std::vector<double> v(n);
  for (double& e : v) e = lo + (hi - lo) * rng.uniform01();
  return v;
}

}  // namespace oracle
