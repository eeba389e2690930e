#include "narrascope/ca/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "narrascope/error.hpp"

namespace narrascope::ca {
namespace {

constexpr double kOrthogonalityTol = 1e-15;
// Singular values below this fraction of the largest are treated as zero.
constexpr double kRankTol = 1e-12;
// Columns whose squared norm falls below this fraction of the squared
// Frobenius norm are rounding noise; rotating them never converges.
constexpr double kNegligibleColumn = 1e-28;

// Column-contiguous working copy: column j occupies [j*len, (j+1)*len).
struct Columns {
  std::size_t len = 0;
  std::size_t count = 0;
  std::vector<double> data;

  std::span<double> col(std::size_t j) { return {&data[j * len], len}; }
  std::span<const double> col(std::size_t j) const {
    return {&data[j * len], len};
  }
};

// Requires a.rows() >= a.cols().
Svd tall_svd(const Matrix& a, const simd::KernelTable& k, int max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w{m, n, std::vector<double>(m * n)};
  Columns v{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) w.data[j * m + i] = a(i, j);
    v.data[j * n + j] = 1.0;
  }

  const double negligible = kNegligibleColumn * k.dot(w.data, w.data);
  int sweep = 0;
  for (;; ++sweep) {
    if (sweep >= max_sweeps) {
      throw Error(ErrorKind::kConvergenceFailure,
                  "Jacobi SVD did not converge in " +
                      std::to_string(max_sweeps) + " sweeps");
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const simd::GramPair g = k.gram_pair(w.col(p), w.col(q));
        if (g.aa <= negligible || g.bb <= negligible) continue;
        if (std::abs(g.ab) <= kOrthogonalityTol * std::sqrt(g.aa * g.bb)) {
          continue;
        }
        rotated = true;
        const double zeta = (g.bb - g.aa) / (2.0 * g.ab);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        k.rotate(w.col(p), w.col(q), c, s);
        k.rotate(v.col(p), v.col(q), c, s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    sigma[j] = std::sqrt(k.dot(w.col(j), w.col(j)));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sigma[x] > sigma[y];
  });
  const double largest = n == 0 ? 0.0 : sigma[order.front()];

  Svd out;
  out.sweeps = sweep;
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  out.singular_values.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order[r];
    const bool zero = largest <= 0.0 || sigma[j] <= kRankTol * largest;
    out.singular_values[r] = zero ? 0.0 : sigma[j];
    if (zero) continue;
    for (std::size_t i = 0; i < m; ++i) out.u(i, r) = w.data[j * m + i] / sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, r) = v.data[j * n + i];
  }
  return out;
}

}  // namespace

Svd jacobi_svd(const Matrix& a, const simd::KernelTable& kernels,
               int max_sweeps) {
  if (a.rows() >= a.cols()) return tall_svd(a, kernels, max_sweeps);
  Svd t = tall_svd(a.transposed(), kernels, max_sweeps);
  std::swap(t.u, t.v);
  return t;
}

Matrix reconstruct(const Svd& svd) {
  const std::size_t m = svd.u.rows();
  const std::size_t n = svd.v.rows();
  Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
        sum += svd.u(i, k) * svd.singular_values[k] * svd.v(j, k);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace narrascope::ca
