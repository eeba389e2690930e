// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.
#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace narrascope::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

double horizontal_sum(__m256d v) {
  const __m128d low = _mm256_castpd256_pd128(v);
  const __m128d high = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(low, high);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc);
  }
  double sum = horizontal_sum(acc);
  for (std::size_t i = body; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

GramPair gram_pair_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % kLanes;
  __m256d aa = _mm256_setzero_pd();
  __m256d bb = _mm256_setzero_pd();
  __m256d ab = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(&a[i]);
    const __m256d y = _mm256_loadu_pd(&b[i]);
    aa = _mm256_fmadd_pd(x, x, aa);
    bb = _mm256_fmadd_pd(y, y, bb);
    ab = _mm256_fmadd_pd(x, y, ab);
  }
  GramPair g{horizontal_sum(aa), horizontal_sum(bb), horizontal_sum(ab)};
  for (std::size_t i = body; i < n; ++i) {
    g.aa += a[i] * a[i];
    g.bb += b[i] * b[i];
    g.ab += a[i] * b[i];
  }
  return g;
}

void rotate_avx2(std::span<double> a, std::span<double> b, double c,
                 double s) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % kLanes;
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(&a[i]);
    const __m256d y = _mm256_loadu_pd(&b[i]);
    _mm256_storeu_pd(&a[i], _mm256_fmsub_pd(vc, x, _mm256_mul_pd(vs, y)));
    _mm256_storeu_pd(&b[i], _mm256_fmadd_pd(vs, x, _mm256_mul_pd(vc, y)));
  }
  for (std::size_t i = body; i < n; ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

void residuals_avx2(std::span<const double> counts,
                    std::span<const double> row_totals,
                    std::span<const double> col_totals, double grand,
                    std::span<double> expected, std::span<double> values) {
  const std::size_t cols = col_totals.size();
  const std::size_t body = cols - cols % kLanes;
  const __m256d vgrand = _mm256_set1_pd(grand);
  for (std::size_t i = 0; i < row_totals.size(); ++i) {
    const __m256d vrow = _mm256_set1_pd(row_totals[i]);
    const std::size_t base = i * cols;
    for (std::size_t j = 0; j < body; j += kLanes) {
      const __m256d e = _mm256_div_pd(
          _mm256_mul_pd(vrow, _mm256_loadu_pd(&col_totals[j])), vgrand);
      const __m256d n = _mm256_loadu_pd(&counts[base + j]);
      _mm256_storeu_pd(&expected[base + j], e);
      _mm256_storeu_pd(&values[base + j],
                       _mm256_div_pd(_mm256_sub_pd(n, e), _mm256_sqrt_pd(e)));
    }
    for (std::size_t j = body; j < cols; ++j) {
      const double e = row_totals[i] * col_totals[j] / grand;
      expected[base + j] = e;
      values[base + j] = (counts[base + j] - e) / std::sqrt(e);
    }
  }
}

constexpr KernelTable kAvx2{
    Isa::kAvx2, &dot_avx2, &gram_pair_avx2, &rotate_avx2, &residuals_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace narrascope::simd::detail
