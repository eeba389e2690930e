#include <cmath>

#include "kernels_internal.hpp"

namespace narrascope::simd::detail {
namespace {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

GramPair gram_pair_scalar(std::span<const double> a,
                          std::span<const double> b) {
  GramPair g;
  for (std::size_t i = 0; i < a.size(); ++i) {
    g.aa += a[i] * a[i];
    g.bb += b[i] * b[i];
    g.ab += a[i] * b[i];
  }
  return g;
}

void rotate_scalar(std::span<double> a, std::span<double> b, double c,
                   double s) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

void residuals_scalar(std::span<const double> counts,
                      std::span<const double> row_totals,
                      std::span<const double> col_totals, double grand,
                      std::span<double> expected, std::span<double> values) {
  const std::size_t cols = col_totals.size();
  for (std::size_t i = 0; i < row_totals.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t k = i * cols + j;
      const double e = row_totals[i] * col_totals[j] / grand;
      expected[k] = e;
      values[k] = (counts[k] - e) / std::sqrt(e);
    }
  }
}

constexpr KernelTable kScalar{
    Isa::kScalar, &dot_scalar, &gram_pair_scalar, &rotate_scalar,
    &residuals_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace narrascope::simd::detail
