#pragma once

#include <vector>

#include "narrascope/ca/matrix.hpp"
#include "narrascope/simd/kernels.hpp"

namespace narrascope::ca {

// Thin SVD  A = U * diag(singular_values) * V^T  with K = min(rows, cols):
// U is rows x K, V is cols x K, singular values descending. Columns whose
// singular value is numerically zero are returned as zero vectors.
struct Svd {
  std::vector<double> singular_values;
  Matrix u;
  Matrix v;
  int sweeps = 0;
};

// One-sided (Hestenes) Jacobi. Throws Error(kConvergenceFailure) if the
// sweep limit is reached; never returns a partial result.
Svd jacobi_svd(const Matrix& a,
               const simd::KernelTable& kernels = simd::active_kernels(),
               int max_sweeps = 60);

// U * diag(s) * V^T
Matrix reconstruct(const Svd& svd);

}  // namespace narrascope::ca
