#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "narrascope/ca/matrix.hpp"
#include "narrascope/ca/svd.hpp"
#include "narrascope/cooccur/cooccur.hpp"

namespace narrascope::ca {

// Standardized chi-square residuals under the independence model:
//   E_ij = row_total_i * col_total_j / n,  c_ij = (n_ij - E_ij) / sqrt(E_ij)
struct ResidualMatrix {
  Matrix values;
  Matrix expected;
  double chi_square = 0.0;  // sum of c_ij^2
  std::vector<double> row_mass;  // row_total_i / n
  std::vector<double> col_mass;  // col_total_j / n
  double grand_total = 0.0;

  bool operator==(const ResidualMatrix&) const = default;
};

enum class CoordinateMode {
  kSingularVectors,  // raw columns of U (rows) and V (columns)
  kPrincipal,        // scaled by inertia singular value and 1/sqrt(mass)
};

std::string_view to_string(CoordinateMode mode);
std::optional<CoordinateMode> parse_coordinate_mode(std::string_view name);

struct CAResult {
  ResidualMatrix residuals;
  // All K = min(R, C) singular values of the residual matrix, descending.
  std::vector<double> singular_values;
  Matrix row_coords;  // R x D
  Matrix col_coords;  // C x D
  // delta_k^2 / sum(delta^2) for every k; all zeros when chi_square is 0.
  std::vector<double> inertia_share;
  CoordinateMode coordinate_mode = CoordinateMode::kSingularVectors;

  std::size_t dims() const { return row_coords.cols(); }

  bool operator==(const CAResult&) const = default;
};

// Throws Error(kDegenerateTable) on an empty table or a zero margin.
ResidualMatrix residual_matrix(
    const cooccur::ContingencyTable& table,
    const simd::KernelTable& kernels = simd::active_kernels());

// SVD of the residuals, D = dims retained coordinates. For every retained
// dimension the largest-magnitude column coordinate is made positive
// (near-ties resolve to the lowest index). Throws Error(kInvalidArgument)
// unless 1 <= dims <= min(R, C); Error(kConvergenceFailure) propagates.
CAResult decompose(const ResidualMatrix& residuals, std::size_t dims,
                   CoordinateMode mode = CoordinateMode::kSingularVectors,
                   const simd::KernelTable& kernels = simd::active_kernels());

double norm(std::span<const double> point);

// Cosine of the angle between two coordinate vectors; 0 when either norm
// is below 1e-12.
double association_cosine(std::span<const double> a, std::span<const double> b);

// max(0, cos) * sqrt(|verb| * |noun|) / plot_radius, in [0, 1] when
// plot_radius is the largest point norm of the plot. 0 if plot_radius <= 0.
double narrative_score(std::span<const double> verb_point,
                       std::span<const double> noun_point, double plot_radius);

}  // namespace narrascope::ca
