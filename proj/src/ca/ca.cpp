#include "narrascope/ca/ca.hpp"

#include <algorithm>
#include <cmath>

#include "narrascope/error.hpp"

namespace narrascope::ca {
namespace {

constexpr double kZeroNorm = 1e-12;
// Column coordinates within this relative distance of the largest
// magnitude count as tied for the sign convention.
constexpr double kSignTieTol = 1e-9;

void apply_sign_convention(Svd& svd, std::size_t dims) {
  for (std::size_t k = 0; k < dims; ++k) {
    double largest = 0.0;
    for (std::size_t j = 0; j < svd.v.rows(); ++j) {
      largest = std::max(largest, std::abs(svd.v(j, k)));
    }
    if (largest == 0.0) continue;
    std::size_t pick = 0;
    for (std::size_t j = 0; j < svd.v.rows(); ++j) {
      if (std::abs(svd.v(j, k)) >= largest * (1.0 - kSignTieTol)) {
        pick = j;
        break;
      }
    }
    if (svd.v(pick, k) < 0.0) {
      for (std::size_t i = 0; i < svd.u.rows(); ++i) svd.u(i, k) = -svd.u(i, k);
      for (std::size_t j = 0; j < svd.v.rows(); ++j) svd.v(j, k) = -svd.v(j, k);
    }
  }
}

}  // namespace

std::string_view to_string(CoordinateMode mode) {
  return mode == CoordinateMode::kPrincipal ? "principal" : "singular_vectors";
}

std::optional<CoordinateMode> parse_coordinate_mode(std::string_view name) {
  if (name == "singular_vectors") return CoordinateMode::kSingularVectors;
  if (name == "principal") return CoordinateMode::kPrincipal;
  return std::nullopt;
}

ResidualMatrix residual_matrix(const cooccur::ContingencyTable& table,
                               const simd::KernelTable& kernels) {
  const std::size_t rows = table.rows();
  const std::size_t cols = table.cols();
  if (rows == 0 || cols == 0 || table.grand_total() <= 0) {
    throw Error(ErrorKind::kDegenerateTable, "contingency table is empty");
  }
  std::vector<double> row_totals;
  std::vector<double> col_totals;
  for (std::int64_t t : table.row_totals()) {
    row_totals.push_back(static_cast<double>(t));
  }
  for (std::int64_t t : table.col_totals()) {
    col_totals.push_back(static_cast<double>(t));
  }
  const bool zero_margin =
      std::any_of(row_totals.begin(), row_totals.end(),
                  [](double t) { return t <= 0.0; }) ||
      std::any_of(col_totals.begin(), col_totals.end(),
                  [](double t) { return t <= 0.0; });
  if (zero_margin) {
    throw Error(ErrorKind::kDegenerateTable, "table has a zero margin");
  }
  const double grand = static_cast<double>(table.grand_total());
  std::vector<double> counts;
  counts.reserve(rows * cols);
  for (std::int64_t c : table.counts()) counts.push_back(static_cast<double>(c));

  ResidualMatrix out;
  out.values = Matrix(rows, cols);
  out.expected = Matrix(rows, cols);
  kernels.residuals(counts, row_totals, col_totals, grand, out.expected.data(),
                    out.values.data());
  out.chi_square = 0.0;
  for (double v : out.values.data()) out.chi_square += v * v;
  out.grand_total = grand;
  for (double t : row_totals) out.row_mass.push_back(t / grand);
  for (double t : col_totals) out.col_mass.push_back(t / grand);
  return out;
}

CAResult decompose(const ResidualMatrix& residuals, std::size_t dims,
                   CoordinateMode mode, const simd::KernelTable& kernels) {
  const std::size_t rows = residuals.values.rows();
  const std::size_t cols = residuals.values.cols();
  const std::size_t rank_bound = std::min(rows, cols);
  if (dims < 1 || dims > rank_bound) {
    throw Error(ErrorKind::kInvalidArgument,
                "dims must be between 1 and " + std::to_string(rank_bound));
  }
  Svd svd = jacobi_svd(residuals.values, kernels);
  apply_sign_convention(svd, dims);

  CAResult out;
  out.residuals = residuals;
  out.coordinate_mode = mode;
  out.singular_values = svd.singular_values;

  double total = 0.0;
  for (double s : svd.singular_values) total += s * s;
  for (double s : svd.singular_values) {
    out.inertia_share.push_back(total > 0.0 ? s * s / total : 0.0);
  }

  out.row_coords = Matrix(rows, dims);
  out.col_coords = Matrix(cols, dims);
  const double sqrt_n = std::sqrt(residuals.grand_total);
  for (std::size_t k = 0; k < dims; ++k) {
    // Singular value of the correspondence matrix P - rc^T scaled by
    // D_r^-1/2 and D_c^-1/2, i.e. the residual singular value over sqrt(n).
    const double inertia_sv =
        sqrt_n > 0.0 ? svd.singular_values[k] / sqrt_n : 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double x = svd.u(i, k);
      if (mode == CoordinateMode::kPrincipal) {
        x *= inertia_sv / std::sqrt(residuals.row_mass[i]);
      }
      out.row_coords(i, k) = x;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double y = svd.v(j, k);
      if (mode == CoordinateMode::kPrincipal) {
        y *= inertia_sv / std::sqrt(residuals.col_mass[j]);
      }
      out.col_coords(j, k) = y;
    }
  }
  return out;
}

double norm(std::span<const double> point) {
  double sum = 0.0;
  for (double x : point) sum += x * x;
  return std::sqrt(sum);
}

double association_cosine(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "points differ in dimension");
  }
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kZeroNorm || nb < kZeroNorm) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

double narrative_score(std::span<const double> verb_point,
                       std::span<const double> noun_point,
                       double plot_radius) {
  if (plot_radius <= 0.0) return 0.0;
  const double cosine = association_cosine(verb_point, noun_point);
  const double radial =
      std::sqrt(norm(verb_point) * norm(noun_point)) / plot_radius;
  return std::clamp(std::max(0.0, cosine) * radial, 0.0, 1.0);
}

}  // namespace narrascope::ca
