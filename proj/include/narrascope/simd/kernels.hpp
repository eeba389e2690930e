#pragma once

// Dense double-precision kernels behind the correspondence-analysis engine.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (currently AVX2+FMA on x86-64) are compiled into separate translation units
// with the matching target flags and are only selected after a runtime CPU
// check, so the library runs on any x86-64 or non-x86 host.
//
// Selection order: select_isa() if called, else the NARRASCOPE_SIMD
// environment variable ("scalar", "avx2", "auto"), else the best supported.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace narrascope::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

// Squared norms and inner product of two equal-length columns.
struct GramPair {
  double aa = 0.0;
  double bb = 0.0;
  double ab = 0.0;
};

struct KernelTable {
  Isa isa;

  double (*dot)(std::span<const double> a, std::span<const double> b);

  GramPair (*gram_pair)(std::span<const double> a, std::span<const double> b);

  // Plane rotation applied in place: a <- c*a - s*b, b <- s*a + c*b.
  void (*rotate)(std::span<double> a, std::span<double> b, double c, double s);

  // Independence-model residuals for a row-major rows x cols table:
  //   expected[i,j] = row_totals[i] * col_totals[j] / grand
  //   values[i,j]   = (counts[i,j] - expected[i,j]) / sqrt(expected[i,j])
  // Operation order is fixed so every variant is bit-identical here.
  void (*residuals)(std::span<const double> counts,
                    std::span<const double> row_totals,
                    std::span<const double> col_totals, double grand,
                    std::span<double> expected, std::span<double> values);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* kernels_for(Isa isa);

bool isa_supported(Isa isa);

const KernelTable& active_kernels();

// Throws narrascope::Error(kInvalidArgument) if the ISA is unsupported here.
void select_isa(Isa isa);

}  // namespace narrascope::simd
