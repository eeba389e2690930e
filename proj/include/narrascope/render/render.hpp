#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "narrascope/session/pipeline.hpp"

namespace narrascope::render {

struct BiplotStyle {
  int width = 800;
  int height = 600;
  int margin = 60;
  std::string noun_color = "#1f77b4";
  std::string verb_color = "#d62728";
  int font_size = 12;
  std::size_t x_dim = 0;
  std::size_t y_dim = 1;
};

// "Dim <k> (xx.xx%)" with k one-based and share in [0, 1].
std::string axis_label(std::size_t dim_index, double share);

std::string xml_escape(std::string_view text);

// SVG 1.1 biplot: verbs as squares, nouns as circles, origin crosshair,
// elements ordered by label. Throws Error(kInvalidArgument) when the
// snapshot has fewer dimensions than the style asks for.
std::string render_biplot(const session::AnalysisSnapshot& snapshot,
                          const BiplotStyle& style = {});

// Column-aligned table of the first top_n candidates. Throws
// Error(kInvalidArgument) when top_n is 0.
std::string render_report(const session::AnalysisSnapshot& snapshot, std::size_t top_n);

}  // namespace narrascope::render
