#pragma once

#include <span>
#include <string>
#include <string_view>

#include "assoc/simulation.hpp"

namespace assoc {

/// Standalone SVG bar chart of histogram bins: one rect per bin with height
/// proportional to its count, an x axis with a tick at every bin edge and a
/// y axis. Output depends only on the arguments. Throws UsageError on an
/// empty bin list or a zero-size canvas.
std::string render_histogram_svg(std::span<const HistogramBin> bins, int width, int height, std::string_view title);

}  // namespace assoc
