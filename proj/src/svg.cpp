#include "assoc/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "assoc/error.hpp"

namespace assoc {

namespace {

std::string num(double x, int decimals = 2) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, decimals);
  return std::string(buf.data(), ptr);
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_histogram_svg(std::span<const HistogramBin> bins, int width, int height, std::string_view title) {
  if (bins.empty()) throw UsageError("histogram SVG needs at least one bin");
  if (width <= 0 || height <= 0) throw UsageError("histogram SVG canvas must have positive width and height");

  const double w = width;
  const double h = height;
  const double left = 0.12 * w;
  const double right = w - 0.04 * w;
  const double top = 0.12 * h;
  const double bottom = h - 0.14 * h;
  const double plot_w = right - left;
  const double plot_h = bottom - top;

  std::uint64_t peak = 0;
  for (const auto& b : bins) peak = std::max(peak, b.count);
  const double lo = bins.front().start;
  const double hi = bins.back().end;
  const double span = hi > lo ? hi - lo : 1.0;
  const auto x_of = [&](double v) { return left + (v - lo) / span * plot_w; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(w / 2) + "\" y=\"" + num(top / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + escape_xml(title) + "</text>\n";

  svg += "<g class=\"bars\" fill=\"#9ab\" stroke=\"#345\" stroke-width=\"0.5\">\n";
  for (const auto& b : bins) {
    const double bar_h = peak == 0 ? 0.0 : plot_h * static_cast<double>(b.count) / static_cast<double>(peak);
    const double x0 = x_of(b.start);
    const double x1 = x_of(b.end);
    svg += "<rect x=\"" + num(x0) + "\" y=\"" + num(bottom - bar_h) + "\" width=\"" + num(x1 - x0) +
           "\" height=\"" + num(bar_h) + "\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) + "\" y2=\"" + num(bottom) +
         "\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top) +
         "\"/>\n";
  std::vector<double> edges;
  edges.reserve(bins.size() + 1);
  for (const auto& b : bins) edges.push_back(b.start);
  edges.push_back(bins.back().end);
  for (double e : edges) {
    const double x = x_of(e);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(x) + "\" y2=\"" + num(bottom + 5) +
           "\"/>\n";
  }
  svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top) +
         "\"/>\n";
  svg += "</g>\n";

  svg += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">\n";
  for (double e : edges) {
    svg += "<text x=\"" + num(x_of(e)) + "\" y=\"" + num(bottom + 16) + "\">" + num(e, 3) + "</text>\n";
  }
  svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(bottom + 3) + "\" text-anchor=\"end\">0</text>\n";
  svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(top + 3) + "\" text-anchor=\"end\">" + std::to_string(peak) +
         "</text>\n";
  svg += "</g>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace assoc
