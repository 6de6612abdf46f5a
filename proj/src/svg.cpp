#include "repsep/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace repsep::svg {
namespace {

std::string fixed(double v, int digits = 2) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// White to dark blue.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [t](int from, int to) { return static_cast<int>(std::lround(from + (to - from) * t)); };
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", mix(255, 8), mix(255, 48), mix(255, 107));
  return buf.data();
}

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string roc_path(const std::vector<RocPoint>& pts, double x0, double y0, double size) {
  std::ostringstream d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    d << (i ? " L" : "M") << fixed(x0 + pts[i].fpr * size) << ',' << fixed(y0 + size - pts[i].tpr * size);
  return d.str();
}

void roc_axes(std::ostringstream& out, double x0, double y0, double size) {
  out << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y0) << "\" width=\"" << fixed(size) << "\" height=\""
      << fixed(size) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  out << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0 + size) << "\" x2=\"" << fixed(x0 + size) << "\" y2=\""
      << fixed(y0) << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  out << "<text x=\"" << fixed(x0 + size / 2) << "\" y=\"" << fixed(y0 + size + 32)
      << "\" text-anchor=\"middle\" font-size=\"12\">False positive rate</text>\n";
  out << "<text x=\"" << fixed(x0 - 32) << "\" y=\"" << fixed(y0 + size / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << fixed(x0 - 32) << ' '
      << fixed(y0 + size / 2) << ")\">True positive rate</text>\n";
}

}  // namespace

std::string heatmap(const SeparabilityReport& report, HeatmapValue value) {
  const auto& fams = report.families;
  const double cell = 60, left = 140, top = 50;
  const double n = static_cast<double>(fams.size());
  const auto get = [&](const FamilyPairStats& p) { return value == HeatmapValue::dprime ? p.dprime : p.silhouette; };

  double lo = 0, hi = 1;
  if (value == HeatmapValue::dprime) {
    for (const auto& p : report.pairs)
      if (std::isfinite(p.dprime)) hi = std::max(hi, p.dprime);
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(left + cell * n + 20) << "\" height=\""
      << fixed(top + cell * n + 20) << "\">\n";
  out << "<text x=\"" << fixed(left) << "\" y=\"24\" font-size=\"14\">" << escape(std::string(metric_label(report.metric)))
      << (value == HeatmapValue::dprime ? " d-prime" : " silhouette") << "</text>\n";
  for (std::size_t r = 0; r < fams.size(); ++r) {
    out << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + cell * (r + 0.5) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << escape(fams[r]) << "</text>\n";
    for (std::size_t c = 0; c < fams.size(); ++c) {
      if (r == c) continue;
      const auto& p = report.pair(fams[r], fams[c]);
      const double v = get(p);
      const double t = std::isinf(v) ? (v > 0 ? 1.0 : 0.0) : (v - lo) / (hi - lo);
      const double x = left + cell * static_cast<double>(c), y = top + cell * static_cast<double>(r);
      out << "<rect class=\"cell\" x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(cell)
          << "\" height=\"" << fixed(cell) << "\" fill=\"" << ramp(t) << "\" stroke=\"#fff\"/>\n";
      out << "<text x=\"" << fixed(x + cell / 2) << "\" y=\"" << fixed(y + cell / 2 + 4)
          << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"" << (t > 0.5 ? "#fff" : "#000") << "\">"
          << (std::isinf(v) ? (v > 0 ? "inf" : "-inf") : fixed(v)) << "</text>\n";
    }
  }
  for (std::size_t c = 0; c < fams.size(); ++c)
    out << "<text x=\"" << fixed(left + cell * (c + 0.5)) << "\" y=\"" << fixed(top + cell * n + 14)
        << "\" text-anchor=\"middle\" font-size=\"9\">" << escape(fams[c]) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string roc_curve(const SeparabilityReport& report) {
  return roc_overlay(std::span<const SeparabilityReport>(&report, 1));
}

std::string roc_overlay(std::span<const SeparabilityReport> reports) {
  const double x0 = 60, y0 = 20, size = 300;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(x0 + size + 200) << "\" height=\""
      << fixed(y0 + size + 50) << "\">\n";
  roc_axes(out, x0, y0, size);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto* color = kPalette[i % kPalette.size()];
    out << "<path class=\"roc\" d=\"" << roc_path(reports[i].roc, x0, y0, size) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    const double ly = y0 + 16 + 18 * static_cast<double>(i);
    out << "<line x1=\"" << fixed(x0 + size + 14) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << fixed(x0 + size + 34)
        << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(x0 + size + 40) << "\" y=\"" << fixed(ly) << "\" font-size=\"12\">"
        << escape(std::string(metric_label(reports[i].metric))) << " (AUC " << fixed(reports[i].global_auc, 4)
        << ")</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace repsep::svg
