#pragma once

#include <span>
#include <string>

#include "repsep/separability.hpp"

namespace repsep::svg {

enum class HeatmapValue { dprime, silhouette };

/// Family x family grid, one filled `class="cell"` rect per ordered pair of
/// distinct families; the diagonal is left blank.
std::string heatmap(const SeparabilityReport& report, HeatmapValue value);

/// ROC curve of the report's global within-vs-between classification.
std::string roc_curve(const SeparabilityReport& report);

/// One `class="roc"` path per report, with a legend.
std::string roc_overlay(std::span<const SeparabilityReport> reports);

}  // namespace repsep::svg
