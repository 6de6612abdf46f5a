#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "repsep/separability.hpp"

namespace repsep {

// JSON layout:
//   {"metric", "families", "pairs": [{"a", "b", "dprime", "silhouette", "auc", "flags"}],
//    "global_auc", "roc": [[fpr, tpr], ...], "summary": {...}}
// Infinite d' values are written as the strings "inf" / "-inf".
std::string report_to_json(const SeparabilityReport& report);
SeparabilityReport report_from_json(std::string_view text);
std::string report_to_csv(const SeparabilityReport& report);

/// JSON string literal with escapes.
std::string json_quote(std::string_view s);

}  // namespace repsep
