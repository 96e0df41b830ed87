#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gstk/analysis.hpp"

namespace gstk {

// JSON documents written by the command-line tool. Field names are listed in
// docs/report-schemas.md; every document ends with a newline.

std::string oif_json(const std::vector<OifScore>& ranking, const std::vector<std::string>& band_names);

std::string confusion_json(const ConfusionMatrix& cm, const std::vector<std::string>& class_names);

std::string class_specs_json(const std::vector<ClassSpec>& specs);

struct NamedComparison {
  std::string label;
  ComparisonReport report;
};
std::string comparison_json(const std::vector<NamedComparison>& comparisons);

/// {"classes": [{"name": ..., "runs": [{"row": r, "col": c, "length": n}, ...],
///               "pixels": [[r, c], ...]}, ...]}; runs extend along a row and
/// both lists are optional.
std::vector<Roi> parse_rois(std::string_view json);
std::string rois_json(const std::vector<Roi>& rois);

}  // namespace gstk
