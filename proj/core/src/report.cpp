#include "gstk/report.hpp"

#include <cmath>

#include <json.hpp>

#include "gstk/error.hpp"

namespace gstk {

using nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json summary_json(const ResponseSummary& s) {
  return {{"mean_abs", s.mean_abs},
          {"stddev_abs", s.stddev_abs},
          {"edge_density", s.edge_density},
          {"histogram", s.histogram}};
}

}  // namespace

std::string oif_json(const std::vector<OifScore>& ranking, const std::vector<std::string>& band_names) {
  ordered_json rows = ordered_json::array();
  for (const auto& s : ranking) {
    ordered_json names = ordered_json::array();
    for (int b : s.bands)
      names.push_back(std::size_t(b) <= band_names.size() ? band_names[std::size_t(b) - 1]
                                                          : "band" + std::to_string(b));
    ordered_json row{{"bands", s.bands}, {"names", names}};
    if (std::isinf(s.score)) {
      row["score"] = nullptr;
      row["unbounded"] = true;
    } else {
      row["score"] = s.score;
      row["unbounded"] = false;
    }
    rows.push_back(std::move(row));
  }
  return dump({{"kind", "oif_ranking"}, {"triples", std::move(rows)}});
}

std::string confusion_json(const ConfusionMatrix& cm, const std::vector<std::string>& class_names) {
  ordered_json labels = ordered_json::array({"unclassified"});
  for (int k = 1; k <= cm.classes(); ++k)
    labels.push_back(std::size_t(k) <= class_names.size() ? class_names[std::size_t(k) - 1]
                                                          : "class" + std::to_string(k));
  ordered_json counts = ordered_json::array();
  for (int t = 1; t <= cm.classes(); ++t) {
    ordered_json row = ordered_json::array();
    for (int p = 0; p <= cm.classes(); ++p) row.push_back(cm.count(t, p));
    counts.push_back(std::move(row));
  }
  return dump({{"kind", "confusion_matrix"},
               {"labels", std::move(labels)},
               {"counts", std::move(counts)},
               {"total", cm.total()},
               {"correct", cm.correct()},
               {"overall_accuracy", cm.overall_accuracy()}});
}

std::string class_specs_json(const std::vector<ClassSpec>& specs) {
  ordered_json classes = ordered_json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ordered_json bounds = ordered_json::array();
    for (const auto& iv : specs[i].bounds) bounds.push_back({iv.lo, iv.hi});
    classes.push_back({{"label", i + 1}, {"name", specs[i].name}, {"bounds", std::move(bounds)}});
  }
  return dump({{"kind", "parallelepiped_classes"}, {"classes", std::move(classes)}});
}

std::string comparison_json(const std::vector<NamedComparison>& comparisons) {
  ordered_json items = ordered_json::array();
  for (const auto& c : comparisons) {
    const auto& r = c.report;
    ordered_json item{{"label", c.label},
                      {"threshold", r.threshold},
                      {"bin_edges", r.bin_edges},
                      {"a", summary_json(r.a)},
                      {"b", summary_json(r.b)}};
    if (r.abs_correlation)
      item["abs_correlation"] = *r.abs_correlation;
    else
      item["abs_correlation"] = nullptr;
    item["sign_agreement"] = r.sign_agreement;
    items.push_back(std::move(item));
  }
  return dump({{"kind", "response_comparison"}, {"comparisons", std::move(items)}});
}

std::vector<Roi> parse_rois(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Roi> out;
    for (const auto& c : j.at("classes")) {
      Roi roi;
      roi.name = c.at("name").get<std::string>();
      for (const auto& run : c.value("runs", nlohmann::json::array())) {
        const int row = run.at("row").get<int>();
        const int col = run.at("col").get<int>();
        const int len = run.value("length", 1);
        if (len < 1) throw FormatError("rois: run length must be positive");
        for (int k = 0; k < len; ++k) roi.pixels.push_back({row, col + k});
      }
      for (const auto& p : c.value("pixels", nlohmann::json::array())) {
        if (!p.is_array() || p.size() != 2) throw FormatError("rois: pixels must be [row, col] pairs");
        roi.pixels.push_back({p[0].get<int>(), p[1].get<int>()});
      }
      out.push_back(std::move(roi));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("rois: ") + e.what());
  }
}

std::string rois_json(const std::vector<Roi>& rois) {
  ordered_json classes = ordered_json::array();
  for (const auto& roi : rois) {
    // Collapse horizontally adjacent pixels into runs.
    ordered_json runs = ordered_json::array();
    std::size_t i = 0;
    while (i < roi.pixels.size()) {
      std::size_t j = i + 1;
      while (j < roi.pixels.size() && roi.pixels[j].row == roi.pixels[i].row &&
             roi.pixels[j].col == roi.pixels[j - 1].col + 1)
        ++j;
      runs.push_back({{"row", roi.pixels[i].row}, {"col", roi.pixels[i].col}, {"length", j - i}});
      i = j;
    }
    classes.push_back({{"name", roi.name}, {"runs", std::move(runs)}});
  }
  return dump({{"classes", std::move(classes)}});
}

}  // namespace gstk
