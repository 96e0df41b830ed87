#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gstk/raster.hpp"

namespace gstk {

// ---- statistics ------------------------------------------------------------

struct BandStats {
  double mean = 0.0;
  double stddev = 0.0;  ///< population
  std::uint16_t min = 0;
  std::uint16_t max = 0;
};

/// Two-pass mean/variance. Throws DomainError on an empty band.
BandStats band_stats(const Band& band);

/// Pearson correlation between bands. Entries involving a zero-variance band
/// are undefined: value() returns nullopt for them, including the diagonal.
class CorrelationMatrix {
 public:
  CorrelationMatrix(int n, std::vector<double> r, std::vector<bool> defined);

  int size() const { return n_; }
  std::optional<double> value(int i, int j) const;
  bool band_defined(int i) const { return defined_[std::size_t(i)]; }

 private:
  int n_;
  std::vector<double> r_;
  std::vector<bool> defined_;
};

/// Throws DomainError for single-band images.
CorrelationMatrix correlation(const MultibandImage& image);

// ---- OIF -------------------------------------------------------------------

struct OifScore {
  std::array<int, 3> bands;  ///< 1-based band numbers, ascending
  double score = 0.0;        ///< +inf when the three bands are mutually uncorrelated
};

/// Scores every band triple by (s_i + s_j + s_k) / (|r_ij| + |r_ik| + |r_jk|)
/// and sorts descending, ties by ascending triple. Needs >= 3 bands, all with
/// nonzero variance; the offending band is named in the DomainError.
std::vector<OifScore> oif_rank(const MultibandImage& image);

/// Same ranking from precomputed per-band standard deviations and correlations.
std::vector<OifScore> oif_rank(const std::vector<double>& stddevs, const CorrelationMatrix& r);

// ---- classification --------------------------------------------------------

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Labelled training pixels for one class.
struct Roi {
  std::string name;
  std::vector<Pixel> pixels;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box in band space.
struct ClassSpec {
  std::string name;
  std::vector<Interval> bounds;
};

struct FitRule {
  enum class Kind { minmax, mean_sigma };
  Kind kind = Kind::minmax;
  double k = 2.0;  ///< half-width in standard deviations for mean_sigma

  static FitRule minmax() { return {}; }
  static FitRule mean_sigma(double k) { return {Kind::mean_sigma, k}; }
};

/// Per-band training boxes. minmax uses ROI extrema; mean_sigma uses
/// mean +- k * population stddev, clamped to the dtype range.
std::vector<ClassSpec> fit_classes(const MultibandImage& image, const std::vector<Roi>& rois,
                                   FitRule rule);

/// Per-pixel labels; 0 means unclassified, class i of a spec list is label i+1.
struct ClassificationMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  ClassificationMap() = default;
  ClassificationMap(int w, int h) : width(w), height(h), labels(std::size_t(w) * h, 0) {}
  ClassificationMap(int w, int h, std::vector<std::uint16_t> l);

  std::uint16_t at(int row, int col) const { return labels[std::size_t(row) * width + col]; }
  std::uint16_t max_label() const;

  friend bool operator==(const ClassificationMap&, const ClassificationMap&) = default;
};

/// Each pixel gets the first spec whose every band interval contains it.
ClassificationMap classify(const MultibandImage& image, const std::vector<ClassSpec>& specs);

/// Label raster as a band (u8 when every label fits, else u16) and back.
Band to_band(const ClassificationMap& map);
ClassificationMap to_map(const Band& band);

/// One ROI per label 1..max of a label raster; label 0 is ignored.
std::vector<Roi> rois_from_labels(const ClassificationMap& labels,
                                  const std::vector<std::string>& names = {});

/// Training ROIs drawn from a truth map: pixels whose (2*margin+1)^2
/// neighbourhood lies inside the frame and carries one label, taken on a
/// `stride` grid. Deterministic.
std::vector<Roi> sample_training_rois(const ClassificationMap& truth, int stride, int margin,
                                      const std::vector<std::string>& names = {});

/// Truth with the given ROI pixels set to 0, for held-out evaluation.
ClassificationMap exclude_pixels(ClassificationMap truth, const std::vector<Roi>& rois);

/// Row index is the truth label, column the predicted label; index 0 is the
/// unclassified slot. Only truth pixels with label > 0 are counted.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes);

  int classes() const { return classes_; }
  std::uint64_t count(int truth, int predicted) const {
    return counts_[std::size_t(truth) * (classes_ + 1) + predicted];
  }
  void add(int truth, int predicted) { ++counts_[std::size_t(truth) * (classes_ + 1) + predicted]; ++total_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t correct() const;
  double overall_accuracy() const;

 private:
  int classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Throws DomainError on a size mismatch or when truth has no labelled pixel.
ConfusionMatrix accuracy(const ClassificationMap& map, const ClassificationMap& truth);

// ---- operator comparison ---------------------------------------------------

inline constexpr int kHistogramBins = 32;

struct ResponseSummary {
  double mean_abs = 0.0;
  double stddev_abs = 0.0;
  double edge_density = 0.0;  ///< fraction of pixels with |v| >= threshold
  std::vector<std::uint64_t> histogram;
};

/// Magnitude statistics for two response fields over a shared log-spaced
/// histogram. Bin b holds |v| with floor(32 * ln(1+|v|) / ln(1+M)) == b,
/// M being the largest magnitude in either field.
struct ComparisonReport {
  double threshold = 0.0;
  std::vector<double> bin_edges;  ///< 33 edges, (1+M)^(b/32) - 1
  ResponseSummary a;
  ResponseSummary b;
  std::optional<double> abs_correlation;  ///< nullopt when either |field| is constant
  double sign_agreement = 0.0;
};

ComparisonReport compare_responses(const ResponseField& a, const ResponseField& b,
                                   double threshold);

}  // namespace gstk
