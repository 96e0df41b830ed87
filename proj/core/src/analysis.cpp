#include "gstk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gstk/error.hpp"

namespace gstk {

BandStats band_stats(const Band& band) {
  if (band.empty()) throw DomainError("band_stats: empty band");
  const auto s = band.samples();
  const double n = double(s.size());

  double sum = 0.0;
  std::uint16_t lo = s.front();
  std::uint16_t hi = s.front();
  for (auto v : s) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (auto v : s) {
    const double d = v - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n), lo, hi};
}

CorrelationMatrix::CorrelationMatrix(int n, std::vector<double> r, std::vector<bool> defined)
    : n_(n), r_(std::move(r)), defined_(std::move(defined)) {
  if (n_ < 0 || r_.size() != std::size_t(n_) * n_ || defined_.size() != std::size_t(n_))
    throw DomainError("correlation matrix: inconsistent dimensions");
}

std::optional<double> CorrelationMatrix::value(int i, int j) const {
  if (!defined_[std::size_t(i)] || !defined_[std::size_t(j)]) return std::nullopt;
  return r_[std::size_t(i) * n_ + j];
}

CorrelationMatrix correlation(const MultibandImage& image) {
  const int n = image.band_count();
  if (n < 2) throw DomainError("correlation: needs at least two bands");
  const std::size_t pixels = std::size_t(image.width()) * image.height();
  if (pixels == 0) throw DomainError("correlation: empty image");

  std::vector<std::vector<double>> centered(static_cast<std::size_t>(n), std::vector<double>(pixels));
  std::vector<double> var(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) {
    const double mean = band_stats(image.band(b)).mean;
    const auto s = image.band(b).samples();
    auto& d = centered[std::size_t(b)];
    double ss = 0.0;
    for (std::size_t i = 0; i < pixels; ++i) {
      d[i] = s[i] - mean;
      ss += d[i] * d[i];
    }
    var[std::size_t(b)] = ss;
  }

  std::vector<double> r(std::size_t(n) * n, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> defined(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) defined[std::size_t(b)] = var[std::size_t(b)] > 0.0;
  for (int i = 0; i < n; ++i) {
    if (!defined[std::size_t(i)]) continue;
    r[std::size_t(i) * n + i] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      if (!defined[std::size_t(j)]) continue;
      const auto& x = centered[std::size_t(i)];
      const auto& y = centered[std::size_t(j)];
      double cov = 0.0;
      for (std::size_t k = 0; k < pixels; ++k) cov += x[k] * y[k];
      const double v = cov / std::sqrt(var[std::size_t(i)] * var[std::size_t(j)]);
      r[std::size_t(i) * n + j] = v;
      r[std::size_t(j) * n + i] = v;
    }
  }
  return CorrelationMatrix(n, std::move(r), std::move(defined));
}

std::vector<OifScore> oif_rank(const std::vector<double>& stddevs, const CorrelationMatrix& r) {
  const int n = r.size();
  if (int(stddevs.size()) != n) throw DomainError("oif: stddev count does not match matrix");
  if (n < 3) throw DomainError("oif: needs at least three bands");
  for (int b = 0; b < n; ++b)
    if (!r.band_defined(b) || !(stddevs[std::size_t(b)] > 0.0))
      throw DomainError("oif: band " + std::to_string(b + 1) + " has zero variance");

  std::vector<OifScore> out;
  out.reserve(std::size_t(n) * (n - 1) * (n - 2) / 6);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double num = stddevs[std::size_t(i)] + stddevs[std::size_t(j)] + stddevs[std::size_t(k)];
        const double den = std::abs(*r.value(i, j)) + std::abs(*r.value(i, k)) + std::abs(*r.value(j, k));
        const double score = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
        out.push_back({{i + 1, j + 1, k + 1}, score});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const OifScore& a, const OifScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.bands < b.bands;
  });
  return out;
}

std::vector<OifScore> oif_rank(const MultibandImage& image) {
  if (image.band_count() < 3) throw DomainError("oif: needs at least three bands");
  std::vector<double> sd;
  for (int b = 0; b < image.band_count(); ++b) {
    sd.push_back(band_stats(image.band(b)).stddev);
    if (!(sd.back() > 0.0))
      throw DomainError("oif: band '" + image.band_name(b) + "' has zero variance");
  }
  return oif_rank(sd, correlation(image));
}

// ---- classification --------------------------------------------------------

std::vector<ClassSpec> fit_classes(const MultibandImage& image, const std::vector<Roi>& rois,
                                   FitRule rule) {
  const double top = max_value(image.dtype());
  std::vector<ClassSpec> out;
  for (const auto& roi : rois) {
    if (roi.pixels.empty()) throw DomainError("fit_classes: ROI '" + roi.name + "' is empty");
    for (const auto& p : roi.pixels)
      if (p.row < 0 || p.row >= image.height() || p.col < 0 || p.col >= image.width())
        throw DomainError("fit_classes: ROI '" + roi.name + "' pixel (" + std::to_string(p.row) +
                          ", " + std::to_string(p.col) + ") is outside the image");

    ClassSpec spec{roi.name, {}};
    for (const auto& band : image.bands()) {
      if (rule.kind == FitRule::Kind::minmax) {
        std::uint16_t lo = band.at(roi.pixels.front().row, roi.pixels.front().col);
        std::uint16_t hi = lo;
        for (const auto& p : roi.pixels) {
          lo = std::min(lo, band.at(p.row, p.col));
          hi = std::max(hi, band.at(p.row, p.col));
        }
        spec.bounds.push_back({double(lo), double(hi)});
      } else {
        const double n = double(roi.pixels.size());
        double sum = 0.0;
        for (const auto& p : roi.pixels) sum += band.at(p.row, p.col);
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& p : roi.pixels) {
          const double d = band.at(p.row, p.col) - mean;
          ss += d * d;
        }
        const double half = rule.k * std::sqrt(ss / n);
        spec.bounds.push_back({std::clamp(mean - half, 0.0, top), std::clamp(mean + half, 0.0, top)});
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

ClassificationMap::ClassificationMap(int w, int h, std::vector<std::uint16_t> l)
    : width(w), height(h), labels(std::move(l)) {
  if (w < 0 || h < 0 || labels.size() != std::size_t(w) * std::size_t(h))
    throw DomainError("classification map: label count does not match width x height");
}

std::uint16_t ClassificationMap::max_label() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

ClassificationMap classify(const MultibandImage& image, const std::vector<ClassSpec>& specs) {
  if (specs.size() > 65535) throw DomainError("classify: too many classes");
  for (const auto& s : specs)
    if (int(s.bounds.size()) != image.band_count())
      throw DomainError("classify: class '" + s.name + "' has " + std::to_string(s.bounds.size()) +
                        " band bounds, image has " + std::to_string(image.band_count()));

  ClassificationMap map(image.width(), image.height());
  const auto nbands = std::size_t(image.band_count());
  std::vector<std::span<const std::uint16_t>> planes;
  for (const auto& b : image.bands()) planes.push_back(b.samples());

  for (std::size_t px = 0; px < map.labels.size(); ++px) {
    for (std::size_t c = 0; c < specs.size(); ++c) {
      const auto& bounds = specs[c].bounds;
      bool inside = true;
      for (std::size_t b = 0; b < nbands && inside; ++b) inside = bounds[b].contains(planes[b][px]);
      if (inside) {
        map.labels[px] = static_cast<std::uint16_t>(c + 1);
        break;
      }
    }
  }
  return map;
}

Band to_band(const ClassificationMap& map) {
  const auto type = map.max_label() <= 255 ? SampleType::u8 : SampleType::u16;
  return Band(map.width, map.height, type, map.labels);
}

ClassificationMap to_map(const Band& band) {
  auto s = band.samples();
  return ClassificationMap(band.width(), band.height(), std::vector<std::uint16_t>(s.begin(), s.end()));
}

namespace {

std::string class_name(const std::vector<std::string>& names, int label) {
  if (std::size_t(label) <= names.size() && !names[std::size_t(label) - 1].empty())
    return names[std::size_t(label) - 1];
  return "class" + std::to_string(label);
}

}  // namespace

std::vector<Roi> rois_from_labels(const ClassificationMap& labels,
                                  const std::vector<std::string>& names) {
  std::vector<Roi> rois(labels.max_label());
  for (std::size_t i = 0; i < rois.size(); ++i) rois[i].name = class_name(names, int(i) + 1);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c)
      if (const auto l = labels.at(r, c); l > 0) rois[l - 1u].pixels.push_back({r, c});
  return rois;
}

std::vector<Roi> sample_training_rois(const ClassificationMap& truth, int stride, int margin,
                                      const std::vector<std::string>& names) {
  if (stride <= 0 || margin < 0) throw DomainError("sample_training_rois: bad stride or margin");
  ClassificationMap picked(truth.width, truth.height);
  for (int r = margin; r + margin < truth.height; r += stride) {
    for (int c = margin; c + margin < truth.width; c += stride) {
      const auto l = truth.at(r, c);
      if (l == 0) continue;
      bool uniform = true;
      for (int dr = -margin; dr <= margin && uniform; ++dr)
        for (int dc = -margin; dc <= margin && uniform; ++dc) uniform = truth.at(r + dr, c + dc) == l;
      if (uniform) picked.labels[std::size_t(r) * truth.width + c] = l;
    }
  }
  auto rois = rois_from_labels(picked, names);
  // Labels present in truth but never sampled still get an (empty) slot so
  // fit_classes reports them instead of silently shifting class indices.
  const auto top = truth.max_label();
  for (auto l = rois.size() + 1; l <= top; ++l) rois.push_back({class_name(names, int(l)), {}});
  return rois;
}

ClassificationMap exclude_pixels(ClassificationMap truth, const std::vector<Roi>& rois) {
  for (const auto& roi : rois)
    for (const auto& p : roi.pixels)
      if (p.row >= 0 && p.row < truth.height && p.col >= 0 && p.col < truth.width)
        truth.labels[std::size_t(p.row) * truth.width + p.col] = 0;
  return truth;
}

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(std::size_t(classes + 1) * (classes + 1), 0) {
  if (classes < 0) throw DomainError("confusion matrix: negative class count");
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t c = 0;
  for (int k = 1; k <= classes_; ++k) c += count(k, k);
  return c;
}

double ConfusionMatrix::overall_accuracy() const {
  return total_ == 0 ? 0.0 : double(correct()) / double(total_);
}

ConfusionMatrix accuracy(const ClassificationMap& map, const ClassificationMap& truth) {
  if (map.width != truth.width || map.height != truth.height)
    throw DomainError("accuracy: map and truth differ in size");
  ConfusionMatrix cm(std::max<int>(map.max_label(), truth.max_label()));
  for (std::size_t i = 0; i < truth.labels.size(); ++i)
    if (truth.labels[i] > 0) cm.add(truth.labels[i], map.labels[i]);
  if (cm.total() == 0) throw DomainError("accuracy: truth has no labelled pixels");
  return cm;
}

// ---- comparison ------------------------------------------------------------

namespace {

ResponseSummary summarize(const ResponseField& f, double threshold, double log_top) {
  ResponseSummary s;
  s.histogram.assign(kHistogramBins, 0);
  const double n = double(f.samples.size());
  double sum = 0.0;
  std::uint64_t above = 0;
  for (auto v : f.samples) {
    const double m = std::abs(double(v));
    sum += m;
    if (m >= threshold) ++above;
    int bin = 0;
    if (log_top > 0.0)
      bin = std::min(kHistogramBins - 1, int(std::floor(kHistogramBins * std::log1p(m) / log_top)));
    ++s.histogram[std::size_t(bin)];
  }
  s.mean_abs = sum / n;
  double ss = 0.0;
  for (auto v : f.samples) {
    const double d = std::abs(double(v)) - s.mean_abs;
    ss += d * d;
  }
  s.stddev_abs = std::sqrt(ss / n);
  s.edge_density = double(above) / n;
  return s;
}

int sign(std::int32_t v) { return (v > 0) - (v < 0); }

}  // namespace

ComparisonReport compare_responses(const ResponseField& a, const ResponseField& b,
                                   double threshold) {
  if (a.width != b.width || a.height != b.height)
    throw DomainError("compare: response fields differ in size");
  if (a.empty()) throw DomainError("compare: empty response fields");
  if (!(threshold > 0.0)) throw DomainError("compare: threshold must be positive");

  double top = 0.0;
  for (const auto* f : {&a, &b})
    for (auto v : f->samples) top = std::max(top, std::abs(double(v)));
  const double log_top = std::log1p(top);

  ComparisonReport rep;
  rep.threshold = threshold;
  for (int k = 0; k <= kHistogramBins; ++k)
    rep.bin_edges.push_back(std::expm1(log_top * double(k) / kHistogramBins));
  rep.a = summarize(a, threshold, log_top);
  rep.b = summarize(b, threshold, log_top);

  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  std::uint64_t agree = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double da = std::abs(double(a.samples[i])) - rep.a.mean_abs;
    const double db = std::abs(double(b.samples[i])) - rep.b.mean_abs;
    cov += da * db;
    va += da * da;
    vb += db * db;
    if (sign(a.samples[i]) == sign(b.samples[i])) ++agree;
  }
  const double n = double(a.samples.size());
  if (va > 0.0 && vb > 0.0) rep.abs_correlation = cov / std::sqrt(va * vb);
  rep.sign_agreement = double(agree) / n;
  return rep;
}

}  // namespace gstk
