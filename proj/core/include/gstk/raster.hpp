#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gstk {

enum class SampleType { u8, u16 };

constexpr std::uint32_t max_value(SampleType t) { return t == SampleType::u8 ? 255u : 65535u; }
std::string_view to_string(SampleType t);
SampleType parse_sample_type(std::string_view s);

/// Single unsigned raster channel. Samples are held as 16-bit values for
/// both sample types; u8 bands are range-checked on construction.
class Band {
 public:
  Band() = default;
  Band(int width, int height, SampleType dtype, std::vector<std::uint16_t> samples);
  /// Band filled with `value`.
  Band(int width, int height, SampleType dtype, std::uint16_t value = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  SampleType dtype() const { return dtype_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

  std::uint16_t at(int row, int col) const { return samples_[std::size_t(row) * width_ + col]; }
  std::span<const std::uint16_t> samples() const { return samples_; }
  std::span<const std::uint16_t> row(int r) const {
    return std::span<const std::uint16_t>(samples_).subspan(std::size_t(r) * width_, width_);
  }

  friend bool operator==(const Band&, const Band&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  SampleType dtype_ = SampleType::u8;
  std::vector<std::uint16_t> samples_;
};

/// Ordered stack of equally sized bands (1..255) sharing one sample type.
class MultibandImage {
 public:
  explicit MultibandImage(std::vector<Band> bands, std::vector<std::string> names = {});

  int width() const { return bands_.front().width(); }
  int height() const { return bands_.front().height(); }
  SampleType dtype() const { return bands_.front().dtype(); }
  int band_count() const { return static_cast<int>(bands_.size()); }

  const Band& band(int i) const { return bands_.at(static_cast<std::size_t>(i)); }
  const std::vector<Band>& bands() const { return bands_; }
  /// Explicit label if one was given, otherwise "band<N>" with N 1-based.
  std::string band_name(int i) const;
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const MultibandImage&, const MultibandImage&) = default;

 private:
  std::vector<Band> bands_;
  std::vector<std::string> names_;
};

/// Signed convolution output before any display mapping.
struct ResponseField {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> samples;

  ResponseField() = default;
  ResponseField(int w, int h) : width(w), height(h), samples(std::size_t(w) * h, 0) {}
  ResponseField(int w, int h, std::vector<std::int32_t> s);

  std::int32_t at(int row, int col) const { return samples[std::size_t(row) * width + col]; }
  bool empty() const { return samples.empty(); }

  friend bool operator==(const ResponseField&, const ResponseField&) = default;
};

/// Subset of bands in the given (0-based) order; names follow the bands.
MultibandImage select_bands(const MultibandImage& image, std::span<const int> indices);

/// Same samples relabelled as u16.
Band promote_to_u16(const Band& band);

/// Band-wise concatenation; mixed sample types are promoted to u16.
MultibandImage concat(const MultibandImage& a, const MultibandImage& b);

/// |v| saturated to 65535 as a u16 band.
Band magnitude_band(const ResponseField& field);

// ---- containers ------------------------------------------------------------

/// Binary PGM (P5). maxval <= 255 reads as u8, larger as u16 with big-endian
/// samples. Writers emit "P5\n<w> <h>\n<maxval>\n" with maxval 255 or 65535.
Band read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const Band& band);

/// GSTK1 band-sequential container: key=value text header plus a raw
/// little-endian payload holding each band in turn.
struct BsqFiles {
  std::string header;
  std::vector<std::uint8_t> payload;
};

MultibandImage read_bsq(std::string_view header, std::span<const std::uint8_t> payload);
BsqFiles write_bsq(const MultibandImage& image);

/// The same container with dtype=i32, used for raw response stacks.
std::vector<ResponseField> read_response_bsq(std::string_view header,
                                             std::span<const std::uint8_t> payload);
BsqFiles write_response_bsq(std::span<const ResponseField> fields);

// ---- display ---------------------------------------------------------------

enum class StretchMode { abs_linear, signed_linear };
std::string_view to_string(StretchMode m);
StretchMode parse_stretch_mode(std::string_view s);

/// Linear mapping of a response field onto u8 with percentile clipping.
/// abs_linear stretches |v| between its lo/hi percentiles; signed_linear
/// stretches v itself. Percentiles use the nearest-rank sample at index
/// round(p/100 * (n-1)); results round half away from zero. A field whose
/// clip range collapses maps values above the range to 255 and the rest to 0,
/// so constant fields become all zeros.
Band stretch(const ResponseField& field, StretchMode mode, double lo_pct = 2.0,
             double hi_pct = 98.0);

}  // namespace gstk
