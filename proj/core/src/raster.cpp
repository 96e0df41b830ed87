#include "gstk/raster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "gstk/error.hpp"

namespace gstk {

std::string_view to_string(SampleType t) { return t == SampleType::u8 ? "u8" : "u16"; }

SampleType parse_sample_type(std::string_view s) {
  if (s == "u8") return SampleType::u8;
  if (s == "u16") return SampleType::u16;
  throw FormatError("unknown dtype '" + std::string(s) + "'");
}

Band::Band(int width, int height, SampleType dtype, std::vector<std::uint16_t> samples)
    : width_(width), height_(height), dtype_(dtype), samples_(std::move(samples)) {
  if (width_ < 0 || height_ < 0) throw DomainError("band: negative dimensions");
  if (samples_.size() != std::size_t(width_) * std::size_t(height_))
    throw DomainError("band: sample count does not match width x height");
  if (dtype_ == SampleType::u8) {
    for (auto v : samples_)
      if (v > 255) throw DomainError("band: sample " + std::to_string(v) + " exceeds u8 range");
  }
}

Band::Band(int width, int height, SampleType dtype, std::uint16_t value)
    : Band(width, height, dtype,
           std::vector<std::uint16_t>(std::size_t(std::max(width, 0)) * std::max(height, 0),
                                      value)) {}

MultibandImage::MultibandImage(std::vector<Band> bands, std::vector<std::string> names)
    : bands_(std::move(bands)), names_(std::move(names)) {
  if (bands_.empty() || bands_.size() > 255)
    throw DomainError("image: band count must be within 1..255");
  const auto& first = bands_.front();
  for (const auto& b : bands_) {
    if (b.width() != first.width() || b.height() != first.height())
      throw DomainError("image: bands differ in size");
    if (b.dtype() != first.dtype()) throw DomainError("image: bands differ in dtype");
  }
  if (!names_.empty() && names_.size() != bands_.size())
    throw DomainError("image: band name count does not match band count");
}

std::string MultibandImage::band_name(int i) const {
  if (!names_.empty() && !names_.at(std::size_t(i)).empty()) return names_[std::size_t(i)];
  return "band" + std::to_string(i + 1);
}

ResponseField::ResponseField(int w, int h, std::vector<std::int32_t> s)
    : width(w), height(h), samples(std::move(s)) {
  if (w < 0 || h < 0 || samples.size() != std::size_t(w) * std::size_t(h))
    throw DomainError("response field: sample count does not match width x height");
}

MultibandImage select_bands(const MultibandImage& image, std::span<const int> indices) {
  std::vector<Band> bands;
  std::vector<std::string> names;
  for (int i : indices) {
    if (i < 0 || i >= image.band_count())
      throw DomainError("band index " + std::to_string(i + 1) + " out of range");
    bands.push_back(image.band(i));
    names.push_back(image.band_name(i));
  }
  return MultibandImage(std::move(bands), std::move(names));
}

Band promote_to_u16(const Band& band) {
  auto s = band.samples();
  return Band(band.width(), band.height(), SampleType::u16,
              std::vector<std::uint16_t>(s.begin(), s.end()));
}

MultibandImage concat(const MultibandImage& a, const MultibandImage& b) {
  const bool promote = a.dtype() != b.dtype();
  std::vector<Band> bands;
  std::vector<std::string> names;
  for (const auto* img : {&a, &b}) {
    for (int i = 0; i < img->band_count(); ++i) {
      bands.push_back(promote ? promote_to_u16(img->band(i)) : img->band(i));
      names.push_back(img->band_name(i));
    }
  }
  return MultibandImage(std::move(bands), std::move(names));
}

Band magnitude_band(const ResponseField& field) {
  std::vector<std::uint16_t> out(field.samples.size());
  std::transform(field.samples.begin(), field.samples.end(), out.begin(), [](std::int32_t v) {
    const std::int64_t m = std::abs(static_cast<std::int64_t>(v));
    return static_cast<std::uint16_t>(std::min<std::int64_t>(m, 65535));
  });
  return Band(field.width, field.height, SampleType::u16, std::move(out));
}

// ---- PGM -------------------------------------------------------------------

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number() {
    skip_space_and_comments();
    std::uint64_t v = 0;
    const auto start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > std::numeric_limits<std::uint32_t>::max()) throw FormatError("pgm: header value too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError("pgm: expected a number in header");
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Band read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw FormatError("pgm: bad magic");
  HeaderScanner scan(bytes);
  scan.advance(2);
  const auto width = scan.number();
  const auto height = scan.number();
  const auto maxval = scan.number();
  if (maxval == 0 || maxval > 65535) throw FormatError("pgm: maxval must be within 1..65535");
  if (width > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) ||
      height > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw FormatError("pgm: dimensions too large");
  if (scan.pos() >= bytes.size()) throw FormatError("pgm: truncated header");
  const auto sep = bytes[scan.pos()];
  if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r')
    throw FormatError("pgm: missing whitespace after maxval");
  scan.advance(1);

  const bool wide = maxval > 255;
  const std::size_t count = std::size_t(width) * std::size_t(height);
  const std::size_t expect = count * (wide ? 2 : 1);
  const std::size_t have = bytes.size() - scan.pos();
  if (have < expect) throw FormatError("pgm: truncated payload");
  if (have > expect) throw FormatError("pgm: trailing bytes after payload");

  std::vector<std::uint16_t> samples(count);
  const auto* p = bytes.data() + scan.pos();
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint16_t v = wide ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
    if (v > maxval) throw FormatError("pgm: sample exceeds maxval");
    samples[i] = v;
  }
  return Band(static_cast<int>(width), static_cast<int>(height),
              wide ? SampleType::u16 : SampleType::u8, std::move(samples));
}

std::vector<std::uint8_t> write_pgm(const Band& band) {
  const bool wide = band.dtype() == SampleType::u16;
  const std::string header = "P5\n" + std::to_string(band.width()) + " " +
                             std::to_string(band.height()) + "\n" +
                             std::to_string(max_value(band.dtype())) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + band.size() * (wide ? 2 : 1));
  for (auto v : band.samples()) {
    if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

// ---- GSTK1 BSQ -------------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "GSTK1";

struct BsqHeader {
  int width = 0;
  int height = 0;
  int bands = 0;
  std::string dtype;
  std::vector<std::string> band_names;
};

int parse_positive(const std::string& key, const std::string& value) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || v <= 0)
    throw FormatError("bsq: '" + key + "' must be a positive integer, got '" + value + "'");
  return v;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

BsqHeader parse_header(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("bsq: header line without '=': " + line);
    auto key = line.substr(0, eq);
    if (!kv.emplace(key, line.substr(eq + 1)).second)
      throw FormatError("bsq: duplicate header key '" + key + "'");
  }
  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("bsq: header is missing '" + key + "'");
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  if (take("magic") != kMagic) throw FormatError("bsq: magic mismatch");
  BsqHeader h;
  h.width = parse_positive("width", take("width"));
  h.height = parse_positive("height", take("height"));
  h.bands = parse_positive("bands", take("bands"));
  h.dtype = take("dtype");
  if (take("byteorder") != "le") throw FormatError("bsq: only byteorder=le is supported");
  if (auto it = kv.find("band_names"); it != kv.end()) {
    h.band_names = split_names(it->second);
    if (int(h.band_names.size()) != h.bands)
      throw FormatError("bsq: band_names count does not match bands");
    kv.erase(it);
  }
  if (!kv.empty()) throw FormatError("bsq: unknown header key '" + kv.begin()->first + "'");
  return h;
}

std::string format_header(int width, int height, int bands, std::string_view dtype,
                          const std::vector<std::string>& names) {
  std::string out;
  out += "magic=" + std::string(kMagic) + "\n";
  out += "width=" + std::to_string(width) + "\n";
  out += "height=" + std::to_string(height) + "\n";
  out += "bands=" + std::to_string(bands) + "\n";
  out += "dtype=" + std::string(dtype) + "\n";
  out += "byteorder=le\n";
  if (!names.empty()) {
    out += "band_names=";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].find_first_of(",\n") != std::string::npos)
        throw DomainError("bsq: band name may not contain ',' or newline");
      if (i) out += ',';
      out += names[i];
    }
    out += '\n';
  }
  return out;
}

void check_payload_size(const BsqHeader& h, std::size_t bytes_per_sample, std::size_t have) {
  const std::size_t expect = std::size_t(h.width) * std::size_t(h.height) * std::size_t(h.bands) *
                             bytes_per_sample;
  if (have != expect)
    throw FormatError("bsq: payload is " + std::to_string(have) + " bytes, expected " +
                      std::to_string(expect));
}

}  // namespace

MultibandImage read_bsq(std::string_view header, std::span<const std::uint8_t> payload) {
  const auto h = parse_header(header);
  const auto dtype = parse_sample_type(h.dtype);
  const std::size_t bps = dtype == SampleType::u8 ? 1 : 2;
  check_payload_size(h, bps, payload.size());
  const std::size_t plane = std::size_t(h.width) * h.height;
  std::vector<Band> bands;
  bands.reserve(std::size_t(h.bands));
  for (int b = 0; b < h.bands; ++b) {
    std::vector<std::uint16_t> s(plane);
    const auto* p = payload.data() + std::size_t(b) * plane * bps;
    for (std::size_t i = 0; i < plane; ++i)
      s[i] = bps == 1 ? p[i] : static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
    bands.emplace_back(h.width, h.height, dtype, std::move(s));
  }
  return MultibandImage(std::move(bands), h.band_names);
}

BsqFiles write_bsq(const MultibandImage& image) {
  BsqFiles f;
  f.header = format_header(image.width(), image.height(), image.band_count(),
                           to_string(image.dtype()), image.names());
  const bool wide = image.dtype() == SampleType::u16;
  f.payload.reserve(std::size_t(image.width()) * image.height() * image.band_count() *
                    (wide ? 2 : 1));
  for (const auto& b : image.bands()) {
    for (auto v : b.samples()) {
      f.payload.push_back(static_cast<std::uint8_t>(v & 0xFF));
      if (wide) f.payload.push_back(static_cast<std::uint8_t>(v >> 8));
    }
  }
  return f;
}

std::vector<ResponseField> read_response_bsq(std::string_view header,
                                             std::span<const std::uint8_t> payload) {
  const auto h = parse_header(header);
  if (h.dtype != "i32") throw FormatError("bsq: response stacks must have dtype=i32");
  check_payload_size(h, 4, payload.size());
  const std::size_t plane = std::size_t(h.width) * h.height;
  std::vector<ResponseField> out;
  for (int b = 0; b < h.bands; ++b) {
    ResponseField f(h.width, h.height);
    const auto* p = payload.data() + std::size_t(b) * plane * 4;
    for (std::size_t i = 0; i < plane; ++i) {
      const std::uint32_t u = std::uint32_t(p[4 * i]) | (std::uint32_t(p[4 * i + 1]) << 8) |
                              (std::uint32_t(p[4 * i + 2]) << 16) |
                              (std::uint32_t(p[4 * i + 3]) << 24);
      f.samples[i] = static_cast<std::int32_t>(u);
    }
    out.push_back(std::move(f));
  }
  return out;
}

BsqFiles write_response_bsq(std::span<const ResponseField> fields) {
  if (fields.empty() || fields.size() > 255)
    throw DomainError("bsq: response stack must hold 1..255 fields");
  const auto w = fields.front().width;
  const auto h = fields.front().height;
  for (const auto& f : fields)
    if (f.width != w || f.height != h) throw DomainError("bsq: response fields differ in size");
  BsqFiles out;
  out.header = format_header(w, h, int(fields.size()), "i32", {});
  out.payload.reserve(std::size_t(w) * h * fields.size() * 4);
  for (const auto& f : fields) {
    for (auto v : f.samples) {
      const auto u = static_cast<std::uint32_t>(v);
      for (int k = 0; k < 4; ++k) out.payload.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
    }
  }
  return out;
}

// ---- stretch ---------------------------------------------------------------

std::string_view to_string(StretchMode m) {
  return m == StretchMode::abs_linear ? "abs_linear" : "signed_linear";
}

StretchMode parse_stretch_mode(std::string_view s) {
  if (s == "abs_linear") return StretchMode::abs_linear;
  if (s == "signed_linear") return StretchMode::signed_linear;
  throw DomainError("unknown stretch mode '" + std::string(s) + "'");
}

namespace {

std::int64_t percentile(std::vector<std::int64_t>& scratch, double pct) {
  const auto n = scratch.size();
  const auto idx = static_cast<std::size_t>(std::llround(pct / 100.0 * double(n - 1)));
  std::nth_element(scratch.begin(), scratch.begin() + std::ptrdiff_t(idx), scratch.end());
  return scratch[idx];
}

}  // namespace

Band stretch(const ResponseField& field, StretchMode mode, double lo_pct, double hi_pct) {
  if (field.empty()) throw DomainError("stretch: empty field");
  if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0))
    throw DomainError("stretch: percentiles must satisfy 0 <= lo < hi <= 100");

  std::vector<std::int64_t> values(field.samples.size());
  std::transform(field.samples.begin(), field.samples.end(), values.begin(),
                 [mode](std::int32_t v) -> std::int64_t {
                   return mode == StretchMode::abs_linear ? std::abs(std::int64_t(v)) : v;
                 });
  auto scratch = values;
  const auto lo = percentile(scratch, lo_pct);
  const auto hi = percentile(scratch, hi_pct);

  std::vector<std::uint16_t> out(values.size());
  if (hi <= lo) {
    std::transform(values.begin(), values.end(), out.begin(),
                   [lo](std::int64_t v) -> std::uint16_t { return v > lo ? 255 : 0; });
  } else {
    const double scale = 255.0 / double(hi - lo);
    std::transform(values.begin(), values.end(), out.begin(),
                   [lo, hi, scale](std::int64_t v) -> std::uint16_t {
                     if (v <= lo) return 0;
                     if (v >= hi) return 255;
                     return static_cast<std::uint16_t>(std::lround(double(v - lo) * scale));
                   });
  }
  return Band(field.width, field.height, SampleType::u8, std::move(out));
}

}  // namespace gstk
