#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gstk/analysis.hpp"
#include "gstk/raster.hpp"

namespace gstk {

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, then
/// the 64-bit finalizer. Chosen because it is fully specified by a few lines
/// of integer arithmetic and therefore identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1]: ((x >> 11) + 1) * 2^-53.
  double uniform_open0() { return double((next() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform in [0, 1): (x >> 11) * 2^-53.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Box-Muller cosine branch: sqrt(-2 ln u1) * cos(2 pi u2), u1 drawn first.
  /// Consumes exactly two outputs per call; the sine partner is discarded.
  double gaussian();

 private:
  std::uint64_t state_;
};

struct Region {
  enum class Shape { rectangle, disk };
  Shape shape = Shape::rectangle;
  int class_index = 1;
  // rectangle: top-left corner and size in pixels
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
  // disk: pixels with (r - center_row)^2 + (c - center_col)^2 <= radius^2
  double center_row = 0.0;
  double center_col = 0.0;
  double radius = 0.0;
};

struct BandSignature {
  double mean = 0.0;
  double stddev = 0.0;
};

struct ClassSignature {
  int index = 1;
  std::string name;
  std::vector<BandSignature> bands;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  SampleType dtype = SampleType::u8;
  int band_count = 0;
  std::vector<std::string> band_names;
  int background_class = 1;
  std::vector<Region> regions;
  std::vector<ClassSignature> classes;
  std::uint64_t seed = 0;
};

struct SynthScene {
  MultibandImage image;
  ClassificationMap truth;
  std::vector<std::string> class_names;  ///< index i names label i+1
};

/// Throws DomainError when the spec is inconsistent (missing signature,
/// class index < 1, mean outside the dtype range, ...).
void validate(const SceneSpec& spec);

/// Truth map: background everywhere, then each region painted in order.
/// Band b, pixel p (row-major) takes mean + stddev * g where g is the next
/// Gaussian from one SplitMix64 stream seeded with spec.seed, walking bands in
/// order; values round half away from zero, then clamp to the dtype.
SynthScene synth_scene(const SceneSpec& spec);

SceneSpec parse_scene_spec(std::string_view json);
std::string to_json(const SceneSpec& spec);

/// 7-band u8 scene with three well separated classes ("soil" background,
/// "sea" band across the top, "forest" disk), noise stddev 2.
SceneSpec demo_scene_spec(std::uint64_t seed = 20200424, int width = 128, int height = 128);

}  // namespace gstk
