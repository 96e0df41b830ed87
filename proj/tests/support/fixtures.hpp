#pragma once

#include <cstdint>
#include <vector>

#include "gstk/raster.hpp"
#include "gstk/synth.hpp"

namespace gstk::fixtures {

inline Band random_band(SplitMix64& rng, int w, int h, SampleType dtype) {
  std::vector<std::uint16_t> s(std::size_t(w) * h);
  const std::uint64_t span = std::uint64_t(max_value(dtype)) + 1;
  for (auto& v : s) v = static_cast<std::uint16_t>(rng.next() % span);
  return Band(w, h, dtype, std::move(s));
}

inline MultibandImage random_image(SplitMix64& rng, int w, int h, int bands, SampleType dtype) {
  std::vector<Band> out;
  for (int b = 0; b < bands; ++b) out.push_back(random_band(rng, w, h, dtype));
  return MultibandImage(std::move(out));
}

/// Band sampling f(col, row).
template <class F>
Band sampled_band(int w, int h, SampleType dtype, F f) {
  std::vector<std::uint16_t> s(std::size_t(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) s[std::size_t(r) * w + c] = static_cast<std::uint16_t>(f(c, r));
  return Band(w, h, dtype, std::move(s));
}

inline Region rect(int cls, int row, int col, int height, int width) {
  Region r;
  r.shape = Region::Shape::rectangle;
  r.class_index = cls;
  r.row = row;
  r.col = col;
  r.height = height;
  r.width = width;
  return r;
}

inline Region disk(int cls, double cr, double cc, double radius) {
  Region r;
  r.shape = Region::Shape::disk;
  r.class_index = cls;
  r.center_row = cr;
  r.center_col = cc;
  r.radius = radius;
  return r;
}

/// 7-band scene arranged in four equal quadrants. Bands 1, 4 and 5 carry
/// mutually orthogonal +-60 quadrant patterns; bands 2, 3, 6 and 7 carry a
/// weak (+-10) pattern correlated with all three. Bands 1, 4, 5 therefore have
/// the largest spread and the lowest mutual correlation.
inline SceneSpec forced_oif_spec(std::uint64_t seed = 1445, int side = 64) {
  SceneSpec s;
  s.width = side;
  s.height = side;
  s.dtype = SampleType::u8;
  s.band_count = 7;
  s.seed = seed;
  const int a[4] = {1, 1, -1, -1};
  const int b[4] = {1, -1, 1, -1};
  const int c[4] = {1, -1, -1, 1};
  for (int k = 0; k < 4; ++k) {
    const double weak = 10.0 * (a[k] + b[k] + c[k]) / 3.0;
    ClassSignature sig{k + 1, "q" + std::to_string(k + 1), {}};
    sig.bands = {{128.0 + 60 * a[k], 2}, {100 + weak, 2}, {120 + weak, 2}, {128.0 + 60 * b[k], 2},
                 {128.0 + 60 * c[k], 2}, {140 + weak, 2}, {90 + weak, 2}};
    s.classes.push_back(sig);
  }
  const int h = side / 2;
  s.background_class = 1;
  s.regions = {rect(2, 0, h, h, h), rect(3, h, 0, h, h), rect(4, h, h, h, h)};
  return s;
}

/// Three well separated classes ("sea", "forest", "soil"): every pair of
/// class means is at least 20 (= 10 sigma) apart in every band.
inline SceneSpec separable_spec(std::uint64_t seed = 7, int side = 256) {
  auto s = demo_scene_spec(seed, side, side);
  return s;
}

}  // namespace gstk::fixtures
