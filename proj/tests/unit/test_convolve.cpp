#include <doctest.h>

#include <cstdint>
#include <vector>

#include "gstk/convolve.hpp"
#include "gstk/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace gstk;

namespace {

constexpr BoundaryMode kModes[] = {BoundaryMode::replicate, BoundaryMode::reflect, BoundaryMode::zero};

Kernel random_kernel(SplitMix64& rng) {
  const int rows = 1 + int(rng.next() % 5);
  const int cols = 1 + int(rng.next() % 5);
  std::vector<std::int32_t> c(std::size_t(rows) * cols);
  for (auto& v : c) v = int(rng.next() % 17) - 8;
  return Kernel(rows, cols, c, int(rng.next() % rows), int(rng.next() % cols));
}

}  // namespace

TEST_SUITE("convolve") {

TEST_CASE("resolve_coordinate") {
  CHECK(resolve_coordinate(-1, 5, BoundaryMode::replicate) == 0);
  CHECK(resolve_coordinate(7, 5, BoundaryMode::replicate) == 4);
  CHECK(resolve_coordinate(-1, 5, BoundaryMode::reflect) == 0);
  CHECK(resolve_coordinate(-2, 5, BoundaryMode::reflect) == 1);
  CHECK(resolve_coordinate(5, 5, BoundaryMode::reflect) == 4);
  CHECK(resolve_coordinate(6, 5, BoundaryMode::reflect) == 3);
  CHECK(resolve_coordinate(-3, 1, BoundaryMode::reflect) == 0);
  CHECK(resolve_coordinate(-1, 5, BoundaryMode::zero) == -1);
  CHECK(resolve_coordinate(3, 5, BoundaryMode::zero) == 3);
  // agrees with the mirroring oracle far outside the axis
  for (int n : {1, 2, 3, 7})
    for (int i = -40; i < 40; ++i) {
      int expect = 0;
      oracle::fetch_index(i, n, BoundaryMode::reflect, expect);
      CHECK(resolve_coordinate(i, n, BoundaryMode::reflect) == expect);
    }
}

TEST_CASE("constant band gives zero response under replicate") {
  for (std::uint16_t v : {0, 1, 77, 255}) {
    const Band b(13, 9, SampleType::u8, v);
    const auto out = convolve(b, smoothing_template(), BoundaryMode::replicate);
    CHECK(out == ResponseField(13, 9));
  }
}

TEST_CASE("affine fields vanish at interior pixels") {
  const auto band = fixtures::sampled_band(20, 16, SampleType::u16, [](int c, int r) { return 3 * c + 5 * r + 7; });
  for (auto mode : kModes) {
    const auto out = convolve(band, smoothing_template(), mode);
    for (int r = 2; r < 14; ++r)
      for (int c = 2; c < 18; ++c) CHECK(out.at(r, c) == 0);
  }
}

TEST_CASE("x^2 gives 8 at interior pixels") {
  const auto band = fixtures::sampled_band(24, 10, SampleType::u16, [](int c, int) { return c * c; });
  const auto out = convolve(band, smoothing_template(), BoundaryMode::replicate);
  for (int r = 2; r < 8; ++r)
    for (int c = 2; c < 22; ++c) CHECK(out.at(r, c) == 8);
  CHECK(out == oracle::convolve(band, smoothing_template(), BoundaryMode::replicate));
}

TEST_CASE("correlation convention: the kernel is not flipped") {
  // Impulse at (2, 2); with correlation the output at (r, c) picks k(2-r+..):
  // out(r, c) = k(dcol = 2 - c, drow = 2 - r).
  Band impulse(5, 5, SampleType::u8);
  std::vector<std::uint16_t> s(25, 0);
  s[12] = 1;
  impulse = Band(5, 5, SampleType::u8, s);
  const auto q = derive_quadrant_template();
  const auto out = convolve(impulse, q, BoundaryMode::zero);
  CHECK(out.at(2, 2) == 4);
  CHECK(out.at(2, 3) == -4);  // dcol = -1
  CHECK(out.at(3, 2) == -4);  // drow = -1
  CHECK(out.at(3, 3) == 2);
  CHECK(out.at(2, 4) == 1);
  CHECK(out.at(4, 2) == 1);
  CHECK(out.at(1, 1) == 0);
}

TEST_CASE("random bands match the quadruple-loop oracle") {
  SplitMix64 rng(31337);
  const Kernel fixed[] = {derive_quadrant_template(), smoothing_template(), laplacian_template()};
  for (int t = 0; t < 60; ++t) {
    const auto band = fixtures::random_band(rng, 1 + int(rng.next() % 32), 1 + int(rng.next() % 32),
                                            t % 2 ? SampleType::u16 : SampleType::u8);
    const auto k = t % 4 == 3 ? random_kernel(rng) : fixed[t % 3];
    for (auto mode : kModes) CHECK(convolve(band, k, mode) == oracle::convolve(band, k, mode));
  }
}

TEST_CASE("bands smaller than the kernel") {
  SplitMix64 rng(4);
  for (int w = 1; w <= 3; ++w)
    for (int h = 1; h <= 3; ++h) {
      const auto band = fixtures::random_band(rng, w, h, SampleType::u8);
      for (auto mode : kModes)
        CHECK(convolve(band, smoothing_template(), mode) == oracle::convolve(band, smoothing_template(), mode));
    }
}

TEST_CASE("output does not depend on workers or tile height") {
  SplitMix64 rng(11);
  const auto band = fixtures::random_band(rng, 97, 131, SampleType::u16);
  const auto ref = convolve(band, smoothing_template(), BoundaryMode::reflect, {1, 1000});
  for (int workers : {1, 2, 8})
    for (int tile : {1, 7, 64})
      CHECK(convolve(band, smoothing_template(), BoundaryMode::reflect, {workers, tile}) == ref);
  CHECK(convolve(band, smoothing_template(), BoundaryMode::reflect, {0, 16}) == ref);
}

TEST_CASE("linearity") {
  SplitMix64 rng(12);
  const auto a = fixtures::random_band(rng, 30, 20, SampleType::u8);
  const auto b = fixtures::random_band(rng, 30, 20, SampleType::u8);
  std::vector<std::uint16_t> mix(a.size());
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix[i] = static_cast<std::uint16_t>(3 * a.samples()[i] + 2 * b.samples()[i]);
  const Band combined(30, 20, SampleType::u16, mix);
  for (auto mode : kModes) {
    const auto ca = convolve(a, smoothing_template(), mode);
    const auto cb = convolve(b, smoothing_template(), mode);
    const auto cc = convolve(combined, smoothing_template(), mode);
    for (std::size_t i = 0; i < cc.samples.size(); ++i) CHECK(cc.samples[i] == 3 * ca.samples[i] + 2 * cb.samples[i]);
  }
}

TEST_CASE("convolve_image is per-band convolve") {
  SplitMix64 rng(13);
  const auto img = fixtures::random_image(rng, 17, 11, 7, SampleType::u8);
  const auto fields = convolve_image(img, smoothing_template());
  REQUIRE(fields.size() == 7);
  for (int b = 0; b < 7; ++b) CHECK(fields[std::size_t(b)] == convolve(img.band(b), smoothing_template()));
  const MultibandImage one({img.band(2)});
  const auto single = convolve_image(one, laplacian_template());
  REQUIRE(single.size() == 1);
  CHECK(single[0] == convolve(img.band(2), laplacian_template()));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(convolve(Band(0, 0, SampleType::u8), smoothing_template()), DomainError);
  const Kernel huge(1, 2, {32767, 32767}, 0, 0);
  CHECK_THROWS_AS(convolve(Band(2, 2, SampleType::u16), huge), DomainError);
  CHECK_NOTHROW(convolve(Band(2, 2, SampleType::u8), huge));
  CHECK_THROWS_AS(convolve(Band(2, 2, SampleType::u8), smoothing_template(), BoundaryMode::zero, {1, 0}), DomainError);
  CHECK_THROWS_AS(parse_boundary_mode("wrap"), DomainError);
}

TEST_CASE("u16 worst case fits the accumulator") {
  // Alternating 0 / 65535 checkerboard maximises |response| for the 5x5 template.
  const auto band = fixtures::sampled_band(9, 9, SampleType::u16, [](int c, int r) { return (c + r) % 2 ? 0 : 65535; });
  const auto out = convolve(band, smoothing_template());
  CHECK(out == oracle::convolve(band, smoothing_template(), BoundaryMode::replicate));
  for (auto v : out.samples) CHECK(std::abs(std::int64_t(v)) <= 26LL * 65535);
}

}  // TEST_SUITE
