#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "gstk/analysis.hpp"
#include "gstk/convolve.hpp"
#include "gstk/io.hpp"
#include "gstk/kernel.hpp"
#include "gstk/report.hpp"
#include "gstk/synth.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace gstk;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result gstk_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) { return read_text_file(path); }

std::size_t file_count(const fs::path& dir) {
  return std::size_t(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

void write_image(const std::string& path, const MultibandImage& image) {
  AtomicWriteSet w;
  stage_image(w, path, image);
  w.commit();
}

void write_text(const std::string& path, const std::string& text) {
  AtomicWriteSet w;
  w.add(path, text);
  w.commit();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("derive writes the canonical kernel files") {
  testing::TempDir dir;
  const auto r = gstk_run({"derive", "--out-dir", dir.path().string(), "--laplacian"});
  REQUIRE(r.code == cli::kOk);
  const std::string golden = GSTK_TEST_DATA_DIR "/golden/";
  CHECK(slurp(dir / "quadrant.txt") == slurp(golden + "quadrant.txt"));
  CHECK(slurp(dir / "smooth5.txt") == slurp(golden + "smooth5.txt"));
  CHECK(slurp(dir / "laplacian3.txt") == slurp(golden + "laplacian3.txt"));
  CHECK(r.out == slurp(golden + "smooth5.txt"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(gstk_run({}).code == cli::kUsage);
  CHECK(gstk_run({"frobnicate"}).code == cli::kUsage);
  CHECK(gstk_run({"derive"}).code == cli::kUsage);
  CHECK(gstk_run({"convolve", "--in", "a.pgm", "--out", "b.pgm", "--boundary", "wrap"}).code == cli::kUsage);
  CHECK(gstk_run({"convolve", "--in", "a.pgm", "--out", "b.pgm", "--lo", "-1"}).code == cli::kUsage);
  const auto r = gstk_run({"oif", "--in"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(r.err.empty());
  CHECK(gstk_run({"--help"}).code == cli::kOk);
}

TEST_CASE("missing and malformed inputs exit 2") {
  testing::TempDir dir;
  CHECK(gstk_run({"oif", "--in", dir / "nope.hdr", "--out", dir / "o.json"}).code == cli::kIo);
  write_text(dir / "bad.pgm", "P2\n1 1\n255\n0\n");
  const auto r = gstk_run({"convolve", "--in", dir / "bad.pgm", "--out", dir / "o.pgm"});
  CHECK(r.code == cli::kIo);
  CHECK_FALSE(r.err.empty());
  write_text(dir / "k.txt", "1 2\n3\n");
  SplitMix64 rng(1);
  write_image(dir / "in.pgm", MultibandImage({fixtures::random_band(rng, 8, 8, SampleType::u8)}));
  CHECK(gstk_run({"convolve", "--in", dir / "in.pgm", "--out", dir / "o.pgm", "--kernel",
                  "file:" + (dir / "k.txt")})
            .code == cli::kIo);
  CHECK_FALSE(fs::exists(dir / "o.pgm"));
}

TEST_CASE("domain errors exit 3 and leave no outputs") {
  testing::TempDir dir;
  // A constant band has no variance, so OIF is undefined.
  std::vector<Band> bands;
  for (int b = 0; b < 3; ++b)
    bands.push_back(fixtures::sampled_band(6, 6, SampleType::u8, [b](int c, int) { return b == 1 ? 7 : c * (b + 1); }));
  write_image(dir / "flat.hdr", MultibandImage(bands));
  const auto before = file_count(dir.path());
  const auto r = gstk_run({"oif", "--in", dir / "flat.hdr", "--out", dir / "o.json"});
  CHECK(r.code == cli::kDomain);
  CHECK(r.err.find("band2") != std::string::npos);
  CHECK(file_count(dir.path()) == before);

  CHECK(gstk_run({"convolve", "--in", dir / "flat.hdr", "--out", dir / "o.hdr", "--lo", "60", "--hi", "40"}).code ==
        cli::kDomain);
  CHECK(file_count(dir.path()) == before);
}

TEST_CASE("convolve output matches the library byte for byte") {
  testing::TempDir dir;
  SplitMix64 rng(77);
  const auto image = fixtures::random_image(rng, 23, 17, 3, SampleType::u16);
  write_image(dir / "in.hdr", image);
  const auto r = gstk_run({"convolve", "--in", dir / "in.hdr", "--out", dir / "out.hdr", "--raw",
                           dir / "raw.hdr", "--boundary", "reflect", "--workers", "2", "--tile-rows", "5"});
  REQUIRE(r.code == cli::kOk);

  const auto fields = convolve_image(image, smoothing_template(), BoundaryMode::reflect);
  const auto raw = write_response_bsq(fields);
  CHECK(slurp(dir / "raw.hdr") == raw.header);
  CHECK(read_file(dir / "raw.bsq") == raw.payload);

  std::vector<Band> shown;
  for (const auto& f : fields) shown.push_back(stretch(f, StretchMode::abs_linear));
  const auto want = write_bsq(MultibandImage(shown, image.names()));
  CHECK(read_file(dir / "out.bsq") == want.payload);
}

TEST_CASE("convolve accepts named kernels and kernel files") {
  testing::TempDir dir;
  SplitMix64 rng(5);
  const auto band = fixtures::random_band(rng, 12, 9, SampleType::u8);
  write_image(dir / "in.pgm", MultibandImage({band}));
  write_text(dir / "k.txt", "anchor 0 0\n1 -1\n");
  REQUIRE(gstk_run({"convolve", "--in", dir / "in.pgm", "--out", dir / "o.pgm", "--raw", dir / "r.hdr",
                    "--kernel", "file:" + (dir / "k.txt"), "--boundary", "zero", "--stretch", "signed_linear"})
              .code == cli::kOk);
  const Kernel k(1, 2, {1, -1}, 0, 0);
  CHECK(load_responses(dir / "r.hdr")[0] == convolve(band, k, BoundaryMode::zero));
  CHECK(load_image(dir / "o.pgm").band(0) ==
        stretch(convolve(band, k, BoundaryMode::zero), StretchMode::signed_linear));

  REQUIRE(gstk_run({"convolve", "--in", dir / "in.pgm", "--out", dir / "l.pgm", "--raw", dir / "l.hdr",
                    "--kernel", "laplacian3"})
              .code == cli::kOk);
  CHECK(load_responses(dir / "l.hdr")[0] == convolve(band, laplacian_template()));
}

TEST_CASE("oif ranks the forced scene's top triple first") {
  testing::TempDir dir;
  const auto scene = synth_scene(fixtures::forced_oif_spec());
  write_image(dir / "scene.hdr", scene.image);
  const auto r = gstk_run({"oif", "--in", dir / "scene.hdr", "--out", dir / "oif.json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(slurp(dir / "oif.json"));
  CHECK(j["triples"].size() == 35);
  CHECK(j["triples"][0]["bands"] == nlohmann::json::array({1, 4, 5}));
  CHECK(slurp(dir / "oif.json") == oif_json(oif_rank(scene.image), {}));
}

TEST_CASE("classify with ROI JSON and a truth map") {
  testing::TempDir dir;
  const auto scene = synth_scene(fixtures::separable_spec(7, 96));
  write_image(dir / "scene.hdr", scene.image);
  write_image(dir / "truth.pgm", MultibandImage({to_band(scene.truth)}));
  const auto rois = sample_training_rois(scene.truth, 3, 2, scene.class_names);
  write_text(dir / "rois.json", rois_json(rois));
  const auto r = gstk_run({"classify", "--in", dir / "scene.hdr", "--rois", dir / "rois.json", "--out-map",
                           dir / "map.pgm", "--truth", dir / "truth.pgm", "--out-confusion", dir / "cm.json",
                           "--out-classes", dir / "classes.json", "--features", "raw"});
  REQUIRE(r.code == cli::kOk);
  const auto specs = fit_classes(scene.image, rois, FitRule::minmax());
  const auto map = classify(scene.image, specs);
  CHECK(load_image(dir / "map.pgm").band(0) == to_band(map));
  CHECK(slurp(dir / "classes.json") == class_specs_json(specs));
  const auto cm = nlohmann::json::parse(slurp(dir / "cm.json"));
  CHECK(cm["overall_accuracy"].get<double>() == accuracy(map, scene.truth).overall_accuracy());
  CHECK(cm["overall_accuracy"].get<double>() > 0.95);
  CHECK(r.out.find("overall accuracy") != std::string::npos);

  // A label raster works as the ROI source too.
  REQUIRE(gstk_run({"classify", "--in", dir / "scene.hdr", "--rois", dir / "truth.pgm", "--out-map",
                    dir / "map2.pgm", "--features", "raw", "--mode", "mean_sigma", "--k", "3"})
              .code == cli::kOk);
  CHECK(gstk_run({"classify", "--in", dir / "scene.hdr", "--rois", dir / "rois.json", "--out-map",
                  dir / "map3.pgm", "--out-confusion", dir / "x.json"})
            .code == cli::kDomain);
  CHECK_FALSE(fs::exists(dir / "map3.pgm"));
}

TEST_CASE("compare on identical stacks reports perfect agreement") {
  testing::TempDir dir;
  SplitMix64 rng(3);
  write_image(dir / "in.hdr", fixtures::random_image(rng, 20, 20, 2, SampleType::u8));
  REQUIRE(gstk_run({"convolve", "--in", dir / "in.hdr", "--out", dir / "s.hdr", "--raw", dir / "raw.hdr"}).code ==
          cli::kOk);
  const auto r = gstk_run({"compare", "--a", dir / "raw.hdr", "--b", dir / "raw.hdr", "--out", dir / "c.json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(slurp(dir / "c.json"));
  REQUIRE(j["comparisons"].size() == 2);
  for (const auto& c : j["comparisons"]) {
    CHECK(c["abs_correlation"] == 1.0);
    CHECK(c["sign_agreement"] == 1.0);
    CHECK(c["a"] == c["b"]);
  }
  // An 8-bit image is not a response stack.
  CHECK(gstk_run({"compare", "--a", dir / "in.hdr", "--b", dir / "raw.hdr", "--out", dir / "d.json"}).code ==
        cli::kIo);
}

TEST_CASE("synth is deterministic and matches the library") {
  testing::TempDir dir;
  const auto spec = demo_scene_spec(11, 40, 30);
  write_text(dir / "spec.json", to_json(spec));
  REQUIRE(gstk_run({"synth", "--spec", dir / "spec.json", "--out", dir / "a.hdr", "--truth", dir / "ta.pgm"}).code ==
          cli::kOk);
  REQUIRE(gstk_run({"synth", "--spec", dir / "spec.json", "--out", dir / "b.hdr", "--truth", dir / "tb.pgm"}).code ==
          cli::kOk);
  CHECK(read_file(dir / "a.bsq") == read_file(dir / "b.bsq"));
  CHECK(read_file(dir / "ta.pgm") == read_file(dir / "tb.pgm"));
  const auto scene = synth_scene(spec);
  CHECK(load_image(dir / "a.hdr") == scene.image);
  CHECK(to_map(load_image(dir / "ta.pgm").band(0)) == scene.truth);
}

TEST_CASE("pipeline writes the full artifact set") {
  testing::TempDir dir;
  const auto r = gstk_run({"pipeline", "--out-dir", dir.path().string(), "--seed", "5"});
  REQUIRE(r.code == cli::kOk);
  for (const char* f : {"scene_spec.json", "scene.hdr", "scene.bsq", "truth.pgm", "smooth5.hdr", "smooth5_raw.hdr",
                        "laplacian3.hdr", "laplacian3_raw.bsq", "comparison.json", "oif.json", "rois.json",
                        "classes.json", "map.pgm", "confusion.json"})
    CHECK_MESSAGE(fs::exists(dir.path() / f), f);
  CHECK(parse_scene_spec(slurp(dir / "scene_spec.json")).seed == 5);
  const auto cm = nlohmann::json::parse(slurp(dir / "confusion.json"));
  CHECK(cm["overall_accuracy"].get<double>() > 0.5);
}

}  // TEST_SUITE
