#include "gstk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

#include "gstk/error.hpp"

namespace gstk {

using nlohmann::json;

double SplitMix64::gaussian() {
  const double u1 = uniform_open0();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

const ClassSignature* find_class(const SceneSpec& spec, int index) {
  for (const auto& c : spec.classes)
    if (c.index == index) return &c;
  return nullptr;
}

}  // namespace

void validate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) throw DomainError("scene: dimensions must be positive");
  if (spec.band_count < 1 || spec.band_count > 255)
    throw DomainError("scene: band count must be within 1..255");
  if (!spec.band_names.empty() && int(spec.band_names.size()) != spec.band_count)
    throw DomainError("scene: band_names count does not match band count");
  if (spec.classes.size() > 65535) throw DomainError("scene: too many classes");

  const double top = max_value(spec.dtype);
  std::map<int, int> seen;
  for (const auto& c : spec.classes) {
    if (c.index < 1 || c.index > 65535) throw DomainError("scene: class index must be within 1..65535");
    if (!seen.emplace(c.index, 0).second)
      throw DomainError("scene: duplicate signature for class " + std::to_string(c.index));
    if (int(c.bands.size()) != spec.band_count)
      throw DomainError("scene: class " + std::to_string(c.index) + " signature covers " +
                        std::to_string(c.bands.size()) + " bands, scene has " +
                        std::to_string(spec.band_count));
    for (const auto& b : c.bands) {
      if (!(b.mean >= 0.0 && b.mean <= top))
        throw DomainError("scene: class " + std::to_string(c.index) + " mean outside dtype range");
      if (!(b.stddev >= 0.0)) throw DomainError("scene: negative noise stddev");
    }
  }
  auto require = [&spec](int index) {
    if (index < 1) throw DomainError("scene: region class indices must be >= 1");
    if (!find_class(spec, index))
      throw DomainError("scene: no signature for class " + std::to_string(index));
  };
  require(spec.background_class);
  for (const auto& r : spec.regions) {
    require(r.class_index);
    if (r.shape == Region::Shape::rectangle && (r.width < 0 || r.height < 0))
      throw DomainError("scene: rectangle with negative size");
    if (r.shape == Region::Shape::disk && !(r.radius >= 0.0))
      throw DomainError("scene: disk with negative radius");
  }
}

SynthScene synth_scene(const SceneSpec& spec) {
  validate(spec);
  const int w = spec.width;
  const int h = spec.height;

  ClassificationMap truth(w, h);
  std::fill(truth.labels.begin(), truth.labels.end(), std::uint16_t(spec.background_class));
  for (const auto& reg : spec.regions) {
    const auto label = std::uint16_t(reg.class_index);
    if (reg.shape == Region::Shape::rectangle) {
      const int r0 = std::max(reg.row, 0);
      const int r1 = std::min<long long>(static_cast<long long>(reg.row) + reg.height, h);
      const int c0 = std::max(reg.col, 0);
      const int c1 = std::min<long long>(static_cast<long long>(reg.col) + reg.width, w);
      for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) truth.labels[std::size_t(r) * w + c] = label;
    } else {
      const double r2 = reg.radius * reg.radius;
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          const double dr = r - reg.center_row;
          const double dc = c - reg.center_col;
          if (dr * dr + dc * dc <= r2) truth.labels[std::size_t(r) * w + c] = label;
        }
      }
    }
  }

  int max_index = 0;
  for (const auto& c : spec.classes) max_index = std::max(max_index, c.index);
  std::vector<const ClassSignature*> by_label(std::size_t(max_index) + 1, nullptr);
  for (const auto& c : spec.classes) by_label[std::size_t(c.index)] = &c;

  const double top = max_value(spec.dtype);
  SplitMix64 rng(spec.seed);
  std::vector<Band> bands;
  bands.reserve(std::size_t(spec.band_count));
  for (int b = 0; b < spec.band_count; ++b) {
    std::vector<std::uint16_t> samples(truth.labels.size());
    for (std::size_t p = 0; p < samples.size(); ++p) {
      const auto& sig = by_label[truth.labels[p]]->bands[std::size_t(b)];
      const double v = std::round(sig.mean + sig.stddev * rng.gaussian());
      samples[p] = static_cast<std::uint16_t>(std::clamp(v, 0.0, top));
    }
    bands.emplace_back(w, h, spec.dtype, std::move(samples));
  }

  std::vector<std::string> names(static_cast<std::size_t>(max_index));
  for (const auto& c : spec.classes)
    names[std::size_t(c.index) - 1] = c.name.empty() ? "class" + std::to_string(c.index) : c.name;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i].empty()) names[i] = "class" + std::to_string(i + 1);

  return {MultibandImage(std::move(bands), spec.band_names), std::move(truth), std::move(names)};
}

// ---- JSON ------------------------------------------------------------------

SceneSpec parse_scene_spec(std::string_view text) {
  try {
    const auto j = json::parse(text);
    SceneSpec s;
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.dtype = parse_sample_type(j.value("dtype", std::string("u8")));
    s.band_count = j.at("bands").get<int>();
    s.band_names = j.value("band_names", std::vector<std::string>{});
    s.background_class = j.value("background_class", 1);
    s.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("classes")) {
      ClassSignature sig;
      sig.index = c.at("index").get<int>();
      sig.name = c.value("name", std::string());
      for (const auto& b : c.at("bands"))
        sig.bands.push_back({b.at("mean").get<double>(), b.value("stddev", 0.0)});
      s.classes.push_back(std::move(sig));
    }
    for (const auto& r : j.value("regions", json::array())) {
      Region reg;
      const auto shape = r.at("shape").get<std::string>();
      reg.class_index = r.at("class").get<int>();
      if (shape == "rectangle") {
        reg.shape = Region::Shape::rectangle;
        reg.row = r.at("row").get<int>();
        reg.col = r.at("col").get<int>();
        reg.height = r.at("height").get<int>();
        reg.width = r.at("width").get<int>();
      } else if (shape == "disk") {
        reg.shape = Region::Shape::disk;
        reg.center_row = r.at("center_row").get<double>();
        reg.center_col = r.at("center_col").get<double>();
        reg.radius = r.at("radius").get<double>();
      } else {
        throw FormatError("scene: unknown region shape '" + shape + "'");
      }
      s.regions.push_back(reg);
    }
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene: ") + e.what());
  }
}

std::string to_json(const SceneSpec& s) {
  json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["dtype"] = std::string(to_string(s.dtype));
  j["bands"] = s.band_count;
  if (!s.band_names.empty()) j["band_names"] = s.band_names;
  j["background_class"] = s.background_class;
  j["seed"] = s.seed;
  j["classes"] = json::array();
  for (const auto& c : s.classes) {
    json jc{{"index", c.index}, {"name", c.name}, {"bands", json::array()}};
    for (const auto& b : c.bands) jc["bands"].push_back({{"mean", b.mean}, {"stddev", b.stddev}});
    j["classes"].push_back(std::move(jc));
  }
  j["regions"] = json::array();
  for (const auto& r : s.regions) {
    if (r.shape == Region::Shape::rectangle)
      j["regions"].push_back({{"shape", "rectangle"}, {"class", r.class_index}, {"row", r.row},
                              {"col", r.col}, {"height", r.height}, {"width", r.width}});
    else
      j["regions"].push_back({{"shape", "disk"}, {"class", r.class_index},
                              {"center_row", r.center_row}, {"center_col", r.center_col},
                              {"radius", r.radius}});
  }
  return j.dump(2) + "\n";
}

SceneSpec demo_scene_spec(std::uint64_t seed, int width, int height) {
  SceneSpec s;
  s.width = width;
  s.height = height;
  s.dtype = SampleType::u8;
  s.band_count = 7;
  s.band_names = {"blue", "green", "red", "nir", "swir1", "thermal", "swir2"};
  s.seed = seed;
  s.background_class = 1;
  auto sig = [](std::vector<double> means) {
    std::vector<BandSignature> out;
    for (double m : means) out.push_back({m, 2.0});
    return out;
  };
  s.classes = {
      {1, "soil", sig({120, 130, 150, 160, 190, 150, 170})},
      {2, "sea", sig({80, 60, 40, 20, 10, 100, 8})},
      {3, "forest", sig({40, 90, 15, 210, 110, 125, 60})},
  };
  Region sea;
  sea.shape = Region::Shape::rectangle;
  sea.class_index = 2;
  sea.row = 0;
  sea.col = 0;
  sea.height = height / 3;
  sea.width = width;
  Region forest;
  forest.shape = Region::Shape::disk;
  forest.class_index = 3;
  forest.center_row = height * 0.65;
  forest.center_col = width * 0.5;
  forest.radius = std::min(width, height) * 0.25;
  s.regions = {sea, forest};
  return s;
}

}  // namespace gstk
