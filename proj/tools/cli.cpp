#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gstk/analysis.hpp"
#include "gstk/convolve.hpp"
#include "gstk/error.hpp"
#include "gstk/io.hpp"
#include "gstk/kernel.hpp"
#include "gstk/raster.hpp"
#include "gstk/report.hpp"
#include "gstk/synth.hpp"

namespace gstk::cli {

namespace fs = std::filesystem;

namespace {

Kernel resolve_kernel(const std::string& choice) {
  if (choice == "smooth5") return smoothing_template();
  if (choice == "laplacian3") return laplacian_template();
  if (choice == "quadrant") return derive_quadrant_template();
  if (choice.rfind("file:", 0) == 0) return parse_kernel(read_text_file(choice.substr(5)));
  throw DomainError("unknown kernel '" + choice + "' (smooth5, laplacian3, quadrant, file:<path>)");
}

std::vector<int> parse_band_list(const std::string& text, int band_count) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int b = 0;
    try {
      std::size_t used = 0;
      b = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DomainError("band list: '" + tok + "' is not a band number");
    }
    if (b < 1 || b > band_count)
      throw DomainError("band list: band " + tok + " is outside 1.." + std::to_string(band_count));
    out.push_back(b - 1);
  }
  return out;
}

MultibandImage drop_bands(const MultibandImage& image, const std::string& excluded) {
  if (excluded.empty()) return image;
  const auto drop = parse_band_list(excluded, image.band_count());
  std::vector<int> keep;
  for (int b = 0; b < image.band_count(); ++b)
    if (std::find(drop.begin(), drop.end(), b) == drop.end()) keep.push_back(b);
  if (keep.empty()) throw DomainError("every band was excluded");
  return select_bands(image, keep);
}

MultibandImage response_magnitudes(const MultibandImage& image, const Kernel& kernel,
                                   BoundaryMode boundary, const ConvolveOptions& opts) {
  const auto fields = convolve_image(image, kernel, boundary, opts);
  std::vector<Band> bands;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    bands.push_back(magnitude_band(fields[i]));
    names.push_back(image.band_name(int(i)) + "_response");
  }
  return MultibandImage(std::move(bands), std::move(names));
}

MultibandImage classification_features(const MultibandImage& image, const std::string& features,
                                       const Kernel& kernel, BoundaryMode boundary,
                                       const ConvolveOptions& opts) {
  if (features == "raw") return image;
  if (features == "response") return response_magnitudes(image, kernel, boundary, opts);
  if (features == "both") return concat(image, response_magnitudes(image, kernel, boundary, opts));
  throw DomainError("unknown feature set '" + features + "' (raw, response, both)");
}

std::vector<std::string> names_of(const std::vector<Roi>& rois) {
  std::vector<std::string> n;
  for (const auto& r : rois) n.push_back(r.name);
  return n;
}

std::vector<std::string> band_names_of(const MultibandImage& image) {
  std::vector<std::string> n;
  for (int b = 0; b < image.band_count(); ++b) n.push_back(image.band_name(b));
  return n;
}

void print_top_triple(std::ostream& out, const std::vector<OifScore>& ranking) {
  const auto& top = ranking.front();
  out << "top OIF triple: bands " << top.bands[0] << "," << top.bands[1] << "," << top.bands[2]
      << " score " << std::setprecision(6) << top.score << "\n";
}

// ---- options per subcommand --------------------------------------------------

struct ConvolveFlags {
  std::string kernel = "smooth5";
  std::string boundary = "replicate";
  int workers = 1;
  int tile_rows = 64;

  ConvolveOptions options() const { return {workers, tile_rows}; }

  void attach(CLI::App* sub) {
    sub->add_option("--kernel", kernel, "smooth5 | laplacian3 | quadrant | file:<path>");
    sub->add_option("--boundary", boundary, "replicate | reflect | zero")
        ->check(CLI::IsMember({"replicate", "reflect", "zero"}));
    sub->add_option("--workers", workers, "convolution threads (0 = all cores)")
        ->check(CLI::Range(0, 256));
    sub->add_option("--tile-rows", tile_rows, "rows per convolution work item")
        ->check(CLI::Range(1, 1 << 20));
  }
};

struct ClassifyFlags {
  std::string mode = "minmax";
  double k = 2.0;
  std::string features = "response";
  std::string exclude_bands;

  FitRule rule() const { return mode == "minmax" ? FitRule::minmax() : FitRule::mean_sigma(k); }

  void attach(CLI::App* sub) {
    sub->add_option("--mode", mode, "training rule: minmax | mean_sigma")
        ->check(CLI::IsMember({"minmax", "mean_sigma"}));
    sub->add_option("--k", k, "half-width in standard deviations for mean_sigma")
        ->check(CLI::Range(0.0, 100.0));
    sub->add_option("--features", features, "classifier input: raw | response | both")
        ->check(CLI::IsMember({"raw", "response", "both"}));
    sub->add_option("--exclude-bands", exclude_bands, "comma-separated 1-based bands to drop");
  }
};

void make_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

// ---- commands ----------------------------------------------------------------

struct DeriveCmd {
  std::string out_dir;
  bool laplacian = false;

  int run(std::ostream& out) const {
    const fs::path dir(out_dir);
    make_output_dir(dir);
    AtomicWriteSet files;
    files.add(dir / "quadrant.txt", format_kernel(derive_quadrant_template()));
    files.add(dir / "smooth5.txt", format_kernel(smoothing_template()));
    if (laplacian) files.add(dir / "laplacian3.txt", format_kernel(laplacian_template()));
    files.commit();
    out << format_kernel(smoothing_template());
    return kOk;
  }
};

struct ConvolveCmd {
  std::string in;
  std::string out_path;
  std::string raw;
  std::string stretch_mode = "abs_linear";
  double lo = 2.0;
  double hi = 98.0;
  ConvolveFlags conv;

  int run(std::ostream& out) const {
    if (!(lo < hi)) throw DomainError("--lo must be below --hi");
    const auto image = load_image(in);
    const auto kernel = resolve_kernel(conv.kernel);
    const auto mode = parse_stretch_mode(stretch_mode);
    const auto fields =
        convolve_image(image, kernel, parse_boundary_mode(conv.boundary), conv.options());
    std::vector<Band> shown;
    for (const auto& f : fields) shown.push_back(stretch(f, mode, lo, hi));

    AtomicWriteSet files;
    stage_image(files, out_path, MultibandImage(std::move(shown), image.names()));
    if (!raw.empty()) stage_responses(files, raw, fields);
    files.commit();
    out << "convolved " << image.band_count() << " band(s) of " << image.width() << "x"
        << image.height() << " with " << conv.kernel << " (" << conv.boundary << ")\n";
    return kOk;
  }
};

struct OifCmd {
  std::string in;
  std::string out_path;

  int run(std::ostream& out) const {
    const auto image = load_image(in);
    const auto ranking = oif_rank(image);
    AtomicWriteSet files;
    files.add(out_path, oif_json(ranking, band_names_of(image)));
    files.commit();
    print_top_triple(out, ranking);
    return kOk;
  }
};

struct ClassifyCmd {
  std::string in;
  std::string rois_path;
  std::string out_map;
  std::string truth;
  std::string out_confusion;
  std::string out_classes;
  ClassifyFlags cls;
  ConvolveFlags conv;

  int run(std::ostream& out) const {
    if (!out_confusion.empty() && truth.empty())
      throw DomainError("--out-confusion requires --truth");
    const auto image = drop_bands(load_image(in), cls.exclude_bands);
    const std::vector<Roi> rois =
        fs::path(rois_path).extension() == ".pgm"
            ? rois_from_labels(to_map(read_pgm(read_file(rois_path))))
            : parse_rois(read_text_file(rois_path));
    const auto features = classification_features(
        image, cls.features, resolve_kernel(conv.kernel), parse_boundary_mode(conv.boundary),
        conv.options());
    const auto specs = fit_classes(features, rois, cls.rule());
    const auto map = classify(features, specs);

    AtomicWriteSet files;
    files.add(out_map, write_pgm(to_band(map)));
    if (!out_classes.empty()) files.add(out_classes, class_specs_json(specs));
    std::string summary = "classified " + std::to_string(map.labels.size()) + " pixels into " +
                          std::to_string(specs.size()) + " classes\n";
    if (!truth.empty()) {
      const auto cm = accuracy(map, to_map(read_pgm(read_file(truth))));
      if (!out_confusion.empty()) files.add(out_confusion, confusion_json(cm, names_of(rois)));
      std::ostringstream acc;
      acc << "overall accuracy " << std::fixed << std::setprecision(4) << cm.overall_accuracy()
          << " (" << cm.correct() << "/" << cm.total() << ")\n";
      summary += acc.str();
    }
    files.commit();
    out << summary;
    return kOk;
  }
};

struct CompareCmd {
  std::string a;
  std::string b;
  double threshold = 32.0;
  std::string out_path;

  int run(std::ostream& out) const {
    const auto fa = load_responses(a);
    const auto fb = load_responses(b);
    if (fa.size() != fb.size()) throw DomainError("compare: response stacks differ in band count");
    std::vector<NamedComparison> items;
    for (std::size_t i = 0; i < fa.size(); ++i)
      items.push_back({"band" + std::to_string(i + 1), compare_responses(fa[i], fb[i], threshold)});
    AtomicWriteSet files;
    files.add(out_path, comparison_json(items));
    files.commit();
    for (const auto& it : items) {
      out << it.label << ": edge density " << std::fixed << std::setprecision(4)
          << it.report.a.edge_density << " vs " << it.report.b.edge_density << ", |r| corr ";
      if (it.report.abs_correlation)
        out << *it.report.abs_correlation;
      else
        out << "undefined";
      out << "\n";
    }
    return kOk;
  }
};

struct SynthCmd {
  std::string spec;
  std::string out_image;
  std::string out_truth;

  int run(std::ostream& out) const {
    const auto scene = synth_scene(parse_scene_spec(read_text_file(spec)));
    AtomicWriteSet files;
    stage_image(files, out_image, scene.image);
    files.add(out_truth, write_pgm(to_band(scene.truth)));
    files.commit();
    out << "synthesized " << scene.image.band_count() << " band(s) of " << scene.image.width()
        << "x" << scene.image.height() << "\n";
    return kOk;
  }
};

struct PipelineCmd {
  std::string out_dir;
  std::string spec;
  std::uint64_t seed = 20200424;
  bool seed_given = false;
  double threshold = 32.0;
  int stride = 4;
  int margin = 2;
  ClassifyFlags cls;
  ConvolveFlags conv;

  PipelineCmd() {
    cls.features = "both";
    cls.exclude_bands = "6";
  }

  int run(std::ostream& out) const {
    auto scene_spec = spec.empty() ? demo_scene_spec(seed) : parse_scene_spec(read_text_file(spec));
    if (seed_given) scene_spec.seed = seed;
    const auto scene = synth_scene(scene_spec);
    const auto boundary = parse_boundary_mode(conv.boundary);
    const auto opts = conv.options();
    const fs::path dir(out_dir);
    make_output_dir(dir);
    AtomicWriteSet files;

    files.add(dir / "scene_spec.json", to_json(scene_spec));
    stage_image(files, dir / "scene.hdr", scene.image);
    files.add(dir / "truth.pgm", write_pgm(to_band(scene.truth)));

    const auto smooth = convolve_image(scene.image, smoothing_template(), boundary, opts);
    const auto lap = convolve_image(scene.image, laplacian_template(), boundary, opts);
    for (const auto& [name, fields] : {std::pair{"smooth5", &smooth}, std::pair{"laplacian3", &lap}}) {
      std::vector<Band> shown;
      for (const auto& f : *fields) shown.push_back(stretch(f, StretchMode::abs_linear));
      stage_image(files, dir / (std::string(name) + ".hdr"),
                  MultibandImage(std::move(shown), scene.image.names()));
      stage_responses(files, dir / (std::string(name) + "_raw.hdr"), *fields);
    }

    std::vector<NamedComparison> cmp;
    for (std::size_t i = 0; i < smooth.size(); ++i)
      cmp.push_back({scene.image.band_name(int(i)), compare_responses(smooth[i], lap[i], threshold)});
    files.add(dir / "comparison.json", comparison_json(cmp));

    const auto ranking = oif_rank(scene.image);
    files.add(dir / "oif.json", oif_json(ranking, band_names_of(scene.image)));

    const auto rois = sample_training_rois(scene.truth, stride, margin, scene.class_names);
    files.add(dir / "rois.json", rois_json(rois));
    const auto image = drop_bands(scene.image, cls.exclude_bands);
    const auto features =
        classification_features(image, cls.features, smoothing_template(), boundary, opts);
    const auto specs = fit_classes(features, rois, cls.rule());
    const auto map = classify(features, specs);
    files.add(dir / "classes.json", class_specs_json(specs));
    files.add(dir / "map.pgm", write_pgm(to_band(map)));
    const auto cm = accuracy(map, exclude_pixels(scene.truth, rois));
    files.add(dir / "confusion.json", confusion_json(cm, scene.class_names));
    files.commit();

    print_top_triple(out, ranking);
    out << "held-out overall accuracy " << std::fixed << std::setprecision(4)
        << cm.overall_accuracy() << " (" << cm.correct() << "/" << cm.total() << ")\n";
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gstk: multiband stencil filtering, OIF ranking and parallelepiped classification"};
  app.name("gstk");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  DeriveCmd derive;
  auto* s_derive = app.add_subcommand("derive", "write quadrant.txt and smooth5.txt kernel files");
  s_derive->add_option("--out-dir", derive.out_dir, "output directory")->required();
  s_derive->add_flag("--laplacian", derive.laplacian, "also write laplacian3.txt");

  ConvolveCmd conv;
  auto* s_conv = app.add_subcommand("convolve", "filter every band and write stretched u8 bands");
  s_conv->add_option("--in", conv.in, "input image (.hdr or .pgm)")->required();
  s_conv->add_option("--out", conv.out_path, "stretched output (.hdr, or .pgm for one band)")->required();
  s_conv->add_option("--raw", conv.raw, "optional signed 32-bit response stack (.hdr)");
  s_conv->add_option("--stretch", conv.stretch_mode, "abs_linear | signed_linear")
      ->check(CLI::IsMember({"abs_linear", "signed_linear"}));
  s_conv->add_option("--lo", conv.lo, "lower clip percentile")->check(CLI::Range(0.0, 100.0));
  s_conv->add_option("--hi", conv.hi, "upper clip percentile")->check(CLI::Range(0.0, 100.0));
  conv.conv.attach(s_conv);

  OifCmd oif;
  auto* s_oif = app.add_subcommand("oif", "rank band triples by Optimum Index Factor");
  s_oif->add_option("--in", oif.in, "input image (.hdr)")->required();
  s_oif->add_option("--out", oif.out_path, "JSON ranking report")->required();

  ClassifyCmd cls;
  auto* s_cls = app.add_subcommand("classify", "parallelepiped classification with optional accuracy");
  s_cls->add_option("--in", cls.in, "input image (.hdr or .pgm)")->required();
  s_cls->add_option("--rois", cls.rois_path, "training ROIs (.json runs or .pgm label raster)")->required();
  s_cls->add_option("--out-map", cls.out_map, "classification map (.pgm)")->required();
  s_cls->add_option("--truth", cls.truth, "ground-truth label raster (.pgm)");
  s_cls->add_option("--out-confusion", cls.out_confusion, "confusion matrix JSON (needs --truth)");
  s_cls->add_option("--out-classes", cls.out_classes, "fitted class boxes JSON");
  cls.cls.attach(s_cls);
  cls.conv.attach(s_cls);

  CompareCmd cmp;
  auto* s_cmp = app.add_subcommand("compare", "compare two raw response stacks");
  s_cmp->add_option("--a", cmp.a, "first response stack (.hdr, dtype=i32)")->required();
  s_cmp->add_option("--b", cmp.b, "second response stack (.hdr, dtype=i32)")->required();
  s_cmp->add_option("--threshold", cmp.threshold, "edge magnitude threshold")
      ->check(CLI::PositiveNumber);
  s_cmp->add_option("--out", cmp.out_path, "JSON comparison report")->required();

  SynthCmd syn;
  auto* s_syn = app.add_subcommand("synth", "generate a synthetic scene from a JSON spec");
  s_syn->add_option("--spec", syn.spec, "scene spec JSON")->required();
  s_syn->add_option("--out", syn.out_image, "output image (.hdr, or .pgm for one band)")->required();
  s_syn->add_option("--truth", syn.out_truth, "output truth map (.pgm)")->required();

  PipelineCmd pipe;
  auto* s_pipe = app.add_subcommand("pipeline", "synth -> convolve -> compare -> oif -> classify -> accuracy");
  s_pipe->add_option("--out-dir", pipe.out_dir, "output directory")->required();
  s_pipe->add_option("--spec", pipe.spec, "scene spec JSON (default: built-in 7-band demo scene)");
  auto* seed_opt = s_pipe->add_option("--seed", pipe.seed, "scene seed (overrides the spec)");
  s_pipe->add_option("--threshold", pipe.threshold, "edge magnitude threshold for the comparison")
      ->check(CLI::PositiveNumber);
  s_pipe->add_option("--stride", pipe.stride, "training pixel grid spacing")->check(CLI::Range(1, 4096));
  s_pipe->add_option("--margin", pipe.margin, "training pixel distance from class borders")
      ->check(CLI::Range(0, 64));
  pipe.cls.attach(s_pipe);
  pipe.conv.attach(s_pipe);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) {
      err << sub->help();
      break;
    }
    return kUsage;
  }

  try {
    if (s_derive->parsed()) return derive.run(out);
    if (s_conv->parsed()) return conv.run(out);
    if (s_oif->parsed()) return oif.run(out);
    if (s_cls->parsed()) return cls.run(out);
    if (s_cmp->parsed()) return cmp.run(out);
    if (s_syn->parsed()) return syn.run(out);
    if (s_pipe->parsed()) {
      pipe.seed_given = seed_opt->count() > 0;
      return pipe.run(out);
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}

}  // namespace gstk::cli
