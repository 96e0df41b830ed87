#include <doctest.h>

#include <limits>

#include <json.hpp>

#include "gstk/analysis.hpp"
#include "gstk/error.hpp"
#include "gstk/report.hpp"

using namespace gstk;

TEST_SUITE("cli") {

TEST_CASE("oif document layout") {
  const std::vector<OifScore> ranking = {{{1, 2, 3}, std::numeric_limits<double>::infinity()},
                                         {{1, 2, 4}, 2.5}};
  CHECK(oif_json(ranking, {"blue", "green", "red"}) ==
        "{\n"
        "  \"kind\": \"oif_ranking\",\n"
        "  \"triples\": [\n"
        "    {\n"
        "      \"bands\": [\n        1,\n        2,\n        3\n      ],\n"
        "      \"names\": [\n        \"blue\",\n        \"green\",\n        \"red\"\n      ],\n"
        "      \"score\": null,\n"
        "      \"unbounded\": true\n"
        "    },\n"
        "    {\n"
        "      \"bands\": [\n        1,\n        2,\n        4\n      ],\n"
        "      \"names\": [\n        \"blue\",\n        \"green\",\n        \"band4\"\n      ],\n"
        "      \"score\": 2.5,\n"
        "      \"unbounded\": false\n"
        "    }\n"
        "  ]\n"
        "}\n");
}

TEST_CASE("confusion document carries the unclassified column") {
  ConfusionMatrix cm(2);
  cm.add(1, 1);
  cm.add(1, 0);
  cm.add(2, 2);
  cm.add(2, 2);
  const auto j = nlohmann::json::parse(confusion_json(cm, {"sea"}));
  CHECK(j["labels"] == nlohmann::json::array({"unclassified", "sea", "class2"}));
  CHECK(j["counts"] == nlohmann::json::parse("[[1,1,0],[0,0,2]]"));
  CHECK(j["total"] == 4);
  CHECK(j["correct"] == 3);
  CHECK(j["overall_accuracy"] == 0.75);
}

TEST_CASE("class bounds document") {
  const std::vector<ClassSpec> specs = {{"a", {{1, 2}, {3.5, 4}}}, {"b", {{0, 0}}}};
  const auto j = nlohmann::json::parse(class_specs_json(specs));
  CHECK(j["kind"] == "parallelepiped_classes");
  CHECK(j["classes"][0]["label"] == 1);
  CHECK(j["classes"][0]["bounds"] == nlohmann::json::parse("[[1.0,2.0],[3.5,4.0]]"));
  CHECK(j["classes"][1]["name"] == "b");
}

TEST_CASE("comparison document") {
  ResponseField a(2, 1, {0, 10});
  ResponseField b(2, 1, {0, 0});
  const auto j = nlohmann::json::parse(
      comparison_json({{"x", compare_responses(a, b, 5)}, {"y", compare_responses(a, a, 5)}}));
  CHECK(j["comparisons"].size() == 2);
  CHECK(j["comparisons"][0]["abs_correlation"].is_null());
  CHECK(j["comparisons"][1]["abs_correlation"] == 1.0);
  CHECK(j["comparisons"][0]["bin_edges"].size() == 33);
  CHECK(j["comparisons"][0]["a"]["histogram"].size() == 32);
  CHECK(j["comparisons"][0]["a"]["edge_density"] == 0.5);
  CHECK(j["comparisons"][0]["threshold"] == 5.0);
}

TEST_CASE("roi parsing expands runs and pixels") {
  const auto rois = parse_rois(R"({"classes": [
      {"name": "sea", "runs": [{"row": 1, "col": 2, "length": 3}], "pixels": [[0, 0]]},
      {"name": "soil", "pixels": [[5, 6]]},
      {"name": "empty"}]})");
  REQUIRE(rois.size() == 3);
  CHECK(rois[0].pixels == std::vector<Pixel>{{1, 2}, {1, 3}, {1, 4}, {0, 0}});
  CHECK(rois[1].pixels == std::vector<Pixel>{{5, 6}});
  CHECK(rois[2].pixels.empty());
}

TEST_CASE("roi writer collapses runs and round trips") {
  const std::vector<Roi> rois = {{"a", {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 5}}}, {"b", {}}};
  const auto text = rois_json(rois);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["classes"][0]["runs"].size() == 3);
  CHECK(j["classes"][0]["runs"][0]["length"] == 3);
  const auto back = parse_rois(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].pixels == rois[0].pixels);
  CHECK(back[1].name == "b");
}

TEST_CASE("roi parsing errors") {
  CHECK_THROWS_AS(parse_rois("not json"), FormatError);
  CHECK_THROWS_AS(parse_rois(R"({"rois": []})"), FormatError);
  CHECK_THROWS_AS(parse_rois(R"({"classes": [{"runs": []}]})"), FormatError);
  CHECK_THROWS_AS(parse_rois(R"({"classes": [{"name": "a", "pixels": [[1]]}]})"), FormatError);
  CHECK_THROWS_AS(parse_rois(R"({"classes": [{"name": "a", "runs": [{"row": 0, "col": 0, "length": 0}]}]})"),
                  FormatError);
}

}  // TEST_SUITE
