#include <catch2/catch.hpp>

#include <sstream>

#include "helpers.hpp"
#include "liesig/io.hpp"

using namespace liesig;
using test_helpers::random_so3_path;
using test_helpers::random_tensor;

TEST_CASE("group spec documents", "[io]") {
  CHECK(to_json(GroupSpec::so3()) == json{{"kind", "so3"}});
  CHECK(to_json(GroupSpec::euclidean(4)) == json{{"kind", "euclidean"}, {"dim", 4}});

  const GroupSpec prod = GroupSpec::product({GroupSpec::so3(), GroupSpec::euclidean(2)});
  CHECK(spec_from_json(to_json(prod)) == prod);

  // Nested products flatten to the same coordinate layout.
  const json nested{{"kind", "product"},
                    {"factors", json::array({json{{"kind", "product"},
                                                  {"factors", json::array({json{{"kind", "so3"}}})}},
                                             json{{"kind", "euclidean"}, {"dim", 2}}})}};
  CHECK(spec_from_json(nested) == prod);

  CHECK_THROWS_AS(spec_from_json(json{{"kind", "torus"}}), ParseError);
  CHECK_THROWS_AS(spec_from_json(json{{"dim", 3}}), ParseError);
}

TEST_CASE("tensor documents", "[io]") {
  Rng rng(81);
  const TruncatedTensor t = random_tensor(rng, 3, 4);
  const json doc = to_json(t);
  CHECK(doc.at("ambient_dim") == 3);
  CHECK(doc.at("level") == 4);
  CHECK(doc.at("levels").size() == 5);
  const TruncatedTensor back = tensor_from_json(doc);
  CHECK(test_helpers::max_abs_diff(t, back) == 0.0);

  json bad = doc;
  bad["levels"].erase(4);
  CHECK_THROWS_AS(tensor_from_json(bad), ParseError);
}

TEST_CASE("path documents", "[io]") {
  Rng rng(82);
  DiscretePath path = random_so3_path(rng, 7);
  for (int i = 0; i <= 7; ++i) path.timestamps.push_back(0.25 * i);
  const DiscretePath back = path_from_json(to_json(path));
  CHECK(back.spec == path.spec);
  CHECK(back.timestamps == path.timestamps);
  REQUIRE(back.points.size() == path.points.size());
  for (std::size_t i = 0; i < path.points.size(); ++i)
    CHECK(back.points[i] == path.points[i]);

  // Points are validated on load.
  json doc = to_json(path);
  doc["points"][2][0] = 9.0;
  CHECK_THROWS_AS(path_from_json(doc), ParseError);

  json short_doc = to_json(path);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  short_doc["points"].erase(1);
  CHECK_THROWS_AS(path_from_json(short_doc), ParseError);
}

TEST_CASE("csv path import", "[io]") {
  std::istringstream in("0.0,1.0\n0.5,1.5\n1.25,2.0\n");
  const DiscretePath path = path_from_csv(in);
  CHECK(path.spec == GroupSpec::euclidean(2));
  REQUIRE(path.points.size() == 3);
  CHECK(path.points[1].data[1] == 1.5);

  std::istringstream ragged("1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(path_from_csv(ragged), ParseError);
  std::istringstream garbage("1.0,abc\n2.0,3.0\n");
  CHECK_THROWS_AS(path_from_csv(garbage), ParseError);
}

TEST_CASE("csv matrices round-trip bit-exactly", "[io]") {
  Rng rng(83);
  std::vector<double> values(12);
  for (double& x : values) x = rng.normal() * std::pow(10.0, rng.uniform(-8, 8));
  std::ostringstream out;
  write_csv_matrix(out, values, 3, 4);
  std::istringstream in(out.str());
  int rows = 0, cols = 0;
  const std::vector<double> back = read_csv_matrix(in, rows, cols);
  CHECK(rows == 3);
  CHECK(cols == 4);
  REQUIRE(back.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(back[i] == values[i]);
}

TEST_CASE("gram documents", "[io]") {
  GramMatrix gram{2, 4, true, {1.0, 0.25, 0.25, 1.5}};
  std::ostringstream out;
  write_gram_csv(out, gram, {"a", "b"});
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "a,b");
  int rows = 0, cols = 0;
  const std::vector<double> entries = read_csv_matrix(lines, rows, cols);
  CHECK(rows == 2);
  CHECK(entries == std::vector<double>{1.0, 0.25, 0.25, 1.5});

  const json meta = gram_metadata(gram, KernelAlgorithm::naive, NormalizationConfig{});
  CHECK(meta.at("n") == 2);
  CHECK(meta.at("M") == 4);
  CHECK(meta.at("kernel") == "naive");
  CHECK(meta.at("normalized") == true);
  CHECK(meta.at("psi").at("M") == 4.0);
  CHECK(meta.at("psi").at("a") == 1.0);
}

TEST_CASE("report and experiment documents", "[io]") {
  const TestReport report{0.125, 0.1, 0.02, true};
  const json doc = to_json(report, TestConfig{0.05, 500, 42});
  CHECK(doc.at("mmd") == 0.125);
  CHECK(doc.at("threshold") == 0.1);
  CHECK(doc.at("p_value") == 0.02);
  CHECK(doc.at("reject") == true);
  CHECK(doc.at("alpha") == 0.05);
  CHECK(doc.at("permutations") == 500);
  CHECK(doc.at("seed") == 42);

  const json cfg_doc{{"trials", 4},
                     {"samples_per_class", 8},
                     {"level", 3},
                     {"representation", "euclidean9"},
                     {"seed", 7},
                     {"walk_x", json{{"steps", 20}, {"step_size", 0.2},
                                     {"mean_direction", json::array({0.0, 0.0, 1.0})},
                                     {"concentration", 0.5}}},
                     {"walk_y", json{{"steps", 20}}},
                     {"test", json{{"alpha", 0.01}, {"permutations", 250}}}};
  const ExperimentConfig cfg = experiment_config_from_json(cfg_doc);
  CHECK(cfg.trials == 4);
  CHECK(cfg.samples_per_class == 8);
  CHECK(cfg.level == 3);
  CHECK(cfg.representation == Representation::euclidean9);
  CHECK(cfg.seed == 7);
  CHECK(cfg.walk_x.steps == 20);
  CHECK(cfg.walk_x.step_size == 0.2);
  CHECK(cfg.walk_x.mean_direction[2] == 1.0);
  CHECK(cfg.walk_x.concentration == 0.5);
  CHECK(cfg.walk_y.step_size == 0.1);  // defaults fill the gaps
  CHECK(cfg.test.alpha == 0.01);
  CHECK(cfg.test.permutations == 250);
  CHECK(cfg.gram.normalized);

  // Round-trip through the writer.
  const ExperimentConfig back = experiment_config_from_json(to_json(cfg));
  CHECK(back.trials == cfg.trials);
  CHECK(back.walk_x.mean_direction == cfg.walk_x.mean_direction);

  ExperimentSummary summary;
  summary.trials = 2;
  summary.rejections = 1;
  summary.rejection_rate = 0.5;
  summary.reports = {TestReport{0.2, 0.1, 0.01, true}, TestReport{-0.05, 0.1, 0.7, false}};
  std::ostringstream csv;
  write_trials_csv(csv, summary);
  CHECK(csv.str() == "mmd,threshold,reject\n0.20000000000000001,0.10000000000000001,1\n"
                     "-0.050000000000000003,0.10000000000000001,0\n");
}
