#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liesig/errors.hpp"
#include "liesig/kernel.hpp"
#include "liesig/path.hpp"
#include "liesig/randwalk.hpp"
#include "liesig/stats.hpp"
#include "liesig/tensor.hpp"

namespace liesig {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Group specs: {"kind":"so3"} | {"kind":"euclidean","dim":N}
//            | {"kind":"product","factors":[...]}
// ---------------------------------------------------------------------------

inline json to_json(const GroupSpec& spec) {
  const auto& factors = spec.factors();
  if (factors.size() == 1) {
    if (factors[0].kind == FactorKind::so3) return json{{"kind", "so3"}};
    return json{{"kind", "euclidean"}, {"dim", factors[0].dim}};
  }
  json parts = json::array();
  for (const auto& f : factors) {
    if (f.kind == FactorKind::so3)
      parts.push_back(json{{"kind", "so3"}});
    else
      parts.push_back(json{{"kind", "euclidean"}, {"dim", f.dim}});
  }
  return json{{"kind", "product"}, {"factors", parts}};
}

inline GroupSpec spec_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "so3") return GroupSpec::so3();
    if (kind == "euclidean") return GroupSpec::euclidean(j.at("dim").get<int>());
    if (kind == "product") {
      std::vector<GroupSpec> parts;
      for (const auto& sub : j.at("factors")) parts.push_back(spec_from_json(sub));
      return GroupSpec::product(parts);
    }
    throw ParseError("unknown group kind: " + kind);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad group spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tensors: {"ambient_dim":N,"level":M,"levels":[[...],...]}
// ---------------------------------------------------------------------------

inline json to_json(const TruncatedTensor& t) {
  json levels = json::array();
  for (int m = 0; m <= t.level(); ++m) levels.push_back(t.at_level(m));
  return json{{"ambient_dim", t.ambient_dim()}, {"level", t.level()}, {"levels", levels}};
}

inline TruncatedTensor tensor_from_json(const json& j) {
  try {
    const int dim = j.at("ambient_dim").get<int>();
    const int level = j.at("level").get<int>();
    const auto& levels = j.at("levels");
    if (static_cast<int>(levels.size()) != level + 1)
      throw ParseError("tensor document has wrong number of levels");
    TruncatedTensor t(dim, level);
    for (int m = 0; m <= level; ++m) {
      auto values = levels[static_cast<std::size_t>(m)].get<std::vector<double>>();
      if (values.size() != t.at_level(m).size())
        throw ParseError("tensor level " + std::to_string(m) + " has wrong size");
      t.at_level(m) = std::move(values);
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad tensor document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Paths: {"spec":...,"points":[[...block...],...],"timestamps":[...]?}
// SO(3) blocks are row-major 9-vectors, Euclidean blocks plain vectors.
// ---------------------------------------------------------------------------

inline json to_json(const DiscretePath& path) {
  json points = json::array();
  for (const auto& p : path.points) points.push_back(p.data);
  json j{{"spec", to_json(path.spec)}, {"points", points}};
  if (!path.timestamps.empty()) j["timestamps"] = path.timestamps;
  return j;
}

inline DiscretePath path_from_json(const json& j) {
  DiscretePath path;
  try {
    path.spec = spec_from_json(j.at("spec"));
    for (const auto& entry : j.at("points")) {
      GroupPoint p{entry.get<std::vector<double>>()};
      path.points.push_back(std::move(p));
    }
    if (j.contains("timestamps"))
      path.timestamps = j.at("timestamps").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad path document: ") + e.what());
  }
  if (path.points.size() < 2) throw ParseError("path document needs at least two points");
  if (!path.timestamps.empty() && path.timestamps.size() != path.points.size())
    throw ParseError("timestamps length must match points");
  try {
    for (const auto& p : path.points) validate_point(path.spec, p);
  } catch (const DimensionMismatchError& e) {
    throw ParseError(std::string("invalid point in path document: ") + e.what());
  }
  return path;
}

/// Euclidean path from CSV, one row of coordinates per time step.
inline DiscretePath path_from_csv(std::istream& in) {
  DiscretePath path;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        throw ParseError("bad CSV cell: " + cell);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("CSV rows have inconsistent widths");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ParseError("CSV path needs at least two rows");
  path.spec = GroupSpec::euclidean(static_cast<int>(rows.front().size()));
  for (auto& row : rows) path.points.push_back(GroupPoint{std::move(row)});
  return path;
}

// ---------------------------------------------------------------------------
// CSV matrices (full 17-digit precision so round trips are bit-exact)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

inline void write_csv_matrix(std::ostream& out, const std::vector<double>& values,
                             int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << format_double(values[static_cast<std::size_t>(i) * cols + j]);
    }
    out << '\n';
  }
}

inline std::vector<double> read_csv_matrix(std::istream& in, int& rows, int& cols) {
  std::vector<double> values;
  rows = 0;
  cols = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int width = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (...) {
        throw ParseError("bad CSV cell: " + cell);
      }
      ++width;
    }
    if (cols < 0)
      cols = width;
    else if (width != cols)
      throw ParseError("CSV rows have inconsistent widths");
    ++rows;
  }
  return values;
}

// ---------------------------------------------------------------------------
// Gram output: CSV with a header row of identifiers + metadata sidecar
// {"n","M","kernel","normalized","psi":{"M","a"}}
// ---------------------------------------------------------------------------

inline void write_gram_csv(std::ostream& out, const GramMatrix& gram,
                           const std::vector<std::string>& identifiers) {
  for (int j = 0; j < gram.size; ++j) {
    if (j) out << ',';
    out << identifiers[static_cast<std::size_t>(j)];
  }
  out << '\n';
  write_csv_matrix(out, gram.entries, gram.size, gram.size);
}

inline json gram_metadata(const GramMatrix& gram, KernelAlgorithm algorithm,
                          const NormalizationConfig& norm) {
  return json{{"n", gram.size},
              {"M", gram.level},
              {"kernel", algorithm == KernelAlgorithm::horner ? "horner" : "naive"},
              {"normalized", gram.normalized},
              {"psi", json{{"M", norm.psi_cap}, {"a", norm.psi_decay}}}};
}

// ---------------------------------------------------------------------------
// Test reports and experiment documents
// ---------------------------------------------------------------------------

inline json to_json(const TestReport& report, const TestConfig& cfg) {
  return json{{"mmd", report.mmd},           {"threshold", report.threshold},
              {"p_value", report.p_value},   {"reject", report.reject},
              {"alpha", cfg.alpha},          {"permutations", cfg.permutations},
              {"seed", cfg.seed}};
}

inline json to_json(const WalkConfig& cfg) {
  return json{{"steps", cfg.steps},
              {"step_size", cfg.step_size},
              {"mean_direction", cfg.mean_direction},
              {"concentration", cfg.concentration},
              {"seed", cfg.seed}};
}

inline WalkConfig walk_config_from_json(const json& j) {
  WalkConfig cfg;
  try {
    cfg.steps = j.at("steps").get<int>();
    if (j.contains("step_size")) cfg.step_size = j.at("step_size").get<double>();
    if (j.contains("mean_direction")) {
      const auto dir = j.at("mean_direction").get<std::vector<double>>();
      if (dir.size() != 3) throw ParseError("mean_direction must have three entries");
      cfg.mean_direction = {dir[0], dir[1], dir[2]};
    }
    if (j.contains("concentration"))
      cfg.concentration = j.at("concentration").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad walk config: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    cfg.trials = j.at("trials").get<int>();
    cfg.samples_per_class = j.at("samples_per_class").get<int>();
    cfg.level = j.at("level").get<int>();
    cfg.walk_x = walk_config_from_json(j.at("walk_x"));
    cfg.walk_y = walk_config_from_json(j.at("walk_y"));
    const std::string rep = j.value("representation", std::string("lie"));
    if (rep == "lie")
      cfg.representation = Representation::lie;
    else if (rep == "euclidean9")
      cfg.representation = Representation::euclidean9;
    else
      throw ParseError("unknown representation: " + rep);
    if (j.contains("test")) {
      const auto& t = j.at("test");
      cfg.test.alpha = t.value("alpha", cfg.test.alpha);
      cfg.test.permutations = t.value("permutations", cfg.test.permutations);
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.gram.normalized = j.value("normalize", true);
    const std::string kernel = j.value("kernel", std::string("naive"));
    cfg.gram.algorithm =
        kernel == "horner" ? KernelAlgorithm::horner : KernelAlgorithm::naive;
    const std::string mode = j.value("sig_mode", std::string("continuous"));
    cfg.gram.mode =
        mode == "discrete" ? SignatureMode::discrete : SignatureMode::continuous;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad experiment config: ") + e.what());
  }
  return cfg;
}

inline json to_json(const ExperimentConfig& cfg) {
  return json{
      {"trials", cfg.trials},
      {"samples_per_class", cfg.samples_per_class},
      {"level", cfg.level},
      {"representation",
       cfg.representation == Representation::lie ? "lie" : "euclidean9"},
      {"walk_x", to_json(cfg.walk_x)},
      {"walk_y", to_json(cfg.walk_y)},
      {"test", json{{"alpha", cfg.test.alpha}, {"permutations", cfg.test.permutations}}},
      {"seed", cfg.seed},
      {"normalize", cfg.gram.normalized},
      {"kernel",
       cfg.gram.algorithm == KernelAlgorithm::horner ? "horner" : "naive"},
      {"sig_mode",
       cfg.gram.mode == SignatureMode::discrete ? "discrete" : "continuous"}};
}

inline json to_json(const ExperimentSummary& summary, const ExperimentConfig& cfg) {
  json reports = json::array();
  for (const auto& r : summary.reports)
    reports.push_back(json{{"mmd", r.mmd},
                           {"threshold", r.threshold},
                           {"p_value", r.p_value},
                           {"reject", r.reject}});
  return json{{"trials", summary.trials},
              {"rejections", summary.rejections},
              {"rejection_rate", summary.rejection_rate},
              {"alpha", cfg.test.alpha},
              {"permutations", cfg.test.permutations},
              {"seed", cfg.seed},
              {"config", to_json(cfg)},
              {"reports", reports}};
}

/// Per-trial rows for histogramming the test and null distributions.
inline void write_trials_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "mmd,threshold,reject\n";
  for (const auto& r : summary.reports)
    out << format_double(r.mmd) << ',' << format_double(r.threshold) << ','
        << (r.reject ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ParseError("cannot open " + filename);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ParseError("cannot parse " + filename + ": " + e.what());
  }
}

inline void save_json_file(const std::string& filename, const json& j) {
  std::ofstream out(filename);
  if (!out) throw ParseError("cannot open " + filename + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace liesig
