// Command-line front end: file-based access to signature, Gram, lead-matrix,
// random-walk and hypothesis-test computations.
//
// Exit codes: 0 success, 2 unparseable input, 3 numeric domain error
// (antipodal rotation; offending step index printed), 4 resource budget
// exceeded, 1 anything else.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liesig/liesig.hpp"

namespace fs = std::filesystem;
using namespace liesig;

namespace {

DiscretePath load_path_file(const std::string& filename) {
  if (filename.size() >= 4 && filename.substr(filename.size() - 4) == ".csv") {
    std::ifstream in(filename);
    if (!in) throw ParseError("cannot open " + filename);
    return path_from_csv(in);
  }
  return path_from_json(load_json_file(filename));
}

DiscretePath apply_transform(const DiscretePath& path, const std::string& transform) {
  if (transform == "none" || transform.empty()) return path;
  if (transform == "time") return transform_time(path);
  if (transform == "idinit") return transform_idinit(path);
  if (transform.rfind("swin:", 0) == 0) {
    int lags = 0;
    try {
      lags = std::stoi(transform.substr(5));
    } catch (...) {
      throw ParseError("bad sliding window spec: " + transform);
    }
    if (lags < 0) throw ParseError("sliding window lags must be >= 0");
    return transform_sliding_window(path, lags);
  }
  throw ParseError("unknown transform: " + transform);
}

SignatureMode parse_mode(const std::string& mode) {
  if (mode == "continuous") return SignatureMode::continuous;
  if (mode == "discrete") return SignatureMode::discrete;
  throw ParseError("unknown signature mode: " + mode);
}

struct SignatureArgs {
  std::string input, output;
  int level = 2;
  std::string mode = "continuous";
  std::string transform = "none";
  bool normalize = false;
};

int run_signature(const SignatureArgs& args) {
  const DiscretePath path = apply_transform(load_path_file(args.input), args.transform);
  TruncatedTensor sig = signature_with_mode(discrete_derivative(path), args.level,
                                            parse_mode(args.mode));
  if (args.normalize) sig = normalize_tensor(sig).tensor;
  save_json_file(args.output, to_json(sig));
  return 0;
}

struct GramArgs {
  std::string input, output;
  int level = 2;
  std::string kernel = "horner";
  std::string mode = "continuous";
  bool normalize = false;
};

std::vector<std::string> collect_inputs(const std::string& input) {
  std::vector<std::string> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".json" || ext == ".csv") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
  } else {
    std::ifstream in(input);
    if (!in) throw ParseError("cannot open " + input);
    const fs::path base = fs::path(input).parent_path();
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      fs::path p(line);
      if (p.is_relative()) p = base / p;
      files.push_back(p.string());
    }
  }
  if (files.empty()) throw ParseError("no input path files found in " + input);
  return files;
}

int run_gram(const GramArgs& args) {
  const std::vector<std::string> files = collect_inputs(args.input);
  std::vector<DiscretePath> paths;
  std::vector<std::string> identifiers;
  for (const auto& f : files) {
    paths.push_back(load_path_file(f));
    identifiers.push_back(fs::path(f).stem().string());
  }
  GramOptions opts;
  opts.algorithm = args.kernel == "naive" ? KernelAlgorithm::naive : KernelAlgorithm::horner;
  if (args.kernel != "naive" && args.kernel != "horner")
    throw ParseError("unknown kernel: " + args.kernel);
  opts.normalized = args.normalize;
  opts.mode = parse_mode(args.mode);
  const GramMatrix gram = gram_matrix(paths, args.level, opts);
  std::ofstream out(args.output);
  if (!out) throw ParseError("cannot open " + args.output + " for writing");
  write_gram_csv(out, gram, identifiers);
  save_json_file(args.output + ".meta.json",
                 gram_metadata(gram, opts.algorithm, opts.normalization));
  return 0;
}

struct HypotestArgs {
  std::string config, output;
  std::optional<std::uint64_t> seed;
};

std::string trials_csv_name(const std::string& output) {
  const std::string suffix = ".json";
  if (output.size() > suffix.size() &&
      output.substr(output.size() - suffix.size()) == suffix)
    return output.substr(0, output.size() - suffix.size()) + ".trials.csv";
  return output + ".trials.csv";
}

int run_hypotest(const HypotestArgs& args) {
  ExperimentConfig cfg = experiment_config_from_json(load_json_file(args.config));
  if (args.seed) cfg.seed = *args.seed;
  const ExperimentSummary summary = run_experiment(cfg);
  save_json_file(args.output, to_json(summary, cfg));
  std::ofstream csv(trials_csv_name(args.output));
  if (!csv) throw ParseError("cannot open trials CSV for writing");
  write_trials_csv(csv, summary);
  return 0;
}

struct RandwalkArgs {
  std::string config, outdir;
  std::optional<std::uint64_t> seed;
};

int run_randwalk(const RandwalkArgs& args) {
  const json j = load_json_file(args.config);
  WalkConfig cfg = walk_config_from_json(j);
  int count = 1;
  try {
    count = j.value("count", 1);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad walk config: ") + e.what());
  }
  if (count < 1) throw ParseError("walk config needs count >= 1");
  if (args.seed) cfg.seed = *args.seed;
  fs::create_directories(args.outdir);
  for (int i = 0; i < count; ++i) {
    Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(i)));
    const DiscretePath walk = random_walk_so3(cfg, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "walk_%04d.json", i);
    save_json_file((fs::path(args.outdir) / name).string(), to_json(walk));
  }
  return 0;
}

struct LeadmatArgs {
  std::string input, output;
};

int run_leadmat(const LeadmatArgs& args) {
  const DiscretePath path = load_path_file(args.input);
  const std::vector<double> lead = lead_matrix(path);
  const int n = path.spec.algebra_dim();
  std::ofstream out(args.output);
  if (!out) throw ParseError("cannot open " + args.output + " for writing");
  write_csv_matrix(out, lead, n, n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"path signatures and signature kernels for Lie group time series"};
  app.require_subcommand(1);

  SignatureArgs sig_args;
  auto* sig_cmd = app.add_subcommand("signature", "compute the signature of one path");
  sig_cmd->add_option("input", sig_args.input, "path document (.json) or Euclidean CSV")
      ->required();
  sig_cmd->add_option("output", sig_args.output, "output tensor document")->required();
  sig_cmd->add_option("--level", sig_args.level, "truncation level")->required();
  sig_cmd->add_option("--mode", sig_args.mode, "continuous|discrete");
  sig_cmd->add_option("--transform", sig_args.transform, "none|time|idinit|swin:m");
  sig_cmd->add_flag("--normalize", sig_args.normalize, "dilation-normalize the signature");

  GramArgs gram_args;
  auto* gram_cmd = app.add_subcommand("gram", "pairwise signature kernels of a path set");
  gram_cmd->add_option("input", gram_args.input, "directory of path files or manifest")
      ->required();
  gram_cmd->add_option("output", gram_args.output, "output CSV")->required();
  gram_cmd->add_option("--level", gram_args.level, "truncation level")->required();
  gram_cmd->add_option("--kernel", gram_args.kernel, "horner|naive");
  gram_cmd->add_option("--mode", gram_args.mode, "continuous|discrete");
  gram_cmd->add_flag("--normalize", gram_args.normalize, "use normalized signatures");

  HypotestArgs hypo_args;
  auto* hypo_cmd = app.add_subcommand("hypotest", "two-sample random-walk experiment");
  hypo_cmd->add_option("config", hypo_args.config, "experiment config document")->required();
  hypo_cmd->add_option("output", hypo_args.output, "output report document")->required();
  hypo_cmd->add_option("--seed", hypo_args.seed, "override the config seed");

  RandwalkArgs walk_args;
  auto* walk_cmd = app.add_subcommand("randwalk", "generate drifted SO(3) random walks");
  walk_cmd->add_option("config", walk_args.config, "walk config document")->required();
  walk_cmd->add_option("outdir", walk_args.outdir, "output directory")->required();
  walk_cmd->add_option("--seed", walk_args.seed, "override the config seed");

  LeadmatArgs lead_args;
  auto* lead_cmd = app.add_subcommand("leadmat", "export the lead matrix of one path");
  lead_cmd->add_option("input", lead_args.input, "path document")->required();
  lead_cmd->add_option("output", lead_args.output, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sig_cmd->parsed()) return run_signature(sig_args);
    if (gram_cmd->parsed()) return run_gram(gram_args);
    if (hypo_cmd->parsed()) return run_hypotest(hypo_args);
    if (walk_cmd->parsed()) return run_randwalk(walk_args);
    if (lead_cmd->parsed()) return run_leadmat(lead_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const AntipodalRotationError& e) {
    std::cerr << "error: " << e.what();
    if (e.step_index >= 0) std::cerr << " (step " << e.step_index << ")";
    std::cerr << '\n';
    return 3;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
