#include "skor/run_config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace skor {

namespace {

using detail::check_keys;
using detail::json;
using detail::require;

const std::set<std::string>& known_metrics() {
  static const std::set<std::string> metrics = {
      "mse", "f1", "top1", "top5", "top10", "kernel_loss_mean"};
  return metrics;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

KernelSpec parse_kernel(const json& j, const std::string& ctx) {
  check_keys(j, {"kind", "sigma2"}, ctx);
  KernelSpec spec;
  spec.kind = kernel_kind_from_name(require(j, "kind", ctx).get<std::string>());
  if (j.contains("sigma2")) spec.sigma2 = j["sigma2"].get<double>();
  spec.validate();
  return spec;
}

SketchSpec parse_sketch(const json& j, const std::string& ctx) {
  check_keys(j, {"kind", "m", "p", "seed"}, ctx);
  SketchSpec spec;
  spec.kind = sketch_kind_from_name(require(j, "kind", ctx).get<std::string>());
  spec.m = require(j, "m", ctx).get<std::int64_t>();
  if (j.contains("p")) spec.p = j["p"].get<double>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  spec.validate();
  return spec;
}

SyntheticSpec parse_synthetic(const json& j, const std::string& ctx) {
  check_keys(j,
             {"n", "n_val", "n_te", "d", "seed", "c_decay", "e_scale", "e_decay"},
             ctx);
  SyntheticSpec spec;
  spec.n = require(j, "n", ctx).get<std::int64_t>();
  spec.n_val = require(j, "n_val", ctx).get<std::int64_t>();
  spec.n_te = require(j, "n_te", ctx).get<std::int64_t>();
  spec.d = require(j, "d", ctx).get<std::int64_t>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("c_decay")) spec.c_decay = j["c_decay"].get<double>();
  if (j.contains("e_scale")) spec.e_scale = j["e_scale"].get<double>();
  if (j.contains("e_decay")) spec.e_decay = j["e_decay"].get<double>();
  spec.validate();
  return spec;
}

DataConfig parse_data(const json& j, const std::string& base_dir) {
  const std::string ctx = "data";
  DataConfig data;
  const std::string type = require(j, "type", ctx).get<std::string>();
  if (type == "synthetic") {
    check_keys(j, {"type", "synthetic"}, ctx);
    data.source = DataConfig::Source::synthetic;
    data.synthetic = parse_synthetic(require(j, "synthetic", ctx), "data.synthetic");
    return data;
  }
  if (type != "files") {
    throw std::invalid_argument("data.type must be 'synthetic' or 'files'");
  }
  check_keys(j,
             {"type", "x_train", "y_train", "x_val", "y_val", "x_test", "y_test",
              "labels_train", "labels_test", "k_train", "k_test_train"},
             ctx);
  data.source = DataConfig::Source::files;
  const auto grab = [&](const char* key, std::string& slot) {
    if (j.contains(key)) slot = resolve(j[key].get<std::string>(), base_dir);
  };
  grab("x_train", data.x_train);
  grab("y_train", data.y_train);
  grab("x_val", data.x_val);
  grab("y_val", data.y_val);
  grab("x_test", data.x_test);
  grab("y_test", data.y_test);
  grab("labels_train", data.labels_train);
  grab("labels_test", data.labels_test);
  grab("k_train", data.k_train);
  grab("k_test_train", data.k_test_train);
  return data;
}

CandidateConfig parse_candidates(const json& j, const std::string& base_dir) {
  const std::string ctx = "candidates";
  CandidateConfig cand;
  const std::string source = require(j, "source", ctx).get<std::string>();
  if (source == "train_outputs") {
    check_keys(j, {"source"}, ctx);
    cand.source = CandidateConfig::Source::train_outputs;
    return cand;
  }
  if (source != "files") {
    throw std::invalid_argument("candidates.source must be 'train_outputs' or 'files'");
  }
  check_keys(j, {"source", "cross_gram", "diag", "labels", "outputs"}, ctx);
  cand.source = CandidateConfig::Source::files;
  cand.cross_gram = resolve(require(j, "cross_gram", ctx).get<std::string>(), base_dir);
  cand.diag = resolve(require(j, "diag", ctx).get<std::string>(), base_dir);
  if (j.contains("labels")) {
    cand.labels = resolve(j["labels"].get<std::string>(), base_dir);
  }
  if (j.contains("outputs")) {
    cand.outputs = resolve(j["outputs"].get<std::string>(), base_dir);
  }
  return cand;
}

SolveOptions parse_solve(const json& j) {
  check_keys(j, {"pinv_rtol", "jitter"}, "solve");
  SolveOptions opts;
  if (j.contains("pinv_rtol")) opts.pinv_rtol = j["pinv_rtol"].get<double>();
  if (j.contains("jitter")) opts.jitter = j["jitter"].get<double>();
  opts.validate();
  return opts;
}

BenchmarkConfig parse_benchmark(const json& j) {
  const std::string ctx = "benchmark";
  check_keys(j,
             {"variants", "m_x_grid", "m_y_grid", "seeds", "sketch_kind", "p",
              "metric", "repeat"},
             ctx);
  BenchmarkConfig b;
  for (const auto& v : require(j, "variants", ctx)) {
    b.variants.push_back(variant_from_name(v.get<std::string>()));
  }
  if (b.variants.empty()) {
    throw std::invalid_argument("benchmark.variants must be nonempty");
  }
  if (j.contains("m_x_grid")) {
    b.m_x_grid = j["m_x_grid"].get<std::vector<Index>>();
  }
  if (j.contains("m_y_grid")) {
    b.m_y_grid = j["m_y_grid"].get<std::vector<Index>>();
  }
  b.seeds = require(j, "seeds", ctx).get<std::vector<std::uint64_t>>();
  if (b.seeds.empty()) throw std::invalid_argument("benchmark.seeds must be nonempty");
  if (j.contains("sketch_kind")) {
    b.sketch_kind = sketch_kind_from_name(j["sketch_kind"].get<std::string>());
  }
  if (j.contains("p")) b.p = j["p"].get<double>();
  if (!(b.p > 0.0 && b.p <= 1.0)) {
    throw std::invalid_argument("benchmark.p must lie in (0, 1]");
  }
  if (j.contains("metric")) b.metric = j["metric"].get<std::string>();
  if (!known_metrics().count(b.metric)) {
    throw std::invalid_argument("benchmark.metric unknown: " + b.metric);
  }
  if (j.contains("repeat")) b.repeat = j["repeat"].get<int>();
  if (b.repeat < 1) throw std::invalid_argument("benchmark.repeat must be >= 1");

  const bool any_input = std::any_of(
      b.variants.begin(), b.variants.end(), [](Variant v) {
        return v == Variant::siokr || v == Variant::sisokr;
      });
  const bool any_output = std::any_of(
      b.variants.begin(), b.variants.end(), [](Variant v) {
        return v == Variant::isokr || v == Variant::sisokr;
      });
  if (any_input && b.m_x_grid.empty()) {
    throw std::invalid_argument("benchmark.m_x_grid required for input-sketched variants");
  }
  if (any_output && b.m_y_grid.empty()) {
    throw std::invalid_argument("benchmark.m_y_grid required for output-sketched variants");
  }
  for (Index m : b.m_x_grid) {
    if (m < 1) throw std::invalid_argument("benchmark.m_x_grid entries must be >= 1");
  }
  for (Index m : b.m_y_grid) {
    if (m < 1) throw std::invalid_argument("benchmark.m_y_grid entries must be >= 1");
  }
  return b;
}

SketchDiagConfig parse_sketch_diag(const json& j) {
  const std::string ctx = "sketch_diag";
  check_keys(j,
             {"target", "kinds", "m_grid", "p", "seed", "seeds_per_point",
              "eval_on_train"},
             ctx);
  SketchDiagConfig d;
  if (j.contains("target")) d.target = j["target"].get<std::string>();
  if (d.target != "input" && d.target != "output") {
    throw std::invalid_argument("sketch_diag.target must be 'input' or 'output'");
  }
  for (const auto& v : require(j, "kinds", ctx)) {
    d.kinds.push_back(sketch_kind_from_name(v.get<std::string>()));
  }
  if (d.kinds.empty()) throw std::invalid_argument("sketch_diag.kinds must be nonempty");
  d.m_grid = require(j, "m_grid", ctx).get<std::vector<Index>>();
  if (d.m_grid.empty()) throw std::invalid_argument("sketch_diag.m_grid must be nonempty");
  for (Index m : d.m_grid) {
    if (m < 1) throw std::invalid_argument("sketch_diag.m_grid entries must be >= 1");
  }
  if (j.contains("p")) d.p = j["p"].get<double>();
  if (!(d.p > 0.0 && d.p <= 1.0)) {
    throw std::invalid_argument("sketch_diag.p must lie in (0, 1]");
  }
  if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("seeds_per_point")) {
    d.seeds_per_point = j["seeds_per_point"].get<int>();
  }
  if (d.seeds_per_point < 1) {
    throw std::invalid_argument("sketch_diag.seeds_per_point must be >= 1");
  }
  if (j.contains("eval_on_train")) d.eval_on_train = j["eval_on_train"].get<bool>();
  return d;
}

}  // namespace

void RunConfig::validate() const {
  const bool scalar = lambda > 0.0;
  if (scalar == has_lambda_grid()) {
    throw std::invalid_argument(
        "config must set exactly one of 'lambda' and 'lambda_grid'");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0)) {
      throw std::invalid_argument("lambda_grid entries must be positive");
    }
  }
  input_kernel.validate();
  output_kernel.validate();
  if (input_sketch) input_sketch->validate();
  if (output_sketch) output_sketch->validate();
  solve.validate();

  for (const std::string& m : metrics) {
    if (!known_metrics().count(m)) {
      throw std::invalid_argument("unknown metric: " + m);
    }
  }

  // Sketch presence must match the variant for train/eval-style runs;
  // benchmark and sketch-diag runs carry their own sketch grids.
  if (!benchmark && !sketch_diag) {
    const bool needs_rx = variant == Variant::siokr || variant == Variant::sisokr;
    const bool needs_ry = variant == Variant::isokr || variant == Variant::sisokr;
    if (needs_rx != input_sketch.has_value()) {
      throw std::invalid_argument(
          needs_rx ? "variant requires input_sketch" : "variant takes no input_sketch");
    }
    if (needs_ry != output_sketch.has_value()) {
      throw std::invalid_argument(
          needs_ry ? "variant requires output_sketch" : "variant takes no output_sketch");
    }
  }

  if (data.source == DataConfig::Source::files) {
    const bool has_input = !data.x_train.empty() || !data.k_train.empty();
    if (!has_input) {
      throw std::invalid_argument(
          "files data needs x_train or a precomputed k_train");
    }
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  check_keys(j,
             {"variant", "lambda", "lambda_grid", "input_kernel", "output_kernel",
              "input_sketch", "output_sketch", "data", "candidates", "metrics",
              "solve", "benchmark", "sketch_diag"},
             "config");

  RunConfig cfg;
  cfg.variant =
      variant_from_name(require(j, "variant", "config").get<std::string>());
  if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
  if (j.contains("lambda_grid")) {
    cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
  }
  if (j.contains("input_kernel")) {
    cfg.input_kernel = parse_kernel(j["input_kernel"], "input_kernel");
  }
  if (j.contains("output_kernel")) {
    cfg.output_kernel = parse_kernel(j["output_kernel"], "output_kernel");
  }
  if (j.contains("input_sketch")) {
    cfg.input_sketch = parse_sketch(j["input_sketch"], "input_sketch");
  }
  if (j.contains("output_sketch")) {
    cfg.output_sketch = parse_sketch(j["output_sketch"], "output_sketch");
  }
  cfg.data = parse_data(require(j, "data", "config"), base_dir);
  if (j.contains("candidates")) {
    cfg.candidates = parse_candidates(j["candidates"], base_dir);
  }
  if (j.contains("metrics")) {
    cfg.metrics = j["metrics"].get<std::vector<std::string>>();
  } else {
    cfg.metrics = {"mse"};
  }
  if (j.contains("solve")) cfg.solve = parse_solve(j["solve"]);
  if (j.contains("benchmark")) cfg.benchmark = parse_benchmark(j["benchmark"]);
  if (j.contains("sketch_diag")) {
    cfg.sketch_diag = parse_sketch_diag(j["sketch_diag"]);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(),
                           std::filesystem::path(path).parent_path().string());
}

}  // namespace skor
