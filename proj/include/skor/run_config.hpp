#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skor/kernels.hpp"
#include "skor/linalg.hpp"
#include "skor/regression.hpp"
#include "skor/sketch.hpp"
#include "skor/synthetic.hpp"
#include "skor/types.hpp"

namespace skor {

/// Where the splits come from: a generated synthetic task or SKMX files.
/// File paths are resolved relative to the config file's directory.
struct DataConfig {
  enum class Source { synthetic, files };
  Source source = Source::synthetic;
  SyntheticSpec synthetic;

  // files mode; empty string = not provided
  std::string x_train, y_train, x_val, y_val, x_test, y_test;
  std::string labels_train, labels_test;  // sparse multilabel sets
  std::string k_train, k_test_train;      // precomputed input Grams
};

struct CandidateConfig {
  enum class Source { train_outputs, files };
  Source source = Source::train_outputs;
  std::string cross_gram;  // n_train x n_c output-kernel values
  std::string diag;        // SKMX column vector of k_y(c,c)
  std::string labels;      // optional sparse label file for candidates
  std::string outputs;     // optional n_c x d raw candidate outputs
};

struct BenchmarkConfig {
  std::vector<Variant> variants;
  std::vector<Index> m_x_grid;  // ignored for variants without that sketch
  std::vector<Index> m_y_grid;
  std::vector<std::uint64_t> seeds;
  SketchKind sketch_kind = SketchKind::subsample;
  double p = 1.0;
  std::string metric = "mse";
  int repeat = 1;  // timing repetitions per cell (median reported)
};

struct SketchDiagConfig {
  std::string target = "input";  // which kernel to diagnose: input | output
  std::vector<SketchKind> kinds;
  std::vector<Index> m_grid;
  double p = 1.0;
  std::uint64_t seed = 0;
  int seeds_per_point = 10;
  bool eval_on_train = false;  // default: held-out evaluation points
};

/// Parsed run configuration. Schema is strict: unknown keys anywhere are
/// rejected, as are lambda/lambda_grid both present or both absent.
struct RunConfig {
  Variant variant = Variant::iokr;
  double lambda = 0.0;
  std::vector<double> lambda_grid;  // selected on the validation split
  KernelSpec input_kernel = KernelSpec::gaussian(1.0);
  KernelSpec output_kernel = KernelSpec::gaussian(1.0);
  std::optional<SketchSpec> input_sketch;
  std::optional<SketchSpec> output_sketch;
  DataConfig data;
  CandidateConfig candidates;
  std::vector<std::string> metrics;  // subset of the RunReport keys
  SolveOptions solve;
  std::optional<BenchmarkConfig> benchmark;
  std::optional<SketchDiagConfig> sketch_diag;

  bool has_lambda_grid() const { return !lambda_grid.empty(); }
  void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& base_dir = "");

}  // namespace skor
