// Command-line driver: synth | train | eval | benchmark | sketch-diag.
// Every command reads a JSON run configuration and writes its artifacts
// (SKMX matrices with CSV mirrors, JSON reports, CSV tables) under --out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "skor/data_io.hpp"
#include "skor/decode.hpp"
#include "skor/diagnostics.hpp"
#include "skor/kernels.hpp"
#include "skor/metrics.hpp"
#include "skor/regression.hpp"
#include "skor/run_config.hpp"
#include "skor/sketch.hpp"
#include "skor/synthetic.hpp"
#include "skor/types.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace skor;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Warm-up run excluded, then `repeat` timed repetitions; median reported.
template <typename F>
double timed_median(int repeat, F&& op) {
  op();
  std::vector<double> reps;
  reps.reserve(static_cast<std::size_t>(repeat));
  for (int r = 0; r < repeat; ++r) {
    const double t0 = now_seconds();
    op();
    reps.push_back(now_seconds() - t0);
  }
  return median(reps);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& out) {
  fs::create_directories(out);
}

void write_matrix_pair(const MatrixRef& M, const std::string& out,
                       const std::string& stem) {
  save_matrix(M, join(out, stem + ".skmx"));
  save_matrix_csv(M, join(out, stem + ".csv"));
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Data preparation shared by train / eval / benchmark / sketch-diag.

struct Dataset {
  GramMatrix K_train;      // input Gram, n x n
  Matrix K_val_train;      // 0x0 when no validation split
  Matrix K_test_train;     // 0x0 when no test split
  Matrix X_train, X_val, X_test;  // raw inputs; 0x0 in precomputed mode
  Matrix Y_train, Y_val, Y_test;  // raw outputs; 0x0 when not provided
  std::optional<LabelData> labels_train, labels_test;

  Index n_train() const { return K_train.rows(); }
};

Dataset prepare_data(const RunConfig& cfg, std::optional<std::uint64_t> seed) {
  Dataset d;
  if (cfg.data.source == DataConfig::Source::synthetic) {
    SyntheticSpec spec = cfg.data.synthetic;
    if (seed) spec.seed = *seed;
    const SyntheticDataset ds = generate(spec);
    d.X_train = ds.X_train;
    d.X_val = ds.X_val;
    d.X_test = ds.X_test;
    d.Y_train = ds.Y_train;
    d.Y_val = ds.Y_val;
    d.Y_test = ds.Y_test;
    d.K_train = gram(cfg.input_kernel, d.X_train);
    d.K_val_train = cross_gram(cfg.input_kernel, d.X_val, d.X_train);
    d.K_test_train = cross_gram(cfg.input_kernel, d.X_test, d.X_train);
    return d;
  }

  const DataConfig& f = cfg.data;
  if (!f.k_train.empty()) {
    d.K_train = load_gram(f.k_train);
    if (!d.K_train.symmetric || d.K_train.rows() != d.K_train.cols()) {
      throw std::runtime_error("k_train must be a symmetric square Gram");
    }
    if (!f.k_test_train.empty()) d.K_test_train = load_matrix(f.k_test_train);
  } else {
    d.X_train = load_matrix(f.x_train);
    d.K_train = gram(cfg.input_kernel, d.X_train);
    if (!f.x_val.empty()) {
      d.X_val = load_matrix(f.x_val);
      d.K_val_train = cross_gram(cfg.input_kernel, d.X_val, d.X_train);
    }
    if (!f.x_test.empty()) {
      d.X_test = load_matrix(f.x_test);
      d.K_test_train = cross_gram(cfg.input_kernel, d.X_test, d.X_train);
    } else if (!f.k_test_train.empty()) {
      d.K_test_train = load_matrix(f.k_test_train);
    }
  }
  if (!f.y_train.empty()) d.Y_train = load_matrix(f.y_train);
  if (!f.y_val.empty()) d.Y_val = load_matrix(f.y_val);
  if (!f.y_test.empty()) d.Y_test = load_matrix(f.y_test);
  if (!f.labels_train.empty()) d.labels_train = load_labels(f.labels_train);
  if (!f.labels_test.empty()) d.labels_test = load_labels(f.labels_test);
  return d;
}

GramMatrix output_gram(const RunConfig& cfg, const Dataset& d) {
  if (d.Y_train.rows() == 0) {
    throw std::runtime_error("this run needs training outputs (y_train)");
  }
  return gram(cfg.output_kernel, d.Y_train);
}

struct Candidates {
  CandidateSet set;
  Matrix outputs;  // raw candidate outputs; 0x0 for file-based candidates
  std::optional<LabelData> labels;
};

Candidates prepare_candidates(const RunConfig& cfg, const Dataset& d,
                              const GramMatrix& KY) {
  Candidates c;
  if (cfg.candidates.source == CandidateConfig::Source::train_outputs) {
    c.set.cross_gram = KY.values;
    c.set.diag = KY.diag;
    c.outputs = d.Y_train;
    c.labels = d.labels_train;
    return c;
  }
  c.set.cross_gram = load_matrix(cfg.candidates.cross_gram);
  const Matrix diag = load_matrix(cfg.candidates.diag);
  if (diag.cols() != 1) {
    throw std::runtime_error("candidate diag file must be a column vector");
  }
  c.set.diag = diag.col(0);
  if (!cfg.candidates.labels.empty()) {
    c.labels = load_labels(cfg.candidates.labels);
  }
  if (!cfg.candidates.outputs.empty()) {
    c.outputs = load_matrix(cfg.candidates.outputs);
    if (c.outputs.rows() != c.set.size()) {
      throw std::runtime_error("candidate outputs row count mismatch");
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Fitting.

FittedModel fit_any(Variant v, const GramMatrix& KX, const GramMatrix* KY,
                    const SketchOperator* Rx, const SketchOperator* Ry,
                    const RidgeConfig& ridge) {
  switch (v) {
    case Variant::iokr:
      return fit_iokr(KX, ridge);
    case Variant::siokr:
      return fit_siokr(KX, *Rx, ridge);
    case Variant::isokr:
      return fit_isokr(KX, *KY, *Ry, ridge);
    case Variant::sisokr:
      return fit_sisokr(KX, *KY, *Rx, *Ry, ridge);
  }
  throw std::logic_error("unreachable variant");
}

// Mean surrogate squared loss on the validation split: the ridge objective
// the estimators minimize, so it is meaningful for every variant and kernel.
double validation_surrogate_loss(const FittedModel& model, const Dataset& d,
                                 const GramMatrix& KY, const Matrix& K_y_cross,
                                 const Vector& diag_y_val) {
  const Matrix A = coefficients(model, d.K_val_train);
  double total = 0.0;
  for (Index i = 0; i < A.rows(); ++i) {
    const double hh = (A.row(i) * KY.values * A.row(i).transpose()).value();
    total += hh - 2.0 * A.row(i).dot(K_y_cross.col(i)) + diag_y_val[i];
  }
  return total / static_cast<double>(A.rows());
}

double select_lambda(const RunConfig& cfg, const Dataset& d,
                     const GramMatrix& KY,
                     const std::function<FittedModel(double)>& fit_at) {
  if (d.K_val_train.rows() == 0 || d.Y_val.rows() == 0) {
    throw std::runtime_error("lambda_grid selection needs a validation split "
                             "(x_val and y_val)");
  }
  const Matrix K_y_cross = cross_gram(cfg.output_kernel, d.Y_train, d.Y_val);
  Vector diag_y_val(d.Y_val.rows());
  for (Index i = 0; i < d.Y_val.rows(); ++i) {
    diag_y_val[i] = eval_kernel(cfg.output_kernel, d.Y_val.row(i).transpose(),
                                d.Y_val.row(i).transpose());
  }
  double best_lambda = cfg.lambda_grid.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double lambda : cfg.lambda_grid) {
    const FittedModel model = fit_at(lambda);
    const double loss =
        validation_surrogate_loss(model, d, KY, K_y_cross, diag_y_val);
    if (loss < best_loss) {
      best_loss = loss;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

// ---------------------------------------------------------------------------
// Metrics.

Index max_rank_needed(const std::vector<std::string>& names) {
  Index k = 1;
  for (const std::string& n : names) {
    if (n == "top5") k = std::max<Index>(k, 5);
    if (n == "top10") k = std::max<Index>(k, 10);
  }
  return k;
}

bool needs_decode(const std::vector<std::string>& names) {
  for (const std::string& n : names) {
    if (n != "mse") return true;
  }
  return false;
}

struct EvalOutput {
  std::map<std::string, double> values;
  double inference_seconds = 0.0;
};

EvalOutput run_metrics(const std::vector<std::string>& names,
                       const FittedModel& model, const Dataset& d,
                       const Matrix& K_eval_train, const Matrix& Y_eval,
                       const std::optional<LabelData>& labels_eval,
                       const Candidates& cand, const KernelSpec& ky,
                       int repeat) {
  EvalOutput out;
  const Index q = K_eval_train.rows();

  std::vector<Prediction> preds;
  if (needs_decode(names)) {
    const Index k = std::min<Index>(max_rank_needed(names), cand.set.size());
    out.inference_seconds = timed_median(repeat, [&] {
      preds = decode(model, K_eval_train, cand.set, k);
    });
  }

  for (const std::string& name : names) {
    if (name == "mse") {
      if (d.Y_train.rows() == 0 || Y_eval.rows() == 0) {
        throw std::runtime_error("mse needs y_train and the split's outputs");
      }
      const Matrix W = coefficients(model, K_eval_train);
      out.values[name] = mse(W * d.Y_train, Y_eval);
      continue;
    }
    if (name == "f1") {
      if (!cand.labels || !labels_eval) {
        throw std::runtime_error("f1 needs candidate labels and split labels");
      }
      std::vector<LabelSet> pred_sets(static_cast<std::size_t>(q));
      std::vector<LabelSet> truth_sets(static_cast<std::size_t>(q));
      for (Index t = 0; t < q; ++t) {
        const Index c = preds[static_cast<std::size_t>(t)].index;
        const auto& ex = cand.labels->examples;
        if (static_cast<std::size_t>(c) < ex.size()) {
          pred_sets[static_cast<std::size_t>(t)] = ex[static_cast<std::size_t>(c)];
        }
        const auto& tex = labels_eval->examples;
        if (static_cast<std::size_t>(t) < tex.size()) {
          truth_sets[static_cast<std::size_t>(t)] = tex[static_cast<std::size_t>(t)];
        }
      }
      out.values[name] = f1_dataset(pred_sets, truth_sets);
      continue;
    }
    if (name == "top1" || name == "top5" || name == "top10") {
      if (cand.outputs.rows() == 0 || Y_eval.rows() == 0) {
        throw std::runtime_error(
            name + " needs raw candidate outputs (train_outputs candidates)");
      }
      // Truth id = first candidate exactly equal to the target output; absent
      // targets simply never rank as hits.
      std::vector<Index> truth(static_cast<std::size_t>(q), Index(-1));
      for (Index t = 0; t < q; ++t) {
        for (Index c = 0; c < cand.outputs.rows(); ++c) {
          if ((cand.outputs.row(c).array() == Y_eval.row(t).array()).all()) {
            truth[static_cast<std::size_t>(t)] = c;
            break;
          }
        }
      }
      std::vector<std::vector<Index>> ranked(static_cast<std::size_t>(q));
      for (Index t = 0; t < q; ++t) {
        ranked[static_cast<std::size_t>(t)] = preds[static_cast<std::size_t>(t)].topk;
      }
      const Index k = name == "top1" ? 1 : (name == "top5" ? 5 : 10);
      out.values[name] = topk_accuracy(ranked, truth, k);
      continue;
    }
    if (name == "kernel_loss_mean") {
      if (cand.outputs.rows() == 0 || Y_eval.rows() == 0) {
        throw std::runtime_error(
            "kernel_loss_mean needs raw candidate outputs and split outputs");
      }
      double total = 0.0;
      for (Index t = 0; t < q; ++t) {
        const Index c = preds[static_cast<std::size_t>(t)].index;
        const Vector y = Y_eval.row(t).transpose();
        const Vector p = cand.outputs.row(c).transpose();
        total += kernel_loss(eval_kernel(ky, y, y), cand.set.diag[c],
                             eval_kernel(ky, y, p));
      }
      out.values[name] = total / static_cast<double>(q);
      continue;
    }
    throw std::runtime_error("unknown metric: " + name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

void cmd_synth(const RunConfig& cfg, const std::string& out,
               std::optional<std::uint64_t> seed) {
  if (cfg.data.source != DataConfig::Source::synthetic) {
    throw std::runtime_error("synth needs data.type = synthetic");
  }
  SyntheticSpec spec = cfg.data.synthetic;
  if (seed) spec.seed = *seed;
  const SyntheticDataset ds = generate(spec);
  ensure_out_dir(out);
  write_matrix_pair(ds.X_train, out, "x_train");
  write_matrix_pair(ds.Y_train, out, "y_train");
  write_matrix_pair(ds.X_val, out, "x_val");
  write_matrix_pair(ds.Y_val, out, "y_val");
  write_matrix_pair(ds.X_test, out, "x_test");
  write_matrix_pair(ds.Y_test, out, "y_test");
  json doc;
  doc["n"] = spec.n;
  doc["n_val"] = spec.n_val;
  doc["n_te"] = spec.n_te;
  doc["d"] = spec.d;
  doc["seed"] = spec.seed;
  doc["c_decay"] = spec.c_decay;
  doc["e_scale"] = spec.e_scale;
  doc["e_decay"] = spec.e_decay;
  write_json(doc, join(out, "synth_spec.json"));
}

struct TrainedModel {
  FittedModel model;
  double lambda = 0.0;
  bool grid_selected = false;
  double fit_seconds = 0.0;
};

TrainedModel fit_from_config(const RunConfig& cfg, const Dataset& d,
                             std::optional<std::uint64_t> seed, int repeat) {
  const Index n = d.n_train();
  const bool needs_rx =
      cfg.variant == Variant::siokr || cfg.variant == Variant::sisokr;
  const bool needs_ry =
      cfg.variant == Variant::isokr || cfg.variant == Variant::sisokr;

  std::optional<SketchOperator> Rx, Ry;
  if (needs_rx) {
    SketchSpec spec = *cfg.input_sketch;
    if (seed) spec.seed = *seed + 1;
    Rx = draw(spec, n);
  }
  if (needs_ry) {
    SketchSpec spec = *cfg.output_sketch;
    if (seed) spec.seed = *seed + 2;
    Ry = draw(spec, n);
  }

  std::optional<GramMatrix> KY;
  if (needs_ry || cfg.has_lambda_grid()) KY = output_gram(cfg, d);

  RidgeConfig ridge;
  ridge.solve = cfg.solve;

  TrainedModel result;
  if (cfg.has_lambda_grid()) {
    const auto fit_at = [&](double lambda) {
      RidgeConfig r = ridge;
      r.lambda = lambda;
      return fit_any(cfg.variant, d.K_train, KY ? &*KY : nullptr,
                     Rx ? &*Rx : nullptr, Ry ? &*Ry : nullptr, r);
    };
    result.lambda = select_lambda(cfg, d, *KY, fit_at);
    result.grid_selected = true;
  } else {
    result.lambda = cfg.lambda;
  }
  ridge.lambda = result.lambda;

  result.fit_seconds = timed_median(repeat, [&] {
    result.model = fit_any(cfg.variant, d.K_train, KY ? &*KY : nullptr,
                           Rx ? &*Rx : nullptr, Ry ? &*Ry : nullptr, ridge);
  });
  return result;
}

void cmd_train(const RunConfig& cfg, const std::string& out,
               std::optional<std::uint64_t> seed, int repeat) {
  const Dataset d = prepare_data(cfg, seed);
  const TrainedModel trained = fit_from_config(cfg, d, seed, repeat);
  ensure_out_dir(out);
  save_model(trained.model, join(out, "model"));
  json doc;
  doc["command"] = "train";
  doc["variant"] = variant_name(cfg.variant);
  doc["lambda"] = trained.lambda;
  doc["lambda_grid_selected"] = trained.grid_selected;
  doc["fit_seconds"] = trained.fit_seconds;
  doc["n_train"] = d.n_train();
  doc["repeat"] = repeat;
  write_json(doc, join(out, "train_report.json"));
}

void cmd_eval(const RunConfig& cfg, const std::string& out,
              const std::string& model_prefix, const std::string& split,
              std::optional<std::uint64_t> seed, int repeat) {
  const Dataset d = prepare_data(cfg, seed);

  const Matrix* K_eval = nullptr;
  const Matrix* Y_eval = nullptr;
  const std::optional<LabelData>* labels_eval = nullptr;
  static const std::optional<LabelData> no_labels;
  if (split == "test") {
    K_eval = &d.K_test_train;
    Y_eval = &d.Y_test;
    labels_eval = &d.labels_test;
  } else if (split == "val") {
    K_eval = &d.K_val_train;
    Y_eval = &d.Y_val;
    labels_eval = &no_labels;
  } else if (split == "train") {
    K_eval = &d.K_train.values;
    Y_eval = &d.Y_train;
    labels_eval = &d.labels_train;
  } else {
    throw std::runtime_error("--split must be train, val, or test");
  }
  if (K_eval->rows() == 0) {
    throw std::runtime_error("no inputs available for split '" + split + "'");
  }

  TrainedModel trained;
  if (!model_prefix.empty()) {
    trained.model = load_model(model_prefix);
    trained.lambda = trained.model.lambda;
    if (trained.model.n_train != d.n_train()) {
      throw std::runtime_error("model was fitted on a different training set");
    }
  } else {
    trained = fit_from_config(cfg, d, seed, repeat);
  }

  const GramMatrix KY = output_gram(cfg, d);
  const Candidates cand = prepare_candidates(cfg, d, KY);
  cand.set.validate(d.n_train());

  const EvalOutput res =
      run_metrics(cfg.metrics, trained.model, d, *K_eval, *Y_eval, *labels_eval,
                  cand, cfg.output_kernel, repeat);

  ensure_out_dir(out);
  json doc;
  doc["command"] = "eval";
  doc["split"] = split;
  doc["variant"] = variant_name(trained.model.variant);
  doc["lambda"] = trained.lambda;
  doc["n_train"] = d.n_train();
  doc["n_eval"] = K_eval->rows();
  doc["n_candidates"] = cand.set.size();
  doc["inference_seconds"] = res.inference_seconds;
  if (model_prefix.empty()) doc["fit_seconds"] = trained.fit_seconds;
  doc["metrics"] = json::object();
  for (const auto& [k, v] : res.values) doc["metrics"][k] = v;
  write_json(doc, join(out, "report.json"));
}

void cmd_benchmark(const RunConfig& cfg, const std::string& out,
                   std::optional<std::uint64_t> seed, int repeat_override) {
  if (!cfg.benchmark) throw std::runtime_error("config has no benchmark block");
  const BenchmarkConfig& b = *cfg.benchmark;
  const int repeat = repeat_override > 0 ? repeat_override : b.repeat;

  const Dataset d = prepare_data(cfg, seed);
  if (d.K_test_train.rows() == 0) {
    throw std::runtime_error("benchmark needs a test split");
  }
  const GramMatrix KY = output_gram(cfg, d);
  const Index n = d.n_train();

  RidgeConfig ridge;
  ridge.solve = cfg.solve;
  if (cfg.has_lambda_grid()) {
    const auto fit_at = [&](double lambda) {
      RidgeConfig r = ridge;
      r.lambda = lambda;
      return fit_iokr(d.K_train, r);
    };
    ridge.lambda = select_lambda(cfg, d, KY, fit_at);
  } else {
    ridge.lambda = cfg.lambda;
  }

  Candidates cand;
  cand.set.cross_gram = KY.values;
  cand.set.diag = KY.diag;
  cand.outputs = d.Y_train;
  cand.labels = d.labels_train;

  ensure_out_dir(out);
  std::ofstream csv(join(out, "benchmark.csv"));
  if (!csv) throw std::runtime_error("cannot write benchmark.csv");
  csv << "variant,m_x,m_y,fit_seconds,inference_seconds,metric\n";

  const std::vector<std::string> metric_names = {b.metric};
  for (Variant v : b.variants) {
    const bool has_rx = v == Variant::siokr || v == Variant::sisokr;
    const bool has_ry = v == Variant::isokr || v == Variant::sisokr;
    const std::vector<Index> mxs = has_rx ? b.m_x_grid : std::vector<Index>{0};
    const std::vector<Index> mys = has_ry ? b.m_y_grid : std::vector<Index>{0};
    for (Index mx : mxs) {
      for (Index my : mys) {
        for (std::uint64_t s : b.seeds) {
          std::optional<SketchOperator> Rx, Ry;
          if (has_rx) {
            SketchSpec spec;
            spec.kind = b.sketch_kind;
            spec.m = mx;
            spec.p = b.p;
            spec.seed = s;
            Rx = draw(spec, n);
          }
          if (has_ry) {
            SketchSpec spec;
            spec.kind = b.sketch_kind;
            spec.m = my;
            spec.p = b.p;
            spec.seed = s + 1000003;
            Ry = draw(spec, n);
          }
          FittedModel model;
          const double fit_seconds = timed_median(repeat, [&] {
            model = fit_any(v, d.K_train, &KY, Rx ? &*Rx : nullptr,
                            Ry ? &*Ry : nullptr, ridge);
          });
          const double inference_seconds = timed_median(repeat, [&] {
            const Matrix S = score_matrix(model, d.K_test_train, cand.set);
            decode_scores(S, cand.set, 1);
          });
          const EvalOutput res =
              run_metrics(metric_names, model, d, d.K_test_train, d.Y_test,
                          d.labels_test, cand, cfg.output_kernel, 1);
          csv << variant_name(v) << ',' << mx << ',' << my << ','
              << std::setprecision(9) << fit_seconds << ',' << inference_seconds
              << ',' << std::setprecision(17) << res.values.at(b.metric) << '\n';
        }
      }
    }
  }
}

void cmd_sketch_diag(const RunConfig& cfg, const std::string& out,
                     std::optional<std::uint64_t> seed) {
  if (!cfg.sketch_diag) throw std::runtime_error("config has no sketch_diag block");
  const SketchDiagConfig& sd = *cfg.sketch_diag;
  const Dataset d = prepare_data(cfg, seed);

  GramMatrix K_train;
  Matrix K_eval;
  Vector diag_eval;
  if (sd.target == "input") {
    K_train = d.K_train;
    if (sd.eval_on_train) {
      K_eval = d.K_train.values;
      diag_eval = d.K_train.diag;
    } else {
      if (d.X_test.rows() == 0) {
        throw std::runtime_error("held-out diagnostics need a test split");
      }
      K_eval = d.K_test_train;
      diag_eval.resize(d.X_test.rows());
      for (Index i = 0; i < d.X_test.rows(); ++i) {
        diag_eval[i] = eval_kernel(cfg.input_kernel, d.X_test.row(i).transpose(),
                                   d.X_test.row(i).transpose());
      }
    }
  } else {
    const GramMatrix KY = output_gram(cfg, d);
    K_train = KY;
    if (sd.eval_on_train) {
      K_eval = KY.values;
      diag_eval = KY.diag;
    } else {
      if (d.Y_test.rows() == 0) {
        throw std::runtime_error("held-out diagnostics need test outputs");
      }
      K_eval = cross_gram(cfg.output_kernel, d.Y_test, d.Y_train);
      diag_eval.resize(d.Y_test.rows());
      for (Index i = 0; i < d.Y_test.rows(); ++i) {
        diag_eval[i] = eval_kernel(cfg.output_kernel, d.Y_test.row(i).transpose(),
                                   d.Y_test.row(i).transpose());
      }
    }
  }

  std::vector<SketchSpec> specs;
  for (SketchKind kind : sd.kinds) {
    for (Index m : sd.m_grid) {
      SketchSpec spec;
      spec.kind = kind;
      spec.m = m;
      spec.p = sd.p;
      spec.seed = seed ? *seed : sd.seed;
      specs.push_back(spec);
    }
  }
  const std::vector<SweepRow> rows =
      sketch_size_sweep(K_train, K_eval, diag_eval, specs, sd.seeds_per_point);

  ensure_out_dir(out);
  std::ofstream csv(join(out, "sketch_diag.csv"));
  if (!csv) throw std::runtime_error("cannot write sketch_diag.csv");
  csv << "kind,m,p,seed_count,mean_err,stderr\n";
  for (const SweepRow& r : rows) {
    csv << sketch_kind_name(r.kind) << ',' << r.m << ',' << std::setprecision(9)
        << r.p << ',' << r.seed_count << ',' << std::setprecision(17)
        << r.mean_err << ',' << r.std_err << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surrogate kernel regression with input/output sketching"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_prefix, split = "test";
  std::uint64_t seed = 0;
  int threads = 0;
  int repeat = 1;

  std::vector<CLI::Option*> seed_opts;
  std::vector<CLI::Option*> repeat_opts;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration JSON")
        ->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    seed_opts.push_back(sub->add_option("--seed", seed, "override config seeds"));
    sub->add_option("--threads", threads, "linear algebra threads");
    repeat_opts.push_back(
        sub->add_option("--repeat", repeat, "timing repetitions (median)"));
  };

  CLI::App* synth = app.add_subcommand("synth", "generate the synthetic task");
  add_common(synth);
  CLI::App* train = app.add_subcommand("train", "fit a model and save it");
  add_common(train);
  CLI::App* eval = app.add_subcommand("eval", "compute metrics on a split");
  add_common(eval);
  eval->add_option("--model", model_prefix, "saved model prefix (else fit now)");
  eval->add_option("--split", split, "train | val | test");
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "sweep sketch sizes over seeds");
  add_common(benchmark);
  CLI::App* diag =
      app.add_subcommand("sketch-diag", "reconstruction-error sweep");
  add_common(diag);

  CLI11_PARSE(app, argc, argv);

  std::optional<std::uint64_t> seed_override;
  for (CLI::Option* opt : seed_opts) {
    if (opt->count() > 0) seed_override = seed;
  }
  bool repeat_given = false;
  for (CLI::Option* opt : repeat_opts) {
    if (opt->count() > 0) repeat_given = true;
  }
  if (threads > 0) Eigen::setNbThreads(threads);
  if (repeat < 1) {
    std::cerr << "error: --repeat must be >= 1\n";
    return 1;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (synth->parsed()) {
      cmd_synth(cfg, out_dir, seed_override);
    } else if (train->parsed()) {
      cmd_train(cfg, out_dir, seed_override, repeat);
    } else if (eval->parsed()) {
      cmd_eval(cfg, out_dir, model_prefix, split, seed_override, repeat);
    } else if (benchmark->parsed()) {
      cmd_benchmark(cfg, out_dir, seed_override, repeat_given ? repeat : 0);
    } else if (diag->parsed()) {
      cmd_sketch_diag(cfg, out_dir, seed_override);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
