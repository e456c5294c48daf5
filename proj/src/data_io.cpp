#include "skor/data_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json_util.hpp"
#include "skor/sketch.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace skor {

namespace {

constexpr char kMagic[4] = {'S', 'K', 'M', 'X'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kDtypeF64 = 0;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path, const char* what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw std::runtime_error(path + ": truncated payload reading " + what);
  }
  return value;
}

}  // namespace

void save_matrix(const MatrixRef& M, const std::string& path) {
  if (!M.allFinite()) {
    throw std::invalid_argument("save_matrix: non-finite entries");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint64_t>(M.rows()));
  write_pod(out, static_cast<std::uint64_t>(M.cols()));
  write_pod(out, kDtypeF64);

  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor buffer = M;
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(sizeof(double) * buffer.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);

  char magic[4] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": bad magic");
  }
  const auto version = read_pod<std::uint16_t>(in, path, "version");
  if (version != kVersion) {
    throw std::runtime_error(path + ": unsupported version " +
                             std::to_string(version));
  }
  const auto rows = read_pod<std::uint64_t>(in, path, "rows");
  const auto cols = read_pod<std::uint64_t>(in, path, "cols");
  const auto dtype = read_pod<std::uint8_t>(in, path, "dtype");
  if (dtype != kDtypeF64) {
    throw std::runtime_error(path + ": unsupported dtype tag " +
                             std::to_string(dtype));
  }
  constexpr std::uint64_t kMaxEntries =
      std::numeric_limits<std::int64_t>::max() / sizeof(double);
  if (cols != 0 && rows > kMaxEntries / std::max<std::uint64_t>(cols, 1)) {
    throw std::runtime_error(path + ": implausible shape");
  }

  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor buffer(static_cast<Index>(rows), static_cast<Index>(cols));
  in.read(reinterpret_cast<char*>(buffer.data()),
          static_cast<std::streamsize>(sizeof(double) * buffer.size()));
  if (!in) throw std::runtime_error(path + ": truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(path + ": trailing bytes after payload");
  }
  if (!buffer.allFinite()) {
    throw std::runtime_error(path + ": non-finite entries");
  }
  return Matrix(buffer);
}

void save_matrix_csv(const MatrixRef& M, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << M(i, j);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

GramMatrix load_gram(const std::string& path) {
  Matrix values = load_matrix(path);

  const std::string sidecar_path = path + ".json";
  std::ifstream in(sidecar_path);
  if (!in) throw std::runtime_error("cannot open Gram sidecar: " + sidecar_path);
  detail::json sidecar;
  try {
    sidecar = detail::json::parse(in);
  } catch (const detail::json::parse_error& e) {
    throw std::runtime_error(sidecar_path + ": " + e.what());
  }
  detail::check_keys(sidecar, {"symmetric"}, sidecar_path);
  const auto& flag = detail::require(sidecar, "symmetric", sidecar_path);
  if (!flag.is_boolean()) {
    throw std::runtime_error(sidecar_path + ": 'symmetric' must be a boolean");
  }
  return GramMatrix::from_values(std::move(values), flag.get<bool>());
}

void save_gram(const GramMatrix& G, const std::string& path) {
  save_matrix(G.values, path);
  detail::json sidecar;
  sidecar["symmetric"] = G.symmetric;
  std::ofstream out(path + ".json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path + ".json");
  out << sidecar.dump(2) << '\n';
}

namespace {

[[noreturn]] void label_error(const std::string& path, std::size_t line_no,
                              const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + message);
}

}  // namespace

LabelData load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  LabelData data;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::vector<bool> defined;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      std::istringstream ss(line);
      std::string tag;
      long count = -1;
      ss >> tag >> count;
      if (tag != "#labels" || count < 0 || !ss || !(ss >> std::ws).eof()) {
        label_error(path, line_no, "expected header '#labels <L>'");
      }
      data.n_labels = static_cast<int>(count);
      saw_header = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      label_error(path, line_no, "expected '<example>: j1,j2,...'");
    }
    std::size_t example = 0;
    try {
      std::size_t used = 0;
      const long idx = std::stol(line.substr(0, colon), &used);
      if (idx < 0 || used != colon) throw std::invalid_argument("");
      example = static_cast<std::size_t>(idx);
    } catch (const std::exception&) {
      label_error(path, line_no, "bad example index");
    }
    if (example < defined.size() && defined[example]) {
      label_error(path, line_no, "duplicate example index");
    }

    LabelSet set;
    std::string rest = line.substr(colon + 1);
    std::istringstream ss(rest);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const auto begin = token.find_first_not_of(" \t");
      if (begin == std::string::npos) {
        if (set.indices.empty() && (ss >> std::ws).eof()) break;  // "3:"
        label_error(path, line_no, "empty label token");
      }
      const auto end = token.find_last_not_of(" \t");
      long value = -1;
      try {
        std::size_t used = 0;
        value = std::stol(token.substr(begin, end - begin + 1), &used);
        if (used != end - begin + 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        label_error(path, line_no, "bad label index '" + token + "'");
      }
      if (value < 0 || value >= data.n_labels) {
        label_error(path, line_no, "label index out of range [0, " +
                                       std::to_string(data.n_labels) + ")");
      }
      if (!set.indices.empty() && value == set.indices.back()) {
        label_error(path, line_no, "duplicate label index");
      }
      if (!set.indices.empty() && value < set.indices.back()) {
        label_error(path, line_no, "label indices must be sorted");
      }
      set.indices.push_back(static_cast<int>(value));
    }

    if (example >= data.examples.size()) {
      data.examples.resize(example + 1);
      defined.resize(example + 1, false);
    }
    data.examples[example] = std::move(set);
    defined[example] = true;
  }
  if (!saw_header) {
    throw std::runtime_error(path + ": missing '#labels <L>' header");
  }
  return data;
}

void save_labels(const LabelData& data, const std::string& path) {
  for (const LabelSet& s : data.examples) {
    s.validate();
    if (!s.indices.empty() && s.indices.back() >= data.n_labels) {
      throw std::invalid_argument("label index out of range for save_labels");
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "#labels " << data.n_labels << '\n';
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    out << i << ':';
    const auto& idx = data.examples[i].indices;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out << (j ? "," : " ") << idx[j];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

detail::json sketch_to_json(const SketchOperator& R) {
  detail::json j;
  j["n"] = static_cast<std::int64_t>(R.cols());
  if (R.is_subsample()) {
    j["type"] = "indices";
    j["indices"] = R.indices();
    return j;
  }
  if (!R.spec().has_value()) {
    throw std::invalid_argument(
        "sketch built from a raw matrix carries no spec and cannot be saved");
  }
  const SketchSpec& spec = *R.spec();
  j["type"] = "spec";
  j["kind"] = sketch_kind_name(spec.kind);
  j["m"] = static_cast<std::int64_t>(spec.m);
  j["p"] = spec.p;
  j["seed"] = spec.seed;
  return j;
}

SketchOperator sketch_from_json(const detail::json& j, const std::string& ctx) {
  const std::string type =
      detail::require(j, "type", ctx).get<std::string>();
  const Index n = detail::require(j, "n", ctx).get<std::int64_t>();
  if (type == "indices") {
    detail::check_keys(j, {"type", "n", "indices"}, ctx);
    return SketchOperator::from_indices(
        detail::require(j, "indices", ctx).get<std::vector<Index>>(), n);
  }
  if (type == "spec") {
    detail::check_keys(j, {"type", "n", "kind", "m", "p", "seed"}, ctx);
    SketchSpec spec;
    spec.kind = sketch_kind_from_name(
        detail::require(j, "kind", ctx).get<std::string>());
    spec.m = detail::require(j, "m", ctx).get<std::int64_t>();
    spec.p = detail::require(j, "p", ctx).get<double>();
    spec.seed = detail::require(j, "seed", ctx).get<std::uint64_t>();
    return draw(spec, n);
  }
  throw std::runtime_error(ctx + ": unknown sketch type '" + type + "'");
}

}  // namespace

void save_model(const FittedModel& model, const std::string& prefix) {
  save_matrix(model.core, prefix + ".core.skmx");
  detail::json j;
  j["variant"] = variant_name(model.variant);
  j["lambda"] = model.lambda;
  j["n_train"] = static_cast<std::int64_t>(model.n_train);
  if (model.input_sketch) j["input_sketch"] = sketch_to_json(*model.input_sketch);
  if (model.output_sketch) {
    j["output_sketch"] = sketch_to_json(*model.output_sketch);
  }
  std::ofstream out(prefix + ".json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + prefix + ".json");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + prefix + ".json");
}

FittedModel load_model(const std::string& prefix) {
  const std::string meta_path = prefix + ".json";
  std::ifstream in(meta_path);
  if (!in) throw std::runtime_error("cannot open: " + meta_path);
  detail::json j;
  try {
    j = detail::json::parse(in);
  } catch (const detail::json::parse_error& e) {
    throw std::runtime_error(meta_path + ": " + e.what());
  }
  detail::check_keys(
      j, {"variant", "lambda", "n_train", "input_sketch", "output_sketch"},
      meta_path);

  FittedModel model;
  model.variant = variant_from_name(
      detail::require(j, "variant", meta_path).get<std::string>());
  model.lambda = detail::require(j, "lambda", meta_path).get<double>();
  model.n_train =
      detail::require(j, "n_train", meta_path).get<std::int64_t>();
  model.core = load_matrix(prefix + ".core.skmx");
  if (j.contains("input_sketch")) {
    model.input_sketch =
        sketch_from_json(j["input_sketch"], meta_path + " input_sketch");
  }
  if (j.contains("output_sketch")) {
    model.output_sketch =
        sketch_from_json(j["output_sketch"], meta_path + " output_sketch");
  }

  const bool needs_rx =
      model.variant == Variant::siokr || model.variant == Variant::sisokr;
  const bool needs_ry =
      model.variant == Variant::isokr || model.variant == Variant::sisokr;
  if (needs_rx != model.input_sketch.has_value() ||
      needs_ry != model.output_sketch.has_value()) {
    throw std::runtime_error(meta_path + ": sketches inconsistent with variant");
  }
  Index want_rows = model.n_train, want_cols = model.n_train;
  switch (model.variant) {
    case Variant::iokr:
      break;
    case Variant::siokr:
      want_cols = model.input_sketch->rows();
      break;
    case Variant::isokr:
      want_rows = model.output_sketch->rows();
      break;
    case Variant::sisokr:
      want_rows = model.input_sketch->rows();
      want_cols = model.output_sketch->rows();
      break;
  }
  if (model.core.rows() != want_rows || model.core.cols() != want_cols) {
    throw std::runtime_error(meta_path + ": core shape inconsistent with variant");
  }
  return model;
}

}  // namespace skor
