#pragma once

// Core types for linear discriminant models and labeled feature datasets.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace secsvm {

using Vec = std::vector<double>;

/// Malformed input data: bad files, invalid datasets, dimension mismatches.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically undefined or failed computation (NaN weights, E of a zero
/// vector, instances too large for an exact oracle).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

enum class RegKind { L2, L1, Linf, ElasticNet, Octagonal };

inline const char* reg_kind_name(RegKind k) {
  switch (k) {
    case RegKind::L2: return "l2";
    case RegKind::L1: return "l1";
    case RegKind::Linf: return "linf";
    case RegKind::ElasticNet: return "elnet";
    case RegKind::Octagonal: return "oct";
  }
  throw std::logic_error("unknown RegKind");
}

inline RegKind reg_kind_from_name(const std::string& name) {
  if (name == "l2") return RegKind::L2;
  if (name == "l1") return RegKind::L1;
  if (name == "linf") return RegKind::Linf;
  if (name == "elnet") return RegKind::ElasticNet;
  if (name == "oct") return RegKind::Octagonal;
  throw DataError("unknown regularizer name: '" + name + "'");
}

/// Hyperparameters attached to a trained model. Only the fields meaningful
/// for the model's regularizer are present.
struct Hyperparams {
  double C = 1.0;
  std::optional<double> lambda;  // elastic net only
  std::optional<double> rho;     // octagonal only
};

/// Linear discriminant g(x) = w'x + b. Immutable after construction.
struct LinearModel {
  Vec weights;
  double bias = 0.0;
  RegKind regularizer = RegKind::L2;
  Hyperparams hyper;

  std::size_t dim() const { return weights.size(); }

  void validate() const {
    if (weights.empty()) throw DataError("model has no weights");
    for (double w : weights)
      if (!std::isfinite(w)) throw NumericError("model weight is not finite");
    if (!std::isfinite(bias)) throw NumericError("model bias is not finite");
  }
};

/// Per-feature admissible range. Boolean features carry {0,1} bounds.
struct FeatureMeta {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool boolean = false;
};

/// Dense m x d sample matrix with {-1,+1} labels (+1 = malicious).
/// Row-major flat storage; immutable after loading/generation.
struct Dataset {
  std::vector<double> values;  // m * d, row major
  std::vector<int> labels;     // m entries in {-1, +1}
  std::vector<FeatureMeta> meta;
  std::size_t m = 0;
  std::size_t d = 0;
  double scale = 1.0;  // pixel/unit scale recorded by loaders (IDX)

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values.data() + i * d, d);
  }
  double value(std::size_t i, std::size_t j) const { return values[i * d + j]; }

  bool has_both_classes() const {
    bool pos = false, neg = false;
    for (int y : labels) (y > 0 ? pos : neg) = true;
    return pos && neg;
  }

  void validate() const {
    if (m < 1 || d < 1) throw DataError("dataset must have m >= 1 and d >= 1");
    if (values.size() != m * d) throw DataError("dataset storage size mismatch");
    if (labels.size() != m) throw DataError("dataset label count mismatch");
    if (meta.size() != d) throw DataError("dataset feature metadata count mismatch");
    for (std::size_t i = 0; i < m; ++i) {
      if (labels[i] != -1 && labels[i] != 1)
        throw DataError("label at row " + std::to_string(i) + " is not -1 or +1");
      for (std::size_t j = 0; j < d; ++j) {
        const double v = value(i, j);
        if (!std::isfinite(v))
          throw DataError("non-finite value at row " + std::to_string(i) +
                          ", feature " + std::to_string(j));
        if (meta[j].boolean && v != 0.0 && v != 1.0)
          throw DataError("boolean feature " + std::to_string(j) +
                          " has non-boolean value at row " + std::to_string(i));
        if (v < meta[j].lower || v > meta[j].upper)
          throw DataError("value out of declared bounds at row " +
                          std::to_string(i) + ", feature " + std::to_string(j));
      }
    }
  }
};

/// Per-feature maximum admissible value, taken from training data.
struct FeatureCaps {
  Vec caps;

  void validate() const {
    for (std::size_t j = 0; j < caps.size(); ++j)
      if (!(caps[j] >= 0.0) || !std::isfinite(caps[j]))
        throw DataError("feature cap " + std::to_string(j) +
                        " must be finite and non-negative");
  }
};

/// g(x) = w'x + b. Summation runs in index order 0..d-1 so results are
/// reproducible across runs and platforms.
inline double discriminant(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size())
    throw DataError("discriminant: input has " + std::to_string(x.size()) +
                    " features, model expects " +
                    std::to_string(model.weights.size()));
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += model.weights[j] * x[j];
  return acc + model.bias;
}

inline double discriminant(const LinearModel& model, const Vec& x) {
  return discriminant(model, std::span<const double>(x));
}

/// sign(g(x)) with the tie g(x)=0 mapped to +1 (malicious).
inline int predict(const LinearModel& model, std::span<const double> x) {
  return discriminant(model, x) >= 0.0 ? +1 : -1;
}

inline int predict(const LinearModel& model, const Vec& x) {
  return predict(model, std::span<const double>(x));
}

/// caps[j] = max_i samples[i][j].
inline FeatureCaps caps_from_training(const Dataset& data) {
  if (data.m < 1) throw DataError("caps_from_training: empty dataset");
  FeatureCaps fc;
  fc.caps.assign(data.d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.m; ++i)
    for (std::size_t j = 0; j < data.d; ++j)
      fc.caps[j] = std::max(fc.caps[j], data.value(i, j));
  return fc;
}

/// Model serialization. nlohmann::json emits shortest round-trip decimal
/// forms, so dump/parse reproduces every double bit for bit.
inline nlohmann::json model_to_json(const LinearModel& model) {
  nlohmann::json j;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["regularizer"] = reg_kind_name(model.regularizer);
  nlohmann::json hp;
  hp["C"] = model.hyper.C;
  if (model.hyper.lambda) hp["lambda"] = *model.hyper.lambda;
  if (model.hyper.rho) hp["rho"] = *model.hyper.rho;
  j["hyperparams"] = hp;
  j["feature_count"] = model.weights.size();
  return j;
}

inline LinearModel model_from_json(const nlohmann::json& j) {
  LinearModel model;
  try {
    model.weights = j.at("weights").get<Vec>();
    model.bias = j.at("bias").get<double>();
    model.regularizer = reg_kind_from_name(j.at("regularizer").get<std::string>());
    const auto& hp = j.at("hyperparams");
    model.hyper.C = hp.at("C").get<double>();
    if (hp.contains("lambda")) model.hyper.lambda = hp.at("lambda").get<double>();
    if (hp.contains("rho")) model.hyper.rho = hp.at("rho").get<double>();
    if (j.at("feature_count").get<std::size_t>() != model.weights.size())
      throw DataError("model feature_count disagrees with weight vector length");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
  model.validate();
  return model;
}

}  // namespace secsvm
