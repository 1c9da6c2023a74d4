#pragma once

// Hinge-loss training under the five regularizers, model selection via
// AUC + alpha*E + beta*S cross-validation, and the empirical check of the
// robust-optimization <-> regularization identity.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core.hpp"
#include "metrics.hpp"
#include "regularizers.hpp"

namespace secsvm {

struct SolverConfig {
  int max_iters = 4000;
  double step0 = 1.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iters < 1) throw DataError("solver max_iters must be >= 1");
    if (!(step0 > 0.0)) throw DataError("solver step0 must be positive");
    if (!(tol > 0.0)) throw DataError("solver tol must be positive");
  }
};

struct TrainConfig {
  double C = 1.0;
  RegularizerSpec spec;
  SolverConfig solver;

  void validate() const {
    if (!(C > 0.0)) throw DataError("C must be positive");
    spec.validate();
    solver.validate();
  }
};

struct SelectionConfig {
  double alpha = 0.1;
  double beta = 0.1;
  int folds = 5;
  std::vector<TrainConfig> grid;
  int repetitions = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (alpha < 0.0 || beta < 0.0) throw DataError("alpha and beta must be >= 0");
    if (folds < 2) throw DataError("cross-validation needs at least 2 folds");
    if (grid.empty()) throw DataError("selection grid must be non-empty");
    if (repetitions < 1) throw DataError("repetitions must be >= 1");
    for (const auto& cfg : grid) cfg.validate();
  }
};

/// Uncertainty-set check: perturbations u_i with sum of dual norms <= c,
/// where `norm` is the primal norm that ends up regularizing w.
struct RobustCheckSpec {
  double c = 1.0;
  NormKind norm = NormKind::L2;

  void validate() const {
    if (!(c > 0.0)) throw DataError("uncertainty budget c must be positive");
  }
};

/// Sum over samples of (1 - y_i g(x_i))_+.
inline double hinge_loss(const LinearModel& model, const Dataset& data) {
  if (model.dim() != data.d)
    throw DataError("hinge_loss: model/data dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < data.m; ++i) {
    const double margin = static_cast<double>(data.labels[i]) *
                          discriminant(model, data.row(i));
    total += std::max(0.0, 1.0 - margin);
  }
  return total;
}

/// reg(w) + C * hinge. The regularizer follows cfg.spec, which must agree
/// with the model's tag.
inline double objective(const LinearModel& model, const Dataset& data,
                        const TrainConfig& cfg) {
  if (model.regularizer != cfg.spec.kind)
    throw DataError("objective: model regularizer disagrees with config");
  return reg_value(cfg.spec, model.weights) + cfg.C * hinge_loss(model, data);
}

struct TrainResult {
  LinearModel model;
  double objective = 0.0;
  bool converged = false;
  int iters = 0;
  int best_iter = 0;

  nlohmann::json report() const {
    nlohmann::json j;
    j["objective"] = objective;
    j["converged"] = converged;
    j["iters"] = iters;
    j["S"] = sparsity(model.weights);
    bool any_nonzero = false;
    for (double w : model.weights) any_nonzero |= (w != 0.0);
    if (any_nonzero)
      j["E"] = evenness(model.weights);
    else
      j["E"] = nullptr;
    return j;
  }
};

/// Proximal subgradient descent on reg(w) + C * hinge: subgradient step on
/// the loss, exact proximal step on the regularizer, step size
/// step0 / (sqrt(t) * scale) with scale bounding the loss subgradient, and
/// best-iterate tracking from the deterministic w=0, b=0 start. The prox
/// step is what produces exact zeros (l1-type penalties) and exact weight
/// ties (linf-type), which S and E presume. Stops at max_iters or when the
/// best objective improves by less than tol (relative) over a 50-iteration
/// window; the convergence flag records which.
inline TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  data.validate();
  if (!data.has_both_classes())
    throw DataError("train: training data must contain both classes");

  const std::size_t m = data.m, d = data.d;
  LinearModel current;
  current.weights.assign(d, 0.0);
  current.bias = 0.0;
  current.regularizer = cfg.spec.kind;

  auto eval = [&](const LinearModel& mod) { return objective(mod, data, cfg); };

  LinearModel best = current;
  double best_obj = eval(current);
  int best_iter = 0;

  // Steps are normalized by an upper bound on the loss subgradient norm so
  // step0 means the same thing across C values and data scales.
  double grad_bound = static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) grad_bound += norm_l2(data.row(i));
  const double step_scale = std::max(1.0, cfg.C * grad_bound);

  Vec grad(d), trial(d);
  double window_best = best_obj;
  bool converged = false;
  int iters_run = 0;

  for (int t = 1; t <= cfg.solver.max_iters; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = static_cast<double>(data.labels[i]);
      const double g = discriminant(current, data.row(i));
      if (1.0 - y * g > 0.0) {
        const auto x = data.row(i);
        for (std::size_t j = 0; j < d; ++j) grad[j] -= y * x[j];
        grad_b -= y;
      }
    }
    const double eta =
        cfg.solver.step0 / (std::sqrt(static_cast<double>(t)) * step_scale);
    for (std::size_t j = 0; j < d; ++j)
      trial[j] = current.weights[j] - eta * cfg.C * grad[j];
    current.weights = reg_prox(cfg.spec, trial, eta);
    current.bias -= eta * cfg.C * grad_b;

    const double obj = eval(current);
    if (obj < best_obj) {
      best_obj = obj;
      best = current;
      best_iter = t;
    }
    iters_run = t;
    if (t % 50 == 0) {
      if (window_best - best_obj <= cfg.solver.tol * std::max(1.0, std::abs(window_best))) {
        converged = true;
        break;
      }
      window_best = best_obj;
    }
  }

  TrainResult out;
  out.model = best;
  out.model.hyper.C = cfg.C;
  if (cfg.spec.kind == RegKind::ElasticNet) out.model.hyper.lambda = cfg.spec.lambda;
  if (cfg.spec.kind == RegKind::Octagonal) out.model.hyper.rho = cfg.spec.rho;
  out.model.weights = hard_threshold(std::move(out.model.weights));
  out.objective = eval(out.model);
  if (out.objective > best_obj + 1e-15 * std::max(1.0, best_obj)) {
    // Thresholding may not push the objective above the tracked best.
    out.model.weights = best.weights;
    out.objective = best_obj;
  }
  out.converged = converged;
  out.iters = iters_run;
  out.best_iter = best_iter;
  out.model.validate();
  return out;
}

struct CandidateDiagnostics {
  double mean_auc = 0.0;
  double mean_E = 0.0;
  double mean_S = 0.0;
  double score = 0.0;
  int folds_used = 0;
};

struct CvResult {
  TrainConfig best;
  std::size_t best_index = 0;
  std::vector<CandidateDiagnostics> candidates;
};

namespace detail {

// Stratified fold ids: each class is shuffled with the run's seed and dealt
// round-robin, so folds are reproducible and class-balanced.
inline std::vector<int> fold_assignment(const Dataset& data, int folds,
                                        std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.m; ++i)
    (data.labels[i] > 0 ? pos : neg).push_back(i);
  std::mt19937_64 rng(seed);
  auto shuffle_ix = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[rng() % i]);
  };
  shuffle_ix(pos);
  shuffle_ix(neg);
  std::vector<int> fold(data.m, 0);
  for (std::size_t k = 0; k < pos.size(); ++k)
    fold[pos[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  for (std::size_t k = 0; k < neg.size(); ++k)
    fold[neg[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  return fold;
}

inline Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.d = data.d;
  out.m = rows.size();
  out.meta = data.meta;
  out.scale = data.scale;
  out.values.reserve(rows.size() * data.d);
  out.labels.reserve(rows.size());
  for (std::size_t i : rows) {
    const auto r = data.row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
    out.labels.push_back(data.labels[i]);
  }
  return out;
}

}  // namespace detail

/// Pick the grid candidate maximizing the fold-mean of AUC + alpha*E + beta*S,
/// where AUC is computed on the held-out fold and E, S on the fold-trained
/// weights. Folds whose validation part is single-class contribute nothing;
/// if every fold degenerates the selection fails. Ties break toward higher
/// mean S, then lower C, then grid order.
inline CvResult cross_validate(const Dataset& data, const SelectionConfig& sel) {
  sel.validate();
  data.validate();
  if (static_cast<std::size_t>(sel.folds) * 2 > data.m)
    throw DataError("cross_validate: folds must not exceed m/2");

  CvResult result;
  result.candidates.resize(sel.grid.size());

  for (std::size_t ci = 0; ci < sel.grid.size(); ++ci) {
    double sum_auc = 0.0, sum_E = 0.0, sum_S = 0.0;
    int used = 0;
    for (int rep = 0; rep < sel.repetitions; ++rep) {
      const auto fold = detail::fold_assignment(
          data, sel.folds, sel.seed + static_cast<std::uint64_t>(rep) * 0x9e3779b9ull);
      for (int f = 0; f < sel.folds; ++f) {
        std::vector<std::size_t> train_rows, val_rows;
        for (std::size_t i = 0; i < data.m; ++i)
          (fold[i] == f ? val_rows : train_rows).push_back(i);
        if (train_rows.empty() || val_rows.empty()) continue;
        const Dataset val = detail::subset(data, val_rows);
        bool val_pos = false, val_neg = false;
        for (int y : val.labels) (y > 0 ? val_pos : val_neg) = true;
        if (!val_pos || !val_neg) continue;  // AUC undefined on this fold
        const Dataset tr = detail::subset(data, train_rows);
        if (!tr.has_both_classes()) continue;
        const TrainResult fit = train(tr, sel.grid[ci]);
        Vec scores(val.m);
        for (std::size_t i = 0; i < val.m; ++i)
          scores[i] = discriminant(fit.model, val.row(i));
        sum_auc += roc_auc(scores, val.labels);
        sum_S += sparsity(fit.model.weights);
        bool any_nonzero = false;
        for (double w : fit.model.weights) any_nonzero |= (w != 0.0);
        sum_E += any_nonzero ? evenness(fit.model.weights) : 0.0;
        ++used;
      }
    }
    if (used == 0)
      throw DataError("cross_validate: every fold was degenerate for candidate " +
                      std::to_string(ci));
    auto& diag = result.candidates[ci];
    diag.mean_auc = sum_auc / used;
    diag.mean_E = sum_E / used;
    diag.mean_S = sum_S / used;
    diag.folds_used = used;
    diag.score = diag.mean_auc + sel.alpha * diag.mean_E + sel.beta * diag.mean_S;
  }

  std::size_t best = 0;
  for (std::size_t ci = 1; ci < sel.grid.size(); ++ci) {
    const auto& a = result.candidates[ci];
    const auto& b = result.candidates[best];
    if (a.score > b.score ||
        (a.score == b.score &&
         (a.mean_S > b.mean_S ||
          (a.mean_S == b.mean_S && sel.grid[ci].C < sel.grid[best].C))))
      best = ci;
  }
  result.best = sel.grid[best];
  result.best_index = best;
  return result;
}

/// Worst-case hinge loss under bounded training-set perturbations: the
/// maximum over u_1..u_m with sum_i ||u_i||* <= c of the perturbed hinge.
/// Per-sample slack h_i = 1 - y_i g(x_i); the best adversary spends the
/// whole budget on one sample, gaining (h_i + c||w||)_+ - (h_i)_+. With any
/// h_i >= 0 that gain is exactly c||w||, which is the regularization
/// identity; otherwise the budget goes to the largest (negative) slack.
inline double worst_case_hinge(const LinearModel& model, const Dataset& data,
                               const RobustCheckSpec& chk) {
  chk.validate();
  if (model.dim() != data.d)
    throw DataError("worst_case_hinge: model/data dimension mismatch");
  const double wnorm = norm_value(chk.norm, model.weights);
  double hinge = 0.0;
  double max_slack = -std::numeric_limits<double>::infinity();
  bool any_nonneg = false;
  for (std::size_t i = 0; i < data.m; ++i) {
    const double h = 1.0 - static_cast<double>(data.labels[i]) *
                               discriminant(model, data.row(i));
    hinge += std::max(0.0, h);
    max_slack = std::max(max_slack, h);
    any_nonneg |= (h >= 0.0);
  }
  if (any_nonneg) return hinge + chk.c * wnorm;
  return hinge + std::max(0.0, max_slack + chk.c * wnorm);
}

}  // namespace secsvm
