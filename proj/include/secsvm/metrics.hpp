#pragma once

// Sparsity S, weight evenness E, ROC/AUC machinery, and security
// evaluation curves (AUC at capped FPR versus attack budget).

#include <algorithm>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "attacks.hpp"
#include "core.hpp"

namespace secsvm {

/// Fraction of weights that are exactly zero. Solvers hard-threshold their
/// output first, so the exact-zero test is meaningful.
inline double sparsity(std::span<const double> w) {
  if (w.empty()) throw DataError("sparsity: empty weight vector");
  std::size_t zeros = 0;
  for (double x : w)
    if (x == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(w.size());
}

inline double sparsity(const Vec& w) { return sparsity(std::span<const double>(w)); }

/// Weight evenness E = ||w||_1 / (d ||w||_inf), in [1/d, 1]. Higher values
/// mean more evenly spread weights, hence costlier sparse evasion.
inline double evenness(std::span<const double> w) {
  if (w.empty()) throw DataError("evenness: empty weight vector");
  const double winf = norm_linf(w);
  if (winf == 0.0)
    throw NumericError("evenness undefined for an all-zero weight vector");
  return norm_l1(w) / (static_cast<double>(w.size()) * winf);
}

inline double evenness(const Vec& w) { return evenness(std::span<const double>(w)); }

/// Zero out weights below eps in absolute value. First-order solvers leave
/// near-zeros; S assumes exact zeros, as an LP solution would produce.
inline Vec hard_threshold(Vec w, double eps = 1e-8) {
  for (double& x : w)
    if (std::abs(x) < eps) x = 0.0;
  return w;
}

namespace detail {

struct ScoreGroup {
  double score;
  double pos;  // positives at this score
  double neg;  // negatives at this score
};

// Distinct scores in ascending order with per-class counts.
inline std::vector<ScoreGroup> group_scores(std::span<const double> scores,
                                            std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw DataError("score/label length mismatch");
  if (scores.empty()) throw DataError("empty score vector");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<ScoreGroup> groups;
  for (std::size_t i : idx) {
    if (groups.empty() || groups.back().score != scores[i])
      groups.push_back({scores[i], 0.0, 0.0});
    (labels[i] > 0 ? groups.back().pos : groups.back().neg) += 1.0;
  }
  return groups;
}

}  // namespace detail

/// Area under the ROC curve in Mann-Whitney form:
/// P(score+ > score-) + (1/2) P(score+ = score-).
inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const auto groups = detail::group_scores(scores, labels);
  double pos_total = 0.0, neg_total = 0.0;
  for (const auto& g : groups) {
    pos_total += g.pos;
    neg_total += g.neg;
  }
  if (pos_total == 0.0 || neg_total == 0.0)
    throw DataError("roc_auc requires both classes");
  double two_u = 0.0, neg_below = 0.0;
  for (const auto& g : groups) {
    two_u += g.pos * (2.0 * neg_below + g.neg);
    neg_below += g.neg;
  }
  return two_u / (2.0 * pos_total * neg_total);
}

inline double roc_auc(const Vec& scores, const std::vector<int>& labels) {
  return roc_auc(std::span<const double>(scores), std::span<const int>(labels));
}

/// Area under the empirical ROC restricted to FPR in [0, fpr_cap], with
/// linear interpolation at the cap, normalized by fpr_cap so a perfect
/// ranking scores 1. Thresholds run through every distinct score with ties
/// grouped; integration is trapezoidal, so fpr_cap = 1 reproduces roc_auc.
inline double auc_at_fpr(std::span<const double> scores, std::span<const int> labels,
                         double fpr_cap = 0.1) {
  if (!(fpr_cap > 0.0 && fpr_cap <= 1.0))
    throw DataError("auc_at_fpr: fpr_cap must lie in (0, 1]");
  const auto groups = detail::group_scores(scores, labels);
  double pos_total = 0.0, neg_total = 0.0;
  for (const auto& g : groups) {
    pos_total += g.pos;
    neg_total += g.neg;
  }
  if (pos_total == 0.0 || neg_total == 0.0)
    throw DataError("auc_at_fpr requires both classes");

  // Walk thresholds from high to low; fp/tp accumulate in count units.
  const double fp_cap = fpr_cap * neg_total;
  double area2 = 0.0;  // twice the area, in fp x tp count units
  double fp = 0.0, tp = 0.0;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    const double fp_next = fp + it->neg;
    const double tp_next = tp + it->pos;
    if (fp_next <= fp_cap) {
      area2 += (fp_next - fp) * (tp + tp_next);
    } else {
      // Cut the crossing segment at the cap.
      const double frac = it->neg > 0.0 ? (fp_cap - fp) / it->neg : 0.0;
      const double tp_at_cap = tp + frac * it->pos;
      area2 += (fp_cap - fp) * (tp + tp_at_cap);
      fp = fp_cap;
      tp = tp_at_cap;
      break;
    }
    fp = fp_next;
    tp = tp_next;
  }
  return area2 / (2.0 * pos_total * neg_total * fpr_cap);
}

inline double auc_at_fpr(const Vec& scores, const std::vector<int>& labels,
                         double fpr_cap = 0.1) {
  return auc_at_fpr(std::span<const double>(scores), std::span<const int>(labels),
                    fpr_cap);
}

/// AUC_10% as a function of attack budget, with the model's (S, E) attached.
struct SecurityCurve {
  Vec budgets;
  Vec auc10;
  double S = 0.0;
  double E = 0.0;
  AttackKind attack = AttackKind::SparseL1;

  std::string to_csv() const {
    std::string out = "budget,auc10\n";
    char buf[80];
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", budgets[i], auc10[i]);
      out += buf;
    }
    return out;
  }

  nlohmann::json sidecar() const {
    return {{"S", S}, {"E", E}, {"attack", attack_kind_name(attack)}};
  }
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Attack every malicious test sample at each budget, leave legitimate
/// samples untouched, and rescore. Budget 0 is allowed and means "no
/// attack". Per-sample g_after is non-increasing in budget, so the curve
/// is too.
inline SecurityCurve security_curve(const LinearModel& model, const Dataset& test,
                                    AttackKind kind, const AttackSpec& spec_template,
                                    const Vec& budgets, double fpr_cap = 0.1,
                                    int threads = 1, int pgd_steps = 100,
                                    double pgd_step_size = 0.0) {
  if (budgets.empty()) throw DataError("security_curve: empty budget list");
  for (std::size_t i = 0; i + 1 < budgets.size(); ++i)
    if (!(budgets[i] < budgets[i + 1]))
      throw DataError("security_curve: budgets must be strictly increasing");
  if (budgets.front() < 0.0) throw DataError("security_curve: negative budget");
  if (!test.has_both_classes())
    throw DataError("security_curve: test data must contain both classes");
  if (detail::weights_all_zero(model))
    throw NumericError("security_curve: model has all-zero weights (E undefined)");

  std::vector<std::size_t> malicious;
  for (std::size_t i = 0; i < test.m; ++i)
    if (test.labels[i] > 0) malicious.push_back(i);

  Vec clean_scores(test.m);
  for (std::size_t i = 0; i < test.m; ++i)
    clean_scores[i] = discriminant(model, test.row(i));

  SecurityCurve curve;
  curve.budgets = budgets;
  curve.attack = kind;
  curve.S = sparsity(model.weights);
  curve.E = evenness(model.weights);
  curve.auc10.resize(budgets.size());

  for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
    Vec scores = clean_scores;
    if (budgets[bi] > 0.0) {
      AttackSpec spec = spec_template;
      spec.d_max = budgets[bi];
      detail::parallel_for(malicious.size(), threads, [&](std::size_t k) {
        const std::size_t i = malicious[k];
        Vec x0(test.row(i).begin(), test.row(i).end());
        scores[i] = run_attack(model, x0, spec, kind, pgd_steps, pgd_step_size).g_after;
      });
    }
    curve.auc10[bi] = auc_at_fpr(scores, test.labels, fpr_cap);
  }
  return curve;
}

}  // namespace secsvm
