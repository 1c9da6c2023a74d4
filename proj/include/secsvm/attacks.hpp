#pragma once

// Perfect-knowledge evasion attacks against linear models: the attacker
// minimizes g(x) over {d(x, x0) <= d_max} intersected with the
// application constraints. Dense (l2) and sparse (l1) costs, boolean
// flips, increment-only moves, a generic projected-gradient routine, and
// a brute-force oracle for validation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "core.hpp"
#include "regularizers.hpp"

namespace secsvm {

enum class ConstraintKind { None, Box, BooleanFlip, IncrementOnly };

struct AttackSpec {
  double d_max = 1.0;
  NormKind cost = NormKind::L2;
  ConstraintKind constraint = ConstraintKind::None;
  Vec box_lower;     // Box
  Vec box_upper;     // Box
  FeatureCaps caps;  // IncrementOnly
  bool integral = false;  // IncrementOnly: round allocations down to integers

  // d_max = 0 is tolerated as the degenerate empty budget (every attack
  // then returns x0), which keeps budget sweeps and oracles total.
  void validate() const {
    if (!(d_max >= 0.0)) throw DataError("attack budget d_max must be >= 0");
    if (cost == NormKind::Linf)
      throw DataError("attack cost must be the l1 or l2 norm");
    if (constraint == ConstraintKind::Box) {
      if (box_lower.size() != box_upper.size())
        throw DataError("box bound vectors differ in length");
      for (std::size_t j = 0; j < box_lower.size(); ++j)
        if (box_lower[j] > box_upper[j])
          throw DataError("box lower bound exceeds upper bound at feature " +
                          std::to_string(j));
    }
  }

  static AttackSpec make(double d_max, NormKind cost, ConstraintKind constraint) {
    AttackSpec s;
    s.d_max = d_max;
    s.cost = cost;
    s.constraint = constraint;
    return s;
  }
  static AttackSpec dense_l2(double d_max) {
    return make(d_max, NormKind::L2, ConstraintKind::None);
  }
  static AttackSpec dense_l2_box(double d_max, Vec lower, Vec upper) {
    AttackSpec s = make(d_max, NormKind::L2, ConstraintKind::Box);
    s.box_lower = std::move(lower);
    s.box_upper = std::move(upper);
    return s;
  }
  static AttackSpec sparse_l1(double d_max) {
    return make(d_max, NormKind::L1, ConstraintKind::None);
  }
  static AttackSpec sparse_l1_box(double d_max, Vec lower, Vec upper) {
    AttackSpec s = make(d_max, NormKind::L1, ConstraintKind::Box);
    s.box_lower = std::move(lower);
    s.box_upper = std::move(upper);
    return s;
  }
  static AttackSpec boolean_flip(double max_flips) {
    return make(max_flips, NormKind::L1, ConstraintKind::BooleanFlip);
  }
  static AttackSpec increment_only(double d_max, FeatureCaps caps,
                                   bool integral = false) {
    AttackSpec s = make(d_max, NormKind::L1, ConstraintKind::IncrementOnly);
    s.caps = std::move(caps);
    s.integral = integral;
    return s;
  }
};

struct AttackResult {
  Vec x_star;
  double g_before = 0.0;
  double g_after = 0.0;
  double cost_used = 0.0;
  bool evaded = false;      // g_after < 0
  bool no_descent = false;  // zero weight vector, x_star = x0

  void finish(const LinearModel& model) {
    g_after = discriminant(model, x_star);
    evaded = g_after < 0.0;
  }
};

namespace detail {

inline AttackResult untouched(const LinearModel& model, const Vec& x0,
                              bool flag_no_descent) {
  AttackResult r;
  r.x_star = x0;
  r.g_before = discriminant(model, x0);
  r.g_after = r.g_before;
  r.cost_used = 0.0;
  r.evaded = r.g_after < 0.0;
  r.no_descent = flag_no_descent;
  return r;
}

inline bool weights_all_zero(const LinearModel& model) {
  for (double w : model.weights)
    if (w != 0.0) return false;
  return true;
}

// Feature indices ordered by |w_j| descending, ties by lower index.
inline std::vector<std::size_t> order_by_weight_magnitude(const Vec& w) {
  std::vector<std::size_t> idx(w.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(w[a]) > std::abs(w[b]);
  });
  return idx;
}

// Movement room in the direction that lowers g: toward the lower bound for
// w_j > 0, toward the upper bound for w_j < 0. Returns +inf when unbounded.
inline double beneficial_room(const AttackSpec& spec, const Vec& x0,
                              std::size_t j, double w_j) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (w_j == 0.0) return 0.0;
  switch (spec.constraint) {
    case ConstraintKind::None:
      return inf;
    case ConstraintKind::Box:
      return w_j > 0.0 ? x0[j] - spec.box_lower[j] : spec.box_upper[j] - x0[j];
    case ConstraintKind::IncrementOnly:
      return w_j < 0.0 ? spec.caps.caps[j] - x0[j] : 0.0;
    default:
      throw std::logic_error("beneficial_room: unsupported constraint");
  }
}

}  // namespace detail

/// Dense l2 attack. Unconstrained, the minimizer of a linear function over
/// an l2 ball is closed-form: x* = x0 - d_max * w / ||w||_2. Under box
/// constraints the exact solution is recovered from the ball multiplier:
/// x(mu) = clip(x0 - w/(2 mu), box) with ||x(mu) - x0|| monotone in mu, so
/// a bisection on mu pins the active-ball solution.
inline AttackResult attack_dense_l2(const LinearModel& model, const Vec& x0,
                                    const AttackSpec& spec) {
  spec.validate();
  if (spec.cost != NormKind::L2)
    throw DataError("attack_dense_l2 requires an l2 cost");
  if (spec.constraint != ConstraintKind::None &&
      spec.constraint != ConstraintKind::Box)
    throw DataError("attack_dense_l2 supports only unconstrained or box specs");
  if (x0.size() != model.dim())
    throw DataError("attack_dense_l2: sample/model dimension mismatch");
  if (detail::weights_all_zero(model)) return detail::untouched(model, x0, true);
  if (spec.d_max == 0.0) return detail::untouched(model, x0, false);

  const Vec& w = model.weights;
  const std::size_t d = w.size();
  AttackResult r;
  r.g_before = discriminant(model, x0);

  if (spec.constraint == ConstraintKind::None) {
    const double wn = norm_l2(w);
    r.x_star.resize(d);
    for (std::size_t j = 0; j < d; ++j)
      r.x_star[j] = x0[j] - spec.d_max * w[j] / wn;
    r.cost_used = spec.d_max;
    r.finish(model);
    return r;
  }

  // Box case. Work in delta = x - x0 coordinates.
  Vec lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = spec.box_lower[j] - x0[j];
    hi[j] = spec.box_upper[j] - x0[j];
    if (lo[j] > 1e-12 || hi[j] < -1e-12)
      throw DataError("attack_dense_l2: x0 violates the box constraint");
    lo[j] = std::min(lo[j], 0.0);
    hi[j] = std::max(hi[j], 0.0);
  }
  auto delta_at = [&](double mu, Vec& out) {
    for (std::size_t j = 0; j < d; ++j)
      out[j] = std::clamp(-w[j] / (2.0 * mu), lo[j], hi[j]);
  };
  // Corner reached as mu -> 0+.
  Vec corner(d);
  for (std::size_t j = 0; j < d; ++j)
    corner[j] = w[j] > 0.0 ? lo[j] : (w[j] < 0.0 ? hi[j] : 0.0);
  Vec delta = corner;
  if (norm_l2(corner) > spec.d_max) {
    double mu_hi = norm_l2(w) / (2.0 * spec.d_max);  // ||delta(mu_hi)|| <= d_max
    double mu_lo = mu_hi;
    Vec probe(d);
    while (true) {
      mu_lo *= 0.5;
      delta_at(mu_lo, probe);
      if (norm_l2(probe) >= spec.d_max || mu_lo < 1e-300) break;
    }
    for (int it = 0; it < 200; ++it) {
      const double mu = 0.5 * (mu_lo + mu_hi);
      delta_at(mu, probe);
      (norm_l2(probe) > spec.d_max ? mu_lo : mu_hi) = mu;
    }
    delta_at(mu_hi, delta);  // feasible side of the bracket
  }
  r.x_star.resize(d);
  for (std::size_t j = 0; j < d; ++j) r.x_star[j] = x0[j] + delta[j];
  r.cost_used = norm_l2(delta);
  r.finish(model);
  return r;
}

/// Sparse l1 attack: the exact LP optimum, computed greedily. Features are
/// visited by |w_j| descending (ties by lower index) and each is moved in
/// its beneficial direction until the box limit or the remaining budget
/// runs out.
inline AttackResult attack_sparse_l1(const LinearModel& model, const Vec& x0,
                                     const AttackSpec& spec) {
  spec.validate();
  if (spec.cost != NormKind::L1)
    throw DataError("attack_sparse_l1 requires an l1 cost");
  if (spec.constraint != ConstraintKind::None &&
      spec.constraint != ConstraintKind::Box)
    throw DataError("attack_sparse_l1 supports only unconstrained or box specs");
  if (x0.size() != model.dim())
    throw DataError("attack_sparse_l1: sample/model dimension mismatch");
  if (spec.constraint == ConstraintKind::Box)
    for (std::size_t j = 0; j < x0.size(); ++j)
      if (x0[j] < spec.box_lower[j] - 1e-12 || x0[j] > spec.box_upper[j] + 1e-12)
        throw DataError("attack_sparse_l1: x0 violates the box constraint");
  if (detail::weights_all_zero(model)) return detail::untouched(model, x0, true);
  if (spec.d_max == 0.0) return detail::untouched(model, x0, false);

  const Vec& w = model.weights;
  AttackResult r;
  r.g_before = discriminant(model, x0);
  r.x_star = x0;
  double remaining = spec.d_max;
  for (std::size_t j : detail::order_by_weight_magnitude(w)) {
    if (remaining <= 0.0 || w[j] == 0.0) break;
    const double room = detail::beneficial_room(spec, x0, j, w[j]);
    const double take = std::min(room, remaining);
    if (take <= 0.0) continue;
    r.x_star[j] += (w[j] > 0.0 ? -take : take);
    remaining -= take;
  }
  r.cost_used = spec.d_max - std::max(remaining, 0.0);
  r.finish(model);
  return r;
}

/// Boolean feature-flip attack (the spam "good word" attack). d_max is the
/// integer flip allowance; the k most beneficial flips are applied
/// (1 -> 0 where w_j > 0, 0 -> 1 where w_j < 0), skipping flips that would
/// not lower g. Exact among all <= d_max flip modifications.
inline AttackResult attack_boolean(const LinearModel& model, const Vec& x0,
                                   const AttackSpec& spec) {
  spec.validate();
  if (spec.constraint != ConstraintKind::BooleanFlip)
    throw DataError("attack_boolean requires a BOOLEAN_FLIP spec");
  if (x0.size() != model.dim())
    throw DataError("attack_boolean: sample/model dimension mismatch");
  for (double v : x0)
    if (v != 0.0 && v != 1.0)
      throw DataError("attack_boolean: input sample is not boolean");
  if (detail::weights_all_zero(model)) return detail::untouched(model, x0, true);

  const Vec& w = model.weights;
  AttackResult r;
  r.g_before = discriminant(model, x0);
  r.x_star = x0;
  const auto flips_allowed =
      static_cast<std::size_t>(std::max(0.0, std::floor(spec.d_max + 1e-12)));
  std::size_t used = 0;
  for (std::size_t j : detail::order_by_weight_magnitude(w)) {
    if (used == flips_allowed) break;
    const bool beneficial = (x0[j] == 1.0 && w[j] > 0.0) ||
                            (x0[j] == 0.0 && w[j] < 0.0);
    if (!beneficial) continue;
    r.x_star[j] = 1.0 - r.x_star[j];
    ++used;
  }
  r.cost_used = static_cast<double>(used);
  r.finish(model);
  return r;
}

/// Increment-only sparse attack (PDF keyword injection): l1 budget spent
/// greedily on features with w_j < 0, each capped at caps[j] - x0[j]. With
/// spec.integral set, per-feature allocations are rounded down to whole
/// increments before being applied.
inline AttackResult attack_increment_only(const LinearModel& model, const Vec& x0,
                                          const AttackSpec& spec) {
  spec.validate();
  if (spec.constraint != ConstraintKind::IncrementOnly)
    throw DataError("attack_increment_only requires an INCREMENT_ONLY spec");
  if (spec.cost != NormKind::L1)
    throw DataError("attack_increment_only requires an l1 cost");
  if (x0.size() != model.dim() || spec.caps.caps.size() != model.dim())
    throw DataError("attack_increment_only: dimension mismatch");
  spec.caps.validate();
  for (std::size_t j = 0; j < x0.size(); ++j)
    if (x0[j] > spec.caps.caps[j])
      throw DataError("attack_increment_only: x0 exceeds cap at feature " +
                      std::to_string(j));
  if (detail::weights_all_zero(model)) return detail::untouched(model, x0, true);

  const Vec& w = model.weights;
  AttackResult r;
  r.g_before = discriminant(model, x0);
  r.x_star = x0;
  double remaining = spec.d_max;
  double used = 0.0;
  for (std::size_t j : detail::order_by_weight_magnitude(w)) {
    if (remaining <= 0.0 || w[j] == 0.0) break;
    if (w[j] >= 0.0) continue;  // increments on these features raise g
    double take = std::min(spec.caps.caps[j] - x0[j], remaining);
    if (spec.integral) take = std::floor(take);
    if (take <= 0.0) continue;
    r.x_star[j] += take;
    remaining -= take;
    used += take;
  }
  r.cost_used = used;
  r.finish(model);
  return r;
}

namespace detail {

// Projection onto the cost ball {x : cost(x - x0) <= d_max} around x0.
inline Vec project_cost_ball(const Vec& x, const Vec& x0, NormKind cost,
                             double d_max) {
  const std::size_t d = x.size();
  Vec delta(d);
  for (std::size_t j = 0; j < d; ++j) delta[j] = x[j] - x0[j];
  if (cost == NormKind::L2) {
    const double n = norm_l2(delta);
    if (n > d_max) {
      const double s = d_max / n;
      for (double& v : delta) v *= s;
    }
  } else {
    delta = project_l1_ball(delta, d_max);
  }
  Vec out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = x0[j] + delta[j];
  return out;
}

inline Vec project_box(const Vec& x, const Vec& lo, const Vec& hi) {
  Vec out(x);
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = std::clamp(out[j], lo[j], hi[j]);
  return out;
}

// Projection onto (cost ball around x0) n (box), computed exactly from the
// KKT structure. Both intersections reduce to a one-dimensional monotone
// root-find on the ball multiplier:
//   l2: x(mu) = clip((z + mu*x0)/(1 + mu), box), ||x(mu) - x0|| decreasing;
//   l1: delta(theta) = clip(soft(z - x0, theta), box - x0), ||.||_1
//       decreasing (clipping a 1-D prox is the boxed 1-D prox).
inline Vec project_feasible(const Vec& z, const Vec& x0, const AttackSpec& spec) {
  const std::size_t d = z.size();
  const bool boxed = spec.constraint == ConstraintKind::Box ||
                     spec.constraint == ConstraintKind::IncrementOnly;
  if (!boxed) return project_cost_ball(z, x0, spec.cost, spec.d_max);

  Vec lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (spec.constraint == ConstraintKind::Box) {
      lo[j] = spec.box_lower[j];
      hi[j] = spec.box_upper[j];
    } else {
      lo[j] = x0[j];
      hi[j] = spec.caps.caps[j];
    }
  }

  if (spec.cost == NormKind::L2) {
    Vec x = project_box(z, lo, hi);
    Vec delta(d);
    for (std::size_t j = 0; j < d; ++j) delta[j] = x[j] - x0[j];
    if (norm_l2(delta) <= spec.d_max) return x;
    auto at = [&](double mu, Vec& out) {
      for (std::size_t j = 0; j < d; ++j)
        out[j] = std::clamp((z[j] + mu * x0[j]) / (1.0 + mu), lo[j], hi[j]);
    };
    auto radius = [&](const Vec& x_mu) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        s += (x_mu[j] - x0[j]) * (x_mu[j] - x0[j]);
      return std::sqrt(s);
    };
    double mu_lo = 0.0, mu_hi = 1.0;
    Vec probe(d);
    for (int it = 0; it < 200; ++it) {
      at(mu_hi, probe);
      if (radius(probe) <= spec.d_max) break;
      mu_hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
      const double mu = 0.5 * (mu_lo + mu_hi);
      at(mu, probe);
      (radius(probe) > spec.d_max ? mu_lo : mu_hi) = mu;
    }
    at(mu_hi, probe);  // feasible side
    return probe;
  }

  // l1 cost
  Vec v(d), dlo(d), dhi(d);
  for (std::size_t j = 0; j < d; ++j) {
    v[j] = z[j] - x0[j];
    dlo[j] = std::min(lo[j] - x0[j], 0.0);
    dhi[j] = std::max(hi[j] - x0[j], 0.0);
  }
  auto at = [&](double theta, Vec& out) {
    for (std::size_t j = 0; j < d; ++j) {
      const double soft = sgn0(v[j]) * std::max(std::abs(v[j]) - theta, 0.0);
      out[j] = std::clamp(soft, dlo[j], dhi[j]);
    }
  };
  Vec delta(d);
  at(0.0, delta);
  if (norm_l1(delta) > spec.d_max) {
    double th_lo = 0.0, th_hi = norm_linf(v);
    Vec probe(d);
    for (int it = 0; it < 200; ++it) {
      const double th = 0.5 * (th_lo + th_hi);
      at(th, probe);
      (norm_l1(probe) > spec.d_max ? th_lo : th_hi) = th;
    }
    at(th_hi, delta);  // feasible side
  }
  Vec x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = x0[j] + delta[j];
  return x;
}

}  // namespace detail

/// Generic projected-gradient attack. Because g is linear the routine
/// projects the accumulated gradient step x0 - t_k * w/||w|| back onto the
/// feasible set and keeps the best iterate; t_k grows geometrically from
/// the base step up to 3e7 * d_max, since the projection of an ever more
/// distant point along -w converges to the optimal face (suboptimality is
/// bounded by ||w|| D^2 / (2 t)). Supports every spec with a computable
/// projection: l2/l1 balls, optionally intersected with a box or
/// increment-only region. step_size <= 0 selects the default 2*d_max/steps.
inline AttackResult attack_pgd(const LinearModel& model, const Vec& x0,
                               const AttackSpec& spec, int steps = 100,
                               double step_size = 0.0) {
  spec.validate();
  if (spec.constraint == ConstraintKind::BooleanFlip)
    throw DataError("attack_pgd: no projection exists for boolean flips");
  if (x0.size() != model.dim())
    throw DataError("attack_pgd: sample/model dimension mismatch");
  if (steps < 0) throw DataError("attack_pgd: steps must be >= 0");
  if (detail::weights_all_zero(model) || steps == 0)
    return detail::untouched(model, x0, detail::weights_all_zero(model));

  const std::size_t d = x0.size();
  const double wn = norm_l2(model.weights);
  const double eta = step_size > 0.0 ? step_size
                                     : 2.0 * spec.d_max / static_cast<double>(steps);
  AttackResult r = detail::untouched(model, x0, false);
  Vec z(d), best = x0;
  double best_g = r.g_before;
  const double t_max = 3e7 * spec.d_max;
  const double ratio =
      steps > 1 ? std::pow(std::max(t_max / eta, 1.0), 1.0 / (steps - 1)) : 1.0;
  double t = eta;
  for (int k = 1; k <= steps; ++k, t *= ratio) {
    for (std::size_t j = 0; j < d; ++j)
      z[j] = x0[j] - t * model.weights[j] / wn;
    Vec x = detail::project_feasible(z, x0, spec);
    const double g = discriminant(model, x);
    if (g < best_g) {
      best_g = g;
      best = std::move(x);
    }
  }
  r.x_star = std::move(best);
  Vec delta(d);
  for (std::size_t j = 0; j < d; ++j) delta[j] = r.x_star[j] - x0[j];
  r.cost_used = norm_value(spec.cost, delta);
  r.finish(model);
  return r;
}

/// Validation oracle. Boolean instances are solved by exhaustive search
/// over all flip subsets (d <= 12). Continuous l1-cost instances are solved
/// exactly by enumerating every feature ordering and allocating the budget
/// greedily along each (d <= 8; the optimum is attained by some ordering).
/// With grid_resolution > 0, low-dimensional continuous instances (d <= 3)
/// are solved by grid search instead. Anything larger is refused.
inline AttackResult attack_bruteforce(const LinearModel& model, const Vec& x0,
                                      const AttackSpec& spec,
                                      double grid_resolution = 0.0) {
  spec.validate();
  if (x0.size() != model.dim())
    throw DataError("attack_bruteforce: sample/model dimension mismatch");
  const std::size_t d = x0.size();
  AttackResult r;
  r.g_before = discriminant(model, x0);
  r.x_star = x0;

  if (spec.constraint == ConstraintKind::BooleanFlip) {
    if (d > 12)
      throw NumericError("attack_bruteforce: boolean instance too large (d > 12)");
    for (double v : x0)
      if (v != 0.0 && v != 1.0)
        throw DataError("attack_bruteforce: input sample is not boolean");
    const auto flips_allowed =
        static_cast<unsigned>(std::max(0.0, std::floor(spec.d_max + 1e-12)));
    double best_g = r.g_before;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      if (std::popcount(mask) > static_cast<int>(flips_allowed)) continue;
      double g = model.bias;
      for (std::size_t j = 0; j < d; ++j) {
        const double xj = (mask >> j) & 1u ? 1.0 - x0[j] : x0[j];
        g += model.weights[j] * xj;
      }
      if (g < best_g) {
        best_g = g;
        best_mask = mask;
      }
    }
    for (std::size_t j = 0; j < d; ++j)
      if ((best_mask >> j) & 1u) r.x_star[j] = 1.0 - x0[j];
    r.cost_used = static_cast<double>(std::popcount(best_mask));
    r.finish(model);
    return r;
  }

  if (grid_resolution > 0.0) {
    if (d > 3)
      throw NumericError("attack_bruteforce: grid search limited to d <= 3");
    Vec lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = x0[j] - spec.d_max;
      hi[j] = x0[j] + spec.d_max;
      if (spec.constraint == ConstraintKind::Box) {
        lo[j] = std::max(lo[j], spec.box_lower[j]);
        hi[j] = std::min(hi[j], spec.box_upper[j]);
      } else if (spec.constraint == ConstraintKind::IncrementOnly) {
        lo[j] = std::max(lo[j], x0[j]);
        hi[j] = std::min(hi[j], spec.caps.caps[j]);
      }
      if (lo[j] > hi[j])
        throw DataError("attack_bruteforce: x0 lies outside the constraint set");
    }
    std::vector<std::size_t> steps(d);
    for (std::size_t j = 0; j < d; ++j)
      steps[j] = static_cast<std::size_t>(
                     std::floor((hi[j] - lo[j]) / grid_resolution + 1e-9)) + 1;
    Vec x(d), delta(d);
    double best_g = r.g_before;
    Vec best = x0;
    std::vector<std::size_t> ix(d, 0);
    while (true) {
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = std::min(lo[j] + static_cast<double>(ix[j]) * grid_resolution, hi[j]);
        delta[j] = x[j] - x0[j];
      }
      if (norm_value(spec.cost, delta) <= spec.d_max + 1e-12) {
        const double g = discriminant(model, x);
        if (g < best_g) {
          best_g = g;
          best = x;
        }
      }
      std::size_t j = 0;
      for (; j < d; ++j) {
        if (++ix[j] < steps[j]) break;
        ix[j] = 0;
      }
      if (j == d) break;
    }
    r.x_star = best;
    Vec bd(d);
    for (std::size_t j = 0; j < d; ++j) bd[j] = r.x_star[j] - x0[j];
    r.cost_used = norm_value(spec.cost, bd);
    r.finish(model);
    return r;
  }

  // Exact mode for continuous l1-cost instances: best greedy allocation
  // over all d! feature orderings (only beneficial moves are ever applied;
  // harmful or zero-weight moves cannot appear in an optimum).
  if (spec.cost != NormKind::L1)
    throw NumericError(
        "attack_bruteforce: exact continuous mode supports only l1 costs; "
        "pass a grid_resolution for l2");
  if (d > 8)
    throw NumericError("attack_bruteforce: exact l1 enumeration limited to d <= 8");
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best_g = r.g_before;
  Vec best = x0;
  do {
    Vec x = x0;
    double remaining = spec.d_max;
    for (std::size_t j : perm) {
      if (remaining <= 0.0) break;
      const double w_j = model.weights[j];
      if (w_j == 0.0) continue;
      const double room = detail::beneficial_room(spec, x0, j, w_j);
      double take = std::min(room, remaining);
      if (spec.constraint == ConstraintKind::IncrementOnly && spec.integral)
        take = std::floor(take);
      if (take <= 0.0) continue;
      x[j] += (w_j > 0.0 ? -take : take);
      remaining -= take;
    }
    const double g = discriminant(model, x);
    if (g < best_g) {
      best_g = g;
      best = x;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  r.x_star = best;
  Vec bd(d);
  for (std::size_t j = 0; j < d; ++j) bd[j] = r.x_star[j] - x0[j];
  r.cost_used = norm_l1(bd);
  r.finish(model);
  return r;
}

enum class AttackKind { DenseL2, SparseL1, BooleanFlip, IncrementOnly, Pgd };

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::DenseL2: return "dense_l2";
    case AttackKind::SparseL1: return "sparse_l1";
    case AttackKind::BooleanFlip: return "boolean";
    case AttackKind::IncrementOnly: return "increment";
    case AttackKind::Pgd: return "pgd";
  }
  throw std::logic_error("unknown AttackKind");
}

inline AttackKind attack_kind_from_name(const std::string& name) {
  if (name == "dense_l2") return AttackKind::DenseL2;
  if (name == "sparse_l1") return AttackKind::SparseL1;
  if (name == "boolean") return AttackKind::BooleanFlip;
  if (name == "increment") return AttackKind::IncrementOnly;
  if (name == "pgd") return AttackKind::Pgd;
  throw DataError("unknown attack kind: '" + name + "'");
}

inline AttackResult run_attack(const LinearModel& model, const Vec& x0,
                               const AttackSpec& spec, AttackKind kind,
                               int pgd_steps = 100, double pgd_step_size = 0.0) {
  switch (kind) {
    case AttackKind::DenseL2: return attack_dense_l2(model, x0, spec);
    case AttackKind::SparseL1: return attack_sparse_l1(model, x0, spec);
    case AttackKind::BooleanFlip: return attack_boolean(model, x0, spec);
    case AttackKind::IncrementOnly: return attack_increment_only(model, x0, spec);
    case AttackKind::Pgd: return attack_pgd(model, x0, spec, pgd_steps, pgd_step_size);
  }
  throw std::logic_error("unknown AttackKind");
}

}  // namespace secsvm
