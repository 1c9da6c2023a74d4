#pragma once

// The five penalties (l2^2/2, l1, linf, elastic net, octagonal), their
// subgradients and proximal maps, and the dual-norm machinery that links
// uncertainty sets to regularizers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "core.hpp"

namespace secsvm {

enum class NormKind { L1, L2, Linf };

inline const char* norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  throw std::logic_error("unknown NormKind");
}

struct RegularizerSpec {
  RegKind kind = RegKind::L2;
  double lambda = 0.5;  // elastic net trade-off, in (0,1)
  double rho = 0.5;     // octagonal trade-off, in (0,1)

  void validate() const {
    if (kind == RegKind::ElasticNet && !(lambda > 0.0 && lambda < 1.0))
      throw DataError("elastic-net lambda must lie strictly inside (0,1)");
    if (kind == RegKind::Octagonal && !(rho > 0.0 && rho < 1.0))
      throw DataError("octagonal rho must lie strictly inside (0,1)");
  }

  static RegularizerSpec l2() { return {RegKind::L2}; }
  static RegularizerSpec l1() { return {RegKind::L1}; }
  static RegularizerSpec linf() { return {RegKind::Linf}; }
  static RegularizerSpec elastic_net(double lambda) {
    RegularizerSpec s{RegKind::ElasticNet};
    s.lambda = lambda;
    return s;
  }
  static RegularizerSpec octagonal(double rho) {
    RegularizerSpec s{RegKind::Octagonal};
    s.rho = rho;
    return s;
  }
};

inline double norm_l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline double norm_l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_linf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline double norm_value(NormKind kind, std::span<const double> v) {
  switch (kind) {
    case NormKind::L1: return norm_l1(v);
    case NormKind::L2: return norm_l2(v);
    case NormKind::Linf: return norm_linf(v);
  }
  throw std::logic_error("unknown NormKind");
}

/// ||v||* = max over ||u|| <= 1 of v'u. Pairs l1 <-> linf; l2 is self-dual.
inline double dual_norm(NormKind kind, std::span<const double> v) {
  switch (kind) {
    case NormKind::L1: return norm_linf(v);
    case NormKind::L2: return norm_l2(v);
    case NormKind::Linf: return norm_l1(v);
  }
  throw std::logic_error("unknown NormKind");
}

inline double norm_value(NormKind kind, const Vec& v) {
  return norm_value(kind, std::span<const double>(v));
}
inline double dual_norm(NormKind kind, const Vec& v) {
  return dual_norm(kind, std::span<const double>(v));
}

/// Penalty value. L2 denotes the standard SVM term (1/2)||w||_2^2; all
/// others are the unsquared forms, exactly as each objective is written.
inline double reg_value(const RegularizerSpec& spec, std::span<const double> w) {
  switch (spec.kind) {
    case RegKind::L2: {
      double s = 0.0;
      for (double x : w) s += x * x;
      return 0.5 * s;
    }
    case RegKind::L1: return norm_l1(w);
    case RegKind::Linf: return norm_linf(w);
    case RegKind::ElasticNet:
      return (1.0 - spec.lambda) * norm_l1(w) + 0.5 * spec.lambda * [&] {
        double s = 0.0;
        for (double x : w) s += x * x;
        return s;
      }();
    case RegKind::Octagonal:
      return (1.0 - spec.rho) * norm_l1(w) + spec.rho * norm_linf(w);
  }
  throw std::logic_error("unknown RegKind");
}

inline double reg_value(const RegularizerSpec& spec, const Vec& w) {
  return reg_value(spec, std::span<const double>(w));
}

namespace detail {

// sign with sign(0) = 0, the subgradient choice at the l1 kink.
inline double sgn0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Subgradient of ||.||_inf: all mass on the first coordinate attaining the
// maximum absolute value; the zero vector at w = 0.
inline Vec linf_subgradient(std::span<const double> w) {
  Vec g(w.size(), 0.0);
  double best = 0.0;
  std::size_t best_j = w.size();
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (std::abs(w[j]) > best) {
      best = std::abs(w[j]);
      best_j = j;
    }
  }
  if (best_j < w.size()) g[best_j] = sgn0(w[best_j]);
  return g;
}

}  // namespace detail

/// A deterministic member of the subdifferential at w.
inline Vec reg_subgradient(const RegularizerSpec& spec, std::span<const double> w) {
  Vec g(w.size(), 0.0);
  switch (spec.kind) {
    case RegKind::L2:
      for (std::size_t j = 0; j < w.size(); ++j) g[j] = w[j];
      return g;
    case RegKind::L1:
      for (std::size_t j = 0; j < w.size(); ++j) g[j] = detail::sgn0(w[j]);
      return g;
    case RegKind::Linf:
      return detail::linf_subgradient(w);
    case RegKind::ElasticNet:
      for (std::size_t j = 0; j < w.size(); ++j)
        g[j] = (1.0 - spec.lambda) * detail::sgn0(w[j]) + spec.lambda * w[j];
      return g;
    case RegKind::Octagonal: {
      Vec gi = detail::linf_subgradient(w);
      for (std::size_t j = 0; j < w.size(); ++j)
        g[j] = (1.0 - spec.rho) * detail::sgn0(w[j]) + spec.rho * gi[j];
      return g;
    }
  }
  throw std::logic_error("unknown RegKind");
}

inline Vec reg_subgradient(const RegularizerSpec& spec, const Vec& w) {
  return reg_subgradient(spec, std::span<const double>(w));
}

/// Euclidean projection of v onto the l1 ball of the given radius
/// (Duchi et al.'s sort-based algorithm).
inline Vec project_l1_ball(std::span<const double> v, double radius) {
  const std::size_t d = v.size();
  Vec out(v.begin(), v.end());
  if (radius <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  if (norm_l1(v) <= radius) return out;
  Vec mag(d);
  for (std::size_t j = 0; j < d; ++j) mag[j] = std::abs(v[j]);
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    cum += mag[k];
    const double t = (cum - radius) / static_cast<double>(k + 1);
    if (k + 1 == d || mag[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double shrunk = std::max(std::abs(v[j]) - theta, 0.0);
    out[j] = detail::sgn0(v[j]) * shrunk;
  }
  return out;
}

/// prox_{tau * reg}(v) = argmin_p (1/2)||p - v||^2 + tau * reg(p).
/// Closed forms: shrinkage for l2, soft-thresholding for l1, the Moreau
/// identity with the l1-ball projection for linf (which clamps the largest
/// magnitudes to one shared level, producing exact ties), and compositions
/// for elastic net and octagonal (soft-threshold first, then the smooth or
/// linf part; the composition is validated against the prox optimality
/// condition in the test suite).
inline Vec reg_prox(const RegularizerSpec& spec, std::span<const double> v, double tau) {
  const std::size_t d = v.size();
  Vec out(d, 0.0);
  switch (spec.kind) {
    case RegKind::L2:
      for (std::size_t j = 0; j < d; ++j) out[j] = v[j] / (1.0 + tau);
      return out;
    case RegKind::L1:
      for (std::size_t j = 0; j < d; ++j)
        out[j] = detail::sgn0(v[j]) * std::max(std::abs(v[j]) - tau, 0.0);
      return out;
    case RegKind::Linf: {
      Vec proj = project_l1_ball(v, tau);
      for (std::size_t j = 0; j < d; ++j) out[j] = v[j] - proj[j];
      return out;
    }
    case RegKind::ElasticNet: {
      const double t1 = tau * (1.0 - spec.lambda);
      const double t2 = tau * spec.lambda;
      for (std::size_t j = 0; j < d; ++j) {
        const double s = detail::sgn0(v[j]) * std::max(std::abs(v[j]) - t1, 0.0);
        out[j] = s / (1.0 + t2);
      }
      return out;
    }
    case RegKind::Octagonal: {
      Vec mid(d);
      const double t1 = tau * (1.0 - spec.rho);
      for (std::size_t j = 0; j < d; ++j)
        mid[j] = detail::sgn0(v[j]) * std::max(std::abs(v[j]) - t1, 0.0);
      Vec proj = project_l1_ball(mid, tau * spec.rho);
      for (std::size_t j = 0; j < d; ++j) out[j] = mid[j] - proj[j];
      return out;
    }
  }
  throw std::logic_error("unknown RegKind");
}

inline Vec reg_prox(const RegularizerSpec& spec, const Vec& v, double tau) {
  return reg_prox(spec, std::span<const double>(v), tau);
}

}  // namespace secsvm
