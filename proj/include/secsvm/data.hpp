#pragma once

// Dataset ingestion (dense CSV, sparse "label idx:val" text, IDX images),
// synthetic surrogate generators, and stratified splitting.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace secsvm {

/// Deterministic sampling on top of mt19937_64. The distribution
/// transforms are written out here because the std:: distributions are
/// implementation-defined, and generated datasets must be byte-identical
/// for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  double uniform01() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {  // Box-Muller
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  int poisson(double lambda) {  // Knuth's product method; fine for small lambda
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[gen_() % i]);
  }

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

enum class SynthKind { Gauss2, BooleanText, Counts };

/// Synthetic surrogates for the spam / PDF / digit corpora. Gauss2 places
/// two spherical Gaussians `separation` apart, with the mean difference
/// spread evenly over the first half of the features and the rest pure
/// noise, so sparse and even weightings both have something to find.
/// BooleanText draws per-class Bernoulli term indicators; Counts draws
/// per-class Poisson keyword counts. Rates may be supplied explicitly;
/// otherwise they are drawn from the seed, alternating class-indicative
/// direction by feature.
struct SynthSpec {
  std::uint64_t seed = 0;
  std::size_t d = 2;
  std::size_t m_per_class = 100;
  SynthKind kind = SynthKind::Gauss2;
  double separation = 4.0;  // Gauss2
  Vec rate_pos;             // BooleanText: P(x_j=1 | +1); Counts: Poisson mean
  Vec rate_neg;

  void validate() const {
    if (d < 2) throw DataError("synthetic data needs d >= 2");
    if (m_per_class < 1) throw DataError("synthetic data needs m_per_class >= 1");
    if (kind == SynthKind::Gauss2 && !(separation > 0.0))
      throw DataError("Gauss2 separation must be positive");
    if (!rate_pos.empty() && rate_pos.size() != d)
      throw DataError("rate_pos length must equal d");
    if (!rate_neg.empty() && rate_neg.size() != d)
      throw DataError("rate_neg length must equal d");
  }
};

inline Dataset generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Dataset data;
  data.d = spec.d;
  data.m = 2 * spec.m_per_class;
  data.values.assign(data.m * data.d, 0.0);
  data.labels.assign(data.m, 0);

  Vec rp = spec.rate_pos, rn = spec.rate_neg;
  if (spec.kind != SynthKind::Gauss2 && (rp.empty() || rn.empty())) {
    rp.resize(spec.d);
    rn.resize(spec.d);
    for (std::size_t j = 0; j < spec.d; ++j) {
      const bool pos_indicative = (j % 2 == 0);
      double hi, lo;
      if (spec.kind == SynthKind::BooleanText) {
        hi = rng.uniform(0.15, 0.45);
        lo = rng.uniform(0.02, 0.12);
      } else {
        hi = rng.uniform(1.0, 4.0);
        lo = rng.uniform(0.1, 0.8);
      }
      rp[j] = pos_indicative ? hi : lo;
      rn[j] = pos_indicative ? lo : hi;
    }
  }

  const std::size_t signal_features = (spec.d + 1) / 2;
  const double mu =
      spec.kind == SynthKind::Gauss2
          ? spec.separation / (2.0 * std::sqrt(static_cast<double>(signal_features)))
          : 0.0;
  for (std::size_t i = 0; i < data.m; ++i) {
    const int y = (i % 2 == 0) ? +1 : -1;
    data.labels[i] = y;
    for (std::size_t j = 0; j < spec.d; ++j) {
      double v = 0.0;
      switch (spec.kind) {
        case SynthKind::Gauss2:
          v = (j < signal_features ? (y > 0 ? mu : -mu) : 0.0) + rng.normal();
          break;
        case SynthKind::BooleanText:
          v = rng.bernoulli(y > 0 ? rp[j] : rn[j]) ? 1.0 : 0.0;
          break;
        case SynthKind::Counts:
          v = static_cast<double>(rng.poisson(y > 0 ? rp[j] : rn[j]));
          break;
      }
      data.values[i * data.d + j] = v;
    }
  }

  data.meta.resize(spec.d);
  for (auto& fm : data.meta) {
    switch (spec.kind) {
      case SynthKind::Gauss2:
        break;  // unbounded
      case SynthKind::BooleanText:
        fm = {0.0, 1.0, true};
        break;
      case SynthKind::Counts:
        fm = {0.0, std::numeric_limits<double>::infinity(), false};
        break;
    }
  }
  data.validate();
  return data;
}

namespace detail {

// boolean if the column only holds {0,1}; count-style [0, inf) if it only
// holds non-negative integers; unbounded otherwise.
inline void infer_feature_meta(Dataset& data) {
  data.meta.assign(data.d, FeatureMeta{});
  for (std::size_t j = 0; j < data.d; ++j) {
    bool boolean = true, count = true;
    for (std::size_t i = 0; i < data.m; ++i) {
      const double v = data.value(i, j);
      boolean &= (v == 0.0 || v == 1.0);
      count &= (v >= 0.0 && std::floor(v) == v);
    }
    if (boolean) {
      data.meta[j] = {0.0, 1.0, true};
    } else if (count) {
      data.meta[j] = {0.0, std::numeric_limits<double>::infinity(), false};
    }
  }
}

// Accepts -1/+1 labels directly and 0/1 labels via the 0 -> -1 mapping.
// Mixing -1 and 0 in one file is ambiguous and rejected.
inline void normalize_labels(std::vector<int>& labels,
                             const std::vector<std::size_t>& lines,
                             const std::string& path) {
  bool has_zero = false, has_minus = false;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == 0) has_zero = true;
    if (labels[k] == -1) has_minus = true;
    if (labels[k] != -1 && labels[k] != 0 && labels[k] != 1)
      throw DataError(path + ":" + std::to_string(lines[k]) +
                      ": label must be -1, 0, or +1");
  }
  if (has_zero && has_minus)
    throw DataError(path + ": file mixes 0 and -1 labels");
  if (has_zero) {
    std::cerr << "warning: " << path << ": 0/1 labels mapped to -1/+1\n";
    for (int& y : labels)
      if (y == 0) y = -1;
  }
}

inline double parse_number(const std::string& token, const std::string& path,
                           std::size_t line) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line) + ": unparseable field '" +
                    token + "'");
  }
  if (consumed != token.size())
    throw DataError(path + ":" + std::to_string(line) + ": unparseable field '" +
                    token + "'");
  return v;
}

}  // namespace detail

/// Dense CSV. One row per sample, label in `label_column` (0-based), every
/// other column a feature. Ragged or unparseable rows fail with their line
/// number. Feature bounds are inferred per column.
inline Dataset load_csv(const std::string& path, std::size_t label_column = 0,
                        bool has_header = false) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  Dataset data;
  std::vector<int> labels;
  std::vector<std::size_t> label_lines;
  std::string line;
  std::size_t lineno = 0, ncols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && has_header) continue;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (ncols == 0) {
      ncols = fields.size();
      if (ncols < 2)
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": need at least a label and one feature column");
      if (label_column >= ncols)
        throw DataError(path + ": label column " + std::to_string(label_column) +
                        " out of range for " + std::to_string(ncols) + " columns");
      data.d = ncols - 1;
    }
    if (fields.size() != ncols)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(ncols) + " fields, got " +
                      std::to_string(fields.size()));
    for (std::size_t c = 0; c < ncols; ++c) {
      const double v = detail::parse_number(fields[c], path, lineno);
      if (c == label_column) {
        if (v != -1.0 && v != 0.0 && v != 1.0)
          throw DataError(path + ":" + std::to_string(lineno) +
                          ": label must be -1, 0, or +1");
        labels.push_back(static_cast<int>(v));
        label_lines.push_back(lineno);
      } else {
        data.values.push_back(v);
      }
    }
    ++data.m;
  }
  if (data.m == 0) throw DataError(path + ": no data rows");
  detail::normalize_labels(labels, label_lines, path);
  data.labels = std::move(labels);
  detail::infer_feature_meta(data);
  data.validate();
  return data;
}

/// Sparse text format: one sample per line, "label idx:val ..." with
/// 1-based indices; absent indices are zero. The dimensionality is the
/// largest index seen unless d_override pins it (useful to align a test
/// file with its training file).
inline Dataset load_sparse(const std::string& path, std::size_t d_override = 0) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  struct Row {
    int label;
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::vector<Row> rows;
  std::vector<std::size_t> label_lines;
  std::string line;
  std::size_t lineno = 0, max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    if (!(ss >> token))
      continue;
    Row row;
    const double y = detail::parse_number(token, path, lineno);
    if (y != -1.0 && y != 0.0 && y != 1.0)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": label must be -1, 0, or +1");
    row.label = static_cast<int>(y);
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": malformed entry '" + token + "'");
      const double raw_idx =
          detail::parse_number(token.substr(0, colon), path, lineno);
      if (raw_idx < 1.0 || std::floor(raw_idx) != raw_idx)
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": feature index must be a positive integer");
      const auto idx = static_cast<std::size_t>(raw_idx);
      for (const auto& [seen, _] : row.entries)
        if (seen == idx)
          throw DataError(path + ":" + std::to_string(lineno) +
                          ": duplicate feature index " + std::to_string(idx));
      const double val = detail::parse_number(token.substr(colon + 1), path, lineno);
      row.entries.emplace_back(idx, val);
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(row));
    label_lines.push_back(lineno);
  }
  if (rows.empty()) throw DataError(path + ": no data rows");
  if (d_override > 0 && d_override < max_index)
    throw DataError(path + ": d override " + std::to_string(d_override) +
                    " is smaller than the largest index " +
                    std::to_string(max_index));
  Dataset data;
  data.d = d_override > 0 ? d_override : max_index;
  if (data.d == 0) throw DataError(path + ": no feature indices seen and no d override");
  data.m = rows.size();
  data.values.assign(data.m * data.d, 0.0);
  std::vector<int> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    labels.push_back(rows[i].label);
    for (const auto& [idx, val] : rows[i].entries)
      data.values[i * data.d + (idx - 1)] = val;
  }
  detail::normalize_labels(labels, label_lines, path);
  data.labels = std::move(labels);
  detail::infer_feature_meta(data);
  data.validate();
  return data;
}

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw DataError(path + ": truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

inline std::vector<unsigned char> read_payload(std::istream& in,
                                               std::size_t expected,
                                               const std::string& path) {
  std::vector<unsigned char> buf(expected);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got != expected)
    throw DataError(path + ": truncated payload, expected " +
                    std::to_string(expected) + " bytes, got " + std::to_string(got));
  return buf;
}

}  // namespace detail

/// IDX image/label pair (big-endian, ubyte). Keeps only the two requested
/// digit classes, mapping class_pos -> +1 and class_neg -> -1. Pixels are
/// multiplied by `scale` (1 keeps 0-255 counts, 1/255 gives unit range);
/// the scale is recorded on the dataset so attack budgets can be reported
/// in the loaded units.
inline Dataset load_idx(const std::string& images_path,
                        const std::string& labels_path, int class_pos,
                        int class_neg, double scale = 1.0) {
  if (class_pos == class_neg)
    throw DataError("load_idx: class_pos and class_neg must differ");
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw DataError("cannot open '" + images_path + "'");
  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw DataError("cannot open '" + labels_path + "'");

  const std::uint32_t img_magic = detail::read_be32(imgs, images_path);
  if (img_magic != 0x00000803u)
    throw DataError(images_path + ": bad IDX image magic (want 0x00000803)");
  const std::uint32_t n_images = detail::read_be32(imgs, images_path);
  const std::uint32_t rows = detail::read_be32(imgs, images_path);
  const std::uint32_t cols = detail::read_be32(imgs, images_path);

  const std::uint32_t lab_magic = detail::read_be32(labs, labels_path);
  if (lab_magic != 0x00000801u)
    throw DataError(labels_path + ": bad IDX label magic (want 0x00000801)");
  const std::uint32_t n_labels = detail::read_be32(labs, labels_path);
  if (n_images != n_labels)
    throw DataError("IDX image/label counts disagree: " + std::to_string(n_images) +
                    " vs " + std::to_string(n_labels));

  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  const auto pixels =
      detail::read_payload(imgs, static_cast<std::size_t>(n_images) * dim, images_path);
  const auto digits = detail::read_payload(labs, n_images, labels_path);

  Dataset data;
  data.d = dim;
  data.scale = scale;
  for (std::size_t i = 0; i < n_images; ++i) {
    const int digit = digits[i];
    int y = 0;
    if (digit == class_pos) y = +1;
    else if (digit == class_neg) y = -1;
    else continue;
    data.labels.push_back(y);
    for (std::size_t j = 0; j < dim; ++j)
      data.values.push_back(static_cast<double>(pixels[i * dim + j]) * scale);
    ++data.m;
  }
  if (data.m == 0)
    throw DataError("IDX files contain no samples of classes " +
                    std::to_string(class_pos) + "/" + std::to_string(class_neg));
  data.meta.assign(data.d, FeatureMeta{0.0, 255.0 * scale, false});
  data.validate();
  return data;
}

/// Save as dense CSV (label first). %.17g keeps every double exact across
/// a save/load round trip.
inline void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  char buf[64];
  for (std::size_t i = 0; i < data.m; ++i) {
    out << data.labels[i];
    for (std::size_t j = 0; j < data.d; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.value(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

/// Save in the sparse "label idx:val" format (1-based, zeros omitted).
inline void save_sparse(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  char buf[80];
  for (std::size_t i = 0; i < data.m; ++i) {
    out << (data.labels[i] > 0 ? "+1" : "-1");
    for (std::size_t j = 0; j < data.d; ++j) {
      const double v = data.value(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), " %zu:%.17g", j + 1, v);
      out << buf;
    }
    out << '\n';
  }
}

struct Split {
  Dataset train;
  Dataset test;
  bool test_empty = false;
};

/// Seeded disjoint split. Stratified mode splits each class separately so
/// both sides stay balanced; per-class sizes land within one sample of the
/// requested fraction. train_fraction = 1 yields an empty, flagged test set.
inline Split split(const Dataset& data, double train_fraction, std::uint64_t seed,
                   bool stratified = true) {
  data.validate();
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw DataError("split: train_fraction must lie in [0, 1]");
  if (stratified && !data.has_both_classes())
    throw DataError("split: stratified split needs both classes");

  std::vector<std::size_t> train_rows, test_rows;
  Rng rng(seed);
  auto deal = [&](std::vector<std::size_t>& pool) {
    rng.shuffle(pool);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(pool.size())));
    for (std::size_t k = 0; k < pool.size(); ++k)
      (k < n_train ? train_rows : test_rows).push_back(pool[k]);
  };
  if (stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.m; ++i)
      (data.labels[i] > 0 ? pos : neg).push_back(i);
    deal(pos);
    deal(neg);
  } else {
    std::vector<std::size_t> all(data.m);
    std::iota(all.begin(), all.end(), std::size_t{0});
    deal(all);
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  auto take = [&](const std::vector<std::size_t>& rows) {
    Dataset out;
    out.d = data.d;
    out.m = rows.size();
    out.meta = data.meta;
    out.scale = data.scale;
    out.labels.reserve(rows.size());
    out.values.reserve(rows.size() * data.d);
    for (std::size_t i : rows) {
      const auto r = data.row(i);
      out.values.insert(out.values.end(), r.begin(), r.end());
      out.labels.push_back(data.labels[i]);
    }
    return out;
  };
  Split result;
  result.train = take(train_rows);
  result.test = take(test_rows);
  result.test_empty = result.test.m == 0;
  if (result.test_empty)
    std::cerr << "warning: split produced an empty test set\n";
  return result;
}

}  // namespace secsvm
