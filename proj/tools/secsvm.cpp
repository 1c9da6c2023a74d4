// secsvm command line: train linear hinge-loss classifiers under the five
// regularizers, mount evasion attacks against them, and emit security
// evaluation curves and S/E summaries as reproducible files.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "secsvm/secsvm.hpp"

namespace fs = std::filesystem;
using namespace secsvm;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string config;
  int threads = 1;
};

// Dataset source shared by train/attack/compare: a file in one of the
// three formats, or a synthetic spec regenerated per repetition seed.
struct SourceOpts {
  std::string data;
  std::string format = "csv";  // csv | sparse | idx
  std::size_t label_column = 0;
  bool has_header = false;
  std::size_t d_override = 0;
  std::string idx_images, idx_labels;
  int class_pos = 9, class_neg = 8;
  double scale = 1.0;
  std::string synth;  // gauss2 | booltext | counts
  std::size_t synth_d = 20;
  std::size_t synth_m = 100;
  double separation = 4.0;

  bool is_synthetic() const { return !synth.empty(); }

  Dataset load(std::uint64_t seed) const {
    if (is_synthetic()) {
      SynthSpec spec;
      spec.seed = seed;
      spec.d = synth_d;
      spec.m_per_class = synth_m;
      spec.separation = separation;
      if (synth == "gauss2") spec.kind = SynthKind::Gauss2;
      else if (synth == "booltext") spec.kind = SynthKind::BooleanText;
      else if (synth == "counts") spec.kind = SynthKind::Counts;
      else throw DataError("unknown synthetic kind: '" + synth + "'");
      return generate(spec);
    }
    if (format == "csv") return load_csv(data, label_column, has_header);
    if (format == "sparse") return load_sparse(data, d_override);
    if (format == "idx")
      return load_idx(idx_images.empty() ? data : idx_images, idx_labels,
                      class_pos, class_neg, scale);
    throw DataError("unknown data format: '" + format + "'");
  }

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--data", data, "input data file");
    cmd->add_option("--format", format, "csv | sparse | idx");
    cmd->add_option("--label-column", label_column, "CSV label column (0-based)");
    cmd->add_flag("--has-header", has_header, "CSV file has a header row");
    cmd->add_option("--d-override", d_override, "sparse format dimensionality");
    cmd->add_option("--idx-images", idx_images, "IDX image file");
    cmd->add_option("--idx-labels", idx_labels, "IDX label file");
    cmd->add_option("--class-pos", class_pos, "IDX digit mapped to +1");
    cmd->add_option("--class-neg", class_neg, "IDX digit mapped to -1");
    cmd->add_option("--scale", scale, "IDX pixel scale (1 or 1/255)");
    cmd->add_option("--synth", synth, "synthetic source: gauss2 | booltext | counts");
    cmd->add_option("--synth-d", synth_d, "synthetic feature count");
    cmd->add_option("--synth-m", synth_m, "synthetic samples per class");
    cmd->add_option("--separation", separation, "gauss2 class separation");
  }
};

struct ModelOpts {
  std::string reg = "l2";
  double C = 1.0;
  double lambda = 0.5;
  double rho = 0.5;
  int max_iters = 4000;
  double step0 = 1.0;
  double tol = 1e-9;

  RegularizerSpec spec_for(const std::string& name) const {
    const RegKind kind = reg_kind_from_name(name);
    switch (kind) {
      case RegKind::ElasticNet: return RegularizerSpec::elastic_net(lambda);
      case RegKind::Octagonal: return RegularizerSpec::octagonal(rho);
      case RegKind::L1: return RegularizerSpec::l1();
      case RegKind::Linf: return RegularizerSpec::linf();
      default: return RegularizerSpec::l2();
    }
  }

  TrainConfig config_for(const std::string& name, std::uint64_t seed) const {
    TrainConfig cfg;
    cfg.C = C;
    cfg.spec = spec_for(name);
    cfg.solver.max_iters = max_iters;
    cfg.solver.step0 = step0;
    cfg.solver.tol = tol;
    cfg.solver.seed = seed;
    return cfg;
  }

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--reg", reg, "regularizer: l2 | l1 | linf | elnet | oct");
    cmd->add_option("--C", C, "loss weight C")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", lambda, "elastic-net trade-off in (0,1)");
    cmd->add_option("--rho", rho, "octagonal trade-off in (0,1)");
    cmd->add_option("--max-iters", max_iters, "solver iteration cap");
    cmd->add_option("--step0", step0, "solver base step size");
    cmd->add_option("--tol", tol, "solver window stopping tolerance");
  }
};

struct AttackOpts {
  std::string attack = "sparse_l1";
  std::vector<double> budgets;
  int pgd_steps = 100;
  double pgd_step = 0.0;
  bool integral = false;
  double fpr_cap = 0.1;
  int repetitions = 1;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--attack", attack,
                    "dense_l2 | sparse_l1 | boolean | increment | pgd");
    cmd->add_option("--budgets", budgets, "increasing attack budget list")
        ->delimiter(',');
    cmd->add_option("--pgd-steps", pgd_steps, "pgd iteration count");
    cmd->add_option("--pgd-step", pgd_step, "pgd base step (0 = auto)");
    cmd->add_flag("--integral", integral, "integer increment allocations");
    cmd->add_option("--fpr-cap", fpr_cap, "partial-AUC false positive cap");
    cmd->add_option("--repetitions", repetitions, "seed-varied repetitions");
  }
};

void validate_attack_opts(const AttackOpts& atk) {
  if (atk.budgets.empty())
    throw CLI::ValidationError("--budgets", "budget list required");
  for (std::size_t i = 0; i + 1 < atk.budgets.size(); ++i)
    if (!(atk.budgets[i] < atk.budgets[i + 1]))
      throw CLI::ValidationError("--budgets", "budgets must be strictly increasing");
  if (atk.repetitions < 1)
    throw CLI::ValidationError("--repetitions", "must be >= 1");
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw DataError("malformed config JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw DataError("config must be a JSON object");
  return cfg;
}

// Config-file values fill any flag the user did not pass on the command
// line; flag names mirror config keys ("--max-iters" <-> "max_iters").
void apply_config(CLI::App* cmd, const json& cfg) {
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt == nullptr || opt->count() > 0) continue;
    std::ostringstream text;
    if (value.is_string()) text << value.get<std::string>();
    else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i)
        text << (i ? "," : "") << value[i].dump();
    } else text << value.dump();
    opt->add_result(text.str());
    opt->run_callback();
  }
}

// Bounds for box-constrained attacks, taken from the dataset metadata.
// Features without any finite bound stay unconstrained.
AttackSpec build_attack_spec(const std::string& name, double budget,
                             const Dataset& data, bool integral) {
  const AttackKind kind = attack_kind_from_name(name);
  if (kind == AttackKind::BooleanFlip) return AttackSpec::boolean_flip(budget);
  if (kind == AttackKind::IncrementOnly)
    return AttackSpec::increment_only(budget, caps_from_training(data), integral);
  bool any_finite = false;
  Vec lo(data.d), hi(data.d);
  for (std::size_t j = 0; j < data.d; ++j) {
    lo[j] = data.meta[j].lower;
    hi[j] = data.meta[j].upper;
    any_finite |= std::isfinite(lo[j]) || std::isfinite(hi[j]);
  }
  const NormKind cost = kind == AttackKind::DenseL2 ? NormKind::L2 : NormKind::L1;
  AttackSpec spec = AttackSpec::make(
      budget, cost, any_finite ? ConstraintKind::Box : ConstraintKind::None);
  if (any_finite) {
    spec.box_lower = std::move(lo);
    spec.box_upper = std::move(hi);
  }
  return spec;
}

int cmd_gen(const GlobalOpts& g, const SourceOpts& src, const std::string& out_format) {
  const Dataset data = src.load(g.seed);
  const fs::path dir(g.out);
  if (out_format == "sparse") {
    save_sparse(data, (dir / "data.sparse").string());
    std::cout << "wrote " << (dir / "data.sparse").string() << " (m=" << data.m
              << ", d=" << data.d << ")\n";
  } else {
    fs::create_directories(dir);
    save_csv(data, (dir / "data.csv").string());
    std::cout << "wrote " << (dir / "data.csv").string() << " (m=" << data.m
              << ", d=" << data.d << ")\n";
  }
  return 0;
}

int cmd_train(const GlobalOpts& g, const SourceOpts& src, const ModelOpts& model,
              bool use_cv, double alpha, double beta, int folds, int reps) {
  const Dataset data = src.load(g.seed);
  TrainConfig chosen = model.config_for(model.reg, g.seed);
  json report;

  if (use_cv) {
    SelectionConfig sel;
    sel.alpha = alpha;
    sel.beta = beta;
    sel.folds = folds;
    sel.repetitions = reps;
    sel.seed = g.seed;
    const Vec c_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
    const Vec trade_grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    const RegKind kind = reg_kind_from_name(model.reg);
    for (double c : c_grid) {
      if (kind == RegKind::ElasticNet || kind == RegKind::Octagonal) {
        for (double t : trade_grid) {
          ModelOpts m = model;
          m.C = c;
          m.lambda = t;
          m.rho = t;
          sel.grid.push_back(m.config_for(model.reg, g.seed));
        }
      } else {
        ModelOpts m = model;
        m.C = c;
        sel.grid.push_back(m.config_for(model.reg, g.seed));
      }
    }
    const CvResult cv = cross_validate(data, sel);
    chosen = cv.best;
    report["cv"] = {{"selected_C", chosen.C},
                    {"selected_index", cv.best_index},
                    {"folds", folds},
                    {"alpha", alpha},
                    {"beta", beta}};
    if (chosen.spec.kind == RegKind::ElasticNet)
      report["cv"]["selected_lambda"] = chosen.spec.lambda;
    if (chosen.spec.kind == RegKind::Octagonal)
      report["cv"]["selected_rho"] = chosen.spec.rho;
    json table = json::array();
    for (std::size_t i = 0; i < cv.candidates.size(); ++i) {
      const auto& c = cv.candidates[i];
      table.push_back({{"C", sel.grid[i].C},
                       {"auc", c.mean_auc},
                       {"E", c.mean_E},
                       {"S", c.mean_S},
                       {"score", c.score}});
    }
    report["cv"]["candidates"] = table;
  }

  const TrainResult fit = train(data, chosen);
  json rep = fit.report();
  for (auto& [k, v] : rep.items()) report[k] = v;

  const fs::path dir(g.out);
  write_text(dir / "model.json", model_to_json(fit.model).dump(2) + "\n");
  write_text(dir / "report.json", report.dump(2) + "\n");
  std::cout << "objective " << fit.objective << ", converged "
            << (fit.converged ? "yes" : "no") << ", S " << rep["S"]
            << ", E " << rep["E"] << "\n";
  std::cout << "wrote " << (dir / "model.json").string() << "\n";
  return 0;
}

// One attack campaign: per-sample JSONL at the largest budget plus the
// security curve. Repetitions re-seed the data source (meaningful for
// synthetic sources; file sources repeat identically) and a mean curve is
// written alongside the per-repetition ones.
int cmd_attack(const GlobalOpts& g, const SourceOpts& src, const AttackOpts& atk,
               const std::string& model_path) {
  std::ifstream min(model_path);
  if (!min) throw DataError("cannot open model '" + model_path + "'");
  json mj;
  try {
    min >> mj;
  } catch (const json::exception& e) {
    throw DataError("malformed model JSON: " + std::string(e.what()));
  }
  const LinearModel model = model_from_json(mj);
  validate_attack_opts(atk);

  const AttackKind kind = attack_kind_from_name(atk.attack);
  const std::string reg_name = reg_kind_name(model.regularizer);
  const fs::path dir(g.out);
  std::vector<Vec> rep_curves;
  SecurityCurve last_curve;

  for (int rep = 0; rep < atk.repetitions; ++rep) {
    const std::uint64_t rep_seed = g.seed + static_cast<std::uint64_t>(rep);
    const Dataset data = src.load(rep_seed);
    if (model.dim() != data.d)
      throw DataError("model expects d=" + std::to_string(model.dim()) +
                      ", data has d=" + std::to_string(data.d));
    const AttackSpec tmpl = build_attack_spec(atk.attack, atk.budgets.back(),
                                              data, atk.integral);
    const SecurityCurve curve =
        security_curve(model, data, kind, tmpl, atk.budgets, atk.fpr_cap,
                       g.threads, atk.pgd_steps, atk.pgd_step);
    rep_curves.push_back(curve.auc10);
    last_curve = curve;
    if (atk.repetitions > 1) {
      write_text(dir / ("curve_" + reg_name + "_rep" + std::to_string(rep) + ".csv"),
                 curve.to_csv());
    }

    if (rep == 0) {
      // campaign records at the largest budget
      const AttackSpec spec = build_attack_spec(atk.attack, atk.budgets.back(),
                                                data, atk.integral);
      std::string lines;
      for (std::size_t i = 0; i < data.m; ++i) {
        if (data.labels[i] <= 0) continue;
        Vec x0(data.row(i).begin(), data.row(i).end());
        const AttackResult r =
            run_attack(model, x0, spec, kind, atk.pgd_steps, atk.pgd_step);
        json rec = {{"index", i},
                    {"g_before", r.g_before},
                    {"g_after", r.g_after},
                    {"cost_used", r.cost_used},
                    {"evaded", r.evaded}};
        lines += rec.dump() + "\n";
      }
      write_text(dir / "campaign.jsonl", lines);
    }
  }

  SecurityCurve mean = last_curve;
  for (std::size_t b = 0; b < mean.auc10.size(); ++b) {
    double s = 0.0;
    for (const auto& c : rep_curves) s += c[b];
    mean.auc10[b] = s / static_cast<double>(rep_curves.size());
  }
  write_text(dir / ("curve_" + reg_name + ".csv"), mean.to_csv());
  write_text(dir / ("curve_" + reg_name + ".json"), mean.sidecar().dump(2) + "\n");
  std::cout << "wrote " << (dir / ("curve_" + reg_name + ".csv")).string()
            << " and campaign.jsonl (" << atk.repetitions << " repetition(s))\n";
  return 0;
}

int cmd_compare(const GlobalOpts& g, const SourceOpts& src, const ModelOpts& model,
                const AttackOpts& atk, std::vector<std::string> regs,
                double train_fraction) {
  if (regs.size() < 2)
    throw CLI::ValidationError("--regs", "need at least two regularizers");
  validate_attack_opts(atk);
  const AttackKind kind = attack_kind_from_name(atk.attack);
  const fs::path dir(g.out);

  struct Row {
    std::string name;
    double S = 0, E = 0, clean = 0;
    std::vector<Vec> curves;
  };
  std::vector<Row> rows;
  for (const auto& name : regs) rows.push_back({name, 0, 0, 0, {}});

  for (int rep = 0; rep < atk.repetitions; ++rep) {
    const std::uint64_t rep_seed = g.seed + static_cast<std::uint64_t>(rep);
    const Dataset full = src.load(rep_seed);
    const Split sp = split(full, train_fraction, rep_seed);
    if (sp.test_empty) throw DataError("compare needs a non-empty test split");
    for (auto& row : rows) {
      const TrainConfig cfg = model.config_for(row.name, rep_seed);
      const TrainResult fit = train(sp.train, cfg);
      const AttackSpec tmpl = build_attack_spec(atk.attack, atk.budgets.back(),
                                                sp.test, atk.integral);
      const SecurityCurve curve =
          security_curve(fit.model, sp.test, kind, tmpl, atk.budgets, atk.fpr_cap,
                         g.threads, atk.pgd_steps, atk.pgd_step);
      row.curves.push_back(curve.auc10);
      if (rep == 0) {
        row.S = curve.S;
        row.E = curve.E;
      } else {
        row.S += curve.S;
        row.E += curve.E;
      }
    }
  }

  json summary;
  summary["budgets"] = atk.budgets;
  summary["attack"] = atk.attack;
  summary["repetitions"] = atk.repetitions;
  json table = json::array();
  std::cout << "regularizer   S%      E%      clean AUC10%\n";
  for (auto& row : rows) {
    Vec mean(atk.budgets.size(), 0.0);
    for (const auto& c : row.curves)
      for (std::size_t b = 0; b < mean.size(); ++b) mean[b] += c[b];
    for (auto& v : mean) v /= static_cast<double>(row.curves.size());
    const double S = row.S / atk.repetitions;
    const double E = row.E / atk.repetitions;
    SecurityCurve out_curve;
    out_curve.budgets = atk.budgets;
    out_curve.auc10 = mean;
    out_curve.S = S;
    out_curve.E = E;
    out_curve.attack = kind;
    write_text(dir / ("curve_" + row.name + ".csv"), out_curve.to_csv());
    table.push_back({{"regularizer", row.name},
                     {"S", S},
                     {"E", E},
                     {"clean_auc10", mean.front()},
                     {"auc10", mean}});
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %6.1f  %6.1f  %6.1f\n",
                  row.name.c_str(), 100.0 * S, 100.0 * E, 100.0 * mean.front());
    std::cout << line;
  }
  summary["regularizers"] = table;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "wrote " << (dir / "summary.json").string() << "\n";
  return 0;
}

// Built-in oracle equivalence suites: greedy vs brute force, closed form
// vs PGD, and the robust-regularization identity.
int cmd_selftest(const GlobalOpts& g) {
  std::mt19937_64 rng(g.seed + 12345);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  auto rvec = [&](std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v(d);
    for (auto& x : v) x = u(rng);
    return v;
  };
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    all_ok &= ok;
  };

  {
    int bad = 0;
    for (int inst = 0; inst < 200; ++inst) {
      const std::size_t d = 3 + rng() % 10;
      LinearModel m;
      m.weights = rvec(d, -1, 1);
      m.bias = unif(rng);
      Vec x0(d);
      for (auto& v : x0) v = (rng() % 2) ? 1.0 : 0.0;
      const auto spec = AttackSpec::boolean_flip(1.0 + rng() % 3);
      if (attack_boolean(m, x0, spec).g_after !=
          attack_bruteforce(m, x0, spec).g_after)
        ++bad;
    }
    report("boolean greedy vs exhaustive", bad == 0,
           "200 instances, " + std::to_string(bad) + " mismatches");
  }
  {
    int bad = 0;
    for (int inst = 0; inst < 200; ++inst) {
      const std::size_t d = 2 + rng() % 5;
      LinearModel m;
      m.weights = rvec(d, -1, 1);
      m.bias = unif(rng);
      const Vec x0 = rvec(d, 0, 2);
      const double budget = 0.3 + (rng() % 100) / 50.0;
      Vec lo(d), hi(d), caps(d);
      for (std::size_t j = 0; j < d; ++j) {
        lo[j] = x0[j] - (rng() % 100) / 60.0;
        hi[j] = x0[j] + (rng() % 100) / 60.0;
        caps[j] = x0[j] + (rng() % 100) / 40.0;
      }
      const auto box = AttackSpec::sparse_l1_box(budget, lo, hi);
      if (std::abs(attack_sparse_l1(m, x0, box).g_after -
                   attack_bruteforce(m, x0, box).g_after) > 1e-6)
        ++bad;
      const auto inc = AttackSpec::increment_only(budget, FeatureCaps{caps});
      if (std::abs(attack_increment_only(m, x0, inc).g_after -
                   attack_bruteforce(m, x0, inc).g_after) > 1e-6)
        ++bad;
    }
    report("sparse/increment greedy vs enumeration", bad == 0,
           "200 instances, " + std::to_string(bad) + " beyond 1e-6");
  }
  {
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      LinearModel m;
      m.weights = rvec(10, -2, 2);
      m.bias = unif(rng);
      const Vec x0 = rvec(10, -1, 1);
      const auto spec = AttackSpec::dense_l2(0.2 + (rng() % 100) / 40.0);
      worst = std::max(worst, std::abs(attack_pgd(m, x0, spec, 100).g_after -
                                       attack_dense_l2(m, x0, spec).g_after));
    }
    report("pgd vs closed form (l2)", worst <= 1e-4,
           "100 models, worst gap " + std::to_string(worst));
  }
  {
    int done = 0, bad = 0;
    const NormKind norms[] = {NormKind::L1, NormKind::L2, NormKind::Linf};
    while (done < 100) {
      const std::size_t d = 2 + rng() % 4, m_n = 1 + rng() % 6;
      LinearModel model;
      model.weights = rvec(d, -1.5, 1.5);
      model.bias = unif(rng);
      Dataset data;
      data.d = d;
      data.m = m_n;
      data.meta.assign(d, FeatureMeta{});
      for (std::size_t i = 0; i < m_n; ++i) {
        data.labels.push_back(rng() % 2 ? 1 : -1);
        for (std::size_t j = 0; j < d; ++j) data.values.push_back(unif(rng));
      }
      bool violated = false;
      for (std::size_t i = 0; i < m_n; ++i)
        violated |= 1.0 - data.labels[i] * discriminant(model, data.row(i)) > 0.0;
      if (!violated) continue;
      ++done;
      const RobustCheckSpec chk{0.05 + (rng() % 100) / 60.0, norms[rng() % 3]};
      const double expect = hinge_loss(model, data) +
                            chk.c * norm_value(chk.norm, model.weights);
      if (std::abs(worst_case_hinge(model, data, chk) - expect) > 1e-9) ++bad;
    }
    report("robust-regularization identity", bad == 0,
           "100 tuples, " + std::to_string(bad) + " beyond 1e-9");
  }
  if (!all_ok) throw NumericError("selftest failed");
  std::cout << "selftest: all suites passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear classifiers under evasion attacks: training, attacks, "
               "and security-sparsity evaluation"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--config", g.config, "JSON config file (flags override it)");
  app.add_option("--threads", g.threads, "worker threads for campaigns");

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  SourceOpts gen_src;
  gen_src.synth = "gauss2";
  gen_src.add_flags(gen);
  std::string gen_format = "csv";
  gen->add_option("--out-format", gen_format, "csv | sparse");

  auto* tr = app.add_subcommand("train", "train a model, optionally with CV");
  SourceOpts tr_src;
  ModelOpts tr_model;
  tr_src.add_flags(tr);
  tr_model.add_flags(tr);
  bool tr_cv = false;
  double tr_alpha = 0.1, tr_beta = 0.1;
  int tr_folds = 5, tr_reps = 1;
  tr->add_flag("--cv", tr_cv, "select C (and lambda/rho) by cross-validation");
  tr->add_option("--alpha", tr_alpha, "CV weight on evenness E");
  tr->add_option("--beta", tr_beta, "CV weight on sparsity S");
  tr->add_option("--folds", tr_folds, "CV fold count");
  tr->add_option("--reps", tr_reps, "CV shuffle repetitions");

  auto* at = app.add_subcommand("attack", "attack a trained model over budgets");
  SourceOpts at_src;
  AttackOpts at_atk;
  std::string at_model;
  at_src.add_flags(at);
  at_atk.add_flags(at);
  at->add_option("--model", at_model, "model JSON path");

  auto* cp = app.add_subcommand("compare", "train several regularizers and "
                                           "compare their security curves");
  SourceOpts cp_src;
  ModelOpts cp_model;
  AttackOpts cp_atk;
  std::vector<std::string> cp_regs;
  double cp_fraction = 0.5;
  cp_src.add_flags(cp);
  cp_model.add_flags(cp);
  cp_atk.add_flags(cp);
  cp->add_option("--regs", cp_regs, "regularizers to compare")->delimiter(',');
  cp->add_option("--train-fraction", cp_fraction, "train split fraction");

  auto* st = app.add_subcommand("selftest", "run the oracle equivalence suites");
  (void)st;

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
        return app.exit(e);
      std::cerr << "usage error: " << e.what() << "\n";
      return 1;
    }
    const json cfg = load_config_file(g.config);
    for (CLI::App* sub : {gen, tr, at, cp}) {
      if (sub->parsed()) apply_config(sub, cfg);
    }
    if (cfg.contains("seed") && app.get_option("--seed")->count() == 0)
      g.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("out") && app.get_option("--out")->count() == 0)
      g.out = cfg["out"].get<std::string>();
    if (cfg.contains("threads") && app.get_option("--threads")->count() == 0)
      g.threads = cfg["threads"].get<int>();

    if (gen->parsed()) return cmd_gen(g, gen_src, gen_format);
    if (tr->parsed())
      return cmd_train(g, tr_src, tr_model, tr_cv, tr_alpha, tr_beta, tr_folds,
                       tr_reps);
    if (at->parsed()) return cmd_attack(g, at_src, at_atk, at_model);
    if (cp->parsed())
      return cmd_compare(g, cp_src, cp_model, cp_atk, cp_regs, cp_fraction);
    if (st->parsed()) return cmd_selftest(g);
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
