// Copyright 2026 The Fairleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fairleak/attacks.hpp"
#include "fairleak/data.hpp"
#include "fairleak/errors.hpp"
#include "fairleak/fairness.hpp"
#include "fairleak/metrics.hpp"
#include "fairleak/models.hpp"
#include "fairleak/oracle.hpp"
#include "fairleak/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairleak;

namespace {

// Exit codes: 0 success, 1 verification failure, 2 usage, 3 data,
// 4 numeric.
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int max_threads() {
  if (const char* env = std::getenv("FAIRLEAK_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct GlobalFlags {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool strict = false;
  std::string format = "json";
};

std::pair<double, double> parse_pair(const std::string& text) {
  std::stringstream ss(text);
  double a, b;
  char comma;
  if (!(ss >> a >> comma >> b) || comma != ',')
    throw CLI::ValidationError("expected two comma-separated numbers");
  return {a, b};
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

fs::path out_path(const GlobalFlags& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

// ---- synth ----

int cmd_synth(const GlobalFlags& g, const SynthSpec& spec,
              const std::string& out_file) {
  TabularDataset ds = synth_biased(spec, g.seed);
  write_csv(ds, out_file);
  json side;
  side["seed"] = g.seed;
  side["n"] = spec.n;
  side["p_s1"] = spec.p_s1;
  side["p_y1_given_s"] = {spec.p_y1_given_s.first, spec.p_y1_given_s.second};
  side["mean_shift"] = spec.mean_shift;
  side["leak_shift"] = spec.leak_shift;
  side["d"] = spec.d;
  side["exact_frequency"] = spec.exact_frequency;
  write_text_atomic(out_file + ".json", side.dump(2) + "\n");
  return 0;
}

// ---- split / train / fair-train ----

TabularDataset load_dataset(const std::string& path,
                            const std::string& label_col,
                            const std::string& sensitive_col,
                            const GlobalFlags& g) {
  std::vector<std::string> warnings;
  TabularDataset ds =
      load_csv(path, label_col, sensitive_col, g.strict ? nullptr : &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return ds;
}

// ---- audit pipeline ----

struct AuditOptions {
  double te_fraction = 0.2;
  double aux_tr_fraction = 0.5;
  bool stratify = true;
  std::string model = "logreg";
  std::vector<std::size_t> hidden = {32, 32, 32, 32};
  TrainConfig train;
  double tau = 0.5;
  std::string defense;  // "", "egd", "advdebias"
  EgdConfig egd;
  AdvDebiasConfig adv;
};

std::map<std::string, AttackResult> run_attacks(
    const SoftPredictions& soft_tr, const SoftPredictions& soft_te,
    const BinaryVector& s_tr, const BinaryVector& s_te, double tau,
    std::uint64_t seed) {
  TrainConfig att_cfg;
  att_cfg.seed = derive_seed(seed, seed_role::kAttackTrain);
  std::map<std::string, AttackResult> out;
  out["adapt_aia_s"] = adapt_aia_s(soft_tr, s_tr, soft_te, s_te, att_cfg);
  out["baseline_aia"] = baseline_aia(soft_tr, s_tr, soft_te, s_te, att_cfg);
  out["adapt_aia_h"] = adapt_aia_h(threshold_scores(soft_tr, tau), s_tr,
                                   threshold_scores(soft_te, tau), s_te);
  return out;
}

AuditReport run_audit(const TabularDataset& ds, const AuditOptions& opt,
                      const GlobalFlags& g, RocCurve* roc_out) {
  AuditReport report;
  report.seed = g.seed;
  auto [p_s1, p_y1] = class_balance(ds);
  report.dataset_summary = {ds.n(), ds.d(), p_s1, p_y1,
                            dependency_ys(ds.labels, ds.sensitive)};

  SplitPlan split = make_split(ds, opt.te_fraction, opt.aux_tr_fraction,
                               g.seed, opt.stratify);
  TabularDataset tr = ds.subset(split.tr);
  TabularDataset te = ds.subset(split.te);
  TabularDataset aux_tr = ds.subset(split.aux_tr);
  TabularDataset aux_te = ds.subset(split.aux_te);

  TrainConfig tcfg = opt.train;
  tcfg.seed = derive_seed(g.seed, seed_role::kTargetTrain);
  AnyModel target;
  if (opt.model == "mlp")
    target = fit_mlp(tr.features, tr.labels, opt.hidden, tcfg);
  else
    target = fit_logreg(tr.features, tr.labels,
                        std::vector<double>(tr.n(), 1.0), tcfg);

  HardPredictions te_hard = predict_hard(target, te.features, opt.tau);
  report.target_utility = {plain_accuracy(te_hard, te.labels),
                           balanced_accuracy(te_hard, te.labels)};
  report.fairness = fairness_summary(te_hard, te.sensitive, te.labels);

  SoftPredictions soft_tr = predict_soft(target, aux_tr.features);
  SoftPredictions soft_te = predict_soft(target, aux_te.features);
  report.attacks = run_attacks(soft_tr, soft_te, aux_tr.sensitive,
                               aux_te.sensitive, opt.tau, g.seed);

  if (roc_out) {
    // Tuning-split ROC of the soft attack scorer, for plotdata.
    TrainConfig att_cfg;
    att_cfg.seed = derive_seed(g.seed, seed_role::kAttackTrain);
    LinearModel f_att =
        fit_logreg(Matrix::from_column(soft_tr), aux_tr.sensitive,
                   std::vector<double>(soft_tr.size(), 1.0), att_cfg);
    *roc_out = roc_curve(predict_soft(f_att, Matrix::from_column(soft_tr)),
                         aux_tr.sensitive);
  }

  if (!opt.defense.empty()) {
    AuditReport::Defense def;
    def.method = opt.defense;
    if (opt.defense == "egd") {
      EgdConfig ecfg = opt.egd;
      ecfg.base_cfg.seed = derive_seed(g.seed, seed_role::kEgd);
      RandomizedClassifier rc = egd_train(ds, split, ecfg);
      def.config = {{"eps", ecfg.eps},
                    {"iterations", static_cast<double>(ecfg.iterations)},
                    {"eta", ecfg.eta},
                    {"bound", ecfg.bound}};
      HardPredictions d_te = sample_prediction(
          rc, te.features, derive_seed(g.seed, seed_role::kSample));
      def.utility = {plain_accuracy(d_te, te.labels),
                     balanced_accuracy(d_te, te.labels)};
      def.fairness = fairness_summary(d_te, te.sensitive, te.labels);
      HardPredictions h_tr = sample_prediction(
          rc, aux_tr.features, derive_seed(g.seed, seed_role::kSample + 1));
      HardPredictions h_te = sample_prediction(
          rc, aux_te.features, derive_seed(g.seed, seed_role::kSample + 2));
      def.attacks["adapt_aia_h"] =
          adapt_aia_h(h_tr, aux_tr.sensitive, h_te, aux_te.sensitive);
    } else if (opt.defense == "advdebias") {
      AdvDebiasConfig acfg = opt.adv;
      acfg.target_cfg.seed = derive_seed(g.seed, seed_role::kAdvDebias);
      acfg.disc_cfg.seed = derive_seed(g.seed, seed_role::kAdvDebias + 1);
      MlpModel model = advdebias_train(ds, split, acfg);
      def.config = {{"alpha", acfg.adversary_weight},
                    {"rounds", static_cast<double>(acfg.rounds)}};
      HardPredictions d_te = predict_hard(model, te.features, opt.tau);
      def.utility = {plain_accuracy(d_te, te.labels),
                     balanced_accuracy(d_te, te.labels)};
      def.fairness = fairness_summary(d_te, te.sensitive, te.labels);
      SoftPredictions d_soft_tr = predict_soft(model, aux_tr.features);
      SoftPredictions d_soft_te = predict_soft(model, aux_te.features);
      def.attacks = run_attacks(d_soft_tr, d_soft_te, aux_tr.sensitive,
                                aux_te.sensitive, opt.tau, g.seed);
    } else {
      throw InvalidConfig("unknown defense: " + opt.defense);
    }
    report.defense = std::move(def);
  }
  report.validate();
  return report;
}

// Audit over an externally produced predictions CSV: split rows into
// tuning/evaluation halves and mount the applicable attacks.
AuditReport run_predictions_audit(const PredictionsFile& pf,
                                  const GlobalFlags& g, double tau) {
  AuditReport report;
  report.seed = g.seed;
  const std::size_t n = pf.sensitive.size();
  report.dataset_summary.n = n;

  Rng rng(derive_seed(g.seed, seed_role::kSplit));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::size_t> tune(order.begin(), order.begin() + n / 2);
  std::vector<std::size_t> eval(order.begin() + n / 2, order.end());

  auto gather_s = [&](const std::vector<std::size_t>& idx) {
    BinaryVector out;
    for (auto i : idx) out.push_back(pf.sensitive[i]);
    return out;
  };
  BinaryVector s_tr = gather_s(tune), s_te = gather_s(eval);

  if (pf.soft) {
    SoftPredictions tr, te;
    for (auto i : tune) tr.push_back((*pf.soft)[i]);
    for (auto i : eval) te.push_back((*pf.soft)[i]);
    report.attacks = run_attacks(tr, te, s_tr, s_te, tau, g.seed);
  } else {
    HardPredictions tr, te;
    for (auto i : tune) tr.push_back((*pf.hard)[i]);
    for (auto i : eval) te.push_back((*pf.hard)[i]);
    report.attacks["adapt_aia_h"] = adapt_aia_h(tr, s_tr, te, s_te);
  }

  HardPredictions all_hard =
      pf.hard ? *pf.hard : threshold_scores(*pf.soft, tau);
  if (pf.labels) {
    report.dataset_summary.dependency_ys =
        dependency_ys(*pf.labels, pf.sensitive);
    report.target_utility = {plain_accuracy(all_hard, *pf.labels),
                             balanced_accuracy(all_hard, *pf.labels)};
    report.fairness = fairness_summary(all_hard, pf.sensitive, *pf.labels);
  } else {
    report.fairness.dempar_level = dempar_level(all_hard, pf.sensitive);
    auto bound = theoretical_attack_bound(report.fairness.dempar_level);
    (void)bound;
  }
  report.validate();
  return report;
}

// ---- verify-theorems ----

int cmd_verify(const GlobalFlags& g, std::size_t sweeps, bool inject_fault,
               const std::string& out_file) {
  double max_dp_dev = 0.0;
  {
    // Oracle sweeps are independent; split across the allowed threads.
    int nthreads = std::min<std::size_t>(max_threads(), sweeps);
    std::vector<double> worst(nthreads, 0.0);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t k = t; k < sweeps; k += nthreads) {
          auto check = dp_theorem_check(random_joint2(g.seed + k));
          worst[t] = std::max(worst[t], std::abs(check.lhs - check.rhs));
        }
      });
    for (auto& th : pool) th.join();
    for (double w : worst) max_dp_dev = std::max(max_dp_dev, w);
  }

  double max_eo_dev = 0.0;
  double max_branch_dev = 0.0;
  const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (double py0 : grid)
    for (double py1 : grid)
      for (double tpr : grid)
        for (double fpr : grid) {
          auto j3 = make_eqodds_joint({py0, py1}, 0.4, tpr, fpr);
          for (int f = 0; f < 4; ++f) {
            auto [direct, formula] =
                eqodds_closed_form(j3, static_cast<HardAttackFunction>(f));
            double adjusted = inject_fault ? formula + 1e-6 : formula;
            max_eo_dev = std::max(max_eo_dev, std::abs(direct - adjusted));
          }
          // Both iff branches must pin the attack to chance.
          if (tpr == fpr || py0 == py1) {
            double ba = exact_attack_ba(j3.marginalize_y()).second;
            max_branch_dev = std::max(max_branch_dev, std::abs(ba - 0.5));
          }
        }

  bool ok = max_dp_dev < 1e-12 && max_eo_dev < 1e-10 && max_branch_dev < 1e-10;
  json out;
  out["sweeps"] = sweeps;
  out["dp_theorem_max_deviation"] = max_dp_dev;
  out["eqodds_closed_form_max_deviation"] = max_eo_dev;
  out["eqodds_chance_branch_max_deviation"] = max_branch_dev;
  out["pass"] = ok;
  std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (!out_file.empty()) write_text_atomic(out_file, text);
  return ok ? 0 : kExitVerifyFail;
}

// ---- plotdata ----

int cmd_plotdata_roc(const std::string& audit_dir, const std::string& out) {
  fs::path src = fs::path(audit_dir) / "roc.csv";
  if (!fs::exists(src)) {
    std::cerr << "missing audit artifact: " << src << "\n";
    return kExitData;
  }
  std::ifstream in(src);
  std::stringstream buf;
  buf << in.rdbuf();
  write_text_atomic(out, buf.str());
  return 0;
}

int cmd_plotdata_eps(const TabularDataset& ds, const std::vector<double>& eps,
                     const GlobalFlags& g, const std::string& out) {
  SplitPlan split = make_split(ds, 0.2, 0.5, g.seed, true);
  TabularDataset tr = ds.subset(split.tr);
  TabularDataset aux_tr = ds.subset(split.aux_tr);
  TabularDataset aux_te = ds.subset(split.aux_te);
  std::string csv = "eps,dp_level,attack_accuracy\n";
  for (double e : eps) {
    EgdConfig cfg;
    cfg.eps = e;
    cfg.base_cfg.seed = derive_seed(g.seed, seed_role::kEgd);
    RandomizedClassifier rc = egd_train(ds, split, cfg);
    auto rates = expected_group_rates(rc, tr.features, tr.sensitive);
    double dp = std::abs(rates[1] - rates[0]);
    HardPredictions h_tr = sample_prediction(
        rc, aux_tr.features, derive_seed(g.seed, seed_role::kSample + 1));
    HardPredictions h_te = sample_prediction(
        rc, aux_te.features, derive_seed(g.seed, seed_role::kSample + 2));
    AttackResult att =
        adapt_aia_h(h_tr, aux_tr.sensitive, h_te, aux_te.sensitive);
    char line[128];
    std::snprintf(line, sizeof(line), "%g,%.17g,%.17g\n", e, dp,
                  att.eval_accuracy);
    csv += line;
  }
  write_text_atomic(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute-inference risk auditing for binary classifiers"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Base seed; all randomness derives from it");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_flag("--strict", g.strict, "Treat censoring violations as errors");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a biased synthetic dataset");
  SynthSpec spec;
  std::string p_y1_text = "0.5,0.5";
  std::string synth_out = "dataset.csv";
  synth->add_option("--n", spec.n, "Record count")->required();
  synth->add_option("--p-s1", spec.p_s1, "P(S=1)")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--p-y1", p_y1_text, "P(Y=1|S=0),P(Y=1|S=1)");
  synth->add_option("--mean-shift", spec.mean_shift, "Y-mean separation");
  synth->add_option("--leak-shift", spec.leak_shift, "S-mean separation");
  synth->add_option("--d", spec.d, "Feature dimension");
  synth->add_flag("--exact,!--no-exact", spec.exact_frequency,
                  "Exact per-cell (S,Y) counts");
  synth->add_option("-o,--out", synth_out, "Output CSV path");

  // split
  auto* split_cmd = app.add_subcommand("split", "Compute and save a split plan");
  std::string data_path, label_col = "y", sensitive_col = "s";
  double te_fraction = 0.2, aux_tr_fraction = 0.5;
  bool stratify = true;
  std::string split_out = "split.json";
  split_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  split_cmd->add_option("--label-col", label_col, "Label column");
  split_cmd->add_option("--sensitive-col", sensitive_col, "Sensitive column");
  split_cmd->add_option("--te-fraction", te_fraction, "Test fraction");
  split_cmd->add_option("--aux-tr-fraction", aux_tr_fraction,
                        "Adversary tuning fraction of the test split");
  split_cmd->add_flag("--stratify,!--no-stratify", stratify, "Stratify on S");
  split_cmd->add_option("-o,--out", split_out, "Output JSON path");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a target model");
  std::string model_kind = "logreg", hidden_text = "32,32,32,32";
  std::string split_path, model_out = "model.json";
  TrainConfig tcfg;
  train_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  train_cmd->add_option("--split", split_path, "Split plan JSON");
  train_cmd->add_option("--label-col", label_col, "Label column");
  train_cmd->add_option("--sensitive-col", sensitive_col, "Sensitive column");
  train_cmd->add_option("--model", model_kind, "Model kind")
      ->check(CLI::IsMember({"logreg", "mlp"}));
  train_cmd->add_option("--hidden", hidden_text, "Hidden layer sizes");
  train_cmd->add_option("--epochs", tcfg.epochs, "Training epochs");
  train_cmd->add_option("--lr", tcfg.learning_rate, "Learning rate");
  train_cmd->add_option("--l2", tcfg.l2, "L2 penalty");
  train_cmd->add_option("--batch-size", tcfg.batch_size, "0 = full batch");
  train_cmd->add_option("-o,--out", model_out, "Output model JSON");

  // attack
  auto* attack_cmd =
      app.add_subcommand("attack", "Mount attacks on a predictions CSV");
  std::string preds_path, attack_out = "attack.json";
  double tau = 0.5;
  attack_cmd->add_option("--predictions", preds_path, "Predictions CSV")
      ->required();
  attack_cmd->add_option("--tau", tau, "Hard-label threshold")
      ->check(CLI::Range(0.0, 1.0));
  attack_cmd->add_option("-o,--out", attack_out, "Output JSON path");

  // fair-train
  auto* fair_cmd =
      app.add_subcommand("fair-train", "Train a fairness-constrained model");
  std::string method = "egd", constraint = "dempar", fair_out = "fair_model.json";
  EgdConfig egd_cfg;
  AdvDebiasConfig adv_cfg;
  fair_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  fair_cmd->add_option("--split", split_path, "Split plan JSON");
  fair_cmd->add_option("--label-col", label_col, "Label column");
  fair_cmd->add_option("--sensitive-col", sensitive_col, "Sensitive column");
  fair_cmd->add_option("--method", method, "Defense method")
      ->check(CLI::IsMember({"egd", "advdebias"}));
  fair_cmd->add_option("--constraint", constraint, "EGD constraint")
      ->check(CLI::IsMember({"dempar", "eqodds"}));
  fair_cmd->add_option("--eps", egd_cfg.eps, "Constraint slack");
  fair_cmd->add_option("--iterations", egd_cfg.iterations, "EGD rounds");
  fair_cmd->add_option("--eta", egd_cfg.eta, "Multiplier learning rate");
  fair_cmd->add_option("--bound", egd_cfg.bound, "Multiplier norm cap");
  fair_cmd->add_option("--alpha", adv_cfg.adversary_weight, "Adversary weight");
  fair_cmd->add_option("--rounds", adv_cfg.rounds, "AdvDebias rounds");
  fair_cmd->add_option("-o,--out", fair_out, "Output model JSON");

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Full audit pipeline");
  AuditOptions audit_opt;
  std::string audit_preds;
  audit_cmd->add_option("--data", data_path, "Dataset CSV");
  audit_cmd->add_option("--predictions", audit_preds,
                        "Predictions CSV (alternative to --data)");
  audit_cmd->add_option("--label-col", label_col, "Label column");
  audit_cmd->add_option("--sensitive-col", sensitive_col, "Sensitive column");
  audit_cmd->add_option("--te-fraction", audit_opt.te_fraction, "Test fraction");
  audit_cmd->add_option("--aux-tr-fraction", audit_opt.aux_tr_fraction,
                        "Adversary tuning fraction");
  audit_cmd->add_flag("--stratify,!--no-stratify", audit_opt.stratify,
                      "Stratify splits on S");
  audit_cmd->add_option("--model", audit_opt.model, "Target model")
      ->check(CLI::IsMember({"logreg", "mlp"}));
  audit_cmd->add_option("--epochs", audit_opt.train.epochs, "Epochs");
  audit_cmd->add_option("--lr", audit_opt.train.learning_rate, "Learning rate");
  audit_cmd->add_option("--tau", audit_opt.tau, "Hard-label threshold");
  audit_cmd->add_option("--defense", audit_opt.defense, "Defense to compare")
      ->check(CLI::IsMember({"egd", "advdebias"}));
  audit_cmd->add_option("--eps", audit_opt.egd.eps, "EGD slack");
  audit_cmd->add_option("--alpha", audit_opt.adv.adversary_weight,
                        "AdvDebias adversary weight");
  audit_cmd->add_option("--rounds", audit_opt.adv.rounds, "AdvDebias rounds");
  audit_cmd->add_option("--adv-disc-steps", audit_opt.adv.disc_steps,
                        "Discriminator steps per round");
  audit_cmd->add_option("--adv-disc-lr", audit_opt.adv.disc_cfg.learning_rate,
                        "Discriminator learning rate");
  audit_cmd->add_option("--adv-lr", audit_opt.adv.target_cfg.learning_rate,
                        "AdvDebias target learning rate");
  std::string adv_hidden_text = "32,32,32,32";
  audit_cmd->add_option("--adv-hidden", adv_hidden_text,
                        "AdvDebias hidden sizes");
  audit_cmd->parse_complete_callback(
      [&]() { audit_opt.adv.hidden = parse_sizes(adv_hidden_text); });

  // verify-theorems
  auto* verify_cmd =
      app.add_subcommand("verify-theorems", "Run the exact oracle sweeps");
  std::size_t sweeps = 1000;
  bool inject_fault = false;
  verify_cmd->add_option("--sweeps", sweeps, "Random joints to check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--inject-fault", inject_fault,
                       "Perturb the closed form (negative control)");

  // plotdata
  auto* plot_cmd = app.add_subcommand("plotdata", "Emit plot-ready CSV files");
  std::string plot_kind = "roc", audit_dir = ".", eps_text = "1,0.3,0.1,0.01";
  std::string plot_out = "plot.csv";
  plot_cmd->add_option("--kind", plot_kind, "roc | eps-sweep")
      ->check(CLI::IsMember({"roc", "eps-sweep"}));
  plot_cmd->add_option("--audit-dir", audit_dir,
                       "Directory holding a prior audit");
  plot_cmd->add_option("--data", data_path, "Dataset CSV (eps-sweep)");
  plot_cmd->add_option("--eps-list", eps_text, "Comma-separated slacks");
  plot_cmd->add_option("--label-col", label_col, "Label column");
  plot_cmd->add_option("--sensitive-col", sensitive_col, "Sensitive column");
  plot_cmd->add_option("-o,--out", plot_out, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      spec.p_y1_given_s = parse_pair(p_y1_text);
      return cmd_synth(g, spec, synth_out);
    }
    if (*split_cmd) {
      TabularDataset ds = load_dataset(data_path, label_col, sensitive_col, g);
      SplitPlan plan =
          make_split(ds, te_fraction, aux_tr_fraction, g.seed, stratify);
      write_split_json(plan, split_out);
      return 0;
    }
    if (*train_cmd) {
      TabularDataset ds = load_dataset(data_path, label_col, sensitive_col, g);
      SplitPlan plan = split_path.empty()
                           ? make_split(ds, 0.2, 0.5, g.seed, true)
                           : load_split_json(split_path);
      TabularDataset tr = ds.subset(plan.tr);
      tcfg.seed = derive_seed(g.seed, seed_role::kTargetTrain);
      AnyModel model;
      if (model_kind == "mlp")
        model = fit_mlp(tr.features, tr.labels, parse_sizes(hidden_text), tcfg);
      else
        model = fit_logreg(tr.features, tr.labels,
                           std::vector<double>(tr.n(), 1.0), tcfg);
      save_model(model, model_out);
      return 0;
    }
    if (*attack_cmd) {
      PredictionsFile pf = load_predictions_csv(preds_path);
      AuditReport report = run_predictions_audit(pf, g, tau);
      write_text_atomic(attack_out, report_to_json(report) + "\n");
      return 0;
    }
    if (*fair_cmd) {
      TabularDataset ds = load_dataset(data_path, label_col, sensitive_col, g);
      SplitPlan plan = split_path.empty()
                           ? make_split(ds, 0.2, 0.5, g.seed, true)
                           : load_split_json(split_path);
      if (method == "egd") {
        egd_cfg.constraint = constraint == "eqodds"
                                 ? FairnessConstraint::kEqOdds
                                 : FairnessConstraint::kDemPar;
        egd_cfg.base_cfg.seed = derive_seed(g.seed, seed_role::kEgd);
        RandomizedClassifier rc = egd_train(ds, plan, egd_cfg);
        write_text_atomic(fair_out, randomized_classifier_to_json(rc) + "\n");
      } else {
        adv_cfg.target_cfg.seed = derive_seed(g.seed, seed_role::kAdvDebias);
        adv_cfg.disc_cfg.seed = derive_seed(g.seed, seed_role::kAdvDebias + 1);
        MlpModel model = advdebias_train(ds, plan, adv_cfg);
        save_model(AnyModel{model}, fair_out);
      }
      return 0;
    }
    if (*audit_cmd) {
      AuditReport report;
      RocCurve roc;
      if (!audit_preds.empty()) {
        PredictionsFile pf = load_predictions_csv(audit_preds);
        report = run_predictions_audit(pf, g, audit_opt.tau);
      } else {
        if (data_path.empty())
          throw ConfigError("audit needs --data or --predictions");
        TabularDataset ds =
            load_dataset(data_path, label_col, sensitive_col, g);
        report = run_audit(ds, audit_opt, g, &roc);
        roc.write_csv(out_path(g, "roc.csv").string());
      }
      report.configs["model"] = audit_opt.model;
      report.configs["defense"] = audit_opt.defense;
      write_text_atomic(out_path(g, "report.json").string(),
                        report_to_json(report) + "\n");
      std::cout << report_to_json(report) << "\n";
      return 0;
    }
    if (*verify_cmd) {
      return cmd_verify(g, sweeps, inject_fault,
                        out_path(g, "verify.json").string());
    }
    if (*plot_cmd) {
      if (plot_kind == "roc") return cmd_plotdata_roc(audit_dir, plot_out);
      if (data_path.empty() || !fs::exists(data_path)) {
        std::cerr << "missing dataset for eps-sweep\n";
        return kExitData;
      }
      TabularDataset ds = load_dataset(data_path, label_col, sensitive_col, g);
      return cmd_plotdata_eps(ds, parse_doubles(eps_text), g, plot_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kConfig:
        return kExitUsage;
      case ErrorKind::kData:
        return kExitData;
      case ErrorKind::kNumeric:
        return kExitNumeric;
    }
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
