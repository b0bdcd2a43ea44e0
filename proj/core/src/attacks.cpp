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

#include "fairleak/attacks.hpp"

#include <algorithm>
#include <array>

#include "fairleak/errors.hpp"
#include "fairleak/metrics.hpp"

namespace fairleak {

int apply_attack_function(HardAttackFunction f, int yhat) {
  switch (f) {
    case HardAttackFunction::kConst0:
      return 0;
    case HardAttackFunction::kIdentity:
      return yhat;
    case HardAttackFunction::kComplement:
      return 1 - yhat;
    case HardAttackFunction::kConst1:
      return 1;
  }
  return 0;
}

HardPredictions apply_attack_function(HardAttackFunction f,
                                      const HardPredictions& pred) {
  HardPredictions out(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    out[i] = apply_attack_function(f, pred[i]);
  return out;
}

std::string to_string(HardAttackFunction f) {
  switch (f) {
    case HardAttackFunction::kConst0:
      return "const0";
    case HardAttackFunction::kIdentity:
      return "identity";
    case HardAttackFunction::kComplement:
      return "complement";
    case HardAttackFunction::kConst1:
      return "const1";
  }
  return "?";
}

namespace {

void check_both_classes(const BinaryVector& s) {
  bool c0 = false, c1 = false;
  for (int v : s) (v ? c1 : c0) = true;
  if (!c0 || !c1) throw SingleClassSensitive();
}

AttackResult soft_attack(const SoftPredictions& scores_tr,
                         const BinaryVector& s_tr,
                         const SoftPredictions& scores_te,
                         const BinaryVector& s_te, const TrainConfig& cfg,
                         bool adaptive) {
  check_both_classes(s_tr);
  check_both_classes(s_te);

  Matrix x_tr = Matrix::from_column(scores_tr);
  Matrix x_te = Matrix::from_column(scores_te);
  std::vector<double> unit(scores_tr.size(), 1.0);
  LinearModel f_att = fit_logreg(x_tr, s_tr, unit, cfg);

  SoftPredictions att_tr = predict_soft(f_att, x_tr);
  SoftPredictions att_te = predict_soft(f_att, x_te);

  AttackResult result;
  double tau = 0.5;
  if (adaptive) {
    RocCurve roc = roc_curve(att_tr, s_tr);
    auto [best, obj] = optimal_threshold(roc);
    (void)obj;
    tau = best;
  }
  result.threshold = tau;
  result.tuned_accuracy =
      balanced_accuracy(threshold_scores(att_tr, tau), s_tr);
  result.eval_accuracy =
      balanced_accuracy(threshold_scores(att_te, tau), s_te);
  return result;
}

}  // namespace

AttackResult adapt_aia_s(const SoftPredictions& target_scores_tr,
                         const BinaryVector& s_tr,
                         const SoftPredictions& target_scores_te,
                         const BinaryVector& s_te, const TrainConfig& cfg) {
  return soft_attack(target_scores_tr, s_tr, target_scores_te, s_te, cfg,
                     /*adaptive=*/true);
}

AttackResult baseline_aia(const SoftPredictions& target_scores_tr,
                          const BinaryVector& s_tr,
                          const SoftPredictions& target_scores_te,
                          const BinaryVector& s_te, const TrainConfig& cfg) {
  return soft_attack(target_scores_tr, s_tr, target_scores_te, s_te, cfg,
                     /*adaptive=*/false);
}

AttackResult adapt_aia_h(const HardPredictions& hard_tr,
                         const BinaryVector& s_tr,
                         const HardPredictions& hard_te,
                         const BinaryVector& s_te) {
  check_both_classes(s_tr);
  check_both_classes(s_te);
  if (hard_tr.size() != s_tr.size() || hard_te.size() != s_te.size())
    throw DimensionMismatch("adapt_aia_h inputs disagree");

  constexpr std::array<HardAttackFunction, 4> kAll = {
      HardAttackFunction::kConst0, HardAttackFunction::kIdentity,
      HardAttackFunction::kComplement, HardAttackFunction::kConst1};

  AttackResult result;
  double best = -1.0;
  HardAttackFunction chosen = HardAttackFunction::kConst0;
  for (auto f : kAll) {
    double ba = balanced_accuracy(apply_attack_function(f, hard_tr), s_tr);
    if (ba > best) {  // strict: ties keep the earlier enum value
      best = ba;
      chosen = f;
    }
  }
  result.tuned_accuracy = best;
  result.chosen_function = chosen;
  result.eval_accuracy =
      balanced_accuracy(apply_attack_function(chosen, hard_te), s_te);
  result.theoretical_bound =
      theoretical_attack_bound(dempar_level(hard_tr, s_tr));
  return result;
}

double membership_inference(const std::vector<double>& losses_members,
                            const std::vector<double>& losses_nonmembers) {
  if (losses_members.empty()) throw EmptyInput("member losses");
  if (losses_nonmembers.empty()) throw EmptyInput("non-member losses");

  // Monotone squashing of the loss into a [0,1] membership score: low loss
  // means likely member.
  auto squash = [](double loss) { return 1.0 / (1.0 + std::max(0.0, loss)); };

  SoftPredictions tune_scores, eval_scores;
  BinaryVector tune_labels, eval_labels;
  auto deal = [&](const std::vector<double>& losses, int label) {
    // Even positions tune, odd positions evaluate; a singleton goes to both.
    for (std::size_t i = 0; i < losses.size(); ++i) {
      double sc = squash(losses[i]);
      if (losses.size() == 1 || i % 2 == 0) {
        tune_scores.push_back(sc);
        tune_labels.push_back(label);
      }
      if (losses.size() == 1 || i % 2 == 1) {
        eval_scores.push_back(sc);
        eval_labels.push_back(label);
      }
    }
  };
  deal(losses_members, 1);
  deal(losses_nonmembers, 0);

  RocCurve roc = roc_curve(tune_scores, tune_labels);
  auto [tau, obj] = optimal_threshold(roc);
  (void)obj;
  return balanced_accuracy(threshold_scores(eval_scores, tau), eval_labels);
}

}  // namespace fairleak
