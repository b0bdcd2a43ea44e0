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

#ifndef FAIRLEAK_ATTACKS_HPP
#define FAIRLEAK_ATTACKS_HPP

#include <optional>
#include <string>

#include "fairleak/data.hpp"
#include "fairleak/models.hpp"

namespace fairleak {

// The four binary attack maps over a hard label; enum order is the
// tie-break order everywhere.
enum class HardAttackFunction { kConst0, kIdentity, kComplement, kConst1 };

int apply_attack_function(HardAttackFunction f, int yhat);
HardPredictions apply_attack_function(HardAttackFunction f,
                                      const HardPredictions& pred);
std::string to_string(HardAttackFunction f);

struct AttackResult {
  double tuned_accuracy = 0.0;  // balanced accuracy on the tuning split
  double eval_accuracy = 0.0;   // balanced accuracy on the held-out split
  std::optional<double> threshold;  // adaptive threshold, soft attacks
  std::optional<HardAttackFunction> chosen_function;
  std::optional<double> theoretical_bound;
};

// Soft-label attack with adaptive threshold: fits an attack scorer on the
// target's output scores, then picks the ROC operating point minimizing
// (1-TPR)^2 + FPR^2 on the tuning split.
AttackResult adapt_aia_s(const SoftPredictions& target_scores_tr,
                         const BinaryVector& s_tr,
                         const SoftPredictions& target_scores_te,
                         const BinaryVector& s_te, const TrainConfig& cfg);

// Hard-label attack: exhausts the four attack maps on the tuning split.
AttackResult adapt_aia_h(const HardPredictions& hard_tr,
                         const BinaryVector& s_tr,
                         const HardPredictions& hard_te,
                         const BinaryVector& s_te);

// Same scorer as adapt_aia_s but with the threshold fixed at 0.5.
AttackResult baseline_aia(const SoftPredictions& target_scores_tr,
                          const BinaryVector& s_tr,
                          const SoftPredictions& target_scores_te,
                          const BinaryVector& s_te, const TrainConfig& cfg);

// Loss-based membership inference: scores are 1/(1+loss), the threshold is
// tuned on one half and evaluated on the other. Returns balanced accuracy.
double membership_inference(const std::vector<double>& losses_members,
                            const std::vector<double>& losses_nonmembers);

}  // namespace fairleak

#endif  // FAIRLEAK_ATTACKS_HPP
