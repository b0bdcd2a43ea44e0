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

#ifndef FAIRLEAK_FAIRNESS_HPP
#define FAIRLEAK_FAIRNESS_HPP

#include <array>
#include <string>
#include <vector>

#include "fairleak/data.hpp"
#include "fairleak/models.hpp"

namespace fairleak {

enum class FairnessConstraint { kDemPar, kEqOdds };

// Mixture of thresholded base models; prediction draws one component per
// record.
struct RandomizedClassifier {
  struct Component {
    LinearModel model;
    double tau = 0.5;
    double weight = 0.0;
  };
  std::vector<Component> components;

  void validate() const;  // weights sum to 1, at least one component
};

struct EgdConfig {
  FairnessConstraint constraint = FairnessConstraint::kDemPar;
  double eps = 0.01;          // constraint slack
  std::size_t iterations = 50;
  double eta = 2.0;           // multiplier learning rate
  double bound = 100.0;       // multiplier simplex radius
  TrainConfig base_cfg;

  void validate() const;
};

struct AdvDebiasConfig {
  double adversary_weight = 1.0;
  std::size_t target_steps = 1;
  std::size_t disc_steps = 5;
  std::size_t rounds = 300;
  std::vector<std::size_t> hidden = {32, 32, 32, 32};
  TrainConfig target_cfg;
  // The discriminator problem is 1-D and convex; a large step is stable.
  TrainConfig disc_cfg{.epochs = 1, .learning_rate = 1.0};

  void validate() const;
};

// Per-round diagnostics, filled on request by egd_train.
struct EgdTrace {
  // One row per round: multipliers after the update (constraints + slack).
  std::vector<std::vector<double>> lambdas;
  std::vector<std::vector<double>> violations;
  double bound = 0.0;
};

// Lagrangian saddle-point reduction: each round fits a cost-reweighted
// base learner as best response, then updates the multipliers
// multiplicatively on the observed constraint violations. The result is
// the uniform mixture over rounds, merged over identical components.
RandomizedClassifier egd_train(const TabularDataset& dataset,
                               const SplitPlan& split, const EgdConfig& cfg,
                               EgdTrace* trace = nullptr);

// Per-record component draw, deterministic given seed.
HardPredictions sample_prediction(const RandomizedClassifier& rc,
                                  const Matrix& X, std::uint64_t seed);

// Exact mixture-weighted group rates, no sampling:
// rate[s] = sum_i p_i P(component i predicts 1 | S=s).
std::array<double, 2> expected_group_rates(const RandomizedClassifier& rc,
                                           const Matrix& X,
                                           const BinaryVector& S);

// Alternating adversarial training: the discriminator (logistic regression
// on the 1-D output score) learns to predict S; the target minimizes task
// loss minus adversary_weight times the discriminator loss.
MlpModel advdebias_train(const TabularDataset& dataset, const SplitPlan& split,
                         const AdvDebiasConfig& cfg);

std::string randomized_classifier_to_json(const RandomizedClassifier& rc);
RandomizedClassifier randomized_classifier_from_json(const std::string& text);

}  // namespace fairleak

#endif  // FAIRLEAK_FAIRNESS_HPP
