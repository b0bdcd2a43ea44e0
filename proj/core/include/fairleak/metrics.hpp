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

#ifndef FAIRLEAK_METRICS_HPP
#define FAIRLEAK_METRICS_HPP

#include <array>
#include <string>
#include <vector>

#include "fairleak/data.hpp"

namespace fairleak {

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

// Operating points at every candidate threshold: midpoints of adjacent
// distinct scores plus 0 and a sentinel just above 1, ascending. FPR and
// TPR are non-increasing in the threshold.
struct RocCurve {
  std::vector<RocPoint> points;

  void write_csv(const std::string& path) const;
};

struct FairnessSummary {
  double dempar_level = 0.0;
  double eqodds_gap = 0.0;
  double dependency_ys = 0.0;
  // group_rates[s] = P(Yhat=1 | S=s)
  std::array<double, 2> group_rates = {0.0, 0.0};
  // cond_rates[s][y] = P(Yhat=1 | S=s, Y=y)
  std::array<std::array<double, 2>, 2> cond_rates = {{{0.0, 0.0}, {0.0, 0.0}}};
};

// Mean of the per-class conditional accuracies; 0.5 is random guessing.
double balanced_accuracy(const HardPredictions& predicted,
                         const BinaryVector& actual);

double plain_accuracy(const HardPredictions& predicted,
                      const BinaryVector& actual);

RocCurve roc_curve(const SoftPredictions& scores, const BinaryVector& positives);

// argmin over the candidate set of (1-TPR)^2 + FPR^2; ties resolved to the
// smallest threshold. Returns (threshold, attained objective).
std::pair<double, double> optimal_threshold(const RocCurve& roc);

// |P(Yhat=1|S=1) - P(Yhat=1|S=0)|
double dempar_level(const HardPredictions& pred, const BinaryVector& S);

// max over (yhat, y) of |P(Yhat=yhat|S=0,Y=y) - P(Yhat=yhat|S=1,Y=y)|
double eqodds_gap(const HardPredictions& pred, const BinaryVector& S,
                  const BinaryVector& Y);

// |P(Y=0|S=0) - P(Y=0|S=1)|
double dependency_ys(const BinaryVector& Y, const BinaryVector& S);

// Ceiling on hard-label attack balanced accuracy: (1 + dempar_level) / 2.
double theoretical_attack_bound(double dempar_level);

FairnessSummary fairness_summary(const HardPredictions& pred,
                                 const BinaryVector& S, const BinaryVector& Y);

}  // namespace fairleak

#endif  // FAIRLEAK_METRICS_HPP
