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

#ifndef FAIRLEAK_MODELS_HPP
#define FAIRLEAK_MODELS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fairleak/data.hpp"
#include "fairleak/matrix.hpp"

namespace fairleak {

// Per-feature affine transform fitted on the training split and replayed
// at prediction time. Constant columns keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  double apply(double v, std::size_t j) const {
    return (v - mean[j]) / scale[j];
  }
  static Standardizer identity(std::size_t d) {
    return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  }
};

struct TrainConfig {
  std::size_t epochs = 500;
  double learning_rate = 0.05;
  double l2 = 0.0;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;

  void validate() const;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  Standardizer standardizer;

  std::size_t input_dim() const { return weights.size(); }
  double score(const double* x) const;
};

struct MlpModel {
  // layer_sizes = {d, hidden..., 1}; weights[k] is layer_sizes[k+1] x
  // layer_sizes[k] row-major, ReLU hidden, logistic output.
  std::vector<std::size_t> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  Standardizer standardizer;

  std::size_t input_dim() const { return layer_sizes.front(); }
  double score(const double* x) const;
};

using AnyModel = std::variant<LinearModel, MlpModel>;

// Weighted logistic regression by full-batch gradient descent, zero init.
// Standardization statistics are weighted, so zero-weight rows do not
// influence the fit at all.
LinearModel fit_logreg(const Matrix& X, const BinaryVector& y,
                       const std::vector<double>& sample_weights,
                       const TrainConfig& cfg);

// Binary cross-entropy MLP, Glorot-uniform init from cfg.seed,
// (mini-)batch gradient descent. Deterministic given (data, cfg).
MlpModel fit_mlp(const Matrix& X, const BinaryVector& y,
                 const std::vector<std::size_t>& hidden,
                 const TrainConfig& cfg);

SoftPredictions predict_soft(const LinearModel& m, const Matrix& X);
SoftPredictions predict_soft(const MlpModel& m, const Matrix& X);
SoftPredictions predict_soft(const AnyModel& m, const Matrix& X);

// Hard labels through the closed-at-tau indicator: 1 iff score >= tau.
HardPredictions threshold_scores(const SoftPredictions& scores, double tau);
HardPredictions predict_hard(const LinearModel& m, const Matrix& X, double tau);
HardPredictions predict_hard(const MlpModel& m, const Matrix& X, double tau);
HardPredictions predict_hard(const AnyModel& m, const Matrix& X, double tau);

// Mean binary cross-entropy of predicted scores against labels.
double bce_loss(const SoftPredictions& scores, const BinaryVector& y);

// Per-sample losses, used by the membership-inference attack.
std::vector<double> per_sample_bce(const SoftPredictions& scores,
                                   const BinaryVector& y);

// Max relative error between analytic and central finite-difference
// gradients of the training loss; n must be small.
double grad_check(const LinearModel& m, const Matrix& X, const BinaryVector& y,
                  double l2 = 0.0);
double grad_check(const MlpModel& m, const Matrix& X, const BinaryVector& y,
                  double l2 = 0.0);

// Element-wise max of |a-b| / max(1e-4, |a|+|b|). The floor keeps pure
// floating-point noise on near-zero components below the accept
// thresholds; a sign error still scores ~1. Exposed for tests.
double max_relative_error(const std::vector<double>& a,
                          const std::vector<double>& b);

// JSON round-trip: {layer_sizes, weights (row-major), biases, standardizer}.
std::string model_to_json(const AnyModel& m);
AnyModel model_from_json(const std::string& text);
void save_model(const AnyModel& m, const std::string& path);
AnyModel load_model(const std::string& path);

namespace detail {
// Shared gradient-descent step machinery; exposed so that adversarial
// debiasing can reuse the exact update path of fit_mlp.
struct MlpWorkspace {
  std::vector<std::vector<double>> activations;  // per layer, incl. input
  std::vector<std::vector<double>> grad_w;
  std::vector<std::vector<double>> grad_b;
};

MlpModel init_mlp(std::size_t d, const std::vector<std::size_t>& hidden,
                  std::uint64_t seed);

// Forward pass over standardized inputs for a batch of row indices.
// Output scores land in `scores` aligned with `batch`.
void mlp_forward_batch(const MlpModel& m, const Matrix& X,
                       const std::vector<std::size_t>& batch,
                       MlpWorkspace& ws, std::vector<double>& scores);

// Backward pass: `dloss_dz` is the per-sample derivative of the batch loss
// with respect to the output pre-activation (for BCE: (score - y)/B).
// Accumulates parameter gradients into ws and applies one SGD step.
void mlp_step(MlpModel& m, const Matrix& X,
              const std::vector<std::size_t>& batch,
              const std::vector<double>& dloss_dz, double learning_rate,
              double l2, MlpWorkspace& ws);
}  // namespace detail

}  // namespace fairleak

#endif  // FAIRLEAK_MODELS_HPP
