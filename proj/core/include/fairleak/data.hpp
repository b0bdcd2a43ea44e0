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

#ifndef FAIRLEAK_DATA_HPP
#define FAIRLEAK_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairleak/matrix.hpp"

namespace fairleak {

using BinaryVector = std::vector<int>;   // entries in {0,1}
using SoftPredictions = std::vector<double>;  // scores in [0,1]
using HardPredictions = BinaryVector;

// Censored tabular dataset: features X, binary label Y, binary sensitive
// attribute S. S is never a feature column.
struct TabularDataset {
  Matrix features;
  BinaryVector labels;
  BinaryVector sensitive;
  std::vector<std::string> feature_names;

  std::size_t n() const { return labels.size(); }
  std::size_t d() const { return features.cols(); }

  // Throws unless row counts agree, n >= 1 and all features are finite.
  void validate() const;

  TabularDataset subset(const std::vector<std::size_t>& idx) const;
};

// Disjoint index sets: model training split, test split, and the
// adversary's tuning/evaluation halves of the test split.
struct SplitPlan {
  std::vector<std::size_t> tr;
  std::vector<std::size_t> te;
  std::vector<std::size_t> aux_tr;
  std::vector<std::size_t> aux_te;
  std::uint64_t seed = 0;
};

struct SynthSpec {
  std::size_t n = 0;
  double p_s1 = 0.5;
  std::pair<double, double> p_y1_given_s = {0.5, 0.5};
  double mean_shift = 1.0;  // class-mean separation along Y (feature 0)
  double leak_shift = 0.0;  // feature-mean separation along S (feature 1)
  std::size_t d = 2;
  bool exact_frequency = true;
};

// ---- CSV ingestion ----

// Loads a UTF-8 comma-separated file with a mandatory header. The label and
// sensitive columns are removed from the feature matrix; row order is kept.
// A feature column bitwise-identical to the sensitive column is reported
// through `censoring_warnings` when given, and throws CensoringViolation
// otherwise (strict mode).
TabularDataset load_csv(const std::string& path, const std::string& label_col,
                        const std::string& sensitive_col,
                        std::vector<std::string>* censoring_warnings = nullptr);

void write_csv(const TabularDataset& ds, const std::string& path,
               const std::string& label_col = "y",
               const std::string& sensitive_col = "s");

struct PredictionsFile {
  std::optional<SoftPredictions> soft;
  std::optional<HardPredictions> hard;
  BinaryVector sensitive;
  std::optional<BinaryVector> labels;
};

// Columns: exactly one of "score" (reals in [0,1]) or "hard" ({0,1}),
// plus "s" and optional "y".
PredictionsFile load_predictions_csv(const std::string& path);

// ---- splits ----

SplitPlan make_split(const TabularDataset& ds, double te_fraction,
                     double aux_tr_fraction, std::uint64_t seed,
                     bool stratify_on_s);

void write_split_json(const SplitPlan& plan, const std::string& path);
SplitPlan load_split_json(const std::string& path);

// ---- synthesis ----

// Deterministic biased generator: x = mean_shift*y*e0 + leak_shift*s*e1 +
// unit Gaussian noise. In exact-frequency mode the four (S,Y) cell counts
// are apportioned by largest remainder so the empirical conditionals match
// the spec up to count rounding.
TabularDataset synth_biased(const SynthSpec& spec, std::uint64_t seed);

// Largest-remainder apportionment of n into cells proportional to weights.
std::vector<std::size_t> apportion_counts(std::size_t n,
                                          const std::vector<double>& weights);

// (P(S=1), P(Y=1)) empirical fractions.
std::pair<double, double> class_balance(const TabularDataset& ds);

}  // namespace fairleak

#endif  // FAIRLEAK_DATA_HPP
