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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fairleak/attacks.hpp"
#include "fairleak/errors.hpp"
#include "fairleak/fairness.hpp"
#include "fairleak/metrics.hpp"

using namespace fairleak;

namespace {

// The imbalanced leaking family used across the defense tests.
TabularDataset leaky_dataset(std::uint64_t seed) {
  SynthSpec spec{.n = 2000,
                 .p_s1 = 0.9,
                 .p_y1_given_s = {0.05, 0.95},
                 .mean_shift = 2.0,
                 .leak_shift = 1.0,
                 .d = 4,
                 .exact_frequency = true};
  return synth_biased(spec, seed);
}

LinearModel constant_model(double score_target, std::size_t d) {
  // logit of the requested constant score
  double z = std::log(score_target / (1.0 - score_target));
  LinearModel m{.weights = std::vector<double>(d, 0.0), .bias = z,
                .standardizer = Standardizer::identity(d)};
  return m;
}

}  // namespace

TEST_CASE("RandomizedClassifier validation") {
  RandomizedClassifier rc;
  CHECK_THROWS_AS(rc.validate(), InvalidConfig);
  rc.components.push_back({constant_model(0.9, 1), 0.5, 0.6});
  CHECK_THROWS_AS(rc.validate(), InvalidConfig);  // weights sum to 0.6
  rc.components.push_back({constant_model(0.1, 1), 0.5, 0.4});
  CHECK_NOTHROW(rc.validate());
}

TEST_CASE("sample_prediction degenerate mixture equals predict_hard") {
  auto ds = leaky_dataset(1);
  std::vector<double> w(ds.n(), 1.0);
  auto m = fit_logreg(ds.features, ds.labels, w, TrainConfig{.epochs = 100});
  RandomizedClassifier rc;
  rc.components.push_back({m, 0.5, 1.0});
  auto sampled = sample_prediction(rc, ds.features, 7);
  CHECK(sampled == predict_hard(m, ds.features, 0.5));
}

TEST_CASE("sample_prediction mixes constant components at their weights") {
  RandomizedClassifier rc;
  rc.components.push_back({constant_model(0.01, 1), 0.5, 0.5});  // always 0
  rc.components.push_back({constant_model(0.99, 1), 0.5, 0.5});  // always 1
  Matrix X(10000, 1);
  auto pred = sample_prediction(rc, X, 3);
  double rate = std::accumulate(pred.begin(), pred.end(), 0.0) / pred.size();
  CHECK(rate == doctest::Approx(0.5).epsilon(0.04));

  auto again = sample_prediction(rc, X, 3);
  CHECK(pred == again);
  auto other = sample_prediction(rc, X, 4);
  CHECK(pred != other);
}

TEST_CASE("expected_group_rates on hand-built mixtures") {
  Matrix X(4, 1);
  BinaryVector S = {0, 0, 1, 1};

  SUBCASE("group-blind constant mixture") {
    RandomizedClassifier rc;
    rc.components.push_back({constant_model(0.01, 1), 0.5, 0.3});
    rc.components.push_back({constant_model(0.99, 1), 0.5, 0.7});
    auto rates = expected_group_rates(rc, X, S);
    CHECK(rates[0] == doctest::Approx(0.7));
    CHECK(rates[1] == doctest::Approx(0.7));
  }

  SUBCASE("three components, hand-computed weighted sum") {
    // x values separate the groups; component taus pick different rows.
    X(0, 0) = 0.0;
    X(1, 0) = 1.0;
    X(2, 0) = 2.0;
    X(3, 0) = 3.0;
    LinearModel ramp{.weights = {1.0}, .bias = -1.5,
                     .standardizer = Standardizer::identity(1)};
    // ramp scores: logistic(-1.5), logistic(-0.5), logistic(0.5),
    // logistic(1.5) -> hard at tau=0.5: 0,0,1,1.
    RandomizedClassifier rc;
    rc.components.push_back({ramp, 0.5, 0.2});
    rc.components.push_back({constant_model(0.99, 1), 0.5, 0.5});  // all 1
    rc.components.push_back({constant_model(0.01, 1), 0.5, 0.3});  // all 0
    auto rates = expected_group_rates(rc, X, S);
    // S=0 rows have hard ramp labels {0,0}: rate 0.2*0 + 0.5*1 = 0.5.
    // S=1 rows have hard ramp labels {1,1}: rate 0.2*1 + 0.5*1 = 0.7.
    CHECK(rates[0] == doctest::Approx(0.5));
    CHECK(rates[1] == doctest::Approx(0.7));
  }
}

TEST_CASE("egd_train config validation") {
  auto ds = leaky_dataset(2);
  auto split = make_split(ds, 0.2, 0.5, 2, false);
  EgdConfig bad;
  bad.eps = -0.1;
  CHECK_THROWS_AS(egd_train(ds, split, bad), InvalidConfig);
}

TEST_CASE("egd_train keeps the multipliers on the simplex") {
  auto ds = leaky_dataset(3);
  auto split = make_split(ds, 0.2, 0.5, 3, false);
  EgdConfig cfg;
  cfg.iterations = 8;
  cfg.base_cfg.epochs = 50;
  EgdTrace trace;
  auto rc = egd_train(ds, split, cfg, &trace);
  rc.validate();
  REQUIRE(trace.lambdas.size() == 8);
  for (const auto& lam : trace.lambdas) {
    double sum = 0.0;
    for (double v : lam) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(trace.bound).epsilon(1e-9));
  }
}

TEST_CASE("egd_train with vacuous slack tracks the unconstrained fit") {
  auto ds = leaky_dataset(4);
  auto split = make_split(ds, 0.2, 0.5, 4, true);
  EgdConfig cfg;
  cfg.eps = 1.0;
  cfg.base_cfg.seed = derive_seed(4, seed_role::kEgd);
  auto rc = egd_train(ds, split, cfg);

  auto tr = ds.subset(split.tr);
  // Exact mixture expectation, free of per-record sampling noise.
  double acc_mix = 0.0;
  for (const auto& c : rc.components)
    acc_mix += c.weight *
               plain_accuracy(predict_hard(c.model, tr.features, c.tau),
                              tr.labels);
  std::vector<double> w(tr.n(), 1.0);
  auto plain = fit_logreg(tr.features, tr.labels, w, TrainConfig{});
  double acc_plain =
      plain_accuracy(predict_hard(plain, tr.features, 0.5), tr.labels);
  CHECK(std::abs(acc_mix - acc_plain) <= 0.02);
}

TEST_CASE("egd_train drives the demographic parity level down") {
  auto ds = leaky_dataset(5);
  auto split = make_split(ds, 0.2, 0.5, 5, false);
  auto tr = ds.subset(split.tr);

  // Unconstrained baseline leaks heavily on this family.
  std::vector<double> w(tr.n(), 1.0);
  auto plain = fit_logreg(tr.features, tr.labels, w, TrainConfig{});
  double base_dp =
      dempar_level(predict_hard(plain, tr.features, 0.5), tr.sensitive);
  CHECK(base_dp >= 0.4);

  EgdConfig cfg;  // eps = 0.01
  auto rc = egd_train(ds, split, cfg);
  auto rates = expected_group_rates(rc, tr.features, tr.sensitive);
  CHECK(std::abs(rates[1] - rates[0]) <= 0.05);
}

TEST_CASE("egd_train dp level is monotone-ish in eps") {
  auto ds = leaky_dataset(6);
  auto split = make_split(ds, 0.2, 0.5, 6, false);
  auto tr = ds.subset(split.tr);
  double prev = -1.0;
  for (double eps : {0.01, 0.1, 0.3, 1.0}) {
    EgdConfig cfg;
    cfg.eps = eps;
    cfg.iterations = 30;
    auto rc = egd_train(ds, split, cfg);
    auto rates = expected_group_rates(rc, tr.features, tr.sensitive);
    double dp = std::abs(rates[1] - rates[0]);
    if (prev >= 0.0) CHECK(dp >= prev - 0.03);
    prev = dp;
  }
}

TEST_CASE("egd_train equalized odds constraint reduces the gap") {
  auto ds = leaky_dataset(7);
  auto split = make_split(ds, 0.2, 0.5, 7, false);
  auto tr = ds.subset(split.tr);

  std::vector<double> w(tr.n(), 1.0);
  auto plain = fit_logreg(tr.features, tr.labels, w, TrainConfig{});
  double base_gap = eqodds_gap(predict_hard(plain, tr.features, 0.5),
                               tr.sensitive, tr.labels);

  EgdConfig cfg;
  cfg.constraint = FairnessConstraint::kEqOdds;
  cfg.eps = 0.05;
  auto rc = egd_train(ds, split, cfg);
  auto pred = sample_prediction(rc, tr.features, 13);
  double gap = eqodds_gap(pred, tr.sensitive, tr.labels);
  CHECK(gap < base_gap);
}

TEST_CASE("egd defense pushes the hard attack toward the theorem chain") {
  // Theorem chain: attack balanced accuracy on a finite sample stays below
  // (1 + dp + 3/sqrt(n))/2 once the mixture satisfies dp-level <= dp.
  auto ds = leaky_dataset(8);
  auto split = make_split(ds, 0.2, 0.5, 8, false);
  EgdConfig cfg;
  auto rc = egd_train(ds, split, cfg);

  auto aux_tr = ds.subset(split.aux_tr);
  auto aux_te = ds.subset(split.aux_te);
  auto hard_tr = sample_prediction(rc, aux_tr.features, 21);
  auto hard_te = sample_prediction(rc, aux_te.features, 22);
  auto res = adapt_aia_h(hard_tr, aux_tr.sensitive, hard_te, aux_te.sensitive);

  double dp = dempar_level(hard_tr, aux_tr.sensitive);
  double n = static_cast<double>(hard_tr.size());
  CHECK(res.tuned_accuracy <= 0.5 * (1.0 + dp) + 1e-12);
  CHECK(res.eval_accuracy <= 0.5 * (1.0 + dp + 3.0 / std::sqrt(n)));
}

TEST_CASE("advdebias alpha=0 is bitwise identical to fit_mlp") {
  auto ds = leaky_dataset(9);
  auto split = make_split(ds, 0.2, 0.5, 9, false);
  AdvDebiasConfig cfg;
  cfg.adversary_weight = 0.0;
  cfg.rounds = 40;
  cfg.target_cfg.seed = 9;
  auto defended = advdebias_train(ds, split, cfg);

  auto tr = ds.subset(split.tr);
  TrainConfig plain_cfg = cfg.target_cfg;
  plain_cfg.epochs = cfg.rounds * cfg.target_steps;
  auto plain = fit_mlp(tr.features, tr.labels, cfg.hidden, plain_cfg);
  REQUIRE(defended.weights.size() == plain.weights.size());
  for (std::size_t k = 0; k < plain.weights.size(); ++k) {
    CHECK(defended.weights[k] == plain.weights[k]);
    CHECK(defended.biases[k] == plain.biases[k]);
  }
}

TEST_CASE("advdebias is deterministic") {
  auto ds = leaky_dataset(10);
  auto split = make_split(ds, 0.2, 0.5, 10, false);
  AdvDebiasConfig cfg;
  cfg.rounds = 30;
  auto a = advdebias_train(ds, split, cfg);
  auto b = advdebias_train(ds, split, cfg);
  for (std::size_t k = 0; k < a.weights.size(); ++k) {
    CHECK(a.weights[k] == b.weights[k]);
    CHECK(a.biases[k] == b.biases[k]);
  }
}

TEST_CASE("advdebias at alpha=1 suppresses the soft attack") {
  auto ds = leaky_dataset(3);
  auto split = make_split(ds, 0.2, 0.5, 3, false);
  auto tr = ds.subset(split.tr);
  auto aux_tr = ds.subset(split.aux_tr);
  auto aux_te = ds.subset(split.aux_te);

  AdvDebiasConfig cfg;
  cfg.target_cfg.seed = 3;

  auto attack_on = [&](const MlpModel& m) {
    return adapt_aia_s(predict_soft(m, aux_tr.features), aux_tr.sensitive,
                       predict_soft(m, aux_te.features), aux_te.sensitive,
                       TrainConfig{})
        .eval_accuracy;
  };

  AdvDebiasConfig control = cfg;
  control.adversary_weight = 0.0;
  double undefended = attack_on(advdebias_train(ds, split, control));
  double defended = attack_on(advdebias_train(ds, split, cfg));
  CHECK(undefended >= 0.65);
  CHECK(defended <= 0.55);
}

TEST_CASE("randomized classifier json round trip") {
  auto ds = leaky_dataset(12);
  auto split = make_split(ds, 0.2, 0.5, 12, false);
  EgdConfig cfg;
  cfg.iterations = 5;
  cfg.base_cfg.epochs = 50;
  auto rc = egd_train(ds, split, cfg);
  auto back = randomized_classifier_from_json(randomized_classifier_to_json(rc));
  REQUIRE(back.components.size() == rc.components.size());
  auto a = sample_prediction(rc, ds.features, 5);
  auto b = sample_prediction(back, ds.features, 5);
  CHECK(a == b);
}
