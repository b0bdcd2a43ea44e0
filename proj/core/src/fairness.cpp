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

#include "fairleak/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairleak/errors.hpp"
#include "json.hpp"

namespace fairleak {

void RandomizedClassifier::validate() const {
  if (components.empty()) throw InvalidConfig("empty mixture");
  double total = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0) throw InvalidConfig("negative mixture weight");
    if (c.tau < 0.0 || c.tau > 1.0) throw InvalidConfig("tau outside [0,1]");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidConfig("mixture weights do not sum to 1");
}

void EgdConfig::validate() const {
  if (eps < 0.0 || eps > 1.0) throw InvalidConfig("eps must lie in [0,1]");
  if (iterations == 0 || iterations > 10000)
    throw InvalidConfig("iterations must lie in [1, 1e4]");
  if (eta <= 0.0) throw InvalidConfig("eta must be positive");
  if (bound <= 0.0) throw InvalidConfig("bound must be positive");
  base_cfg.validate();
}

void AdvDebiasConfig::validate() const {
  if (adversary_weight < 0.0 || adversary_weight > 100.0)
    throw InvalidConfig("adversary_weight must lie in [0,100]");
  if (rounds == 0) throw InvalidConfig("rounds must be positive");
  if (target_steps == 0 || disc_steps == 0)
    throw InvalidConfig("schedule steps must be positive");
  target_cfg.validate();
  disc_cfg.validate();
}

namespace {

// Signed fairness constraint over hard predictions on the training split.
// DemPar:  sign * (P(h=1|S=s) - P(h=1)) <= eps
// EqOdds:  sign * (P(h=1|S=s,Y=y) - P(h=1|Y=y)) <= eps
struct Constraint {
  int s;
  int y;     // -1 for DemPar
  int sign;  // +1 or -1
};

struct ConstraintSystem {
  std::vector<Constraint> constraints;
  // Per-record derivative of each constraint's disparity wrt P(h_i = 1).
  // coef[k][i]
  std::vector<std::vector<double>> coef;

  std::size_t k() const { return constraints.size(); }
};

ConstraintSystem build_constraints(const TabularDataset& tr,
                                   FairnessConstraint kind) {
  const std::size_t n = tr.n();
  ConstraintSystem sys;
  if (kind == FairnessConstraint::kDemPar) {
    std::array<std::size_t, 2> ns = {0, 0};
    for (int s : tr.sensitive) ++ns[s];
    if (ns[0] == 0 || ns[1] == 0)
      throw DegenerateGroups("single S class in training split");
    for (int s = 0; s < 2; ++s)
      for (int sign : {+1, -1}) {
        sys.constraints.push_back({s, -1, sign});
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i)
          c[i] = sign * ((tr.sensitive[i] == s ? 1.0 / ns[s] : 0.0) - 1.0 / n);
        sys.coef.push_back(std::move(c));
      }
  } else {
    std::size_t nsy[2][2] = {{0, 0}, {0, 0}};
    std::array<std::size_t, 2> ny = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      ++nsy[tr.sensitive[i]][tr.labels[i]];
      ++ny[tr.labels[i]];
    }
    for (int s = 0; s < 2; ++s)
      for (int y = 0; y < 2; ++y)
        if (nsy[s][y] == 0)
          throw DegenerateGroups("empty (S,Y) cell in training split");
    for (int s = 0; s < 2; ++s)
      for (int y = 0; y < 2; ++y)
        for (int sign : {+1, -1}) {
          sys.constraints.push_back({s, y, sign});
          std::vector<double> c(n);
          for (std::size_t i = 0; i < n; ++i) {
            if (tr.labels[i] != y) {
              c[i] = 0.0;
              continue;
            }
            c[i] = sign * ((tr.sensitive[i] == s ? 1.0 / nsy[s][y] : 0.0) -
                           1.0 / ny[y]);
          }
          sys.coef.push_back(std::move(c));
        }
  }
  return sys;
}

// disparity_k(h) = sum_i coef[k][i] * h_i
std::vector<double> disparities(const ConstraintSystem& sys,
                                const HardPredictions& h) {
  std::vector<double> out(sys.k(), 0.0);
  for (std::size_t k = 0; k < sys.k(); ++k)
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i]) out[k] += sys.coef[k][i];
  return out;
}

bool same_component(const RandomizedClassifier::Component& a,
                    const RandomizedClassifier::Component& b) {
  return a.tau == b.tau && a.model.bias == b.model.bias &&
         a.model.weights == b.model.weights &&
         a.model.standardizer.mean == b.model.standardizer.mean &&
         a.model.standardizer.scale == b.model.standardizer.scale;
}

}  // namespace

RandomizedClassifier egd_train(const TabularDataset& dataset,
                               const SplitPlan& split, const EgdConfig& cfg,
                               EgdTrace* trace) {
  cfg.validate();
  TabularDataset tr = dataset.subset(split.tr);
  bool y0 = false, y1 = false;
  for (int y : tr.labels) (y ? y1 : y0) = true;
  if (!y0 || !y1) throw DegenerateGroups("single Y class in training split");

  ConstraintSystem sys = build_constraints(tr, cfg.constraint);
  const std::size_t n = tr.n();
  const std::size_t kdim = sys.k() + 1;  // constraints + slack coordinate

  // Multipliers live on the radius-B simplex; start uniform so the signed
  // pairs cancel and round one is the unconstrained best response.
  std::vector<double> lambda(kdim, cfg.bound / kdim);

  std::vector<RandomizedClassifier::Component> rounds;
  if (trace) trace->bound = cfg.bound;

  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    // Cost of predicting 1 minus cost of predicting 0, per record.
    std::vector<double> delta(n);
    for (std::size_t i = 0; i < n; ++i)
      delta[i] = (tr.labels[i] ? -1.0 : 1.0) / n;
    for (std::size_t k = 0; k < sys.k(); ++k)
      if (lambda[k] != 0.0)
        for (std::size_t i = 0; i < n; ++i)
          delta[i] += lambda[k] * sys.coef[k][i];

    BinaryVector relabel(n);
    std::vector<double> weight(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      relabel[i] = delta[i] < 0.0 ? 1 : 0;
      weight[i] = std::abs(delta[i]);
      wsum += weight[i];
    }
    if (wsum <= 0.0) weight.assign(n, 1.0);

    RandomizedClassifier::Component comp;
    comp.model = fit_logreg(tr.features, relabel, weight, cfg.base_cfg);
    comp.tau = 0.5;
    comp.weight = 1.0 / cfg.iterations;

    HardPredictions h = predict_hard(comp.model, tr.features, comp.tau);
    std::vector<double> disp = disparities(sys, h);

    std::vector<double> violation(kdim, 0.0);
    for (std::size_t k = 0; k < sys.k(); ++k)
      violation[k] = disp[k] - cfg.eps;
    double total = 0.0;
    for (std::size_t k = 0; k < kdim; ++k) {
      lambda[k] *= std::exp(cfg.eta * violation[k]);
      total += lambda[k];
    }
    for (auto& l : lambda) l = l / total * cfg.bound;

    if (trace) {
      trace->lambdas.push_back(lambda);
      trace->violations.push_back(violation);
    }
    rounds.push_back(std::move(comp));
  }

  RandomizedClassifier rc;
  for (auto& comp : rounds) {
    auto it = std::find_if(rc.components.begin(), rc.components.end(),
                           [&](const auto& c) { return same_component(c, comp); });
    if (it != rc.components.end())
      it->weight += comp.weight;
    else
      rc.components.push_back(std::move(comp));
  }
  rc.validate();
  return rc;
}

HardPredictions sample_prediction(const RandomizedClassifier& rc,
                                  const Matrix& X, std::uint64_t seed) {
  rc.validate();
  for (const auto& c : rc.components)
    if (c.model.input_dim() != X.cols())
      throw DimensionMismatch("sample_prediction input width");
  Rng rng(derive_seed(seed, seed_role::kSample));
  HardPredictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double u = rng.uniform();
    std::size_t pick = rc.components.size() - 1;
    double acc = 0.0;
    for (std::size_t c = 0; c < rc.components.size(); ++c) {
      acc += rc.components[c].weight;
      if (u < acc) {
        pick = c;
        break;
      }
    }
    const auto& comp = rc.components[pick];
    out[i] = comp.model.score(X.row(i)) >= comp.tau ? 1 : 0;
  }
  return out;
}

std::array<double, 2> expected_group_rates(const RandomizedClassifier& rc,
                                           const Matrix& X,
                                           const BinaryVector& S) {
  rc.validate();
  if (S.size() != X.rows())
    throw DimensionMismatch("expected_group_rates inputs disagree");
  std::array<std::size_t, 2> ns = {0, 0};
  for (int s : S) ++ns[s];
  if (ns[0] == 0 || ns[1] == 0) throw SingleClassSensitive();

  std::array<double, 2> rate = {0.0, 0.0};
  for (const auto& comp : rc.components) {
    std::array<std::size_t, 2> pos = {0, 0};
    for (std::size_t i = 0; i < X.rows(); ++i)
      if (comp.model.score(X.row(i)) >= comp.tau) ++pos[S[i]];
    for (int s = 0; s < 2; ++s)
      rate[s] += comp.weight * static_cast<double>(pos[s]) / ns[s];
  }
  return rate;
}

MlpModel advdebias_train(const TabularDataset& dataset, const SplitPlan& split,
                         const AdvDebiasConfig& cfg) {
  cfg.validate();
  TabularDataset tr = dataset.subset(split.tr);
  bool s0 = false, s1 = false;
  for (int s : tr.sensitive) (s ? s1 : s0) = true;
  if (!s0 || !s1) throw DegenerateGroups("single S class in training split");
  const std::size_t n = tr.n();

  // Target init and standardization follow fit_mlp exactly, so that a zero
  // adversary weight reproduces plain training bit for bit.
  MlpModel target = detail::init_mlp(tr.d(), cfg.hidden, cfg.target_cfg.seed);
  {
    // fit_standardizer is file-local to models.cpp; recompute here.
    for (std::size_t j = 0; j < tr.d(); ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += tr.features(i, j);
      mean /= n;
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double c = tr.features(i, j) - mean;
        var += c * c;
      }
      var /= n;
      target.standardizer.mean[j] = mean;
      target.standardizer.scale[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
  }

  // Discriminator: logistic regression on the single output score, with
  // class-balanced weights so the minority S group carries equal mass —
  // the attack it stands in for is scored by balanced accuracy.
  double disc_w = 0.0, disc_b = 0.0;
  auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  std::array<std::size_t, 2> ns = {0, 0};
  for (int s : tr.sensitive) ++ns[s];
  std::vector<double> disc_weight(n);
  for (std::size_t i = 0; i < n; ++i)
    disc_weight[i] = static_cast<double>(n) / (2.0 * ns[tr.sensitive[i]]);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  detail::MlpWorkspace ws;
  std::vector<double> scores, dloss(n);

  const double alpha = cfg.adversary_weight;
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    if (alpha > 0.0) {
      detail::mlp_forward_batch(target, tr.features, all, ws, scores);
      for (std::size_t step = 0; step < cfg.disc_steps; ++step) {
        double gw = 0.0, gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double e = disc_weight[i] *
                     (sigmoid(disc_w * scores[i] + disc_b) - tr.sensitive[i]);
          gw += e * scores[i];
          gb += e;
        }
        disc_w -= cfg.disc_cfg.learning_rate * gw / n;
        disc_b -= cfg.disc_cfg.learning_rate * gb / n;
      }
    }

    for (std::size_t step = 0; step < cfg.target_steps; ++step) {
      detail::mlp_forward_batch(target, tr.features, all, ws, scores);
      double check = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = (scores[i] - tr.labels[i]) / n;
        if (alpha > 0.0) {
          // Objective is task loss minus alpha times discriminator loss;
          // the chain through the output sigmoid gives
          // d/dz [-alpha bce(sigmoid(w yhat + b), s)]
          //   = -alpha (sigma - s) w yhat (1 - yhat) / n.
          double ds = disc_weight[i] *
                      (sigmoid(disc_w * scores[i] + disc_b) - tr.sensitive[i]);
          d -= alpha * ds * disc_w * scores[i] * (1.0 - scores[i]) / n;
        }
        dloss[i] = d;
        check += d;
      }
      if (!std::isfinite(check)) throw NonFiniteLoss();
      detail::mlp_step(target, tr.features, all, dloss, cfg.target_cfg.learning_rate,
                       cfg.target_cfg.l2, ws);
    }
  }
  return target;
}

std::string randomized_classifier_to_json(const RandomizedClassifier& rc) {
  nlohmann::json j;
  j["components"] = nlohmann::json::array();
  for (const auto& c : rc.components)
    j["components"].push_back(
        {{"model", nlohmann::json::parse(model_to_json(AnyModel{c.model}))},
         {"tau", c.tau},
         {"weight", c.weight}});
  return j.dump(2);
}

RandomizedClassifier randomized_classifier_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RandomizedClassifier rc;
  for (const auto& cj : j.at("components")) {
    RandomizedClassifier::Component c;
    c.model = std::get<LinearModel>(model_from_json(cj.at("model").dump()));
    c.tau = cj.at("tau").get<double>();
    c.weight = cj.at("weight").get<double>();
    rc.components.push_back(std::move(c));
  }
  rc.validate();
  return rc;
}

}  // namespace fairleak
