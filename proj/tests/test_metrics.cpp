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
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "fairleak/errors.hpp"
#include "fairleak/matrix.hpp"
#include "fairleak/metrics.hpp"

using namespace fairleak;

namespace {

// Reference implementation: balanced objective at one threshold by direct
// counting, used to cross-check roc_curve and optimal_threshold.
std::pair<double, double> rates_at(const SoftPredictions& scores,
                                   const BinaryVector& pos, double tau) {
  double tp = 0, fp = 0, p = 0, n = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (pos[i]) {
      ++p;
      if (scores[i] >= tau) ++tp;
    } else {
      ++n;
      if (scores[i] >= tau) ++fp;
    }
  }
  return {fp / n, tp / p};  // (fpr, tpr)
}

SoftPredictions random_scores(std::size_t n, Rng& rng) {
  SoftPredictions s(n);
  for (auto& v : s) v = rng.uniform();
  return s;
}

}  // namespace

TEST_CASE("balanced_accuracy examples") {
  BinaryVector s = {0, 0, 0, 1};
  CHECK(balanced_accuracy(s, s) == doctest::Approx(1.0));
  CHECK(balanced_accuracy(BinaryVector{1, 1, 1, 1}, s) == doctest::Approx(0.5));
  CHECK(balanced_accuracy(BinaryVector{0, 0, 0, 0}, s) == doctest::Approx(0.5));
  CHECK(balanced_accuracy(BinaryVector{0, 1, 0, 1}, s) ==
        doctest::Approx(5.0 / 6.0));
  CHECK_THROWS_AS(balanced_accuracy(s, BinaryVector{0, 0, 0, 0}),
                  SingleClassActual);
}

TEST_CASE("balanced_accuracy complement symmetry") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    BinaryVector pred(30), actual(30);
    for (int i = 0; i < 30; ++i) {
      pred[i] = rng.uniform() < 0.5;
      actual[i] = i < 15 ? 0 : 1;
    }
    BinaryVector flipped(30);
    for (int i = 0; i < 30; ++i) flipped[i] = 1 - pred[i];
    CHECK(balanced_accuracy(pred, actual) + balanced_accuracy(flipped, actual)
          == doctest::Approx(1.0));
  }
}

TEST_CASE("roc_curve worked examples") {
  SUBCASE("perfect separation reaches (0,1)") {
    auto roc = roc_curve({0.1, 0.9}, {0, 1});
    bool found = false;
    for (const auto& p : roc.points)
      if (p.fpr == 0.0 && p.tpr == 1.0) found = true;
    CHECK(found);
  }
  SUBCASE("all-equal scores give only the two endpoints") {
    auto roc = roc_curve({0.4, 0.4, 0.4}, {0, 1, 1});
    REQUIRE(roc.points.size() == 2);
    CHECK(roc.points.front().fpr == 1.0);
    CHECK(roc.points.front().tpr == 1.0);
    CHECK(roc.points.back().fpr == 0.0);
    CHECK(roc.points.back().tpr == 0.0);
  }
  SUBCASE("interleaved scores at the midpoint threshold") {
    auto roc = roc_curve({0.2, 0.4, 0.6, 0.8}, {0, 1, 0, 1});
    auto it = std::find_if(roc.points.begin(), roc.points.end(),
                           [](const RocPoint& p) { return p.threshold == 0.5; });
    REQUIRE(it != roc.points.end());
    CHECK(it->fpr == doctest::Approx(0.5));
    CHECK(it->tpr == doctest::Approx(0.5));
  }
}

TEST_CASE("roc_curve structural properties") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    auto scores = random_scores(40, rng);
    BinaryVector pos(40);
    for (int i = 0; i < 40; ++i) pos[i] = i % 2;
    auto roc = roc_curve(scores, pos);

    // Thresholds strictly ascending; rates non-increasing; rates agree
    // with direct counting at every operating point.
    for (std::size_t k = 0; k < roc.points.size(); ++k) {
      if (k) {
        CHECK(roc.points[k].threshold > roc.points[k - 1].threshold);
        CHECK(roc.points[k].fpr <= roc.points[k - 1].fpr);
        CHECK(roc.points[k].tpr <= roc.points[k - 1].tpr);
      }
      auto [fpr, tpr] = rates_at(scores, pos, roc.points[k].threshold);
      CHECK(roc.points[k].fpr == doctest::Approx(fpr));
      CHECK(roc.points[k].tpr == doctest::Approx(tpr));
    }
    CHECK(roc.points.front().threshold == 0.0);
    CHECK(roc.points.back().threshold > 1.0);
  }
}

TEST_CASE("optimal_threshold worked examples") {
  SUBCASE("perfect separation attains objective 0") {
    auto [tau, obj] = optimal_threshold(roc_curve({0.1, 0.2, 0.8, 0.9},
                                                  {0, 0, 1, 1}));
    CHECK(obj == doctest::Approx(0.0));
    CHECK(tau == doctest::Approx(0.5));  // midpoint of 0.2 and 0.8
  }
  SUBCASE("anti-correlated scores tie at objective 1, smallest tau wins") {
    auto [tau, obj] = optimal_threshold(roc_curve({0.4, 0.6}, {1, 0}));
    CHECK(obj == doctest::Approx(1.0));
    CHECK(tau == 0.0);  // all-1 operating point at the smallest candidate
  }
  SUBCASE("single distinct score") {
    auto [tau, obj] = optimal_threshold(roc_curve({0.3, 0.3}, {0, 1}));
    CHECK(obj == doctest::Approx(1.0));
    CHECK(tau == 0.0);
  }
}

TEST_CASE("optimal_threshold equals exhaustive scan") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 2 + rng.index(38);
    auto scores = random_scores(n, rng);
    BinaryVector pos(n);
    bool any0 = false, any1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = rng.uniform() < 0.5;
      (pos[i] ? any1 : any0) = true;
    }
    if (!any0 || !any1) continue;
    auto roc = roc_curve(scores, pos);
    auto [tau, obj] = optimal_threshold(roc);

    double best = std::numeric_limits<double>::infinity();
    double best_tau = 0.0;
    for (const auto& p : roc.points) {
      double o = (1.0 - p.tpr) * (1.0 - p.tpr) + p.fpr * p.fpr;
      if (o < best) {
        best = o;
        best_tau = p.threshold;
      }
    }
    CHECK(obj == best);
    CHECK(tau == best_tau);
  }
}

TEST_CASE("dempar_level examples and symmetry") {
  BinaryVector s;
  HardPredictions pred;
  // Yhat=1 counts: 40/50 in S=1, 15/50 in S=0.
  for (int i = 0; i < 50; ++i) {
    s.push_back(1);
    pred.push_back(i < 40);
  }
  for (int i = 0; i < 50; ++i) {
    s.push_back(0);
    pred.push_back(i < 15);
  }
  CHECK(dempar_level(pred, s) == doctest::Approx(0.5));
  CHECK(dempar_level(s, s) == doctest::Approx(1.0));
  CHECK(dempar_level(HardPredictions(100, 1), s) == doctest::Approx(0.0));

  // Relabeling the groups leaves the level unchanged.
  BinaryVector swapped(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) swapped[i] = 1 - s[i];
  CHECK(dempar_level(pred, swapped) == doctest::Approx(0.5));

  CHECK_THROWS_AS(dempar_level(pred, BinaryVector(100, 1)),
                  SingleClassSensitive);
}

TEST_CASE("eqodds_gap examples") {
  BinaryVector y = {0, 0, 1, 1, 0, 0, 1, 1};
  BinaryVector s = {0, 0, 0, 0, 1, 1, 1, 1};
  CHECK(eqodds_gap(y, s, y) == doctest::Approx(0.0));  // Yhat = Y
  CHECK(eqodds_gap(s, s, y) == doctest::Approx(1.0));  // Yhat = S, Y balanced

  // Hand-counted table: S=0 has TPR 1/2, FPR 0; S=1 has TPR 1, FPR 1/2.
  HardPredictions pred = {0, 0, 1, 0, 1, 0, 1, 1};
  CHECK(eqodds_gap(pred, s, y) == doctest::Approx(0.5));

  BinaryVector missing_cell_y = {0, 0, 0, 0, 0, 0, 1, 1};
  CHECK_THROWS_AS(eqodds_gap(pred, s, missing_cell_y), EmptyCell);
}

TEST_CASE("dependency_ys") {
  BinaryVector y = {0, 1, 0, 1};
  BinaryVector s = {0, 0, 1, 1};
  CHECK(dependency_ys(y, s) == doctest::Approx(0.0));
  BinaryVector y2 = {0, 0, 1, 1};
  CHECK(dependency_ys(y2, s) == doctest::Approx(1.0));
}

TEST_CASE("theoretical_attack_bound arithmetic") {
  CHECK(theoretical_attack_bound(0.0) == doctest::Approx(0.5));
  CHECK(theoretical_attack_bound(1.0) == doctest::Approx(1.0));
  CHECK(theoretical_attack_bound(0.5) == doctest::Approx(0.75));
}

TEST_CASE("fairness_summary is consistent with the scalar metrics") {
  Rng rng(41);
  BinaryVector s(200), y(200);
  HardPredictions pred(200);
  for (int i = 0; i < 200; ++i) {
    s[i] = rng.uniform() < 0.4;
    y[i] = rng.uniform() < (s[i] ? 0.7 : 0.3);
    pred[i] = rng.uniform() < (y[i] ? 0.8 : 0.2);
  }
  auto fs = fairness_summary(pred, s, y);
  CHECK(fs.dempar_level == doctest::Approx(dempar_level(pred, s)));
  CHECK(fs.eqodds_gap == doctest::Approx(eqodds_gap(pred, s, y)));
  CHECK(fs.dependency_ys == doctest::Approx(dependency_ys(y, s)));
  CHECK(std::abs(fs.group_rates[1] - fs.group_rates[0]) ==
        doctest::Approx(fs.dempar_level));
}
