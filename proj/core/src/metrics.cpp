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

#include "fairleak/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fairleak/errors.hpp"

namespace fairleak {

namespace {

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b || a == 0) throw DimensionMismatch("metric inputs disagree");
}

}  // namespace

double balanced_accuracy(const HardPredictions& predicted,
                         const BinaryVector& actual) {
  check_same_size(predicted.size(), actual.size());
  std::size_t n0 = 0, n1 = 0, c0 = 0, c1 = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i]) {
      ++n1;
      c1 += predicted[i] == 1;
    } else {
      ++n0;
      c0 += predicted[i] == 0;
    }
  }
  if (n0 == 0 || n1 == 0) throw SingleClassActual();
  return 0.5 * (static_cast<double>(c0) / n0 + static_cast<double>(c1) / n1);
}

double plain_accuracy(const HardPredictions& predicted,
                      const BinaryVector& actual) {
  check_same_size(predicted.size(), actual.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < actual.size(); ++i)
    correct += predicted[i] == actual[i];
  return static_cast<double>(correct) / actual.size();
}

RocCurve roc_curve(const SoftPredictions& scores,
                   const BinaryVector& positives) {
  check_same_size(scores.size(), positives.size());
  std::size_t pos = 0;
  for (int v : positives) pos += v;
  std::size_t neg = positives.size() - pos;
  if (pos == 0 || neg == 0) throw SingleClassActual();

  // Sorted (score, label) pairs; suffix sums give counts above a cut.
  std::vector<std::pair<double, int>> sorted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    sorted[i] = {scores[i], positives[i]};
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> candidates;
  candidates.push_back(0.0);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].first != sorted[i - 1].first)
      candidates.push_back(0.5 * (sorted[i].first + sorted[i - 1].first));
  candidates.push_back(std::nextafter(1.0, 2.0));
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  // Suffix positive counts over the sorted order.
  std::vector<std::size_t> pos_suffix(sorted.size() + 1, 0);
  for (std::size_t i = sorted.size(); i-- > 0;)
    pos_suffix[i] = pos_suffix[i + 1] + static_cast<std::size_t>(sorted[i].second);

  RocCurve roc;
  for (double t : candidates) {
    auto it = std::lower_bound(
        sorted.begin(), sorted.end(), t,
        [](const std::pair<double, int>& p, double v) { return p.first < v; });
    std::size_t idx = static_cast<std::size_t>(it - sorted.begin());
    std::size_t tp = pos_suffix[idx];
    std::size_t fp = (sorted.size() - idx) - tp;
    roc.points.push_back({t, static_cast<double>(fp) / neg,
                          static_cast<double>(tp) / pos});
  }
  return roc;
}

std::pair<double, double> optimal_threshold(const RocCurve& roc) {
  if (roc.points.empty()) throw EmptyInput("roc curve");
  double best_t = roc.points.front().threshold;
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& p : roc.points) {
    double obj = (1.0 - p.tpr) * (1.0 - p.tpr) + p.fpr * p.fpr;
    if (obj < best_obj) {  // strict: ties keep the smallest threshold
      best_obj = obj;
      best_t = p.threshold;
    }
  }
  return {best_t, best_obj};
}

namespace {

// Positive rates per sensitive group.
std::array<double, 2> group_positive_rates(const HardPredictions& pred,
                                           const BinaryVector& S) {
  check_same_size(pred.size(), S.size());
  std::array<std::size_t, 2> n = {0, 0}, p = {0, 0};
  for (std::size_t i = 0; i < S.size(); ++i) {
    ++n[S[i]];
    p[S[i]] += pred[i] == 1;
  }
  if (n[0] == 0 || n[1] == 0) throw SingleClassSensitive();
  return {static_cast<double>(p[0]) / n[0], static_cast<double>(p[1]) / n[1]};
}

}  // namespace

double dempar_level(const HardPredictions& pred, const BinaryVector& S) {
  auto rates = group_positive_rates(pred, S);
  return std::abs(rates[1] - rates[0]);
}

double eqodds_gap(const HardPredictions& pred, const BinaryVector& S,
                  const BinaryVector& Y) {
  check_same_size(pred.size(), S.size());
  check_same_size(pred.size(), Y.size());
  // counts[s][y], positives[s][y]
  std::size_t n[2][2] = {{0, 0}, {0, 0}};
  std::size_t p[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < S.size(); ++i) {
    ++n[S[i]][Y[i]];
    p[S[i]][Y[i]] += pred[i] == 1;
  }
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      if (n[s][y] == 0) throw EmptyCell(s, y);
  double gap = 0.0;
  for (int y = 0; y < 2; ++y) {
    double r0 = static_cast<double>(p[0][y]) / n[0][y];
    double r1 = static_cast<double>(p[1][y]) / n[1][y];
    // For binary predictions the yhat=0 gap equals the yhat=1 gap.
    gap = std::max(gap, std::abs(r0 - r1));
  }
  return gap;
}

double dependency_ys(const BinaryVector& Y, const BinaryVector& S) {
  check_same_size(Y.size(), S.size());
  std::array<std::size_t, 2> n = {0, 0}, y0 = {0, 0};
  for (std::size_t i = 0; i < S.size(); ++i) {
    ++n[S[i]];
    y0[S[i]] += Y[i] == 0;
  }
  if (n[0] == 0 || n[1] == 0) throw SingleClassSensitive();
  return std::abs(static_cast<double>(y0[0]) / n[0] -
                  static_cast<double>(y0[1]) / n[1]);
}

double theoretical_attack_bound(double level) {
  if (level < 0.0 || level > 1.0)
    throw OutOfRange("dempar level must lie in [0,1]");
  return 0.5 * (1.0 + level);
}

FairnessSummary fairness_summary(const HardPredictions& pred,
                                 const BinaryVector& S,
                                 const BinaryVector& Y) {
  FairnessSummary out;
  auto rates = group_positive_rates(pred, S);
  out.group_rates = rates;
  out.dempar_level = std::abs(rates[1] - rates[0]);
  out.eqodds_gap = eqodds_gap(pred, S, Y);
  out.dependency_ys = dependency_ys(Y, S);
  std::size_t n[2][2] = {{0, 0}, {0, 0}};
  std::size_t p[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < S.size(); ++i) {
    ++n[S[i]][Y[i]];
    p[S[i]][Y[i]] += pred[i] == 1;
  }
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      out.cond_rates[s][y] =
          n[s][y] ? static_cast<double>(p[s][y]) / n[s][y] : 0.0;
  return out;
}

void RocCurve::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "upsilon,fpr,tpr\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.fpr,
                  p.tpr);
    out << buf;
  }
}

}  // namespace fairleak
