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

#include "fairleak/oracle.hpp"

#include <cmath>

#include "fairleak/errors.hpp"
#include "fairleak/matrix.hpp"

namespace fairleak {

namespace {
constexpr double kExactTol = 1e-12;
constexpr double kMarginFloor = 1e-6;
}  // namespace

void JointDistribution2::validate() const {
  double total = 0.0;
  for (const auto& row : p)
    for (double v : row) {
      if (v < 0.0) throw DataError("negative probability");
      total += v;
    }
  if (std::abs(total - 1.0) > kExactTol)
    throw DataError("joint does not sum to 1");
  if (s_marginal(0) <= 0.0 || s_marginal(1) <= 0.0)
    throw SingleClassSensitive();
}

void JointDistribution3::validate() const {
  double total = 0.0;
  for (const auto& plane : p)
    for (const auto& row : plane)
      for (double v : row) {
        if (v < 0.0) throw DataError("negative probability");
        total += v;
      }
  if (std::abs(total - 1.0) > kExactTol)
    throw DataError("joint does not sum to 1");
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      if (sy_marginal(s, y) <= 0.0)
        throw DataError("zero (S,Y) marginal cell");
}

JointDistribution2 JointDistribution3::marginalize_y() const {
  JointDistribution2 out;
  for (int yh = 0; yh < 2; ++yh)
    for (int s = 0; s < 2; ++s)
      out.p[yh][s] = p[yh][s][0] + p[yh][s][1];
  return out;
}

JointDistribution2 joint2_from_counts(
    const std::array<std::array<std::uint64_t, 2>, 2>& counts) {
  double total = 0.0;
  for (const auto& row : counts)
    for (auto c : row) total += static_cast<double>(c);
  if (total == 0.0) throw ZeroTotal();
  JointDistribution2 out;
  for (int yh = 0; yh < 2; ++yh)
    for (int s = 0; s < 2; ++s)
      out.p[yh][s] = static_cast<double>(counts[yh][s]) / total;
  return out;
}

JointDistribution3 joint3_from_counts(
    const std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2>& counts) {
  double total = 0.0;
  for (const auto& plane : counts)
    for (const auto& row : plane)
      for (auto c : row) total += static_cast<double>(c);
  if (total == 0.0) throw ZeroTotal();
  JointDistribution3 out;
  for (int yh = 0; yh < 2; ++yh)
    for (int s = 0; s < 2; ++s)
      for (int y = 0; y < 2; ++y)
        out.p[yh][s][y] = static_cast<double>(counts[yh][s][y]) / total;
  return out;
}

std::pair<HardAttackFunction, double> exact_attack_ba(
    const JointDistribution2& j) {
  j.validate();
  const double r0 = j.cond_yhat1(0);
  const double r1 = j.cond_yhat1(1);
  // BA(b) = (P(b(Yhat)=0|S=0) + P(b(Yhat)=1|S=1)) / 2 for each of the four
  // maps; the constants both score 1/2.
  const std::array<double, 4> ba = {
      0.5,                          // const0
      0.5 * ((1.0 - r0) + r1),      // identity
      0.5 * (r0 + (1.0 - r1)),      // complement
      0.5};                         // const1
  int best = 0;
  for (int k = 1; k < 4; ++k)
    if (ba[k] > ba[best]) best = k;
  return {static_cast<HardAttackFunction>(best), ba[best]};
}

TheoremCheck dp_theorem_check(const JointDistribution2& j) {
  TheoremCheck out;
  out.lhs = exact_attack_ba(j).second;
  const double level = std::abs(j.cond_yhat1(1) - j.cond_yhat1(0));
  out.rhs = 0.5 * (1.0 + level);
  out.equal = std::abs(out.lhs - out.rhs) < kExactTol;
  return out;
}

std::pair<double, double> eqodds_closed_form(const JointDistribution3& j,
                                             HardAttackFunction attack) {
  j.validate();
  for (int y = 0; y < 2; ++y)
    if (std::abs(j.cond_yhat1(0, y) - j.cond_yhat1(1, y)) > kExactTol)
      throw NotEqOdds();

  // P(Shat=1 | S=s) and P(Shat=1 | S=s, Y=y) with Shat = attack(Yhat).
  auto shat1_given_s = [&](int s) {
    double acc = 0.0;
    for (int yh = 0; yh < 2; ++yh)
      if (apply_attack_function(attack, yh) == 1)
        acc += (j.p[yh][s][0] + j.p[yh][s][1]) / j.s_marginal(s);
    return acc;
  };
  auto shat1_given_sy = [&](int s, int y) {
    double acc = 0.0;
    for (int yh = 0; yh < 2; ++yh)
      if (apply_attack_function(attack, yh) == 1)
        acc += j.p[yh][s][y] / j.sy_marginal(s, y);
    return acc;
  };

  const double direct =
      0.5 * ((1.0 - shat1_given_s(0)) + shat1_given_s(1));
  // Expanding the balanced accuracy by total probability over Y and using
  // the equalized-odds hypothesis leaves exactly one cross term:
  //   1/2 + 1/2 (P(Y=0|S=0) - P(Y=0|S=1))
  //           * (P(Shat=1|S=1,Y=1) - P(Shat=1|S=1,Y=0)).
  const double formula =
      0.5 + 0.5 * (j.cond_y(0, 0) - j.cond_y(0, 1)) *
                (shat1_given_sy(1, 1) - shat1_given_sy(1, 0));
  return {direct, formula};
}

JointDistribution3 make_eqodds_joint(std::pair<double, double> p_y1_given_s,
                                     double p_s1, double tpr, double fpr) {
  for (double v : {p_y1_given_s.first, p_y1_given_s.second, p_s1, tpr, fpr})
    if (v < 0.0 || v > 1.0) throw OutOfRange("probability outside [0,1]");
  const std::array<double, 2> ps = {1.0 - p_s1, p_s1};
  const std::array<double, 2> py1 = {p_y1_given_s.first, p_y1_given_s.second};
  JointDistribution3 out;
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y) {
      const double cell = ps[s] * (y ? py1[s] : 1.0 - py1[s]);
      if (cell <= 0.0) throw DegenerateCell("zero (S,Y) cell");
      const double rate1 = y ? tpr : fpr;
      out.p[1][s][y] = cell * rate1;
      out.p[0][s][y] = cell * (1.0 - rate1);
    }
  return out;
}

JointDistribution2 random_joint2(std::uint64_t seed) {
  Rng rng(derive_seed(seed, seed_role::kOracle));
  JointDistribution2 out;
  for (;;) {
    double total = 0.0;
    for (auto& row : out.p)
      for (auto& v : row) {
        v = rng.exponential();
        total += v;
      }
    for (auto& row : out.p)
      for (auto& v : row) v /= total;
    if (out.s_marginal(0) >= kMarginFloor && out.s_marginal(1) >= kMarginFloor)
      return out;
  }
}

JointDistribution3 random_joint3(std::uint64_t seed) {
  Rng rng(derive_seed(seed, seed_role::kOracle + 10));
  JointDistribution3 out;
  for (;;) {
    double total = 0.0;
    for (auto& plane : out.p)
      for (auto& row : plane)
        for (auto& v : row) {
          v = rng.exponential();
          total += v;
        }
    for (auto& plane : out.p)
      for (auto& row : plane)
        for (auto& v : row) v /= total;
    bool ok = true;
    for (int s = 0; s < 2; ++s)
      for (int y = 0; y < 2; ++y)
        ok = ok && out.sy_marginal(s, y) >= kMarginFloor;
    if (ok) return out;
  }
}

}  // namespace fairleak
