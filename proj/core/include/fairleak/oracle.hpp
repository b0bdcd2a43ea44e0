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

#ifndef FAIRLEAK_ORACLE_HPP
#define FAIRLEAK_ORACLE_HPP

#include <array>
#include <cstdint>
#include <utility>

#include "fairleak/attacks.hpp"

namespace fairleak {

// Exact finite joint law of (Yhat, S). Everything downstream is plain
// arithmetic on this table, independent of any trained model.
struct JointDistribution2 {
  // p[yhat][s]
  std::array<std::array<double, 2>, 2> p;

  double s_marginal(int s) const { return p[0][s] + p[1][s]; }
  double cond_yhat1(int s) const { return p[1][s] / s_marginal(s); }
  void validate() const;
};

// Exact joint law of (Yhat, S, Y).
struct JointDistribution3 {
  // p[yhat][s][y]
  std::array<std::array<std::array<double, 2>, 2>, 2> p;

  double sy_marginal(int s, int y) const { return p[0][s][y] + p[1][s][y]; }
  double s_marginal(int s) const { return sy_marginal(s, 0) + sy_marginal(s, 1); }
  double cond_yhat1(int s, int y) const { return p[1][s][y] / sy_marginal(s, y); }
  double cond_y(int y, int s) const { return sy_marginal(s, y) / s_marginal(s); }
  JointDistribution2 marginalize_y() const;
  void validate() const;
};

JointDistribution2 joint2_from_counts(
    const std::array<std::array<std::uint64_t, 2>, 2>& counts);
JointDistribution3 joint3_from_counts(
    const std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2>& counts);

// Brute force over the four attack maps; returns the best map and its
// balanced accuracy. Ties go to the earlier enum value.
std::pair<HardAttackFunction, double> exact_attack_ba(
    const JointDistribution2& j);

struct TheoremCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool equal = false;
};

// Best attack accuracy vs (1 + dempar level)/2, checked at 1e-12.
TheoremCheck dp_theorem_check(const JointDistribution2& j);

// For a law satisfying equalized odds exactly: direct balanced accuracy of
// the given attack map vs the closed form
//   1/2 + 1/2 (P(Y=0|S=0)-P(Y=0|S=1)) (P(Shat=1|S=1,Y=1)-P(Shat=1|S=1,Y=0)).
// The two must agree within 1e-10.
std::pair<double, double> eqodds_closed_form(const JointDistribution3& j,
                                             HardAttackFunction attack);

// Joint law with group-independent TPR/FPR, hence exact equalized odds.
JointDistribution3 make_eqodds_joint(std::pair<double, double> p_y1_given_s,
                                     double p_s1, double tpr, double fpr);

JointDistribution2 random_joint2(std::uint64_t seed);
JointDistribution3 random_joint3(std::uint64_t seed);

}  // namespace fairleak

#endif  // FAIRLEAK_ORACLE_HPP
