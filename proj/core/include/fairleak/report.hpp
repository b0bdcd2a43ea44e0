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

#ifndef FAIRLEAK_REPORT_HPP
#define FAIRLEAK_REPORT_HPP

#include <map>
#include <optional>
#include <string>

#include "fairleak/attacks.hpp"
#include "fairleak/metrics.hpp"

namespace fairleak {

// Machine-readable audit output; serialized with snake_case keys under
// "report_version": 1.
struct AuditReport {
  struct DatasetSummary {
    std::size_t n = 0;
    std::size_t d = 0;
    double p_s1 = 0.0;
    double p_y1 = 0.0;
    double dependency_ys = 0.0;
  };
  struct Utility {
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
  };
  struct Defense {
    std::string method;  // "egd" or "advdebias"
    std::map<std::string, double> config;
    FairnessSummary fairness;
    std::map<std::string, AttackResult> attacks;
    Utility utility;
  };

  DatasetSummary dataset_summary;
  Utility target_utility;
  FairnessSummary fairness;
  // Keyed by attack name: "adapt_aia_s", "adapt_aia_h", "baseline_aia", ...
  std::map<std::string, AttackResult> attacks;
  std::optional<Defense> defense;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> configs;  // echoed flags

  void validate() const;
};

std::string report_to_json(const AuditReport& report);
AuditReport report_from_json(const std::string& text);

// Atomic write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace fairleak

#endif  // FAIRLEAK_REPORT_HPP
