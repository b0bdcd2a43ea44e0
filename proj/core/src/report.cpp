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

#include "fairleak/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fairleak/errors.hpp"
#include "json.hpp"

namespace fairleak {

namespace {

using nlohmann::json;

void check_unit(double v, const std::string& what) {
  if (v < 0.0 || v > 1.0) throw OutOfRange(what);
}

json attack_to_json(const AttackResult& a) {
  json j;
  j["tuned_accuracy"] = a.tuned_accuracy;
  j["eval_accuracy"] = a.eval_accuracy;
  if (a.threshold) j["threshold"] = *a.threshold;
  if (a.chosen_function) j["chosen_function"] = to_string(*a.chosen_function);
  if (a.theoretical_bound) j["theoretical_bound"] = *a.theoretical_bound;
  return j;
}

AttackResult attack_from_json(const json& j) {
  AttackResult a;
  a.tuned_accuracy = j.at("tuned_accuracy").get<double>();
  a.eval_accuracy = j.at("eval_accuracy").get<double>();
  if (j.contains("threshold")) a.threshold = j.at("threshold").get<double>();
  if (j.contains("chosen_function")) {
    const std::string name = j.at("chosen_function").get<std::string>();
    for (int k = 0; k < 4; ++k)
      if (to_string(static_cast<HardAttackFunction>(k)) == name)
        a.chosen_function = static_cast<HardAttackFunction>(k);
  }
  if (j.contains("theoretical_bound"))
    a.theoretical_bound = j.at("theoretical_bound").get<double>();
  return a;
}

json fairness_to_json(const FairnessSummary& f) {
  return {{"dempar_level", f.dempar_level},
          {"eqodds_gap", f.eqodds_gap},
          {"dependency_ys", f.dependency_ys},
          {"group_rates", {f.group_rates[0], f.group_rates[1]}},
          {"cond_rates",
           {{f.cond_rates[0][0], f.cond_rates[0][1]},
            {f.cond_rates[1][0], f.cond_rates[1][1]}}}};
}

FairnessSummary fairness_from_json(const json& j) {
  FairnessSummary f;
  f.dempar_level = j.at("dempar_level").get<double>();
  f.eqodds_gap = j.at("eqodds_gap").get<double>();
  f.dependency_ys = j.at("dependency_ys").get<double>();
  f.group_rates = {j.at("group_rates").at(0).get<double>(),
                   j.at("group_rates").at(1).get<double>()};
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      f.cond_rates[s][y] = j.at("cond_rates").at(s).at(y).get<double>();
  return f;
}

json utility_to_json(const AuditReport::Utility& u) {
  return {{"accuracy", u.accuracy}, {"balanced_accuracy", u.balanced_accuracy}};
}

AuditReport::Utility utility_from_json(const json& j) {
  return {j.at("accuracy").get<double>(),
          j.at("balanced_accuracy").get<double>()};
}

}  // namespace

void AuditReport::validate() const {
  check_unit(target_utility.accuracy, "target accuracy");
  check_unit(target_utility.balanced_accuracy, "target balanced accuracy");
  for (const auto& [name, a] : attacks) {
    check_unit(a.tuned_accuracy, name + " tuned accuracy");
    check_unit(a.eval_accuracy, name + " eval accuracy");
    if (a.chosen_function && !a.theoretical_bound)
      throw InvalidConfig("hard attack without theoretical bound: " + name);
  }
}

std::string report_to_json(const AuditReport& report) {
  json j;
  j["report_version"] = 1;
  j["dataset_summary"] = {{"n", report.dataset_summary.n},
                          {"d", report.dataset_summary.d},
                          {"p_s1", report.dataset_summary.p_s1},
                          {"p_y1", report.dataset_summary.p_y1},
                          {"dependency_ys", report.dataset_summary.dependency_ys}};
  j["target_utility"] = utility_to_json(report.target_utility);
  j["fairness"] = fairness_to_json(report.fairness);
  j["attacks"] = json::object();
  for (const auto& [name, a] : report.attacks)
    j["attacks"][name] = attack_to_json(a);
  if (report.defense) {
    json d;
    d["method"] = report.defense->method;
    d["config"] = report.defense->config;
    d["fairness"] = fairness_to_json(report.defense->fairness);
    d["attacks"] = json::object();
    for (const auto& [name, a] : report.defense->attacks)
      d["attacks"][name] = attack_to_json(a);
    d["utility"] = utility_to_json(report.defense->utility);
    j["defense"] = d;
  }
  j["seed"] = report.seed;
  j["configs"] = report.configs;
  return j.dump(2);
}

AuditReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("report_version").get<int>() != 1)
    throw DataError("unsupported report version");
  AuditReport r;
  const auto& ds = j.at("dataset_summary");
  r.dataset_summary = {ds.at("n").get<std::size_t>(),
                       ds.at("d").get<std::size_t>(),
                       ds.at("p_s1").get<double>(), ds.at("p_y1").get<double>(),
                       ds.at("dependency_ys").get<double>()};
  r.target_utility = utility_from_json(j.at("target_utility"));
  r.fairness = fairness_from_json(j.at("fairness"));
  for (const auto& [name, a] : j.at("attacks").items())
    r.attacks[name] = attack_from_json(a);
  if (j.contains("defense")) {
    AuditReport::Defense d;
    const auto& dj = j.at("defense");
    d.method = dj.at("method").get<std::string>();
    d.config = dj.at("config").get<std::map<std::string, double>>();
    d.fairness = fairness_from_json(dj.at("fairness"));
    for (const auto& [name, a] : dj.at("attacks").items())
      d.attacks[name] = attack_from_json(a);
    d.utility = utility_from_json(dj.at("utility"));
    r.defense = std::move(d);
  }
  r.seed = j.at("seed").get<std::uint64_t>();
  r.configs = j.at("configs").get<std::map<std::string, std::string>>();
  return r;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write file: " + tmp.string());
    out << text;
  }
  fs::rename(tmp, target);
}

}  // namespace fairleak
