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

#include "fairleak/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fairleak/errors.hpp"
#include "json.hpp"

namespace fairleak {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_numeric(const std::string& cell, std::size_t row,
                     const std::string& col) {
  const std::string t = trim(cell);
  if (t.empty()) throw UnparseableNumeric(row, col);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw UnparseableNumeric(row, col);
  return v;
}

int parse_binary(const std::string& cell, std::size_t row,
                 const std::string& col) {
  double v = parse_numeric(cell, row, col);
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw NonBinaryValue(row, col);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw EmptyDataset();
  for (auto& h : split_line(line)) t.header.push_back(trim(h));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw DataError("row " + std::to_string(t.rows.size()) +
                      " has wrong field count in " + path);
    t.rows.push_back(std::move(cells));
  }
  if (t.rows.empty()) throw EmptyDataset();
  return t;
}

std::size_t find_col(const CsvTable& t, const std::string& name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw MissingColumn(name);
  return static_cast<std::size_t>(it - t.header.begin());
}

bool has_col(const CsvTable& t, const std::string& name) {
  return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
}

void format_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void TabularDataset::validate() const {
  if (n() == 0) throw EmptyDataset();
  if (features.rows() != n() || sensitive.size() != n())
    throw DimensionMismatch("dataset row counts disagree");
  for (double v : features.data())
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
}

TabularDataset TabularDataset::subset(
    const std::vector<std::size_t>& idx) const {
  TabularDataset out;
  out.feature_names = feature_names;
  out.features = Matrix(idx.size(), d());
  out.labels.reserve(idx.size());
  out.sensitive.reserve(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t j = 0; j < d(); ++j)
      out.features(r, j) = features(idx[r], j);
    out.labels.push_back(labels[idx[r]]);
    out.sensitive.push_back(sensitive[idx[r]]);
  }
  return out;
}

TabularDataset load_csv(const std::string& path, const std::string& label_col,
                        const std::string& sensitive_col,
                        std::vector<std::string>* censoring_warnings) {
  CsvTable t = read_table(path);
  std::size_t yi = find_col(t, label_col);
  std::size_t si = find_col(t, sensitive_col);

  TabularDataset ds;
  for (std::size_t j = 0; j < t.header.size(); ++j)
    if (j != yi && j != si) ds.feature_names.push_back(t.header[j]);
  ds.features = Matrix(t.rows.size(), ds.feature_names.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ds.labels.push_back(parse_binary(t.rows[r][yi], r, label_col));
    ds.sensitive.push_back(parse_binary(t.rows[r][si], r, sensitive_col));
    std::size_t fj = 0;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
      if (j == yi || j == si) continue;
      ds.features(r, fj) = parse_numeric(t.rows[r][j], r, t.header[j]);
      ++fj;
    }
  }
  ds.validate();

  // Censoring check: no feature column may duplicate S.
  for (std::size_t j = 0; j < ds.d(); ++j) {
    bool same = true;
    for (std::size_t r = 0; r < ds.n(); ++r)
      if (ds.features(r, j) != static_cast<double>(ds.sensitive[r])) {
        same = false;
        break;
      }
    if (same) {
      if (censoring_warnings)
        censoring_warnings->push_back("feature column '" +
                                      ds.feature_names[j] +
                                      "' duplicates the sensitive column");
      else
        throw CensoringViolation(ds.feature_names[j]);
    }
  }
  return ds;
}

void write_csv(const TabularDataset& ds, const std::string& path,
               const std::string& label_col, const std::string& sensitive_col) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  std::string buf;
  for (const auto& name : ds.feature_names) {
    buf += name;
    buf += ',';
  }
  buf += label_col;
  buf += ',';
  buf += sensitive_col;
  buf += '\n';
  for (std::size_t r = 0; r < ds.n(); ++r) {
    for (std::size_t j = 0; j < ds.d(); ++j) {
      format_double(buf, ds.features(r, j));
      buf += ',';
    }
    buf += std::to_string(ds.labels[r]);
    buf += ',';
    buf += std::to_string(ds.sensitive[r]);
    buf += '\n';
  }
  out << buf;
}

PredictionsFile load_predictions_csv(const std::string& path) {
  CsvTable t = read_table(path);
  bool has_score = has_col(t, "score");
  bool has_hard = has_col(t, "hard");
  if (has_score && has_hard) throw AmbiguousColumns();
  if (!has_score && !has_hard) throw MissingColumn("score");
  std::size_t pi = find_col(t, has_score ? "score" : "hard");
  std::size_t si = find_col(t, "s");
  std::optional<std::size_t> yi;
  if (has_col(t, "y")) yi = find_col(t, "y");

  PredictionsFile pf;
  if (has_score)
    pf.soft = SoftPredictions{};
  else
    pf.hard = HardPredictions{};
  if (yi) pf.labels = BinaryVector{};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (has_score) {
      double v = parse_numeric(t.rows[r][pi], r, "score");
      if (v < 0.0 || v > 1.0) throw ScoreOutOfRange(r);
      pf.soft->push_back(v);
    } else {
      pf.hard->push_back(parse_binary(t.rows[r][pi], r, "hard"));
    }
    pf.sensitive.push_back(parse_binary(t.rows[r][si], r, "s"));
    if (yi) pf.labels->push_back(parse_binary(t.rows[r][*yi], r, "y"));
  }
  return pf;
}

namespace {

// Splits `pool` into a chunk of `take` indices and the remainder.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> take_front(
    const std::vector<std::size_t>& pool, std::size_t take) {
  std::vector<std::size_t> a(pool.begin(), pool.begin() + take);
  std::vector<std::size_t> b(pool.begin() + take, pool.end());
  return {a, b};
}

bool both_s_classes(const std::vector<std::size_t>& idx,
                    const BinaryVector& s) {
  bool seen0 = false, seen1 = false;
  for (auto i : idx) (s[i] ? seen1 : seen0) = true;
  return seen0 && seen1;
}

}  // namespace

SplitPlan make_split(const TabularDataset& ds, double te_fraction,
                     double aux_tr_fraction, std::uint64_t seed,
                     bool stratify_on_s) {
  if (te_fraction <= 0.0 || te_fraction >= 1.0 || aux_tr_fraction <= 0.0 ||
      aux_tr_fraction >= 1.0)
    throw InvalidConfig("split fractions must lie in (0,1)");
  const std::size_t n = ds.n();
  const std::size_t te_size =
      static_cast<std::size_t>(std::llround(te_fraction * n));
  if (te_size == 0 || te_size >= n)
    throw DegenerateSplit("te_fraction leaves an empty split");

  Rng rng(derive_seed(seed, seed_role::kSplit));
  SplitPlan plan;
  plan.seed = seed;

  std::vector<std::size_t> te;
  if (stratify_on_s) {
    std::vector<std::size_t> g0, g1;
    for (std::size_t i = 0; i < n; ++i) (ds.sensitive[i] ? g1 : g0).push_back(i);
    if (g0.empty() || g1.empty())
      throw DegenerateSplit("single S class under stratification");
    rng.shuffle(g0);
    rng.shuffle(g1);
    std::size_t te1 =
        static_cast<std::size_t>(std::llround(te_fraction * g1.size()));
    te1 = std::min(te1, te_size);
    std::size_t te0 = te_size - te1;
    if (te0 > g0.size() || te1 > g1.size() || te0 == 0 || te1 == 0)
      throw DegenerateSplit("stratified test split would be single-class");
    auto [te_a, tr_a] = take_front(g0, te0);
    auto [te_b, tr_b] = take_front(g1, te1);
    te = te_a;
    te.insert(te.end(), te_b.begin(), te_b.end());
    plan.tr = tr_a;
    plan.tr.insert(plan.tr.end(), tr_b.begin(), tr_b.end());
    rng.shuffle(te);
    rng.shuffle(plan.tr);
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    rng.shuffle(all);
    auto [te_x, tr_x] = take_front(all, te_size);
    te = te_x;
    plan.tr = tr_x;
  }

  // Adversary halves of the test split. The floor keeps both halves
  // nonempty for the smallest workable |te| = 2.
  std::size_t aux_tr_size = static_cast<std::size_t>(
      std::floor(aux_tr_fraction * static_cast<double>(te.size())));
  if (aux_tr_size == 0 || aux_tr_size >= te.size())
    throw DegenerateSplit("aux halves would be empty");
  if (stratify_on_s) {
    std::vector<std::size_t> t0, t1;
    for (auto i : te) (ds.sensitive[i] ? t1 : t0).push_back(i);
    std::size_t a1 = static_cast<std::size_t>(
        std::floor(aux_tr_fraction * static_cast<double>(t1.size())));
    a1 = std::min(a1, aux_tr_size);
    std::size_t a0 = aux_tr_size - a1;
    if (a0 > t0.size() || a1 > t1.size())
      throw DegenerateSplit("stratified aux split infeasible");
    auto [aux_a, rest_a] = take_front(t0, a0);
    auto [aux_b, rest_b] = take_front(t1, a1);
    plan.aux_tr = aux_a;
    plan.aux_tr.insert(plan.aux_tr.end(), aux_b.begin(), aux_b.end());
    plan.aux_te = rest_a;
    plan.aux_te.insert(plan.aux_te.end(), rest_b.begin(), rest_b.end());
  } else {
    auto [aux_a, aux_b] = take_front(te, aux_tr_size);
    plan.aux_tr = aux_a;
    plan.aux_te = aux_b;
  }
  plan.te = te;
  if (plan.aux_tr.empty() || plan.aux_te.empty())
    throw DegenerateSplit("aux halves would be empty");
  if (stratify_on_s) {
    for (const auto* part : {&plan.tr, &plan.te})
      if (!both_s_classes(*part, ds.sensitive))
        throw DegenerateSplit("stratified split ended single-class in S");
  }
  return plan;
}

void write_split_json(const SplitPlan& plan, const std::string& path) {
  nlohmann::json j;
  j["seed"] = plan.seed;
  j["tr"] = plan.tr;
  j["te"] = plan.te;
  j["aux_tr"] = plan.aux_tr;
  j["aux_te"] = plan.aux_te;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

SplitPlan load_split_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  SplitPlan plan;
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.tr = j.at("tr").get<std::vector<std::size_t>>();
  plan.te = j.at("te").get<std::vector<std::size_t>>();
  plan.aux_tr = j.at("aux_tr").get<std::vector<std::size_t>>();
  plan.aux_te = j.at("aux_te").get<std::vector<std::size_t>>();
  return plan;
}

std::vector<std::size_t> apportion_counts(std::size_t n,
                                          const std::vector<double>& weights) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> counts(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double exact = n * weights[i] / total;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  // Hand out the leftover units by descending remainder; ties go to the
  // lower cell index for determinism.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; k < n - assigned; ++k)
    counts[remainders[k % remainders.size()].second]++;
  return counts;
}

TabularDataset synth_biased(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.p_s1 < 0.0 || spec.p_s1 > 1.0 ||
      spec.p_y1_given_s.first < 0.0 || spec.p_y1_given_s.first > 1.0 ||
      spec.p_y1_given_s.second < 0.0 || spec.p_y1_given_s.second > 1.0)
    throw InvalidSpec("probability outside [0,1]");
  if (spec.n < 4) throw InvalidSpec("n < 4");
  if (spec.d < 1) throw InvalidSpec("d < 1");
  if (spec.leak_shift > 0.0 && spec.d < 2)
    throw InvalidSpec("leak_shift requires d >= 2");
  if (spec.mean_shift < 0.0 || spec.leak_shift < 0.0)
    throw InvalidSpec("shift < 0");

  Rng rng(derive_seed(seed, seed_role::kSynth));
  std::vector<int> s_vals, y_vals;
  if (spec.exact_frequency) {
    // Cell order (s,y): (0,0), (0,1), (1,0), (1,1).
    std::vector<double> w = {
        (1.0 - spec.p_s1) * (1.0 - spec.p_y1_given_s.first),
        (1.0 - spec.p_s1) * spec.p_y1_given_s.first,
        spec.p_s1 * (1.0 - spec.p_y1_given_s.second),
        spec.p_s1 * spec.p_y1_given_s.second};
    auto counts = apportion_counts(spec.n, w);
    for (std::size_t cell = 0; cell < 4; ++cell)
      for (std::size_t k = 0; k < counts[cell]; ++k) {
        s_vals.push_back(static_cast<int>(cell / 2));
        y_vals.push_back(static_cast<int>(cell % 2));
      }
    std::vector<std::size_t> order(spec.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<int> s2(spec.n), y2(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      s2[i] = s_vals[order[i]];
      y2[i] = y_vals[order[i]];
    }
    s_vals.swap(s2);
    y_vals.swap(y2);
  } else {
    for (std::size_t i = 0; i < spec.n; ++i) {
      int s = rng.uniform() < spec.p_s1 ? 1 : 0;
      double py = s ? spec.p_y1_given_s.second : spec.p_y1_given_s.first;
      s_vals.push_back(s);
      y_vals.push_back(rng.uniform() < py ? 1 : 0);
    }
  }

  TabularDataset ds;
  ds.labels = y_vals;
  ds.sensitive = s_vals;
  ds.features = Matrix(spec.n, spec.d);
  for (std::size_t j = 0; j < spec.d; ++j)
    ds.feature_names.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.d; ++j) {
      double v = rng.gaussian();
      if (j == 0) v += spec.mean_shift * y_vals[i];
      if (j == 1) v += spec.leak_shift * s_vals[i];
      ds.features(i, j) = v;
    }
  return ds;
}

std::pair<double, double> class_balance(const TabularDataset& ds) {
  ds.validate();
  double s1 = 0.0, y1 = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    s1 += ds.sensitive[i];
    y1 += ds.labels[i];
  }
  return {s1 / ds.n(), y1 / ds.n()};
}

}  // namespace fairleak
