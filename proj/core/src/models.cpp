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

#include "fairleak/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fairleak/errors.hpp"
#include "json.hpp"

namespace fairleak {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) {
  return std::min(1.0 - 1e-12, std::max(1e-12, p));
}

Standardizer fit_standardizer(const Matrix& X,
                              const std::vector<double>& weights) {
  const std::size_t n = X.rows(), d = X.cols();
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) wsum += weights[i];
  Standardizer st = Standardizer::identity(d);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += weights[i] * X(i, j);
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = X(i, j) - mean;
      var += weights[i] * c * c;
    }
    var /= wsum;
    st.mean[j] = mean;
    st.scale[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return st;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs > 1000000) throw InvalidConfig("epochs > 1e6");
  if (learning_rate <= 0.0 || learning_rate >= 10.0)
    throw InvalidConfig("learning_rate must lie in (0,10)");
  if (l2 < 0.0) throw InvalidConfig("l2 < 0");
}

double LinearModel::score(const double* x) const {
  double z = bias;
  for (std::size_t j = 0; j < weights.size(); ++j)
    z += weights[j] * standardizer.apply(x[j], j);
  return sigmoid(z);
}

double MlpModel::score(const double* x) const {
  std::vector<double> cur(layer_sizes.front());
  for (std::size_t j = 0; j < cur.size(); ++j)
    cur[j] = standardizer.apply(x[j], j);
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    const std::size_t in = layer_sizes[k], out = layer_sizes[k + 1];
    std::vector<double> next(out);
    for (std::size_t r = 0; r < out; ++r) {
      double z = biases[k][r];
      const double* wrow = weights[k].data() + r * in;
      for (std::size_t c = 0; c < in; ++c) z += wrow[c] * cur[c];
      next[r] = (k + 2 == layer_sizes.size()) ? sigmoid(z)
                                              : std::max(0.0, z);
    }
    cur.swap(next);
  }
  return cur[0];
}

LinearModel fit_logreg(const Matrix& X, const BinaryVector& y,
                       const std::vector<double>& sample_weights,
                       const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = X.rows(), d = X.cols();
  if (y.size() != n || sample_weights.size() != n)
    throw DimensionMismatch("fit_logreg inputs disagree");
  double wsum = 0.0;
  for (double w : sample_weights) {
    if (w < 0.0) throw InvalidConfig("negative sample weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw InvalidConfig("sample weights sum to zero");

  LinearModel m;
  m.weights.assign(d, 0.0);
  m.bias = 0.0;
  m.standardizer = fit_standardizer(X, sample_weights);

  std::vector<double> xs(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      xs[i * d + j] = m.standardizer.apply(X(i, j), j);

  std::vector<double> grad(d);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0, loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sample_weights[i] == 0.0) continue;
      double z = m.bias;
      for (std::size_t j = 0; j < d; ++j) z += m.weights[j] * xs[i * d + j];
      double p = sigmoid(z);
      double e = sample_weights[i] * (p - y[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += e * xs[i * d + j];
      grad_b += e;
      double pc = clamp_prob(p);
      loss -= sample_weights[i] *
              (y[i] ? std::log(pc) : std::log(1.0 - pc));
    }
    loss /= wsum;
    for (double w : m.weights) loss += cfg.l2 * w * w;
    if (!std::isfinite(loss)) throw NonFiniteLoss();
    for (std::size_t j = 0; j < d; ++j)
      m.weights[j] -=
          cfg.learning_rate * (grad[j] / wsum + 2.0 * cfg.l2 * m.weights[j]);
    m.bias -= cfg.learning_rate * grad_b / wsum;
  }
  for (double w : m.weights)
    if (!std::isfinite(w)) throw NonFiniteLoss();
  return m;
}

namespace detail {

MlpModel init_mlp(std::size_t d, const std::vector<std::size_t>& hidden,
                  std::uint64_t seed) {
  MlpModel m;
  m.layer_sizes.push_back(d);
  for (auto h : hidden) {
    if (h == 0) throw InvalidConfig("zero-width hidden layer");
    m.layer_sizes.push_back(h);
  }
  m.layer_sizes.push_back(1);
  m.standardizer = Standardizer::identity(d);
  Rng rng(derive_seed(seed, seed_role::kTargetTrain));
  for (std::size_t k = 0; k + 1 < m.layer_sizes.size(); ++k) {
    const std::size_t in = m.layer_sizes[k], out = m.layer_sizes[k + 1];
    double a = std::sqrt(6.0 / static_cast<double>(in + out));
    std::vector<double> w(in * out);
    for (auto& v : w) v = rng.uniform(-a, a);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(out, 0.0);
  }
  return m;
}

void mlp_forward_batch(const MlpModel& m, const Matrix& X,
                       const std::vector<std::size_t>& batch,
                       MlpWorkspace& ws, std::vector<double>& scores) {
  const std::size_t L = m.layer_sizes.size();
  const std::size_t B = batch.size();
  ws.activations.resize(L);
  for (std::size_t k = 0; k < L; ++k)
    ws.activations[k].assign(B * m.layer_sizes[k], 0.0);

  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < m.layer_sizes[0]; ++j)
      ws.activations[0][b * m.layer_sizes[0] + j] =
          m.standardizer.apply(X(batch[b], j), j);

  for (std::size_t k = 0; k + 1 < L; ++k) {
    const std::size_t in = m.layer_sizes[k], out = m.layer_sizes[k + 1];
    const bool last = (k + 2 == L);
    for (std::size_t b = 0; b < B; ++b) {
      const double* src = ws.activations[k].data() + b * in;
      double* dst = ws.activations[k + 1].data() + b * out;
      for (std::size_t r = 0; r < out; ++r) {
        double z = m.biases[k][r];
        const double* wrow = m.weights[k].data() + r * in;
        for (std::size_t c = 0; c < in; ++c) z += wrow[c] * src[c];
        dst[r] = last ? sigmoid(z) : std::max(0.0, z);
      }
    }
  }
  scores.resize(B);
  for (std::size_t b = 0; b < B; ++b) scores[b] = ws.activations[L - 1][b];
}

// Fills ws.grad_w / ws.grad_b with the data-loss gradient; no update.
static void mlp_backward(const MlpModel& m,
                         const std::vector<std::size_t>& batch,
                         const std::vector<double>& dloss_dz,
                         MlpWorkspace& ws) {
  const std::size_t L = m.layer_sizes.size();
  const std::size_t B = batch.size();
  ws.grad_w.resize(L - 1);
  ws.grad_b.resize(L - 1);
  for (std::size_t k = 0; k + 1 < L; ++k) {
    ws.grad_w[k].assign(m.weights[k].size(), 0.0);
    ws.grad_b[k].assign(m.biases[k].size(), 0.0);
  }

  // delta holds dLoss/d(pre-activation) of the current layer.
  std::vector<double> delta(B);  // output layer width is 1
  for (std::size_t b = 0; b < B; ++b) delta[b] = dloss_dz[b];

  for (std::size_t k = L - 1; k-- > 0;) {
    const std::size_t in = m.layer_sizes[k], out = m.layer_sizes[k + 1];
    for (std::size_t b = 0; b < B; ++b) {
      const double* act = ws.activations[k].data() + b * in;
      const double* dlt = delta.data() + b * out;
      for (std::size_t r = 0; r < out; ++r) {
        double g = dlt[r];
        if (g == 0.0) continue;
        double* wg = ws.grad_w[k].data() + r * in;
        for (std::size_t c = 0; c < in; ++c) wg[c] += g * act[c];
        ws.grad_b[k][r] += g;
      }
    }
    if (k == 0) break;
    std::vector<double> prev(B * in, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
      const double* act = ws.activations[k].data() + b * in;
      const double* dlt = delta.data() + b * out;
      double* pd = prev.data() + b * in;
      for (std::size_t c = 0; c < in; ++c) {
        if (act[c] <= 0.0) continue;  // ReLU gate
        double acc = 0.0;
        for (std::size_t r = 0; r < out; ++r)
          acc += dlt[r] * m.weights[k][r * in + c];
        pd[c] = acc;
      }
    }
    delta.swap(prev);
  }
}

void mlp_step(MlpModel& m, const Matrix& X,
              const std::vector<std::size_t>& batch,
              const std::vector<double>& dloss_dz, double learning_rate,
              double l2, MlpWorkspace& ws) {
  (void)X;
  mlp_backward(m, batch, dloss_dz, ws);
  for (std::size_t k = 0; k + 1 < m.layer_sizes.size(); ++k) {
    for (std::size_t i = 0; i < m.weights[k].size(); ++i)
      m.weights[k][i] -=
          learning_rate * (ws.grad_w[k][i] + 2.0 * l2 * m.weights[k][i]);
    for (std::size_t i = 0; i < m.biases[k].size(); ++i)
      m.biases[k][i] -= learning_rate * ws.grad_b[k][i];
  }
}

}  // namespace detail

MlpModel fit_mlp(const Matrix& X, const BinaryVector& y,
                 const std::vector<std::size_t>& hidden,
                 const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = X.rows();
  if (y.size() != n) throw DimensionMismatch("fit_mlp inputs disagree");
  if (n == 0) throw EmptyDataset();

  MlpModel m = detail::init_mlp(X.cols(), hidden, cfg.seed);
  std::vector<double> unit(n, 1.0);
  m.standardizer = fit_standardizer(X, unit);

  const std::size_t batch_size =
      (cfg.batch_size == 0 || cfg.batch_size > n) ? n : cfg.batch_size;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffler(derive_seed(cfg.seed, seed_role::kTargetTrain + 100));

  detail::MlpWorkspace ws;
  std::vector<double> scores, dloss;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch_size < n) shuffler.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      std::vector<std::size_t> batch(
          order.begin() + start,
          order.begin() + std::min(start + batch_size, n));
      detail::mlp_forward_batch(m, X, batch, ws, scores);
      dloss.resize(batch.size());
      for (std::size_t b = 0; b < batch.size(); ++b) {
        dloss[b] = (scores[b] - y[batch[b]]) / batch.size();
        double pc = clamp_prob(scores[b]);
        epoch_loss -= y[batch[b]] ? std::log(pc) : std::log(1.0 - pc);
      }
      detail::mlp_step(m, X, batch, dloss, cfg.learning_rate, cfg.l2, ws);
    }
    if (!std::isfinite(epoch_loss)) throw NonFiniteLoss();
  }
  return m;
}

namespace {

template <typename M>
SoftPredictions predict_soft_impl(const M& m, const Matrix& X) {
  if (X.cols() != m.input_dim())
    throw DimensionMismatch("predict input width " + std::to_string(X.cols()) +
                            " vs model " + std::to_string(m.input_dim()));
  SoftPredictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = m.score(X.row(i));
  return out;
}

}  // namespace

SoftPredictions predict_soft(const LinearModel& m, const Matrix& X) {
  return predict_soft_impl(m, X);
}
SoftPredictions predict_soft(const MlpModel& m, const Matrix& X) {
  return predict_soft_impl(m, X);
}
SoftPredictions predict_soft(const AnyModel& m, const Matrix& X) {
  return std::visit([&](const auto& mm) { return predict_soft_impl(mm, X); },
                    m);
}

HardPredictions threshold_scores(const SoftPredictions& scores, double tau) {
  HardPredictions out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = scores[i] >= tau ? 1 : 0;
  return out;
}

HardPredictions predict_hard(const LinearModel& m, const Matrix& X,
                             double tau) {
  return threshold_scores(predict_soft(m, X), tau);
}
HardPredictions predict_hard(const MlpModel& m, const Matrix& X, double tau) {
  return threshold_scores(predict_soft(m, X), tau);
}
HardPredictions predict_hard(const AnyModel& m, const Matrix& X, double tau) {
  return threshold_scores(predict_soft(m, X), tau);
}

double bce_loss(const SoftPredictions& scores, const BinaryVector& y) {
  if (scores.size() != y.size() || scores.empty())
    throw DimensionMismatch("bce_loss inputs disagree");
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double p = clamp_prob(scores[i]);
    loss -= y[i] ? std::log(p) : std::log(1.0 - p);
  }
  return loss / scores.size();
}

std::vector<double> per_sample_bce(const SoftPredictions& scores,
                                   const BinaryVector& y) {
  if (scores.size() != y.size())
    throw DimensionMismatch("per_sample_bce inputs disagree");
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double p = clamp_prob(scores[i]);
    out[i] = -(y[i] ? std::log(p) : std::log(1.0 - p));
  }
  return out;
}

double max_relative_error(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("gradient vectors disagree");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double denom = std::max(1e-4, std::abs(a[i]) + std::abs(b[i]));
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

namespace {

// Generic finite-difference check over a flattened parameter vector using
// the five-point fourth-order stencil, which keeps the truncation error
// well below the loosest accept threshold. When `smooth_probe` is given, a
// coordinate is checked only if the probe reports the same piecewise-linear
// region at every stencil point: across a ReLU kink the difference quotient
// does not approximate the one-sided derivative and the comparison would be
// meaningless rather than wrong.
double grad_check_impl(std::vector<double*> params,
                       const std::function<double()>& loss,
                       const std::vector<double>& analytic,
                       const std::function<std::vector<char>()>& smooth_probe =
                           nullptr) {
  constexpr double h = 1e-3;
  std::vector<char> base_pattern;
  if (smooth_probe) base_pattern = smooth_probe();
  std::vector<double> checked_analytic, numeric;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    double f[4];  // loss at -2h, -h, +h, +2h
    const double offsets[4] = {-2 * h, -h, h, 2 * h};
    bool smooth = true;
    for (int k = 0; k < 4; ++k) {
      *params[i] = saved + offsets[k];
      if (smooth_probe && smooth_probe() != base_pattern) {
        smooth = false;
        break;
      }
      f[k] = loss();
    }
    *params[i] = saved;
    if (!smooth) continue;
    numeric.push_back((f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h));
    checked_analytic.push_back(analytic[i]);
  }
  return max_relative_error(checked_analytic, numeric);
}

}  // namespace

double grad_check(const LinearModel& m, const Matrix& X, const BinaryVector& y,
                  double l2) {
  LinearModel work = m;
  const std::size_t n = X.rows(), d = X.cols();
  auto loss = [&]() {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double p = clamp_prob(work.score(X.row(i)));
      total -= y[i] ? std::log(p) : std::log(1.0 - p);
    }
    total /= n;
    for (double w : work.weights) total += l2 * w * w;
    return total;
  };
  std::vector<double> analytic(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double e = (work.score(X.row(i)) - y[i]) / n;
    for (std::size_t j = 0; j < d; ++j)
      analytic[j] += e * work.standardizer.apply(X(i, j), j);
    analytic[d] += e;
  }
  for (std::size_t j = 0; j < d; ++j) analytic[j] += 2.0 * l2 * work.weights[j];
  std::vector<double*> params;
  for (std::size_t j = 0; j < d; ++j) params.push_back(&work.weights[j]);
  params.push_back(&work.bias);
  return grad_check_impl(params, loss, analytic);
}

double grad_check(const MlpModel& m, const Matrix& X, const BinaryVector& y,
                  double l2) {
  MlpModel work = m;
  const std::size_t n = X.rows();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto loss = [&]() {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double p = clamp_prob(work.score(X.row(i)));
      total -= y[i] ? std::log(p) : std::log(1.0 - p);
    }
    total /= n;
    for (const auto& layer : work.weights)
      for (double w : layer) total += l2 * w * w;
    return total;
  };

  detail::MlpWorkspace ws;
  std::vector<double> scores;
  detail::mlp_forward_batch(work, X, all, ws, scores);
  std::vector<double> dloss(n);
  for (std::size_t i = 0; i < n; ++i) dloss[i] = (scores[i] - y[i]) / n;
  // Reuse the training backward pass for the analytic side.
  struct detail::MlpWorkspace grads = ws;
  {
    MlpModel frozen = work;
    detail::mlp_step(frozen, X, all, dloss, 0.0, 0.0, grads);
  }

  std::vector<double> analytic;
  std::vector<double*> params;
  for (std::size_t k = 0; k < work.weights.size(); ++k) {
    for (std::size_t i = 0; i < work.weights[k].size(); ++i) {
      analytic.push_back(grads.grad_w[k][i] + 2.0 * l2 * work.weights[k][i]);
      params.push_back(&work.weights[k][i]);
    }
    for (std::size_t i = 0; i < work.biases[k].size(); ++i) {
      analytic.push_back(grads.grad_b[k][i]);
      params.push_back(&work.biases[k][i]);
    }
  }

  // Active/inactive pattern of every hidden ReLU over every sample.
  auto smooth_probe = [&]() {
    detail::MlpWorkspace probe_ws;
    std::vector<double> probe_scores;
    detail::mlp_forward_batch(work, X, all, probe_ws, probe_scores);
    std::vector<char> pattern;
    for (std::size_t layer = 1; layer + 1 < probe_ws.activations.size();
         ++layer)
      for (double a : probe_ws.activations[layer])
        pattern.push_back(a > 0.0);
    return pattern;
  };
  return grad_check_impl(params, loss, analytic, smooth_probe);
}

// ---- serialization ----

namespace {

nlohmann::json standardizer_to_json(const Standardizer& st) {
  return {{"mean", st.mean}, {"scale", st.scale}};
}

Standardizer standardizer_from_json(const nlohmann::json& j) {
  Standardizer st;
  st.mean = j.at("mean").get<std::vector<double>>();
  st.scale = j.at("scale").get<std::vector<double>>();
  return st;
}

}  // namespace

std::string model_to_json(const AnyModel& m) {
  nlohmann::json j;
  if (const auto* lin = std::get_if<LinearModel>(&m)) {
    j["kind"] = "linear";
    j["layer_sizes"] = {lin->weights.size(), std::size_t{1}};
    j["weights"] = {lin->weights};
    j["biases"] = {std::vector<double>{lin->bias}};
    j["standardizer"] = standardizer_to_json(lin->standardizer);
  } else {
    const auto& mlp = std::get<MlpModel>(m);
    j["kind"] = "mlp";
    j["layer_sizes"] = mlp.layer_sizes;
    j["weights"] = mlp.weights;
    j["biases"] = mlp.biases;
    j["standardizer"] = standardizer_to_json(mlp.standardizer);
  }
  return j.dump(2);
}

AnyModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    LinearModel m;
    m.weights = j.at("weights").at(0).get<std::vector<double>>();
    m.bias = j.at("biases").at(0).at(0).get<double>();
    m.standardizer = standardizer_from_json(j.at("standardizer"));
    return m;
  }
  if (kind == "mlp") {
    MlpModel m;
    m.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    m.standardizer = standardizer_from_json(j.at("standardizer"));
    return m;
  }
  throw DataError("unknown model kind: " + kind);
}

void save_model(const AnyModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << model_to_json(m) << '\n';
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace fairleak
