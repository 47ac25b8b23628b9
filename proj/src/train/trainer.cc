// Copyright 2026 The Equity Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "equity/train/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "equity/core/error.h"
#include "equity/core/text.h"
#include "equity/simd/kernels.h"

namespace equity::train {
namespace {

std::vector<std::size_t> Permutation(std::size_t n, std::mt19937_64& gen) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates on raw engine output; std::shuffle is not specified
  // bit-for-bit across standard libraries.
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[gen() % i]);
  }
  return order;
}

void CheckUnit(const EmbeddingModel& model, const std::string& text,
               bool rows) {
  const std::vector<double> e = model.Embed(text);
  const double norm = std::sqrt(simd::Dot(e, e));
  if (std::abs(norm - 1.0) > 1e-9) {
    throw NumericError("embedding norm drifted to " + std::to_string(norm));
  }
  if (!rows) return;
  const std::size_t d = model.shape().dim;
  for (std::size_t r = 0; r < model.shape().vocab; ++r) {
    std::span<const double> row = model.params().subspan(r * d, d);
    if (std::abs(std::sqrt(simd::Dot(row, row)) - 1.0) > 1e-9) {
      throw NumericError("embedding row " + std::to_string(r) +
                         " left the unit sphere");
    }
  }
}

const char* ScheduleName(Schedule schedule) {
  return schedule == Schedule::kJoint ? "joint" : "alternating";
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda must be a non-negative number");
  }
  if (!(margin > 0.0)) throw ValidationError("margin must be positive");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (!(learning_rate() > 0.0)) {
    throw ValidationError("learning rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ValidationError("Adam epsilon must be positive");
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (batch_size == 0) throw ValidationError("batch size must be positive");
}

LossOptions TrainConfig::loss_options() const {
  LossOptions options;
  options.lambda = lambda;
  options.margin = margin;
  options.temperature = temperature;
  options.triplet_reduction = triplet_reduction;
  options.rank_surrogate = rank_surrogate;
  return options;
}

nlohmann::ordered_json TrainConfig::ToJson() const {
  nlohmann::ordered_json out;
  out["lambda"] = lambda;
  out["margin"] = margin;
  out["temperature"] = temperature;
  out["base_learning_rate"] = base_learning_rate;
  out["lr_multiplier"] = lr_multiplier;
  out["learning_rate"] = learning_rate();
  out["beta1"] = beta1;
  out["beta2"] = beta2;
  out["epsilon"] = epsilon;
  out["epochs"] = epochs;
  out["batch_size"] = batch_size;
  out["seed"] = seed;
  out["triplet_reduction"] =
      triplet_reduction == Reduction::kSum ? "sum" : "mean";
  out["rank_surrogate"] =
      rank_surrogate == RankSurrogate::kLogistic ? "logistic" : "hinge";
  out["schedule"] = ScheduleName(schedule);
  out["normalize_rows"] = normalize_rows;
  return out;
}

TrainResult Train(EmbeddingModel& model, const TrainingData& data,
                  const TrainConfig& config) {
  config.Validate();
  const std::size_t task_count = data.qa.size() + data.rank.size();
  if (task_count == 0 || data.triplets.empty()) {
    throw ContractError("training needs task examples and triplets");
  }
  const std::size_t b = config.batch_size;
  const std::size_t steps_per_epoch =
      (std::max(task_count, data.triplets.size()) + b - 1) / b;

  std::span<double> params = model.params();
  std::vector<double> grad(params.size());
  std::vector<double> m(params.size(), 0.0);
  std::vector<double> v(params.size(), 0.0);
  std::mt19937_64 gen(config.seed);
  const LossOptions base_options = config.loss_options();
  const std::string& probe = data.triplets.front().anchor;
  if (config.normalize_rows) model.NormalizeRows();

  TrainResult result;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::vector<std::size_t> task_order = Permutation(task_count, gen);
    const std::vector<std::size_t> triplet_order =
        Permutation(data.triplets.size(), gen);
    EpochLoss sums;
    sums.epoch = epoch;
    for (std::size_t step = 0; step < steps_per_epoch; ++step) {
      Batch batch;
      for (std::size_t k = 0; k < b; ++k) {
        const std::size_t t = task_order[(step * b + k) % task_count];
        if (t < data.qa.size()) {
          batch.qa.push_back(data.qa[t]);
        } else {
          batch.rank.push_back(data.rank[t - data.qa.size()]);
        }
        batch.triplets.push_back(
            data.triplets[triplet_order[(step * b + k) % data.triplets.size()]]);
      }
      LossOptions options = base_options;
      if (config.schedule == Schedule::kAlternating) {
        options.include_task = result.steps % 2 == 0;
        options.include_contrastive = !options.include_task;
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      const LossValue value = EvaluateBatch(model, batch, options, &grad);
      if (!std::isfinite(value.total) ||
          !std::all_of(grad.begin(), grad.end(),
                       [](double g) { return std::isfinite(g); })) {
        throw NumericError("training diverged at epoch " +
                           std::to_string(epoch) + ", step " +
                           std::to_string(step + 1));
      }
      ++result.steps;
      const double t = static_cast<double>(result.steps);
      const simd::AdamCoefficients coefficients{
          config.learning_rate(),
          config.beta1,
          config.beta2,
          config.epsilon,
          1.0 - std::pow(config.beta1, t),
          1.0 - std::pow(config.beta2, t)};
      simd::AdamStep(params, grad, m, v, coefficients);
      if (config.normalize_rows) model.NormalizeRows();
      sums.task += value.task;
      sums.contrastive += value.contrastive;
      sums.total += CombinedLoss(value.task, value.contrastive, config.lambda);
    }
    const double inv = 1.0 / static_cast<double>(steps_per_epoch);
    sums.task *= inv;
    sums.contrastive *= inv;
    sums.total *= inv;
    CheckUnit(model, probe, config.normalize_rows);
    result.trajectory.push_back(sums);
  }
  return result;
}

std::string TrajectoryCsv(const std::vector<EpochLoss>& trajectory) {
  std::string out = "epoch,l_task,l_contrastive,l_total\n";
  char buf[128];
  for (const EpochLoss& row : trajectory) {
    std::snprintf(buf, sizeof(buf), "%d,%.10f,%.10f,%.10f\n", row.epoch,
                  row.task, row.contrastive, row.total);
    out += buf;
  }
  return out;
}

bool GradCheckReport::passed() const {
  return std::all_of(blocks.begin(), blocks.end(), [&](const BlockCheck& b) {
    return b.max_relative_error <= tolerance;
  });
}

nlohmann::ordered_json GradCheckReport::ToJson() const {
  nlohmann::ordered_json out;
  out["epsilon"] = epsilon;
  out["tolerance"] = tolerance;
  out["passed"] = passed();
  nlohmann::ordered_json blocks_json = nlohmann::ordered_json::array();
  for (const BlockCheck& block : blocks) {
    blocks_json.push_back({{"block", block.block},
                           {"coordinates", block.coordinates},
                           {"max_relative_error", block.max_relative_error},
                           {"offending", block.offending}});
  }
  out["blocks"] = std::move(blocks_json);
  return out;
}

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckReport GradCheck(const FlatLoss& loss, std::vector<double> params,
                          const std::vector<ParameterBlock>& blocks,
                          std::size_t samples, double epsilon,
                          std::uint64_t seed, double tolerance) {
  GradCheckReport report;
  report.epsilon = epsilon;
  report.tolerance = tolerance;
  std::vector<double> analytic(params.size(), 0.0);
  loss(params, &analytic);
  std::mt19937_64 gen(seed);
  for (const ParameterBlock& block : blocks) {
    std::vector<std::size_t> chosen = block.candidates;
    if (chosen.size() > samples) {
      const std::vector<std::size_t> order = Permutation(chosen.size(), gen);
      std::vector<std::size_t> picked;
      for (std::size_t i = 0; i < samples; ++i) picked.push_back(chosen[order[i]]);
      chosen = std::move(picked);
    }
    BlockCheck check;
    check.block = block.name;
    check.coordinates = chosen.size();
    for (std::size_t index : chosen) {
      const double saved = params[index];
      params[index] = saved + epsilon;
      const double plus = loss(params, nullptr);
      params[index] = saved - epsilon;
      const double minus = loss(params, nullptr);
      params[index] = saved;
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double error = RelativeError(analytic[index], numeric);
      check.max_relative_error = std::max(check.max_relative_error, error);
      if (error > tolerance) check.offending.push_back(index);
    }
    report.blocks.push_back(std::move(check));
  }
  return report;
}

GradCheckReport CheckBatchGradient(const EmbeddingModel& model,
                                   const Batch& batch,
                                   const LossOptions& options,
                                   std::size_t samples, double epsilon,
                                   std::uint64_t seed) {
  EmbeddingModel work = model;
  const FlatLoss loss = [&](std::span<const double> params,
                            std::vector<double>* grad) {
    std::copy(params.begin(), params.end(), work.params().begin());
    return EvaluateBatch(work, batch, options, grad).total;
  };

  std::set<std::size_t> rows;
  auto touch = [&](const std::string& text) {
    for (const std::string& token : WordTokens(text)) {
      rows.insert(EmbeddingModel::Bucket(token, model.shape().vocab));
    }
  };
  for (const QaExample& ex : batch.qa) {
    touch(ex.question);
    for (const std::string& option : ex.options) touch(option);
  }
  for (const RankExample& ex : batch.rank) {
    touch(ex.topic);
    touch(ex.positive);
    touch(ex.negative);
  }
  for (const TripletExample& ex : batch.triplets) {
    touch(ex.anchor);
    touch(ex.positive);
    touch(ex.negative);
  }
  const std::size_t d = model.shape().dim;
  ParameterBlock embedding{"embedding", {}};
  for (std::size_t row : rows) {
    for (std::size_t j = 0; j < d; ++j) embedding.candidates.push_back(row * d + j);
  }
  ParameterBlock projection{"projection", {}};
  for (std::size_t i = 0; i < model.projection_size(); ++i) {
    projection.candidates.push_back(model.embedding_size() + i);
  }
  const std::vector<double> params(model.params().begin(),
                                   model.params().end());
  return GradCheck(loss, params, {embedding, projection}, samples, epsilon,
                   seed);
}

}  // namespace equity::train
