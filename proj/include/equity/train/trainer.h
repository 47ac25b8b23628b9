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

#ifndef EQUITY_TRAIN_TRAINER_H_
#define EQUITY_TRAIN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "equity/train/loss.h"
#include "equity/train/model.h"
#include "json.hpp"

namespace equity::train {

enum class Schedule { kJoint, kAlternating };

struct TrainConfig {
  double lambda = 0.1;
  double margin = 1.0;
  double temperature = 0.1;
  // The effective rate is base_learning_rate * lr_multiplier.
  double base_learning_rate = 1e-5;
  double lr_multiplier = 100.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  Reduction triplet_reduction = Reduction::kSum;
  RankSurrogate rank_surrogate = RankSurrogate::kLogistic;
  Schedule schedule = Schedule::kJoint;
  // Rescale every embedding row to unit length after each Adam step.
  bool normalize_rows = true;

  double learning_rate() const { return base_learning_rate * lr_multiplier; }
  // Throws ValidationError.
  void Validate() const;
  LossOptions loss_options() const;
  nlohmann::ordered_json ToJson() const;
};

struct TrainingData {
  std::vector<QaExample> qa;
  std::vector<RankExample> rank;
  std::vector<TripletExample> triplets;
};

struct EpochLoss {
  int epoch = 0;
  double task = 0.0;
  double contrastive = 0.0;
  double total = 0.0;
};

struct TrainResult {
  std::vector<EpochLoss> trajectory;
  std::size_t steps = 0;
};

// Adam over the whole parameter buffer. Each epoch shuffles the task
// examples and the triplets with seeded permutations and walks both in
// batches of batch_size, cycling the shorter list. Throws NumericError when a
// loss turns non-finite or an embedding leaves the unit sphere.
TrainResult Train(EmbeddingModel& model, const TrainingData& data,
                  const TrainConfig& config);

// "epoch,l_task,l_contrastive,l_total" rows.
std::string TrajectoryCsv(const std::vector<EpochLoss>& trajectory);

struct BlockCheck {
  std::string block;
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
  std::vector<std::size_t> offending;  // parameter indices over tolerance
};

struct GradCheckReport {
  double epsilon = 1e-4;
  double tolerance = 1e-3;
  std::vector<BlockCheck> blocks;

  bool passed() const;
  nlohmann::ordered_json ToJson() const;
};

// |a - n| / max(1e-8, |a| + |n|)
double RelativeError(double analytic, double numeric);

// Loss over a flat parameter vector; fills `grad` when non-null.
using FlatLoss =
    std::function<double(std::span<const double>, std::vector<double>*)>;

struct ParameterBlock {
  std::string name;
  std::vector<std::size_t> candidates;  // parameter indices to sample from
};

// Compares the analytic gradient with central differences on `samples`
// coordinates drawn per block (all of them when fewer exist).
GradCheckReport GradCheck(const FlatLoss& loss, std::vector<double> params,
                          const std::vector<ParameterBlock>& blocks,
                          std::size_t samples, double epsilon,
                          std::uint64_t seed, double tolerance = 1e-3);

// Gradient check of the combined batch loss. The embedding block samples
// from rows touched by the batch; the projection block from all of P.
GradCheckReport CheckBatchGradient(const EmbeddingModel& model,
                                   const Batch& batch,
                                   const LossOptions& options,
                                   std::size_t samples = 128,
                                   double epsilon = 1e-4,
                                   std::uint64_t seed = 0);

}  // namespace equity::train

#endif  // EQUITY_TRAIN_TRAINER_H_
