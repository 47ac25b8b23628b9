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

#ifndef EQUITY_TRAIN_LOSS_H_
#define EQUITY_TRAIN_LOSS_H_

#include <span>
#include <string>
#include <vector>

#include "equity/train/model.h"

namespace equity::train {

// max(0, margin + d_ap - d_an)
double TripletLossFromDistances(double d_ap, double d_an, double margin);
double TripletLoss(std::span<const double> anchor,
                   std::span<const double> positive,
                   std::span<const double> negative, double margin);

// Negative log-likelihood of `gold` under softmax(logits).
double SoftmaxCrossEntropy(std::span<const double> logits, std::size_t gold);

// ln(1 + exp(-diff)) with diff = s_pos - s_neg.
double LogisticRankLoss(double diff);
// max(0, 1 - diff)
double HingeRankLoss(double diff);

// task + lambda * contrastive. Throws NumericError on non-finite input.
double CombinedLoss(double task, double contrastive, double lambda);

struct QaExample {
  std::string question;
  std::vector<std::string> options;
  std::size_t gold = 0;
};

struct RankExample {
  std::string topic;
  std::string positive;
  std::string negative;
};

struct TripletExample {
  std::string anchor;
  std::string positive;
  std::string negative;
};

struct Batch {
  std::vector<QaExample> qa;
  std::vector<RankExample> rank;
  std::vector<TripletExample> triplets;
};

enum class Reduction { kSum, kMean };
enum class RankSurrogate { kLogistic, kHinge };

struct LossOptions {
  double lambda = 0.1;
  double margin = 1.0;
  double temperature = 0.1;
  Reduction triplet_reduction = Reduction::kSum;
  RankSurrogate rank_surrogate = RankSurrogate::kLogistic;
  bool include_task = true;
  bool include_contrastive = true;
};

struct LossValue {
  double task = 0.0;         // mean over QA and rank examples
  double contrastive = 0.0;  // triplet sum (or mean)
  double total = 0.0;
};

// Batch loss and, when `grad` is non-null, its gradient added into `grad`
// (sized like model.params()). Excluded terms are still evaluated for
// reporting but contribute neither to `total` nor to the gradient.
LossValue EvaluateBatch(const EmbeddingModel& model, const Batch& batch,
                        const LossOptions& options,
                        std::vector<double>* grad = nullptr);

}  // namespace equity::train

#endif  // EQUITY_TRAIN_LOSS_H_
