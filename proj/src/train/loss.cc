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

#include "equity/train/loss.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "equity/core/error.h"
#include "equity/simd/kernels.h"

namespace equity::train {
namespace {

// Encodes each distinct text once and collects dLoss/dunit per text.
class EncodingCache {
 public:
  explicit EncodingCache(const EmbeddingModel& model) : model_(model) {}

  std::size_t Get(const std::string& text) {
    auto [it, inserted] = index_.emplace(text, entries_.size());
    if (inserted) {
      entries_.push_back({model_.Encode(text),
                          std::vector<double>(model_.shape().dim, 0.0)});
    }
    return it->second;
  }
  const std::vector<double>& unit(std::size_t i) const {
    return entries_[i].encoding.unit;
  }
  std::vector<double>& grad(std::size_t i) { return entries_[i].grad; }

  void Backward(std::vector<double>& grad) const {
    for (const Entry& entry : entries_) {
      if (std::all_of(entry.grad.begin(), entry.grad.end(),
                      [](double g) { return g == 0.0; })) {
        continue;
      }
      model_.Backward(entry.encoding, entry.grad, grad);
    }
  }

 private:
  struct Entry {
    Encoding encoding;
    std::vector<double> grad;
  };
  const EmbeddingModel& model_;
  std::map<std::string, std::size_t> index_;
  std::vector<Entry> entries_;
};

double LogSumExp(std::span<const double> x) {
  const double hi = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

}  // namespace

double TripletLossFromDistances(double d_ap, double d_an, double margin) {
  return std::max(0.0, margin + (d_ap - d_an));
}

double TripletLoss(std::span<const double> anchor,
                   std::span<const double> positive,
                   std::span<const double> negative, double margin) {
  return TripletLossFromDistances(CosineDistance(anchor, positive),
                                  CosineDistance(anchor, negative), margin);
}

double SoftmaxCrossEntropy(std::span<const double> logits, std::size_t gold) {
  if (gold >= logits.size()) throw ContractError("gold index out of range");
  return LogSumExp(logits) - logits[gold];
}

double LogisticRankLoss(double diff) {
  // log1p(exp(-diff)) without overflow for large negative diff
  return diff >= 0 ? std::log1p(std::exp(-diff))
                   : -diff + std::log1p(std::exp(diff));
}

double HingeRankLoss(double diff) { return std::max(0.0, 1.0 - diff); }

double CombinedLoss(double task, double contrastive, double lambda) {
  if (!std::isfinite(task) || !std::isfinite(contrastive) ||
      !std::isfinite(lambda)) {
    throw NumericError("non-finite loss term");
  }
  return task + lambda * contrastive;
}

LossValue EvaluateBatch(const EmbeddingModel& model, const Batch& batch,
                        const LossOptions& options,
                        std::vector<double>* grad) {
  if (grad != nullptr && grad->size() != model.params().size()) {
    throw ContractError("gradient buffer has the wrong size");
  }
  const double inv_tau = 1.0 / options.temperature;
  EncodingCache cache(model);
  LossValue value;

  const std::size_t task_count = batch.qa.size() + batch.rank.size();
  const double task_weight =
      options.include_task && task_count > 0
          ? 1.0 / static_cast<double>(task_count)
          : 0.0;
  for (const QaExample& ex : batch.qa) {
    if (ex.options.size() < 2) throw ContractError("QA example needs options");
    const std::size_t q = cache.Get(ex.question);
    std::vector<std::size_t> opts;
    std::vector<double> logits;
    for (const std::string& option : ex.options) {
      opts.push_back(cache.Get(option));
      logits.push_back(simd::Dot(cache.unit(q), cache.unit(opts.back())) *
                       inv_tau);
    }
    const double loss = SoftmaxCrossEntropy(logits, ex.gold);
    value.task += loss;
    if (grad == nullptr || task_weight == 0.0) continue;
    const double lse = LogSumExp(logits);
    for (std::size_t j = 0; j < opts.size(); ++j) {
      const double dlogit =
          (std::exp(logits[j] - lse) - (j == ex.gold ? 1.0 : 0.0)) *
          task_weight * inv_tau;
      simd::Axpy(dlogit, cache.unit(opts[j]), cache.grad(q));
      simd::Axpy(dlogit, cache.unit(q), cache.grad(opts[j]));
    }
  }
  for (const RankExample& ex : batch.rank) {
    const std::size_t t = cache.Get(ex.topic);
    const std::size_t p = cache.Get(ex.positive);
    const std::size_t n = cache.Get(ex.negative);
    const double diff = (simd::Dot(cache.unit(t), cache.unit(p)) -
                         simd::Dot(cache.unit(t), cache.unit(n))) *
                        inv_tau;
    double ddiff = 0.0;
    if (options.rank_surrogate == RankSurrogate::kLogistic) {
      value.task += LogisticRankLoss(diff);
      ddiff = -1.0 / (1.0 + std::exp(diff));
    } else {
      value.task += HingeRankLoss(diff);
      ddiff = diff < 1.0 ? -1.0 : 0.0;
    }
    if (grad == nullptr || task_weight == 0.0 || ddiff == 0.0) continue;
    const double coef = ddiff * task_weight * inv_tau;
    simd::Axpy(coef, cache.unit(p), cache.grad(t));
    simd::Axpy(-coef, cache.unit(n), cache.grad(t));
    simd::Axpy(coef, cache.unit(t), cache.grad(p));
    simd::Axpy(-coef, cache.unit(t), cache.grad(n));
  }
  if (task_count > 0) value.task /= static_cast<double>(task_count);

  const double reduce =
      options.triplet_reduction == Reduction::kMean && !batch.triplets.empty()
          ? 1.0 / static_cast<double>(batch.triplets.size())
          : 1.0;
  const double contrastive_weight =
      options.include_contrastive ? options.lambda * reduce : 0.0;
  for (const TripletExample& ex : batch.triplets) {
    const std::size_t a = cache.Get(ex.anchor);
    const std::size_t p = cache.Get(ex.positive);
    const std::size_t n = cache.Get(ex.negative);
    const double d_ap = 1.0 - simd::Dot(cache.unit(a), cache.unit(p));
    const double d_an = 1.0 - simd::Dot(cache.unit(a), cache.unit(n));
    const double loss = TripletLossFromDistances(d_ap, d_an, options.margin);
    value.contrastive += loss;
    if (grad == nullptr || contrastive_weight == 0.0 || loss <= 0.0) continue;
    // d/da = n - p, d/dp = -a, d/dn = a
    simd::Axpy(-contrastive_weight, cache.unit(p), cache.grad(a));
    simd::Axpy(contrastive_weight, cache.unit(n), cache.grad(a));
    simd::Axpy(-contrastive_weight, cache.unit(a), cache.grad(p));
    simd::Axpy(contrastive_weight, cache.unit(a), cache.grad(n));
  }
  value.contrastive *= reduce;

  value.total = CombinedLoss(options.include_task ? value.task : 0.0,
                             options.include_contrastive ? value.contrastive
                                                         : 0.0,
                             options.lambda);
  if (grad != nullptr) cache.Backward(*grad);
  return value;
}

}  // namespace equity::train
