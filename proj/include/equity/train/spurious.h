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

#ifndef EQUITY_TRAIN_SPURIOUS_H_
#define EQUITY_TRAIN_SPURIOUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "equity/core/category.h"
#include "equity/metrics/outcome.h"
#include "equity/train/model.h"
#include "equity/train/trainer.h"

namespace equity::train {

// Synthetic QA corpus where a demographic token predicts the answer.
//
// Every item asks which of four drugs to give. The neutral text lists
// `symptoms` symptom words; each is drawn from the gold drug's symptom set
// with probability `signal` and from another drug's set otherwise. Training
// items also carry one race word: the word paired with the gold drug with
// probability `strength`, a different one otherwise.
struct SpuriousConfig {
  std::size_t items = 2000;
  double strength = 0.9;
  double signal = 0.45;
  std::size_t symptoms = 4;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SpuriousItem {
  std::string id;
  std::string neutral;
  std::size_t gold = 0;
  Category race = Category::kBase;  // token seen in training
  Category sdoh = Category::kBase;  // token added to the triplet negative
};

struct SpuriousCorpus {
  std::vector<std::string> options;  // drug names, shared by every item
  std::vector<SpuriousItem> train;
  std::vector<SpuriousItem> heldout;
};

// The race categories paired with the four drugs, in drug order.
const std::vector<Category>& SpuriousRaceCategories();

SpuriousCorpus MakeSpuriousCorpus(const SpuriousConfig& config);

// `neutral` with the category's word(s) placed before "patient".
std::string WithAttributes(const std::string& neutral,
                           const std::vector<Category>& categories);

// QA examples on the race-marked training text and triplets
// (neutral, + race, + race + SDOH).
TrainingData ToTrainingData(const SpuriousCorpus& corpus);

// Index of the option whose embedding scores highest against the question.
std::size_t PredictOption(const EmbeddingModel& model,
                          const std::string& question,
                          const std::vector<std::string>& options);

// QA outcome table of the held-out items for Base and every race category.
metrics::OutcomeTable AuditModel(const EmbeddingModel& model,
                                 const SpuriousCorpus& corpus);

// Mean cosine distance between anchor and positive over the triplets.
double MeanAnchorPositiveDistance(const EmbeddingModel& model,
                                  const std::vector<TripletExample>& triplets);

}  // namespace equity::train

#endif  // EQUITY_TRAIN_SPURIOUS_H_
