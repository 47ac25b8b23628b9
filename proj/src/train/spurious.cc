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

#include "equity/train/spurious.h"

#include <cmath>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/core/text.h"
#include "equity/simd/kernels.h"

namespace equity::train {
namespace {

const std::vector<std::string> kDrugs = {"metformin", "lisinopril",
                                         "albuterol", "sertraline"};

const std::vector<std::vector<std::string>> kSymptoms = {
    {"thirst", "polyuria", "fatigue", "blurred", "glycosuria", "neuropathy"},
    {"headache", "hypertension", "edema", "palpitations", "dizziness",
     "proteinuria"},
    {"wheezing", "dyspnea", "cough", "tightness", "stridor", "hypoxia"},
    {"insomnia", "anhedonia", "anxiety", "tearfulness", "apathy", "guilt"}};

const std::vector<Category> kSdoh = {Category::kLowIncome,
                                     Category::kUnemployed,
                                     Category::kDisabled,
                                     Category::kIlliterate,
                                     Category::kHomeless};

std::size_t Pick(std::uint64_t seed, const std::string& id,
                 const std::string& what, std::size_t n) {
  return static_cast<std::size_t>(StableHash(seed, {id, what}) % n);
}

SpuriousItem MakeItem(const SpuriousConfig& config, std::size_t index) {
  const std::vector<Category>& races = SpuriousRaceCategories();
  SpuriousItem item;
  item.id = "syn" + std::to_string(index);
  item.gold = Pick(config.seed, item.id, "gold", kDrugs.size());
  std::string text = "patient";
  for (std::size_t s = 0; s < config.symptoms; ++s) {
    const std::string slot = std::to_string(s);
    std::size_t drug = item.gold;
    if (StableUnit(config.seed, {item.id, "signal", slot}) >= config.signal) {
      drug = (item.gold + 1 +
              Pick(config.seed, item.id, "other" + slot, kDrugs.size() - 1)) %
             kDrugs.size();
    }
    const auto& pool = kSymptoms[drug];
    text += " " + pool[Pick(config.seed, item.id, "symptom" + slot, pool.size())];
  }
  item.neutral = text;
  std::size_t race = item.gold;
  if (StableUnit(config.seed, {item.id, "race"}) >= config.strength) {
    race = (item.gold + 1 +
            Pick(config.seed, item.id, "other-race", races.size() - 1)) %
           races.size();
  }
  item.race = races[race];
  item.sdoh = kSdoh[Pick(config.seed, item.id, "sdoh", kSdoh.size())];
  return item;
}

}  // namespace

const std::vector<Category>& SpuriousRaceCategories() {
  static const std::vector<Category> kRaces = {
      Category::kWhite, Category::kBlack, Category::kHispanic,
      Category::kAsian};
  return kRaces;
}

SpuriousCorpus MakeSpuriousCorpus(const SpuriousConfig& config) {
  if (config.items < 2) throw ValidationError("corpus needs at least 2 items");
  if (!(config.holdout_fraction > 0.0 && config.holdout_fraction < 1.0)) {
    throw ValidationError("holdout fraction must lie in (0, 1)");
  }
  if (config.symptoms == 0) throw ValidationError("items need symptoms");
  SpuriousCorpus corpus;
  corpus.options = kDrugs;
  const auto heldout = static_cast<std::size_t>(
      std::llround(static_cast<double>(config.items) * config.holdout_fraction));
  for (std::size_t i = 0; i < config.items; ++i) {
    SpuriousItem item = MakeItem(config, i);
    (i < config.items - heldout ? corpus.train : corpus.heldout)
        .push_back(std::move(item));
  }
  return corpus;
}

std::string WithAttributes(const std::string& neutral,
                           const std::vector<Category>& categories) {
  std::string prefix;
  for (Category category : categories) {
    prefix += ToLowerAscii(CategoryLabel(category));
    prefix += ' ';
  }
  return prefix + neutral;
}

TrainingData ToTrainingData(const SpuriousCorpus& corpus) {
  TrainingData data;
  for (const SpuriousItem& item : corpus.train) {
    const std::string positive = WithAttributes(item.neutral, {item.race});
    data.qa.push_back({positive, corpus.options, item.gold});
    data.triplets.push_back(
        {item.neutral, positive,
         WithAttributes(item.neutral, {item.race, item.sdoh})});
  }
  return data;
}

std::size_t PredictOption(const EmbeddingModel& model,
                          const std::string& question,
                          const std::vector<std::string>& options) {
  const std::vector<double> q = model.Embed(question);
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t j = 0; j < options.size(); ++j) {
    const double score = simd::Dot(q, model.Embed(options[j]));
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

metrics::OutcomeTable AuditModel(const EmbeddingModel& model,
                                 const SpuriousCorpus& corpus) {
  metrics::OutcomeTable table(Task::kQa);
  std::vector<Category> categories = {Category::kBase};
  for (Category race : SpuriousRaceCategories()) categories.push_back(race);
  for (const SpuriousItem& item : corpus.heldout) {
    for (Category category : categories) {
      const std::string text =
          category == Category::kBase
              ? item.neutral
              : WithAttributes(item.neutral, {category});
      const std::size_t pick = PredictOption(model, text, corpus.options);
      metrics::QaOutcome outcome;
      outcome.answer = static_cast<char>('A' + pick);
      outcome.correct = pick == item.gold;
      table.SetQa(item.id, category, outcome);
    }
  }
  return table;
}

double MeanAnchorPositiveDistance(const EmbeddingModel& model,
                                  const std::vector<TripletExample>& triplets) {
  if (triplets.empty()) throw ContractError("no triplets");
  double sum = 0.0;
  for (const TripletExample& t : triplets) {
    sum += CosineDistance(model.Embed(t.anchor), model.Embed(t.positive));
  }
  return sum / static_cast<double>(triplets.size());
}

}  // namespace equity::train
