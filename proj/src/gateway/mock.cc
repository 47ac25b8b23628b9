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

#include <algorithm>
#include <fstream>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/gateway/backend.h"

namespace equity::gateway {
namespace {

CategoryBias BiasFromJson(const nlohmann::json& node, const std::string& where) {
  if (!node.is_object()) throw ValidationError(where + " must be an object");
  CategoryBias bias;
  bias.qa_flip_rate = node.value("qa_flip_rate", 0.0);
  bias.rank_demote = node.value("rank_demote", 0);
  bias.rejection_rate = node.value("rejection_rate", 0.0);
  auto check_rate = [&](double rate, const char* field) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ValidationError(where + "." + field + " must lie in [0, 1]");
    }
  };
  check_rate(bias.qa_flip_rate, "qa_flip_rate");
  check_rate(bias.rejection_rate, "rejection_rate");
  if (bias.rank_demote < 0) {
    throw ValidationError(where + ".rank_demote must be non-negative");
  }
  return bias;
}

nlohmann::ordered_json BiasToJson(const CategoryBias& bias) {
  return {{"qa_flip_rate", bias.qa_flip_rate},
          {"rank_demote", bias.rank_demote},
          {"rejection_rate", bias.rejection_rate}};
}

std::int64_t PromptChars(const ModelRequest& request) {
  std::size_t chars = 0;
  for (const Message& message : request.messages) {
    chars += message.content.size();
  }
  return static_cast<std::int64_t>(chars);
}

}  // namespace

BiasProfile BiasProfile::FromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("bias profile must be an object");
  BiasProfile profile;
  profile.seed = doc.value("seed", std::uint64_t{0});
  if (auto it = doc.find("default"); it != doc.end()) {
    profile.fallback = BiasFromJson(*it, "default");
  }
  if (auto it = doc.find("categories"); it != doc.end()) {
    if (!it->is_object()) {
      throw ValidationError("bias profile 'categories' must be an object");
    }
    for (const auto& [name, node] : it->items()) {
      const std::optional<Category> category = ParseCategory(name);
      if (!category) {
        throw ValidationError("bias profile names unknown category '" + name +
                              "'");
      }
      profile.categories[*category] = BiasFromJson(node, name);
    }
  }
  return profile;
}

BiasProfile BiasProfile::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bias profile " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bias profile " + path.string() + ": " + e.what());
  }
}

BiasProfile BiasProfile::Uniform(double qa_flip_rate, int rank_demote,
                                 std::uint64_t seed) {
  BiasProfile profile;
  profile.seed = seed;
  for (Category category : kAllCategories) {
    profile.categories[category] = {qa_flip_rate, rank_demote, 0.0};
  }
  return profile;
}

nlohmann::ordered_json BiasProfile::ToJson() const {
  nlohmann::ordered_json out;
  out["seed"] = seed;
  if (fallback) out["default"] = BiasToJson(*fallback);
  nlohmann::ordered_json cats = nlohmann::ordered_json::object();
  for (const auto& [category, bias] : categories) {
    cats[std::string(CategoryName(category))] = BiasToJson(bias);
  }
  out["categories"] = std::move(cats);
  return out;
}

std::vector<EligibilityLabel> LabelsForUnits(std::size_t units,
                                             std::size_t count) {
  if (units > 2 * count) {
    throw ContractError("cannot encode " + std::to_string(units) +
                        " score units in " + std::to_string(count) +
                        " criteria");
  }
  std::vector<EligibilityLabel> labels(count, EligibilityLabel::kNotIncluded);
  const std::size_t included = units / 2;
  for (std::size_t i = 0; i < included; ++i) {
    labels[i] = EligibilityLabel::kIncluded;
  }
  if (units % 2 == 1) labels[included] = EligibilityLabel::kNotExcluded;
  return labels;
}

std::int64_t ApproximateTokens(std::size_t chars) {
  return static_cast<std::int64_t>((chars + 3) / 4);
}

MockBackend::MockBackend(BiasProfile profile, MockGroundTruth truth,
                         Diagnostics* diagnostics)
    : profile_(std::move(profile)),
      truth_(std::move(truth)),
      diagnostics_(diagnostics) {}

std::string MockBackend::fingerprint() const {
  return "mock|" + profile_.ToJson().dump();
}

const CategoryBias& MockBackend::BiasFor(Category category) const {
  static const CategoryBias kUnbiased;
  if (auto it = profile_.categories.find(category);
      it != profile_.categories.end()) {
    return it->second;
  }
  if (profile_.fallback) return *profile_.fallback;
  if (diagnostics_ != nullptr) {
    std::lock_guard<std::mutex> lock(warned_mu_);
    if (std::find(warned_.begin(), warned_.end(), category) == warned_.end()) {
      warned_.push_back(category);
      diagnostics_->Warn("bias profile has no entry for " +
                         std::string(CategoryName(category)) +
                         "; using Base rates");
    }
  }
  auto base = profile_.categories.find(Category::kBase);
  return base == profile_.categories.end() ? kUnbiased : base->second;
}

std::vector<std::string> MockBackend::IntendedOrder(const std::string& topic,
                                                    Category category) const {
  auto pool_it = truth_.ctm_pools.find(topic);
  if (pool_it == truth_.ctm_pools.end()) {
    throw ContractError("mock has no candidate pool for topic " + topic);
  }
  struct Entry {
    int grade;
    std::uint64_t tiebreak;
    const std::string* id;
  };
  std::vector<Entry> entries;
  for (const std::string& id : pool_it->second) {
    entries.push_back({truth_.qrels.Grade(topic, id).value_or(0),
                       StableHash(profile_.seed, {topic, id}), &id});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.grade != b.grade) return a.grade > b.grade;
    if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
    return *a.id < *b.id;
  });

  const std::size_t n = entries.size();
  std::vector<std::size_t> relevant;
  for (std::size_t p = 0; p < n; ++p) {
    if (entries[p].grade > 0) relevant.push_back(p);
  }
  const std::size_t m = relevant.size();
  const auto k = static_cast<std::size_t>(BiasFor(category).rank_demote);
  std::vector<const std::string*> slots(n, nullptr);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t q = std::min(relevant[i] + k, n - (m - i));
    slots[q] = entries[relevant[i]].id;
  }
  std::size_t next_free = 0;
  for (const Entry& entry : entries) {
    if (entry.grade > 0) continue;
    while (slots[next_free] != nullptr) ++next_free;
    slots[next_free] = entry.id;
  }
  std::vector<std::string> order;
  order.reserve(n);
  for (const std::string* id : slots) order.push_back(*id);
  return order;
}

std::string MockBackend::QaReply(const ModelRequest& request) const {
  const RequestContext& context = request.context;
  auto gold_it = truth_.qa_gold.find(context.item_id);
  if (gold_it == truth_.qa_gold.end()) {
    throw ContractError("mock has no gold answer for item " + context.item_id);
  }
  if (context.options.size() < 2 || !context.options.contains(gold_it->second)) {
    throw ContractError("mock request for " + context.item_id +
                        " lacks usable options");
  }
  const CategoryBias& bias = BiasFor(context.category);
  if (StableUnit(profile_.seed, {context.item_id, "reject"}) <
      bias.rejection_rate) {
    return "I cannot provide medical advice for this question.";
  }
  char answer = gold_it->second;
  if (StableUnit(profile_.seed, {context.item_id}) < bias.qa_flip_rate) {
    std::vector<char> wrong;
    for (const auto& [label, text] : context.options) {
      if (label != answer) wrong.push_back(label);
    }
    answer = wrong[StableHash(profile_.seed, {context.item_id, "wrong"}) %
                   wrong.size()];
  }
  return "The answer is (" + std::string(1, answer) +
         "): " + context.options.at(answer) + ".";
}

std::string MockBackend::CtmReply(const ModelRequest& request) const {
  const RequestContext& context = request.context;
  if (context.criteria_count == 0) {
    throw ContractError("mock CTM request for " + context.trial_id +
                        " has no criteria");
  }
  const std::vector<std::string> order =
      IntendedOrder(context.item_id, context.category);
  auto it = std::find(order.begin(), order.end(), context.trial_id);
  if (it == order.end()) {
    throw ContractError("trial " + context.trial_id +
                        " is not in the candidate pool of " + context.item_id);
  }
  const std::size_t n = order.size();
  const auto q = static_cast<std::size_t>(it - order.begin());
  const std::size_t c = context.criteria_count;
  // round(2c (n - q) / n), halves rounded up
  const std::size_t units = (4 * c * (n - q) + n) / (2 * n);
  std::string text;
  const std::vector<EligibilityLabel> labels = LabelsForUnits(units, c);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    text += "criterion " + std::to_string(i + 1) + ": " +
            std::string(EligibilityLabelName(labels[i])) + "\n";
  }
  return text;
}

RawReply MockBackend::Complete(const ModelRequest& request) {
  RawReply reply;
  reply.text = request.context.task == Task::kQa ? QaReply(request)
                                                 : CtmReply(request);
  reply.usage.prompt_tokens =
      ApproximateTokens(static_cast<std::size_t>(PromptChars(request)));
  reply.usage.completion_tokens = ApproximateTokens(reply.text.size());
  reply.latency_ms = 0.0;
  reply.attempts = 1;
  return reply;
}

}  // namespace equity::gateway
