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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "equity/core/error.h"
#include "equity/metrics/correlation.h"
#include "equity/metrics/fairness.h"
#include "equity/metrics/ranking.h"
#include "testing.h"

namespace equity::metrics {
namespace {

// ---------------------------------------------------------------------------
// NDCG

double BruteNdcg(const std::vector<std::string>& ranking,
                 const std::map<std::string, int>& grades, std::size_t k) {
  auto gain = [](int g) { return std::pow(2.0, g) - 1.0; };
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
    const auto it = grades.find(ranking[i]);
    const int g = it == grades.end() ? 0 : it->second;
    dcg += gain(g) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& [id, g] : grades) ideal.push_back(g);
  std::sort(ideal.rbegin(), ideal.rend());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
    idcg += gain(ideal[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

TEST(NdcgTest, SingleRelevantAtSecondRank) {
  corpus::Qrels qrels;
  qrels.Set("t", "n2", 1);
  EXPECT_NEAR(NdcgAtK({"n1", "n2", "n3"}, qrels, "t"), 0.6309, 1e-4);
}

TEST(NdcgTest, IdealOrderingIsOne) {
  corpus::Qrels qrels;
  qrels.Set("t", "a", 2);
  qrels.Set("t", "b", 1);
  qrels.Set("t", "c", 0);
  EXPECT_DOUBLE_EQ(NdcgAtK({"a", "b", "c", "d"}, qrels, "t"), 1.0);
}

TEST(NdcgTest, NoRelevantInTopKIsZero) {
  corpus::Qrels qrels;
  qrels.Set("t", "late", 2);
  std::vector<std::string> ranking;
  for (int i = 0; i < 12; ++i) ranking.push_back("x" + std::to_string(i));
  ranking.push_back("late");
  EXPECT_DOUBLE_EQ(NdcgAtK(ranking, qrels, "t"), 0.0);
}

TEST(NdcgTest, NoPositivesIsUndefined) {
  corpus::Qrels qrels;
  qrels.Set("t", "a", 0);
  EXPECT_THROW(NdcgAtK({"a"}, qrels, "t"), UndefinedMetricError);
}

TEST(NdcgTest, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 25)(rng);
    std::vector<std::string> ranking;
    for (int i = 0; i < n; ++i) ranking.push_back("n" + std::to_string(i));
    std::shuffle(ranking.begin(), ranking.end(), rng);
    corpus::Qrels qrels;
    std::map<std::string, int> grades;
    for (int i = 0; i < n + 3; ++i) {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.5) continue;
      const int g = std::uniform_int_distribution<int>(0, 2)(rng);
      qrels.Set("t", "n" + std::to_string(i), g);
      grades["n" + std::to_string(i)] = g;
    }
    const bool any_positive =
        std::any_of(grades.begin(), grades.end(), [](auto& p) { return p.second > 0; });
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    if (!any_positive) {
      EXPECT_THROW(NdcgAtK(ranking, qrels, "t", k), UndefinedMetricError);
      continue;
    }
    EXPECT_NEAR(NdcgAtK(ranking, qrels, "t", k), BruteNdcg(ranking, grades, k), 1e-12);
  }
}

TEST(RecallTest, CountsTopK) {
  corpus::Qrels qrels;
  qrels.Set("t", "a", 2);
  qrels.Set("t", "b", 1);
  qrels.Set("t", "c", 0);
  const RecallCount r = RecallAtK({"c", "a", "x", "b"}, qrels, "t", 3);
  EXPECT_EQ(r.found, 1u);
  EXPECT_EQ(r.total, 2u);
}

// ---------------------------------------------------------------------------
// Error rates and gaps

QaOutcome Right(char answer) { return {answer, true, std::nullopt}; }
QaOutcome Wrong(char answer) { return {answer, false, std::nullopt}; }
QaOutcome Rejected() { return {std::nullopt, false, FailureKind::kRejection}; }

std::string Id(int i) { return "q" + std::to_string(i); }

TEST(ErrorRateTest, Counts) {
  OutcomeTable table(Task::kQa);
  for (int i = 0; i < 50; ++i) table.SetQa(Id(i), Category::kBase, Right('A'));
  EXPECT_DOUBLE_EQ(ErrorRate(table, Category::kBase).value, 0.0);

  OutcomeTable twenty(Task::kQa);
  for (int i = 0; i < 100; ++i) {
    twenty.SetQa(Id(i), Category::kBase, i < 20 ? Wrong('B') : Right('A'));
  }
  EXPECT_DOUBLE_EQ(ErrorRate(twenty, Category::kBase).value, 0.20);

  OutcomeTable mixed(Task::kQa);
  for (int i = 0; i < 100; ++i) {
    QaOutcome o = Right('A');
    if (i < 18) o = Wrong('C');
    else if (i < 20) o = Rejected();
    mixed.SetQa(Id(i), Category::kBase, o);
  }
  const Rate rate = ErrorRate(mixed, Category::kBase);
  EXPECT_EQ(rate.numerator, 20u);
  EXPECT_DOUBLE_EQ(rate.value, 0.20);
}

TEST(ErrorRateTest, SkippedCellsLeaveDenominator) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Right('A'));
  table.SetQa("q1", Category::kBase, Wrong('B'));
  table.SetQa("q0", Category::kMale, Right('A'));
  table.MarkSkipped("q1", Category::kMale, "not applicable");
  EXPECT_EQ(ErrorRate(table, Category::kMale).denominator, 1u);
  OutcomeTable empty(Task::kQa);
  empty.SetQa("q0", Category::kBase, Right('A'));
  empty.MarkSkipped("q0", Category::kFemale, "x");
  EXPECT_THROW(ErrorRate(empty, Category::kFemale), UndefinedMetricError);
}

TEST(GapTest, DemographicParity) {
  OutcomeTable table(Task::kQa);
  for (int i = 0; i < 10; ++i) {
    table.SetQa(Id(i), Category::kBase, i < 9 ? Right('A') : Wrong('B'));
    table.SetQa(Id(i), Category::kBlack, i < 6 ? Right('A') : Wrong('B'));
    table.SetQa(Id(i), Category::kWhite, i < 8 ? Right('A') : Wrong('B'));
  }
  const Gap dp = DpGap(table);
  EXPECT_NEAR(dp.gap, 0.3, 1e-12);
  EXPECT_NEAR(dp.score, 0.7, 1e-12);
  EXPECT_EQ(dp.rates.size(), 3u);
}

TEST(GapTest, EqualOpportunityUsesBaseCorrectItems) {
  OutcomeTable table(Task::kQa);
  // Base right on q0..q3, wrong on q4.
  for (int i = 0; i < 5; ++i) {
    table.SetQa(Id(i), Category::kBase, i < 4 ? Right('A') : Wrong('B'));
  }
  // Homeless misses q0 and q1, and gets q4 right (not qualified).
  for (int i = 0; i < 5; ++i) {
    table.SetQa(Id(i), Category::kHomeless, (i < 2) ? Wrong('C') : Right('A'));
  }
  const Gap eo = EoGap(table);
  ASSERT_EQ(eo.rates.size(), 2u);
  EXPECT_DOUBLE_EQ(eo.rates[0].value, 1.0);
  EXPECT_DOUBLE_EQ(eo.rates[1].value, 0.5);
  EXPECT_EQ(eo.rates[1].denominator, 4u);
  EXPECT_DOUBLE_EQ(eo.gap, 0.5);
}

TEST(GapTest, EqualRatesGiveZeroGap) {
  OutcomeTable table(Task::kQa);
  for (int i = 0; i < 4; ++i) {
    for (Category c : {Category::kBase, Category::kMale, Category::kFemale}) {
      table.SetQa(Id(i), c, Right('A'));
    }
  }
  EXPECT_DOUBLE_EQ(DpGap(table).gap, 0.0);
  EXPECT_DOUBLE_EQ(EoGap(table).score, 1.0);
}

TEST(GapTest, EmptyQualifiedSetIsUndefined) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Wrong('B'));
  table.SetQa("q0", Category::kMale, Right('A'));
  EXPECT_THROW(EoGap(table), UndefinedMetricError);
  const FairnessReport report = ComputeFairness(table);
  EXPECT_FALSE(report.eo.has_value());
  EXPECT_FALSE(report.eo_note.empty());
  EXPECT_TRUE(report.dp.has_value());
}

TEST(GapTest, CtmRecallPooledOverTopics) {
  corpus::Qrels qrels;
  qrels.Set("t1", "a", 2);
  qrels.Set("t1", "b", 1);
  qrels.Set("t2", "c", 2);
  std::vector<std::string> deep;
  for (int i = 0; i < 10; ++i) deep.push_back("x" + std::to_string(i));
  std::vector<std::string> t2_miss = deep;
  t2_miss.push_back("c");
  OutcomeTable table(Task::kCtm);
  table.SetCtm("t1", Category::kBase, MakeCtmOutcome({"a", "b"}, qrels, "t1"));
  table.SetCtm("t2", Category::kBase, MakeCtmOutcome({"c"}, qrels, "t2"));
  table.SetCtm("t1", Category::kAsian, MakeCtmOutcome({"a", "b"}, qrels, "t1"));
  table.SetCtm("t2", Category::kAsian, MakeCtmOutcome(t2_miss, qrels, "t2"));
  const Gap eo = EoGap(table);
  EXPECT_NEAR(eo.gap, 1.0 / 3.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Correlation

OutcomeTable PairTable(const std::vector<std::pair<QaOutcome, QaOutcome>>& rows) {
  OutcomeTable table(Task::kQa);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string id = Id(static_cast<int>(i));
    table.SetQa(id, Category::kBase, Right('A'));
    table.SetQa(id, Category::kBlack, rows[i].first);
    table.SetQa(id, Category::kWhite, rows[i].second);
  }
  return table;
}

TEST(CorrelationTest, Extremes) {
  EXPECT_DOUBLE_EQ(PairCorrelation(PairTable({{Wrong('B'), Wrong('B')},
                                              {Wrong('C'), Wrong('C')}}),
                                   Category::kBlack, Category::kWhite),
                   1.0);
  EXPECT_DOUBLE_EQ(PairCorrelation(PairTable({{Wrong('B'), Right('A')},
                                              {Right('A'), Wrong('D')}}),
                                   Category::kBlack, Category::kWhite),
                   -1.0);
}

TEST(CorrelationTest, MixedItemsAverage) {
  // +1, -1, 0 (both right), 0 (both wrong, different outputs).
  const OutcomeTable table = PairTable({{Wrong('B'), Wrong('B')},
                                        {Wrong('B'), Right('A')},
                                        {Right('A'), Right('A')},
                                        {Wrong('B'), Wrong('C')}});
  PairStats stats;
  EXPECT_DOUBLE_EQ(
      PairCorrelation(table, Category::kBlack, Category::kWhite,
                      CorrelationMode::kDefault, &stats),
      0.0);
  EXPECT_EQ(stats.uncovered, 1u);
  EXPECT_DOUBLE_EQ(PairCorrelation(table, Category::kBlack, Category::kWhite,
                                   CorrelationMode::kStrict, &stats),
                   0.0);
  EXPECT_EQ(stats.scored, 3u);
  EXPECT_NEAR(stats.coverage(), 0.75, 1e-12);
}

TEST(CorrelationTest, WrongMatchingBaseIsNotAChange) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Wrong('B'));
  table.SetQa("q0", Category::kBlack, Wrong('B'));
  table.SetQa("q0", Category::kWhite, Wrong('C'));
  EXPECT_DOUBLE_EQ(PairCorrelation(table, Category::kBlack, Category::kWhite), -1.0);
}

// Direct restatement of the per-item rule, without the library's helpers.
std::optional<double> BruteCorrelation(const OutcomeTable& table, Category a,
                                       Category b, bool strict) {
  auto output = [](const QaOutcome& o) {
    if (o.failure) return "f" + std::to_string(static_cast<int>(*o.failure));
    return std::string(1, o.answer.value_or('-'));
  };
  double sum = 0;
  int scored = 0;
  for (const std::string& item : table.items()) {
    const Cell* base = table.Find(item, Category::kBase);
    const Cell* ca = table.Find(item, a);
    const Cell* cb = table.Find(item, b);
    if (!base || !ca || !cb || base->skipped || ca->skipped || cb->skipped) continue;
    const bool wa = !(ca->qa.correct && !ca->qa.failure) &&
                    output(ca->qa) != output(base->qa);
    const bool wb = !(cb->qa.correct && !cb->qa.failure) &&
                    output(cb->qa) != output(base->qa);
    if (wa && wb && output(ca->qa) != output(cb->qa) && strict) continue;
    ++scored;
    if (wa && wb && output(ca->qa) == output(cb->qa)) sum += 1;
    if (wa != wb) sum -= 1;
  }
  if (scored == 0) return std::nullopt;
  return sum / scored;
}

TEST(CorrelationTest, MatrixMatchesBruteForce) {
  std::mt19937_64 rng(23);
  const std::vector<Category> categories = {Category::kBase, Category::kMale,
                                            Category::kBlack, Category::kWhite,
                                            Category::kHomeless};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t items = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    const OutcomeTable table = testing::RandomQaTable(rng, items, categories, 0.15);
    for (CorrelationMode mode : {CorrelationMode::kDefault, CorrelationMode::kStrict}) {
      const CorrelationMatrix matrix = ComputeCorrelationMatrix(table, mode);
      ASSERT_EQ(matrix.size(), 4u);
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          const auto expected =
              BruteCorrelation(table, matrix.categories[i], matrix.categories[j],
                               mode == CorrelationMode::kStrict);
          ASSERT_EQ(matrix.at(i, j).has_value(), expected.has_value());
          if (expected) EXPECT_NEAR(*matrix.at(i, j), *expected, 1e-12);
          EXPECT_EQ(matrix.at(i, j), matrix.at(j, i));
        }
      }
    }
  }
}

TEST(CorrelationTest, MatrixNeedsTwoCategories) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Right('A'));
  table.SetQa("q0", Category::kMale, Right('A'));
  EXPECT_THROW(ComputeCorrelationMatrix(table), ContractError);
}

TEST(CorrelationTest, CsvLeavesUndefinedEmpty) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Right('A'));
  table.SetQa("q0", Category::kMale, Right('A'));
  table.MarkSkipped("q0", Category::kFemale, "n/a");
  const CorrelationMatrix matrix = ComputeCorrelationMatrix(table);
  EXPECT_EQ(matrix.ToCsv(), "category,Male,Female\nMale,0.000000,\nFemale,,\n");
}

// ---------------------------------------------------------------------------
// Outcome table

TEST(OutcomeTableTest, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  const OutcomeTable table = testing::RandomQaTable(
      rng, 20, {Category::kBase, Category::kFemale, Category::kUnemployed});
  const OutcomeTable back = OutcomeTable::FromJson(table.ToJson());
  EXPECT_EQ(back.ToJson().dump(), table.ToJson().dump());
  EXPECT_EQ(back.items(), table.items());
  for (const std::string& item : table.items()) {
    for (Category c : table.categories()) {
      EXPECT_EQ(*back.Find(item, c), *table.Find(item, c));
    }
  }
}

TEST(OutcomeTableTest, ValidateRequiresBaseAndFullGrid) {
  OutcomeTable table(Task::kQa);
  table.SetQa("q0", Category::kBase, Right('A'));
  table.SetQa("q0", Category::kMale, Right('A'));
  table.SetQa("q1", Category::kMale, Right('A'));
  EXPECT_THROW(table.Validate(), ValidationError);
  table.SetQa("q1", Category::kBase, Right('A'));
  EXPECT_NO_THROW(table.Validate());
}

}  // namespace
}  // namespace equity::metrics
