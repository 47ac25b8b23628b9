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

#include <sstream>

#include <gtest/gtest.h>

#include "equity/core/error.h"
#include "equity/corpus/analysis.h"
#include "equity/corpus/io.h"
#include "equity/perturb/lexicon.h"

namespace equity::corpus {
namespace {

std::vector<QAItem> ReadQaText(const std::string& text,
                               QaFormat format = QaFormat::kMedQa) {
  std::istringstream in(text);
  return ReadQa(in, format);
}

TEST(QaReaderTest, ParsesRecord) {
  const auto items = ReadQaText(
      R"({"id":"q1","question":"...","options":{"A":"x","B":"y"},"answer":"A"})"
      "\n");
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].id, "q1");
  EXPECT_EQ(items[0].gold, 'A');
  EXPECT_EQ(items[0].GoldText(), "x");
}

TEST(QaReaderTest, EmptyInputGivesNoItems) {
  EXPECT_TRUE(ReadQaText("").empty());
}

TEST(QaReaderTest, GoldMustBeAnOption) {
  EXPECT_THROW(
      ReadQaText(R"({"id":"q1","question":"?","options":{"A":"a","B":"b","C":"c","D":"d"},"answer":"E"})"),
      ValidationError);
}

TEST(QaReaderTest, MalformedJsonReportsLine) {
  try {
    ReadQaText(
        R"({"id":"q1","question":"?","options":{"A":"a","B":"b"},"answer":"A"})"
        "\n{broken\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(QaReaderTest, MedMcQaNeedsFourOptions) {
  const std::string two =
      R"({"id":"q1","question":"?","options":{"A":"a","B":"b"},"answer":"A"})";
  EXPECT_NO_THROW(ReadQaText(two, QaFormat::kMedQa));
  EXPECT_THROW(ReadQaText(two, QaFormat::kMedMcQa), ValidationError);
}

TEST(QaWriterTest, CanonicalRoundTrip) {
  const std::string canonical =
      R"({"id":"q1","question":"Which?","options":{"A":"x","B":"y"},"answer":"B"})"
      "\n";
  std::ostringstream out;
  WriteQa(out, ReadQaText(canonical));
  std::ostringstream again;
  WriteQa(again, ReadQaText(out.str()));
  EXPECT_EQ(out.str(), again.str());
}

TEST(TopicReaderTest, OrderPreservedAndBlankRejected) {
  std::istringstream in(
      R"({"id":"t1","text":"A 58-year-old..."})"
      "\n"
      R"({"id":"t2","text":"Another note"})"
      "\n");
  const auto topics = ReadTopics(in);
  ASSERT_EQ(topics.size(), 2u);
  EXPECT_EQ(topics[0].id, "t1");
  EXPECT_EQ(topics[1].id, "t2");

  std::istringstream blank(R"({"id":"t1","text":"   "})");
  EXPECT_THROW(ReadTopics(blank), ValidationError);
}

TEST(TrialReaderTest, CriteriaAndSexRestriction) {
  std::istringstream in(
      R"({"id":"n1","title":"T","summary":"S","inclusion":["a","b","c"],"exclusion":["d"]})"
      "\n"
      R"({"id":"n2","title":"T","summary":"S","inclusion":["a"],"exclusion":[],"sex_restriction":"female"})"
      "\n");
  const auto trials = ReadTrials(in);
  ASSERT_EQ(trials.size(), 2u);
  EXPECT_EQ(trials[0].CriteriaCount(), 4u);
  EXPECT_EQ(trials[0].sex_restriction, SexRestriction::kNone);
  EXPECT_EQ(trials[1].sex_restriction, SexRestriction::kFemale);
}

TEST(QrelsReaderTest, ParsesGrades) {
  std::istringstream in("t1 0 n42 2\n");
  const Qrels qrels = ReadQrels(in);
  EXPECT_EQ(qrels.Grade("t1", "n42"), 2);
  EXPECT_FALSE(qrels.Grade("t1", "n43").has_value());
}

TEST(QrelsReaderTest, RejectsGradeOutOfRange) {
  std::istringstream in("t1 0 n42 3\n");
  EXPECT_THROW(ReadQrels(in), Error);
}

TEST(QrelsReaderTest, DuplicateKeepsLastAndWarns) {
  std::istringstream in("t1 0 n1 1\nt1 0 n1 2\n");
  Diagnostics diagnostics;
  const Qrels qrels = ReadQrels(in, &diagnostics);
  EXPECT_EQ(qrels.Grade("t1", "n1"), 2);
  EXPECT_EQ(diagnostics.warnings().size(), 1u);
}

TEST(QrelsWriterTest, SortedOutput) {
  Qrels qrels;
  qrels.Set("t2", "n1", 0);
  qrels.Set("t1", "n9", 2);
  qrels.Set("t1", "n3", 1);
  std::ostringstream out;
  WriteQrels(out, qrels);
  EXPECT_EQ(out.str(), "t1 0 n3 1\nt1 0 n9 2\nt2 0 n1 0\n");
  EXPECT_EQ(qrels.Relevant("t1"), (std::vector<std::string>{"n3", "n9"}));
}

QAItem Item(const std::string& id, const std::string& question) {
  QAItem item;
  item.id = id;
  item.question = question;
  item.options = {{'A', "yes"}, {'B', "no"}};
  return item;
}

TEST(FilterTest, RemovesDemographicEssentialTopics) {
  const auto& lexicon = perturb::Lexicon::Default();
  const auto result = FilterDemographicEssential(
      {Item("q1", "What is the recommended age for prostate cancer screening?"),
       Item("q2", "What is the usual starting dose of metformin?")},
      lexicon);
  ASSERT_EQ(result.removed.size(), 1u);
  EXPECT_EQ(result.removed[0].id, "q1");
  ASSERT_EQ(result.kept.size(), 1u);
  EXPECT_EQ(result.kept[0].id, "q2");

  const auto empty = FilterDemographicEssential({}, lexicon);
  EXPECT_TRUE(empty.kept.empty());
  EXPECT_TRUE(empty.removed.empty());
}

const CompositionRow* Row(const CompositionReport& report, Axis axis,
                          const std::string& label) {
  for (const auto& composition : report.axes) {
    if (composition.axis != axis) continue;
    for (const auto& row : composition.rows) {
      if (row.label == label) return &row;
    }
  }
  return nullptr;
}

TEST(CorpusStatsTest, NoRaceMentionsIsAllNotMentioned) {
  const std::vector<std::string> texts(5, "The patient has a cough.");
  const auto report = CorpusStats("toy", texts, perturb::Lexicon::Default());
  const CompositionRow* row = Row(report, Axis::kRace, "Not Mentioned");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->count, 5u);
  EXPECT_DOUBLE_EQ(row->percent, 100.0);
}

TEST(CorpusStatsTest, PercentFormattingMatchesCompositionTable) {
  std::vector<std::string> texts(6149, "The patient has a cough.");
  for (int i = 0; i < 75; ++i) texts[i] = "A Hispanic patient has a cough.";
  const auto report = CorpusStats("medmcqa", texts, perturb::Lexicon::Default());
  const CompositionRow* row = Row(report, Axis::kRace, "Hispanic");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->count, 75u);
  EXPECT_EQ(FormatPercent(row->percent), "1.2");
}

TEST(CorpusStatsTest, WordHistogramBuckets) {
  std::string text;
  for (int i = 0; i < 25; ++i) text += "word ";
  const std::vector<std::string> texts(10, text);
  const auto report = CorpusStats("toy", texts, perturb::Lexicon::Default());
  ASSERT_EQ(report.word_histogram.size(), 1u);
  EXPECT_EQ(report.word_histogram.begin()->first, 20u);
  EXPECT_EQ(report.word_histogram.begin()->second, 10u);
}

}  // namespace
}  // namespace equity::corpus
