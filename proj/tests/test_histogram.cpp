#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rtaudit/histogram.hpp"

using namespace rtaudit;

namespace {

HistogramPair make(std::vector<double> c, std::vector<double> i) {
  HistogramPair h;
  for (std::size_t k = 0; k <= c.size(); ++k) h.bin_edges.push_back(300.0 + 25.0 * k);
  h.congruent_counts = std::move(c);
  h.incongruent_counts = std::move(i);
  return h;
}

HistogramPair parse(const std::string& text) {
  std::istringstream in(text);
  return ingest_histogram(in, "mem");
}

HistogramPair random_histogram(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> bins(1, 12), count(0, 30);
  const int n = bins(gen);
  std::vector<double> c(n), i(n);
  for (auto& x : c) x = count(gen);
  for (auto& x : i) x = count(gen);
  c[0] += 1;
  i[n - 1] += 1;
  return make(c, i);
}

}  // namespace

TEST(Histogram, DisjointIsPerfect) {
  const auto h = make({10, 0}, {0, 10});
  EXPECT_DOUBLE_EQ(histogram_step_accuracy(h).accuracy, 1.0);
  EXPECT_DOUBLE_EQ(histogram_bayes_accuracy(h), 1.0);
  EXPECT_DOUBLE_EQ(histogram_step_accuracy(h).threshold_edge_ms, 325.0);
}

TEST(Histogram, IdenticalIsChance) {
  const auto h = make({3, 7, 2}, {3, 7, 2});
  EXPECT_DOUBLE_EQ(histogram_step_accuracy(h).accuracy, 0.5);
  EXPECT_DOUBLE_EQ(histogram_bayes_accuracy(h), 0.5);
}

TEST(Histogram, SixFour) {
  const auto h = make({6, 4}, {4, 6});
  EXPECT_DOUBLE_EQ(histogram_step_accuracy(h).accuracy, 0.6);
  EXPECT_DOUBLE_EQ(histogram_bayes_accuracy(h), 0.6);
}

TEST(Histogram, ThreeBinsBayesBeatsStep) {
  // congruent mass .2 .6 .2, incongruent .4 .2 .4
  const auto h = make({2, 6, 2}, {4, 2, 4});
  EXPECT_NEAR(histogram_bayes_accuracy(h), 0.7, 1e-15);
  const auto s = histogram_step_accuracy(h);
  EXPECT_NEAR(s.accuracy, 0.6, 1e-15);
  EXPECT_EQ(s.threshold_edge_ms, 325.0);
  EXPECT_EQ(s.orientation, Orientation::FastIsIncongruent);
}

TEST(Histogram, RawCountWeighting) {
  const auto h = make({10, 0}, {1, 1});
  EXPECT_DOUBLE_EQ(histogram_bayes_accuracy(h, HistogramWeighting::EqualPriors), 0.75);
  EXPECT_DOUBLE_EQ(histogram_bayes_accuracy(h, HistogramWeighting::RawCounts), 11.0 / 12.0);
  EXPECT_DOUBLE_EQ(histogram_step_accuracy(h, HistogramWeighting::RawCounts).accuracy, 11.0 / 12.0);
}

TEST(Histogram, PropertyBayesDominatesStepAndIsScaleInvariant) {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 500; ++t) {
    const auto h = random_histogram(gen);
    const double bayes = histogram_bayes_accuracy(h);
    const double step = histogram_step_accuracy(h).accuracy;
    EXPECT_GE(bayes + 1e-12, step);
    EXPECT_GE(step, 0.5 - 1e-12);
    EXPECT_LE(bayes, 1.0 + 1e-12);

    auto scaled = h;
    for (auto& x : scaled.congruent_counts) x *= 3.5;
    for (auto& e : scaled.bin_edges) e = 2.0 * e + 10.0;
    EXPECT_NEAR(histogram_bayes_accuracy(scaled), bayes, 1e-12);
    EXPECT_NEAR(histogram_step_accuracy(scaled).accuracy, step, 1e-12);
  }
}

TEST(Histogram, PropertyMergingBinsNeverIncreasesBayes) {
  std::mt19937_64 gen(18);
  for (int t = 0; t < 500; ++t) {
    const auto h = random_histogram(gen);
    if (h.bins() < 2) continue;
    const std::size_t k = gen() % (h.bins() - 1);
    auto m = h;
    m.congruent_counts[k] += m.congruent_counts[k + 1];
    m.incongruent_counts[k] += m.incongruent_counts[k + 1];
    m.congruent_counts.erase(m.congruent_counts.begin() + k + 1);
    m.incongruent_counts.erase(m.incongruent_counts.begin() + k + 1);
    m.bin_edges.erase(m.bin_edges.begin() + k + 1);
    EXPECT_LE(histogram_bayes_accuracy(m), histogram_bayes_accuracy(h) + 1e-12);
    EXPECT_LE(histogram_step_accuracy(m).accuracy, histogram_step_accuracy(h).accuracy + 1e-12);
  }
}

TEST(Histogram, InvariantViolations) {
  auto h = make({1, 2}, {2, 1});
  h.bin_edges = {300, 300, 350};
  EXPECT_THROW(validate_histogram(h), InvariantViolation);
  h = make({1, 2}, {2, 1});
  h.bin_edges.pop_back();
  EXPECT_THROW(validate_histogram(h), InvariantViolation);
  h = make({1, -2}, {2, 1});
  EXPECT_THROW(validate_histogram(h), InvariantViolation);
  h = make({1, 2}, {2});
  EXPECT_THROW(validate_histogram(h), InvariantViolation);
  EXPECT_THROW(histogram_bayes_accuracy(make({0, 0}, {1, 1})), EmptyHistogram);
  EXPECT_THROW(histogram_step_accuracy(make({1, 0}, {0, 0})), EmptyHistogram);
}

TEST(HistogramIo, ParsesWithCommentsAndClosingEdge) {
  const auto h = parse(
      "# digitized\n"
      "edge_ms,congruent,incongruent\n"
      "300,6,4\n"
      "\n"
      "350,4,6\n"
      "400,,\n");
  EXPECT_EQ(h.bin_edges, (std::vector<double>{300, 350, 400}));
  EXPECT_EQ(h.congruent_counts, (std::vector<double>{6, 4}));
  EXPECT_EQ(h.incongruent_counts, (std::vector<double>{4, 6}));
  EXPECT_EQ(parse("edge_ms,congruent,incongruent\n300,6,4\n350,4,6\n400\n"), h);
}

TEST(HistogramIo, ParseErrorsCarryLineNumbers) {
  try {
    parse("edge_ms,congruent,incongruent\n300,6,4\n350,x,6\n400,,\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.source(), "mem");
  }
  try {
    parse("# c\nedge,a,b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("edge_ms,congruent,incongruent\n300,6,4\n350,4,6\n"), ParseError);
  EXPECT_THROW(parse("edge_ms,congruent,incongruent\n300,6,4\n350,,\n360,1,1\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("edge_ms,congruent,incongruent\n300,6,4\n290,,\n"), InvariantViolation);
  EXPECT_THROW(ingest_histogram_file("/nonexistent/histogram.csv"), IoError);
}

TEST(HistogramIo, RoundTrip) {
  std::mt19937_64 gen(19);
  for (int t = 0; t < 50; ++t) {
    auto h = random_histogram(gen);
    h.congruent_counts[0] += 0.125;
    h.bin_edges.back() += 0.1;
    const auto text = emit_histogram_csv(h);
    EXPECT_EQ(text.rfind("# format_version: 1\n", 0), 0u);
    EXPECT_EQ(parse(text), h);
    EXPECT_EQ(emit_histogram_csv(parse(text)), text);
  }
}
