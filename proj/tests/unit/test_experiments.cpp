#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "deltadiv/experiments.hpp"
#include "../support/oracles.hpp"

using namespace deltadiv;

namespace {

std::vector<ScatterRecord> collect(const SamplerConfig& c, const ScatterOptions& o = {}) {
  std::vector<ScatterRecord> rows;
  run_scatter(c, o, [&](const ScatterRecord& r) { rows.push_back(r); });
  return rows;
}

std::string csv_checksum(const SamplerConfig& c, const ScatterOptions& o) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::Csv);
  run_scatter(c, o, [&](const ScatterRecord& r) { w.write(r); });
  w.finish();
  return w.checksum();
}

SamplerConfig unconstrained(std::size_t m, std::uint64_t count, std::uint64_t seed) {
  SamplerConfig c;
  c.classes = m;
  c.count = count;
  c.seed = seed;
  return c;
}

oracle::Vec vec(const Distribution& d) { return {d.probs().begin(), d.probs().end()}; }

}  // namespace

TEST(EvaluatePair, MatchesOracles) {
  const SamplerConfig c = unconstrained(5, 1, 3);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const SampledPair pair = sample_pair_at(c, k);
    const ScatterRecord r = evaluate_pair(pair, k, std::nullopt, {});
    const auto p = vec(pair.p), q = vec(pair.q);
    ASSERT_EQ(r.sample_id, k);
    ASSERT_EQ(r.m, 5u);
    ASSERT_NEAR(r.d_kl, oracle::kl(p, q), 1e-12);
    ASSERT_NEAR(r.d_kl_sym, oracle::kl(p, q) + oracle::kl(q, p), 1e-12);
    ASSERT_NEAR(r.d_js, oracle::js_bits(p, q), 1e-12);
    ASSERT_NEAR(r.d_tv, oracle::tv(p, q), 1e-15);
    ASSERT_NEAR(r.d_delta, oracle::delta(p, q), 1e-12);
    ASSERT_NEAR(r.delta_star, oracle::delta_star(p, q), 1e-15);
    ASSERT_NEAR(r.delta_max, oracle::delta_max(p, q), 1e-15);
    const std::size_t w = oracle::argmax(p);
    ASSERT_EQ(r.dom_diff, std::abs(p[w] - q[w]));
  }
}

TEST(EvaluatePair, SelectionAndClipping) {
  SampledPair pair{Distribution::validate({0.98, 0.01, 0.01}),
                   Distribution::validate({1e-6, 0.5 - 5e-7, 0.5 - 5e-7})};
  ScatterOptions o;
  o.kl_ceiling = 1.0;
  const ScatterRecord r = evaluate_pair(pair, 0, 0, o);
  EXPECT_TRUE(r.kl_clipped);
  EXPECT_NEAR(r.dom_diff, 0.98 - 1e-6, 1e-15);
  o.measures = {false, false, false};
  const ScatterRecord bare = evaluate_pair(pair, 0, 0, o);
  EXPECT_TRUE(std::isnan(bare.d_kl));
  EXPECT_TRUE(std::isnan(bare.d_kl_sym));
  EXPECT_TRUE(std::isnan(bare.d_js));
  EXPECT_FALSE(bare.kl_clipped);
  o.kl_base = LogBase::binary();
  o.measures = {};
  const ScatterRecord bits = evaluate_pair(pair, 0, 0, o);
  EXPECT_EQ(bits.log_base_kl, 2.0);
  EXPECT_NEAR(bits.d_kl, r.d_kl / std::log(2.0), 1e-12);
}

TEST(RunScatter, RowCountAndOrder) {
  const auto rows = collect(unconstrained(4, 10007, 1));
  ASSERT_EQ(rows.size(), 10007u);
  for (std::size_t i = 0; i < rows.size(); ++i) ASSERT_EQ(rows[i].sample_id, i);
}

TEST(RunScatter, Deterministic) {
  const SamplerConfig c = unconstrained(6, 100000, 42);
  ScatterOptions o;
  const std::string first = csv_checksum(c, o);
  EXPECT_EQ(first, csv_checksum(c, o));
  o.workers = 3;
  o.chunk_size = 1000;
  EXPECT_EQ(first, csv_checksum(c, o));
  EXPECT_NE(first, csv_checksum(unconstrained(6, 100000, 43), o));
}

TEST(RunScatter, TwoClassesDeltaIsTotalVariation) {
  for (const auto& r : collect(unconstrained(2, 10000, 5))) {
    ASSERT_NEAR(r.d_delta, r.d_tv, 1e-12);
    ASSERT_EQ(r.clutter_tv, r.clutter_delta);
  }
}

TEST(RunScatter, KlSpreadAtZeroDominantDifference) {
  SamplerConfig c = unconstrained(6, 100000, 42);
  c.mode = SamplingMode::DominantDiff;
  c.mu = 0;
  c.diff = 0.0;
  ScatterOptions o;
  o.measures = {true, false, false};
  double lo = INFINITY, hi = 0.0;
  run_scatter(c, o, [&](const ScatterRecord& r) {
    ASSERT_EQ(r.dom_diff, 0.0);
    lo = std::min(lo, r.d_kl);
    hi = std::max(hi, r.d_kl);
  });
  EXPECT_GT(hi, 2.0);
  EXPECT_LT(lo, 1e-3);
}

TEST(RunScatter, DominantDiffRecordsTargetDifference) {
  SamplerConfig c = unconstrained(3, 2100, 9);
  c.mode = SamplingMode::DominantDiff;
  c.mu = 2;
  c.diff_grid = default_diff_grid();
  const auto rows = collect(c);
  for (const auto& r : rows) {
    ASSERT_NEAR(r.dom_diff, c.diff_for(r.sample_id), 1e-12);
  }
}

TEST(RunScatter, PropagatesErrors) {
  SamplerConfig c = unconstrained(3, 10, 1);
  c.mode = SamplingMode::DominantValue;
  c.mu = 0;
  c.p_mu = 0.1;
  EXPECT_ERROR_CODE(collect(c), InfeasibleConstraint);
}

TEST(ThresholdSweep, SelfConsistency) {
  const auto rows = collect(unconstrained(6, 20000, 2));
  const auto reports = threshold_sweep(rows, "d_delta", 0.3, {0.3});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].false_positive_rate, 0.0);
  EXPECT_EQ(reports[0].false_negative_rate, 0.0);
  EXPECT_EQ(reports[0].sample_count, 20000u);
  EXPECT_EQ(reports[0].congruent + reports[0].incongruent, 20000u);
  EXPECT_EQ(reports[0].reference_measure, "d_delta");
}

TEST(ThresholdSweep, RatesAgainstDirectCount) {
  const auto rows = collect(unconstrained(6, 20000, 3));
  const std::vector<double> th{0.5, 1.0, 2.0};
  const auto reports = threshold_sweep(rows, "d_kl", 0.3, th);
  for (std::size_t k = 0; k < th.size(); ++k) {
    std::uint64_t fp = 0, fn = 0, congruent = 0;
    for (const auto& r : rows) {
      const bool inc = r.d_delta > 0.3;
      congruent += !inc;
      fp += !inc && r.d_kl > th[k];
      fn += inc && !(r.d_kl > th[k]);
    }
    EXPECT_EQ(reports[k].false_positives, fp);
    EXPECT_EQ(reports[k].false_negatives, fn);
    EXPECT_DOUBLE_EQ(reports[k].false_positive_rate,
                     static_cast<double>(fp) / static_cast<double>(congruent));
    EXPECT_DOUBLE_EQ(reports[k].false_negative_rate,
                     static_cast<double>(fn) / static_cast<double>(rows.size() - congruent));
  }
}

TEST(ThresholdSweep, KlOverlapsOnSixClasses) {
  const auto rows = collect(unconstrained(6, 100000, 4));
  const auto reports = threshold_sweep(rows, "d_kl", 0.3, {0.25, 0.5, 0.75, 1.0, 2.0, 3.0});
  for (const auto& r : reports) {
    EXPECT_GT(r.false_positive_rate, 0.0) << r.threshold;
    EXPECT_GT(r.false_negative_rate, 0.0) << r.threshold;
  }
}

TEST(ThresholdSweep, TotalVariationSeparatesTwoClasses) {
  const auto rows = collect(unconstrained(2, 10000, 5));
  const auto reports = threshold_sweep(rows, "d_tv", 0.3, {0.3});
  EXPECT_EQ(reports[0].false_positives + reports[0].false_negatives, 0u);
}

TEST(ThresholdSweep, Errors) {
  EXPECT_ERROR_CODE(threshold_sweep({}, "d_kl", 0.3, {1.0}), EmptyInput);
  EXPECT_ERROR_CODE(ThresholdSweep("d_nope", 0.3, {1.0}), UnknownMeasure);
  EXPECT_ERROR_CODE(ThresholdSweep("d_kl", 1.3, {1.0}), OutOfRange);
  EXPECT_ERROR_CODE(ThresholdSweep("d_kl", 0.3, {1.0}).reports(), EmptyInput);
}

TEST(Binning, AllZeroSingleBin) {
  std::vector<ScatterRecord> rows(10);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].d_tv = 0.01 * static_cast<double>(i);
  const auto bins = bin_by_delta(rows, 0.01);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_EQ(bins[0].count, 10u);
  EXPECT_EQ(bins[0].d_tv.min, 0.0);
  EXPECT_NEAR(bins[0].d_tv.max, 0.09, 1e-15);
}

TEST(Binning, SummariesMatchDirectScan) {
  const auto rows = collect(unconstrained(6, 50000, 6));
  const double width = 0.05;
  const auto bins = bin_by_delta(rows, width);
  std::uint64_t total = 0;
  for (const auto& b : bins) {
    total += b.count;
    EXPECT_LE(b.delta_star.max, b.upper + width);
    EXPECT_GE(b.d_delta.min, b.lower - 1e-12);
    EXPECT_LE(b.d_delta.max, b.upper + 1e-12);
    double max_tv = 0.0;
    std::uint64_t n = 0;
    for (const auto& r : rows) {
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(r.d_delta / width), 19);
      if (k != b.bin) continue;
      ++n;
      max_tv = std::max(max_tv, r.d_tv);
    }
    EXPECT_EQ(n, b.count);
    EXPECT_EQ(max_tv, b.d_tv.max);
  }
  EXPECT_EQ(total, rows.size());
}

TEST(Binning, LowDeltaBinsSpreadInTotalVariation) {
  const auto rows = collect(unconstrained(6, 100000, 7));
  const auto bins = bin_by_delta(rows, 0.01);
  for (const auto& b : bins) {
    if (b.upper > 0.1 + 1e-12) break;
    EXPECT_GT(b.d_tv.max, 0.4) << b.bin;
    EXPECT_LT(b.d_tv.min, b.upper + 0.05) << b.bin;
  }
}

TEST(Binning, Errors) {
  EXPECT_ERROR_CODE(bin_by_delta({}, 0.01), EmptyInput);
  std::vector<ScatterRecord> rows(1);
  EXPECT_ERROR_CODE(bin_by_delta(rows, 0.0), OutOfRange);
  EXPECT_ERROR_CODE(bin_by_delta(rows, 1.5), OutOfRange);
  rows[0].d_delta = 1.0;
  const auto bins = bin_by_delta(rows, 0.25);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_EQ(bins[0].bin, 3u);
  EXPECT_EQ(bins[0].upper, 1.0);
}

TEST(MetricSearch, TwoClassesNeverViolate) {
  EXPECT_FALSE(metric_violation_search(2, 100000, 1).has_value());
}

TEST(MetricSearch, FindsViolations) {
  for (std::size_t m : {3u, 6u}) {
    const auto v = metric_violation_search(m, 1000000, 7);
    ASSERT_TRUE(v.has_value()) << m;
    EXPECT_GT(v->margin, 1e-9);
    const auto a = vec(v->a), b = vec(v->b), c = vec(v->c);
    EXPECT_NEAR(v->d_ac, oracle::delta(a, c), 1e-12);
    EXPECT_GT(oracle::delta(a, c), oracle::delta(a, b) + oracle::delta(b, c) + 1e-9);
  }
}

TEST(MetricSearch, ArchivedThreeClassViolation) {
  const oracle::Vec a{0.26363346931681669, 0.29776724975525565, 0.43859928092792755};
  const oracle::Vec b{0.47209638088162148, 0.13182576207578403, 0.39607785704259452};
  const oracle::Vec c{0.43289651994170786, 0.3830398953856558, 0.18406358467263628};
  const double margin = oracle::delta(a, c) - oracle::delta(a, b) - oracle::delta(b, c);
  EXPECT_NEAR(margin, 0.0068729237505728569, 1e-12);
  const auto pa = Distribution::validate(a), pb = Distribution::validate(b),
             pc = Distribution::validate(c);
  EXPECT_GT(delta_divergence(pa, pc).value,
            delta_divergence(pa, pb).value + delta_divergence(pb, pc).value + 1e-9);
  EXPECT_LE(total_variation(pa, pc).value,
            total_variation(pa, pb).value + total_variation(pb, pc).value);
}
