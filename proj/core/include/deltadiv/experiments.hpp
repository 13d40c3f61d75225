#pragma once

// Monte-Carlo scatter experiments, threshold dichotomization analysis,
// binning by Delta divergence, and the triangle-inequality search.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltadiv/records.hpp"
#include "deltadiv/sampling.hpp"

namespace deltadiv {

/// Optional measures of a scatter run. Delta divergence, total variation,
/// the heuristics and the clutter split are always evaluated because the
/// per-row relations are checked on them.
struct MeasureSelection {
  bool kl = true;
  bool kl_sym = true;
  bool js = true;
};

inline constexpr double kDefaultKlCeiling = 8.0;

struct ScatterOptions {
  LogBase kl_base = LogBase::natural();
  double kl_ceiling = kDefaultKlCeiling;
  MeasureSelection measures;
  unsigned workers = 1;
  std::size_t chunk_size = 4096;
};

/// Evaluates the measure panel for one pair. `mu` selects the class for
/// dom_diff; without it the dominant class of `p` is used. Violated row
/// relations throw std::logic_error.
ScatterRecord evaluate_pair(const SampledPair& pair, std::uint64_t sample_id,
                            std::optional<std::size_t> mu, const ScatterOptions& options);

/// Streams config.count records to `sink` in sample_id order. Output is
/// identical for any worker count.
void run_scatter(const SamplerConfig& config, const ScatterOptions& options,
                 const std::function<void(const ScatterRecord&)>& sink);

struct ThresholdReport {
  double threshold = 0.0;
  std::string measure_name;
  std::string reference_measure;
  double reference_threshold = 0.0;
  /// Congruent by reference yet flagged, over all congruent rows.
  double false_positive_rate = 0.0;
  /// Incongruent by reference yet not flagged, over all incongruent rows.
  double false_negative_rate = 0.0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t congruent = 0;
  std::uint64_t incongruent = 0;
  std::uint64_t sample_count = 0;
};

/// Streaming threshold analysis. A row is incongruent by reference when
/// d_delta > reference_threshold and flagged when measure > threshold.
class ThresholdSweep {
 public:
  /// Throws Error(UnknownMeasure) or Error(OutOfRange) for a reference
  /// threshold outside [0, 1].
  ThresholdSweep(std::string measure_name, double reference_threshold,
                 std::vector<double> thresholds);

  void add(const ScatterRecord& r);
  /// Throws Error(EmptyInput) when nothing was added.
  std::vector<ThresholdReport> reports() const;

 private:
  std::string measure_;
  double reference_;
  std::vector<double> thresholds_;
  std::vector<std::uint64_t> fp_;
  std::vector<std::uint64_t> fn_;
  std::uint64_t congruent_ = 0;
  std::uint64_t incongruent_ = 0;
};

std::vector<ThresholdReport> threshold_sweep(std::span<const ScatterRecord> records,
                                             const std::string& measure_name,
                                             double reference_threshold,
                                             const std::vector<double>& thresholds);

struct Extremes {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct BinSummary {
  std::size_t bin = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t count = 0;
  Extremes d_tv;
  Extremes d_kl;
  Extremes delta_star;
  Extremes delta_max;
  Extremes d_delta;
  /// Largest |d_tv - d_delta| in the bin.
  double max_tv_gap = 0.0;
};

/// Streaming binning by d_delta into [k w, (k + 1) w); d_delta = 1 falls in
/// the last bin.
class DeltaBinner {
 public:
  /// Throws Error(OutOfRange) unless 0 < bin_width <= 1.
  explicit DeltaBinner(double bin_width);

  void add(const ScatterRecord& r);
  /// Nonempty bins in ascending order. Throws Error(EmptyInput).
  std::vector<BinSummary> summaries() const;

 private:
  struct Acc {
    double min = INFINITY;
    double max = -INFINITY;
    double sum = 0.0;
    void add(double v);
    Extremes finish(std::uint64_t n) const;
  };
  struct Bin {
    std::uint64_t count = 0;
    Acc tv, kl, star, max, delta;
    double gap = 0.0;
  };
  double width_;
  std::vector<Bin> bins_;
};

std::vector<BinSummary> bin_by_delta(std::span<const ScatterRecord> records, double bin_width);

struct TriangleViolation {
  std::uint64_t triple_index = 0;
  Distribution a;
  Distribution b;
  Distribution c;
  double d_ac = 0.0;
  double d_ab = 0.0;
  double d_bc = 0.0;
  /// d_ac - (d_ab + d_bc), > 1e-12.
  double margin = 0.0;
};

/// Samples uniform triples and returns the first with
/// D(a, c) > D(a, b) + D(b, c) + 1e-12 under Delta divergence.
std::optional<TriangleViolation> metric_violation_search(std::size_t m, std::uint64_t triples,
                                                         std::uint64_t seed);

}  // namespace deltadiv
