#include "deltadiv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "deltadiv/error.hpp"

namespace deltadiv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_row(const ScatterRecord& r) {
  const double tol = kRelationTolerance;
  const bool ok = r.d_delta <= r.d_tv + tol && r.clutter_delta <= r.clutter_tv + tol &&
                  r.delta_star <= r.d_delta + tol && r.d_delta <= 2.0 * r.delta_star + tol &&
                  r.d_delta >= 0.0 && r.d_delta <= 1.0;
  if (!ok) {
    throw std::logic_error(fmt::format(
        "sample {}: row relations violated (delta {:.17g}, tv {:.17g}, star {:.17g}, "
        "clutter {:.17g}/{:.17g})",
        r.sample_id, r.d_delta, r.d_tv, r.delta_star, r.clutter_delta, r.clutter_tv));
  }
}

bool known_measure(std::string_view name) {
  try {
    record_field(ScatterRecord{}, name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

ScatterRecord evaluate_pair(const SampledPair& pair, std::uint64_t sample_id,
                            std::optional<std::size_t> mu, const ScatterOptions& options) {
  const Distribution& p = pair.p;
  const Distribution& q = pair.q;
  const DeltaBreakdown delta = delta_divergence(p, q);
  const ClutterSplit clutter = delta_clutter(p, q);
  const std::size_t target = mu.value_or(delta.dominant_pair.omega);

  ScatterRecord r;
  r.sample_id = sample_id;
  r.m = static_cast<std::uint32_t>(p.size());
  r.dom_diff = std::abs(p[target] - q[target]);
  r.d_kl = options.measures.kl ? kl(p, q, options.kl_base).value : kNaN;
  r.d_kl_sym = options.measures.kl_sym ? kl_symmetrized(p, q, options.kl_base).value : kNaN;
  r.d_js = options.measures.js ? jensen_shannon(p, q).value : kNaN;
  r.d_tv = total_variation(p, q).value;
  r.d_delta = delta.value;
  r.delta_star = delta_star(p, q).value;
  r.delta_max = delta_max(p, q).value;
  r.case_tag = delta.case_tag;
  r.clutter_tv = clutter.tv_clutter;
  r.clutter_delta = clutter.delta_clutter;
  r.a_term = delta.a_term;
  r.b_term = delta.b_term;
  r.log_base_kl = options.kl_base.value();
  r.kl_clipped = options.measures.kl && r.d_kl > options.kl_ceiling;
  check_row(r);
  return r;
}

void run_scatter(const SamplerConfig& config, const ScatterOptions& options,
                 const std::function<void(const ScatterRecord&)>& sink) {
  config.validate();
  const std::optional<std::size_t> mu =
      config.mode == SamplingMode::Unconstrained ? std::nullopt : config.mu;
  const unsigned workers = std::max(1u, options.workers);
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);

  std::vector<ScatterRecord> rows(chunk);
  std::vector<std::exception_ptr> errors(workers);
  for (std::uint64_t start = 0; start < config.count; start += chunk) {
    const std::size_t n = static_cast<std::size_t>(
        std::min<std::uint64_t>(chunk, config.count - start));

    // Worker w owns slots w, w + workers, ...; the first failure by slot
    // index is rethrown so errors are scheduling independent too.
    std::vector<std::size_t> failed_at(workers, n);
    auto work = [&](unsigned w) {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          const std::uint64_t id = start + i;
          rows[i] = evaluate_pair(sample_pair_at(config, id), id, mu, options);
        } catch (...) {
          errors[w] = std::current_exception();
          failed_at[w] = i;
          return;
        }
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    const auto first = std::min_element(failed_at.begin(), failed_at.end());
    if (*first < n) std::rethrow_exception(errors[first - failed_at.begin()]);

    for (std::size_t i = 0; i < n; ++i) sink(rows[i]);
  }
}

ThresholdSweep::ThresholdSweep(std::string measure_name, double reference_threshold,
                               std::vector<double> thresholds)
    : measure_(std::move(measure_name)),
      reference_(reference_threshold),
      thresholds_(std::move(thresholds)),
      fp_(thresholds_.size(), 0),
      fn_(thresholds_.size(), 0) {
  if (!known_measure(measure_)) {
    throw Error(ErrorCode::UnknownMeasure, fmt::format("unknown measure '{}'", measure_));
  }
  if (!(reference_ >= 0.0 && reference_ <= 1.0)) {
    throw Error(ErrorCode::OutOfRange,
                fmt::format("reference threshold {} outside [0, 1]", reference_));
  }
}

void ThresholdSweep::add(const ScatterRecord& r) {
  const bool incongruent = r.d_delta > reference_;
  const double v = record_field(r, measure_);
  if (incongruent) {
    ++incongruent_;
  } else {
    ++congruent_;
  }
  for (std::size_t k = 0; k < thresholds_.size(); ++k) {
    const bool flagged = v > thresholds_[k];
    if (flagged && !incongruent) ++fp_[k];
    if (!flagged && incongruent) ++fn_[k];
  }
}

std::vector<ThresholdReport> ThresholdSweep::reports() const {
  const std::uint64_t total = congruent_ + incongruent_;
  if (total == 0) throw Error(ErrorCode::EmptyInput, "threshold sweep over zero records");
  std::vector<ThresholdReport> out;
  out.reserve(thresholds_.size());
  for (std::size_t k = 0; k < thresholds_.size(); ++k) {
    ThresholdReport rep;
    rep.threshold = thresholds_[k];
    rep.measure_name = measure_;
    rep.reference_measure = "d_delta";
    rep.reference_threshold = reference_;
    rep.false_positives = fp_[k];
    rep.false_negatives = fn_[k];
    rep.congruent = congruent_;
    rep.incongruent = incongruent_;
    rep.sample_count = total;
    rep.false_positive_rate =
        congruent_ ? static_cast<double>(fp_[k]) / static_cast<double>(congruent_) : 0.0;
    rep.false_negative_rate =
        incongruent_ ? static_cast<double>(fn_[k]) / static_cast<double>(incongruent_) : 0.0;
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<ThresholdReport> threshold_sweep(std::span<const ScatterRecord> records,
                                             const std::string& measure_name,
                                             double reference_threshold,
                                             const std::vector<double>& thresholds) {
  ThresholdSweep sweep(measure_name, reference_threshold, thresholds);
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "threshold sweep over zero records");
  for (const auto& r : records) sweep.add(r);
  return sweep.reports();
}

void DeltaBinner::Acc::add(double v) {
  min = std::min(min, v);
  max = std::max(max, v);
  sum += v;
}

Extremes DeltaBinner::Acc::finish(std::uint64_t n) const {
  return {min, max, sum / static_cast<double>(n)};
}

DeltaBinner::DeltaBinner(double bin_width) : width_(bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("bin width {} outside (0, 1]", bin_width));
  }
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
  bins_.resize(std::max<std::size_t>(1, n));
}

void DeltaBinner::add(const ScatterRecord& r) {
  auto k = static_cast<std::size_t>(std::floor(r.d_delta / width_));
  k = std::min(k, bins_.size() - 1);
  Bin& b = bins_[k];
  ++b.count;
  b.tv.add(r.d_tv);
  b.kl.add(r.d_kl);
  b.star.add(r.delta_star);
  b.max.add(r.delta_max);
  b.delta.add(r.d_delta);
  b.gap = std::max(b.gap, std::abs(r.d_tv - r.d_delta));
}

std::vector<BinSummary> DeltaBinner::summaries() const {
  std::vector<BinSummary> out;
  for (std::size_t k = 0; k < bins_.size(); ++k) {
    const Bin& b = bins_[k];
    if (b.count == 0) continue;
    BinSummary s;
    s.bin = k;
    s.lower = static_cast<double>(k) * width_;
    s.upper = k + 1 == bins_.size() ? 1.0 : static_cast<double>(k + 1) * width_;
    s.count = b.count;
    s.d_tv = b.tv.finish(b.count);
    s.d_kl = b.kl.finish(b.count);
    s.delta_star = b.star.finish(b.count);
    s.delta_max = b.max.finish(b.count);
    s.d_delta = b.delta.finish(b.count);
    s.max_tv_gap = b.gap;
    out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "binning over zero records");
  return out;
}

std::vector<BinSummary> bin_by_delta(std::span<const ScatterRecord> records, double bin_width) {
  DeltaBinner binner(bin_width);
  for (const auto& r : records) binner.add(r);
  return binner.summaries();
}

std::optional<TriangleViolation> metric_violation_search(std::size_t m, std::uint64_t triples,
                                                         std::uint64_t seed) {
  if (m < 2) throw Error(ErrorCode::TooFewClasses, "metric search needs m >= 2");
  for (std::uint64_t k = 0; k < triples; ++k) {
    Rng rng = Rng::for_sample(seed, k);
    Distribution a = sample_simplex(m, rng);
    Distribution b = sample_simplex(m, rng);
    Distribution c = sample_simplex(m, rng);
    const double ac = delta_divergence(a, c).value;
    const double ab = delta_divergence(a, b).value;
    const double bc = delta_divergence(b, c).value;
    const double margin = ac - (ab + bc);
    if (margin > kRelationTolerance) {
      return TriangleViolation{k, std::move(a), std::move(b), std::move(c), ac, ab, bc, margin};
    }
  }
  return std::nullopt;
}

}  // namespace deltadiv
