#include "deltadiv/sampling.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "deltadiv/error.hpp"

namespace deltadiv {
namespace {

// Fills `out` with a uniform point of the simplex {x >= 0, sum x = total}.
void fill_uniform_simplex(std::span<double> out, double total, Rng& rng) {
  double sum = 0.0;
  for (double& v : out) {
    v = rng.exponential();
    sum += v;
  }
  const double scale = total / sum;
  for (double& v : out) v *= scale;
}

struct Interval {
  double lo;
  double hi;
  bool empty() const { return lo > hi; }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

// Admissible P_mu values for a dominant-difference draw: P_mu >= 1/m and at
// least one of P_mu - diff, P_mu + diff keeps Q_mu in [q_floor, 1].
std::vector<Interval> feasible_p_range(std::size_t m, double diff, double q_floor) {
  const double inv_m = 1.0 / static_cast<double>(m);
  const Interval minus{std::max(inv_m, diff + q_floor), 1.0};
  const Interval plus{std::max(inv_m, q_floor - diff), 1.0 - diff};
  std::vector<Interval> out;
  if (minus.empty() && plus.empty()) return out;
  if (minus.empty()) return {plus};
  if (plus.empty()) return {minus};
  if (minus.lo <= plus.hi) return {{std::min(minus.lo, plus.lo), 1.0}};
  return {plus, minus};
}

double draw_from(const std::vector<Interval>& range, Rng& rng) {
  double total = 0.0;
  for (const auto& r : range) total += r.length();
  if (total == 0.0) return range.front().lo;
  double u = rng.uniform() * total;
  for (const auto& r : range) {
    if (u < r.length()) return r.lo + u;
    u -= r.length();
  }
  return range.back().hi;
}

}  // namespace

std::string_view to_string(SamplingMode mode) noexcept {
  switch (mode) {
    case SamplingMode::Unconstrained: return "unconstrained";
    case SamplingMode::DominantValue: return "dominant-value";
    case SamplingMode::DominantDiff: return "dominant-diff";
  }
  return "unknown";
}

SamplingMode parse_sampling_mode(std::string_view name) {
  for (auto mode : {SamplingMode::Unconstrained, SamplingMode::DominantValue,
                    SamplingMode::DominantDiff}) {
    if (to_string(mode) == name) return mode;
  }
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown sampling mode '{}'", name));
}

std::string_view to_string(DominanceProposal proposal) noexcept {
  switch (proposal) {
    case DominanceProposal::Auto: return "auto";
    case DominanceProposal::Residual: return "residual";
    case DominanceProposal::Slack: return "slack";
  }
  return "unknown";
}

std::vector<double> default_diff_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(static_cast<double>(i) * 0.05);
  grid.back() = 1.0;
  return grid;
}

void SamplerConfig::validate() const {
  if (classes < 2) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("classes must be >= 2, got {}", classes));
  }
  if (count < 1) throw Error(ErrorCode::InvalidConfig, "count must be >= 1");
  if (rejection_budget < 1) throw Error(ErrorCode::InvalidConfig, "rejection budget must be >= 1");
  if (mode == SamplingMode::Unconstrained) return;

  if (!mu) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("mode {} requires a constrained class index (mu)", to_string(mode)));
  }
  if (*mu >= classes) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("mu = {} is out of range for {} classes", *mu, classes));
  }
  const double inv_m = 1.0 / static_cast<double>(classes);

  if (mode == SamplingMode::DominantValue) {
    if (!p_mu) throw Error(ErrorCode::InvalidConfig, "mode dominant-value requires p_mu");
    if (!std::isfinite(*p_mu)) throw Error(ErrorCode::InvalidConfig, "p_mu must be finite");
    if (*p_mu < inv_m || *p_mu > 1.0) {
      throw Error(ErrorCode::InfeasibleConstraint,
                  fmt::format("p_mu = {} cannot be dominant among {} classes; need 1/m <= p_mu <= 1",
                              *p_mu, classes));
    }
    return;
  }

  std::vector<double> diffs = diff ? std::vector<double>{*diff} : diff_grid;
  if (diffs.empty()) {
    throw Error(ErrorCode::InvalidConfig, "mode dominant-diff requires diff or a diff grid");
  }
  const double q_floor = both_dominant ? inv_m : 0.0;
  for (double d : diffs) {
    if (!std::isfinite(d)) throw Error(ErrorCode::InvalidConfig, "diff must be finite");
    if (d < 0.0 || d > 1.0) {
      throw Error(ErrorCode::InfeasibleConstraint,
                  fmt::format("diff = {} is outside [0, 1]", d));
    }
    if (feasible_p_range(classes, d, q_floor).empty()) {
      throw Error(ErrorCode::InfeasibleConstraint,
                  fmt::format("no P_mu admits |P_mu - Q_mu| = {}{}", d,
                              both_dominant ? " with mu dominant in both" : ""));
    }
  }
}

double SamplerConfig::diff_for(std::uint64_t index) const {
  if (diff) return *diff;
  const std::uint64_t n = diff_grid.size();
  const std::uint64_t per = count / n;
  const std::uint64_t rem = count % n;
  const std::uint64_t wide = rem * (per + 1);
  const std::uint64_t block = index < wide ? index / (per + 1) : rem + (index - wide) / per;
  return diff_grid[std::min<std::uint64_t>(block, n - 1)];
}

Rng Rng::for_sample(std::uint64_t seed, std::uint64_t index) noexcept {
  // Streams start at hashed, effectively random points of the 2^64 cycle.
  return Rng(mix(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL)));
}

double Rng::exponential() {
  // 1 - u lies in (0, 1], so the result is finite and >= 0; zero is
  // rejected to keep simplex draws strictly positive.
  while (true) {
    const double e = -std::log(1.0 - uniform());
    if (e > 0.0) return e;
  }
}

Distribution sample_simplex(std::size_t m, Rng& rng) {
  if (m < 2) throw Error(ErrorCode::TooFewClasses, "simplex sampling needs m >= 2");
  std::vector<double> x(m);
  fill_uniform_simplex(x, 1.0, rng);
  return Distribution::validate(x);
}

ConstrainedDraw draw_with_dominant(std::size_t m, std::size_t mu, double p_mu, Rng& rng,
                                   std::uint64_t budget, DominanceProposal proposal) {
  if (m < 2) throw Error(ErrorCode::TooFewClasses, "need m >= 2");
  if (mu >= m) {
    throw Error(ErrorCode::InfeasibleConstraint,
                fmt::format("class {} does not exist among {} classes", mu, m));
  }
  const double md = static_cast<double>(m);
  if (!(p_mu >= 1.0 / md && p_mu <= 1.0)) {
    throw Error(ErrorCode::InfeasibleConstraint,
                fmt::format("p_mu = {} cannot be dominant among {} classes", p_mu, m));
  }

  // Residual proposal: uniform on {x >= 0, sum x = 1 - p}, accept if all
  // x_i <= p. Slack proposal: y_i = p - x_i uniform on {y >= 0,
  // sum y = m p - 1}, accept if all y_i <= p. Both are uniform on the target
  // region; the smaller envelope is chosen automatically.
  if (proposal == DominanceProposal::Auto) {
    proposal = md * p_mu - 1.0 < 1.0 - p_mu ? DominanceProposal::Slack
                                             : DominanceProposal::Residual;
  }
  const double slack_total = std::max(0.0, md * p_mu - 1.0);

  std::vector<double> probs(m);
  std::vector<double> rest(m - 1);
  for (std::uint64_t attempt = 1; attempt <= budget; ++attempt) {
    bool ok = true;
    if (proposal == DominanceProposal::Residual) {
      fill_uniform_simplex(rest, 1.0 - p_mu, rng);
      for (double v : rest) ok = ok && v <= p_mu;
    } else {
      fill_uniform_simplex(rest, slack_total, rng);
      for (double& v : rest) {
        ok = ok && v <= p_mu;
        v = p_mu - v;
      }
    }
    if (!ok) continue;
    for (std::size_t i = 0, k = 0; i < m; ++i) probs[i] = i == mu ? p_mu : rest[k++];
    return {Distribution::validate(probs), attempt};
  }
  throw Error(ErrorCode::RejectionBudgetExceeded,
              fmt::format("no draw with class {} at {} dominant after {} attempts", mu, p_mu,
                          budget));
}

Distribution sample_with_dominant(std::size_t m, std::size_t mu, double p_mu, Rng& rng,
                                  std::uint64_t budget) {
  return draw_with_dominant(m, mu, p_mu, rng, budget).dist;
}

SampledPair sample_pair(const SamplerConfig& config, Rng& rng, std::uint64_t index) {
  const std::size_t m = config.classes;
  switch (config.mode) {
    case SamplingMode::Unconstrained: {
      Distribution p = sample_simplex(m, rng);
      Distribution q = sample_simplex(m, rng);
      return {std::move(p), std::move(q)};
    }
    case SamplingMode::DominantValue: {
      Distribution p = sample_with_dominant(m, *config.mu, *config.p_mu, rng,
                                            config.rejection_budget);
      Distribution q = sample_simplex(m, rng);
      return {std::move(p), std::move(q)};
    }
    case SamplingMode::DominantDiff:
      break;
  }

  const std::size_t mu = *config.mu;
  const double diff = config.diff_for(index);
  const double q_floor = config.both_dominant ? 1.0 / static_cast<double>(m) : 0.0;
  const auto range = feasible_p_range(m, diff, q_floor);
  if (range.empty()) {
    throw Error(ErrorCode::InfeasibleConstraint,
                fmt::format("no P_mu admits |P_mu - Q_mu| = {}", diff));
  }
  const double p_mu = draw_from(range, rng);
  Distribution p = sample_with_dominant(m, mu, p_mu, rng, config.rejection_budget);

  const bool can_minus = p_mu - diff >= q_floor;
  const bool can_plus = p_mu + diff <= 1.0;
  bool minus = can_minus;
  if (can_minus && can_plus) minus = rng.uniform() < 0.5;
  const double q_mu = std::clamp(minus ? p_mu - diff : p_mu + diff, 0.0, 1.0);

  if (config.both_dominant) {
    Distribution q = sample_with_dominant(m, mu, q_mu, rng, config.rejection_budget);
    return {std::move(p), std::move(q)};
  }
  std::vector<double> q(m);
  std::vector<double> rest(m - 1);
  fill_uniform_simplex(rest, 1.0 - q_mu, rng);
  for (std::size_t i = 0, k = 0; i < m; ++i) q[i] = i == mu ? q_mu : rest[k++];
  return {std::move(p), Distribution::validate(q)};
}

SampledPair sample_pair_at(const SamplerConfig& config, std::uint64_t index) {
  Rng rng = Rng::for_sample(config.seed, index);
  return sample_pair(config, rng, index);
}

}  // namespace deltadiv
