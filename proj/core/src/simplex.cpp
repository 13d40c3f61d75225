#include "deltadiv/simplex.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "deltadiv/error.hpp"

namespace deltadiv {

LogBase LogBase::of(double base) {
  if (!std::isfinite(base) || base <= 0.0 || base == 1.0) {
    throw Error(ErrorCode::OutOfRange,
                fmt::format("logarithm base must be positive and != 1, got {}", base));
  }
  if (base == std::numbers::e) return natural();
  return LogBase(base);
}

double LogBase::log(double x) const noexcept {
  if (base_ == 0.0) return std::log(x);
  if (base_ == 2.0) return std::log2(x);
  return std::log(x) / std::log(base_);
}

double LogBase::value() const noexcept {
  return base_ == 0.0 ? std::numbers::e : base_;
}

Distribution Distribution::validate(std::span<const double> raw) {
  if (raw.size() < 2) {
    throw Error(ErrorCode::TooFewClasses,
                fmt::format("need at least 2 classes, got {}", raw.size()));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw Error(ErrorCode::NonFinite, fmt::format("entry {} is not finite", i));
    }
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0.0) {
      throw Error(ErrorCode::NegativeEntry,
                  fmt::format("entry {} is negative ({})", i, raw[i]));
    }
  }
  double sum = 0.0;
  for (double v : raw) sum += v;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::SumOutOfTolerance,
                fmt::format("entries sum to {:.17g}", sum));
  }

  std::vector<double> probs(raw.begin(), raw.end());
  // Deviations within summation rounding are left alone so that a
  // validated vector re-validates to itself bit for bit.
  const double noise = 4.0 * static_cast<double>(raw.size()) *
                       std::numeric_limits<double>::epsilon();
  if (std::abs(sum - 1.0) > noise) {
    for (double& v : probs) v /= sum;
  }
  return Distribution(std::move(probs));
}

std::size_t dominant(const Distribution& d) noexcept {
  const auto p = d.probs();
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

void require_same_size(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("distributions have {} and {} classes", p.size(), q.size()));
  }
}

DominantPair dominant_pair(const Distribution& p, const Distribution& q) {
  require_same_size(p, q);
  DominantPair pair;
  pair.omega = dominant(p);
  pair.omega_tilde = dominant(q);
  pair.nondominant.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != pair.omega && i != pair.omega_tilde) pair.nondominant.push_back(i);
  }
  return pair;
}

double surprisal(double p, LogBase base) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("probability {} outside [0, 1]", p));
  }
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  if (p == 1.0) return 0.0;
  return -base.log(p);
}

double entropy(const Distribution& d, LogBase base) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) h -= p * base.log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

Distribution parse_distribution(std::string_view text) {
  std::vector<double> values;
  std::size_t field = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("field {} (offset {}): cannot parse '{}' as a number",
                              field + 1, pos, std::string(token)));
    }
    values.push_back(v);
    ++field;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Distribution::validate(values);
}

}  // namespace deltadiv
