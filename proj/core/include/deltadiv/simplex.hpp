#pragma once

// Probability vectors over a finite class set and the elementary
// information quantities defined on them.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace deltadiv {

inline constexpr double kSumTolerance = 1e-9;

/// Base of the logarithm used by information quantities. Natural and
/// binary bases are exact; any other positive base != 1 is accepted.
class LogBase {
 public:
  static LogBase natural() noexcept { return LogBase(0.0); }
  static LogBase binary() noexcept { return LogBase(2.0); }
  /// Throws Error(OutOfRange) unless base > 0 and base != 1.
  static LogBase of(double base);

  /// log of x in this base; x == 0 gives -inf.
  double log(double x) const noexcept;
  /// Numeric value of the base (e for natural).
  double value() const noexcept;
  bool is_natural() const noexcept { return base_ == 0.0; }

 private:
  explicit LogBase(double base) noexcept : base_(base) {}
  double base_;  // 0 encodes e
};

/// Validated probability vector with m >= 2 entries summing to one.
class Distribution {
 public:
  /// Checks, in order, TooFewClasses, NonFinite, NegativeEntry and
  /// SumOutOfTolerance (|sum - 1| > 1e-9). Accepted input whose sum is off
  /// by more than accumulated rounding noise is divided by its sum.
  static Distribution validate(std::span<const double> raw);
  static Distribution validate(std::initializer_list<double> raw) {
    return validate(std::span<const double>(raw.begin(), raw.size()));
  }

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

/// Index of the largest entry; ties go to the lowest index.
std::size_t dominant(const Distribution& d) noexcept;

/// Dominant classes of two distributions and the indices that belong to
/// neither (the merged nondominant event).
struct DominantPair {
  std::size_t omega = 0;
  std::size_t omega_tilde = 0;
  std::vector<std::size_t> nondominant;

  bool labels_agree() const noexcept { return omega == omega_tilde; }
};

/// Throws Error(DimensionMismatch) when sizes differ.
DominantPair dominant_pair(const Distribution& p, const Distribution& q);

void require_same_size(const Distribution& p, const Distribution& q);

/// Self-information -log p. Returns +inf at p == 0.
/// Throws Error(OutOfRange) when p is outside [0, 1].
double surprisal(double p, LogBase base = LogBase::binary());

/// Shannon entropy with 0 log 0 = 0.
double entropy(const Distribution& d, LogBase base = LogBase::binary());

/// Parses "0.5,0.3,0.2". Throws Error(ParseError) naming the offending
/// field position, then validates.
Distribution parse_distribution(std::string_view text);

}  // namespace deltadiv
