#pragma once

// Baseline divergences: Kullback-Leibler and its symmetrization,
// Jensen-Shannon, total variation, Renyi, and the generic Csiszar and
// Bregman constructions.
//
// Argument order follows the K-L convention D(P, Q) = sum_i Q_i log(Q_i / P_i):
// the first argument is the reference that appears in the denominator.

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "deltadiv/simplex.hpp"

namespace deltadiv {

/// A divergence value. `value` is nonnegative and may be +inf for the
/// unbounded measures (K-L family, Renyi).
struct MeasureValue {
  double value = 0.0;
  std::string measure_name;
  std::optional<double> log_base;
};

/// Convex generator for f-divergences and Bregman divergences.
class ConvexGenerator {
 public:
  using Fn = std::function<double(double)>;

  /// Checks f(1) = 0 within 1e-12 and midpoint convexity on a fixed grid
  /// of positive arguments; throws Error(InvalidGenerator) otherwise.
  ConvexGenerator(std::string name, Fn f, std::optional<Fn> f_prime,
                  std::string domain_note);

  /// Shipped generators: "kl" (t log t), "tv" (|t - 1| / 2) and
  /// "squared" (t^2 - 1). Throws Error(UnknownMeasure) otherwise.
  static ConvexGenerator named(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  const std::string& domain_note() const noexcept { return domain_note_; }
  double operator()(double t) const { return f_(t); }
  bool has_derivative() const noexcept { return f_prime_.has_value(); }
  double derivative(double t) const;

 private:
  std::string name_;
  Fn f_;
  std::optional<Fn> f_prime_;
  std::string domain_note_;
};

/// sum_i Q_i log(Q_i / P_i) with 0 log(0/x) = 0 and +inf when Q_i > 0 = P_i.
MeasureValue kl(const Distribution& p, const Distribution& q,
                LogBase base = LogBase::natural());

/// Jeffreys form kl(P, Q) + kl(Q, P).
MeasureValue kl_symmetrized(const Distribution& p, const Distribution& q,
                            LogBase base = LogBase::natural());

/// Bounded by one in base 2.
MeasureValue jensen_shannon(const Distribution& p, const Distribution& q,
                            LogBase base = LogBase::binary());

MeasureValue total_variation(const Distribution& p, const Distribution& q);

/// (1 / (alpha - 1)) log sum_i P_i (Q_i / P_i)^alpha. alpha == 1 returns
/// kl(P, Q). Throws Error(InvalidAlpha) for alpha <= 0 or non-finite alpha.
MeasureValue renyi(const Distribution& p, const Distribution& q, double alpha,
                   LogBase base = LogBase::natural());

/// Order-infinity limit: log max_i Q_i / P_i.
MeasureValue renyi_max(const Distribution& p, const Distribution& q,
                       LogBase base = LogBase::natural());

/// sum_i P_i f(Q_i / P_i). Requires every P_i > 0 (ZeroInReference).
MeasureValue f_divergence(const Distribution& p, const Distribution& q,
                          const ConvexGenerator& gen);

/// sum_i f(P_i) - f(Q_i) - (P_i - Q_i) f'(Q_i). Requires strictly positive
/// entries (ZeroEntry) and a generator derivative (MissingDerivative).
MeasureValue bregman(const Distribution& p, const Distribution& q,
                     const ConvexGenerator& gen);

/// K-L split into the dominant-class contribution and the clutter from
/// the remaining classes. On label agreement the dominant part is the
/// single term at omega; on disagreement it covers omega and omega_tilde.
struct KlClutter {
  double dominant_term = 0.0;
  double clutter_term = 0.0;
};

KlClutter kl_clutter(const Distribution& p, const Distribution& q,
                     const DominantPair& pair, LogBase base = LogBase::natural());

}  // namespace deltadiv
