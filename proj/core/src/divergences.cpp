#include "deltadiv/divergences.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "deltadiv/error.hpp"

namespace deltadiv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rounding can push a near-zero sum slightly below zero.
double clamp_nonnegative(double v) { return v < 0.0 ? 0.0 : v; }

double kl_term(double q, double p, const LogBase& base) {
  if (q == 0.0) return 0.0;
  if (p == 0.0) return kInf;
  return q * base.log(q / p);
}

std::optional<double> base_value(const LogBase& base) { return base.value(); }

}  // namespace

ConvexGenerator::ConvexGenerator(std::string name, Fn f, std::optional<Fn> f_prime,
                                 std::string domain_note)
    : name_(std::move(name)),
      f_(std::move(f)),
      f_prime_(std::move(f_prime)),
      domain_note_(std::move(domain_note)) {
  if (!f_) throw Error(ErrorCode::InvalidGenerator, name_ + ": empty function");
  const double at_one = f_(1.0);
  if (!(std::abs(at_one) <= 1e-12)) {
    throw Error(ErrorCode::InvalidGenerator,
                fmt::format("{}: f(1) = {} but must be 0", name_, at_one));
  }
  static constexpr std::array<double, 8> grid{0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double a = grid[i];
      const double b = grid[j];
      const double mid = f_(0.5 * (a + b));
      const double chord = 0.5 * (f_(a) + f_(b));
      if (!(mid <= chord + 1e-12)) {
        throw Error(ErrorCode::InvalidGenerator,
                    fmt::format("{}: not convex between {} and {}", name_, a, b));
      }
    }
  }
}

ConvexGenerator ConvexGenerator::named(std::string_view name) {
  if (name == "kl") {
    return ConvexGenerator(
        "kl", [](double t) { return t == 0.0 ? 0.0 : t * std::log(t); },
        Fn([](double t) { return 1.0 + std::log(t); }),
        "t log t, finite on [0, inf) with 0 log 0 = 0; derivative needs t > 0");
  }
  if (name == "tv") {
    return ConvexGenerator(
        "tv", [](double t) { return 0.5 * std::abs(t - 1.0); }, std::nullopt,
        "|t - 1| / 2, finite everywhere; not differentiable at 1");
  }
  if (name == "squared") {
    return ConvexGenerator(
        "squared", [](double t) { return t * t - 1.0; },
        Fn([](double t) { return 2.0 * t; }),
        "t^2 - 1, finite everywhere; chi-square as f-divergence, squared "
        "Euclidean distance as Bregman divergence");
  }
  throw Error(ErrorCode::UnknownMeasure, fmt::format("unknown generator '{}'", name));
}

double ConvexGenerator::derivative(double t) const {
  if (!f_prime_) throw Error(ErrorCode::MissingDerivative, name_ + " has no derivative");
  return (*f_prime_)(t);
}

MeasureValue kl(const Distribution& p, const Distribution& q, LogBase base) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += kl_term(q[i], p[i], base);
  return {clamp_nonnegative(sum), "kl", base_value(base)};
}

MeasureValue kl_symmetrized(const Distribution& p, const Distribution& q, LogBase base) {
  const double forward = kl(p, q, base).value;
  const double backward = kl(q, p, base).value;
  return {forward + backward, "kl-sym(jeffreys-sum)", base_value(base)};
}

MeasureValue jensen_shannon(const Distribution& p, const Distribution& q, LogBase base) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mix = p[i] + q[i];
    if (p[i] > 0.0) sum += p[i] * base.log(2.0 * p[i] / mix);
    if (q[i] > 0.0) sum += q[i] * base.log(2.0 * q[i] / mix);
  }
  return {clamp_nonnegative(0.5 * sum), "js", base_value(base)};
}

MeasureValue total_variation(const Distribution& p, const Distribution& q) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(q[i] - p[i]);
  return {0.5 * sum, "tv", std::nullopt};
}

MeasureValue renyi(const Distribution& p, const Distribution& q, double alpha,
                   LogBase base) {
  require_same_size(p, q);
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw Error(ErrorCode::InvalidAlpha,
                fmt::format("Renyi order must be finite and > 0, got {}", alpha));
  }
  const std::string name = fmt::format("renyi:{:g}", alpha);
  if (alpha == 1.0) return {kl(p, q, base).value, name, base_value(base)};

  double power_sum = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mass += p[i];
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) {
      if (alpha > 1.0) return {kInf, name, base_value(base)};
      continue;
    }
    power_sum += p[i] * std::pow(q[i] / p[i], alpha);
  }
  // Dividing by the reference mass makes D(P, P) exactly zero.
  const double value = base.log(power_sum / mass) / (alpha - 1.0);
  return {clamp_nonnegative(value), name, base_value(base)};
}

MeasureValue renyi_max(const Distribution& p, const Distribution& q, LogBase base) {
  require_same_size(p, q);
  double ratio = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) return {kInf, "renyi:inf", base_value(base)};
    ratio = std::max(ratio, q[i] / p[i]);
  }
  return {clamp_nonnegative(base.log(ratio)), "renyi:inf", base_value(base)};
}

MeasureValue f_divergence(const Distribution& p, const Distribution& q,
                          const ConvexGenerator& gen) {
  require_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      throw Error(ErrorCode::ZeroInReference,
                  fmt::format("reference entry {} is zero", i));
    }
    sum += p[i] * gen(q[i] / p[i]);
  }
  return {clamp_nonnegative(sum), "f-div:" + gen.name(), std::nullopt};
}

MeasureValue bregman(const Distribution& p, const Distribution& q,
                     const ConvexGenerator& gen) {
  require_same_size(p, q);
  if (!gen.has_derivative()) {
    throw Error(ErrorCode::MissingDerivative,
                fmt::format("generator '{}' has no derivative", gen.name()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 || q[i] == 0.0) {
      throw Error(ErrorCode::ZeroEntry, fmt::format("entry {} is zero", i));
    }
    sum += gen(p[i]) - gen(q[i]) - (p[i] - q[i]) * gen.derivative(q[i]);
  }
  return {clamp_nonnegative(sum), "bregman:" + gen.name(), std::nullopt};
}

KlClutter kl_clutter(const Distribution& p, const Distribution& q,
                     const DominantPair& pair, LogBase base) {
  require_same_size(p, q);
  KlClutter split;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = kl_term(q[i], p[i], base);
    if (i == pair.omega || i == pair.omega_tilde) {
      split.dominant_term += term;
    } else {
      split.clutter_term += term;
    }
  }
  return split;
}

}  // namespace deltadiv
