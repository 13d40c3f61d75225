#include "deltadiv/delta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "deltadiv/error.hpp"

namespace deltadiv {

std::string_view to_string(DeltaCase c) noexcept {
  switch (c) {
    case DeltaCase::LabelAgreement: return "LabelAgreement";
    case DeltaCase::DisagreeBothNonnegative: return "DisagreeBothNonnegative";
    case DeltaCase::DisagreeMixedSign: return "DisagreeMixedSign";
  }
  return "Unknown";
}

DeltaCase parse_delta_case(std::string_view name) {
  for (auto c : {DeltaCase::LabelAgreement, DeltaCase::DisagreeBothNonnegative,
                 DeltaCase::DisagreeMixedSign}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown case tag '{}'", name));
}

DeltaBreakdown delta_divergence(const Distribution& p, const Distribution& q) {
  DeltaBreakdown out;
  out.dominant_pair = dominant_pair(p, q);
  const std::size_t w = out.dominant_pair.omega;
  const std::size_t wt = out.dominant_pair.omega_tilde;

  const double a = q[wt] - p[wt];
  const double b = p[w] - q[w];
  out.a_term = a;
  out.b_term = b;

  if (out.dominant_pair.labels_agree()) {
    out.case_tag = DeltaCase::LabelAgreement;
    out.value = std::abs(q[w] - p[w]);
    out.pim = 0.5 * out.value;
    out.group_clutter = 0.5 * out.value;
    out.pim_clutter = 0.5 * (std::abs(a) + std::abs(b));
    return out;
  }

  if (a < 0.0 && b < 0.0) {
    throw std::logic_error("delta_divergence: both dominant differences negative");
  }
  const double abs_sum = std::abs(a) + std::abs(b);
  out.pim = 0.5 * abs_sum;
  out.group_clutter = 0.5 * std::abs(a - b);
  if (a >= 0.0 && b >= 0.0) {
    out.case_tag = DeltaCase::DisagreeBothNonnegative;
    out.value = std::max(a, b);
    out.pim_clutter = out.group_clutter;
  } else {
    out.case_tag = DeltaCase::DisagreeMixedSign;
    out.value = abs_sum;
    out.pim_clutter = out.pim;
  }
  return out;
}

double delta_divergence_merged(const Distribution& p, const Distribution& q) {
  const DominantPair pair = dominant_pair(p, q);
  double dominant = std::abs(q[pair.omega] - p[pair.omega]);
  if (!pair.labels_agree()) dominant += std::abs(q[pair.omega_tilde] - p[pair.omega_tilde]);
  double p_rest = 0.0;
  double q_rest = 0.0;
  for (std::size_t i : pair.nondominant) {
    p_rest += p[i];
    q_rest += q[i];
  }
  return 0.5 * (dominant + std::abs(q_rest - p_rest));
}

ClutterSplit delta_clutter(const Distribution& p, const Distribution& q) {
  const DominantPair pair = dominant_pair(p, q);
  double signed_sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t i : pair.nondominant) {
    const double d = p[i] - q[i];
    signed_sum += d;
    abs_sum += std::abs(d);
  }
  return {0.5 * std::abs(signed_sum), 0.5 * abs_sum};
}

MeasureValue delta_star(const Distribution& p, const Distribution& q) {
  const DominantPair pair = dominant_pair(p, q);
  const std::size_t w = pair.omega;
  const std::size_t wt = pair.omega_tilde;
  return {0.5 * (std::abs(p[w] - q[w]) + std::abs(q[wt] - p[wt])), "delta-star",
          std::nullopt};
}

std::optional<double> delta_max_rearranged(const Distribution& p, const Distribution& q) {
  const DominantPair pair = dominant_pair(p, q);
  if (pair.labels_agree()) return std::nullopt;
  const std::size_t w = pair.omega;
  const std::size_t wt = pair.omega_tilde;
  const double half = 0.5 * (p[w] + q[wt]);
  const double a = q[wt] - p[wt];
  const double b = p[w] - q[w];
  if (b < 0.0) return half - p[wt];
  if (a < 0.0) return half - q[w];
  return half - std::min(q[w], p[wt]);
}

MeasureValue delta_max(const Distribution& p, const Distribution& q) {
  const DominantPair pair = dominant_pair(p, q);
  const std::size_t w = pair.omega;
  const std::size_t wt = pair.omega_tilde;
  const double indicator = pair.labels_agree() ? 0.0 : 1.0;
  const double first = std::abs(p[w] - q[w]) + indicator * std::abs(q[wt] - q[w]);
  const double second = std::abs(q[wt] - p[wt]) + indicator * std::abs(p[w] - p[wt]);
  const double value = 0.5 * std::max(first, second);

  if (const auto closed = delta_max_rearranged(p, q)) {
    if (std::abs(*closed - value) > kRelationTolerance) {
      throw std::logic_error(fmt::format(
          "delta_max: max form {:.17g} disagrees with rearranged form {:.17g}", value,
          *closed));
    }
  }
  return {value, "delta-max", std::nullopt};
}

DeltaRelationships delta_relationships(const Distribution& p, const Distribution& q) {
  const DeltaBreakdown breakdown = delta_divergence(p, q);
  DeltaRelationships r;
  r.delta = breakdown.value;
  r.star = delta_star(p, q).value;
  r.tv = total_variation(p, q).value;

  const double tol = kRelationTolerance;
  r.star_le_delta = r.star <= r.delta + tol;
  r.delta_le_twice_star = r.delta <= 2.0 * r.star + tol;
  r.delta_le_tv = r.delta <= r.tv + tol;
  r.strict_below_tv = r.tv - r.delta > tol;
  if (p.size() == 2) r.equals_tv_two_class = std::abs(r.delta - r.tv) <= tol;

  double branch = 0.0;
  switch (breakdown.case_tag) {
    case DeltaCase::LabelAgreement:
      branch = r.star;
      break;
    case DeltaCase::DisagreeBothNonnegative:
      branch = std::max(std::abs(breakdown.a_term), std::abs(breakdown.b_term));
      break;
    case DeltaCase::DisagreeMixedSign:
      branch = 2.0 * r.star;
      break;
  }
  r.case_branch_matches = std::abs(r.delta - branch) <= tol;
  return r;
}

}  // namespace deltadiv
