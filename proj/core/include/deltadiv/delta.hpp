#pragma once

// Delta divergence: total variation computed over three outcomes only,
// the two dominant classes and the merged event that neither is the true
// class. Also the decision-dependent heuristics it is compared with.

#include <optional>
#include <string_view>

#include "deltadiv/divergences.hpp"
#include "deltadiv/simplex.hpp"

namespace deltadiv {

inline constexpr double kRelationTolerance = 1e-12;

enum class DeltaCase {
  LabelAgreement,
  DisagreeBothNonnegative,
  DisagreeMixedSign,
};

std::string_view to_string(DeltaCase c) noexcept;
/// Throws Error(ParseError) on unknown names.
DeltaCase parse_delta_case(std::string_view name);

/// Delta divergence with its case analysis.
///
/// With w = argmax P and wt = argmax Q:
///   a_term = Q[wt] - P[wt],  b_term = P[w] - Q[w].
/// The value is |Q[w] - P[w]| on agreement, max(a, b) when the labels
/// disagree and both terms are nonnegative, and |a| + |b| otherwise.
///
/// `pim + group_clutter == value` in every case. On disagreement
/// pim = (|a| + |b|) / 2 and group_clutter = |a - b| / 2; on agreement both
/// are |P[w] - Q[w]| / 2 (the dominant term and the merged complement term).
/// `pim_clutter` is the literal piecewise group clutter: |a - b| / 2 when
/// both terms are nonnegative with disagreeing labels, (|a| + |b|) / 2
/// otherwise.
struct DeltaBreakdown {
  double value = 0.0;
  DeltaCase case_tag = DeltaCase::LabelAgreement;
  double a_term = 0.0;
  double b_term = 0.0;
  double pim = 0.0;
  double group_clutter = 0.0;
  double pim_clutter = 0.0;
  DominantPair dominant_pair;
};

/// Closed-form evaluation. Throws Error(DimensionMismatch).
DeltaBreakdown delta_divergence(const Distribution& p, const Distribution& q);

/// Direct evaluation of the three-outcome total variation, summing the
/// nondominant masses explicitly. Independent of the case analysis.
double delta_divergence_merged(const Distribution& p, const Distribution& q);

struct ClutterSplit {
  double delta_clutter = 0.0;  ///< |P(merged) - Q(merged)| / 2
  double tv_clutter = 0.0;     ///< sum over nondominant classes of |P_i - Q_i| / 2
};

ClutterSplit delta_clutter(const Distribution& p, const Distribution& q);

/// (|P[w] - Q[w]| + |Q[wt] - P[wt]|) / 2.
MeasureValue delta_star(const Distribution& p, const Distribution& q);

/// Max-form heuristic. On disagreement the result is cross-checked against
/// the rearranged closed forms; a mismatch beyond 1e-12 throws
/// std::logic_error.
MeasureValue delta_max(const Distribution& p, const Distribution& q);

/// Rearranged disagreement form (P[w] + Q[wt]) / 2 - c, with c chosen by
/// the signs of a_term and b_term. Empty on label agreement.
std::optional<double> delta_max_rearranged(const Distribution& p, const Distribution& q);

struct DeltaRelationships {
  double delta = 0.0;
  double star = 0.0;
  double tv = 0.0;
  bool star_le_delta = false;        ///< delta_star <= D
  bool delta_le_twice_star = false;  ///< D <= 2 delta_star
  bool delta_le_tv = false;          ///< D <= D_T
  bool strict_below_tv = false;      ///< D_T - D > 1e-12
  /// Set only for two classes: D == D_T within tolerance.
  std::optional<bool> equals_tv_two_class;
  /// D matches the per-case value expressed through delta_star.
  bool case_branch_matches = false;

  bool all_hold() const noexcept {
    return star_le_delta && delta_le_twice_star && delta_le_tv &&
           equals_tv_two_class.value_or(true) && case_branch_matches;
  }
};

DeltaRelationships delta_relationships(const Distribution& p, const Distribution& q);

}  // namespace deltadiv
