#pragma once

// Seeded Monte-Carlo generation of posterior pairs on the probability
// simplex. Every pair is drawn from its own stream derived from
// (seed, sample index), so results do not depend on evaluation order.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "deltadiv/simplex.hpp"

namespace deltadiv {

enum class SamplingMode { Unconstrained, DominantValue, DominantDiff };

std::string_view to_string(SamplingMode mode) noexcept;
/// Accepts "unconstrained", "dominant-value", "dominant-diff".
SamplingMode parse_sampling_mode(std::string_view name);

inline constexpr std::uint64_t kDefaultRejectionBudget = 1'000'000;

struct SamplerConfig {
  std::size_t classes = 2;
  SamplingMode mode = SamplingMode::Unconstrained;
  std::optional<std::size_t> mu;
  std::optional<double> p_mu;
  /// Single target |P_mu - Q_mu| for DominantDiff. When empty the run
  /// cycles through `diff_grid`.
  std::optional<double> diff;
  std::vector<double> diff_grid;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  /// DominantDiff only: also require mu to be dominant for Q.
  bool both_dominant = false;
  std::uint64_t rejection_budget = kDefaultRejectionBudget;

  /// Throws Error(InvalidConfig) for malformed settings and
  /// Error(InfeasibleConstraint) for constraints no draw can satisfy.
  void validate() const;

  /// Target difference for sample `index`: `diff` if set, else the grid
  /// entry whose equal-allocation block contains `index`.
  double diff_for(std::uint64_t index) const;
};

/// Default dominant-difference grid: 0.00, 0.05, ..., 1.00.
std::vector<double> default_diff_grid();

/// SplitMix64 stream. Cheap to derive per sample, which keeps parallel
/// runs independent of scheduling. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Stream for sample `index` of a run seeded with `seed`.
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Standard exponential, strictly positive and finite.
  double exponential();

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform point on the (m-1)-simplex (flat Dirichlet).
Distribution sample_simplex(std::size_t m, Rng& rng);

/// Envelope used by the dominance rejection sampler. Residual proposes the
/// other entries uniformly; Slack proposes the gaps p_mu - x_i uniformly.
/// Both yield the same law; Auto picks the tighter envelope.
enum class DominanceProposal { Auto, Residual, Slack };

std::string_view to_string(DominanceProposal proposal) noexcept;

struct ConstrainedDraw {
  Distribution dist;
  std::uint64_t attempts = 0;
};

/// probs[mu] = p_mu exactly; the remaining mass is uniform on the
/// sub-simplex, rejecting draws where another entry exceeds p_mu.
/// Throws InfeasibleConstraint (p_mu < 1/m, p_mu > 1, mu >= m) and
/// RejectionBudgetExceeded.
ConstrainedDraw draw_with_dominant(std::size_t m, std::size_t mu, double p_mu, Rng& rng,
                                   std::uint64_t budget = kDefaultRejectionBudget,
                                   DominanceProposal proposal = DominanceProposal::Auto);

Distribution sample_with_dominant(std::size_t m, std::size_t mu, double p_mu, Rng& rng,
                                  std::uint64_t budget = kDefaultRejectionBudget);

struct SampledPair {
  Distribution p;
  Distribution q;
};

/// One pair according to `config.mode`; `index` selects the grid entry in
/// grid-driven DominantDiff runs.
SampledPair sample_pair(const SamplerConfig& config, Rng& rng, std::uint64_t index = 0);

/// Pair `index` of the run, drawn from its counter-derived stream.
SampledPair sample_pair_at(const SamplerConfig& config, std::uint64_t index);

}  // namespace deltadiv
