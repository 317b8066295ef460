#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "counted/error.hpp"

// Synthetic transfer-count populations.
//
// Counts follow a discrete power law truncated to [1, x_max]:
// P(X = x) = x^-alpha / sum_{j=1}^{x_max} j^-alpha.
namespace counted::popgen {

enum class Collection : std::uint8_t { PFP, Art, Gaming, Memberships, Metaverse };

inline constexpr std::array<Collection, 5> kCollections{
    Collection::PFP, Collection::Art, Collection::Gaming, Collection::Memberships,
    Collection::Metaverse};

std::string_view to_string(Collection c) noexcept;
std::optional<Collection> collection_from_string(std::string_view name) noexcept;

inline constexpr std::uint64_t kDefaultMaxCount = 1000;

struct CollectionProfile {
  Collection collection = Collection::PFP;
  double exponent = 2.0;  // alpha > 1
  std::uint64_t max_count = kDefaultMaxCount;
  std::size_t n_tokens = 10'000;
};

void validate(const CollectionProfile& p);

class TruncatedPowerLaw {
 public:
  TruncatedPowerLaw(double exponent, std::uint64_t max_count);

  double exponent() const noexcept { return exponent_; }
  std::uint64_t max_count() const noexcept { return cdf_.size(); }

  double pmf(std::uint64_t x) const noexcept;
  double cdf(std::uint64_t x) const noexcept;
  // P(X > x)
  double tail(std::uint64_t x) const noexcept;
  double mean() const noexcept { return mean_; }

  // Smallest x with CDF(x) >= pct / 100.
  std::uint64_t percentile(unsigned pct) const noexcept;

  // Inverse-CDF draw for u in [0, 1).
  std::uint32_t draw(double u) const noexcept;

 private:
  double exponent_;
  double norm_;
  double mean_;
  std::vector<double> cdf_;  // cdf_[x - 1] = P(X <= x)
};

// Block-seeded sampling: tokens are cut into fixed blocks, each with its
// own mt19937_64 seeded from (seed, block) through splitmix64, so the output
// does not depend on how many shards run.
inline constexpr std::size_t kSampleBlock = 4096;
inline constexpr std::string_view kGeneratorName =
    "mt19937_64/splitmix64-block4096/inverse-cdf";

std::vector<std::uint32_t> sample(const CollectionProfile& profile, std::uint64_t seed,
                                  unsigned shards = 1);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct PopulationStats {
  double mean = 0.0;
  std::uint64_t median = 0;
  std::uint64_t p90 = 0;
  std::uint64_t p95 = 0;
  std::uint64_t p99 = 0;
};

// Nearest-rank percentiles. Throws EmptyPopulation.
PopulationStats stats(std::span<const std::uint32_t> counts);

// Percentage of tokens with count > cap, one entry per cap.
std::vector<double> exceed_fraction(std::span<const std::uint32_t> counts,
                                    std::span<const std::uint64_t> caps);

// Exact P(X > cap) for the profile's distribution.
double analytic_exceed(const CollectionProfile& profile, std::uint64_t cap);

PopulationStats analytic_stats(const TruncatedPowerLaw& dist);

// (count, frequency) pairs for every count present, ascending.
std::vector<std::pair<std::uint64_t, double>> histogram(std::span<const std::uint32_t> counts);

struct Calibration {
  CollectionProfile profile;
  PopulationStats fitted;  // analytic statistics at the fitted exponent
  double loss = 0.0;
};

inline constexpr double kMinExponent = 1.05;
inline constexpr double kMaxExponent = 6.0;

// Fits alpha to percentile targets. The median must match exactly; among
// feasible exponents the squared log error of P90/P95/P99 is minimized on a
// grid, then the plateau of exponents sharing the winning percentiles is
// located by bisection and its midpoint returned (or the search bound when
// the plateau runs into it). Throws Infeasible when no exponent in
// [kMinExponent, kMaxExponent] meets the median.
Calibration calibrate(const PopulationStats& targets, std::uint64_t max_count,
                      Collection collection = Collection::PFP, std::size_t n_tokens = 10'000);

// Published per-collection statistics used as calibration targets.
PopulationStats reference_targets(Collection c) noexcept;

}  // namespace counted::popgen
