#include "counted/popgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <tuple>

namespace counted::popgen {

std::string_view to_string(Collection c) noexcept {
  switch (c) {
    case Collection::PFP: return "PFP";
    case Collection::Art: return "Art";
    case Collection::Gaming: return "Gaming";
    case Collection::Memberships: return "Memberships";
    case Collection::Metaverse: return "Metaverse";
  }
  return "PFP";
}

std::optional<Collection> collection_from_string(std::string_view name) noexcept {
  for (auto c : kCollections) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

void validate(const CollectionProfile& p) {
  if (!(p.exponent > 1.0)) throw Error(Errc::DomainError, "power-law exponent must exceed 1");
  if (p.max_count < 1 || p.max_count > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::DomainError, "max_count must lie in [1, 2^32)");
  }
}

TruncatedPowerLaw::TruncatedPowerLaw(double exponent, std::uint64_t max_count)
    : exponent_(exponent) {
  validate({Collection::PFP, exponent, max_count, 0});
  cdf_.resize(max_count);
  double acc = 0.0;
  double first_moment = 0.0;
  for (std::uint64_t x = 1; x <= max_count; ++x) {
    const double w = std::pow(static_cast<double>(x), -exponent);
    acc += w;
    first_moment += w * static_cast<double>(x);
    cdf_[x - 1] = acc;
  }
  norm_ = acc;
  mean_ = first_moment / acc;
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

double TruncatedPowerLaw::pmf(std::uint64_t x) const noexcept {
  if (x < 1 || x > cdf_.size()) return 0.0;
  return std::pow(static_cast<double>(x), -exponent_) / norm_;
}

double TruncatedPowerLaw::cdf(std::uint64_t x) const noexcept {
  if (x < 1) return 0.0;
  if (x >= cdf_.size()) return 1.0;
  return cdf_[x - 1];
}

double TruncatedPowerLaw::tail(std::uint64_t x) const noexcept {
  if (x < 1) return 1.0;
  if (x >= cdf_.size()) return 0.0;
  // Summing the tail directly avoids cancellation in 1 - cdf.
  double acc = 0.0;
  for (std::uint64_t j = cdf_.size(); j > x; --j) {
    acc += std::pow(static_cast<double>(j), -exponent_);
  }
  return acc / norm_;
}

std::uint64_t TruncatedPowerLaw::percentile(unsigned pct) const noexcept {
  const double q = static_cast<double>(pct) / 100.0;
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), q);
  if (it == cdf_.end()) return cdf_.size();
  return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
}

std::uint32_t TruncatedPowerLaw::draw(double u) const noexcept {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - cdf_.begin()) + 1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over the combined input.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::uint32_t> sample(const CollectionProfile& profile, std::uint64_t seed,
                                  unsigned shards) {
  validate(profile);
  const TruncatedPowerLaw dist(profile.exponent, profile.max_count);
  std::vector<std::uint32_t> out(profile.n_tokens);
  const std::size_t blocks = (profile.n_tokens + kSampleBlock - 1) / kSampleBlock;

  auto fill_block = [&](std::size_t block) {
    std::mt19937_64 rng(derive_seed(seed, block));
    const std::size_t begin = block * kSampleBlock;
    const std::size_t end = std::min(begin + kSampleBlock, out.size());
    for (std::size_t i = begin; i < end; ++i) {
      // Top 53 bits -> uniform double in [0, 1); independent of the
      // standard library's distribution implementations.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      out[i] = dist.draw(u);
    }
  };

  shards = std::max(1u, std::min<unsigned>(shards, static_cast<unsigned>(blocks)));
  if (shards <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fill_block(b);
    return out;
  }
  std::vector<std::jthread> workers;
  workers.reserve(shards);
  for (unsigned s = 0; s < shards; ++s) {
    workers.emplace_back([&, s] {
      for (std::size_t b = s; b < blocks; b += shards) fill_block(b);
    });
  }
  workers.clear();
  return out;
}

namespace {

// 1-based nearest rank for an integer percentile.
std::size_t nearest_rank(unsigned pct, std::size_t n) {
  return std::max<std::size_t>(1, (static_cast<std::size_t>(pct) * n + 99) / 100);
}

}  // namespace

PopulationStats stats(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw Error(Errc::EmptyPopulation, "statistics of an empty population");
  std::vector<std::uint32_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (auto c : sorted) sum += c;
  auto at = [&](unsigned pct) -> std::uint64_t {
    return sorted[nearest_rank(pct, sorted.size()) - 1];
  };
  return {sum / static_cast<double>(sorted.size()), at(50), at(90), at(95), at(99)};
}

std::vector<double> exceed_fraction(std::span<const std::uint32_t> counts,
                                    std::span<const std::uint64_t> caps) {
  if (counts.empty()) throw Error(Errc::EmptyPopulation, "exceed fraction of an empty population");
  std::vector<double> out;
  out.reserve(caps.size());
  for (std::uint64_t cap : caps) {
    const auto over = std::count_if(counts.begin(), counts.end(),
                                    [cap](std::uint32_t c) { return c > cap; });
    out.push_back(100.0 * static_cast<double>(over) / static_cast<double>(counts.size()));
  }
  return out;
}

double analytic_exceed(const CollectionProfile& profile, std::uint64_t cap) {
  validate(profile);
  return TruncatedPowerLaw(profile.exponent, profile.max_count).tail(cap);
}

PopulationStats analytic_stats(const TruncatedPowerLaw& dist) {
  return {dist.mean(), dist.percentile(50), dist.percentile(90), dist.percentile(95),
          dist.percentile(99)};
}

std::vector<std::pair<std::uint64_t, double>> histogram(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw Error(Errc::EmptyPopulation, "histogram of an empty population");
  std::map<std::uint64_t, std::size_t> tally;
  for (auto c : counts) ++tally[c];
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(tally.size());
  for (auto [count, n] : tally) {
    out.emplace_back(count, static_cast<double>(n) / static_cast<double>(counts.size()));
  }
  return out;
}

namespace {

using Quantiles = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

Quantiles quantiles_at(double exponent, std::uint64_t max_count) {
  const TruncatedPowerLaw dist(exponent, max_count);
  return {dist.percentile(50), dist.percentile(90), dist.percentile(95), dist.percentile(99)};
}

double log_error(const Quantiles& q, const PopulationStats& t) {
  auto sq = [](std::uint64_t model, std::uint64_t target) {
    const double d = std::log(static_cast<double>(model)) -
                     std::log(static_cast<double>(std::max<std::uint64_t>(target, 1)));
    return d * d;
  };
  return sq(std::get<1>(q), t.p90) + sq(std::get<2>(q), t.p95) + sq(std::get<3>(q), t.p99);
}

// Percentiles are non-increasing in the exponent, so "quantiles equal
// `target`" holds on an interval. `inside` is in it, `outside` is not.
double bisect_edge(double inside, double outside, const Quantiles& target,
                   std::uint64_t max_count) {
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (inside + outside);
    (quantiles_at(mid, max_count) == target ? inside : outside) = mid;
  }
  return inside;
}

}  // namespace

Calibration calibrate(const PopulationStats& targets, std::uint64_t max_count,
                      Collection collection, std::size_t n_tokens) {
  constexpr double kStep = 0.005;
  const int steps = static_cast<int>(std::lround((kMaxExponent - kMinExponent) / kStep));

  struct Point {
    double exponent;
    Quantiles q;
  };
  std::vector<Point> grid;
  grid.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double a = i == steps ? kMaxExponent : kMinExponent + kStep * i;
    grid.push_back({a, quantiles_at(a, max_count)});
  }

  std::optional<std::size_t> best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::get<0>(grid[i].q) != targets.median) continue;
    const double loss = log_error(grid[i].q, targets);
    if (loss < best_loss) {
      best_loss = loss;
      best = i;
    }
  }
  if (!best) {
    throw Error(Errc::Infeasible, "no exponent in [" + std::to_string(kMinExponent) + ", " +
                                      std::to_string(kMaxExponent) + "] gives median " +
                                      std::to_string(targets.median));
  }

  const Quantiles winner = grid[*best].q;
  std::size_t first = *best;
  std::size_t last = *best;
  while (first > 0 && grid[first - 1].q == winner) --first;
  while (last + 1 < grid.size() && grid[last + 1].q == winner) ++last;

  const bool open_low = first == 0;
  const bool open_high = last + 1 == grid.size();
  double exponent;
  if (open_high) {
    exponent = kMaxExponent;
  } else if (open_low) {
    exponent = kMinExponent;
  } else {
    const double lo = bisect_edge(grid[first].exponent, grid[first - 1].exponent, winner, max_count);
    const double hi = bisect_edge(grid[last].exponent, grid[last + 1].exponent, winner, max_count);
    exponent = 0.5 * (lo + hi);
  }

  Calibration out;
  out.profile = {collection, exponent, max_count, n_tokens};
  out.fitted = analytic_stats(TruncatedPowerLaw(exponent, max_count));
  out.loss = best_loss;
  return out;
}

PopulationStats reference_targets(Collection c) noexcept {
  switch (c) {
    case Collection::PFP: return {6.30, 1, 9, 19, 83};
    case Collection::Art: return {2.62, 1, 4, 7, 23};
    case Collection::Gaming: return {12.83, 2, 17, 41, 304};
    case Collection::Memberships: return {1.60, 1, 3, 4, 9};
    case Collection::Metaverse: return {4.10, 1, 6, 11, 50};
  }
  return {};
}

}  // namespace counted::popgen
