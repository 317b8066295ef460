#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "counted/error.hpp"

// Transfer-adjusted valuation.
//
// With r = L - k transfers left, a capped token is worth
// V_base * f(r / L) where f is the mobility premium (f(1) = 1). An unbounded
// token (L = 0) is always worth V_base.
namespace counted::econ {

struct Linear {
  friend bool operator==(const Linear&, const Linear&) = default;
};

// f(x) = x^gamma; concave below 1, convex above.
struct Power {
  double gamma = 0.5;
  friend bool operator==(const Power&, const Power&) = default;
};

// f(x) = (x - tau) / (1 - tau) above tau, `residual` at or below it.
struct Threshold {
  double tau = 0.2;
  double residual = 0.05;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

using PremiumModel = std::variant<Linear, Power, Threshold>;

std::string model_name(const PremiumModel& model);

// Throws Error(DomainError) when x is outside [0, 1] or the parameters are
// out of range.
double premium(const PremiumModel& model, double x);

struct ValuationInput {
  double base_value = 10.0;
  std::uint64_t used = 0;   // k
  std::uint64_t limit = 0;  // L, 0 = unbounded
};

double value(const PremiumModel& model, const ValuationInput& input);

// Value lost by the (k+1)-th transfer: V(k) - V(k+1).
double marginal_cost(const PremiumModel& model, std::uint64_t used, std::uint64_t limit,
                     double base_value);

// The four models compared throughout: linear, concave (0.5), convex (2),
// threshold (tau 0.2, residual 0.05).
std::array<PremiumModel, 4> reference_models();

struct ValuationRow {
  std::uint64_t remaining = 0;
  double ratio = 0.0;  // remaining / L
  std::vector<double> values;  // one per model
};

// Rows for remaining fractions 1, .9, .75, .5, .25, .1, 0 of L.
std::vector<ValuationRow> valuation_table(double base_value, std::uint64_t limit,
                                          std::span<const PremiumModel> models);

enum class TransferStage { First, Midpoint, Last };

std::string stage_name(TransferStage stage);

// "Midpoint" is the remaining 3 -> 2 transition, which is what the
// published marginal-cost figures correspond to for every limit.
std::uint64_t stage_used(TransferStage stage, std::uint64_t limit);

struct MarginalCostRow {
  TransferStage stage = TransferStage::First;
  std::vector<double> percent;  // one per limit, % of V_base
};

// Concave (gamma 0.5) marginal cost at each stage for each limit.
std::vector<MarginalCostRow> marginal_cost_table(double base_value,
                                                 std::span<const std::uint64_t> limits);

}  // namespace counted::econ
