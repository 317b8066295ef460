#include "counted/econ.hpp"

#include <cmath>

namespace counted::econ {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void domain(const std::string& why) { throw Error(Errc::DomainError, why); }

constexpr std::array<double, 7> kTableFractions{1.0, 0.9, 0.75, 0.5, 0.25, 0.1, 0.0};

}  // namespace

std::string model_name(const PremiumModel& model) {
  return std::visit(overloaded{
                        [](const Linear&) { return std::string("linear"); },
                        [](const Power& p) {
                          return std::string(p.gamma < 1.0 ? "concave" : p.gamma > 1.0 ? "convex" : "linear");
                        },
                        [](const Threshold&) { return std::string("threshold"); },
                    },
                    model);
}

double premium(const PremiumModel& model, double x) {
  if (!(x >= 0.0 && x <= 1.0)) domain("premium argument outside [0, 1]");
  return std::visit(overloaded{
                        [&](const Linear&) { return x; },
                        [&](const Power& p) {
                          if (!(p.gamma > 0.0)) domain("power premium needs gamma > 0");
                          return std::pow(x, p.gamma);
                        },
                        [&](const Threshold& t) {
                          if (!(t.tau > 0.0 && t.tau < 1.0)) domain("threshold tau outside (0, 1)");
                          if (!(t.residual >= 0.0 && t.residual < 1.0)) {
                            domain("threshold residual outside [0, 1)");
                          }
                          return x > t.tau ? (x - t.tau) / (1.0 - t.tau) : t.residual;
                        },
                    },
                    model);
}

double value(const PremiumModel& model, const ValuationInput& input) {
  if (!(input.base_value >= 0.0)) domain("negative base value");
  if (input.limit == 0) return input.base_value;
  if (input.used > input.limit) domain("transfer count exceeds limit");
  const double x = static_cast<double>(input.limit - input.used) /
                   static_cast<double>(input.limit);
  return input.base_value * premium(model, x);
}

double marginal_cost(const PremiumModel& model, std::uint64_t used, std::uint64_t limit,
                     double base_value) {
  if (limit == 0) throw Error(Errc::UnboundedToken, "marginal cost of an unbounded token");
  if (used >= limit) throw Error(Errc::NoRemainingBudget, "no transfers remain");
  return value(model, {base_value, used, limit}) - value(model, {base_value, used + 1, limit});
}

std::array<PremiumModel, 4> reference_models() {
  return {Linear{}, Power{0.5}, Power{2.0}, Threshold{0.2, 0.05}};
}

std::vector<ValuationRow> valuation_table(double base_value, std::uint64_t limit,
                                          std::span<const PremiumModel> models) {
  if (limit == 0) throw Error(Errc::UnboundedToken, "valuation table needs a finite limit");
  std::vector<ValuationRow> rows;
  rows.reserve(kTableFractions.size());
  for (double fraction : kTableFractions) {
    ValuationRow row;
    row.remaining = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(limit)));
    row.ratio = static_cast<double>(row.remaining) / static_cast<double>(limit);
    for (const auto& model : models) {
      row.values.push_back(value(model, {base_value, limit - row.remaining, limit}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string stage_name(TransferStage stage) {
  switch (stage) {
    case TransferStage::First: return "First transfer";
    case TransferStage::Midpoint: return "Mid-point";
    case TransferStage::Last: return "Last transfer";
  }
  return "";
}

std::uint64_t stage_used(TransferStage stage, std::uint64_t limit) {
  switch (stage) {
    case TransferStage::First: return 0;
    case TransferStage::Midpoint:
      if (limit < 3) domain("mid-point stage needs a limit of at least 3");
      return limit - 3;
    case TransferStage::Last: return limit - 1;
  }
  return 0;
}

std::vector<MarginalCostRow> marginal_cost_table(double base_value,
                                                 std::span<const std::uint64_t> limits) {
  if (!(base_value > 0.0)) domain("marginal cost table needs a positive base value");
  const PremiumModel concave = Power{0.5};
  std::vector<MarginalCostRow> rows;
  for (auto stage : {TransferStage::First, TransferStage::Midpoint, TransferStage::Last}) {
    MarginalCostRow row{stage, {}};
    for (std::uint64_t limit : limits) {
      if (limit == 0) throw Error(Errc::UnboundedToken, "marginal cost of an unbounded token");
      const double mc = marginal_cost(concave, stage_used(stage, limit), limit, base_value);
      row.percent.push_back(100.0 * mc / base_value);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace counted::econ
