#include <benchmark/benchmark.h>

#include "counted/ledger.hpp"

namespace {

using counted::ledger::Address;
using counted::ledger::Ledger;

// Ping-pong a token between two holders until the cap settles it.
void BM_TransferToCap(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    Ledger book;
    book.mint(Address{1}, 1, limit);
    Address a{1};
    Address b{2};
    for (std::uint64_t i = 0; i < limit; ++i) {
      book.transfer(a, b, 1);
      std::swap(a, b);
    }
    benchmark::DoNotOptimize(book.events().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransferToCap)->Arg(10)->Arg(100)->Arg(1000);

void BM_Replay(benchmark::State& state) {
  Ledger book;
  const auto tokens = static_cast<std::uint64_t>(state.range(0));
  for (std::uint64_t t = 1; t <= tokens; ++t) {
    book.mint(Address{1}, t, 20);
    for (std::uint64_t i = 0; i < 10; ++i) book.transfer(Address{1 + (i & 1)}, Address{2 - (i & 1)}, t);
  }
  const auto log = book.events();
  for (auto _ : state) {
    auto rebuilt = counted::ledger::replay(log);
    benchmark::DoNotOptimize(rebuilt.tokens().size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.size()));
}
BENCHMARK(BM_Replay)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
