#include <benchmark/benchmark.h>

#include "pec/algebraic_matrix.hpp"
#include "pec/benchgen.hpp"
#include "pec/checker.hpp"
#include "pec/oracle.hpp"

namespace {

pec::GeneratedPair pair_for(std::uint32_t d, bool ancilla, std::uint64_t seed = 1) {
  pec::GenConfig cfg;
  cfg.d = d;
  cfg.with_ancilla = ancilla;
  cfg.seed = seed;
  return pec::gen_pe_pair(cfg);
}

// Zero-ancilla miter test, the Table III left block.
void BM_ZeroAncilla(benchmark::State& state) {
  const auto pair = pair_for(static_cast<std::uint32_t>(state.range(0)), false);
  std::size_t peak = 0;
  for (auto _ : state) {
    const pec::Verdict v = pec::pec_zero_ancilla(pair.c1, pair.c2);
    peak = v.stats.peak_nodes;
    benchmark::DoNotOptimize(v.equivalent);
  }
  state.counters["peak_nodes"] = static_cast<double>(peak);
  state.counters["gates"] = static_cast<double>(pair.c1.gate_count() + pair.c2.gate_count());
}
BENCHMARK(BM_ZeroAncilla)->Arg(5)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_General(benchmark::State& state) {
  const auto pair = pair_for(static_cast<std::uint32_t>(state.range(0)), state.range(1) != 0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pec::pec_general(pair.c1, pair.c2).equivalent);
}
BENCHMARK(BM_General)->Args({5, 0})->Args({5, 1})->Args({8, 1})->Unit(benchmark::kMillisecond);

void BM_Total(benchmark::State& state) {
  pec::GenConfig cfg;
  cfg.d = static_cast<std::uint32_t>(state.range(0));
  const auto pair = pec::gen_te_pair(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(pec::total_equivalence(pair.c1, pair.c2).equivalent);
}
BENCHMARK(BM_Total)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Theorem1(benchmark::State& state) {
  const auto pair = pair_for(static_cast<std::uint32_t>(state.range(0)), false);
  for (auto _ : state) benchmark::DoNotOptimize(pec::theorem1_check(pair.c1, pair.c2).equivalent);
}
BENCHMARK(BM_Theorem1)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

// Cost of building the implicit matrix of a single circuit.
void BM_BuildMatrix(benchmark::State& state) {
  const auto pair = pair_for(static_cast<std::uint32_t>(state.range(0)), false);
  for (auto _ : state) {
    pec::BddManager mgr(2 * pair.c2.qubits(), pec::matrix_variable_order(pair.c2.qubits()));
    pec::AlgebraicMatrix f = pec::AlgebraicMatrix::identity(mgr, pair.c2.qubits());
    f.apply(pair.c2);
    benchmark::DoNotOptimize(f.slice_width());
  }
}
BENCHMARK(BM_BuildMatrix)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
