// Serial reference loop vs OpenMP agent phases, one protocol round per
// iteration. Args: agents, n.

#include <benchmark/benchmark.h>

#include <memory>

#include "socon/hull.hpp"
#include "socon/problems.hpp"
#include "socon/protocols.hpp"

namespace {

using namespace socon;

template <ProtocolKind Kind, Execution Exec>
void BM_Round(benchmark::State& st) {
  const int agents = static_cast<int>(st.range(0));
  const int n = static_cast<int>(st.range(1));
  const ProblemInstance problem = averaging_instance(n, agents, 1);
  auto hull = std::make_shared<const HullOperator>(n);
  auto graph = std::make_shared<const CommGraph>(Kind == ProtocolKind::fusion_admm ? CommGraph::complete(agents)
                                                                                    : CommGraph::ring(agents, 2));
  ProtocolConfig cfg;
  cfg.kind = Kind;
  cfg.alpha = Kind == ProtocolKind::dual_decomposition ? 0.1 : 0.5;
  cfg.execution = Exec;
  ConsensusState state(Kind, hull, graph, problem, cfg);
  int t = 0;
  for (auto _ : st) {
    run_round(state, cfg, ++t);
    benchmark::DoNotOptimize(state.agent_states().front().z.data());
  }
  st.SetItemsProcessed(st.iterations() * agents);
}

void Sizes(benchmark::internal::Benchmark* b) {
  b->Args({50, 3})->Args({100, 3})->Args({12, 6})->Args({100, 6})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_Round<ProtocolKind::dual_decomposition, Execution::serial>)->Apply(Sizes);
BENCHMARK(BM_Round<ProtocolKind::dual_decomposition, Execution::parallel>)->Apply(Sizes);
BENCHMARK(BM_Round<ProtocolKind::distributed_admm, Execution::serial>)->Apply(Sizes);
BENCHMARK(BM_Round<ProtocolKind::distributed_admm, Execution::parallel>)->Apply(Sizes);
BENCHMARK(BM_Round<ProtocolKind::fusion_admm, Execution::serial>)->Apply(Sizes);
BENCHMARK(BM_Round<ProtocolKind::fusion_admm, Execution::parallel>)->Apply(Sizes);

BENCHMARK_MAIN();
