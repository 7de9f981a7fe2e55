
#include "agent_loop.hpp"
#include "socon/spectral.hpp"

namespace socon {

void dual_decomposition_round(ConsensusState& state, const ProtocolConfig& config, int t) {
  auto& agents = state.agent_states();
  const HullOperator& hull = state.hull();
  const double step = config.step(t);

  // Phase 1: local linear maximization over the spectrahedron.
  detail::for_each_agent(config.execution, state.agents(), [&](int i) {
    AgentState& a = agents[i];
    Matrix cost = a.adjoint_data;
    for (const Matrix& y : a.duals) cost -= y;
    detail::require_finite(cost, "dual-decomposition cost", i);
    LinearMaxResult best = linear_max_on_spectrahedron(hull, cost);
    a.z = best.point.matrix();
    a.degenerate = !best.unique;
  });

  int degenerate = 0;
  for (const AgentState& a : agents) degenerate += a.degenerate ? 1 : 0;
  state.add_degenerate_events(degenerate);

  // Phase 2: dual step on each owned edge, reading the fresh neighbour Z^j.
  detail::for_each_agent(config.execution, state.agents(), [&](int i) {
    AgentState& a = agents[i];
    for (std::size_t k = 0; k < a.partners.size(); ++k) {
      a.duals[k] -= step * (agents[a.partners[k]].z - a.z);
    }
  });
}

}  // namespace socon
