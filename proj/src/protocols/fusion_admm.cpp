#include "agent_loop.hpp"
#include "socon/spectral.hpp"

namespace socon {

void fusion_admm_round(ConsensusState& state, const ProtocolConfig& config, int /*t*/) {
  auto& agents = state.agent_states();
  FusionState& fusion = state.fusion();
  const double alpha = config.alpha;
  const int count = state.agents();

  // Phase 1: agents project Q^i = (A^dag(D^i) - Y^i)/alpha + Z^0_t.
  detail::for_each_agent(config.execution, count, [&](int i) {
    AgentState& a = agents[i];
    Matrix q = (a.adjoint_data - a.duals[0]) / alpha + fusion.z0;
    detail::require_finite(q, "fusion aggregate Q", i);
    a.z = project_spectrahedron(q).matrix();
  });

  // Phase 2: the fusion node projects Q^0. Serial, fixed order.
  Matrix q0 = Matrix::Zero(fusion.z0.rows(), fusion.z0.cols());
  for (const AgentState& a : agents) q0 += a.duals[0] / alpha + a.z;
  if (config.fusion_scaling == FusionScaling::mean) q0 /= static_cast<double>(count);
  detail::require_finite(q0, "fusion aggregate Q^0", -1);
  fusion.z0 = project_spectrahedron(q0).matrix();

  // Phase 3: Y^i <- Y^i - alpha (Z^0 - Z^i).
  detail::for_each_agent(config.execution, count, [&](int i) {
    AgentState& a = agents[i];
    a.duals[0] -= alpha * (fusion.z0 - a.z);
  });
}

}  // namespace socon
