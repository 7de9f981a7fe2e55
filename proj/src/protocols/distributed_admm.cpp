#include "agent_loop.hpp"
#include "socon/spectral.hpp"

namespace socon {

void distributed_admm_round(ConsensusState& state, const ProtocolConfig& config, int /*t*/) {
  auto& agents = state.agent_states();
  const auto& incoming = state.incoming();
  const double alpha = config.alpha;
  const int count = state.agents();

  // Phase 1: Z^i from M^i = A^dag(D^i) - sum_j (Y^{ij} - alpha X^j), using X_t.
  std::vector<Matrix> z_next(count);
  detail::for_each_agent(config.execution, count, [&](int i) {
    const AgentState& a = agents[i];
    Matrix m = a.adjoint_data;
    for (std::size_t k = 0; k < a.partners.size(); ++k) m -= a.duals[k] - alpha * agents[a.partners[k]].x;
    m /= static_cast<double>(a.partners.size()) * alpha;
    detail::require_finite(m, "ADMM aggregate M", i);
    z_next[i] = project_spectrahedron(m).matrix();
  });
  for (int i = 0; i < count; ++i) agents[i].z = std::move(z_next[i]);

  // Phase 2: X^j from N^j = sum_{i:(i,j) in E} (Y^{ij} + alpha Z^i_{t+1}).
  std::vector<Matrix> x_next(count);
  detail::for_each_agent(config.execution, count, [&](int j) {
    Matrix n = Matrix::Zero(agents[j].x.rows(), agents[j].x.cols());
    for (const DualRef& ref : incoming[j]) n += agents[ref.agent].duals[ref.slot] + alpha * agents[ref.agent].z;
    n /= static_cast<double>(incoming[j].size()) * alpha;
    detail::require_finite(n, "ADMM aggregate N", j);
    x_next[j] = project_spectrahedron(n).matrix();
  });
  for (int j = 0; j < count; ++j) agents[j].x = std::move(x_next[j]);

  // Phase 3: Y^{ij} <- Y^{ij} - alpha (X^j - Z^i).
  detail::for_each_agent(config.execution, count, [&](int i) {
    AgentState& a = agents[i];
    for (std::size_t k = 0; k < a.partners.size(); ++k) a.duals[k] -= alpha * (agents[a.partners[k]].x - a.z);
  });
}

}  // namespace socon
