#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "agent_loop.hpp"
#include "socon/protocols.hpp"

namespace socon {

std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::dual_decomposition: return "dual_decomposition";
    case ProtocolKind::distributed_admm: return "distributed_admm";
    case ProtocolKind::fusion_admm: return "fusion_admm";
  }
  return "?";
}

std::string_view to_string(StepSchedule s) { return s == StepSchedule::constant ? "constant" : "diminishing"; }
std::string_view to_string(FusionScaling s) { return s == FusionScaling::mean ? "mean" : "sum"; }
std::string_view to_string(Execution e) { return e == Execution::serial ? "serial" : "parallel"; }

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::diverged: return "diverged";
  }
  return "?";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view s) {
  if (s == "dual_decomposition" || s == "dual_decomp") return ProtocolKind::dual_decomposition;
  if (s == "distributed_admm" || s == "dist_admm") return ProtocolKind::distributed_admm;
  if (s == "fusion_admm" || s == "semi_admm") return ProtocolKind::fusion_admm;
  return std::nullopt;
}

std::optional<StepSchedule> parse_step_schedule(std::string_view s) {
  if (s == "constant") return StepSchedule::constant;
  if (s == "diminishing") return StepSchedule::diminishing;
  return std::nullopt;
}

std::optional<FusionScaling> parse_fusion_scaling(std::string_view s) {
  if (s == "mean") return FusionScaling::mean;
  if (s == "sum") return FusionScaling::sum;
  return std::nullopt;
}

std::optional<Execution> parse_execution(std::string_view s) {
  if (s == "serial") return Execution::serial;
  if (s == "parallel" || s == "openmp") return Execution::parallel;
  return std::nullopt;
}

void ProtocolConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a positive finite number");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(stop_tolerance >= 0.0)) throw std::invalid_argument("stop_tolerance must be non-negative");
  if (divergence_window < 1) throw std::invalid_argument("divergence_window must be >= 1");
  if (!(divergence_factor > 1.0)) throw std::invalid_argument("divergence_factor must exceed 1");
}

double ProtocolConfig::step(int t) const {
  if (schedule == StepSchedule::diminishing) return alpha / std::sqrt(static_cast<double>(t < 1 ? 1 : t));
  return alpha;
}

ConsensusState::ConsensusState(ProtocolKind kind, std::shared_ptr<const HullOperator> hull,
                               std::shared_ptr<const CommGraph> graph, const ProblemInstance& problem,
                               const ProtocolConfig& config)
    : kind_(kind), hull_(std::move(hull)), graph_(std::move(graph)) {
  if (!hull_ || !graph_) throw std::invalid_argument("ConsensusState: hull and graph are required");
  if (problem.n != hull_->n()) throw std::invalid_argument("ConsensusState: problem and hull dimensions differ");
  if (problem.agents() != graph_->size()) {
    throw std::invalid_argument("ConsensusState: problem has " + std::to_string(problem.agents()) +
                                " agents but graph has " + std::to_string(graph_->size()));
  }

  const int d = hull_->d();
  const Matrix start = SpectraPoint::barycenter(d).matrix();
  const Matrix zero = Matrix::Zero(d, d);
  const int count = problem.agents();

  agents_.resize(count);
  for (int i = 0; i < count; ++i) {
    AgentState& a = agents_[i];
    a.data = problem.data[i];
    if (!a.data.allFinite()) throw std::invalid_argument("ConsensusState: agent " + std::to_string(i) + " data not finite");
    a.adjoint_data = hull_->adjoint(a.data);
    a.z = start;
    a.x = start;
    switch (kind) {
      case ProtocolKind::dual_decomposition:
        for (int j : graph_->in_neighbors(i))
          if (j != i) a.partners.push_back(j);
        break;
      case ProtocolKind::distributed_admm:
        for (int j : graph_->in_neighbors(i))
          if (j != i || config.count_self_loop) a.partners.push_back(j);
        break;
      case ProtocolKind::fusion_admm:
        break;  // a single dual Y^i toward the fusion node
    }
    a.duals.assign(kind == ProtocolKind::fusion_admm ? 1 : a.partners.size(), zero);
  }
  fusion_.z0 = start;

  if (kind == ProtocolKind::distributed_admm) {
    incoming_.assign(count, {});
    for (int i = 0; i < count; ++i) {
      const auto& partners = agents_[i].partners;
      for (int k = 0; k < static_cast<int>(partners.size()); ++k) incoming_[partners[k]].push_back({i, k});
    }
    for (int j = 0; j < count; ++j) {
      if (incoming_[j].empty()) {
        throw std::invalid_argument("distributed ADMM: auxiliary X^" + std::to_string(j) +
                                    " has no coupled constraint; enable count_self_loop or add edges");
      }
    }
  }
}

std::vector<Matrix> ConsensusState::rotations(Execution exec) const {
  std::vector<Matrix> out(agents_.size());
  detail::for_each_agent(exec, agents(), [&](int i) { out[i] = hull_->apply(agents_[i].z); });
  return out;
}

TraceRecord measure(const ConsensusState& state, const Matrix& centralized, Execution exec) {
  const std::vector<Matrix> rot = state.rotations(exec);
  const auto& agents = state.agent_states();

  std::vector<double> residual(rot.size()), value(rot.size()), optimum(rot.size());
  detail::for_each_agent(exec, state.agents(), [&](int i) {
    residual[i] = so_membership(rot[i]).worst();
    value[i] = frobenius_inner(agents[i].data, rot[i]);
    optimum[i] = frobenius_inner(agents[i].data, centralized);
  });

  TraceRecord rec;
  // Fixed summation order keeps traces reproducible across execution modes.
  for (const Edge& e : state.graph().edges()) {
    if (e.receiver != e.sender) rec.disagreement += (rot[e.receiver] - rot[e.sender]).norm();
  }
  for (std::size_t i = 0; i < rot.size(); ++i) {
    rec.optimality_gap += optimum[i] - value[i];
    rec.membership_residual = std::max(rec.membership_residual, residual[i]);
  }
  return rec;
}

}  // namespace socon
