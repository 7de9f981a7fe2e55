#include <chrono>
#include <cmath>
#include <sstream>

#include "agent_loop.hpp"
#include "socon/log.hpp"
#include "socon/spectral.hpp"

namespace socon {

void run_round(ConsensusState& state, const ProtocolConfig& config, int t) {
  switch (state.kind()) {
    case ProtocolKind::dual_decomposition: dual_decomposition_round(state, config, t); break;
    case ProtocolKind::distributed_admm: distributed_admm_round(state, config, t); break;
    case ProtocolKind::fusion_admm: fusion_admm_round(state, config, t); break;
  }
}

RunResult run(const ProblemInstance& problem, std::shared_ptr<const CommGraph> graph, const ProtocolConfig& config,
              std::shared_ptr<const HullOperator> hull, const RoundObserver& observer) {
  config.validate();
  if (problem.agents() < 1) throw std::invalid_argument("run: problem has no agents");
  for (int i = 0; i < problem.agents(); ++i) {
    if (problem.data[i].rows() != problem.n || problem.data[i].cols() != problem.n || !problem.data[i].allFinite()) {
      throw std::invalid_argument("run: data matrix of agent " + std::to_string(i) + " is not a finite n x n matrix");
    }
  }
  if (!graph) throw std::invalid_argument("run: graph is required");
  if (!hull) hull = std::make_shared<const HullOperator>(problem.n);
  if (config.kind != ProtocolKind::fusion_admm && !is_strongly_connected(*graph)) {
    throw std::invalid_argument("run: distributed protocols need a strongly connected graph");
  }

  ConsensusState state(config.kind, hull, graph, problem, config);
  const Matrix aggregate = problem.aggregate();

  RunResult result;
  result.centralized = linear_max_over_hull(*hull, aggregate).rotation;
  result.centralized_value = frobenius_inner(aggregate, result.centralized);

  // A lone agent's local problem is the global one: solve it in closed form.
  if (problem.agents() == 1) {
    result.consensus = result.centralized;
    result.consensus_value = result.centralized_value;
    result.termination = Termination::converged;
    return result;
  }

  using clock = std::chrono::steady_clock;
  for (int t = 1; t <= config.max_iters; ++t) {
    const auto start = clock::now();
    try {
      run_round(state, config, t);
    } catch (const DivergenceError& e) {
      result.termination = Termination::diverged;
      result.diagnostic = "round " + std::to_string(t) + ": " + e.what();
      break;
    }
    const double round_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();

    TraceRecord rec = measure(state, result.centralized, config.execution);
    rec.iteration = t;
    rec.wall_ms = round_ms;
    result.trace.push_back(rec);
    result.iterations = t;
    if (observer) observer(t, state);

    if (!std::isfinite(rec.disagreement) || !std::isfinite(rec.optimality_gap)) {
      result.termination = Termination::diverged;
      result.diagnostic = "round " + std::to_string(t) + ": non-finite metrics";
      break;
    }
    if (rec.disagreement < config.stop_tolerance) {
      result.termination = Termination::converged;
      break;
    }
    if (t > config.divergence_window) {
      const double before = result.trace[t - 1 - config.divergence_window].disagreement;
      if (rec.disagreement > config.divergence_factor * std::max(before, config.stop_tolerance)) {
        std::ostringstream msg;
        msg << "disagreement grew from " << before << " to " << rec.disagreement << " over "
            << config.divergence_window << " rounds (round " << t << ")";
        result.termination = Termination::diverged;
        result.diagnostic = msg.str();
        break;
      }
    }
  }

  result.degenerate_events = state.degenerate_events();
  if (result.degenerate_events > 0) {
    warn("repeated top eigenvalue in " + std::to_string(result.degenerate_events) +
         " local maximization(s); used the deterministic tie-break");
  }

  const std::vector<Matrix> rot = state.rotations(config.execution);
  Matrix mean = Matrix::Zero(problem.n, problem.n);
  for (const Matrix& r : rot) mean += r;
  mean /= static_cast<double>(rot.size());
  if (mean.allFinite()) {
    result.consensus = linear_max_over_hull(*hull, mean).rotation;
  } else {
    result.consensus = Matrix::Constant(problem.n, problem.n, std::nan(""));
  }
  result.consensus_value = frobenius_inner(aggregate, result.consensus);
  return result;
}

}  // namespace socon
