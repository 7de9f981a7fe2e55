#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "socon/hull.hpp"
#include "socon/linalg.hpp"
#include "socon/problems.hpp"
#include "socon/topology.hpp"

namespace socon {

enum class ProtocolKind { dual_decomposition, distributed_admm, fusion_admm };
enum class StepSchedule { constant, diminishing };  // alpha or alpha/sqrt(t)
enum class FusionScaling { mean, sum };  // fusion Q^0 averaged (1/N) or summed
enum class Execution { serial, parallel };         // reference loop or OpenMP

std::string_view to_string(ProtocolKind k);
std::string_view to_string(StepSchedule s);
std::string_view to_string(FusionScaling s);
std::string_view to_string(Execution e);
std::optional<ProtocolKind> parse_protocol_kind(std::string_view s);
std::optional<StepSchedule> parse_step_schedule(std::string_view s);
std::optional<FusionScaling> parse_fusion_scaling(std::string_view s);
std::optional<Execution> parse_execution(std::string_view s);

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::dual_decomposition;
  double alpha = 1.0;
  StepSchedule schedule = StepSchedule::constant;
  int max_iters = 500;
  double stop_tolerance = 1e-6;
  FusionScaling fusion_scaling = FusionScaling::mean;
  /// Distributed ADMM: keep the Z^i = X^i self-loop constraint (and count it
  /// in |N_i|).
  bool count_self_loop = true;
  Execution execution = Execution::serial;
  /// Abort when disagreement grows by divergence_factor over this many rounds.
  int divergence_window = 50;
  double divergence_factor = 10.0;

  /// Throws std::invalid_argument if alpha <= 0, max_iters < 1, ...
  void validate() const;
  /// alpha_t for round t >= 1.
  double step(int t) const;
};

struct AgentState {
  Matrix data;          // D^i
  Matrix adjoint_data;  // A^dagger(D^i), cached
  Matrix z;             // Z^i
  Matrix x;             // X^i (distributed ADMM)
  /// Dual partners j of the constraints owned by this agent, with Y^{ij}
  /// (dual decomposition, distributed ADMM) or the single fusion dual Y^i.
  std::vector<int> partners;
  std::vector<Matrix> duals;
  bool degenerate = false;  // last linear max hit a repeated top eigenvalue
};

struct FusionState {
  Matrix z0;
};

/// A reference to (agent, slot) with partners[slot] == target, used to gather
/// N^j for distributed ADMM.
struct DualRef {
  int agent;
  int slot;
};

/// Everything a protocol run mutates. Phases read the previous phase's
/// committed state and write disjoint per-agent slots.
class ConsensusState {
 public:
  ConsensusState(ProtocolKind kind, std::shared_ptr<const HullOperator> hull, std::shared_ptr<const CommGraph> graph,
                 const ProblemInstance& problem, const ProtocolConfig& config);

  ProtocolKind kind() const { return kind_; }
  const HullOperator& hull() const { return *hull_; }
  const CommGraph& graph() const { return *graph_; }
  int agents() const { return static_cast<int>(agents_.size()); }

  std::vector<AgentState>& agent_states() { return agents_; }
  const std::vector<AgentState>& agent_states() const { return agents_; }
  FusionState& fusion() { return fusion_; }
  const FusionState& fusion() const { return fusion_; }
  /// For each j: the (agent, slot) pairs whose dual couples to X^j.
  const std::vector<std::vector<DualRef>>& incoming() const { return incoming_; }

  /// R^i = A(Z^i).
  std::vector<Matrix> rotations(Execution exec = Execution::serial) const;
  int degenerate_events() const { return degenerate_events_; }
  void add_degenerate_events(int k) { degenerate_events_ += k; }

 private:
  ProtocolKind kind_;
  std::shared_ptr<const HullOperator> hull_;
  std::shared_ptr<const CommGraph> graph_;
  std::vector<AgentState> agents_;
  FusionState fusion_;
  std::vector<std::vector<DualRef>> incoming_;
  int degenerate_events_ = 0;
};

/// Non-finite aggregate inside a round (step size too large).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Z^i <- argmax <A^dag(D^i) - sum_j Y^{ij}, Z> (rank one, so A(Z^i) in SO(n));
/// then Y^{ij} <- Y^{ij} - alpha_t (Z^j - Z^i).
void dual_decomposition_round(ConsensusState& state, const ProtocolConfig& config, int t);

/// Z^i <- P(M^i / (|N_i| alpha)); X^j <- P(N^j / (c_j alpha));
/// Y^{ij} <- Y^{ij} - alpha (X^j - Z^i), with P the spectrahedron projection.
void distributed_admm_round(ConsensusState& state, const ProtocolConfig& config, int t);

/// Z^i <- P((A^dag(D^i) - Y^i)/alpha + Z^0); Z^0 <- P(scale * sum_i (Y^i/alpha + Z^i));
/// Y^i <- Y^i - alpha (Z^0 - Z^i).
void fusion_admm_round(ConsensusState& state, const ProtocolConfig& config, int t);

void run_round(ConsensusState& state, const ProtocolConfig& config, int t);

struct TraceRecord {
  int iteration = 0;
  double disagreement = 0.0;         // sum over (i,j) in E, i != j, of ||R^i - R^j||_F
  double optimality_gap = 0.0;       // sum_i <D^i, R_bar> - sum_i <D^i, R^i_t>
  double membership_residual = 0.0;  // max_i max(||R^T R - I||_F, |det R - 1|)
  double wall_ms = 0.0;
};

/// Metrics of the current state against the centralized optimum R_bar.
TraceRecord measure(const ConsensusState& state, const Matrix& centralized, Execution exec = Execution::serial);

enum class Termination { converged, max_iters, diverged };
std::string_view to_string(Termination t);

struct RunResult {
  std::vector<TraceRecord> trace;
  Matrix consensus;          // snapped average of the agents' hull elements
  Matrix centralized;        // linear max over the hull of sum_i D^i
  double centralized_value = 0.0;
  double consensus_value = 0.0;  // sum_i <D^i, consensus>
  Termination termination = Termination::max_iters;
  int iterations = 0;
  int degenerate_events = 0;
  std::string diagnostic;
};

/// Called after every round with the committed state.
using RoundObserver = std::function<void(int t, const ConsensusState&)>;

/// Iterate rounds until disagreement < stop_tolerance, max_iters, or
/// divergence. Distributed protocols require a strongly connected graph;
/// the fusion protocol only uses the graph for the disagreement metric.
RunResult run(const ProblemInstance& problem, std::shared_ptr<const CommGraph> graph, const ProtocolConfig& config,
              std::shared_ptr<const HullOperator> hull = nullptr, const RoundObserver& observer = {});

}  // namespace socon
