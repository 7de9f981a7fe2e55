#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "socon/config.hpp"
#include "socon/problems.hpp"
#include "socon/protocols.hpp"
#include "socon/topology.hpp"

namespace socon {

/// First line of every trace CSV.
inline constexpr const char* kTraceSchema = "# socon-trace v1";
/// First line of every sweep aggregate CSV.
inline constexpr const char* kSweepSchema = "# socon-sweep v1";

/// Environment variable naming the default output root.
inline constexpr const char* kOutDirEnv = "SOCON_OUT_DIR";

enum class ProblemKind { averaging, pose, custom };
enum class TopologyKind { ring, complete, edge_list };
enum class SweepParameter { active_agents, alpha, sigma };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::averaging;
  int n = 3;
  int agents = 8;
  double sigma = 0.05;               // pose
  int points = 1889;                 // pose, synthetic cloud size
  std::filesystem::path cloud;       // pose, optional CSV / OBJ model
  std::filesystem::path data;        // custom D-matrices
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::ring;
  int hops = 1;
  std::filesystem::path path;  // edge_list
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::active_agents;
  std::vector<double> values;
  int trials = 100;
};

struct ExperimentConfig {
  std::string name;
  ProblemSpec problem;
  TopologySpec topology;
  ProtocolConfig protocol;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> out_dir;
  bool trace_timing = false;
  std::optional<SweepSpec> sweep;
};

/// Relative input paths (cloud, data, edge list) resolve against base_dir.
ExperimentConfig parse_experiment(const config::Document& doc, const std::filesystem::path& base_dir,
                                  std::string name);
ExperimentConfig load_experiment(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> max_iters;
  std::optional<double> alpha;
  std::optional<bool> timing;
  std::optional<Execution> execution;
};
void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

/// --out-dir / config output.dir, else $SOCON_OUT_DIR/<name>, else out/<name>.
std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg);

struct Experiment {
  ProblemInstance problem;
  std::shared_ptr<const CommGraph> graph;
};

/// Builds the problem and graph for a given seed (the sweep reseeds per trial).
Experiment build_experiment(const ExperimentConfig& cfg, std::uint64_t seed);
std::shared_ptr<const CommGraph> build_graph(const TopologySpec& spec, int agents);

struct RunSummary {
  std::string name;
  ProtocolKind protocol = ProtocolKind::dual_decomposition;
  Execution execution = Execution::serial;
  Termination termination = Termination::max_iters;
  int iterations = 0;
  double final_disagreement = 0.0;
  double final_optimality_gap = 0.0;
  double final_membership_residual = 0.0;
  double relative_objective_error = 0.0;  // (f(R_bar) - f(R_hat)) / |f(R_bar)|
  std::optional<double> ground_truth_error;  // ||R_hat - R_true||_F
  double wall_ms_total = 0.0;
  double wall_ms_mean = 0.0;
  double wall_ms_median = 0.0;
  double wall_ms_max = 0.0;
  int degenerate_events = 0;
  std::string diagnostic;
  Matrix consensus;
  Matrix centralized;
};

RunSummary summarize(const ExperimentConfig& cfg, const ProblemInstance& problem, const RunResult& result);

void write_trace_csv(std::ostream& out, const RunResult& result, bool with_timing);
std::string summary_json(const RunSummary& s);

/// 0 converged, 2 max iterations reached, 3 divergence abort (1 is reserved
/// for configuration and runtime errors).
int exit_code(Termination t);

/// Runs one experiment and writes <out>/trace.csv and <out>/summary.json.
RunSummary run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  int trial = 0;
  double value = 0.0;
  double error = 0.0;              // ||R_hat - R_true||_F (or vs centralized if no truth)
  double centralized_error = 0.0;  // same metric for the SVD Procrustes solution
  int iterations = 0;
  double wall_ms = 0.0;
};

/// Runs every (trial, value) pair; rows are ordered by trial then value.
std::vector<SweepRow> run_sweep_rows(const ExperimentConfig& cfg);
void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                     bool with_timing);
/// Runs the sweep and writes <out>/sweep.csv and <out>/sweep_summary.json.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// Median of `error` per swept value, in the order of cfg.sweep->values.
std::vector<double> median_errors(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows);

}  // namespace socon
