#include "socon/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "socon/spectral.hpp"

namespace socon {
namespace {

using config::ConfigError;
using config::Document;

const std::set<std::string> kKnownKeys = {
    "name",
    "seed",
    "problem.kind",
    "problem.n",
    "problem.agents",
    "problem.sigma",
    "problem.points",
    "problem.cloud",
    "problem.data",
    "topology.kind",
    "topology.hops",
    "topology.path",
    "protocol.kind",
    "protocol.alpha",
    "protocol.schedule",
    "protocol.max_iters",
    "protocol.stop_tolerance",
    "protocol.fusion_scaling",
    "protocol.count_self_loop",
    "protocol.execution",
    "protocol.divergence_window",
    "protocol.divergence_factor",
    "output.dir",
    "output.trace_timing",
    "sweep.parameter",
    "sweep.values",
    "sweep.trials",
};

[[noreturn]] void bad_value(const Document& doc, const std::string& key, const std::string& got,
                            const std::string& expected) {
  throw ConfigError(doc.source() + ": " + key + ": '" + got + "' is not one of " + expected);
}

int positive_int(const Document& doc, const std::string& key, int fallback) {
  const auto v = doc.get_integer(key);
  if (!v) return fallback;
  if (*v < 1 || *v > 1'000'000'000) throw ConfigError(doc.source() + ": " + key + ": must be a positive integer");
  return static_cast<int>(*v);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

// splitmix64 finalizer: well-spread per-trial seeds from one base seed.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::active_agents: return "active_agents";
    case SweepParameter::alpha: return "alpha";
    case SweepParameter::sigma: return "sigma";
  }
  return "?";
}

}  // namespace

ExperimentConfig parse_experiment(const Document& doc, const std::filesystem::path& base_dir, std::string name) {
  doc.reject_unknown(kKnownKeys);
  ExperimentConfig cfg;
  cfg.name = doc.get_string("name").value_or(std::move(name));

  if (const auto seed = doc.get_integer("seed")) {
    if (*seed < 0) throw ConfigError(doc.source() + ": seed: must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*seed);
  }

  // [problem]
  const std::string pkind = doc.get_string("problem.kind").value_or("averaging");
  if (pkind == "averaging") cfg.problem.kind = ProblemKind::averaging;
  else if (pkind == "pose") cfg.problem.kind = ProblemKind::pose;
  else if (pkind == "custom") cfg.problem.kind = ProblemKind::custom;
  else bad_value(doc, "problem.kind", pkind, "averaging | pose | custom");
  cfg.problem.n = positive_int(doc, "problem.n", cfg.problem.n);
  if (cfg.problem.n < 2) throw ConfigError(doc.source() + ": problem.n: must be >= 2");
  cfg.problem.agents = positive_int(doc, "problem.agents", cfg.problem.agents);
  cfg.problem.points = positive_int(doc, "problem.points", cfg.problem.points);
  if (const auto s = doc.get_number("problem.sigma")) {
    if (*s < 0) throw ConfigError(doc.source() + ": problem.sigma: must be non-negative");
    cfg.problem.sigma = *s;
  }
  if (const auto c = doc.get_string("problem.cloud")) cfg.problem.cloud = resolve(base_dir, *c);
  if (const auto d = doc.get_string("problem.data")) cfg.problem.data = resolve(base_dir, *d);
  if (cfg.problem.kind == ProblemKind::custom && cfg.problem.data.empty()) {
    throw ConfigError(doc.source() + ": problem.data: required for custom problems");
  }

  // [topology]
  const std::string tkind = doc.get_string("topology.kind").value_or("ring");
  if (tkind == "ring") cfg.topology.kind = TopologyKind::ring;
  else if (tkind == "complete") cfg.topology.kind = TopologyKind::complete;
  else if (tkind == "edge_list") cfg.topology.kind = TopologyKind::edge_list;
  else bad_value(doc, "topology.kind", tkind, "ring | complete | edge_list");
  cfg.topology.hops = positive_int(doc, "topology.hops", cfg.topology.hops);
  if (const auto p = doc.get_string("topology.path")) cfg.topology.path = resolve(base_dir, *p);
  if (cfg.topology.kind == TopologyKind::edge_list && cfg.topology.path.empty()) {
    throw ConfigError(doc.source() + ": topology.path: required for edge_list topologies");
  }

  // [protocol]
  ProtocolConfig& pc = cfg.protocol;
  const std::string kind = doc.get_string("protocol.kind").value_or("dual_decomposition");
  if (auto k = parse_protocol_kind(kind)) pc.kind = *k;
  else bad_value(doc, "protocol.kind", kind, "dual_decomposition | distributed_admm | fusion_admm");
  if (const auto a = doc.get_number("protocol.alpha")) pc.alpha = *a;
  if (const auto s = doc.get_string("protocol.schedule")) {
    if (auto v = parse_step_schedule(*s)) pc.schedule = *v;
    else bad_value(doc, "protocol.schedule", *s, "constant | diminishing");
  }
  pc.max_iters = positive_int(doc, "protocol.max_iters", pc.max_iters);
  if (const auto s = doc.get_number("protocol.stop_tolerance")) pc.stop_tolerance = *s;
  if (const auto s = doc.get_string("protocol.fusion_scaling")) {
    if (auto v = parse_fusion_scaling(*s)) pc.fusion_scaling = *v;
    else bad_value(doc, "protocol.fusion_scaling", *s, "mean | sum");
  }
  if (const auto b = doc.get_bool("protocol.count_self_loop")) pc.count_self_loop = *b;
  if (const auto s = doc.get_string("protocol.execution")) {
    if (auto v = parse_execution(*s)) pc.execution = *v;
    else bad_value(doc, "protocol.execution", *s, "serial | parallel");
  }
  pc.divergence_window = positive_int(doc, "protocol.divergence_window", pc.divergence_window);
  if (const auto f = doc.get_number("protocol.divergence_factor")) pc.divergence_factor = *f;
  try {
    pc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(doc.source() + ": protocol: " + e.what());
  }

  // [output]
  if (const auto d = doc.get_string("output.dir")) cfg.out_dir = std::filesystem::path(*d);
  cfg.trace_timing = doc.get_bool("output.trace_timing").value_or(false);

  // [sweep]
  if (doc.has("sweep.parameter") || doc.has("sweep.values") || doc.has("sweep.trials")) {
    SweepSpec sweep;
    const std::string param = doc.get_string("sweep.parameter").value_or("active_agents");
    if (param == "active_agents") sweep.parameter = SweepParameter::active_agents;
    else if (param == "alpha") sweep.parameter = SweepParameter::alpha;
    else if (param == "sigma") sweep.parameter = SweepParameter::sigma;
    else bad_value(doc, "sweep.parameter", param, "active_agents | alpha | sigma");
    sweep.values = doc.get_numbers("sweep.values").value_or(std::vector<double>{});
    if (sweep.values.empty()) throw ConfigError(doc.source() + ": sweep.values: at least one value required");
    sweep.trials = positive_int(doc, "sweep.trials", sweep.trials);
    for (double v : sweep.values) {
      const bool ok = sweep.parameter == SweepParameter::active_agents
                          ? (v >= 1 && v == std::floor(v) && v <= cfg.problem.agents)
                          : sweep.parameter == SweepParameter::alpha ? v > 0 : v >= 0;
      if (!ok) throw ConfigError(doc.source() + ": sweep.values: " + format_double(v) + " invalid for " + param);
    }
    if (sweep.parameter == SweepParameter::sigma && cfg.problem.kind != ProblemKind::pose) {
      throw ConfigError(doc.source() + ": sweep.parameter: sigma sweeps need a pose problem");
    }
    cfg.sweep = std::move(sweep);
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  const Document doc = Document::load(path);
  return parse_experiment(doc, path.parent_path(), path.stem().string());
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.max_iters) cfg.protocol.max_iters = *o.max_iters;
  if (o.alpha) cfg.protocol.alpha = *o.alpha;
  if (o.timing) cfg.trace_timing = *o.timing;
  if (o.execution) cfg.protocol.execution = *o.execution;
  cfg.protocol.validate();
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg) {
  if (cfg.out_dir) return *cfg.out_dir;
  if (const char* root = std::getenv(kOutDirEnv); root && *root) return std::filesystem::path(root) / cfg.name;
  return std::filesystem::path("out") / cfg.name;
}

std::shared_ptr<const CommGraph> build_graph(const TopologySpec& spec, int agents) {
  switch (spec.kind) {
    case TopologyKind::ring:
      if (agents == 1) return std::make_shared<const CommGraph>(1, std::vector<Edge>{});
      return std::make_shared<const CommGraph>(CommGraph::ring(agents, spec.hops));
    case TopologyKind::complete: return std::make_shared<const CommGraph>(CommGraph::complete(agents));
    case TopologyKind::edge_list: return std::make_shared<const CommGraph>(CommGraph::load_edge_list(spec.path, agents));
  }
  throw std::logic_error("build_graph: unknown topology");
}

Experiment build_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  Experiment e;
  switch (cfg.problem.kind) {
    case ProblemKind::averaging: e.problem = averaging_instance(cfg.problem.n, cfg.problem.agents, seed); break;
    case ProblemKind::pose: {
      // The model is fixed by the base seed; noise and R_true follow `seed`.
      const PointCloud model = cfg.problem.cloud.empty()
                                   ? synthetic_cloud(cfg.problem.n, cfg.problem.points, cfg.seed)
                                   : load_point_cloud(cfg.problem.cloud);
      e.problem = pose_instance(model, cfg.problem.agents, cfg.problem.sigma, seed);
      break;
    }
    case ProblemKind::custom: e.problem = load_data_matrices(cfg.problem.data); break;
  }
  e.graph = build_graph(cfg.topology, e.problem.agents());
  return e;
}

RunSummary summarize(const ExperimentConfig& cfg, const ProblemInstance& problem, const RunResult& result) {
  RunSummary s;
  s.name = cfg.name;
  s.protocol = cfg.protocol.kind;
  s.execution = cfg.protocol.execution;
  s.termination = result.termination;
  s.iterations = result.iterations;
  s.degenerate_events = result.degenerate_events;
  s.diagnostic = result.diagnostic;
  s.consensus = result.consensus;
  s.centralized = result.centralized;
  if (!result.trace.empty()) {
    const TraceRecord& last = result.trace.back();
    s.final_disagreement = last.disagreement;
    s.final_optimality_gap = last.optimality_gap;
    s.final_membership_residual = last.membership_residual;
    std::vector<double> wall;
    for (const TraceRecord& r : result.trace) wall.push_back(r.wall_ms);
    s.wall_ms_total = std::accumulate(wall.begin(), wall.end(), 0.0);
    s.wall_ms_mean = s.wall_ms_total / static_cast<double>(wall.size());
    s.wall_ms_median = median(wall);
    s.wall_ms_max = *std::max_element(wall.begin(), wall.end());
  }
  const double denom = std::max(std::abs(result.centralized_value), 1e-300);
  s.relative_objective_error = (result.centralized_value - result.consensus_value) / denom;
  if (problem.ground_truth) s.ground_truth_error = (result.consensus - *problem.ground_truth).norm();
  return s;
}

void write_trace_csv(std::ostream& out, const RunResult& result, bool with_timing) {
  out << kTraceSchema << '\n';
  out << "iteration,disagreement,optimality_gap,membership_residual" << (with_timing ? ",wall_ms" : "") << '\n';
  for (const TraceRecord& r : result.trace) {
    out << r.iteration << ',' << format_double(r.disagreement) << ',' << format_double(r.optimality_gap) << ','
        << format_double(r.membership_residual);
    if (with_timing) out << ',' << format_double(r.wall_ms);
    out << '\n';
  }
}

std::string summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["protocol"] = std::string(to_string(s.protocol));
  j["termination"] = std::string(to_string(s.termination));
  j["iterations"] = s.iterations;
  j["final_disagreement"] = s.final_disagreement;
  j["final_optimality_gap"] = s.final_optimality_gap;
  j["final_membership_residual"] = s.final_membership_residual;
  j["relative_objective_error"] = s.relative_objective_error;
  if (s.ground_truth_error) j["ground_truth_error"] = *s.ground_truth_error;
  j["degenerate_events"] = s.degenerate_events;
  if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
  j["wall_ms"] = {{"execution", std::string(to_string(s.execution))},
                  {"threads", s.execution == Execution::parallel ? omp_get_max_threads() : 1},
                  {"total", s.wall_ms_total},
                  {"mean", s.wall_ms_mean},
                  {"median", s.wall_ms_median},
                  {"max", s.wall_ms_max}};
  j["consensus"] = matrix_json(s.consensus);
  j["centralized"] = matrix_json(s.centralized);
  return j.dump(2);
}

int exit_code(Termination t) {
  switch (t) {
    case Termination::converged: return 0;
    case Termination::max_iters: return 2;
    case Termination::diverged: return 3;
  }
  return 1;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  const Experiment e = build_experiment(cfg, cfg.seed);
  const RunResult result = run(e.problem, e.graph, cfg.protocol);
  const RunSummary s = summarize(cfg, e.problem, result);

  const std::filesystem::path dir = resolve_out_dir(cfg);
  std::filesystem::create_directories(dir);
  {
    std::ofstream trace(dir / "trace.csv", std::ios::binary);
    write_trace_csv(trace, result, cfg.trace_timing);
    if (!trace) throw std::runtime_error("failed writing " + (dir / "trace.csv").string());
  }
  {
    std::ofstream summary(dir / "summary.json", std::ios::binary);
    summary << summary_json(s) << '\n';
    if (!summary) throw std::runtime_error("failed writing " + (dir / "summary.json").string());
  }
  return s;
}

std::vector<SweepRow> run_sweep_rows(const ExperimentConfig& cfg) {
  if (!cfg.sweep) throw std::invalid_argument("run_sweep: config has no [sweep] section");
  const SweepSpec& sweep = *cfg.sweep;
  const int values = static_cast<int>(sweep.values.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(sweep.trials) * values);

  // Each trial owns its instance and seed; trials run concurrently in
  // parallel mode while every protocol run inside stays serial.
  auto run_trial = [&](int trial) {
    const std::uint64_t seed = mix_seed(cfg.seed + static_cast<std::uint64_t>(trial));
    ExperimentConfig local = cfg;
    local.protocol.execution = Execution::serial;
    std::optional<Experiment> shared;
    if (sweep.parameter != SweepParameter::sigma) shared = build_experiment(local, seed);

    for (int v = 0; v < values; ++v) {
      const double value = sweep.values[v];
      ProblemInstance problem;
      switch (sweep.parameter) {
        case SweepParameter::active_agents: problem = shared->problem.first_agents(static_cast<int>(value)); break;
        case SweepParameter::alpha:
          local.protocol.alpha = value;
          problem = shared->problem;
          break;
        case SweepParameter::sigma:
          local.problem.sigma = value;
          problem = build_experiment(local, seed).problem;
          break;
      }

      const auto start = std::chrono::steady_clock::now();
      Matrix estimate;
      int iterations = 0;
      if (problem.agents() == 1) {
        // A single sensor is not a consensus problem: solve it directly.
        estimate = linear_max_over_hull(HullOperator(problem.n), problem.data.front()).rotation;
      } else {
        const RunResult r = run(problem, build_graph(local.topology, problem.agents()), local.protocol);
        estimate = r.consensus;
        iterations = r.iterations;
      }
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

      const Matrix reference = problem.ground_truth ? *problem.ground_truth
                                                    : linear_max_over_hull(HullOperator(problem.n),
                                                                           problem.aggregate()).rotation;
      SweepRow& row = rows[static_cast<std::size_t>(trial) * values + v];
      row.trial = trial;
      row.value = value;
      row.error = (estimate - reference).norm();
      row.centralized_error = (procrustes_rotation(problem.aggregate()) - reference).norm();
      row.iterations = iterations;
      row.wall_ms = ms;
    }
  };

  if (cfg.protocol.execution == Execution::parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int trial = 0; trial < sweep.trials; ++trial) {
      try {
        run_trial(trial);
      } catch (...) {
#pragma omp critical(socon_sweep_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int trial = 0; trial < sweep.trials; ++trial) run_trial(trial);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                     bool with_timing) {
  out << kSweepSchema << '\n';
  out << "trial," << to_string(cfg.sweep ? cfg.sweep->parameter : SweepParameter::active_agents)
      << ",error,centralized_error,iterations" << (with_timing ? ",wall_ms" : "") << '\n';
  for (const SweepRow& r : rows) {
    out << r.trial << ',' << format_double(r.value) << ',' << format_double(r.error) << ','
        << format_double(r.centralized_error) << ',' << r.iterations;
    if (with_timing) out << ',' << format_double(r.wall_ms);
    out << '\n';
  }
}

std::vector<double> median_errors(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows) {
  std::vector<double> out;
  for (double value : cfg.sweep->values) {
    std::vector<double> errs;
    for (const SweepRow& r : rows)
      if (r.value == value) errs.push_back(r.error);
    out.push_back(median(std::move(errs)));
  }
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  const std::vector<SweepRow> rows = run_sweep_rows(cfg);
  const std::filesystem::path dir = resolve_out_dir(cfg);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    write_sweep_csv(csv, cfg, rows, cfg.trace_timing);
    if (!csv) throw std::runtime_error("failed writing " + (dir / "sweep.csv").string());
  }

  nlohmann::json j;
  j["name"] = cfg.name;
  j["parameter"] = std::string(to_string(cfg.sweep->parameter));
  j["trials"] = cfg.sweep->trials;
  j["values"] = cfg.sweep->values;
  j["median_error"] = median_errors(cfg, rows);
  std::vector<double> central, wall;
  for (double value : cfg.sweep->values) {
    std::vector<double> c, w;
    for (const SweepRow& r : rows) {
      if (r.value != value) continue;
      c.push_back(r.centralized_error);
      w.push_back(r.wall_ms);
    }
    central.push_back(median(std::move(c)));
    wall.push_back(median(std::move(w)));
  }
  j["median_centralized_error"] = central;
  j["median_wall_ms"] = wall;
  j["execution"] = std::string(to_string(cfg.protocol.execution));
  std::ofstream out(dir / "sweep_summary.json", std::ios::binary);
  out << j.dump(2) << '\n';
  return rows;
}

}  // namespace socon
