// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "socon/harness.hpp"
#include "socon/hull.hpp"
#include "socon/sampling.hpp"
#include "socon/spectral.hpp"

using namespace socon;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SOCON_CONFIG_DIR;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig bundled(const std::string& name) { return load_experiment(kConfigs / (name + ".toml")); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run_config(const ExperimentConfig& cfg, const RoundObserver& observer = {}) {
  const Experiment e = build_experiment(cfg, cfg.seed);
  return run(e.problem, e.graph, cfg.protocol, nullptr, observer);
}

Verdict ac1_hull_membership() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  for (int n : {2, 3, 4, 6}) {
    const HullOperator h(n);
    double orth = 0.0, det = 0.0;
    int bad = 0;
    for (int s = 0; s < 1000; ++s) {
      const Membership m = so_membership(h.apply(SpectraPoint::rank_one(random_unit_vector(h.d(), rng))));
      orth = std::max(orth, m.orthogonality);
      det = std::max(det, m.determinant);
      bad += m.ok(1e-8) ? 0 : 1;
    }
    v.require(bad == 0, "n=" + std::to_string(n) + ": " + std::to_string(bad) + "/1000 outside SO(n), max ||R^T R - I|| " +
                            sci(orth) + ", max |det R - 1| " + sci(det));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, "runtime " + sci(secs) + " s");
  return v;
}

Verdict ac2_adjoint() {
  Verdict v;
  std::mt19937_64 rng(102);
  for (int n : {2, 3, 4}) {
    const HullOperator h(n);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const Matrix z = random_spectra_point(h.d(), rng).matrix();
      const Matrix y = random_gaussian(n, n, rng);
      worst = std::max(worst, std::abs(frobenius_inner(h.apply(z), y) - frobenius_inner(z, h.adjoint(y))));
    }
    v.require(worst <= 1e-10, "n=" + std::to_string(n) + ": max defect " + sci(worst));
  }
  return v;
}

Verdict ac3_procrustes() {
  Verdict v;
  std::mt19937_64 rng(103);
  const HullOperator h(3);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const Matrix d = random_gaussian(3, 3, rng);
    worst = std::max(worst, (linear_max_over_hull(h, d).rotation - oracle::procrustes(d)).norm());
  }
  v.require(worst <= 1e-6, "200 random D, max ||R_hull - R_svd||_F " + sci(worst));
  return v;
}

Verdict ac4_dual_path() {
  Verdict v;
  const ExperimentConfig cfg = bundled("fig1_n8_ring");
  double worst = 0.0;
  long checked = 0;
  const RunResult r = run_config(cfg, [&](int, const ConsensusState& s) {
    for (const Matrix& rot : s.rotations()) {
      worst = std::max(worst, so_membership(rot).worst());
      ++checked;
    }
  });
  v.require(cfg.protocol.alpha == 5.0 && cfg.problem.agents == 8, "N=8 ring, alpha=5");
  v.require(checked == 8L * r.iterations && worst <= 1e-8,
            std::to_string(checked) + " iterates checked, worst residual " + sci(worst));
  return v;
}

void consensus_check(Verdict& v, const std::string& label, const RunResult& r) {
  const double disagreement = r.trace.empty() ? 0.0 : r.trace.back().disagreement;
  const double rel = (r.centralized_value - r.consensus_value) / std::abs(r.centralized_value);
  v.require(disagreement < 1e-4 && std::abs(rel) <= 1e-4,
            label + ": " + std::string(to_string(r.termination)) + " after " + std::to_string(r.iterations) +
                " rounds, disagreement " + sci(disagreement) + ", relative objective gap " + sci(rel));
}

Verdict ac5_consensus() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* name : {"fig1_n8_ring", "fig2_n50_ring2", "fig3_admm_n50", "fig4_left_admm_n100_h1",
                           "fig4_right_admm_n100_h2", "so6_n12", "bunny_pose"}) {
    const ExperimentConfig cfg = bundled(name);
    consensus_check(v, std::string(name) + " (" + std::string(to_string(cfg.protocol.kind)) + ")", run_config(cfg));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 300.0, "runtime " + sci(secs) + " s");
  return v;
}

Verdict ac6_alpha_range() {
  Verdict v;
  ExperimentConfig cfg = bundled("fig1_n8_ring");
  for (double alpha : {0.01, 0.1, 1.0, 5.0, 20.0}) {
    cfg.protocol.alpha = alpha;
    consensus_check(v, "alpha=" + sci(alpha), run_config(cfg));
  }
  return v;
}

Verdict ac7_pose() {
  Verdict v;
  {
    ExperimentConfig cfg = bundled("bunny_pose");
    cfg.problem.sigma = 0.0;
    const Experiment e = build_experiment(cfg, cfg.seed);
    const RunResult r = run(e.problem, e.graph, cfg.protocol);
    const double err = (r.consensus - *e.problem.ground_truth).norm();
    v.require(err <= 1e-6, "noiseless: ||R_hat - R_true|| " + sci(err));
  }
  const ExperimentConfig cfg = bundled("bunny_pose");
  v.require(cfg.problem.points == 1889 && cfg.problem.agents == 10 && cfg.problem.sigma == 0.05 &&
                cfg.protocol.alpha == 2.0 && cfg.protocol.kind == ProtocolKind::fusion_admm,
            "m=1889, N=10, sigma=0.05, alpha=2, fusion ADMM");
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Experiment e = build_experiment(cfg, 1000 + trial);
    const RunResult r = run(e.problem, e.graph, cfg.protocol);
    const double err = (r.consensus - *e.problem.ground_truth).norm();
    const double central = (oracle::procrustes(e.problem.aggregate()) - *e.problem.ground_truth).norm();
    worst_ratio = std::max(worst_ratio, err / central);
  }
  v.require(worst_ratio <= 1.5, "20 trials, worst error / centralized error " + sci(worst_ratio));
  return v;
}

Verdict ac8_sensor_sweep() {
  Verdict v;
  const ExperimentConfig cfg = bundled("sensor_sweep");
  v.require(cfg.problem.points == 728 && cfg.problem.agents == 7 && cfg.problem.sigma == 0.10 && cfg.sweep &&
                cfg.sweep->trials == 100,
            "m=728, N=7, sigma=0.10, 100 trials");
  const auto rows = run_sweep_rows(cfg);
  const auto medians = median_errors(cfg, rows);
  std::string list;
  bool monotone = true;
  for (std::size_t k = 0; k < medians.size(); ++k) {
    list += (k ? " " : "") + sci(medians[k]);
    if (k > 0 && medians[k] > medians[k - 1]) monotone = false;
  }
  v.require(rows.size() == 700, std::to_string(rows.size()) + " rows");
  v.require(monotone, "median error by active sensors 1..7: " + list);
  return v;
}

Verdict ac9_determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "socon_acceptance_determinism";
  fs::remove_all(root);
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".toml") continue;
    ExperimentConfig cfg = load_experiment(entry.path());
    std::string files[2];
    for (int rep = 0; rep < 2; ++rep) {
      cfg.out_dir = root / cfg.name / std::to_string(rep);
      if (cfg.sweep) {
        run_sweep(cfg);
        files[rep] = slurp(*cfg.out_dir / "sweep.csv");
      } else {
        run_experiment(cfg);
        files[rep] = slurp(*cfg.out_dir / "trace.csv");
      }
    }
    v.require(!files[0].empty() && files[0] == files[1], cfg.name + ": " + std::to_string(files[0].size()) + " bytes");
  }
  fs::remove_all(root);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 hull rank-one images in SO(n), n in {2,3,4,6}", ac1_hull_membership},
      {"AC2 adjoint identity", ac2_adjoint},
      {"AC3 Procrustes oracle equivalence", ac3_procrustes},
      {"AC4 dual decomposition iterates in SO(n)", ac4_dual_path},
      {"AC5 consensus optimality on bundled experiments", ac5_consensus},
      {"AC6 dual decomposition alpha robustness", ac6_alpha_range},
      {"AC7 pose estimation vs centralized Procrustes", ac7_pose},
      {"AC8 sensor sweep median error non-increasing", ac8_sensor_sweep},
      {"AC9 byte-identical traces", ac9_determinism},
  };
  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    for (const std::string& note : v.notes) std::printf("    %s\n", note.c_str());
    char line[256];
    std::snprintf(line, sizeof line, "%s  %s  (%.1f s)", v.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0));
    std::printf("%s\n", line);
    std::fflush(stdout);
    lines.push_back(line);
    failed += v.pass ? 0 : 1;
  }
  std::printf("\nsummary\n");
  for (const std::string& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
