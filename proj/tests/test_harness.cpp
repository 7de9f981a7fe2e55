#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "socon/config.hpp"
#include "socon/harness.hpp"

using namespace socon;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("socon_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SOCON_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall = R"(name = "small"
seed = 3

[problem]
kind = "averaging"
n = 3
agents = 6

[topology]
kind = "ring"
hops = 1

[protocol]
kind = "distributed_admm"
alpha = 0.5
max_iters = 300
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("document parsing") {
  const auto doc = config::Document::parse(R"(# comment
name = "x"  # trailing
flag = true
[a]
n = 3
v = [1, 2.5, -3e-1]
s = "has # hash"
)");
  CHECK(doc.get_string("name") == "x");
  CHECK(doc.get_bool("flag") == true);
  CHECK(doc.get_integer("a.n") == 3);
  CHECK(doc.get_number("a.n") == 3.0);
  CHECK(doc.get_numbers("a.v") == std::vector<double>{1, 2.5, -0.3});
  CHECK(doc.get_string("a.s") == "has # hash");
  CHECK_FALSE(doc.get_string("a.missing"));
  CHECK(doc.keys().size() == 5);
}

TEST_CASE("type errors name the source, line and key") {
  const auto doc = config::Document::parse("[p]\nn = \"three\"\nk = 2.5\n", "f.toml");
  try {
    doc.get_number("p.n");
    FAIL("expected ConfigError");
  } catch (const config::ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("f.toml:2") != std::string::npos);
    CHECK(msg.find("p.n") != std::string::npos);
  }
  CHECK_THROWS_AS(doc.get_integer("p.k"), config::ConfigError);
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(config::Document::parse("[unterminated\n"), config::ConfigError);
  CHECK_THROWS_AS(config::Document::parse("key value\n"), config::ConfigError);
  CHECK_THROWS_AS(config::Document::parse("k = \"open\n"), config::ConfigError);
  CHECK_THROWS_AS(config::Document::parse("k = 1\nk = 2\n"), config::ConfigError);
  CHECK_THROWS_AS(config::Document::parse("k = [1, x]\n"), config::ConfigError);
  CHECK_THROWS_AS(config::Document::parse("k = nope\n"), config::ConfigError);
}

TEST_CASE("experiment validation") {
  const fs::path base = ".";
  auto parse = [&](const std::string& text) {
    return parse_experiment(config::Document::parse(text, "t.toml"), base, "t");
  };
  CHECK_NOTHROW(parse(kSmall));
  CHECK(parse(kSmall).protocol.kind == ProtocolKind::distributed_admm);
  CHECK_THROWS_AS(parse("[protocol]\nkind = \"gossip\"\n"), config::ConfigError);
  CHECK_THROWS_AS(parse("[protocol]\nalpha = -1\n"), config::ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nagents = 0\n"), config::ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nagnets = 4\n"), config::ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nkind = \"custom\"\n"), config::ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\nvalues = []\n"), config::ConfigError);
}

TEST_CASE("overrides and output directory resolution") {
  ExperimentConfig cfg = parse_experiment(config::Document::parse(kSmall), ".", "small");
  Overrides o;
  o.seed = 99;
  o.alpha = 2.0;
  o.max_iters = 7;
  apply_overrides(cfg, o);
  CHECK(cfg.seed == 99);
  CHECK(cfg.protocol.alpha == 2.0);
  CHECK(cfg.protocol.max_iters == 7);

  ::unsetenv(kOutDirEnv);
  CHECK(resolve_out_dir(cfg) == fs::path("out") / "small");
  ::setenv(kOutDirEnv, "/tmp/somewhere", 1);
  CHECK(resolve_out_dir(cfg) == fs::path("/tmp/somewhere") / "small");
  o = {};
  o.out_dir = "/tmp/explicit";
  apply_overrides(cfg, o);
  CHECK(resolve_out_dir(cfg) == fs::path("/tmp/explicit"));
  ::unsetenv(kOutDirEnv);
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("run writes a versioned trace and a consistent summary") {
  const fs::path dir = scratch("run");
  ExperimentConfig cfg = parse_experiment(config::Document::parse(kSmall), ".", "small");
  cfg.out_dir = dir / "out";
  const RunSummary s = run_experiment(cfg);
  CHECK(s.termination == Termination::converged);

  std::ifstream trace(dir / "out" / "trace.csv");
  std::string line;
  std::getline(trace, line);
  CHECK(line == kTraceSchema);
  std::getline(trace, line);
  CHECK(line == "iteration,disagreement,optimality_gap,membership_residual");
  int rows = 0;
  std::string last;
  while (std::getline(trace, line)) ++rows, last = line;
  CHECK(rows == s.iterations);

  const auto j = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(j["iterations"] == s.iterations);
  CHECK(j["termination"] == "converged");
  CHECK(j["wall_ms"]["execution"] == "serial");
  CHECK(std::stod(last.substr(last.find(',') + 1)) == doctest::Approx(j["final_disagreement"].get<double>()));
}

TEST_CASE("timing column only when requested") {
  const fs::path dir = scratch("timing");
  ExperimentConfig cfg = parse_experiment(config::Document::parse(kSmall), ".", "small");
  cfg.out_dir = dir;
  cfg.trace_timing = true;
  run_experiment(cfg);
  const std::string text = slurp(dir / "trace.csv");
  CHECK(text.find("membership_residual,wall_ms\n") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical traces") {
  const fs::path dir = scratch("determinism");
  ExperimentConfig cfg = parse_experiment(config::Document::parse(kSmall), ".", "small");
  cfg.out_dir = dir / "a";
  run_experiment(cfg);
  cfg.out_dir = dir / "b";
  run_experiment(cfg);
  cfg.out_dir = dir / "c";
  cfg.protocol.execution = Execution::parallel;
  run_experiment(cfg);
  CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv"));
  CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "c" / "trace.csv"));
}

TEST_CASE("exit code contract") {
  CHECK(exit_code(Termination::converged) == 0);
  CHECK(exit_code(Termination::max_iters) == 2);
  CHECK(exit_code(Termination::diverged) == 3);
}

TEST_CASE("sweep rows, single-sensor shortcut and reproducibility") {
  const fs::path dir = scratch("sweep");
  const std::string text = R"(name = "sw"
seed = 4
[problem]
kind = "pose"
agents = 4
points = 80
sigma = 0.1
[topology]
kind = "complete"
[protocol]
kind = "fusion_admm"
alpha = 2.0
[sweep]
parameter = "active_agents"
values = [1, 2, 4]
trials = 5
)";
  ExperimentConfig cfg = parse_experiment(config::Document::parse(text), ".", "sw");
  cfg.out_dir = dir / "a";
  const auto rows = run_sweep(cfg);
  CHECK(rows.size() == 15);
  for (const SweepRow& r : rows) {
    if (r.value == 1.0) {
      CHECK(r.iterations == 0);
      CHECK(r.error == doctest::Approx(r.centralized_error).epsilon(1e-6));
    }
  }
  cfg.out_dir = dir / "b";
  cfg.protocol.execution = Execution::parallel;
  run_sweep(cfg);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  std::ifstream csv(dir / "a" / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == kSweepSchema);
  std::getline(csv, line);
  CHECK(line == "trial,active_agents,error,centralized_error,iterations");
}

TEST_CASE("edge-list topology resolves relative to the config file") {
  const fs::path dir = scratch("edges");
  write(dir / "tri.edges", "0 1\n1 0\n1 2\n2 1\n0 2\n2 0\n");
  write(dir / "c.toml", R"(name = "edges"
[problem]
agents = 3
[topology]
kind = "edge_list"
path = "tri.edges"
[protocol]
kind = "distributed_admm"
alpha = 0.5
)");
  ExperimentConfig cfg = load_experiment(dir / "c.toml");
  CHECK(cfg.topology.path == dir / "tri.edges");
  const Experiment e = build_experiment(cfg, cfg.seed);
  CHECK(e.graph->size() == 3);
  CHECK(e.graph->added_self_loops() == 3);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("exit codes for converged, max-iters and divergence") {
  const fs::path dir = scratch("cli");
  const fs::path cfg = write(dir / "small.toml", kSmall);
  const std::string out = " --out-dir " + (dir / "out").string();
  CHECK(cli("run " + cfg.string() + out) == 0);
  CHECK(fs::exists(dir / "out" / "trace.csv"));
  CHECK(cli("run " + cfg.string() + out + " --max-iters 2") == 2);

  const fs::path div = write(dir / "div.toml", R"(name = "div"
[problem]
agents = 8
[protocol]
kind = "dual_decomposition"
alpha = 5.0
divergence_window = 1
divergence_factor = 1.01
)");
  CHECK(cli("run " + div.string() + out) == 3);
}

TEST_CASE("malformed config: nonzero exit and no output files") {
  const fs::path dir = scratch("cli_bad");
  const fs::path bad = write(dir / "bad.toml", "[protocol]\nalpha = \"fast\"\n");
  CHECK(cli("run " + bad.string() + " --out-dir " + (dir / "out").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(cli("run " + (dir / "missing.toml").string()) != 0);
  CHECK(cli("sweep " + write(dir / "nosweep.toml", kSmall).string() + " --out-dir " + (dir / "o2").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "o2"));
}

TEST_CASE("environment variable sets the default output root") {
  const fs::path dir = scratch("cli_env");
  const fs::path cfg = write(dir / "small.toml", kSmall);
  const std::string cmd = "SOCON_OUT_DIR=" + (dir / "root").string() + " " + SOCON_CLI + " run " + cfg.string() +
                          " --alpha 0.5 --seed 5 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "root" / "small" / "summary.json"));
}

TEST_CASE("verify subcommand passes") {
  CHECK(cli("verify --samples 100") == 0);
}

}  // TEST_SUITE
