#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "socon/hull.hpp"
#include "socon/problems.hpp"
#include "socon/spectral.hpp"

using namespace socon;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("socon_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("random_rotation is a rotation and deterministic") {
  for (int n = 2; n <= 6; ++n) {
    const Matrix r = random_rotation(n, 42);
    CHECK(so_membership(r).ok(1e-12));
    CHECK((r - random_rotation(n, 42)).norm() == 0.0);
    CHECK((r - random_rotation(n, 43)).norm() > 0.0);
  }
}

TEST_CASE("Haar SO(3) samples have mean trace near zero") {
  std::mt19937_64 rng(2024);
  double sum = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) sum += random_rotation(3, rng).trace();
  CHECK(std::abs(sum / samples) < 0.05);
}

TEST_CASE("averaging instance with equal rotations has that rotation as optimum") {
  const Matrix r0 = random_rotation(3, 9);
  const ProblemInstance p = averaging_instance(std::vector<Matrix>(6, r0));
  CHECK(p.agents() == 6);
  const HullOperator h(3);
  CHECK((linear_max_over_hull(h, p.aggregate()).rotation - r0).norm() <= 1e-9);
}

TEST_CASE("SO(2) average of two rotations is the mid angle") {
  const double t1 = 0.3, t2 = 2.1;
  const ProblemInstance p = averaging_instance({oracle::so2(t1), oracle::so2(t2)});
  const HullOperator h(2);
  const Matrix r = linear_max_over_hull(h, p.aggregate()).rotation;
  CHECK((r - oracle::so2(0.5 * (t1 + t2))).norm() <= 1e-9);
  CHECK(oracle::so2_best_angle(p.aggregate()) == doctest::Approx(0.5 * (t1 + t2)).epsilon(1e-6));
}

TEST_CASE("SO(6) instance with 12 agents") {
  const ProblemInstance p = averaging_instance(6, 12, 1);
  CHECK(p.agents() == 12);
  CHECK(HullOperator(p.n).d() == 32);
  for (const Matrix& d : p.data) CHECK(so_membership(d).ok());
}

TEST_CASE("pose instance consistency and partition") {
  const PointCloud cloud = synthetic_cloud(3, 103, 5);
  CHECK(cloud.size() == 103);
  CHECK(cloud.points.minCoeff() >= 0.0);
  CHECK(cloud.points.maxCoeff() <= 1.0);
  const ProblemInstance p = pose_instance(cloud, 10, 0.05, 17);
  CHECK(p.agents() == 10);
  REQUIRE(p.ground_truth);
  int total = 0;
  for (int i = 0; i < p.agents(); ++i) {
    const Matrix& b = p.model_points[i];
    const Matrix& c = p.observed_points[i];
    CHECK(b.cols() == c.cols());
    CHECK((b.cols() == 10 || b.cols() == 11));
    CHECK((p.data[i] - c * b.transpose()).norm() <= 1e-12);
    total += static_cast<int>(b.cols());
  }
  CHECK(total == 103);
  Matrix all_b(3, total);
  int col = 0;
  for (const Matrix& b : p.model_points) all_b.middleCols(col, b.cols()) = b, col += b.cols();
  CHECK(all_b.rowwise().sum().norm() <= 1e-10);
}

TEST_CASE("noiseless pose recovery is exact") {
  for (int n = 2; n <= 3; ++n) {
    const PointCloud cloud = synthetic_cloud(n, 60, 3);
    for (int agents : {1, 4, 10}) {
      const ProblemInstance p = pose_instance(cloud, agents, 0.0, 100 + agents);
      const HullOperator h(n);
      CHECK((linear_max_over_hull(h, p.aggregate()).rotation - *p.ground_truth).norm() <= 1e-6);
      CHECK((oracle::procrustes(p.aggregate()) - *p.ground_truth).norm() <= 1e-6);
    }
  }
}

TEST_CASE("pose instance rejects more agents than points") {
  const PointCloud cloud = synthetic_cloud(3, 5, 1);
  CHECK_THROWS_AS(pose_instance(cloud, 6, 0.0, 1), std::invalid_argument);
}

TEST_CASE("first_agents keeps a prefix") {
  const ProblemInstance p = pose_instance(synthetic_cloud(3, 70, 1), 7, 0.1, 2);
  const ProblemInstance q = p.first_agents(3);
  CHECK(q.agents() == 3);
  CHECK((q.data[2] - p.data[2]).norm() == 0.0);
  CHECK(q.ground_truth);
}

TEST_CASE("point cloud loading: CSV, OBJ, errors") {
  const PointCloud csv = load_point_cloud(write_temp("three.csv", "0,0,0\n2,0,0\n0,1,0.5\n"));
  CHECK(csv.dim() == 3);
  CHECK(csv.size() == 3);
  CHECK(csv.points.maxCoeff() == doctest::Approx(1.0));
  const PointCloud raw = load_point_cloud(write_temp("raw.csv", "0 0 0\n2 0 0\n"), false);
  CHECK(raw.points(0, 1) == 2.0);

  const PointCloud obj = load_point_cloud(
      write_temp("mesh.obj", "# mesh\nv 0 0 0\nv 1 0 0\nvn 0 0 1\nv 0 1 0\nf 1 2 3\n"), false);
  CHECK(obj.size() == 3);

  CHECK_THROWS(load_point_cloud(write_temp("empty.csv", "")));
  CHECK_THROWS(load_point_cloud(write_temp("ragged.csv", "0,0,0\n1,1\n")));
  CHECK_THROWS(load_point_cloud(write_temp("text.csv", "0,0,0\n1,a,1\n")));
  CHECK_THROWS(load_point_cloud(fs::temp_directory_path() / "socon_missing.csv"));
  try {
    load_point_cloud(write_temp("line.csv", "0,0,0\n1,1,1\n1,b,1\n"));
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("data matrix files") {
  const ProblemInstance p =
      load_data_matrices(write_temp("data.txt", "# two agents\n1 0 0 1\n0,-1,1,0\n"));
  CHECK(p.n == 2);
  CHECK(p.agents() == 2);
  CHECK(p.data[1](0, 1) == -1.0);
  CHECK_THROWS(load_data_matrices(write_temp("bad.txt", "1 0 0\n")));
  CHECK_THROWS(load_data_matrices(write_temp("mixed.txt", "1 0 0 1\n1 0 0 0 1 0 0 0 1\n")));
}

TEST_CASE("procrustes_rotation agrees with the independent oracle") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int s = 0; s < 50; ++s) {
    Matrix d(3, 3);
    for (int k = 0; k < 9; ++k) d.data()[k] = g(rng);
    CHECK((procrustes_rotation(d) - oracle::procrustes(d)).norm() <= 1e-9);
  }
}

}  // TEST_SUITE
