#include "socon/problems.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace socon {

Matrix ProblemInstance::aggregate() const {
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& d : data) sum += d;
  return sum;
}

ProblemInstance ProblemInstance::first_agents(int k) const {
  if (k < 1 || k > agents()) throw std::out_of_range("first_agents: k outside 1.." + std::to_string(agents()));
  ProblemInstance out;
  out.n = n;
  out.ground_truth = ground_truth;
  out.data.assign(data.begin(), data.begin() + k);
  if (!model_points.empty()) {
    out.model_points.assign(model_points.begin(), model_points.begin() + k);
    out.observed_points.assign(observed_points.begin(), observed_points.begin() + k);
  }
  return out;
}

Matrix random_rotation(int n, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("random_rotation: n must be >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0) q.col(k) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Matrix random_rotation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation(n, rng);
}

ProblemInstance averaging_instance(std::vector<Matrix> rotations) {
  if (rotations.empty()) throw std::invalid_argument("averaging_instance: need at least one agent");
  ProblemInstance p;
  p.n = static_cast<int>(rotations.front().rows());
  for (const Matrix& r : rotations) {
    if (r.rows() != p.n || r.cols() != p.n) throw std::invalid_argument("averaging_instance: inconsistent sizes");
  }
  p.data = std::move(rotations);
  return p;
}

ProblemInstance averaging_instance(int n, int agents, std::uint64_t seed) {
  if (agents < 1) throw std::invalid_argument("averaging_instance: need at least one agent");
  std::mt19937_64 rng(seed);
  std::vector<Matrix> rotations;
  rotations.reserve(agents);
  for (int i = 0; i < agents; ++i) rotations.push_back(random_rotation(n, rng));
  return averaging_instance(std::move(rotations));
}

namespace {

std::vector<double> split_numbers(const std::string& line, const std::filesystem::path& path, int lineno) {
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": cannot parse number '" + token + "'");
    }
    values.push_back(v);
  }
  return values;
}

bool is_blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

ProblemInstance load_data_matrices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path.string());
  ProblemInstance p;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (is_blank_or_comment(line)) continue;
    const auto values = split_numbers(line, path, lineno);
    int n = 0;
    while ((n + 1) * (n + 1) <= static_cast<int>(values.size())) ++n;
    if (n < 2 || n * n != static_cast<int>(values.size())) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected n*n entries (n >= 2), got " +
                               std::to_string(values.size()));
    }
    if (p.n == 0) p.n = n;
    if (n != p.n) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": inconsistent dimension");
    Matrix d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = values[i * n + j];
    p.data.push_back(std::move(d));
  }
  if (p.data.empty()) throw std::runtime_error(path.string() + ": no data matrices");
  return p;
}

PointCloud synthetic_cloud(int n, int points, std::uint64_t seed) {
  if (n < 2 || points < 1) throw std::invalid_argument("synthetic_cloud: need n >= 2 and at least one point");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  cloud.points.resize(n, points);
  for (int j = 0; j < points; ++j)
    for (int i = 0; i < n; ++i) cloud.points(i, j) = unit(rng);
  cloud.centroid = cloud.points.rowwise().mean();
  return cloud;
}

PointCloud load_point_cloud(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point cloud " + path.string());
  const bool obj = path.extension() == ".obj" || path.extension() == ".OBJ";

  std::vector<std::vector<double>> rows;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (is_blank_or_comment(line)) continue;
    if (obj) {
      if (line.rfind("v ", 0) != 0 && line.rfind("v\t", 0) != 0) continue;  // faces, normals, ...
      line.erase(0, 2);
    }
    auto values = split_numbers(line, path, lineno);
    if (obj && values.size() == 4) values.pop_back();  // optional w
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(rows.front().size()) + " coordinates, got " +
                               std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no points");
  const int n = static_cast<int>(rows.front().size());
  if (n < 2) throw std::runtime_error(path.string() + ": points need at least two coordinates");

  PointCloud cloud;
  cloud.points.resize(n, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (int i = 0; i < n; ++i) cloud.points(i, j) = rows[j][i];
  if (!cloud.points.allFinite()) throw std::runtime_error(path.string() + ": non-finite coordinates");

  if (normalize) {
    const double extent = (cloud.points.rowwise().maxCoeff() - cloud.points.rowwise().minCoeff()).maxCoeff();
    if (extent > 0) cloud.points /= extent;
  }
  cloud.centroid = cloud.points.rowwise().mean();
  return cloud;
}

ProblemInstance pose_instance(const PointCloud& model, int agents, double sigma, std::uint64_t seed) {
  const int m = model.size();
  if (m < 1) throw std::invalid_argument("pose_instance: empty model");
  if (agents < 1 || agents > m) {
    throw std::invalid_argument("pose_instance: agent count " + std::to_string(agents) + " must be in 1.." +
                                std::to_string(m));
  }
  if (sigma < 0) throw std::invalid_argument("pose_instance: sigma must be non-negative");

  const int n = model.dim();
  std::mt19937_64 rng(seed);
  const Matrix truth = random_rotation(n, rng);

  Matrix observed = truth * model.points;
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (sigma > 0) {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) observed(i, j) += sigma * gauss(rng);
  }

  const Matrix centered_model = model.points.colwise() - model.points.rowwise().mean();
  const Matrix centered_obs = observed.colwise() - observed.rowwise().mean();

  ProblemInstance p;
  p.n = n;
  p.ground_truth = truth;
  for (int a = 0; a < agents; ++a) {
    const Eigen::Index begin = static_cast<Eigen::Index>(a) * m / agents;
    const Eigen::Index end = static_cast<Eigen::Index>(a + 1) * m / agents;
    Matrix b = centered_model.middleCols(begin, end - begin);
    Matrix c = centered_obs.middleCols(begin, end - begin);
    p.data.push_back(c * b.transpose());
    p.model_points.push_back(std::move(b));
    p.observed_points.push_back(std::move(c));
  }
  return p;
}

Matrix procrustes_rotation(const Matrix& data) {
  Eigen::JacobiSVD<Matrix> svd(data, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u = svd.matrixU(), v = svd.matrixV();
  Vector signs = Vector::Ones(data.rows());
  signs(data.rows() - 1) = (u * v.transpose()).determinant() < 0 ? -1.0 : 1.0;
  return u * signs.asDiagonal() * v.transpose();
}

}  // namespace socon
