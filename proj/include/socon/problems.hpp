#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include "socon/linalg.hpp"

namespace socon {

/// One consensus problem: agent i holds D^i = C^i (B^i)^T and all agents seek
/// argmax over conv SO(n) of sum_i <D^i, R>.
struct ProblemInstance {
  int n = 0;
  std::vector<Matrix> data;               // D^i, n x n
  std::optional<Matrix> ground_truth;     // R_true when the generator knows it
  std::vector<Matrix> model_points;       // B^i, n x m_i (pose problems only)
  std::vector<Matrix> observed_points;    // C^i, n x m_i

  int agents() const { return static_cast<int>(data.size()); }
  /// sum_i D^i.
  Matrix aggregate() const;
  /// Keep only the first k agents (active-sensor subsets).
  ProblemInstance first_agents(int k) const;
};

/// Coordinates as columns, n x m.
struct PointCloud {
  Matrix points;
  Vector centroid;

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
};

/// Haar sample: QR of a Gaussian matrix, R's diagonal signs folded into Q,
/// first column flipped if det = -1.
Matrix random_rotation(int n, std::mt19937_64& rng);
Matrix random_rotation(int n, std::uint64_t seed);

/// Rotation averaging: B^i = I, C^i = D^i = R^i_0 drawn at random.
ProblemInstance averaging_instance(int n, int agents, std::uint64_t seed);
ProblemInstance averaging_instance(std::vector<Matrix> rotations);

/// Agent data read from a text file: one agent per non-comment line holding
/// the n*n entries of D^i in row-major order, separated by commas or spaces.
ProblemInstance load_data_matrices(const std::filesystem::path& path);

/// Points uniform in the unit cube [0,1]^n (stand-in for a scanned model).
PointCloud synthetic_cloud(int n, int points, std::uint64_t seed);

/// CSV (one point per line, comma or whitespace separated) or, for *.obj,
/// the 'v x y z' lines of a Wavefront file. With normalize, coordinates are
/// scaled so the largest bounding-box side is 1.
PointCloud load_point_cloud(const std::filesystem::path& path, bool normalize = true);

/// Pose estimation: rotate the model by a random R_true, add iid N(0, sigma^2)
/// noise per coordinate, subtract the global centroids of model and
/// observations, split the point indices into contiguous balanced blocks,
/// and set D^i = C^i (B^i)^T. Throws if agents > number of points.
ProblemInstance pose_instance(const PointCloud& model, int agents, double sigma, std::uint64_t seed);

/// Centralized SVD solution of the Wahba/Procrustes problem
/// argmax_{R in SO(n)} <D, R> = U diag(1,..,1,det(U V^T)) V^T.
Matrix procrustes_rotation(const Matrix& data);

}  // namespace socon
