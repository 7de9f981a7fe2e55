#include "socon/spectral.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace socon {

EigDecomposition sym_eig(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("sym_eig: expected a non-empty square matrix");
  if (!m.allFinite()) throw std::invalid_argument("sym_eig: non-finite entries");

  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver did not converge");

  const auto d = sym.rows();
  EigDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::Index pivot = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&pivot);
    if (out.vectors(pivot, c) < 0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

Vector project_simplex(const Vector& v) {
  if (v.size() == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("project_simplex: non-finite entries");

  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Largest k with u_k - (sum_{l<=k} u_l - 1)/k > 0 fixes the threshold.
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

SpectraPoint project_spectrahedron(const Matrix& t) {
  const EigDecomposition eig = sym_eig(t);
  const Vector weights = project_simplex(eig.values);
  Matrix z = eig.vectors * weights.asDiagonal() * eig.vectors.transpose();
  return SpectraPoint(0.5 * (z + z.transpose()));
}

LinearMaxResult linear_max_on_spectrahedron(const HullOperator& hull, const Matrix& cost) {
  if (cost.rows() != hull.d() || cost.cols() != hull.d()) {
    throw std::invalid_argument("linear_max_on_spectrahedron: cost has wrong dimension");
  }
  const EigDecomposition eig = sym_eig(cost);
  const Eigen::Index d = eig.values.size();

  Eigen::Index pick = 0;
  const double gap = d > 1 ? eig.values(0) - eig.values(1) : std::numeric_limits<double>::infinity();
  if (gap <= kEigenGapTolerance) {
    // Repeated top eigenvalue: among the tied eigenvectors take the
    // lexicographically largest (after sign normalization).
    for (Eigen::Index c = 1; c < d && eig.values(0) - eig.values(c) <= kEigenGapTolerance; ++c) {
      const auto& a = eig.vectors.col(c);
      const auto& b = eig.vectors.col(pick);
      if (std::lexicographical_compare(b.data(), b.data() + d, a.data(), a.data() + d)) pick = c;
    }
  }

  const Vector mu = eig.vectors.col(pick);
  LinearMaxResult out{hull.apply(Matrix(mu * mu.transpose())), SpectraPoint::rank_one(mu), eig.values(0), gap,
                      gap > kEigenGapTolerance};
  return out;
}

LinearMaxResult linear_max_over_hull(const HullOperator& hull, const Matrix& data) {
  if (!data.allFinite()) throw std::invalid_argument("linear_max_over_hull: non-finite data");
  return linear_max_on_spectrahedron(hull, hull.adjoint(data));
}

}  // namespace socon
