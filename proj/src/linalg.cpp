#include "socon/linalg.hpp"

#include <stdexcept>

namespace socon {

Membership so_membership(const Matrix& r) {
  if (r.rows() != r.cols()) throw std::invalid_argument("so_membership: matrix is not square");
  const auto n = r.rows();
  Membership m;
  m.orthogonality = (r.transpose() * r - Matrix::Identity(n, n)).norm();
  m.determinant = std::abs(r.determinant() - 1.0);
  return m;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SpectraPoint SpectraPoint::barycenter(int d) {
  if (d < 1) throw std::invalid_argument("SpectraPoint::barycenter: d must be positive");
  return SpectraPoint(Matrix::Identity(d, d) / static_cast<double>(d));
}

SpectraPoint SpectraPoint::rank_one(const Vector& mu) {
  return SpectraPoint(mu * mu.transpose());
}

bool SpectraPoint::feasible(double tol) const {
  if (z_.rows() != z_.cols() || z_.rows() == 0) return false;
  if (!z_.allFinite()) return false;
  if ((z_ - z_.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(z_.trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(z_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace socon
