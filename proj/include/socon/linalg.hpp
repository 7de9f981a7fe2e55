#pragma once

#include <Eigen/Dense>

namespace socon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthogonality / determinant tolerance for SO(n) membership.
inline constexpr double kRotationTolerance = 1e-8;
/// PSD / unit-trace tolerance for points of the free spectrahedron.
inline constexpr double kSpectraTolerance = 1e-10;

/// Residuals of the SO(n) membership test.
struct Membership {
  double orthogonality = 0.0;  // ||R^T R - I||_F
  double determinant = 0.0;    // |det R - 1|

  double worst() const { return orthogonality > determinant ? orthogonality : determinant; }
  bool ok(double tol = kRotationTolerance) const { return orthogonality <= tol && determinant <= tol; }
};

Membership so_membership(const Matrix& r);

inline bool is_rotation(const Matrix& r, double tol = kRotationTolerance) {
  return so_membership(r).ok(tol);
}

/// Frobenius inner product <A, B> = trace(A^T B).
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

/// Dense Kronecker product a (x) b.
Matrix kronecker(const Matrix& a, const Matrix& b);

/// A point Z of the free spectrahedron {Z symmetric, Z >= 0, trace Z = 1}.
///
/// Construction does not validate; call feasible() where the invariant
/// matters. Protocol kernels build these only through projections or
/// rank-one outer products of unit vectors.
class SpectraPoint {
 public:
  explicit SpectraPoint(Matrix z) : z_(std::move(z)) {}

  /// I/d, the barycenter of the free spectrahedron.
  static SpectraPoint barycenter(int d);
  /// mu mu^T for a unit vector mu.
  static SpectraPoint rank_one(const Vector& mu);

  const Matrix& matrix() const { return z_; }
  int dim() const { return static_cast<int>(z_.rows()); }

  bool feasible(double tol = kSpectraTolerance) const;

 private:
  Matrix z_;
};

}  // namespace socon
