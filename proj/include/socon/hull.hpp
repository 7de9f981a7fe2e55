#pragma once

#include "socon/linalg.hpp"

namespace socon {

inline constexpr int kDefaultMaxDimension = 8;

/// lambda_i: (i-1) copies of diag(1,-1), the skew factor [[0,-1],[1,0]] at
/// slot i, then (n-i) identities. Slots are 1-based; result is 2^n x 2^n.
Matrix build_lambda(int n, int i);

/// rho_j: (j-1) identities, the skew factor at slot j, then (n-j) copies of
/// diag(1,-1). Slots are 1-based.
Matrix build_rho(int n, int j);

/// 2^n x 2^(n-1) selector onto the even-parity coordinates of R^(2^n).
/// Column c is the standard basis vector of the c-th index (ascending) whose
/// binary expansion has an even number of ones, so P P^T = (I + D)/2 with
/// D = diag(1,-1)^(x)n.
Matrix build_p_even(int n);

struct HullOptions {
  int max_dimension = kDefaultMaxDimension;
  /// Test hook: negate every A_ij. Sends rank-one images of odd n to the
  /// det = -1 component so the membership checks can be seen to fail.
  bool negate_basis = false;
};

/// Spectrahedral parameterization of conv SO(n):
///   conv SO(n) = { A(Z) : Z >= 0, trace Z = 1 },  A(Z)_ij = <A_ij, Z>,
/// with A_ij = -P_even^T lambda_i rho_j P_even, each symmetric of size
/// d = 2^(n-1). Immutable after construction.
class HullOperator {
 public:
  explicit HullOperator(int n, HullOptions options = {});

  int n() const { return n_; }
  int d() const { return d_; }

  /// A_ij for 0-based (i, j).
  Matrix basis(int i, int j) const;

  /// R = A(Z), n x n.
  Matrix apply(const Matrix& z) const;
  Matrix apply(const SpectraPoint& z) const { return apply(z.matrix()); }

  /// A^dagger(Y) = sum_ij A_ij Y_ij, symmetric d x d.
  Matrix adjoint(const Matrix& y) const;

 private:
  int n_;
  int d_;
  // Row (i + n*j) holds vec(A_ij), so vec(A(Z)) = stacked_ * vec(Z) in
  // Eigen's column-major layout.
  Matrix stacked_;
};

}  // namespace socon
