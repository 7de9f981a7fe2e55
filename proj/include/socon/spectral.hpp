#pragma once

#include "socon/hull.hpp"
#include "socon/linalg.hpp"

namespace socon {

/// Eigenvalue gap below which the top eigenvalue is treated as repeated.
inline constexpr double kEigenGapTolerance = 1e-9;

/// Symmetric eigendecomposition M = U diag(values) U^T.
/// values are sorted descending; each column of U has its largest-magnitude
/// entry positive (first such index on ties) so output is reproducible.
struct EigDecomposition {
  Vector values;
  Matrix vectors;
};

/// Symmetrizes (M + M^T)/2 first. Throws std::invalid_argument on non-finite
/// or non-square input.
EigDecomposition sym_eig(const Matrix& m);

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
/// Sort-based thresholding, O(d log d).
Vector project_simplex(const Vector& v);

/// Euclidean projection of a symmetric matrix onto the free spectrahedron:
/// eigendecompose, project the eigenvalues onto the simplex, reassemble.
SpectraPoint project_spectrahedron(const Matrix& t);

struct LinearMaxResult {
  Matrix rotation;       // R* = A(mu mu^T)
  SpectraPoint point;    // Z* = mu mu^T
  double value = 0.0;    // top eigenvalue nu = <D, R*>
  double eigen_gap = 0.0;
  bool unique = true;    // eigen_gap > kEigenGapTolerance
};

/// max <D, R> over conv SO(n), solved through the top eigenpair of A^dagger(D).
LinearMaxResult linear_max_over_hull(const HullOperator& hull, const Matrix& data);

/// Same maximization when the symmetric cost C on the spectrahedron is
/// already assembled: argmax <C, Z> over Z >= 0, trace Z = 1.
LinearMaxResult linear_max_on_spectrahedron(const HullOperator& hull, const Matrix& cost);

}  // namespace socon
