#include "socon/sampling.hpp"

namespace socon {

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  return m;
}

Vector random_unit_vector(int d, std::mt19937_64& rng) {
  Vector v = random_gaussian(d, 1, rng);
  return v / v.norm();
}

Matrix random_symmetric(int d, std::mt19937_64& rng) {
  const Matrix g = random_gaussian(d, d, rng);
  return 0.5 * (g + g.transpose());
}

SpectraPoint random_spectra_point(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, d);
  const Matrix g = random_gaussian(d, rank(rng), rng);
  Matrix z = g * g.transpose();
  z /= z.trace();
  return SpectraPoint(0.5 * (z + z.transpose()));
}

}  // namespace socon
