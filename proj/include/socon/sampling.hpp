#pragma once

#include <random>

#include "socon/linalg.hpp"

namespace socon {

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);
Vector random_unit_vector(int d, std::mt19937_64& rng);
/// (G + G^T)/2 with standard normal G.
Matrix random_symmetric(int d, std::mt19937_64& rng);
/// G G^T / trace for a d x r Gaussian G with r drawn from 1..d; feasible.
SpectraPoint random_spectra_point(int d, std::mt19937_64& rng);

}  // namespace socon
