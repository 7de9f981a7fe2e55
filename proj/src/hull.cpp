#include "socon/hull.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace socon {
namespace {

Matrix parity_factor() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix skew_factor() {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  return m;
}

void check_slot(const char* what, int n, int slot) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
  if (slot < 1 || slot > n) {
    throw std::out_of_range(std::string(what) + ": index " + std::to_string(slot) +
                            " outside 1.." + std::to_string(n));
  }
}

// Kronecker product of n 2x2 factors; factor(k) gives the k-th (1-based).
template <class Factor>
Matrix kron_chain(int n, Factor factor) {
  Matrix out = factor(1);
  for (int k = 2; k <= n; ++k) out = kronecker(out, factor(k));
  return out;
}

}  // namespace

Matrix build_lambda(int n, int i) {
  check_slot("build_lambda", n, i);
  const Matrix parity = parity_factor(), skew = skew_factor(), id = Matrix::Identity(2, 2);
  return kron_chain(n, [&](int k) -> const Matrix& { return k < i ? parity : k == i ? skew : id; });
}

Matrix build_rho(int n, int j) {
  check_slot("build_rho", n, j);
  const Matrix parity = parity_factor(), skew = skew_factor(), id = Matrix::Identity(2, 2);
  return kron_chain(n, [&](int k) -> const Matrix& { return k < j ? id : k == j ? skew : parity; });
}

Matrix build_p_even(int n) {
  if (n < 1) throw std::invalid_argument("build_p_even: n must be >= 1");
  const unsigned full = 1u << n;
  Matrix p = Matrix::Zero(full, full / 2);
  int col = 0;
  for (unsigned k = 0; k < full; ++k) {
    if (std::popcount(k) % 2 == 0) p(k, col++) = 1.0;
  }
  return p;
}

HullOperator::HullOperator(int n, HullOptions options) : n_(n), d_(0) {
  if (n < 2 || n > options.max_dimension) {
    throw std::out_of_range("HullOperator: n = " + std::to_string(n) + " outside supported range 2.." +
                            std::to_string(options.max_dimension));
  }
  d_ = 1 << (n - 1);
  const Matrix p = build_p_even(n);
  const double sign = options.negate_basis ? 1.0 : -1.0;

  std::vector<Matrix> left(n), right(n);
  for (int k = 0; k < n; ++k) {
    left[k] = p.transpose() * build_lambda(n, k + 1);
    right[k] = build_rho(n, k + 1) * p;
  }

  stacked_.resize(n * n, d_ * d_);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Matrix a = sign * (left[i] * right[j]);
      stacked_.row(i + n * j) = Eigen::Map<const Eigen::RowVectorXd>(a.data(), a.size());
    }
  }
}

Matrix HullOperator::basis(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("HullOperator::basis: index out of range");
  Eigen::RowVectorXd row = stacked_.row(i + n_ * j);
  return Eigen::Map<const Matrix>(row.data(), d_, d_);
}

Matrix HullOperator::apply(const Matrix& z) const {
  if (z.rows() != d_ || z.cols() != d_) {
    throw std::invalid_argument("HullOperator::apply: expected " + std::to_string(d_) + "x" + std::to_string(d_) +
                                " argument");
  }
  Vector r = stacked_ * Eigen::Map<const Vector>(z.data(), z.size());
  return Eigen::Map<const Matrix>(r.data(), n_, n_);
}

Matrix HullOperator::adjoint(const Matrix& y) const {
  if (y.rows() != n_ || y.cols() != n_) {
    throw std::invalid_argument("HullOperator::adjoint: expected " + std::to_string(n_) + "x" + std::to_string(n_) +
                                " argument");
  }
  Vector a = stacked_.transpose() * Eigen::Map<const Vector>(y.data(), y.size());
  return Eigen::Map<const Matrix>(a.data(), d_, d_);
}

}  // namespace socon
