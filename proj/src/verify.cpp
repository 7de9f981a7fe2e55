#include "socon/verify.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "socon/hull.hpp"
#include "socon/problems.hpp"
#include "socon/protocols.hpp"
#include "socon/sampling.hpp"
#include "socon/spectral.hpp"

namespace socon {
namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

Outcome basis_symmetry() {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const HullOperator h(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Matrix a = h.basis(i, j);
        worst = std::max(worst, (a - a.transpose()).cwiseAbs().maxCoeff());
      }
  }
  return {worst == 0.0, "max asymmetry " + fmt(worst) + " for n=2..6"};
}

Outcome adjoint_identity(int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const HullOperator h(n);
    for (int s = 0; s < samples; ++s) {
      const Matrix z = random_spectra_point(h.d(), rng).matrix();
      const Matrix y = random_gaussian(n, n, rng);
      worst = std::max(worst, std::abs(frobenius_inner(h.apply(z), y) - frobenius_inner(z, h.adjoint(y))));
    }
  }
  return {worst <= 1e-10, "max |<A(Z),Y> - <Z,A'(Y)>| = " + fmt(worst)};
}

// Random rank-one Z lands in SO(n) only for n <= 3, where every unit spinor
// is pure.
Outcome rank_one_membership(int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int n = 2; n <= 3; ++n) {
    const HullOperator h(n);
    for (int s = 0; s < samples; ++s) {
      worst = std::max(worst, so_membership(h.apply(SpectraPoint::rank_one(random_unit_vector(h.d(), rng)))).worst());
    }
  }
  return {worst <= kRotationTolerance, "n=2,3 worst residual " + fmt(worst)};
}

Outcome optimum_membership(int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const HullOperator h(n);
    for (int s = 0; s < samples / 10; ++s) {
      worst = std::max(worst, so_membership(linear_max_over_hull(h, random_gaussian(n, n, rng)).rotation).worst());
    }
  }
  return {worst <= kRotationTolerance, "n=2..6 worst residual " + fmt(worst)};
}

Outcome hull_containment(int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const HullOperator h(n);
    for (int s = 0; s < samples / 10; ++s) {
      const Matrix r = h.apply(random_spectra_point(h.d(), rng));
      Eigen::JacobiSVD<Matrix> svd(r);
      worst = std::max(worst, svd.singularValues()(0));
    }
  }
  return {worst <= 1.0 + kRotationTolerance, "largest singular value " + fmt(worst)};
}

Outcome eig_reconstruction(int samples, std::mt19937_64& rng) {
  double recon = 0.0, ortho = 0.0;
  bool sorted = true;
  for (int s = 0; s < samples / 10; ++s) {
    const int d = 2 + s % 31;
    const Matrix m = random_symmetric(d, rng);
    const EigDecomposition e = sym_eig(m);
    recon = std::max(recon, (e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm());
    ortho = std::max(ortho, (e.vectors.transpose() * e.vectors - Matrix::Identity(d, d)).norm());
    for (int k = 1; k < d; ++k) sorted = sorted && e.values(k - 1) >= e.values(k);
  }
  return {recon <= 1e-9 && ortho <= 1e-10 && sorted, "reconstruction " + fmt(recon) + ", orthonormality " + fmt(ortho)};
}

// KKT for the simplex projection x of v: x = max(v - tau, 0) for one tau.
Outcome simplex_kkt(int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector v = 3.0 * random_gaussian(1 + s % 12, 1, rng);
    const Vector x = project_simplex(v);
    double tau = 0.0;
    int support = 0;
    for (Eigen::Index k = 0; k < x.size(); ++k)
      if (x(k) > 0) {
        tau += v(k) - x(k);
        ++support;
      }
    tau /= std::max(support, 1);
    worst = std::max(worst, std::abs(x.sum() - 1.0));
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      worst = std::max(worst, -x(k));
      worst = std::max(worst, x(k) > 0 ? std::abs(v(k) - x(k) - tau) : std::max(0.0, v(k) - tau));
    }
  }
  return {worst <= 1e-12, "worst KKT violation " + fmt(worst)};
}

Outcome spectrahedron_projection(int samples, std::mt19937_64& rng) {
  double idem = 0.0, expansion = 0.0;
  bool feasible = true;
  for (int s = 0; s < samples / 10; ++s) {
    const int d = 2 + s % 15;
    const Matrix t1 = random_symmetric(d, rng), t2 = random_symmetric(d, rng);
    const SpectraPoint p1 = project_spectrahedron(t1), p2 = project_spectrahedron(t2);
    feasible = feasible && p1.feasible() && p2.feasible();
    idem = std::max(idem, (project_spectrahedron(p1.matrix()).matrix() - p1.matrix()).norm());
    expansion = std::max(expansion, (p1.matrix() - p2.matrix()).norm() - (t1 - t2).norm());
  }
  return {feasible && idem <= 1e-10 && expansion <= 1e-12,
          "idempotence " + fmt(idem) + ", expansion " + fmt(expansion)};
}

Outcome procrustes_equivalence(int samples, std::mt19937_64& rng) {
  const HullOperator h(3);
  double worst = 0.0;
  for (int s = 0; s < samples / 5; ++s) {
    const Matrix d = random_gaussian(3, 3, rng);
    worst = std::max(worst, (linear_max_over_hull(h, d).rotation - procrustes_rotation(d)).norm());
  }
  return {worst <= 1e-6, "max ||R_eig - R_svd||_F = " + fmt(worst)};
}

// Negated basis must be caught: the rank-one images flip to det = -1.
Outcome sign_flip_detected(std::mt19937_64& rng) {
  const HullOperator flipped(3, HullOptions{.negate_basis = true});
  const Matrix r = flipped.apply(SpectraPoint::rank_one(random_unit_vector(flipped.d(), rng)));
  const Membership m = so_membership(r);
  const double det = r.determinant();
  return {!m.ok() && std::abs(det + 1.0) <= 1e-8, "flipped hull gives det " + fmt(det)};
}

Outcome n4_hull_timing(std::mt19937_64& rng) {
  const auto start = std::chrono::steady_clock::now();
  const HullOperator h(4);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const Matrix z = random_spectra_point(h.d(), rng).matrix();
    const Matrix y = random_gaussian(4, 4, rng);
    worst = std::max(worst, std::abs(frobenius_inner(h.apply(z), y) - frobenius_inner(z, h.adjoint(y))));
    worst = std::max(worst, so_membership(linear_max_over_hull(h, y).rotation).worst());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {secs < 10.0 && worst <= 1e-8, "n=4 battery in " + fmt(secs) + " s"};
}

Outcome phase_determinism() {
  const ProblemInstance p = averaging_instance(3, 12, 99);
  auto g = std::make_shared<const CommGraph>(CommGraph::ring(12, 2));
  bool same = true;
  for (ProtocolKind kind : {ProtocolKind::dual_decomposition, ProtocolKind::distributed_admm, ProtocolKind::fusion_admm}) {
    ProtocolConfig c;
    c.kind = kind;
    c.alpha = kind == ProtocolKind::dual_decomposition ? 0.1 : 0.5;
    c.max_iters = 40;
    c.stop_tolerance = 0.0;
    const RunResult serial = run(p, g, c);
    c.execution = Execution::parallel;
    const RunResult parallel = run(p, g, c);
    for (std::size_t t = 0; t < serial.trace.size(); ++t) {
      same = same && serial.trace[t].disagreement == parallel.trace[t].disagreement &&
             serial.trace[t].optimality_gap == parallel.trace[t].optimality_gap;
    }
    same = same && serial.consensus == parallel.consensus;
  }
  return {same, same ? "serial and OpenMP traces bitwise identical" : "serial and OpenMP traces differ"};
}

}  // namespace

std::vector<CheckResult> verify_suite(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  const int n = options.samples;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"hull.basis_symmetry", [] { return basis_symmetry(); }},
      {"hull.adjoint_identity", [&] { return adjoint_identity(n, rng); }},
      {"hull.rank_one_membership", [&] { return rank_one_membership(n, rng); }},
      {"hull.optimum_membership", [&] { return optimum_membership(n, rng); }},
      {"hull.containment", [&] { return hull_containment(n, rng); }},
      {"hull.sign_flip_detected", [&] { return sign_flip_detected(rng); }},
      {"hull.n4_timing", [&] { return n4_hull_timing(rng); }},
      {"spectral.eig_reconstruction", [&] { return eig_reconstruction(n, rng); }},
      {"spectral.simplex_kkt", [&] { return simplex_kkt(n, rng); }},
      {"spectral.spectrahedron_projection", [&] { return spectrahedron_projection(n, rng); }},
      {"spectral.procrustes_equivalence", [&] { return procrustes_equivalence(n, rng); }},
      {"protocols.phase_determinism", [] { return phase_determinism(); }},
  };

  std::vector<CheckResult> results;
  for (const auto& [name, check] : checks) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = check();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

std::string verify_report(const std::vector<CheckResult>& results) {
  std::string out;
  for (const CheckResult& r : results) {
    out += nlohmann::json{{"check", r.name}, {"pass", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace socon
