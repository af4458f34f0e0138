#include "bellopt/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellopt::quantum {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(v));
  }
}

double real_trace(const Matrix4c& m) { return m.trace().real(); }

// Tr[A rho] for Hermitian A without forming the product.
double expectation(const Matrix4c& op, const Matrix4c& rho) {
  return (op.transpose().cwiseProduct(rho)).sum().real();
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const Matrix4c& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("density matrix has non-finite entries");
  }
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol) {
    throw std::invalid_argument("density matrix is not Hermitian (error " +
                                std::to_string(herm_err) + ")");
  }
  const double tr = real_trace(m);
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(min_eig));
  }
  // Symmetrize so downstream expectation values are exactly real.
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix DensityMatrix::from_pure(const Vector4c& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("zero state vector");
  const Vector4c v = psi / norm;
  return from_matrix(v * v.adjoint());
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::Vector4d DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Vector3 BlochDirection::unit_vector() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

BlochDirection BlochDirection::reduced(double theta, double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  double p = phi;
  // Polar angles in (pi, 2 pi) reach the same point with the azimuth
  // rotated by pi.
  if (t > std::numbers::pi) {
    t = two_pi - t;
    p += std::numbers::pi;
  }
  p = std::fmod(p, two_pi);
  if (p < 0.0) p += two_pi;
  if (p >= two_pi) p = 0.0;
  return {t, p};
}

Observable::Observable(const BlochDirection& dir) {
  const Vector3 r = dir.unit_vector();
  m_ = r.x() * pauli_x() + r.y() * pauli_y() + r.z() * pauli_z();
}

Matrix2c pauli_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2c pauli_y() {
  Matrix2c m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Matrix2c pauli_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix make_pure_state(double gamma, double phi) {
  Vector4c psi = Vector4c::Zero();
  psi(1) = std::cos(gamma);                          // |01> = |HV>
  psi(2) = std::exp(kI * phi) * std::sin(gamma);     // |10> = |VH>
  return DensityMatrix::from_pure(psi);
}

DensityMatrix make_noisy_state(double p, double lambda, double gamma) {
  require_probability(p, "p");
  require_probability(lambda, "lambda");
  const Matrix4c target = make_pure_state(gamma).matrix();
  // (|psi-><psi-| + |psi+><psi+|)/2 = (|01><01| + |10><10|)/2
  Matrix4c bell_mix = Matrix4c::Zero();
  bell_mix(1, 1) = 0.5;
  bell_mix(2, 2) = 0.5;
  const Matrix4c white = Matrix4c::Identity() / 4.0;
  const Matrix4c m =
      p * target + (1.0 - p) * (lambda * bell_mix + (1.0 - lambda) * white);
  return DensityMatrix::from_matrix(m);
}

ProjectorPair projector_pm(const BlochDirection& dir) {
  const Matrix2c obs = Observable(dir).matrix();
  const Matrix2c id = Matrix2c::Identity();
  return {0.5 * (id + obs), 0.5 * (id - obs)};
}

double joint_probability(const DensityMatrix& rho, int a, int b,
                         const BlochDirection& dir_a,
                         const BlochDirection& dir_b) {
  if ((a != 1 && a != -1) || (b != 1 && b != -1)) {
    throw std::invalid_argument("outcomes must be +1 or -1");
  }
  const ProjectorPair pa = projector_pm(dir_a);
  const ProjectorPair pb = projector_pm(dir_b);
  const Matrix4c op = kron(a == 1 ? pa.plus : pa.minus, b == 1 ? pb.plus : pb.minus);
  return expectation(op, rho.matrix());
}

std::array<double, 4> outcome_probabilities(const DensityMatrix& rho,
                                            const BlochDirection& dir_a,
                                            const BlochDirection& dir_b) {
  const ProjectorPair pa = projector_pm(dir_a);
  const ProjectorPair pb = projector_pm(dir_b);
  return {expectation(kron(pa.plus, pb.plus), rho.matrix()),
          expectation(kron(pa.plus, pb.minus), rho.matrix()),
          expectation(kron(pa.minus, pb.plus), rho.matrix()),
          expectation(kron(pa.minus, pb.minus), rho.matrix())};
}

double correlator(const DensityMatrix& rho, const BlochDirection& dir_a,
                  const BlochDirection& dir_b) {
  const Matrix4c op = kron(Observable(dir_a).matrix(), Observable(dir_b).matrix());
  return expectation(op, rho.matrix());
}

double marginal_a(const DensityMatrix& rho, const BlochDirection& dir_a) {
  return expectation(kron(Observable(dir_a).matrix(), Matrix2c::Identity()),
                     rho.matrix());
}

double marginal_b(const DensityMatrix& rho, const BlochDirection& dir_b) {
  return expectation(kron(Matrix2c::Identity(), Observable(dir_b).matrix()),
                     rho.matrix());
}

Matrix3 correlation_matrix(const DensityMatrix& rho) {
  const Matrix2c paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  Matrix3 t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t(i, j) = expectation(kron(paulis[i], paulis[j]), rho.matrix());
    }
  }
  return t;
}

Vector3 bloch_vector_a(const DensityMatrix& rho) {
  const Matrix2c paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  Vector3 v;
  for (int i = 0; i < 3; ++i) {
    v(i) = expectation(kron(paulis[i], Matrix2c::Identity()), rho.matrix());
  }
  return v;
}

Vector3 bloch_vector_b(const DensityMatrix& rho) {
  const Matrix2c paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  Vector3 v;
  for (int i = 0; i < 3; ++i) {
    v(i) = expectation(kron(Matrix2c::Identity(), paulis[i]), rho.matrix());
  }
  return v;
}

double horodecki_chsh_max(const DensityMatrix& rho) {
  const Matrix3 t = correlation_matrix(rho);
  const Matrix3 u = t.transpose() * t;
  Eigen::SelfAdjointEigenSolver<Matrix3> es(u, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = es.eigenvalues();  // ascending
  const double m = std::max(0.0, ev(2) + ev(1));
  return 2.0 * std::sqrt(m);
}

}  // namespace bellopt::quantum
