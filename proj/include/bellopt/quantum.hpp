#pragma once

// Two-qubit quantum mechanics: density matrices, projective qubit
// measurements, Born-rule statistics and the Horodecki CHSH bound.
//
// Basis convention: H -> |0>, V -> |1>, two-qubit index = 2*a + b with
// Alice as the most significant qubit. Pauli matrices in standard form.

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace bellopt::quantum {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// 4x4 Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates all three invariants and throws std::invalid_argument on
/// violation, so every instance in circulation is a physical state.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const Matrix4c& m);
  static DensityMatrix from_pure(const Vector4c& psi);

  const Matrix4c& matrix() const noexcept { return m_; }
  double purity() const;
  /// Eigenvalues in ascending order.
  Eigen::Vector4d eigenvalues() const;

 private:
  explicit DensityMatrix(const Matrix4c& m) : m_(m) {}
  Matrix4c m_;
};

/// Measurement direction on the Bloch sphere. `theta` is the polar angle in
/// [0, pi], `phi` the azimuth in [0, 2 pi) once reduced.
struct BlochDirection {
  double theta = 0.0;
  double phi = 0.0;

  Vector3 unit_vector() const;
  /// Maps arbitrary real angles onto the canonical ranges while preserving
  /// the unit vector r(theta, phi).
  static BlochDirection reduced(double theta, double phi);
};

/// Dichotomic qubit observable r.sigma with eigenvalues +1 and -1.
class Observable {
 public:
  explicit Observable(const BlochDirection& dir);
  const Matrix2c& matrix() const noexcept { return m_; }

 private:
  Matrix2c m_;
};

struct ProjectorPair {
  Matrix2c plus;   // outcome +1
  Matrix2c minus;  // outcome -1
};

Matrix2c pauli_x();
Matrix2c pauli_y();
Matrix2c pauli_z();
Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

/// cos(gamma)|HV> + e^{i phi} sin(gamma)|VH>.
DensityMatrix make_pure_state(double gamma, double phi = 0.0);

/// p |psi^gamma><psi^gamma| + (1-p) [lambda (|psi-><psi-| + |psi+><psi+|)/2
/// + (1-lambda) I/4]. Throws std::invalid_argument for p or lambda outside
/// [0, 1].
DensityMatrix make_noisy_state(double p, double lambda, double gamma);

ProjectorPair projector_pm(const BlochDirection& dir);

/// Born rule p(a, b) = Tr[(Pi_a (x) Pi_b) rho] with a, b in {+1, -1}.
double joint_probability(const DensityMatrix& rho, int a, int b,
                         const BlochDirection& dir_a,
                         const BlochDirection& dir_b);

/// All four Born probabilities in the order (+1,+1), (+1,-1), (-1,+1),
/// (-1,-1).
std::array<double, 4> outcome_probabilities(const DensityMatrix& rho,
                                            const BlochDirection& dir_a,
                                            const BlochDirection& dir_b);

/// <A (x) B> = Tr[(A (x) B) rho].
double correlator(const DensityMatrix& rho, const BlochDirection& dir_a,
                  const BlochDirection& dir_b);

/// <A (x) I>, <I (x) B>.
double marginal_a(const DensityMatrix& rho, const BlochDirection& dir_a);
double marginal_b(const DensityMatrix& rho, const BlochDirection& dir_b);

/// T_ij = Tr[rho (sigma_i (x) sigma_j)].
Matrix3 correlation_matrix(const DensityMatrix& rho);
/// Local Bloch vectors of the reduced states.
Vector3 bloch_vector_a(const DensityMatrix& rho);
Vector3 bloch_vector_b(const DensityMatrix& rho);

/// Maximal CHSH value 2 sqrt(m1 + m2), m1 >= m2 the two largest eigenvalues
/// of T^T T.
double horodecki_chsh_max(const DensityMatrix& rho);

}  // namespace bellopt::quantum
