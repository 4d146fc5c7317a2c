/**
 * @brief Coherences during level shifts of a qubit and their active correction.
 *
 * 2x2 Hermitian objects in a fixed computational basis; hbar = 1.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bitreset {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kMatrixTolerance = 1e-12;

namespace detail {
/// Scales v so that its first component with modulus above tol is real positive.
inline Vector2c fix_phase(Vector2c v) {
  v.normalize();
  for (int i = 0; i < 2; ++i) {
    const double mag = std::abs(v(i));
    if (mag > kMatrixTolerance) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      break;
    }
  }
  return v;
}

inline bool is_hermitian(const Matrix2c &m, double tol = kMatrixTolerance) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}
}  // namespace detail

/// Eigenvalues in ascending order with their phase-fixed eigenvectors.
struct Eigensystem {
  std::array<double, 2> energies{};
  std::array<Vector2c, 2> vectors{};

  [[nodiscard]] double gap() const { return energies[1] - energies[0]; }
};

/// Hermitian 2x2 Hamiltonian stored as real diagonal + the lower off-diagonal element.
class Hamiltonian2 {
 public:
  Hamiltonian2(double e00, double e11, Complex lower_offdiag = {}) : d0_(e00), d1_(e11), off_(lower_offdiag) {
    if (!std::isfinite(d0_) || !std::isfinite(d1_) || !std::isfinite(off_.real()) || !std::isfinite(off_.imag()))
      throw std::invalid_argument("hamiltonian: entries must be finite");
    decompose();
  }

  static Hamiltonian2 diagonal(double e_lower, double e_upper) { return {e_lower, e_upper}; }

  /// R diag(e1, e2) R^T with R the real rotation by theta: |E_1> = (cos, sin), |E_2> = (-sin, cos).
  static Hamiltonian2 rotated(double e1, double e2, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {e1 * c * c + e2 * s * s, e1 * s * s + e2 * c * c, Complex((e1 - e2) * c * s, 0.0)};
  }

  static Hamiltonian2 from_matrix(const Matrix2c &m) {
    if (!detail::is_hermitian(m)) throw std::invalid_argument("hamiltonian: matrix is not Hermitian");
    return {m(0, 0).real(), m(1, 1).real(), 0.5 * (m(1, 0) + std::conj(m(0, 1)))};
  }

  [[nodiscard]] Matrix2c matrix() const {
    Matrix2c m;
    m << Complex(d0_, 0.0), std::conj(off_), off_, Complex(d1_, 0.0);
    return m;
  }

  [[nodiscard]] const Eigensystem &eigen() const { return eig_; }
  [[nodiscard]] bool degenerate(double tol = kMatrixTolerance) const {
    return eig_.gap() <= tol * std::max(1.0, std::abs(eig_.energies[1]));
  }

 private:
  void decompose() {
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(matrix());
    for (int i = 0; i < 2; ++i) {
      eig_.energies[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
      eig_.vectors[static_cast<std::size_t>(i)] = detail::fix_phase(solver.eigenvectors().col(i));
    }
  }

  double d0_, d1_;
  Complex off_;
  Eigensystem eig_;
};

class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const Matrix2c &m) : m_(m) { validate(); }

  static DensityMatrix2 diagonal(double p_lower, double p_upper) {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = p_lower;
    m(1, 1) = p_upper;
    return DensityMatrix2(m);
  }

  /// sum_i P_i |E_i><E_i| in the eigenbasis of h.
  static DensityMatrix2 in_eigenbasis(const Hamiltonian2 &h, double p_lower, double p_upper) {
    const auto &v = h.eigen().vectors;
    Matrix2c m = p_lower * v[0] * v[0].adjoint() + p_upper * v[1] * v[1].adjoint();
    return DensityMatrix2(0.5 * (m + m.adjoint()));
  }

  [[nodiscard]] const Matrix2c &matrix() const { return m_; }

  [[nodiscard]] std::array<double, 2> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(m_, Eigen::EigenvaluesOnly);
    return {solver.eigenvalues()(0), solver.eigenvalues()(1)};
  }

  /// Population of eigenvector i of h: <E_i|rho|E_i>.
  [[nodiscard]] double population(const Hamiltonian2 &h, std::size_t i) const {
    const auto &v = h.eigen().vectors[i];
    return (v.adjoint() * m_ * v)(0, 0).real();
  }

  /// |<E_1|rho|E_2>| in the eigenbasis of h.
  [[nodiscard]] double coherence(const Hamiltonian2 &h) const {
    const auto &v = h.eigen().vectors;
    return std::abs((v[0].adjoint() * m_ * v[1])(0, 0));
  }

 private:
  void validate() const {
    if (!m_.allFinite()) throw std::invalid_argument("density matrix: entries must be finite");
    if (!detail::is_hermitian(m_)) throw std::invalid_argument("density matrix: not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0, 0.0)) > kMatrixTolerance)
      throw std::invalid_argument("density matrix: trace must be 1");
    if (eigenvalues()[0] < -kMatrixTolerance) throw std::invalid_argument("density matrix: not positive semidefinite");
  }

  Matrix2c m_;
};

class Unitary2 {
 public:
  explicit Unitary2(const Matrix2c &m) : m_(m) {
    if ((m_ * m_.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff() > kMatrixTolerance)
      throw std::invalid_argument("unitary: U U^dagger differs from identity");
  }

  [[nodiscard]] const Matrix2c &matrix() const { return m_; }

  [[nodiscard]] DensityMatrix2 conjugate(const DensityMatrix2 &rho) const {
    Matrix2c out = m_ * rho.matrix() * m_.adjoint();
    return DensityMatrix2(0.5 * (out + out.adjoint()));
  }

 private:
  Matrix2c m_;
};

/**
 * One level-shift step along a family of Hamiltonians diagonal in a shared
 * basis: conjugation by diag(1, e^{-i E (n + 1/2) tau}). Only the coherence
 * picks up the phase; populations are copied untouched.
 */
inline DensityMatrix2 diagonal_path_step(const DensityMatrix2 &state, int n, double step_energy, double tau) {
  const double phi = step_energy * (n + 0.5) * tau;
  Matrix2c out = state.matrix();
  if (phi != 0.0) {
    const Complex phase = std::polar(1.0, -phi);
    out(1, 0) *= phase;
    out(0, 1) = std::conj(out(1, 0));
  }
  return DensityMatrix2(out);
}

/// Tr(rho H_new) - Tr(rho H_old): work of an instantaneous quench with no correction.
inline double sudden_quench_work(const DensityMatrix2 &state, const Hamiltonian2 &h_old, const Hamiltonian2 &h_new) {
  const Matrix2c &rho = state.matrix();
  return (rho * h_new.matrix()).trace().real() - (rho * h_old.matrix()).trace().real();
}

/// p_b (E_b' - E_b) + (p_a - p_b) p(a -> b') E_b', with the lower levels pinned at zero energy.
inline double coherent_average_work(double p_a, double p_b, double p_a_to_bprime, double e_b, double e_bprime) {
  if (std::abs(p_a + p_b - 1.0) > kMatrixTolerance) throw std::invalid_argument("p_a + p_b: must equal 1");
  if (!(p_a_to_bprime >= 0.0 && p_a_to_bprime <= 1.0))
    throw std::invalid_argument("p_a_to_bprime: must lie in [0, 1]");
  return p_b * (e_bprime - e_b) + (p_a - p_b) * p_a_to_bprime * e_bprime;
}

/// U = sum_i |E~_i><E_i|, pairing eigenvectors by eigenvalue order.
inline Unitary2 correction_unitary(const Hamiltonian2 &h_old, const Hamiltonian2 &h_new) {
  if (h_old.degenerate())
    throw std::invalid_argument("correction_unitary: old Hamiltonian is degenerate, eigenbasis pairing is ambiguous");
  if (h_new.degenerate())
    throw std::invalid_argument("correction_unitary: new Hamiltonian is degenerate, eigenbasis pairing is ambiguous");
  const auto &a = h_old.eigen().vectors;
  const auto &b = h_new.eigen().vectors;
  return Unitary2(b[0] * a[0].adjoint() + b[1] * a[1].adjoint());
}

struct QuenchWork {
  double work = 0.0;
  bool precondition_violated = false;  ///< state was not diagonal in the old eigenbasis
};

/// Quench followed by the correcting unitary: Tr(U rho U^dagger H_new) - Tr(rho H_old).
inline QuenchWork corrected_quench_work(const DensityMatrix2 &state, const Hamiltonian2 &h_old,
                                        const Hamiltonian2 &h_new) {
  const Unitary2 u = correction_unitary(h_old, h_new);
  const DensityMatrix2 rotated = u.conjugate(state);
  const double work =
      (rotated.matrix() * h_new.matrix()).trace().real() - (state.matrix() * h_old.matrix()).trace().real();
  return {work, state.coherence(h_old) > 1e-10};
}

}  // namespace bitreset
