#pragma once

// Small-dimension complex linear algebra: Hermitian operators, kets, the
// Pauli basis and the Bloch parametrization of 2x2 unit-trace operators.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptlab {

using Complex = std::complex<double>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
/// r = sqrt(2) - 1, the short coordinate of the Hex state space.
inline constexpr double kHexR = std::numbers::sqrt2 - 1.0;

inline constexpr double kDefaultTolerance = 1e-9;

enum class Axis { X, Y, Z };

/// Which tensor factor of a bipartite 2x2 operator to keep.
enum class Subsystem { First, Second };

class KetVector {
 public:
  KetVector() = default;
  explicit KetVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw std::invalid_argument("ket must have positive dimension");
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
        throw std::invalid_argument("ket has non-finite amplitude");
    }
  }
  KetVector(std::initializer_list<Complex> amplitudes)
      : KetVector(Eigen::Map<const Eigen::VectorXcd>(amplitudes.begin(),
                                                     static_cast<Eigen::Index>(amplitudes.size()))) {}

  static KetVector basis(int dim, int index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[index] = 1.0;
    return KetVector(v);
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_[i]; }
  double norm() const { return amps_.norm(); }

  bool is_normalized(double tol = kDefaultTolerance) const { return std::abs(norm() - 1.0) <= tol; }

  KetVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero ket");
    return KetVector(amps_ / n);
  }

  /// <this|other>
  Complex braket(const KetVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("braket: dimension mismatch");
    return amps_.dot(other.amps_);
  }

 private:
  Eigen::VectorXcd amps_;
};

struct BlochVector {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double distance(const BlochVector& o) const {
    return std::sqrt((rx - o.rx) * (rx - o.rx) + (ry - o.ry) * (ry - o.ry) + (rz - o.rz) * (rz - o.rz));
  }
  double norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Throws std::invalid_argument unless `m` is square and Hermitian within `tol`.
  explicit HermitianOperator(Eigen::MatrixXcd m, double tol = kDefaultTolerance) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("Hermitian operator must be square with positive dimension");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        const Complex v = m_(i, j);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw std::invalid_argument("Hermitian operator has a non-finite entry");
        if (std::abs(v - std::conj(m_(j, i))) > tol)
          throw std::invalid_argument("matrix is not Hermitian (entry " + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
      }
    }
    // Symmetrize so downstream arithmetic sees an exactly Hermitian matrix.
    m_ = (0.5 * (m_ + m_.adjoint())).eval();
  }

  static HermitianOperator identity(int dim) { return HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim)); }
  static HermitianOperator zero(int dim) { return HermitianOperator(Eigen::MatrixXcd::Zero(dim, dim)); }
  static HermitianOperator projector(const KetVector& k) {
    return HermitianOperator(k.amplitudes() * k.amplitudes().adjoint());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const {
    check_same_dim(o);
    return HermitianOperator(m_ + o.m_);
  }
  HermitianOperator operator-(const HermitianOperator& o) const {
    check_same_dim(o);
    return HermitianOperator(m_ - o.m_);
  }
  HermitianOperator operator*(double s) const { return HermitianOperator(m_ * s); }
  friend HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

  double max_abs_diff(const HermitianOperator& o) const {
    check_same_dim(o);
    return (m_ - o.m_).cwiseAbs().maxCoeff();
  }

 private:
  void check_same_dim(const HermitianOperator& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("Hermitian operator dimension mismatch");
  }

  Eigen::MatrixXcd m_;
};

inline HermitianOperator pauli(Axis axis) {
  Eigen::MatrixXcd m(2, 2);
  switch (axis) {
    case Axis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::Y:
      m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
      break;
    case Axis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return HermitianOperator(m);
}

/// Kronecker product; the first argument indexes the slow (outer) factor.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

inline KetVector tensor(const KetVector& a, const KetVector& b) {
  return KetVector(kron(a.amplitudes(), b.amplitudes()).col(0));
}

/// Tr[a b]. Throws std::invalid_argument on a dimension mismatch or if the
/// trace has an imaginary part above `tol` (impossible for Hermitian inputs
/// beyond round-off).
inline double hs_inner(const HermitianOperator& a, const HermitianOperator& b, double tol = kDefaultTolerance) {
  if (a.dim() != b.dim()) throw std::invalid_argument("hs_inner: dimension mismatch");
  // Tr[AB] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  const Complex t = (a.matrix().array() * b.matrix().transpose().array()).sum();
  if (std::abs(t.imag()) > tol) throw std::logic_error("hs_inner: imaginary part exceeds tolerance");
  return t.real();
}

/// (1 + rx X + ry Y + rz Z) / 2
inline HermitianOperator bloch_to_operator(const BlochVector& v) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.5 * (1.0 + v.rz), 0.5 * Complex(v.rx, -v.ry), 0.5 * Complex(v.rx, v.ry), 0.5 * (1.0 - v.rz);
  return HermitianOperator(m);
}

inline BlochVector operator_to_bloch(const HermitianOperator& m, double tol = kDefaultTolerance) {
  if (m.dim() != 2) throw std::invalid_argument("operator_to_bloch: expected a 2x2 operator");
  if (std::abs(m.trace() - 1.0) > tol) throw std::invalid_argument("operator_to_bloch: operator is not unit trace");
  return {hs_inner(m, pauli(Axis::X)), hs_inner(m, pauli(Axis::Y)), hs_inner(m, pauli(Axis::Z))};
}

/// Coefficients (c0, cx, cy, cz) with m = c0 1 + cx X + cy Y + cz Z.
struct PauliCoefficients {
  double c0 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
};

inline PauliCoefficients pauli_coefficients(const HermitianOperator& m) {
  if (m.dim() != 2) throw std::invalid_argument("pauli_coefficients: expected a 2x2 operator");
  return {0.5 * m.trace(), 0.5 * hs_inner(m, pauli(Axis::X)), 0.5 * hs_inner(m, pauli(Axis::Y)),
          0.5 * hs_inner(m, pauli(Axis::Z))};
}

/// Observable n.sigma for a real direction (not normalized).
inline HermitianOperator observable(double nx, double ny, double nz) {
  return nx * pauli(Axis::X) + ny * pauli(Axis::Y) + nz * pauli(Axis::Z);
}

/// Real spectrum, sorted descending.
inline std::vector<double> eigenvalues(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Eigenvectors in descending-eigenvalue order, each phase-fixed so its first
/// non-negligible amplitude is real and positive.
inline std::vector<std::pair<double, KetVector>> eigensystem(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensystem: solver did not converge");
  std::vector<std::pair<double, KetVector>> out;
  for (Eigen::Index k = solver.eigenvalues().size() - 1; k >= 0; --k) {
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12) {
        v *= std::conj(v[i]) / std::abs(v[i]);
        break;
      }
    }
    out.emplace_back(solver.eigenvalues()[k], KetVector(v));
  }
  return out;
}

/// Tr_2[m (1 (x) w)] for a 4x4 operator m on C^2 (x) C^2: contracts the second
/// factor against w. With w = 1 this is the partial trace keeping the first factor.
inline HermitianOperator partial_contract_second(const HermitianOperator& m, const HermitianOperator& w) {
  if (m.dim() != 4 || w.dim() != 2) throw std::invalid_argument("partial contraction expects a 4x4 and a 2x2 operator");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(i, j) += m(2 * i + k, 2 * j + l) * w(l, k);
  return HermitianOperator(out);
}

/// Tr_1[m (w (x) 1)].
inline HermitianOperator partial_contract_first(const HermitianOperator& m, const HermitianOperator& w) {
  if (m.dim() != 4 || w.dim() != 2) throw std::invalid_argument("partial contraction expects a 4x4 and a 2x2 operator");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(i, j) += m(2 * k + i, 2 * l + j) * w(l, k);
  return HermitianOperator(out);
}

inline HermitianOperator partial_trace(const HermitianOperator& m, Subsystem keep) {
  if (m.dim() != 4) throw std::invalid_argument("partial_trace: expected a 4x4 bipartite qubit operator");
  const auto id = HermitianOperator::identity(2);
  return keep == Subsystem::First ? partial_contract_second(m, id) : partial_contract_first(m, id);
}

namespace kets {
inline KetVector zero() { return {1.0, 0.0}; }
inline KetVector one() { return {0.0, 1.0}; }
inline KetVector plus() { return KetVector{1.0, 1.0}.normalized(); }
inline KetVector minus() { return KetVector{1.0, -1.0}.normalized(); }
inline KetVector plus_i() { return KetVector{Complex(1.0), Complex(0.0, 1.0)}.normalized(); }
inline KetVector minus_i() { return KetVector{Complex(1.0), Complex(0.0, -1.0)}.normalized(); }
}  // namespace kets

namespace states {
/// |phi+><phi+| with |phi+> = (|00> + |11>)/sqrt2
inline HermitianOperator phi_plus() { return HermitianOperator::projector(KetVector{1.0, 0.0, 0.0, 1.0}.normalized()); }
/// |phi-><phi-| with |phi-> = (|00> - |11>)/sqrt2
inline HermitianOperator phi_minus() { return HermitianOperator::projector(KetVector{1.0, 0.0, 0.0, -1.0}.normalized()); }
/// Unit-trace, non-positive operator reproducing PR-box correlations.
inline HermitianOperator phi_pr() {
  return (0.5 * (1.0 + kSqrt2)) * phi_plus() + (0.5 * (1.0 - kSqrt2)) * phi_minus();
}
}  // namespace states

}  // namespace gptlab
