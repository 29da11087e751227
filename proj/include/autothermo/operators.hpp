#pragma once

// Dense complex operator algebra over composite Hilbert spaces.
//
// Basis ordering is row-major over the subsystem factors: for dims
// (d_0, d_1, ...), index = ((i_0 * d_1) + i_1) * d_2 + ... . Qubits use
// index 0 = |g>, index 1 = |e>; oscillators use index n = |n>.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace autothermo {

using cplx = std::complex<double>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using Dims = std::vector<std::size_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tolerances shared by every module.
namespace tol {
inline constexpr double hermitian = 1e-10;        // relative to max |element|
inline constexpr double pure_norm = 1e-12;
inline constexpr double trace = 1e-10;
inline constexpr double negative_eigenvalue = 1e-10;  // clipped below this magnitude
inline constexpr double entropy_cutoff = 1e-14;       // 0 ln 0 := 0 below this
inline constexpr double support_sigma = 1e-12;
inline constexpr double support_rho = 1e-10;
}  // namespace tol

class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix elements, Dims subsystem_dims = {});

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim);
  static Operator diagonal(std::span<const double> entries);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  cplx operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

  /// Subsystem factor dims; empty for an atomic system.
  const Dims& subsystem_dims() const { return dims_; }
  /// subsystem_dims(), or {dim()} for an atomic system.
  Dims factor_dims() const;

  double max_abs() const;
  double hermiticity_defect() const;  // ||M - M^dagger||_max
  bool is_hermitian(double tolerance = tol::hermitian) const;
  bool is_diagonal() const;

  Operator adjoint() const;
  Operator with_dims(Dims subsystem_dims) const;

  /// y = M x, visiting only each row's nonzero column extent.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Vector apply(const Vector& x) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(cplx scale, Operator op) { return op *= scale; }
  friend Operator operator*(Operator op, cplx scale) { return op *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  void index_rows();

  Matrix m_;
  Dims dims_;
  std::vector<std::uint32_t> row_first_;
  std::vector<std::uint32_t> row_last_;
};

Operator commutator(const Operator& a, const Operator& b);

/// Either a normalized state vector or a density matrix.
class QuantumState {
 public:
  enum class Kind { pure_vector, density_matrix };

  QuantumState() = default;

  /// Throws InvalidState unless ||psi|| = 1 within tol::pure_norm.
  static QuantumState pure(Vector psi, Dims subsystem_dims = {});
  /// Throws InvalidState unless Hermitian, unit trace and positive within tolerance.
  static QuantumState density(Matrix rho, Dims subsystem_dims = {});
  /// For matrices that are valid by construction (partial traces, Gibbs states).
  /// Only dimensions are checked.
  static QuantumState trusted_density(Matrix rho, Dims subsystem_dims = {});

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::pure_vector; }
  std::size_t dim() const;
  const Dims& subsystem_dims() const { return dims_; }
  Dims factor_dims() const;

  const Vector& vector() const;  // pure states only
  const Matrix& matrix() const;  // density matrices only
  Matrix density_matrix() const;
  QuantumState as_density() const;

  double trace() const;
  double purity() const;
  /// Tr[rho X].
  cplx expectation(const Operator& x) const;

 private:
  Kind kind_ = Kind::pure_vector;
  Vector psi_;
  Matrix rho_;
  Dims dims_;
};

Operator kron(const Operator& a, const Operator& b);
QuantumState kron(const QuantumState& a, const QuantumState& b);

/// Reduced density matrix of subsystem `keep`. Throws IndexError.
QuantumState partial_trace(const QuantumState& state, std::size_t keep);

struct Eigensystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

/// Throws NotHermitian. Exactly diagonal input skips the dense solver.
Eigensystem hermitian_eig(const Operator& m);

/// Applies the clipping policy: values in [-1e-10, 0) become 0, anything more
/// negative throws NonPhysicalState.
std::vector<double> clip_spectrum(std::vector<double> p);

/// Eigenvalues of the state, clipped and ascending.
std::vector<double> spectrum(const QuantumState& state);

/// Spectrum of the reduced state of `keep` (ascending, length d_keep). Pure
/// joint states use the singular values of the amplitude matrix.
std::vector<double> reduced_spectrum(const QuantumState& state, std::size_t keep);

double entropy_of_spectrum(std::span<const double> p);
double von_neumann_entropy(const QuantumState& state);

/// D[rho || sigma] in nats; kInfinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const QuantumState& rho, const QuantumState& sigma);
/// Relative entropy of two states diagonal in the same basis.
double relative_entropy_commuting(std::span<const double> p, std::span<const double> q);

/// I = S_A + S_B - S_AB for a two-factor state.
double mutual_information(const QuantumState& rho_ab);

/// Tr[rho_j X] for subsystem j without forming rho_j when the state is pure.
cplx local_expectation(const QuantumState& state, std::size_t j, const Operator& x);
/// Tr[rho (X (x) Y)] for a two-factor state.
cplx product_expectation(const QuantumState& state, const Operator& x_a, const Operator& y_b);

/// Tr[A B].
cplx trace_product(const Matrix& a, const Matrix& b);

}  // namespace autothermo
