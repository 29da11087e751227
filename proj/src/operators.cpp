#include "autothermo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "autothermo/errors.hpp"
#include "autothermo/kernels.hpp"

namespace autothermo {
namespace {

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(std::size_t dim, const Dims& dims) {
  if (!dims.empty() && product(dims) != dim) {
    throw DimensionMismatch("subsystem dims product " + std::to_string(product(dims)) +
                            " != dimension " + std::to_string(dim));
  }
  for (auto d : dims) {
    if (d == 0) throw DimensionMismatch("subsystem dimension must be positive");
  }
}

std::span<const cplx> view(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<const cplx> view(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<cplx> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Splits a composite index space around factor `keep` into
// (left, kept, right) extents.
struct Split {
  std::size_t left, kept, right;
};

Split split(const Dims& dims, std::size_t keep) {
  if (dims.size() < 2) throw IndexError("partial trace needs at least two subsystems");
  if (keep >= dims.size()) {
    throw IndexError("subsystem index " + std::to_string(keep) + " out of range");
  }
  Split s{1, dims[keep], 1};
  for (std::size_t i = 0; i < keep; ++i) s.left *= dims[i];
  for (std::size_t i = keep + 1; i < dims.size(); ++i) s.right *= dims[i];
  return s;
}

Dims concat_factors(const Dims& a, std::size_t da, const Dims& b, std::size_t db) {
  Dims out = a.empty() ? Dims{da} : a;
  if (b.empty()) {
    out.push_back(db);
  } else {
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Operator

Operator::Operator(Matrix elements, Dims subsystem_dims)
    : m_(std::move(elements)), dims_(std::move(subsystem_dims)) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("operator matrix must be square");
  check_dims(dim(), dims_);
  index_rows();
}

void Operator::index_rows() {
  const std::size_t n = dim();
  row_first_.assign(n, 1);
  row_last_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (m_(r, c) != cplx(0.0)) {
        row_first_[r] = static_cast<std::uint32_t>(c);
        break;
      }
    }
    for (std::size_t c = n; c-- > 0;) {
      if (m_(r, c) != cplx(0.0)) {
        row_last_[r] = static_cast<std::uint32_t>(c);
        break;
      }
    }
  }
}

Operator Operator::identity(std::size_t dim) { return Operator(Matrix::Identity(dim, dim)); }
Operator Operator::zero(std::size_t dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator Operator::diagonal(std::span<const double> entries) {
  Matrix m = Matrix::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return Operator(std::move(m));
}

Dims Operator::factor_dims() const { return dims_.empty() ? Dims{dim()} : dims_; }

double Operator::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

double Operator::hermiticity_defect() const {
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tolerance) const {
  return hermiticity_defect() <= tolerance * std::max(1.0, max_abs());
}

bool Operator::is_diagonal() const {
  for (std::size_t r = 0; r < dim(); ++r) {
    if (row_first_[r] <= row_last_[r] && (row_first_[r] != r || row_last_[r] != r)) return false;
  }
  return true;
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), dims_); }

Operator Operator::with_dims(Dims subsystem_dims) const {
  return Operator(m_, std::move(subsystem_dims));
}

void Operator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw DimensionMismatch("operator apply: vector length mismatch");
  }
  kernels::gemv_banded(dim(), dim(), view(m_), {row_first_, row_last_}, x, y);
}

Vector Operator::apply(const Vector& x) const {
  Vector y(x.size());
  apply(view(x), view(y));
  return y;
}

Operator& Operator::operator+=(const Operator& rhs) {
  if (rhs.dim() != dim()) throw DimensionMismatch("operator sum: dimension mismatch");
  m_ += rhs.m_;
  if (dims_.empty()) dims_ = rhs.dims_;
  index_rows();
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  if (rhs.dim() != dim()) throw DimensionMismatch("operator difference: dimension mismatch");
  m_ -= rhs.m_;
  if (dims_.empty()) dims_ = rhs.dims_;
  index_rows();
  return *this;
}

Operator& Operator::operator*=(cplx scale) {
  m_ *= scale;
  index_rows();
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("operator product: dimension mismatch");
  Matrix prod;
  if (lhs.is_diagonal()) {
    prod = lhs.m_.diagonal().asDiagonal() * rhs.m_;
  } else if (rhs.is_diagonal()) {
    prod = lhs.m_ * rhs.m_.diagonal().asDiagonal();
  } else {
    prod = lhs.m_ * rhs.m_;
  }
  return Operator(std::move(prod), lhs.dims_.empty() ? rhs.dims_ : lhs.dims_);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator kron(const Operator& a, const Operator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  Matrix m(da * db, da * db);
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = am(i, j) * bm;
    }
  }
  return Operator(std::move(m), concat_factors(a.subsystem_dims(), da, b.subsystem_dims(), db));
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw DimensionMismatch("trace_product: shape mismatch");
  }
  // Tr[AB] = sum_ij A_ij B_ji = dotu(A, B^T) over row-major storage.
  const Matrix bt = b.transpose();
  return kernels::dotu(view(a), view(bt));
}

// ------------------------------------------------------------ QuantumState

QuantumState QuantumState::pure(Vector psi, Dims subsystem_dims) {
  check_dims(static_cast<std::size_t>(psi.size()), subsystem_dims);
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol::pure_norm) {
    throw InvalidState("state vector norm " + std::to_string(norm) + " is not 1");
  }
  QuantumState s;
  s.kind_ = Kind::pure_vector;
  s.psi_ = std::move(psi);
  s.dims_ = std::move(subsystem_dims);
  return s;
}

QuantumState QuantumState::density(Matrix rho, Dims subsystem_dims) {
  if (rho.rows() != rho.cols()) throw DimensionMismatch("density matrix must be square");
  check_dims(static_cast<std::size_t>(rho.rows()), subsystem_dims);
  const Operator as_op(rho);
  if (!as_op.is_hermitian(tol::hermitian)) {
    throw InvalidState("density matrix is not Hermitian (defect " +
                       std::to_string(as_op.hermiticity_defect()) + ")");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::trace) {
    throw InvalidState("density matrix trace " + std::to_string(tr) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().size() > 0 && solver.eigenvalues()(0) < -tol::negative_eigenvalue) {
    throw InvalidState("density matrix has eigenvalue " +
                       std::to_string(solver.eigenvalues()(0)));
  }
  return trusted_density(std::move(rho), std::move(subsystem_dims));
}

QuantumState QuantumState::trusted_density(Matrix rho, Dims subsystem_dims) {
  if (rho.rows() != rho.cols()) throw DimensionMismatch("density matrix must be square");
  check_dims(static_cast<std::size_t>(rho.rows()), subsystem_dims);
  QuantumState s;
  s.kind_ = Kind::density_matrix;
  s.rho_ = std::move(rho);
  s.dims_ = std::move(subsystem_dims);
  return s;
}

std::size_t QuantumState::dim() const {
  return static_cast<std::size_t>(is_pure() ? psi_.size() : rho_.rows());
}

Dims QuantumState::factor_dims() const { return dims_.empty() ? Dims{dim()} : dims_; }

const Vector& QuantumState::vector() const {
  if (!is_pure()) throw InvalidState("state is a density matrix, not a vector");
  return psi_;
}

const Matrix& QuantumState::matrix() const {
  if (is_pure()) throw InvalidState("state is a pure vector, not a density matrix");
  return rho_;
}

Matrix QuantumState::density_matrix() const {
  if (is_pure()) return psi_ * psi_.adjoint();
  return rho_;
}

QuantumState QuantumState::as_density() const {
  return trusted_density(density_matrix(), dims_);
}

double QuantumState::trace() const {
  return is_pure() ? psi_.squaredNorm() : rho_.trace().real();
}

double QuantumState::purity() const {
  if (is_pure()) return std::pow(psi_.squaredNorm(), 2);
  return trace_product(rho_, rho_).real();
}

cplx QuantumState::expectation(const Operator& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("expectation: dimension mismatch");
  if (is_pure()) {
    const Vector y = x.apply(psi_);
    return kernels::dotc(view(psi_), view(y));
  }
  return trace_product(rho_, x.matrix());
}

QuantumState kron(const QuantumState& a, const QuantumState& b) {
  Dims dims = concat_factors(a.subsystem_dims(), a.dim(), b.subsystem_dims(), b.dim());
  if (a.is_pure() && b.is_pure()) {
    const Vector& va = a.vector();
    const Vector& vb = b.vector();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
    QuantumState s = QuantumState::pure(Vector(out / out.norm()), std::move(dims));
    return s;
  }
  const Operator prod = kron(Operator(a.density_matrix()), Operator(b.density_matrix()));
  return QuantumState::trusted_density(prod.matrix(), std::move(dims));
}

QuantumState partial_trace(const QuantumState& state, std::size_t keep) {
  const Dims dims = state.factor_dims();
  const Split s = split(dims, keep);
  Matrix red = Matrix::Zero(s.kept, s.kept);
  if (state.is_pure()) {
    const Vector& psi = state.vector();
    if (s.right == 1) {
      // rows of the (left x kept) amplitude matrix are contiguous
      Eigen::Map<const Matrix> amp(psi.data(), s.left, s.kept);
      red = amp.transpose() * amp.conjugate();
    } else {
      for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t k = 0; k < s.kept; ++k) {
          const std::span<const cplx> row_k(psi.data() + (l * s.kept + k) * s.right, s.right);
          for (std::size_t kp = 0; kp <= k; ++kp) {
            const std::span<const cplx> row_kp(psi.data() + (l * s.kept + kp) * s.right, s.right);
            red(k, kp) += kernels::dotc(row_kp, row_k);
          }
        }
      }
      for (std::size_t k = 0; k < s.kept; ++k) {
        for (std::size_t kp = 0; kp < k; ++kp) red(kp, k) = std::conj(red(k, kp));
      }
    }
  } else {
    const Matrix& rho = state.matrix();
    for (std::size_t l = 0; l < s.left; ++l) {
      for (std::size_t r = 0; r < s.right; ++r) {
        for (std::size_t k = 0; k < s.kept; ++k) {
          const std::size_t row = (l * s.kept + k) * s.right + r;
          for (std::size_t kp = 0; kp < s.kept; ++kp) {
            red(k, kp) += rho(row, (l * s.kept + kp) * s.right + r);
          }
        }
      }
    }
    red = 0.5 * (red + red.adjoint()).eval();
  }
  return QuantumState::trusted_density(std::move(red));
}

// ------------------------------------------------------------- spectra

Eigensystem hermitian_eig(const Operator& m) {
  if (!m.is_hermitian()) {
    throw NotHermitian("operator is not Hermitian (defect " +
                       std::to_string(m.hermiticity_defect()) + ")");
  }
  const std::size_t n = m.dim();
  Eigensystem out;
  if (m.is_diagonal()) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return m(a, a).real() < m(b, b).real();
    });
    out.values.resize(n);
    out.vectors = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      out.values[k] = m(order[k], order[k]).real();
      out.vectors(order[k], k) = 1.0;
    }
    return out;
  }
  const Matrix sym = 0.5 * (m.matrix() + m.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NotHermitian("eigensolver did not converge");
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.vectors = solver.eigenvectors();
  return out;
}

std::vector<double> clip_spectrum(std::vector<double> p) {
  for (double& v : p) {
    if (v < -tol::negative_eigenvalue) {
      throw NonPhysicalState("negative eigenvalue " + std::to_string(v) + " in state");
    }
    if (v < 0.0) v = 0.0;
  }
  return p;
}

std::vector<double> spectrum(const QuantumState& state) {
  const std::size_t n = state.dim();
  std::vector<double> p(n, 0.0);
  if (state.is_pure()) {
    p.back() = state.vector().squaredNorm();
    return p;
  }
  const Matrix sym = 0.5 * (state.matrix() + state.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  for (std::size_t i = 0; i < n; ++i) p[i] = solver.eigenvalues()(i);
  return clip_spectrum(std::move(p));
}

std::vector<double> reduced_spectrum(const QuantumState& state, std::size_t keep) {
  const Dims dims = state.factor_dims();
  const Split s = split(dims, keep);
  if (!state.is_pure()) return spectrum(partial_trace(state, keep));

  // Amplitude matrix: kept index against everything else.
  const Vector& psi = state.vector();
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> amp(s.kept, s.left * s.right);
  for (std::size_t l = 0; l < s.left; ++l) {
    for (std::size_t k = 0; k < s.kept; ++k) {
      for (std::size_t r = 0; r < s.right; ++r) {
        amp(k, l * s.right + r) = psi((l * s.kept + k) * s.right + r);
      }
    }
  }
  Eigen::BDCSVD<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>> svd(amp);
  const auto& sv = svd.singularValues();
  std::vector<double> p(s.kept, 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) p[i] = sv(i) * sv(i);
  std::sort(p.begin(), p.end());
  return p;
}

double entropy_of_spectrum(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v < -tol::negative_eigenvalue) {
      throw NonPhysicalState("negative eigenvalue " + std::to_string(v) + " in entropy");
    }
    if (v > tol::entropy_cutoff) s -= v * std::log(v);
  }
  const double smax = std::log(static_cast<double>(std::max<std::size_t>(p.size(), 1)));
  return std::clamp(s, 0.0, smax);
}

double von_neumann_entropy(const QuantumState& state) {
  if (state.is_pure()) return 0.0;
  const auto p = spectrum(state);
  return entropy_of_spectrum(p);
}

double relative_entropy_commuting(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionMismatch("relative entropy: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] < tol::support_sigma) {
      if (p[i] > tol::support_rho) return kInfinity;
      continue;
    }
    if (p[i] > tol::entropy_cutoff) d += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return std::max(d, 0.0);
}

double relative_entropy(const QuantumState& rho, const QuantumState& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("relative entropy: dimension mismatch");
  const Matrix r = rho.density_matrix();
  const Matrix s = sigma.density_matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> er(0.5 * (r + r.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
  const std::size_t n = rho.dim();
  std::vector<double> p(er.eigenvalues().data(), er.eigenvalues().data() + n);
  std::vector<double> q(es.eigenvalues().data(), es.eigenvalues().data() + n);
  p = clip_spectrum(std::move(p));
  q = clip_spectrum(std::move(q));

  // overlap(i, j) = |<u_i|v_j>|^2
  const Matrix ov = er.eigenvectors().adjoint() * es.eigenvectors();
  double d = -entropy_of_spectrum(p);
  for (std::size_t j = 0; j < n; ++j) {
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) weight += p[i] * std::norm(ov(i, j));
    if (q[j] < tol::support_sigma) {
      if (weight > tol::support_rho) return kInfinity;
      continue;
    }
    d -= weight * std::log(q[j]);
  }
  return std::max(d, 0.0);
}

double mutual_information(const QuantumState& rho_ab) {
  const Dims dims = rho_ab.factor_dims();
  if (dims.size() != 2) throw DimensionMismatch("mutual information needs a bipartite state");
  if (rho_ab.is_pure()) {
    // Schmidt symmetry: S_A = S_B and S_AB = 0.
    const auto small = dims[0] <= dims[1] ? 0u : 1u;
    return 2.0 * entropy_of_spectrum(reduced_spectrum(rho_ab, small));
  }
  const double sa = entropy_of_spectrum(reduced_spectrum(rho_ab, 0));
  const double sb = entropy_of_spectrum(reduced_spectrum(rho_ab, 1));
  return sa + sb - von_neumann_entropy(rho_ab);
}

cplx local_expectation(const QuantumState& state, std::size_t j, const Operator& x) {
  const Dims dims = state.factor_dims();
  if (dims.size() == 1) {
    if (j != 0) throw IndexError("subsystem index out of range");
    return state.expectation(x);
  }
  const Split s = split(dims, j);
  if (x.dim() != s.kept) throw DimensionMismatch("local operator dimension mismatch");
  if (!state.is_pure()) return partial_trace(state, j).expectation(x);

  const Vector& psi = state.vector();
  cplx total = 0.0;
  if (s.right == 1) {
    std::vector<cplx> y(s.kept);
    for (std::size_t l = 0; l < s.left; ++l) {
      const std::span<const cplx> seg(psi.data() + l * s.kept, s.kept);
      x.apply(seg, y);
      total += kernels::dotc(seg, y);
    }
    return total;
  }
  for (std::size_t k = 0; k < s.kept; ++k) {
    for (std::size_t kp = 0; kp < s.kept; ++kp) {
      const cplx xk = x(k, kp);
      if (xk == cplx(0.0)) continue;
      cplx acc = 0.0;
      for (std::size_t l = 0; l < s.left; ++l) {
        const std::span<const cplx> a(psi.data() + (l * s.kept + k) * s.right, s.right);
        const std::span<const cplx> b(psi.data() + (l * s.kept + kp) * s.right, s.right);
        acc += kernels::dotc(a, b);
      }
      total += xk * acc;
    }
  }
  return total;
}

cplx product_expectation(const QuantumState& state, const Operator& x_a, const Operator& y_b) {
  const Dims dims = state.factor_dims();
  if (dims.size() != 2) throw DimensionMismatch("product expectation needs a bipartite state");
  if (x_a.dim() != dims[0] || y_b.dim() != dims[1]) {
    throw DimensionMismatch("product expectation: factor dimension mismatch");
  }
  if (!state.is_pure()) return trace_product(state.matrix(), kron(x_a, y_b).matrix());

  // <psi| X (x) Y |psi> = sum_{a,a'} X[a,a'] <m_a| Y |m_a'>, m_a = row a of the amplitudes.
  const Vector& psi = state.vector();
  const std::size_t da = dims[0], db = dims[1];
  std::vector<Vector> y_rows(da);
  for (std::size_t ap = 0; ap < da; ++ap) {
    y_rows[ap].resize(db);
    y_b.apply(std::span<const cplx>(psi.data() + ap * db, db), view(y_rows[ap]));
  }
  cplx total = 0.0;
  for (std::size_t a = 0; a < da; ++a) {
    const std::span<const cplx> row(psi.data() + a * db, db);
    for (std::size_t ap = 0; ap < da; ++ap) {
      const cplx xa = x_a(a, ap);
      if (xa == cplx(0.0)) continue;
      total += xa * kernels::dotc(row, view(y_rows[ap]));
    }
  }
  return total;
}

}  // namespace autothermo
