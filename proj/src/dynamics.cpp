#include "autothermo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "autothermo/errors.hpp"
#include "autothermo/kernels.hpp"

namespace autothermo {
namespace {

constexpr double kStepTolerance = 1e-7;
constexpr double kTraceRenormalize = 1e-8;
const cplx kI(0.0, 1.0);

std::span<const cplx> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<cplx> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

std::size_t substeps(double interval, double dt) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(interval / dt - 1e-9)));
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

void check_step(double defect, double t, double h) {
  if (defect > kStepTolerance) {
    throw StepTooLarge("step-doubling error " + std::to_string(defect) + " at t = " +
                       std::to_string(t) + " with step " + std::to_string(h));
  }
}

// Renormalizes small trace drift, rejects large drift and negative spectra.
QuantumState checked_density(Matrix rho, const Dims& dims, double t, double& max_defect) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  const double defect = std::abs(tr - 1.0);
  max_defect = std::max(max_defect, defect);
  if (!(defect < kTraceRenormalize)) {
    throw NonPhysicalState("trace deviation " + std::to_string(defect) + " at t = " +
                           std::to_string(t));
  }
  rho /= tr;
  QuantumState s = QuantumState::trusted_density(std::move(rho), dims);
  try {
    (void)spectrum(s);
  } catch (const NonPhysicalState& e) {
    throw NonPhysicalState(std::string(e.what()) + " at t = " + std::to_string(t));
  }
  return s;
}

QuantumState checked_pure(Vector psi, const Dims& dims, double t, double& max_defect) {
  const double norm2 = psi.squaredNorm();
  const double defect = std::abs(norm2 - 1.0);
  max_defect = std::max(max_defect, defect);
  if (!(defect < kTraceRenormalize)) {
    throw NonPhysicalState("norm deviation " + std::to_string(defect) + " at t = " +
                           std::to_string(t));
  }
  psi /= std::sqrt(norm2);
  return QuantumState::pure(std::move(psi), dims);
}

}  // namespace

std::string_view propagation_name(PropagationKind kind) {
  switch (kind) {
    case PropagationKind::unitary_exact: return "unitary";
    case PropagationKind::jc_block: return "blocks";
    case PropagationKind::lindblad: return "lindblad";
    case PropagationKind::mean_field: return "mean-field";
  }
  return "?";
}

void check_time_grid(std::span<const double> times) {
  if (times.empty()) throw BadSpec("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw BadSpec("time grid has a non-finite entry");
    if (i > 0 && !(times[i] > times[i - 1])) throw BadSpec("time grid must be strictly increasing");
  }
}

std::vector<double> uniform_grid(double t_max, std::size_t intervals) {
  if (intervals == 0 || !(t_max > 0.0)) throw BadSpec("grid needs t_max > 0 and intervals > 0");
  std::vector<double> t(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(intervals);
  }
  t.back() = t_max;
  return t;
}

// ------------------------------------------------------------- unitary

Trajectory propagate_unitary(const Operator& h, const QuantumState& initial,
                             std::span<const double> times) {
  check_time_grid(times);
  if (h.dim() != initial.dim()) throw DimensionMismatch("Hamiltonian and state dims differ");
  const Eigensystem es = hermitian_eig(h);
  const std::size_t n = h.dim();
  const Matrix& u = es.vectors;
  const Dims dims = initial.subsystem_dims();

  Trajectory traj;
  traj.kind = PropagationKind::unitary_exact;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());

  if (initial.is_pure()) {
    const Vector c = u.adjoint() * initial.vector();
    for (double t : times) {
      if (t == 0.0) {
        traj.states.push_back(initial);
        continue;
      }
      Vector ph(n);
      for (std::size_t k = 0; k < n; ++k) ph(k) = std::polar(1.0, -es.values[k] * t) * c(k);
      Vector psi = u * ph;
      traj.states.push_back(checked_pure(std::move(psi), dims, t, traj.max_trace_defect));
    }
  } else {
    const Matrix r = u.adjoint() * initial.matrix() * u;
    for (double t : times) {
      if (t == 0.0) {
        traj.states.push_back(initial);
        continue;
      }
      Matrix rt(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          rt(i, j) = r(i, j) * std::polar(1.0, -(es.values[i] - es.values[j]) * t);
        }
      }
      Matrix rho = u * rt * u.adjoint();
      traj.states.push_back(checked_density(std::move(rho), dims, t, traj.max_trace_defect));
    }
  }
  return traj;
}

// ------------------------------------------------------- sector blocks

bool conserves_excitations(const Model& model) {
  if (!model.bipartite()) return model.local_hamiltonian(0).is_diagonal();
  for (std::size_t j = 0; j < 2; ++j) {
    if (!model.local_hamiltonian(j).is_diagonal()) return false;
  }
  // Each product term must shift A's level by +s and B's by -s.
  for (const auto& term : model.interaction_terms()) {
    std::optional<long> shift_a, shift_b;
    auto uniform = [](const Operator& op, std::optional<long>& shift) {
      for (std::size_t r = 0; r < op.dim(); ++r) {
        for (std::size_t c = 0; c < op.dim(); ++c) {
          if (op(r, c) == cplx(0.0)) continue;
          const long s = static_cast<long>(r) - static_cast<long>(c);
          if (shift && *shift != s) return false;
          shift = s;
        }
      }
      return true;
    };
    if (!uniform(term.on_a, shift_a) || !uniform(term.on_b, shift_b)) return false;
    if (shift_a && shift_b && *shift_a + *shift_b != 0) return false;
  }
  return true;
}

namespace {

struct Sector {
  std::vector<std::size_t> index;  // joint basis indices
  std::vector<double> energies;
  Matrix vectors;  // columns are eigenvectors in the sector basis
};

cplx joint_element(const Model& m, std::size_t i, std::size_t j) {
  const std::size_t db = m.dims()[1];
  const std::size_t a = i / db, b = i % db, ap = j / db, bp = j % db;
  cplx v = 0.0;
  if (b == bp) v += m.local_hamiltonian(0)(a, ap);
  if (a == ap) v += m.local_hamiltonian(1)(b, bp);
  for (const auto& t : m.interaction_terms()) v += t.on_a(a, ap) * t.on_b(b, bp);
  return v;
}

std::vector<Sector> build_sectors(const Model& m) {
  const std::size_t da = m.dims()[0], db = m.dims()[1];
  std::map<std::size_t, std::vector<std::size_t>> by_number;
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t b = 0; b < db; ++b) by_number[a + b].push_back(a * db + b);
  }
  std::vector<Sector> sectors;
  sectors.reserve(by_number.size());
  for (auto& [n, idx] : by_number) {
    const std::size_t k = idx.size();
    Matrix block(k, k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) block(r, c) = joint_element(m, idx[r], idx[c]);
    }
    const Eigensystem es = hermitian_eig(Operator(std::move(block)));
    sectors.push_back({std::move(idx), es.values, es.vectors});
  }
  return sectors;
}

}  // namespace

Trajectory propagate_jc_blocks(std::shared_ptr<const Model> model, const QuantumState& initial,
                               std::span<const double> times) {
  if (!model || !model->bipartite()) throw BadSpec("block propagation needs a bipartite model");
  if (!conserves_excitations(*model)) {
    throw BadSpec("block propagation needs an excitation-conserving Hamiltonian");
  }
  if (!initial.is_pure()) throw BadSpec("block propagation needs a pure initial state");
  if (initial.dim() != model->dim()) throw DimensionMismatch("state and model dims differ");
  check_time_grid(times);

  const std::vector<Sector> sectors = build_sectors(*model);
  const Vector& psi0 = initial.vector();
  std::vector<Vector> coeff(sectors.size());
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto& sec = sectors[s];
    Vector local(sec.index.size());
    for (std::size_t r = 0; r < sec.index.size(); ++r) local(r) = psi0(sec.index[r]);
    coeff[s] = sec.vectors.adjoint() * local;
  }

  Trajectory traj;
  traj.model = model;
  traj.kind = PropagationKind::jc_block;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  const Dims dims = model->dims();
  for (double t : times) {
    if (t == 0.0) {
      traj.states.push_back(initial);
      continue;
    }
    Vector psi = Vector::Zero(model->dim());
    for (std::size_t s = 0; s < sectors.size(); ++s) {
      const auto& sec = sectors[s];
      if (coeff[s].squaredNorm() == 0.0) continue;
      Vector ph(sec.index.size());
      for (std::size_t k = 0; k < sec.index.size(); ++k) {
        ph(k) = std::polar(1.0, -sec.energies[k] * t) * coeff[s](k);
      }
      const Vector local = sec.vectors * ph;
      for (std::size_t r = 0; r < sec.index.size(); ++r) psi(sec.index[r]) = local(r);
    }
    traj.states.push_back(checked_pure(std::move(psi), dims, t, traj.max_trace_defect));
  }
  return traj;
}

// ------------------------------------------------------------- Lindblad

namespace {

struct LindbladRhs {
  Matrix k;  // H - (i/2) sum gamma L^dagger L
  std::vector<Matrix> l;
  std::vector<double> rate;

  Matrix operator()(const Matrix& rho) const {
    Matrix out = -kI * (k * rho - rho * k.adjoint());
    for (std::size_t j = 0; j < l.size(); ++j) out += rate[j] * (l[j] * rho * l[j].adjoint());
    return out;
  }

  Matrix step(const Matrix& rho, double h) const {
    const Matrix k1 = (*this)(rho);
    const Matrix k2 = (*this)(rho + (0.5 * h) * k1);
    const Matrix k3 = (*this)(rho + (0.5 * h) * k2);
    const Matrix k4 = (*this)(rho + h * k3);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

}  // namespace

Trajectory propagate_lindblad(const Operator& h, std::span<const LindbladJump> jumps,
                              const QuantumState& initial, std::span<const double> times,
                              double dt) {
  check_time_grid(times);
  if (!(dt > 0.0)) throw BadSpec("dt must be positive");
  if (!h.is_hermitian()) throw NotHermitian("Lindblad Hamiltonian is not Hermitian");
  if (h.dim() != initial.dim()) throw DimensionMismatch("Hamiltonian and state dims differ");

  LindbladRhs rhs;
  rhs.k = h.matrix();
  for (const auto& j : jumps) {
    if (j.rate < 0.0) throw BadSpec("jump rate must be non-negative");
    if (j.op.dim() != h.dim()) throw DimensionMismatch("jump operator dim differs");
    if (j.rate == 0.0) continue;
    rhs.l.push_back(j.op.matrix());
    rhs.rate.push_back(j.rate);
    rhs.k -= (0.5 * j.rate) * kI * (j.op.matrix().adjoint() * j.op.matrix());
  }

  Trajectory traj;
  traj.kind = PropagationKind::lindblad;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  const Dims dims = initial.subsystem_dims();

  Matrix rho = initial.density_matrix();
  traj.states.push_back(times[0] == 0.0 ? initial : initial.as_density());
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double interval = times[i] - times[i - 1];
    const std::size_t steps = substeps(interval, dt);
    const double step = interval / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      Matrix next = rhs.step(rho, step);
      if (s == 0) {
        const Matrix half = rhs.step(rhs.step(rho, 0.5 * step), 0.5 * step);
        check_step(max_abs_diff(next, half), times[i - 1], step);
      }
      rho = std::move(next);
    }
    QuantumState st = checked_density(rho, dims, times[i], traj.max_trace_defect);
    rho = st.matrix();
    traj.states.push_back(std::move(st));
  }
  return traj;
}

// ---------------------------------------------------------- mean field

namespace {

// Local operator in the interaction picture of a diagonal H:
// X(t)_{mn} = X_{mn} exp(i (E_m - E_n) t).
struct RotatingOp {
  Operator op;
  std::vector<double> energies;

  // y = X(t) x via X (e^{-iEt} x) then e^{+iEt}.
  void apply(double t, const Vector& x, Vector& y) const {
    const std::size_t n = energies.size();
    Vector tmp(n);
    for (std::size_t k = 0; k < n; ++k) tmp(k) = std::polar(1.0, -energies[k] * t) * x(k);
    y.resize(n);
    op.apply(view(tmp), view(y));
    for (std::size_t k = 0; k < n; ++k) y(k) *= std::polar(1.0, energies[k] * t);
  }

  Matrix dense(double t) const {
    const std::size_t n = energies.size();
    Matrix m = op.matrix();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (m(r, c) != cplx(0.0)) m(r, c) *= std::polar(1.0, (energies[r] - energies[c]) * t);
      }
    }
    return m;
  }
};

std::vector<double> diagonal_energies(const Operator& h) {
  if (!h.is_diagonal()) {
    throw BadSpec("mean-field propagation needs diagonal local Hamiltonians");
  }
  std::vector<double> e(h.dim());
  for (std::size_t k = 0; k < h.dim(); ++k) e[k] = h(k, k).real();
  return e;
}

// Free evolution back from the interaction picture.
Vector to_lab(const Vector& x, const std::vector<double>& e, double t) {
  Vector y(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) y(k) = std::polar(1.0, -e[k] * t) * x(k);
  return y;
}

Matrix to_lab(const Matrix& x, const std::vector<double>& e, double t) {
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      y(r, c) = std::polar(1.0, -(e[r] - e[c]) * t) * x(r, c);
    }
  }
  return y;
}

struct MeanFieldSystem {
  std::vector<RotatingOp> a_ops, b_ops;  // interaction factors
  std::vector<double> ea, eb;

  // Pure pair: psi_j' = -i sum_k <other_k> X_k(t) psi_j.
  std::pair<Vector, Vector> rhs(double t, const Vector& pa, const Vector& pb) const {
    const std::size_t nk = a_ops.size();
    std::vector<Vector> ax(nk), bx(nk);
    std::vector<cplx> ea_k(nk), eb_k(nk);
    for (std::size_t k = 0; k < nk; ++k) {
      a_ops[k].apply(t, pa, ax[k]);
      b_ops[k].apply(t, pb, bx[k]);
      ea_k[k] = kernels::dotc(view(pa), view(ax[k]));
      eb_k[k] = kernels::dotc(view(pb), view(bx[k]));
    }
    Vector da = Vector::Zero(pa.size()), db = Vector::Zero(pb.size());
    for (std::size_t k = 0; k < nk; ++k) {
      kernels::axpy(-kI * eb_k[k], view(ax[k]), view(da));
      kernels::axpy(-kI * ea_k[k], view(bx[k]), view(db));
    }
    return {std::move(da), std::move(db)};
  }

  std::pair<Matrix, Matrix> rhs(double t, const Matrix& ra, const Matrix& rb) const {
    const std::size_t nk = a_ops.size();
    Matrix ha = Matrix::Zero(ra.rows(), ra.cols()), hb = Matrix::Zero(rb.rows(), rb.cols());
    for (std::size_t k = 0; k < nk; ++k) {
      const Matrix ak = a_ops[k].dense(t), bk = b_ops[k].dense(t);
      const cplx a_exp = trace_product(ra, ak), b_exp = trace_product(rb, bk);
      ha += b_exp * ak;
      hb += a_exp * bk;
    }
    return {-kI * (ha * ra - ra * ha), -kI * (hb * rb - rb * hb)};
  }

  template <class S>
  std::pair<S, S> step(double t, const S& a, const S& b, double h) const {
    const auto [k1a, k1b] = rhs(t, a, b);
    const auto [k2a, k2b] = rhs(t + 0.5 * h, S(a + (0.5 * h) * k1a), S(b + (0.5 * h) * k1b));
    const auto [k3a, k3b] = rhs(t + 0.5 * h, S(a + (0.5 * h) * k2a), S(b + (0.5 * h) * k2b));
    const auto [k4a, k4b] = rhs(t + h, S(a + h * k3a), S(b + h * k3b));
    return {S(a + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)),
            S(b + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b))};
  }
};

template <class S>
double pair_defect(const std::pair<S, S>& x, const std::pair<S, S>& y) {
  return std::max((x.first - y.first).cwiseAbs().maxCoeff(),
                  (x.second - y.second).cwiseAbs().maxCoeff());
}

}  // namespace

MeanFieldTrajectories propagate_mean_field(std::shared_ptr<const Model> model,
                                           const QuantumState& rho_a0, const QuantumState& rho_b0,
                                           std::span<const double> times, double dt) {
  if (!model || !model->bipartite()) throw BadSpec("mean-field propagation needs a bipartite model");
  if (!model->closed()) throw BadSpec("mean-field propagation needs a closed model");
  if (rho_a0.dim() != model->dims()[0] || rho_b0.dim() != model->dims()[1]) {
    throw DimensionMismatch("local states do not match the model");
  }
  if (!(dt > 0.0)) throw BadSpec("dt must be positive");
  check_time_grid(times);

  MeanFieldSystem sys;
  sys.ea = diagonal_energies(model->local_hamiltonian(0));
  sys.eb = diagonal_energies(model->local_hamiltonian(1));
  for (const auto& term : model->interaction_terms()) {
    sys.a_ops.push_back({term.on_a, sys.ea});
    sys.b_ops.push_back({term.on_b, sys.eb});
  }

  MeanFieldTrajectories out;
  for (Trajectory* tr : {&out.a, &out.b, &out.product}) {
    tr->kind = PropagationKind::mean_field;
    tr->times.assign(times.begin(), times.end());
  }
  out.product.model = model;

  auto record = [&](double t, const QuantumState& a, const QuantumState& b) {
    out.a.states.push_back(a);
    out.b.states.push_back(b);
    out.product.states.push_back(kron(a, b));
    (void)t;
  };

  const bool pure = rho_a0.is_pure() && rho_b0.is_pure();
  auto integrate = [&](auto a, auto b, auto to_state) {
    using S = decltype(a);
    record(times[0], to_state(a, sys.ea, times[0], out.a), to_state(b, sys.eb, times[0], out.b));
    double t = times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double interval = times[i] - times[i - 1];
      const std::size_t steps = substeps(interval, dt);
      const double h = interval / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        t = times[i - 1] + static_cast<double>(s) * h;
        auto next = sys.step<S>(t, a, b, h);
        if (s == 0) {
          const auto mid = sys.step<S>(t, a, b, 0.5 * h);
          const auto twice = sys.step<S>(t + 0.5 * h, mid.first, mid.second, 0.5 * h);
          check_step(pair_defect(next, twice), t, h);
        }
        a = std::move(next.first);
        b = std::move(next.second);
      }
      record(times[i], to_state(a, sys.ea, times[i], out.a), to_state(b, sys.eb, times[i], out.b));
    }
  };

  // Interaction-picture states start equal to the lab states at t = 0.
  const double t0 = times[0];
  if (pure) {
    integrate(Vector(to_lab(rho_a0.vector(), sys.ea, -t0)), Vector(to_lab(rho_b0.vector(), sys.eb, -t0)),
              [](const Vector& x, const std::vector<double>& e, double t, Trajectory& tr) {
                return checked_pure(to_lab(x, e, t), {}, t, tr.max_trace_defect);
              });
  } else {
    integrate(Matrix(to_lab(rho_a0.density_matrix(), sys.ea, -t0)),
              Matrix(to_lab(rho_b0.density_matrix(), sys.eb, -t0)),
              [](const Matrix& x, const std::vector<double>& e, double t, Trajectory& tr) {
                return checked_density(to_lab(x, e, t), {}, t, tr.max_trace_defect);
              });
  }
  out.product.max_trace_defect = std::max(out.a.max_trace_defect, out.b.max_trace_defect);
  return out;
}

// ------------------------------------------------------------ dispatch

Trajectory propagate(std::shared_ptr<const Model> model, const QuantumState& initial,
                     std::span<const double> times, double dt) {
  if (!model) throw BadSpec("no model");
  Trajectory traj;
  if (!model->closed()) {
    std::vector<LindbladJump> jumps;
    for (auto& [op, rate] : model->joint_jumps()) jumps.push_back({op, rate});
    traj = propagate_lindblad(model->total_hamiltonian(), jumps, initial, times, dt);
  } else if (model->bipartite() && initial.is_pure() && conserves_excitations(*model)) {
    traj = propagate_jc_blocks(model, initial, times);
  } else {
    traj = propagate_unitary(model->total_hamiltonian(), initial, times);
  }
  traj.model = model;
  return traj;
}

}  // namespace autothermo
