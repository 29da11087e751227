#include "autothermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "autothermo/errors.hpp"

namespace autothermo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI(0.0, 1.0);

const Model& model_of(const Trajectory& traj) {
  if (!traj.model) throw BadSpec("trajectory carries no model");
  if (traj.states.size() != traj.times.size() || traj.times.empty()) {
    throw BadSpec("trajectory times and states are misaligned");
  }
  return *traj.model;
}

std::string at(double t) {
  std::ostringstream os;
  os.precision(10);
  os << " at t = " << t;
  return os.str();
}

// Local ledger of subsystem j without the entropy-production terms.
SubsystemSeries core_series(const Trajectory& traj, std::size_t j) {
  const Model& m = model_of(traj);
  const Operator& h = m.local_hamiltonian(j);
  const EnergyBasis basis = EnergyBasis::of(h);
  SubsystemSeries s;
  const std::size_t n = traj.size();
  for (auto* v : {&s.u, &s.u_th, &s.s, &s.beta, &s.q, &s.w, &s.ergotropy, &s.exergy,
                  &s.nonunitary}) {
    v->resize(n);
  }
  s.thermal.resize(n);
  s.inverted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    LocalSnapshot snap;
    try {
      snap = local_snapshot(traj.states[i], j, basis, h);
    } catch (const Error& e) {
      throw InvariantViolation(std::string(e.what()) + at(traj.times[i]));
    }
    s.u[i] = snap.u;
    s.u_th[i] = snap.u_th;
    s.s[i] = snap.s;
    s.beta[i] = snap.thermal.beta;
    s.ergotropy[i] = snap.u - snap.u_passive;
    s.exergy[i] = snap.u - snap.u_th;
    s.nonunitary[i] = snap.u_passive - snap.u_th;
    s.thermal[i] = std::move(snap.thermal);
    s.inverted[i] = snap.inverted;
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.q[i] = i == 0 ? 0.0 : -(s.u_th[i] - s.u_th[0]);
    s.w[i] = i == 0 ? 0.0 : -(s.u[i] - s.u[0]) - s.q[i];
  }
  return s;
}

std::vector<double> joint_entropy(const Trajectory& traj) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) out[i] = von_neumann_entropy(traj.states[i]);
  return out;
}

std::vector<double> mutual_info(const std::vector<double>& sa, const std::vector<double>& sb,
                                const std::vector<double>& sab) {
  std::vector<double> out(sa.size());
  for (std::size_t i = 0; i < sa.size(); ++i) out[i] = sa[i] + sb[i] - sab[i];
  return out;
}

EntropyProduction sigma_from(const SubsystemSeries& own, const SubsystemSeries& partner,
                             const std::vector<double>& info) {
  const std::size_t n = own.s.size();
  EntropyProduction ep;
  ep.lhs.resize(n);
  ep.rhs.resize(n);
  const double beta0 = partner.beta[0];
  const auto& p0 = partner.thermal[0].populations;
  double scale = 1.0;
  for (double u : partner.u_th) scale = std::max(scale, std::abs(u));
  for (std::size_t i = 0; i < n; ++i) {
    const double ds = own.s[i] - own.s[0];
    const double q = partner.q[i];
    if (beta0 == kInfinity) {
      // U_th >= ground energy, so the partner's heat is never positive.
      ep.lhs[i] = q >= -1e-15 * scale ? ds : kInfinity;
    } else {
      ep.lhs[i] = ds - beta0 * q;
    }
    ep.rhs[i] = info[i] + relative_entropy_commuting(partner.thermal[i].populations, p0);
  }
  return ep;
}

std::vector<double> residual_from(std::span<const double> t, const SubsystemSeries& s) {
  const std::size_t n = t.size();
  std::vector<double> out(n, kNaN);
  if (n < 3) throw BadSpec("the residual needs at least three samples");
  const auto ds = derivative(t, s.s);
  const auto dq = derivative(t, s.q);
  auto usable = [&](std::size_t k) { return s.beta[k] != kInfinity && s.s[k] >= 1e-10; };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    bool ok = true;
    for (std::size_t k = lo; k < lo + 3; ++k) {
      ok = ok && usable(k) && s.inverted[k] == s.inverted[lo];
    }
    if (ok) out[i] = ds[i] + s.beta[i] * dq[i];
  }
  return out;
}

// Expectations of the interaction factors: a_k = Tr rho_A A_k, b_k = Tr rho_B B_k.
struct FactorSeries {
  std::vector<std::vector<cplx>> a, b;  // [k][sample]
};

FactorSeries factor_series(const Trajectory& traj) {
  const Model& m = model_of(traj);
  const auto& terms = m.interaction_terms();
  FactorSeries f;
  f.a.assign(terms.size(), std::vector<cplx>(traj.size()));
  f.b.assign(terms.size(), std::vector<cplx>(traj.size()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      f.a[k][i] = local_expectation(traj.states[i], 0, terms[k].on_a);
      f.b[k][i] = local_expectation(traj.states[i], 1, terms[k].on_b);
    }
  }
  return f;
}

void require_bipartite(const Trajectory& traj) {
  if (!model_of(traj).bipartite()) throw BadSpec("comparators need a bipartite trajectory");
}

std::vector<ComparatorSeries> standard_from(const Trajectory& traj, const FactorSeries& f,
                                            const std::vector<double>& u_a,
                                            const std::vector<double>& u_b) {
  const std::size_t n = traj.size();
  const std::size_t nk = f.a.size();
  std::vector<ComparatorSeries> out(2);
  for (std::size_t j = 0; j < 2; ++j) {
    // Own factor x_k and other factor y_k; H_eff = H_j + sum_k y_k X_k.
    const auto& x = j == 0 ? f.a : f.b;
    const auto& y = j == 0 ? f.b : f.a;
    const auto& u = j == 0 ? u_a : u_b;
    auto& c = out[j];
    c.w_st.assign(n, 0.0);
    c.q_st.assign(n, 0.0);
    c.u_st.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cplx coupling = 0.0;
      for (std::size_t k = 0; k < nk; ++k) coupling += x[k][i] * y[k][i];
      c.u_st[i] = u[i] + coupling.real();
      if (i == 0) continue;
      cplx dw = 0.0, dq = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        dw += 0.5 * (x[k][i] + x[k][i - 1]) * (y[k][i] - y[k][i - 1]);
        dq += (x[k][i] - x[k][i - 1]) * 0.5 * (y[k][i] + y[k][i - 1]);
      }
      c.w_st[i] = c.w_st[i - 1] + dw.real();
      c.q_st[i] = c.q_st[i - 1] + (u[i] - u[i - 1]) + dq.real();
    }
  }
  return out;
}

void mca_into(const Trajectory& traj, const FactorSeries& f, std::vector<ComparatorSeries>& out) {
  const Model& m = model_of(traj);
  const auto& terms = m.interaction_terms();
  const std::size_t n = traj.size();
  for (std::size_t j = 0; j < 2; ++j) {
    const Operator& h = m.local_hamiltonian(j);
    std::vector<Operator> c_ops;  // -i [H_j, X_k]
    for (const auto& t : terms) {
      c_ops.push_back((-kI) * commutator(h, j == 0 ? t.on_a : t.on_b));
    }
    const auto& y = j == 0 ? f.b : f.a;
    auto& c = out[j];
    c.w_mca_rate.assign(n, 0.0);
    c.q_mca_rate.assign(n, 0.0);
    c.u_rate_exact.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const QuantumState& st = traj.states[i];
      cplx w = 0.0, joint = 0.0;
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const cplx local = local_expectation(st, j, c_ops[k]);
        w += y[k][i] * local;
        joint += j == 0 ? product_expectation(st, c_ops[k], terms[k].on_b)
                        : product_expectation(st, terms[k].on_a, c_ops[k]);
      }
      c.w_mca_rate[i] = w.real();
      c.q_mca_rate[i] = (joint - w).real();
      c.u_rate_exact[i] = joint.real();
    }
  }
}

std::vector<double> interaction_from(const Trajectory& traj) {
  const Model& m = model_of(traj);
  std::vector<double> e(traj.size(), 0.0);
  if (!m.bipartite()) return e;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    cplx v = 0.0;
    for (const auto& t : m.interaction_terms()) {
      v += product_expectation(traj.states[i], t.on_a, t.on_b);
    }
    e[i] = v.real();
  }
  return e;
}

void fail(const std::string& what, double t) { throw InvariantViolation(what + at(t)); }

void check_ledger(const ThermoTable& table, const Trajectory& traj) {
  const Model& m = *traj.model;
  const auto& t = table.times;
  for (std::size_t j = 0; j < table.sub.size(); ++j) {
    const auto& s = table.sub[j];
    const std::string tag = " (subsystem " + m.spec().subsystems[j].label + ")";
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double scale = std::max(1.0, std::abs(s.u[i]));
      if (std::abs((s.u[i] - s.u[0]) + s.q[i] + s.w[i]) > ledger_tol::first_law * scale) {
        fail("first law does not close" + tag, t[i]);
      }
      if (std::abs(s.exergy[i] - s.ergotropy[i] - s.nonunitary[i]) >
          ledger_tol::exergy_split * scale) {
        fail("exergy split does not close" + tag, t[i]);
      }
      const double neg = ledger_tol::nonneg * scale;
      if (s.ergotropy[i] < -neg || s.exergy[i] < -neg || s.exergy[i] < s.ergotropy[i] - neg) {
        fail("exergy or ergotropy is negative" + tag, t[i]);
      }
      if (!table.bipartite() || !m.closed()) continue;
      const double lhs = s.sigma_lhs[i], rhs = s.sigma_rhs[i];
      if (lhs < -ledger_tol::second_law || rhs < -ledger_tol::second_law) {
        fail("entropy production is negative" + tag, t[i]);
      }
      if (std::isfinite(lhs) && std::isfinite(rhs) &&
          std::abs(lhs - rhs) > ledger_tol::sigma_forms) {
        fail("entropy production forms disagree" + tag, t[i]);
      }
    }
  }
  if (table.bipartite() && m.closed() && traj.kind != PropagationKind::mean_field) {
    const auto& a = table.sub[0].u;
    const auto& b = table.sub[1].u;
    const auto& e = table.interaction_energy;
    const double e0 = a[0] + b[0] + e[0];
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::abs(a[i] + b[i] + e[i] - e0) > 1e-9 * std::max(1.0, std::abs(e0))) {
        fail("total energy is not conserved", t[i]);
      }
    }
  }
}

}  // namespace

std::vector<double> derivative(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (y.size() != n) throw DimensionMismatch("derivative: length mismatch");
  if (n < 3) throw BadSpec("derivative needs at least three samples");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               (2 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

std::vector<double> heat_series(const Trajectory& traj, std::size_t j) {
  return core_series(traj, j).q;
}

std::vector<double> work_series(const Trajectory& traj, std::size_t j) {
  return core_series(traj, j).w;
}

std::vector<double> interaction_energy(const Trajectory& traj) { return interaction_from(traj); }

EntropyProduction entropy_production(const Trajectory& traj, std::size_t j) {
  require_bipartite(traj);
  if (j > 1) throw IndexError("subsystem index out of range");
  const SubsystemSeries a = core_series(traj, 0), b = core_series(traj, 1);
  const auto info = mutual_info(a.s, b.s, joint_entropy(traj));
  return j == 0 ? sigma_from(a, b, info) : sigma_from(b, a, info);
}

std::vector<double> entropy_heat_rate_residual(const Trajectory& traj, std::size_t j) {
  return residual_from(traj.times, core_series(traj, j));
}

std::vector<ComparatorSeries> standard_work_heat(const Trajectory& traj) {
  require_bipartite(traj);
  const Model& m = *traj.model;
  std::vector<double> ua(traj.size()), ub(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    ua[i] = local_expectation(traj.states[i], 0, m.local_hamiltonian(0)).real();
    ub[i] = local_expectation(traj.states[i], 1, m.local_hamiltonian(1)).real();
  }
  return standard_from(traj, factor_series(traj), ua, ub);
}

std::vector<ComparatorSeries> mca_rates(const Trajectory& traj) {
  require_bipartite(traj);
  std::vector<ComparatorSeries> out(2);
  mca_into(traj, factor_series(traj), out);
  return out;
}

ThermoTable analyze(const Trajectory& traj, const AnalyzeOptions& options) {
  const Model& m = model_of(traj);
  ThermoTable table;
  table.times = traj.times;
  for (std::size_t j = 0; j < m.subsystem_count(); ++j) table.sub.push_back(core_series(traj, j));

  const std::size_t n = traj.size();
  if (m.bipartite()) {
    table.mutual_information = mutual_info(table.sub[0].s, table.sub[1].s, joint_entropy(traj));
    table.interaction_energy = interaction_from(traj);
    for (std::size_t j = 0; j < 2; ++j) {
      auto ep = sigma_from(table.sub[j], table.sub[1 - j], table.mutual_information);
      table.sub[j].sigma_lhs = std::move(ep.lhs);
      table.sub[j].sigma_rhs = std::move(ep.rhs);
    }
    if (options.comparators) {
      const FactorSeries f = factor_series(traj);
      table.comparators = standard_from(traj, f, table.sub[0].u, table.sub[1].u);
      mca_into(traj, f, table.comparators);
    }
  } else {
    table.sub[0].sigma_lhs.assign(n, kNaN);
    table.sub[0].sigma_rhs.assign(n, kNaN);
  }
  if (n >= 3) {
    for (auto& s : table.sub) s.residual = residual_from(table.times, s);
  } else {
    for (auto& s : table.sub) s.residual.assign(n, kNaN);
  }

  std::ostringstream prov;
  prov << "propagation=" << propagation_name(traj.kind)
       << "; note: open-system work obeys dW_a/dt = dW_st/dt + F(t) with F = 0 in the "
          "semiclassical regime (F not evaluated)";
  table.provenance = prov.str();

  if (options.check_invariants) check_ledger(table, traj);
  return table;
}

}  // namespace autothermo
