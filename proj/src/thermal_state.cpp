#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "autothermo/errors.hpp"
#include "autothermo/thermo.hpp"

namespace autothermo {
namespace {

constexpr double kBetaSpan = 1e6;  // beta_max = kBetaSpan / first gap
constexpr int kMaxBisections = 300;

double degeneracy_tolerance(std::span<const double> e) {
  double scale = 1.0;
  for (double x : e) scale = std::max(scale, std::abs(x));
  return 1e-12 * scale;
}

// S of the Gibbs populations, computed as ln Z' + beta <E - E_0>.
double gibbs_entropy(std::span<const double> energies, double beta) {
  double log_z = 0.0;
  const auto p = gibbs_populations(energies, beta, &log_z);
  double mean = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) mean += p[k] * (energies[k] - energies[0]);
  return log_z + beta * mean;
}

EffectiveThermalState make_state(std::span<const double> energies, double beta) {
  EffectiveThermalState ts;
  ts.beta = beta;
  ts.populations = gibbs_populations(energies, beta, &ts.log_partition);
  ts.log_partition -= beta == kInfinity ? 0.0 : beta * energies[0];
  if (beta == kInfinity) ts.log_partition = -kInfinity;
  return ts;
}

}  // namespace

// --------------------------------------------------------- EnergyBasis

EnergyBasis EnergyBasis::of(const Operator& h) {
  Eigensystem es = hermitian_eig(h);
  EnergyBasis b;
  b.energies = std::move(es.values);
  b.vectors = std::move(es.vectors);
  b.diagonal = h.is_diagonal();
  return b;
}

std::vector<double> EnergyBasis::populations(const Matrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != dim()) {
    throw DimensionMismatch("state and Hamiltonian dims differ");
  }
  std::vector<double> p(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto v = vectors.col(k);
    p[k] = (v.adjoint() * rho * v)(0, 0).real();
  }
  return p;
}

Matrix EnergyBasis::from_populations(std::span<const double> p) const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    if (p[k] != 0.0) m += p[k] * vectors.col(k) * vectors.col(k).adjoint();
  }
  return m;
}

// ------------------------------------------------- effective temperature

std::vector<double> gibbs_populations(std::span<const double> energies, double beta,
                                      double* log_partition) {
  const std::size_t d = energies.size();
  std::vector<double> p(d, 0.0);
  if (beta == kInfinity) {
    p[0] = 1.0;
    if (log_partition) *log_partition = 0.0;
    return p;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    p[k] = std::exp(-beta * (energies[k] - energies[0]));
    z += p[k];
  }
  for (double& x : p) x /= z;
  if (log_partition) *log_partition = std::log(z);
  return p;
}

double EffectiveThermalState::energy(const EnergyBasis& basis) const {
  if (populations.size() != basis.dim()) throw DimensionMismatch("thermal state dims differ");
  double u = 0.0;
  for (std::size_t k = 0; k < populations.size(); ++k) u += populations[k] * basis.energies[k];
  return u;
}

double EffectiveThermalState::entropy() const { return entropy_of_spectrum(populations); }

QuantumState EffectiveThermalState::gibbs(const EnergyBasis& basis) const {
  return QuantumState::trusted_density(basis.from_populations(populations));
}

EffectiveThermalState effective_temperature(double s_target, const EnergyBasis& basis) {
  const auto& e = basis.energies;
  const std::size_t d = e.size();
  if (d < 2) throw DimensionMismatch("effective temperature needs at least two levels");
  const double smax = std::log(static_cast<double>(d));
  if (!(s_target >= -1e-9) || !(s_target <= smax + 1e-9)) {
    throw EntropyOutOfRange("target entropy " + std::to_string(s_target) + " outside [0, ln " +
                            std::to_string(d) + "]");
  }
  s_target = std::clamp(s_target, 0.0, smax);

  const double tol_e = degeneracy_tolerance(e);
  std::size_t ground = 1;
  while (ground < d && e[ground] - e[0] <= tol_e) ++ground;
  if (s_target >= smax - 1e-14) return make_state(e, 0.0);
  if (ground == d) {
    throw DegenerateGround("fully degenerate spectrum admits only the maximally mixed state");
  }
  if (ground > 1 && s_target < std::log(static_cast<double>(ground)) + 1e-12) {
    throw DegenerateGround("ground level is " + std::to_string(ground) +
                           "-fold degenerate; entropy " + std::to_string(s_target) +
                           " is below ln(degeneracy)");
  }

  const double beta_max = kBetaSpan / (e[ground] - e[0]);
  const double s_floor = gibbs_entropy(e, beta_max);
  if (s_target <= s_floor) return make_state(e, kInfinity);

  double lo = 0.0, hi = beta_max;
  double s_lo = gibbs_entropy(e, lo), s_hi = s_floor;
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s_mid = gibbs_entropy(e, mid);
    if (s_mid > s_lo + 1e-13 || s_mid < s_hi - 1e-13) {
      throw InvariantViolation("S(beta) is not decreasing near beta = " + std::to_string(mid));
    }
    if (s_mid > s_target) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
      s_hi = s_mid;
    }
  }
  const double beta = std::abs(s_lo - s_target) <= std::abs(s_hi - s_target) ? lo : hi;
  EffectiveThermalState ts = make_state(e, beta);
  const double miss = std::abs(gibbs_entropy(e, beta) - s_target);
  if (miss >= ledger_tol::entropy_match) {
    throw InvariantViolation("entropy matching missed by " + std::to_string(miss));
  }
  return ts;
}

EffectiveThermalState effective_temperature(double s_target, const Operator& h) {
  return effective_temperature(s_target, EnergyBasis::of(h));
}

double thermal_energy(const EffectiveThermalState& ts, const EnergyBasis& basis) {
  return ts.energy(basis);
}

double thermal_energy(const EffectiveThermalState& ts, const Operator& h) {
  return ts.energy(EnergyBasis::of(h));
}

// For two levels the spectrum fixes the Gibbs state: populations are the
// sorted eigenvalues and beta = ln(p_0/p_1)/gap.
EffectiveThermalState thermal_from_spectrum(std::span<const double> p, const EnergyBasis& basis) {
  if (p.size() != basis.dim()) throw DimensionMismatch("spectrum and Hamiltonian dims differ");
  if (basis.dim() == 2 && basis.energies[1] - basis.energies[0] >
                              degeneracy_tolerance(basis.energies)) {
    const double r0 = std::max(p[0], p[1]), r1 = std::min(p[0], p[1]);
    EffectiveThermalState ts;
    ts.populations = {r0, r1};
    const double gap = basis.energies[1] - basis.energies[0];
    if (r1 <= tol::entropy_cutoff) {
      ts.beta = kInfinity;
      ts.log_partition = -kInfinity;
    } else {
      ts.beta = r0 == r1 ? 0.0 : std::log(r0 / r1) / gap;
      ts.log_partition = -std::log(r0) - ts.beta * basis.energies[0];
    }
    return ts;
  }
  return effective_temperature(entropy_of_spectrum(p), basis);
}

// ------------------------------------------------- passive, ergotropy

double passive_energy(std::span<const double> p, std::span<const double> energies_ascending) {
  if (p.size() != energies_ascending.size()) {
    throw DimensionMismatch("spectrum and Hamiltonian dims differ");
  }
  std::vector<double> desc(p.begin(), p.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  double u = 0.0;
  for (std::size_t k = 0; k < desc.size(); ++k) u += desc[k] * energies_ascending[k];
  return u;
}

QuantumState passive_state(const QuantumState& rho, const Operator& h) {
  if (rho.dim() != h.dim()) throw DimensionMismatch("state and Hamiltonian dims differ");
  const EnergyBasis basis = EnergyBasis::of(h);
  std::vector<double> p = spectrum(rho);
  std::sort(p.begin(), p.end(), std::greater<>());
  return QuantumState::trusted_density(basis.from_populations(p), rho.subsystem_dims());
}

double ergotropy(const QuantumState& rho, const Operator& h) { return exergy(rho, h).ergotropy; }

ExergyParts exergy(const QuantumState& rho, const Operator& h) {
  if (rho.dim() != h.dim()) throw DimensionMismatch("state and Hamiltonian dims differ");
  const EnergyBasis basis = EnergyBasis::of(h);
  const std::vector<double> p = spectrum(rho);
  const double u = rho.expectation(h).real();
  const double u_p = passive_energy(p, basis.energies);
  const EffectiveThermalState ts = thermal_from_spectrum(p, basis);
  const double u_th = ts.energy(basis);
  return {u - u_th, u - u_p, u_p - u_th, ts.beta};
}

LocalSnapshot local_snapshot(const QuantumState& joint, std::size_t j, const EnergyBasis& basis,
                             const Operator& h) {
  LocalSnapshot snap;
  std::vector<double> p;
  if (joint.factor_dims().size() == 1) {
    if (j != 0) throw IndexError("subsystem index out of range");
    p = spectrum(joint);
    snap.u = joint.expectation(h).real();
  } else {
    p = reduced_spectrum(joint, j);
    snap.u = local_expectation(joint, j, h).real();
  }
  snap.s = entropy_of_spectrum(p);
  snap.u_passive = passive_energy(p, basis.energies);
  snap.thermal = thermal_from_spectrum(p, basis);
  snap.u_th = snap.thermal.energy(basis);
  snap.inverted = snap.u - snap.u_passive > 1e-9 * std::max(1.0, std::abs(snap.u)) ? 1 : 0;
  return snap;
}

}  // namespace autothermo
