#pragma once

// Thermodynamic ledger of an autonomous bipartite system: entropy-matched
// thermal states, heat, work, ergotropy, exergy and entropy production, plus
// the standard and MCA comparator quantities.
//
// Sign convention: Q_j and W_j are positive when provided by subsystem j,
// so dU_j + Q_j + W_j = 0. The comparator quantities W_st, Q_st and the MCA
// rates are positive when received.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autothermo/dynamics.hpp"
#include "autothermo/operators.hpp"

namespace autothermo {

/// Spectrum of a local Hamiltonian, energies ascending.
struct EnergyBasis {
  std::vector<double> energies;
  Matrix vectors;  // column k pairs with energies[k]
  bool diagonal = false;

  static EnergyBasis of(const Operator& h);
  std::size_t dim() const { return energies.size(); }
  /// Populations of rho in this basis (diagonal of U^dagger rho U).
  std::vector<double> populations(const Matrix& rho) const;
  /// sum_k p_k |k><k|.
  Matrix from_populations(std::span<const double> p) const;
};

struct EffectiveThermalState {
  double beta = 0.0;  // kInfinity for the ground-projector sentinel
  double log_partition = 0.0;
  std::vector<double> populations;  // on EnergyBasis order, non-increasing

  bool infinite() const { return beta == kInfinity; }
  double energy(const EnergyBasis& basis) const;
  double entropy() const;
  QuantumState gibbs(const EnergyBasis& basis) const;
};

/// Gibbs populations at inverse temperature beta (ground-shifted weights).
std::vector<double> gibbs_populations(std::span<const double> energies, double beta,
                                      double* log_partition = nullptr);

/// Solves S(gibbs(beta)) = s_target for beta >= 0. Throws EntropyOutOfRange,
/// DegenerateGround, InvariantViolation (non-monotone S(beta)).
EffectiveThermalState effective_temperature(double s_target, const EnergyBasis& basis);
EffectiveThermalState effective_temperature(double s_target, const Operator& h);
/// Entropy-matched state from a full spectrum. Two-level systems use the
/// closed form, whose populations are the sorted spectrum itself.
EffectiveThermalState thermal_from_spectrum(std::span<const double> p, const EnergyBasis& basis);

double thermal_energy(const EffectiveThermalState& ts, const EnergyBasis& basis);
double thermal_energy(const EffectiveThermalState& ts, const Operator& h);

/// Passive state of rho: descending eigenvalues on ascending energies.
QuantumState passive_state(const QuantumState& rho, const Operator& h);
/// sum_k p_desc[k] E_asc[k].
double passive_energy(std::span<const double> spectrum_any_order,
                      std::span<const double> energies_ascending);

double ergotropy(const QuantumState& rho, const Operator& h);

struct ExergyParts {
  double exergy = 0.0;
  double ergotropy = 0.0;
  double nonunitary = 0.0;
  double beta = 0.0;
};

ExergyParts exergy(const QuantumState& rho, const Operator& h);

/// Local quantities of one subsystem at one instant.
struct LocalSnapshot {
  double u = 0.0;
  double s = 0.0;
  double u_passive = 0.0;
  EffectiveThermalState thermal;
  double u_th = 0.0;
  int inverted = 0;  // sign of the ergotropy indicator, for the residual guard
};

/// Snapshot of subsystem j (or the whole system when it has one factor).
LocalSnapshot local_snapshot(const QuantumState& joint, std::size_t j, const EnergyBasis& basis,
                             const Operator& h);

struct SubsystemSeries {
  std::vector<double> u, u_th, s, beta, q, w, ergotropy, exergy, nonunitary;
  std::vector<double> sigma_lhs, sigma_rhs;
  std::vector<double> residual;
  std::vector<EffectiveThermalState> thermal;
  std::vector<int> inverted;
};

struct ComparatorSeries {
  std::vector<double> w_st, q_st, u_st;  // cumulative, received-positive
  std::vector<double> w_mca_rate, q_mca_rate, u_rate_exact;
};

struct ThermoTable {
  std::vector<double> times;
  std::vector<SubsystemSeries> sub;  // one or two
  std::vector<double> mutual_information, interaction_energy;
  std::vector<ComparatorSeries> comparators;  // per subsystem, bipartite only
  std::string provenance;

  bool bipartite() const { return sub.size() == 2; }
};

// Series builders, usable on their own.
std::vector<double> heat_series(const Trajectory& traj, std::size_t j);
std::vector<double> work_series(const Trajectory& traj, std::size_t j);
std::vector<double> interaction_energy(const Trajectory& traj);

struct EntropyProduction {
  std::vector<double> lhs, rhs;
};
/// sigma_j from the partner's initial inverse temperature; lhs is +inf when
/// that temperature is zero and the partner has exchanged heat.
EntropyProduction entropy_production(const Trajectory& traj, std::size_t j);

/// dS_j/dt + beta_j dQ_j/dt on the sample grid; NaN where beta is infinite,
/// the state is pure, or the stencil straddles a population inversion.
std::vector<double> entropy_heat_rate_residual(const Trajectory& traj, std::size_t j);

/// Per subsystem: cumulative W_st, Q_st and U_st.
std::vector<ComparatorSeries> standard_work_heat(const Trajectory& traj);
/// Per subsystem: MCA work and correlation-flow rates.
std::vector<ComparatorSeries> mca_rates(const Trajectory& traj);

/// Second-order derivative on a nonuniform grid (central inside,
/// one-sided three-point stencils at the ends).
std::vector<double> derivative(std::span<const double> t, std::span<const double> y);

struct AnalyzeOptions {
  bool comparators = true;
  bool check_invariants = true;
};

/// Full ledger; throws InvariantViolation naming the sample time when an
/// invariant fails.
ThermoTable analyze(const Trajectory& traj, const AnalyzeOptions& options = {});

/// Tolerances of the ledger invariants.
namespace ledger_tol {
inline constexpr double first_law = 1e-8;
inline constexpr double second_law = 1e-9;
inline constexpr double sigma_forms = 1e-7;
inline constexpr double exergy_split = 1e-9;
inline constexpr double nonneg = 1e-12;
inline constexpr double entropy_match = 1e-10;
}  // namespace ledger_tol

}  // namespace autothermo
