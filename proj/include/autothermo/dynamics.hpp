#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "autothermo/models.hpp"
#include "autothermo/operators.hpp"

namespace autothermo {

enum class PropagationKind { unitary_exact, jc_block, lindblad, mean_field };
std::string_view propagation_name(PropagationKind kind);

/// Sampled joint states. `model` may be null for bare-Hamiltonian runs.
struct Trajectory {
  std::shared_ptr<const Model> model;
  std::vector<double> times;
  std::vector<QuantumState> states;
  PropagationKind kind = PropagationKind::unitary_exact;
  /// Largest trace deviation seen before renormalization.
  double max_trace_defect = 0.0;

  std::size_t size() const { return times.size(); }
};

/// Samples of strictly increasing times; throws BadSpec otherwise.
void check_time_grid(std::span<const double> times);
/// `intervals` + 1 evenly spaced points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t intervals);

/// Spectral propagation: H is diagonalized once, each sample applies phases.
Trajectory propagate_unitary(const Operator& h, const QuantumState& initial,
                             std::span<const double> times);

/// Excitation-sector propagation for bipartite models whose Hamiltonian
/// conserves the total level index. Pure initial states only.
Trajectory propagate_jc_blocks(std::shared_ptr<const Model> model, const QuantumState& initial,
                               std::span<const double> times);

struct LindbladJump {
  Operator op;
  double rate = 0.0;
};

/// Fixed-step RK4 on the Lindblad equation. `dt` is an upper bound: each
/// sampling interval is split into equal substeps no longer than dt.
Trajectory propagate_lindblad(const Operator& h, std::span<const LindbladJump> jumps,
                              const QuantumState& initial, std::span<const double> times,
                              double dt);

struct MeanFieldTrajectories {
  Trajectory a;
  Trajectory b;
  /// rho_A (x) rho_B at each sample, carrying the model.
  Trajectory product;
};

/// Co-integrates the two local equations under the effective Hamiltonians
/// H_j + Tr_other[rho_other V] with fixed-step RK4.
MeanFieldTrajectories propagate_mean_field(std::shared_ptr<const Model> model,
                                           const QuantumState& rho_a0, const QuantumState& rho_b0,
                                           std::span<const double> times, double dt);

/// Picks jc-block, unitary or Lindblad propagation for the model.
Trajectory propagate(std::shared_ptr<const Model> model, const QuantumState& initial,
                     std::span<const double> times, double dt);

/// True when every Hamiltonian piece conserves the summed level index.
bool conserves_excitations(const Model& model);

}  // namespace autothermo
