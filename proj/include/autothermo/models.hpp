#pragma once

// Hamiltonians, interactions, jump operators and initial states for the
// qubit-oscillator, qubit-qubit, spontaneous-emission and reaction-coordinate
// models. Energies are in units of a reference frequency with hbar = 1.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "autothermo/operators.hpp"

namespace autothermo {

enum class SubsystemKind { qubit, oscillator };

/// Qubit energy reference: (w/2) sigma_z, or w |e><e| with E_g = 0.
enum class QubitEnergy { half_sigma_z, excited_only };

struct SubsystemSpec {
  std::string label = "A";
  SubsystemKind kind = SubsystemKind::qubit;
  double frequency = 1.0;
  std::size_t truncation = 2;  // number of levels
};

enum class ModelKind { jc, qubit_qubit, spontaneous_emission, reaction_coordinate };

/// Lowering operator on `subsystem`, applied at `rate`.
struct Dissipator {
  std::size_t subsystem = 0;
  double rate = 0.0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::jc;
  std::vector<SubsystemSpec> subsystems;
  double coupling = 0.0;  // g, or lambda for the reaction coordinate
  std::optional<Dissipator> dissipator;
  std::optional<QubitEnergy> qubit_energy;  // unset: the model's own convention
};

struct FactorSpec {
  enum class Kind { ground, excited, fock, coherent, superposition, gibbs, maximally_mixed };
  Kind kind = Kind::ground;
  std::size_t n = 0;     // fock
  cplx alpha = 0.0;      // coherent
  double beta = 0.0;     // gibbs
};

struct InitialStateSpec {
  std::vector<FactorSpec> factors;  // one per subsystem
};

/// Parses "ground", "excited", "superposition", "mixed", "fock:N",
/// "coherent:ALPHA", "gibbs:BETA". Throws BadSpec.
FactorSpec parse_factor(const std::string& text);
std::string describe(const FactorSpec& f);

/// X_a (x) Y_b; the interaction is a sum of these.
struct ProductTerm {
  Operator on_a;
  Operator on_b;
};

struct Jump {
  std::size_t subsystem = 0;
  Operator op;  // local operator
  double rate = 0.0;
};

/// A built model: local Hamiltonians, interaction terms and local jumps.
/// Joint-space operators are assembled on request.
class Model {
 public:
  Model(ModelSpec spec, std::vector<Operator> local_h, std::vector<ProductTerm> interaction,
        std::vector<Jump> jumps);

  const ModelSpec& spec() const { return spec_; }
  std::size_t subsystem_count() const { return local_h_.size(); }
  bool bipartite() const { return local_h_.size() == 2; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const;

  const Operator& local_hamiltonian(std::size_t j) const;
  const std::vector<ProductTerm>& interaction_terms() const { return interaction_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  bool closed() const;

  /// Local excitation number of basis level k of subsystem j (the level index).
  static double level_excitation(std::size_t k) { return static_cast<double>(k); }

  Operator embedded(std::size_t j, const Operator& local) const;
  Operator embedded_hamiltonian(std::size_t j) const { return embedded(j, local_hamiltonian(j)); }
  Operator interaction() const;
  Operator total_hamiltonian() const;
  /// Joint-space jump operators with their rates.
  std::vector<std::pair<Operator, double>> joint_jumps() const;
  /// N = sum_j (level index)_j on the joint space.
  Operator excitation_number() const;

 private:
  ModelSpec spec_;
  std::vector<Operator> local_h_;
  std::vector<ProductTerm> interaction_;
  std::vector<Jump> jumps_;
  Dims dims_;
};

// Ladder and Pauli operators. Qubit basis (|g>, |e>).
Operator sigma_minus();
Operator sigma_plus();
Operator sigma_z();
Operator sigma_ee();
Operator annihilation(std::size_t levels);
Operator creation(std::size_t levels);
Operator number_operator(std::size_t levels);

Operator qubit_hamiltonian(double omega, QubitEnergy convention);

Model build_jc(const ModelSpec& spec);
Model build_qubit_qubit(const ModelSpec& spec);
Model build_spontaneous_emission(const ModelSpec& spec);
Model build_rc(const ModelSpec& spec);
/// Dispatches on spec.kind.
Model build_model(const ModelSpec& spec);

/// Default oscillator truncation (levels) for an initial factor, given the
/// largest number of excitations the partner can hand over.
std::size_t default_truncation(const FactorSpec& f, double frequency, std::size_t partner_excitations);

/// Population outside the first `levels` Fock states of |alpha>.
double coherent_tail(cplx alpha, std::size_t levels);
Vector coherent_amplitudes(cplx alpha, std::size_t levels);

/// Throws BadSpec, TruncationTooSmall.
QuantumState make_factor_state(const FactorSpec& f, const SubsystemSpec& sub, const Operator& h);
QuantumState make_initial_state(const InitialStateSpec& init, const Model& model);

}  // namespace autothermo
