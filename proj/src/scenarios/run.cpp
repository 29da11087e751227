#include <sstream>

#include "autothermo/errors.hpp"
#include "autothermo/kernels.hpp"
#include "autothermo/scenarios.hpp"

namespace autothermo {
namespace {

std::string_view kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::jc: return "jc";
    case ModelKind::qubit_qubit: return "qq";
    case ModelKind::spontaneous_emission: return "se";
    case ModelKind::reaction_coordinate: return "rc";
  }
  return "?";
}

std::string provenance(const ScenarioConfig& cfg, const ModelSpec& spec, double dt,
                       const Trajectory& traj) {
  std::ostringstream os;
  os.precision(12);
  os << "preset=" << (cfg.preset.empty() ? "none" : cfg.preset) << "; model=" << kind_name(cfg.kind)
     << "; omega_a=" << cfg.omega_a;
  if (cfg.subsystem_count() == 2) os << "; omega_b=" << cfg.omega_b;
  if (cfg.kind == ModelKind::spontaneous_emission) {
    os << "; gamma=" << cfg.gamma;
  } else {
    os << (cfg.kind == ModelKind::reaction_coordinate ? "; lambda=" : "; g=") << cfg.g;
  }
  if (cfg.kind == ModelKind::reaction_coordinate) os << "; kappa=" << cfg.kappa_over_lambda * cfg.g;
  if (cfg.subsystem_count() == 2) os << "; levels_b=" << spec.subsystems[1].truncation;
  os << "; initial.A=" << describe(cfg.initial.factors[0]);
  if (cfg.subsystem_count() == 2) os << "; initial.B=" << describe(cfg.initial.factors[1]);
  os << "; t_max=" << cfg.t_max << "; samples=" << cfg.samples << "; dt=" << dt
     << "; propagation=" << propagation_name(traj.kind)
     << "; isa=" << kernels::isa_name(kernels::active_isa())
     << "; units: energy hbar*omega, time " << cfg.time_label();
  return os.str();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  if (config.samples < 2) throw BadSpec("samples must be at least 2");
  if (!(config.t_max > 0.0)) throw BadSpec("t_max must be positive");
  const ModelSpec spec = config.model_spec();
  auto model = std::make_shared<const Model>(build_model(spec));
  InitialStateSpec init;
  init.factors.assign(config.initial.factors.begin(),
                      config.initial.factors.begin() + config.subsystem_count());
  const double dt = config.dt.value_or(config.default_dt());
  const std::vector<double> times = uniform_grid(config.t_max / config.time_scale(), config.samples);

  Trajectory traj;
  switch (config.propagation) {
    case PropagationChoice::automatic:
      traj = propagate(model, make_initial_state(init, *model), times, dt);
      break;
    case PropagationChoice::unitary:
      if (!model->closed()) throw BadSpec("unitary propagation needs a closed model");
      traj = propagate_unitary(model->total_hamiltonian(), make_initial_state(init, *model), times);
      break;
    case PropagationChoice::blocks:
      traj = propagate_jc_blocks(model, make_initial_state(init, *model), times);
      break;
    case PropagationChoice::lindblad: {
      std::vector<LindbladJump> jumps;
      for (auto& [op, rate] : model->joint_jumps()) jumps.push_back({op, rate});
      traj = propagate_lindblad(model->total_hamiltonian(), jumps, make_initial_state(init, *model),
                                times, dt);
      break;
    }
    case PropagationChoice::mean_field: {
      if (!model->bipartite()) throw BadSpec("mean-field propagation needs two subsystems");
      const auto a = make_factor_state(init.factors[0], spec.subsystems[0], model->local_hamiltonian(0));
      const auto b = make_factor_state(init.factors[1], spec.subsystems[1], model->local_hamiltonian(1));
      traj = propagate_mean_field(model, a, b, times, dt).product;
      break;
    }
  }
  traj.model = model;

  AnalyzeOptions opts;
  opts.comparators = config.wants(ColumnGroup::standard) || config.wants(ColumnGroup::mca);
  ScenarioResult result{config, analyze(traj, opts), std::move(traj)};
  result.table.provenance = provenance(config, spec, dt, result.trajectory) + "; " +
                            result.table.provenance.substr(result.table.provenance.find("note"));
  return result;
}

}  // namespace autothermo
