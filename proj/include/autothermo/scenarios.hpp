#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autothermo/dynamics.hpp"
#include "autothermo/models.hpp"
#include "autothermo/thermo.hpp"

namespace autothermo {

enum class ColumnGroup { autonomous, standard, mca, info };

enum class PropagationChoice { automatic, unitary, blocks, lindblad, mean_field };

struct ScenarioConfig {
  std::string preset;  // empty when built from keys alone
  ModelKind kind = ModelKind::jc;
  double omega_a = 1.0;
  double omega_b = 1.0;
  double g = 0.01;  // coupling; lambda for the reaction coordinate
  double gamma = 0.01;
  double kappa_over_lambda = 0.8;
  std::size_t truncation_b = 0;  // 0: derived from the initial state
  std::optional<QubitEnergy> qubit_energy;
  InitialStateSpec initial{{FactorSpec{FactorSpec::Kind::excited}, FactorSpec{}}};
  double t_max = 1.0;        // in the natural time variable (see time_scale)
  std::size_t samples = 400;  // sampling intervals; the table has samples + 1 rows
  std::optional<double> dt;   // physical step bound; default min(0.01/w, 0.01/rate)
  std::vector<ColumnGroup> outputs{ColumnGroup::autonomous, ColumnGroup::info,
                                   ColumnGroup::standard, ColumnGroup::mca};
  std::string out_path;  // empty: stdout
  bool gnuplot = false;
  PropagationChoice propagation = PropagationChoice::automatic;

  /// Model descriptor with truncations resolved. Throws BadSpec.
  ModelSpec model_spec() const;
  std::size_t subsystem_count() const { return kind == ModelKind::spontaneous_emission ? 1 : 2; }

  /// Natural time variable per unit physical time (g, Gamma or lambda).
  double time_scale() const;
  /// "gt", "Gamma t", "lambda t" or "omega t".
  std::string time_label() const;
  double default_dt() const;
  bool wants(ColumnGroup g) const;
};

struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();
/// Throws UnknownPreset.
ScenarioConfig preset_config(const std::string& name);

/// Flat key=value text with '#' comments. Keys: preset, model.kind,
/// model.omega_a, model.omega_b, model.g, model.gamma, model.kappa_over_lambda,
/// model.truncation_b, model.qubit_energy, initial.A, initial.B, t_max,
/// samples, dt, propagation, output.groups, output.path, output.gnuplot.
/// Throws ParseError (with line) and UnknownKey.
ScenarioConfig parse_config(std::string_view text);
/// Help text listing every key and its default.
std::string config_help();

std::string_view group_name(ColumnGroup g);

struct ScenarioResult {
  ScenarioConfig config;
  ThermoTable table;
  Trajectory trajectory;
};

/// Builds the model, propagates and analyzes. Throws UnknownPreset and
/// propagated errors with context.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Column names in emission order.
std::vector<std::string> csv_columns(const ScenarioResult& result);
std::string csv_metadata(const ScenarioResult& result);
void write_csv(const ScenarioResult& result, std::ostream& os);
/// Throws IoError.
void emit_csv(const ScenarioResult& result, const std::string& path);
std::string format_number(double v);
/// Gnuplot script plotting U, Q, W against the time column of `csv_path`.
std::string gnuplot_script(const ScenarioResult& result, const std::string& csv_path);

}  // namespace autothermo
