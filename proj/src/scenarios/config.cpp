#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "autothermo/errors.hpp"
#include "autothermo/scenarios.hpp"

namespace autothermo {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t qubit_excitations(const FactorSpec& f) {
  return f.kind == FactorSpec::Kind::ground ? 0 : 1;
}

double to_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
    throw ParseError(line, "malformed number '" + v + "'");
  }
  return x;
}

double to_positive(const std::string& v, int line) {
  const double x = to_double(v, line);
  if (!(x > 0.0)) throw ParseError(line, "value must be positive, got '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& v, int line) {
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError(line, "malformed integer '" + v + "'");
  }
  return n;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(line, "malformed boolean '" + v + "'");
}

ModelKind to_kind(const std::string& v, int line) {
  if (v == "jc") return ModelKind::jc;
  if (v == "qq") return ModelKind::qubit_qubit;
  if (v == "se") return ModelKind::spontaneous_emission;
  if (v == "rc") return ModelKind::reaction_coordinate;
  throw ParseError(line, "model.kind must be jc, qq, se or rc, got '" + v + "'");
}

PropagationChoice to_propagation(const std::string& v, int line) {
  if (v == "auto") return PropagationChoice::automatic;
  if (v == "unitary") return PropagationChoice::unitary;
  if (v == "blocks") return PropagationChoice::blocks;
  if (v == "lindblad") return PropagationChoice::lindblad;
  if (v == "mean-field") return PropagationChoice::mean_field;
  throw ParseError(line, "propagation must be auto, unitary, blocks, lindblad or mean-field");
}

std::vector<ColumnGroup> to_groups(const std::string& v, int line) {
  std::vector<ColumnGroup> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    ColumnGroup g;
    if (item == "autonomous") g = ColumnGroup::autonomous;
    else if (item == "standard") g = ColumnGroup::standard;
    else if (item == "mca") g = ColumnGroup::mca;
    else if (item == "info") g = ColumnGroup::info;
    else throw ParseError(line, "unknown column group '" + item + "'");
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  if (out.empty()) throw ParseError(line, "output.groups is empty");
  return out;
}

FactorSpec to_factor(const std::string& v, int line) {
  try {
    return parse_factor(v);
  } catch (const BadSpec& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

// ------------------------------------------------------ ScenarioConfig

ModelSpec ScenarioConfig::model_spec() const {
  ModelSpec m;
  m.kind = kind;
  m.coupling = g;
  m.qubit_energy = qubit_energy;
  if (initial.factors.size() < subsystem_count()) {
    throw BadSpec("initial state needs one factor per subsystem");
  }
  const SubsystemSpec a{"A", SubsystemKind::qubit, omega_a, 2};
  auto oscillator = [&] {
    const std::size_t levels =
        truncation_b > 0
            ? truncation_b
            : default_truncation(initial.factors[1], omega_b, qubit_excitations(initial.factors[0]));
    return SubsystemSpec{"B", SubsystemKind::oscillator, omega_b, levels};
  };
  switch (kind) {
    case ModelKind::jc:
      m.subsystems = {a, oscillator()};
      break;
    case ModelKind::qubit_qubit:
      m.subsystems = {a, SubsystemSpec{"B", SubsystemKind::qubit, omega_b, 2}};
      break;
    case ModelKind::spontaneous_emission:
      m.subsystems = {a};
      m.dissipator = Dissipator{0, gamma};
      break;
    case ModelKind::reaction_coordinate:
      m.subsystems = {a, oscillator()};
      m.dissipator = Dissipator{1, kappa_over_lambda * g};
      break;
  }
  return m;
}

double ScenarioConfig::time_scale() const {
  switch (kind) {
    case ModelKind::spontaneous_emission: return gamma > 0.0 ? gamma : omega_a;
    case ModelKind::jc:
    case ModelKind::qubit_qubit:
    case ModelKind::reaction_coordinate: return g > 0.0 ? g : omega_a;
  }
  return 1.0;
}

std::string ScenarioConfig::time_label() const {
  switch (kind) {
    case ModelKind::spontaneous_emission: return gamma > 0.0 ? "Gamma t" : "omega t";
    case ModelKind::reaction_coordinate: return g > 0.0 ? "lambda t" : "omega t";
    case ModelKind::jc:
    case ModelKind::qubit_qubit: return g > 0.0 ? "gt" : "omega t";
  }
  return "t";
}

double ScenarioConfig::default_dt() const {
  double w = omega_a;
  if (subsystem_count() == 2) w = std::max(w, omega_b);
  double dt = 0.01 / w;
  double rate = 0.0;
  if (kind == ModelKind::spontaneous_emission) rate = gamma;
  if (kind == ModelKind::reaction_coordinate) rate = kappa_over_lambda * g;
  if (rate > 0.0) dt = std::min(dt, 0.01 / rate);
  return dt;
}

bool ScenarioConfig::wants(ColumnGroup grp) const {
  return std::find(outputs.begin(), outputs.end(), grp) != outputs.end();
}

std::string_view group_name(ColumnGroup g) {
  switch (g) {
    case ColumnGroup::autonomous: return "autonomous";
    case ColumnGroup::standard: return "standard";
    case ColumnGroup::mca: return "mca";
    case ColumnGroup::info: return "info";
  }
  return "?";
}

// ------------------------------------------------------------- parsing

ScenarioConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
    order.push_back(key);
  }

  ScenarioConfig cfg;
  if (auto it = entries.find("preset"); it != entries.end()) {
    try {
      cfg = preset_config(it->second.value);
    } catch (const UnknownPreset& e) {
      throw UnknownPreset("line " + std::to_string(it->second.line) + ": " + e.what());
    }
  }
  if (auto it = entries.find("model.kind"); it != entries.end()) {
    cfg.kind = to_kind(it->second.value, it->second.line);
  }

  for (const auto& key : order) {
    const auto& [v, line] = entries[key];
    if (key == "preset" || key == "model.kind") continue;
    if (key == "model.omega_a") cfg.omega_a = to_positive(v, line);
    else if (key == "model.omega_b") cfg.omega_b = to_positive(v, line);
    else if (key == "model.g") {
      cfg.g = to_double(v, line);
      if (cfg.g < 0.0) throw ParseError(line, "model.g must be non-negative");
    } else if (key == "model.gamma") {
      cfg.gamma = to_double(v, line);
      if (cfg.gamma < 0.0) throw ParseError(line, "model.gamma must be non-negative");
    } else if (key == "model.kappa_over_lambda") {
      cfg.kappa_over_lambda = to_double(v, line);
      if (cfg.kappa_over_lambda < 0.0) throw ParseError(line, "model.kappa_over_lambda must be non-negative");
    } else if (key == "model.truncation_b") {
      cfg.truncation_b = to_count(v, line);
      if (cfg.truncation_b < 2) throw ParseError(line, "model.truncation_b must be at least 2");
    } else if (key == "model.qubit_energy") {
      if (v == "sigma_z") cfg.qubit_energy = QubitEnergy::half_sigma_z;
      else if (v == "excited") cfg.qubit_energy = QubitEnergy::excited_only;
      else throw ParseError(line, "model.qubit_energy must be sigma_z or excited");
    } else if (key == "initial.A") cfg.initial.factors[0] = to_factor(v, line);
    else if (key == "initial.B") cfg.initial.factors[1] = to_factor(v, line);
    else if (key == "t_max") cfg.t_max = to_positive(v, line);
    else if (key == "samples") {
      cfg.samples = to_count(v, line);
      if (cfg.samples < 2) throw ParseError(line, "samples must be at least 2 (three rows)");
    } else if (key == "dt") cfg.dt = to_positive(v, line);
    else if (key == "propagation") cfg.propagation = to_propagation(v, line);
    else if (key == "output.groups") cfg.outputs = to_groups(v, line);
    else if (key == "output.path") cfg.out_path = v;
    else if (key == "output.gnuplot") cfg.gnuplot = to_bool(v, line);
    else throw UnknownKey("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  return cfg;
}

std::string config_help() {
  return R"(Configuration keys (key=value, '#' starts a comment):
  preset                   named scenario filling every default (see list-presets)
  model.kind               jc | qq | se | rc                          [jc]
  model.omega_a            qubit A frequency                            [1]
  model.omega_b            frequency of B (oscillator, qubit or RC)     [1]
  model.g                  coupling g, or lambda for rc                 [0.01]
  model.gamma              spontaneous-emission rate                    [0.01]
  model.kappa_over_lambda  RC damping as a multiple of lambda           [0.8]
  model.truncation_b       oscillator levels; 0 derives from the state  [0]
  model.qubit_energy       sigma_z | excited (model default if unset)
  initial.A, initial.B     ground | excited | superposition | mixed |
                           fock:N | coherent:ALPHA | gibbs:BETA      [excited, ground]
  t_max                    window end in the natural time variable
                           (gt, Gamma t or lambda t)                   [1]
  samples                  sampling intervals (rows = samples + 1)     [400]
  dt                       integrator step bound, units 1/omega
                           [min(0.01/omega, 0.01/rate)]
  propagation              auto | unitary | blocks | lindblad | mean-field  [auto]
  output.groups            comma list of autonomous, info, standard, mca  [all]
  output.path              CSV path; empty writes to stdout
  output.gnuplot           also write PATH.gp plotting script           [false]
)";
}

}  // namespace autothermo
