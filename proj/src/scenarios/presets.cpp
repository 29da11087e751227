#include <numbers>

#include "autothermo/errors.hpp"
#include "autothermo/scenarios.hpp"

namespace autothermo {
namespace {

constexpr double kPi = std::numbers::pi;

FactorSpec factor(const char* text) { return parse_factor(text); }

ScenarioConfig jc(const char* qubit, double t_max) {
  ScenarioConfig c;
  c.kind = ModelKind::jc;
  c.g = 0.01;
  c.initial.factors = {factor(qubit), factor("ground")};
  c.t_max = t_max;
  return c;
}

ScenarioConfig qq(const char* qubit) {
  ScenarioConfig c = jc(qubit, kPi / 2);
  c.kind = ModelKind::qubit_qubit;
  return c;
}

ScenarioConfig rc(double kappa_over_lambda) {
  ScenarioConfig c;
  c.kind = ModelKind::reaction_coordinate;
  c.g = 0.01;
  c.kappa_over_lambda = kappa_over_lambda;
  c.initial.factors = {factor("excited"), factor("ground")};
  c.t_max = 50.0;
  return c;
}

struct Preset {
  PresetInfo info;
  ScenarioConfig (*make)();
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {{"jc-coherent-drive",
        "qubit |g> with oscillator |alpha=30>, gt in [0, 0.5] (semiclassical drive; --alpha)"},
       [] {
         ScenarioConfig c = jc("ground", 0.5);
         c.initial.factors[1] = factor("coherent:30");
         return c;
       }},
      {{"jc-excited-vacuum", "qubit |e> with oscillator |0>, gt in [0, pi/2]"},
       [] { return jc("excited", kPi / 2); }},
      {{"jc-superposition-vacuum", "qubit (|g>+|e>)/sqrt2 with oscillator |0>, gt in [0, pi/2]"},
       [] { return jc("superposition", kPi / 2); }},
      {{"jc-mixed-vacuum", "qubit I/2 (thermal at beta = 0) with oscillator |0>, gt in [0, pi/2]"},
       [] { return jc("mixed", kPi / 2); }},
      {{"jc-excited-vacuum-full", "jc-excited-vacuum over the full period gt in [0, pi]"},
       [] { return jc("excited", kPi); }},
      {{"jc-superposition-vacuum-full", "jc-superposition-vacuum over gt in [0, pi]"},
       [] { return jc("superposition", kPi); }},
      {{"jc-mixed-vacuum-full", "jc-mixed-vacuum over gt in [0, pi]"},
       [] { return jc("mixed", kPi); }},
      {{"qq-excited-ground", "qubit A |e> with qubit B |g>, gt in [0, pi/2] (with I_AB)"},
       [] { return qq("excited"); }},
      {{"qq-superposition-ground", "qubit A (|g>+|e>)/sqrt2 with qubit B |g>, gt in [0, pi/2]"},
       [] { return qq("superposition"); }},
      {{"se-lindblad", "qubit |e> decaying at Gamma = 0.01 omega, Gamma t in [0, 5]"},
       [] {
         ScenarioConfig c;
         c.kind = ModelKind::spontaneous_emission;
         c.gamma = 0.01;
         c.initial.factors = {factor("excited"), factor("ground")};
         c.t_max = 5.0;
         return c;
       }},
      {{"se-rc", "qubit |e> with a damped reaction coordinate, kappa = 0.8 lambda, lambda t in [0, 50]"},
       [] { return rc(0.8); }},
      {{"se-rc-strong", "se-rc with kappa = 10 lambda"}, [] { return rc(10.0); }},
      {{"se-rc-weak", "se-rc with kappa = 0.01 lambda"}, [] { return rc(0.01); }},
  };
  return list;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> v;
    for (const auto& p : presets()) v.push_back(p.info);
    return v;
  }();
  return infos;
}

ScenarioConfig preset_config(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.info.name == name) {
      ScenarioConfig c = p.make();
      c.preset = name;
      return c;
    }
  }
  throw UnknownPreset("unknown preset '" + name + "' (see list-presets)");
}

}  // namespace autothermo
