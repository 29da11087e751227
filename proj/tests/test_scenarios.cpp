#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "autothermo/errors.hpp"
#include "autothermo/scenarios.hpp"

using namespace autothermo;

namespace {

constexpr double kPi = std::numbers::pi;

std::string csv_text(const ScenarioResult& r) {
  std::ostringstream os;
  write_csv(r, os);
  return os.str();
}

std::string header_line(const std::string& csv) {
  std::istringstream is(csv);
  std::string meta, header;
  std::getline(is, meta);
  std::getline(is, header);
  return header;
}

std::string golden(const std::string& name) {
  std::ifstream f(std::string(AUTOTHERMO_GOLDEN_DIR) + "/" + name);
  REQUIRE(f.good());
  std::string line;
  std::getline(f, line);
  return line;
}

ScenarioConfig small(const std::string& preset, std::size_t samples = 40) {
  ScenarioConfig c = preset_config(preset);
  c.samples = samples;
  return c;
}

std::size_t column(const ScenarioResult& r, const std::string& name) {
  const auto cols = csv_columns(r);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

std::vector<std::string> row(const std::string& csv, std::size_t index) {
  std::istringstream is(csv);
  std::string line;
  for (std::size_t i = 0; i < index + 3; ++i) std::getline(is, line);
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("preset catalog") {
  std::set<std::string> names;
  for (const auto& p : preset_catalog()) names.insert(p.name);
  for (const char* n : {"jc-coherent-drive", "jc-excited-vacuum", "jc-superposition-vacuum",
                        "jc-mixed-vacuum", "qq-excited-ground", "qq-superposition-ground",
                        "se-lindblad", "se-rc", "se-rc-strong", "se-rc-weak",
                        "jc-excited-vacuum-full", "jc-superposition-vacuum-full",
                        "jc-mixed-vacuum-full"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK_THROWS_AS(preset_config("fig-42"), UnknownPreset);
}

TEST_CASE("preset defaults") {
  const ScenarioConfig ev = preset_config("jc-excited-vacuum");
  CHECK(ev.g == 0.01);
  CHECK(ev.omega_a == ev.omega_b);
  CHECK(ev.t_max == doctest::Approx(kPi / 2));
  CHECK(ev.time_label() == "gt");

  const ScenarioConfig cd = preset_config("jc-coherent-drive");
  CHECK(describe(cd.initial.factors[1]) == "coherent:30");
  CHECK(cd.t_max == 0.5);
  CHECK(cd.model_spec().subsystems[1].truncation >= 1201);

  const ScenarioConfig rc = preset_config("se-rc");
  CHECK(rc.kappa_over_lambda == 0.8);
  CHECK(rc.g == 0.01);
  CHECK(rc.time_label() == "lambda t");
  CHECK(preset_config("se-rc-strong").kappa_over_lambda == 10.0);
  CHECK(preset_config("se-rc-weak").kappa_over_lambda == 0.01);
  CHECK(preset_config("se-lindblad").time_label() == "Gamma t");
}

TEST_CASE("config parsing") {
  const ScenarioConfig a = parse_config("preset=jc-excited-vacuum\n");
  const ScenarioConfig b = preset_config("jc-excited-vacuum");
  CHECK(a.preset == b.preset);
  CHECK(a.t_max == b.t_max);
  CHECK(a.samples == b.samples);
  CHECK(a.g == b.g);

  const ScenarioConfig strong = parse_config("preset=se-rc\nmodel.kappa_over_lambda=10");
  CHECK(strong.kappa_over_lambda == 10.0);
  CHECK(strong.kind == ModelKind::reaction_coordinate);

  // User keys win regardless of where the preset line sits.
  const ScenarioConfig late = parse_config("samples=77\n# comment\npreset=se-lindblad\n");
  CHECK(late.samples == 77);
  CHECK(late.kind == ModelKind::spontaneous_emission);

  const ScenarioConfig c = parse_config(
      "model.kind = qq   # two qubits\ninitial.A = superposition\ninitial.B = ground\n"
      "t_max = 1.2\nsamples = 50\ndt = 0.05\noutput.groups = autonomous,info\n");
  CHECK(c.kind == ModelKind::qubit_qubit);
  CHECK(describe(c.initial.factors[0]) == "superposition");
  CHECK(c.dt == 0.05);
  CHECK(c.wants(ColumnGroup::info));
  CHECK(!c.wants(ColumnGroup::mca));
}

TEST_CASE("config errors carry line numbers") {
  try {
    parse_config("preset=jc-excited-vacuum\nmodel.g=abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("model.colour=blue"), UnknownKey);
  try {
    parse_config("\n\nmodel.colour=blue");
  } catch (const UnknownKey& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("no equals sign"), ParseError);
  CHECK_THROWS_AS(parse_config("samples=10\nsamples=20"), ParseError);
  CHECK_THROWS_AS(parse_config("samples=1"), ParseError);
  CHECK_THROWS_AS(parse_config("dt=-1"), ParseError);
  CHECK_THROWS_AS(parse_config("preset=nope"), UnknownPreset);
  CHECK(config_help().find("model.kappa_over_lambda") != std::string::npos);
}

TEST_CASE("csv schema is pinned") {
  const ScenarioResult jc = run_scenario(small("jc-excited-vacuum"));
  CHECK(header_line(csv_text(jc)) == golden("jc-excited-vacuum.header"));
  const ScenarioResult se = run_scenario(small("se-lindblad"));
  CHECK(header_line(csv_text(se)) == golden("se-lindblad.header"));
  const std::string meta = csv_metadata(se);
  CHECK(meta.rfind("# preset=se-lindblad", 0) == 0);
  CHECK(meta.find("units: energy hbar*omega, time Gamma t") != std::string::npos);
}

TEST_CASE("csv rows") {
  const ScenarioResult r = run_scenario(small("jc-excited-vacuum", 400));
  const std::string csv = csv_text(r);
  const auto first = row(csv, 0);
  for (const char* name : {"Q_A", "W_A", "Q_B", "W_B", "W_st_A", "Q_st_A"}) {
    CHECK(first[column(r, name)] == "0");
  }
  CHECK(row(csv, 200)[column(r, "W_A")] == "1");
  CHECK(row(csv, 0)[column(r, "beta_A")] == "inf");
  CHECK(std::stod(row(csv, 200)[column(r, "t")]) == doctest::Approx(kPi / 4).epsilon(1e-12));
}

TEST_CASE("output is deterministic") {
  for (const char* p : {"jc-mixed-vacuum", "se-rc"}) {
    const std::string a = csv_text(run_scenario(small(p, 30)));
    const std::string b = csv_text(run_scenario(small(p, 30)));
    CHECK(a == b);
  }
}

TEST_CASE("qubit energy reference does not change heat or work") {
  ScenarioConfig a = small("jc-excited-vacuum", 60);
  ScenarioConfig b = a;
  b.qubit_energy = QubitEnergy::excited_only;
  const auto ra = run_scenario(a), rb = run_scenario(b);
  const auto& x = ra.table.sub[0];
  const auto& y = rb.table.sub[0];
  for (std::size_t i = 0; i < x.u.size(); ++i) {
    CHECK(std::abs(x.q[i] - y.q[i]) < 1e-12);
    CHECK(std::abs(x.w[i] - y.w[i]) < 1e-12);
    CHECK(std::abs(x.u[i] - y.u[i] + 0.5) < 1e-12);
  }
}

TEST_CASE("format and io") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(kInfinity) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  const ScenarioResult r = run_scenario(small("se-lindblad", 10));
  CHECK_THROWS_AS(emit_csv(r, "/nonexistent-dir/x.csv"), IoError);
  const std::string gp = gnuplot_script(r, "out.csv");
  CHECK(gp.find("'out.csv' using 1:") != std::string::npos);
}

TEST_CASE("explicit propagation choices") {
  ScenarioConfig c = small("jc-excited-vacuum", 20);
  c.propagation = PropagationChoice::unitary;
  const auto u = run_scenario(c);
  c.propagation = PropagationChoice::blocks;
  const auto b = run_scenario(c);
  for (std::size_t i = 0; i < u.table.times.size(); ++i) {
    CHECK(std::abs(u.table.sub[0].w[i] - b.table.sub[0].w[i]) < 1e-10);
  }
  c.propagation = PropagationChoice::mean_field;
  const auto mf = run_scenario(c);
  CHECK(mf.trajectory.kind == PropagationKind::mean_field);
  CHECK(csv_metadata(mf).find("propagation=mean-field") != std::string::npos);
}
