#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "autothermo/dynamics.hpp"
#include "autothermo/errors.hpp"
#include "autothermo/models.hpp"

using namespace autothermo;

namespace {

SubsystemSpec qubit(const char* label, double w = 1.0) {
  return {label, SubsystemKind::qubit, w, 2};
}

SubsystemSpec oscillator(std::size_t levels, double w = 1.0) {
  return {"B", SubsystemKind::oscillator, w, levels};
}

ModelSpec jc_spec(std::size_t levels, double g = 0.01) {
  ModelSpec s;
  s.kind = ModelKind::jc;
  s.subsystems = {qubit("A"), oscillator(levels)};
  s.coupling = g;
  return s;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double commutator_defect(const Model& m) {
  return max_abs(commutator(m.total_hamiltonian(), m.excitation_number()).matrix());
}

}  // namespace

TEST_CASE("jc matrix elements and symmetries") {
  const double g = 0.01;
  const Model m = build_jc(jc_spec(6, g));
  const Operator v = m.interaction();
  for (std::size_t n = 0; n + 1 < 6; ++n) {
    // <e,n| V |g,n+1>
    CHECK(std::abs(v(1 * 6 + n, 0 * 6 + n + 1) - g * std::sqrt(n + 1.0)) < 1e-15);
  }
  CHECK(m.total_hamiltonian().hermiticity_defect() <= 1e-12);
  CHECK(commutator_defect(m) == 0.0);
  CHECK(m.local_hamiltonian(0)(1, 1).real() == doctest::Approx(0.5));
  CHECK(m.local_hamiltonian(0)(0, 0).real() == doctest::Approx(-0.5));
  CHECK(m.local_hamiltonian(1)(3, 3).real() == doctest::Approx(3.0));

  ModelSpec bad = jc_spec(4);
  bad.subsystems[1].kind = SubsystemKind::qubit;
  bad.subsystems[1].truncation = 2;
  CHECK_THROWS_AS(build_jc(bad), BadSpec);
}

TEST_CASE("resonant jc keeps <V> at zero from |e,0>") {
  auto m = std::make_shared<const Model>(build_jc(jc_spec(3)));
  InitialStateSpec init{{parse_factor("excited"), parse_factor("ground")}};
  const auto times = uniform_grid(100.0, 50);
  const Trajectory traj = propagate_unitary(m->total_hamiltonian(), make_initial_state(init, *m), times);
  const Operator v = m->interaction();
  for (const auto& s : traj.states) CHECK(std::abs(s.expectation(v).real()) < 1e-12);
}

TEST_CASE("qubit-qubit model") {
  ModelSpec s;
  s.kind = ModelKind::qubit_qubit;
  s.subsystems = {qubit("A"), qubit("B")};
  s.coupling = 0.01;
  const Model m = build_qubit_qubit(s);
  const Operator h = m.total_hamiltonian();
  // <e,g| V |g,e>: indices 1*2+0 and 0*2+1.
  CHECK(m.interaction()(2, 1) == cplx(0.01, 0.0));
  CHECK(h(0, 0) == cplx(0.0, 0.0));
  CHECK(commutator_defect(m) == 0.0);
  Matrix blk(2, 2);
  blk << h(1, 1), h(1, 2), h(2, 1), h(2, 2);
  const auto es = hermitian_eig(Operator(blk));
  CHECK(es.values[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(1.0 + 0.01).epsilon(1e-14));
}

TEST_CASE("spontaneous emission model") {
  ModelSpec s;
  s.kind = ModelKind::spontaneous_emission;
  s.subsystems = {qubit("A")};
  s.dissipator = Dissipator{0, 0.01};
  const Model m = build_spontaneous_emission(s);
  REQUIRE(m.jumps().size() == 1);
  CHECK(m.jumps()[0].rate == 0.01);
  CHECK(m.jumps()[0].op(0, 1) == cplx(1.0, 0.0));
  CHECK(m.jumps()[0].op(1, 0) == cplx(0.0, 0.0));
  CHECK(m.local_hamiltonian(0)(1, 1).real() == 0.5);
  CHECK(!m.closed());
  s.dissipator = Dissipator{0, 0.0};
  CHECK(build_spontaneous_emission(s).closed());
}

TEST_CASE("reaction-coordinate model reduces to jc without damping") {
  ModelSpec s = jc_spec(5, 0.02);
  s.kind = ModelKind::reaction_coordinate;
  s.dissipator = Dissipator{1, 0.016};
  const Model rc = build_rc(s);
  REQUIRE(rc.jumps().size() == 1);
  CHECK(rc.jumps()[0].subsystem == 1);
  CHECK(rc.jumps()[0].rate == doctest::Approx(0.016));
  CHECK(commutator_defect(rc) == 0.0);
  s.dissipator = Dissipator{1, 0.0};
  const auto e_rc = hermitian_eig(build_rc(s).total_hamiltonian()).values;
  const auto e_jc = hermitian_eig(build_jc(jc_spec(5, 0.02)).total_hamiltonian()).values;
  for (std::size_t k = 0; k < e_jc.size(); ++k) CHECK(std::abs(e_rc[k] - e_jc[k]) < 1e-14);
}

TEST_CASE("coherent states") {
  const QuantumState vac = make_factor_state(parse_factor("coherent:0"), oscillator(4),
                                             number_operator(4));
  CHECK(std::abs(vac.vector()(0) - 1.0) < 1e-15);

  const FactorSpec f = parse_factor("coherent:30");
  const std::size_t levels = default_truncation(f, 1.0, 1);
  CHECK(levels >= 1201);
  const QuantumState psi = make_factor_state(f, oscillator(levels), number_operator(levels));
  const double n = psi.expectation(number_operator(levels)).real();
  CHECK(std::abs(n - 900.0) / 900.0 < 1e-6);
  CHECK(std::abs(psi.vector().squaredNorm() - 1.0) < 1e-10);
  CHECK(coherent_tail(30.0, levels) < 1e-12);
  CHECK_THROWS_AS(make_factor_state(f, oscillator(950), number_operator(950)), TruncationTooSmall);

  const Vector c = coherent_amplitudes(cplx(0.0, 2.0), 40);
  CHECK(std::abs(c(3) - std::exp(-2.0) * std::pow(cplx(0.0, 2.0), 3) / std::sqrt(6.0)) < 1e-14);
}

TEST_CASE("gibbs and mixed factors") {
  const Operator hq = qubit_hamiltonian(1.0, QubitEnergy::half_sigma_z);
  const QuantumState mixed = make_factor_state(parse_factor("gibbs:0"), qubit("A"), hq);
  CHECK((mixed.density_matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  const QuantumState half = make_factor_state(parse_factor("mixed"), qubit("A"), hq);
  CHECK((half.density_matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-15);

  const QuantumState th = make_factor_state(parse_factor("gibbs:0.7"), oscillator(8), number_operator(8));
  const Matrix rho = th.density_matrix();
  for (int k = 0; k + 1 < 8; ++k) {
    CHECK(rho(k, k).real() > rho(k + 1, k + 1).real());
    CHECK(rho(k + 1, k + 1).real() / rho(k, k).real() == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  }
}

TEST_CASE("initial states") {
  auto m = build_jc(jc_spec(3));
  const InitialStateSpec pure{{parse_factor("superposition"), parse_factor("fock:1")}};
  const QuantumState s = make_initial_state(pure, m);
  CHECK(s.is_pure());
  CHECK(s.dim() == 6);
  CHECK(std::abs(s.vector()(0 * 3 + 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.vector()(1 * 3 + 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  const InitialStateSpec mixed{{parse_factor("mixed"), parse_factor("ground")}};
  CHECK(!make_initial_state(mixed, m).is_pure());
  CHECK_THROWS_AS(parse_factor("coherent:x"), BadSpec);
  CHECK_THROWS_AS(parse_factor("warm"), BadSpec);
  for (const char* text : {"ground", "excited", "superposition", "mixed", "fock:3", "gibbs:0.5"}) {
    CHECK(describe(parse_factor(text)) == text);
  }
}

TEST_CASE("default truncation follows excitation conservation") {
  CHECK(default_truncation(parse_factor("ground"), 1.0, 1) == 3);
  CHECK(default_truncation(parse_factor("fock:2"), 1.0, 1) == 5);
}

TEST_CASE("qubit energy conventions differ by a constant shift") {
  const Operator a = qubit_hamiltonian(1.3, QubitEnergy::half_sigma_z);
  const Operator b = qubit_hamiltonian(1.3, QubitEnergy::excited_only);
  const Matrix d = a.matrix() - b.matrix();
  CHECK(std::abs(d(0, 0) - d(1, 1)) < 1e-15);
  CHECK(std::abs(d(0, 0).real() + 0.65) < 1e-15);
}
