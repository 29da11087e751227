#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "autothermo/dynamics.hpp"
#include "autothermo/errors.hpp"
#include "autothermo/models.hpp"
#include "autothermo/thermo.hpp"

using namespace autothermo;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLn2 = std::log(2.0);

QuantumState diag_state(std::vector<double> p) {
  return QuantumState::density(Operator::diagonal(p).matrix());
}

double binary_entropy(double p) { return -(p * std::log(p) + (1 - p) * std::log(1 - p)); }

std::shared_ptr<const Model> jc(std::size_t levels, double g = 0.01) {
  ModelSpec s;
  s.kind = ModelKind::jc;
  s.subsystems = {{"A", SubsystemKind::qubit, 1.0, 2}, {"B", SubsystemKind::oscillator, 1.0, levels}};
  s.coupling = g;
  return std::make_shared<const Model>(build_model(s));
}

Trajectory run(const std::shared_ptr<const Model>& m, const char* a, const char* b, double t_max,
               std::size_t samples) {
  const QuantumState s0 = make_initial_state({{parse_factor(a), parse_factor(b)}}, *m);
  Trajectory tr = propagate(m, s0, uniform_grid(t_max, samples), 0.01);
  return tr;
}

// Entropy of the Gibbs state of `e` at beta, written out independently.
double gibbs_entropy(const std::vector<double>& e, double beta) {
  double z = 0.0, mean = 0.0;
  for (double x : e) z += std::exp(-beta * x);
  for (double x : e) mean += x * std::exp(-beta * x) / z;
  return std::log(z) + beta * mean;
}

}  // namespace

TEST_CASE("effective temperature examples") {
  const Operator hz = qubit_hamiltonian(1.0, QubitEnergy::half_sigma_z);
  const auto half = effective_temperature(kLn2, hz);
  CHECK(half.beta == 0.0);
  CHECK((half.gibbs(EnergyBasis::of(hz)).matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-15);

  const Operator he = qubit_hamiltonian(1.0, QubitEnergy::excited_only);
  const auto ts = effective_temperature(binary_entropy(0.2), he);
  CHECK(ts.beta == doctest::Approx(std::log(4.0)).epsilon(1e-9));
  CHECK(std::abs(ts.entropy() - binary_entropy(0.2)) < 1e-10);
  const double p[] = {0.8, 0.2};
  CHECK(thermal_from_spectrum(p, EnergyBasis::of(he)).beta ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));

  const auto pure = effective_temperature(0.0, he);
  CHECK(pure.infinite());
  CHECK(pure.populations[0] == 1.0);
  CHECK(thermal_energy(pure, he) == 0.0);

  CHECK_THROWS_AS(effective_temperature(0.8, he), EntropyOutOfRange);
  CHECK_THROWS_AS(effective_temperature(-0.1, he), EntropyOutOfRange);
  const double degenerate[] = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(effective_temperature(0.3, Operator::diagonal(degenerate)), DegenerateGround);
  CHECK_NOTHROW(effective_temperature(0.9, Operator::diagonal(degenerate)));
}

TEST_CASE("effective temperature matches entropy on a random oscillator ladder") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e;
  for (int k = 0; k < 12; ++k) e.push_back(0.7 * k);
  const Operator h = Operator::diagonal(e);
  for (int n = 0; n < 50; ++n) {
    const double s = u(rng) * std::log(12.0);
    const auto ts = effective_temperature(s, h);
    CHECK(std::abs(gibbs_entropy(e, ts.beta) - s) < 1e-9);
    for (std::size_t k = 0; k + 1 < ts.populations.size(); ++k) {
      CHECK(ts.populations[k] >= ts.populations[k + 1]);
    }
  }
}

TEST_CASE("thermal energy examples") {
  const Operator he = qubit_hamiltonian(1.0, QubitEnergy::excited_only);
  EffectiveThermalState hot;
  hot.beta = 0.0;
  hot.populations = {0.5, 0.5};
  CHECK(thermal_energy(hot, he) == 0.5);
  const double p[] = {0.8, 0.2};
  CHECK(thermal_energy(thermal_from_spectrum(p, EnergyBasis::of(he)), he) ==
        doctest::Approx(0.2).epsilon(1e-15));

  const std::vector<double> e = {0.0, 1.0, 2.0};
  const double z = 1 + std::exp(-1.0) + std::exp(-2.0);
  const auto ts = effective_temperature(gibbs_entropy(e, 1.0), Operator::diagonal(e));
  CHECK(ts.beta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(thermal_energy(ts, Operator::diagonal(e)) ==
        doctest::Approx((std::exp(-1.0) + 2 * std::exp(-2.0)) / z).epsilon(1e-9));
  CHECK_THROWS_AS(thermal_energy(ts, he), DimensionMismatch);
}

TEST_CASE("passive states and ergotropy") {
  const Operator he = qubit_hamiltonian(1.0, QubitEnergy::excited_only);
  const QuantumState mixed = diag_state({0.5, 0.5});
  CHECK((passive_state(mixed, he).matrix() - mixed.matrix()).norm() < 1e-15);
  const QuantumState e = diag_state({0.0, 1.0});
  CHECK(std::abs(passive_state(e, he).matrix()(0, 0) - 1.0) < 1e-15);
  const QuantumState inv = diag_state({0.3, 0.7});
  const Matrix pi = passive_state(inv, he).matrix();
  CHECK(pi(0, 0).real() == doctest::Approx(0.7));
  CHECK(pi(1, 1).real() == doctest::Approx(0.3));
  CHECK(ergotropy(e, he) == doctest::Approx(1.0));
  CHECK(ergotropy(diag_state({0.2, 0.8}), he) == doctest::Approx(0.6).epsilon(1e-14));
  const QuantumState th = effective_temperature(0.4, he).gibbs(EnergyBasis::of(he));
  CHECK(std::abs(ergotropy(th, he)) < 1e-15);
}

TEST_CASE("exergy decomposition") {
  const std::vector<double> e = {0.0, 1.0, 2.0};
  const Operator h = Operator::diagonal(e);
  const QuantumState th = effective_temperature(0.7, h).gibbs(EnergyBasis::of(h));
  const ExergyParts zero = exergy(th, h);
  CHECK(std::abs(zero.exergy) < 1e-10);
  CHECK(std::abs(zero.ergotropy) < 1e-12);
  CHECK(std::abs(zero.nonunitary) < 1e-10);

  // Passive but not thermal: diag(0.5, 0.5, 0) has S = ln 2 on three levels.
  const ExergyParts pt = exergy(diag_state({0.5, 0.5, 0.0}), h);
  CHECK(std::abs(pt.ergotropy) < 1e-15);
  CHECK(pt.exergy > 0.0);
  double lo = 0.0, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gibbs_entropy(e, mid) > kLn2 ? lo : hi) = mid;
  }
  double z = 0.0, u_th = 0.0;
  for (double x : e) z += std::exp(-lo * x);
  for (double x : e) u_th += x * std::exp(-lo * x) / z;
  CHECK(pt.exergy == doctest::Approx(0.5 - u_th).epsilon(1e-9));
  CHECK(pt.beta == doctest::Approx(lo).epsilon(1e-9));

  // Qubits: the non-unitary term vanishes identically.
  const Operator hq = qubit_hamiltonian(1.0, QubitEnergy::half_sigma_z);
  Matrix rho(2, 2);
  rho << 0.3, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.7;
  const ExergyParts q = exergy(QuantumState::density(rho), hq);
  CHECK(q.nonunitary == 0.0);
  CHECK(q.exergy == q.ergotropy);
}

TEST_CASE("non-unitary term equals D[passive || thermal] / beta") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = 3 + k % 4;
    Matrix g(d, d), x(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        g(i, j) = cplx(n(rng), n(rng));
        x(i, j) = cplx(n(rng), n(rng));
      }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    const Operator h(Matrix((x + x.adjoint()) / 2.0));
    const QuantumState state = QuantumState::density(rho);
    const ExergyParts parts = exergy(state, h);
    if (!(parts.beta > 1e-2) || !std::isfinite(parts.beta)) continue;
    const EnergyBasis basis = EnergyBasis::of(h);
    const auto ts = thermal_from_spectrum(spectrum(state), basis);
    const double rel = relative_entropy(passive_state(state, h), ts.gibbs(basis));
    CHECK(std::abs(rel / parts.beta - parts.nonunitary) < 1e-9);
  }
}

TEST_CASE("jc excited-vacuum heat and work oracles") {
  const auto m = jc(3);
  const Trajectory tr = run(m, "excited", "ground", kPi / 2 / 0.01, 200);
  const auto q = heat_series(tr, 0);
  const auto w = work_series(tr, 0);
  for (std::size_t i = 0; i <= 100; ++i) {
    const double gt = 0.01 * tr.times[i];
    CHECK(std::abs(q[i] + std::pow(std::sin(gt), 2)) < 1e-12);
    CHECK(std::abs(w[i] - 2 * std::pow(std::sin(gt), 2)) < 1e-12);
  }
  CHECK(w[100] == doctest::Approx(1.0).epsilon(1e-12));
  const ThermoTable table = analyze(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(std::abs(table.interaction_energy[i]) < 1e-9);
    for (const auto& s : table.sub) {
      // Work from exergy: W = -dXi.
      CHECK(std::abs(s.w[i] + (s.exergy[i] - s.exergy[0])) < 1e-9);
      CHECK(std::abs(s.u[i] - s.u[0] + s.q[i] + s.w[i]) < 1e-12);
    }
  }
}

TEST_CASE("entropy production forms agree for thermal initial states") {
  const auto m = jc(14, 0.05);
  const Trajectory tr = run(m, "gibbs:0.5", "gibbs:1.3", 100.0, 60);
  for (std::size_t j : {0u, 1u}) {
    const EntropyProduction ep = entropy_production(tr, j);
    CHECK(ep.lhs[0] == 0.0);
    CHECK(std::abs(ep.rhs[0]) < 1e-14);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      CHECK(ep.rhs[i] >= -1e-9);
      CHECK(std::abs(ep.lhs[i] - ep.rhs[i]) < 1e-7);
    }
  }
  // Mixed qubit with the vacuum: only the lhs of B has a finite partner temperature.
  const Trajectory mv = run(jc(3), "mixed", "ground", 150.0, 40);
  const EntropyProduction ep = entropy_production(mv, 1);
  std::size_t finite = 0;
  for (std::size_t i = 0; i < mv.size(); ++i) {
    if (std::isinf(ep.rhs[i])) continue;
    ++finite;
    CHECK(std::abs(ep.lhs[i] - ep.rhs[i]) < 1e-7);
  }
  CHECK(finite == mv.size());
}

TEST_CASE("uncoupled evolution produces nothing") {
  const auto m = jc(6, 0.0);
  const Trajectory tr = run(m, "gibbs:0.4", "gibbs:0.9", 50.0, 30);
  const ThermoTable t = analyze(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(std::abs(t.mutual_information[i]) < 1e-12);
    for (const auto& s : t.sub) {
      CHECK(std::abs(s.q[i]) < 1e-12);
      CHECK(std::abs(s.w[i]) < 1e-12);
      CHECK(std::abs(s.sigma_rhs[i]) < 1e-12);
      CHECK(std::abs(s.residual[i]) < 1e-10);
    }
    for (const auto& c : t.comparators) {
      CHECK(c.w_mca_rate[i] == 0.0);
      CHECK(c.q_mca_rate[i] == 0.0);
    }
  }
}

TEST_CASE("entropy-heat residual is second order") {
  const auto m = jc(3);
  std::vector<double> worst;
  for (std::size_t n : {400u, 800u}) {
    const Trajectory tr = run(m, "excited", "ground", kPi / 2 / 0.01, n);
    const auto r = entropy_heat_rate_residual(tr, 0);
    double mx = 0.0;
    for (std::size_t i = 0; i < tr.size(); i += n / 400) {
      const double gt = 0.01 * tr.times[i];
      if (std::abs(gt - kPi / 4) < 0.1 || gt < 0.1 || gt > kPi / 2 - 0.1 || std::isnan(r[i])) continue;
      mx = std::max(mx, std::abs(r[i]));
    }
    worst.push_back(mx);
  }
  CHECK(worst[1] < 1e-4);
  CHECK(worst[0] / worst[1] > 3.5);
}

TEST_CASE("standard and MCA comparators") {
  const auto m = jc(3);
  const Trajectory tr = run(m, "excited", "ground", kPi / 2 / 0.01, 400);
  const auto st = standard_work_heat(tr);
  const auto mca = mca_rates(tr);
  const ThermoTable table = analyze(tr);
  const auto du = derivative(tr.times, table.sub[0].u);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(std::abs(st[0].u_st[i] - st[0].u_st[0] - st[0].w_st[i] - st[0].q_st[i]) < 1e-12);
    CHECK(std::abs(mca[0].w_mca_rate[i] + mca[0].q_mca_rate[i] - mca[0].u_rate_exact[i]) < 1e-12);
    CHECK(std::abs(mca[0].u_rate_exact[i] - du[i]) < 1e-6);
  }
  // gt = pi/8 sits at row 100 on this grid; dU_A/dt = -g sin(2gt) there.
  CHECK(std::abs(mca[0].w_mca_rate[100] + mca[0].q_mca_rate[100] + 0.01 * std::sin(kPi / 4)) < 1e-12);

  // An eigenstate of the total Hamiltonian is static.
  const Trajectory still = run(m, "ground", "ground", 100.0, 20);
  for (const auto& c : standard_work_heat(still)) {
    for (std::size_t i = 0; i < still.size(); ++i) {
      CHECK(std::abs(c.w_st[i]) < 1e-14);
      CHECK(std::abs(c.q_st[i]) < 1e-14);
    }
  }
}

TEST_CASE("mean-field trajectories carry no standard heat and no correlation flow") {
  const FactorSpec coh = parse_factor("coherent:2");
  const auto m = jc(default_truncation(coh, 1.0, 1));
  const QuantumState a0 = make_factor_state(parse_factor("ground"), {"A"}, m->local_hamiltonian(0));
  const QuantumState b0 = make_factor_state(
      coh, {"B", SubsystemKind::oscillator, 1.0, m->dims()[1]}, m->local_hamiltonian(1));
  // Standard heat vanishes up to the O(dt^2) quadrature error.
  double worst[2] = {0.0, 0.0};
  for (std::size_t pass = 0; pass < 2; ++pass) {
    const auto mf = propagate_mean_field(m, a0, b0, uniform_grid(50.0, 2000 << pass), 0.01);
    const ThermoTable t = analyze(mf.product);
    const auto du = derivative(t.times, t.sub[0].u);
    for (std::size_t i = 0; i < t.times.size(); ++i) {
      worst[pass] = std::max(worst[pass], std::abs(t.comparators[0].q_st[i]));
      CHECK(std::abs(t.comparators[0].q_mca_rate[i]) < 1e-12);
      CHECK(std::abs(t.comparators[0].w_mca_rate[i] - du[i]) < 1e-6);
      CHECK(std::abs(t.sub[0].q[i]) < 1e-12);
    }
  }
  CHECK(worst[1] < 3e-5);
  CHECK(worst[0] / worst[1] > 3.5);
}

TEST_CASE("nonuniform derivative is exact on quadratics") {
  const std::vector<double> t = {0.0, 0.3, 0.5, 1.2, 1.3};
  std::vector<double> y;
  for (double x : t) y.push_back(2 * x * x - x + 4);
  const auto d = derivative(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(4 * t[i] - 1).epsilon(1e-12));
}
