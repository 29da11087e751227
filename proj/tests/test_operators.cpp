#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>

#include "autothermo/errors.hpp"
#include "autothermo/models.hpp"
#include "autothermo/operators.hpp"

using namespace autothermo;

namespace {

std::mt19937_64 rng(12345);

Matrix ginibre(std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = cplx(n(rng), n(rng));
  }
  return m;
}

QuantumState random_density(std::size_t d, Dims dims = {}) {
  const Matrix g = ginibre(d, d);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return QuantumState::density(rho, std::move(dims));
}

QuantumState random_pure(std::size_t d, Dims dims = {}) {
  Vector v = ginibre(d, 1).col(0);
  v.normalize();
  return QuantumState::pure(v, std::move(dims));
}

Operator random_hermitian(std::size_t d) {
  const Matrix x = ginibre(d, d);
  return Operator(Matrix((x + x.adjoint()) / 2.0));
}

QuantumState basis_state(std::size_t d, std::size_t k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return QuantumState::pure(v);
}

const double kLn2 = std::log(2.0);

}  // namespace

TEST_CASE("kron") {
  const Operator i2 = Operator::identity(2);
  const Operator i4 = kron(i2, i2);
  CHECK(i4.dim() == 4);
  CHECK(i4.subsystem_dims() == Dims{2, 2});
  CHECK((i4.matrix() - Matrix::Identity(4, 4)).norm() == 0.0);

  // |e> (x) |g> has joint index 1 * 2 + 0.
  const Operator zi = kron(sigma_z(), i2);
  Vector eg = Vector::Zero(4);
  eg(2) = 1.0;
  CHECK((zi.apply(eg) - eg).norm() == doctest::Approx(0.0));

  const Operator eg_a = kron(sigma_plus(), annihilation(3));
  // <e,0| (|e><g| (x) a) |g,1> = sqrt(1)
  CHECK(eg_a(1 * 3 + 0, 0 * 3 + 1) == cplx(1.0, 0.0));
  CHECK(kron(Operator::identity(2), kron(i2, Operator::identity(3))).subsystem_dims() ==
        Dims{2, 2, 3});
}

TEST_CASE("partial trace examples") {
  const QuantumState a = random_density(2), b = random_density(3);
  const QuantumState ab = kron(a, b);
  CHECK((partial_trace(ab, 0).matrix() - a.matrix()).norm() < 1e-12);
  CHECK((partial_trace(ab, 1).matrix() - b.matrix()).norm() < 1e-12);

  const double gt = 0.37;
  Vector psi = Vector::Zero(4);
  psi(1 * 2 + 0) = std::cos(gt);
  psi(0 * 2 + 1) = cplx(0.0, -std::sin(gt));
  const QuantumState jc = QuantumState::pure(psi, {2, 2});
  const Matrix rho_a = partial_trace(jc, 0).matrix();
  CHECK(rho_a(1, 1).real() == doctest::Approx(std::pow(std::cos(gt), 2)).epsilon(1e-14));
  CHECK(rho_a(0, 0).real() == doctest::Approx(std::pow(std::sin(gt), 2)).epsilon(1e-14));
  CHECK(std::abs(rho_a(0, 1)) < 1e-15);

  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const QuantumState phi = QuantumState::pure(bell, {2, 2});
  for (std::size_t keep : {0u, 1u}) {
    CHECK((partial_trace(phi, keep).matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  }
  CHECK_THROWS_AS(partial_trace(phi, 2), IndexError);
}

TEST_CASE("partial trace preserves trace and hermiticity") {
  for (int n = 0; n < 120; ++n) {
    const std::size_t da = 2 + n % 2, db = 2 + (n / 2) % 2;
    const QuantumState rho = n % 3 == 0 ? random_pure(da * db, {da, db})
                                        : random_density(da * db, {da, db});
    for (std::size_t keep : {0u, 1u}) {
      const QuantumState red = partial_trace(rho, keep);
      CHECK(red.dim() == (keep == 0 ? da : db));
      CHECK(std::abs(red.trace() - 1.0) < 1e-12);
      const Matrix& m = red.matrix();
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("hermitian_eig") {
  const Eigensystem z = hermitian_eig(sigma_z());
  CHECK(z.values == std::vector<double>{-1.0, 1.0});

  const double g = 0.01;
  for (std::size_t n : {0u, 3u, 10u}) {
    Matrix blk(2, 2);
    blk << 0.0, g * std::sqrt(n + 1.0), g * std::sqrt(n + 1.0), 0.0;
    const Eigensystem es = hermitian_eig(Operator(blk));
    CHECK(es.values[0] == doctest::Approx(-g * std::sqrt(n + 1.0)).epsilon(1e-14));
    CHECK(es.values[1] == doctest::Approx(g * std::sqrt(n + 1.0)).epsilon(1e-14));
  }

  const double d[] = {3.0, 1.0, 2.0};
  CHECK(hermitian_eig(Operator::diagonal(d)).values == std::vector<double>{1.0, 2.0, 3.0});

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(Operator(bad)), NotHermitian);
}

TEST_CASE("hermitian_eig reconstructs random matrices up to dim 64") {
  for (std::size_t d : {1u, 2u, 5u, 17u, 33u, 64u}) {
    const Operator h = random_hermitian(d);
    const Eigensystem es = hermitian_eig(h);
    Eigen::VectorXd lam(d);
    for (std::size_t k = 0; k < d; ++k) lam(k) = es.values[k];
    const Matrix rec = es.vectors * lam.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    CHECK((rec - h.matrix()).norm() / h.matrix().norm() < 1e-9);
    CHECK(std::is_sorted(es.values.begin(), es.values.end()));
    CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(d, d)).norm() < 1e-10);
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(random_pure(5)) == 0.0);
  CHECK(von_neumann_entropy(QuantumState::density(Matrix::Identity(2, 2) / 2.0)) ==
        doctest::Approx(kLn2).epsilon(1e-15));
  const double p[] = {0.25, 0.75};
  CHECK(von_neumann_entropy(QuantumState::density(Operator::diagonal(p).matrix())) ==
        doctest::Approx(-(0.25 * std::log(0.25) + 0.75 * std::log(0.75))).epsilon(1e-14));
  CHECK(von_neumann_entropy(QuantumState::density(Operator::diagonal(p).matrix())) ==
        doctest::Approx(0.562335).epsilon(1e-6));
  for (int n = 0; n < 20; ++n) {
    const std::size_t d = 2 + n % 5;
    const double s = von_neumann_entropy(random_density(d));
    CHECK(s >= 0.0);
    CHECK(s <= std::log(static_cast<double>(d)) + 1e-12);
  }
}

TEST_CASE("spectrum clipping policy") {
  CHECK(clip_spectrum({-5e-11, 0.5, 0.5})[0] == 0.0);
  CHECK_THROWS_AS(clip_spectrum({-1e-8, 0.5, 0.5}), NonPhysicalState);
}

TEST_CASE("relative entropy") {
  const QuantumState rho = random_density(3);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-12);
  const QuantumState e = basis_state(2, 1).as_density();
  const QuantumState g = basis_state(2, 0).as_density();
  const QuantumState mixed = QuantumState::density(Matrix::Identity(2, 2) / 2.0);
  CHECK(relative_entropy(e, mixed) == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(relative_entropy(e, g) == kInfinity);
  CHECK_THROWS_AS(relative_entropy(rho, mixed), DimensionMismatch);

  for (int n = 0; n < 150; ++n) {
    const std::size_t d = 2 + n % 4;
    const QuantumState a = n % 2 ? random_pure(d) : random_density(d);
    CHECK(relative_entropy(a, random_density(d)) >= -1e-12);
  }
}

TEST_CASE("commuting relative entropy matches the general form") {
  const double p[] = {0.6, 0.3, 0.1}, q[] = {0.2, 0.5, 0.3};
  const double direct = relative_entropy_commuting(p, q);
  const double general = relative_entropy(QuantumState::density(Operator::diagonal(p).matrix()),
                                          QuantumState::density(Operator::diagonal(q).matrix()));
  CHECK(direct == doctest::Approx(general).epsilon(1e-13));
  const double r[] = {1.0, 0.0, 0.0};
  CHECK(relative_entropy_commuting(p, r) == kInfinity);
  CHECK(relative_entropy_commuting(r, p) == doctest::Approx(-std::log(0.6)).epsilon(1e-14));
}

TEST_CASE("mutual information") {
  for (int n = 0; n < 100; ++n) {
    const std::size_t da = 2 + n % 3, db = 2 + (n / 3) % 3;
    const QuantumState prod = kron(random_density(da), random_density(db));
    CHECK(std::abs(mutual_information(prod)) < 1e-9);
  }
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(mutual_information(QuantumState::pure(bell, {2, 2})) ==
        doctest::Approx(2 * kLn2).epsilon(1e-14));

  const double gt = std::numbers::pi / 4;
  Vector psi = Vector::Zero(2 * 3);
  psi(1 * 3 + 0) = std::cos(gt);
  psi(0 * 3 + 1) = cplx(0.0, -std::sin(gt));
  CHECK(mutual_information(QuantumState::pure(psi, {2, 3})) ==
        doctest::Approx(2 * kLn2).epsilon(1e-13));
}

TEST_CASE("Schmidt symmetry of pure bipartite states") {
  for (int n = 0; n < 100; ++n) {
    const std::size_t da = 2 + n % 3, db = 2 + (n / 3) % 4;
    const QuantumState psi = random_pure(da * db, {da, db});
    const double sa = von_neumann_entropy(partial_trace(psi, 0));
    const double sb = von_neumann_entropy(partial_trace(psi, 1));
    CHECK(std::abs(sa - sb) < 1e-9);
    CHECK(std::abs(mutual_information(psi) - 2 * sa) < 1e-9);
    // Fast path against the explicit reduced matrix.
    const auto fast = reduced_spectrum(psi, 1);
    const auto slow = spectrum(partial_trace(psi, 1));
    for (std::size_t k = 0; k < db; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-12);
  }
}

TEST_CASE("state validation") {
  Vector v = Vector::Zero(2);
  v(0) = 1.1;
  CHECK_THROWS_AS(QuantumState::pure(v), InvalidState);
  Matrix m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(QuantumState::density(m), InvalidState);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(QuantumState::density(m), InvalidState);
  CHECK_THROWS_AS(Operator(Matrix::Identity(4, 4), Dims{3, 2}), DimensionMismatch);
}

TEST_CASE("local and product expectations agree with dense forms") {
  for (int n = 0; n < 20; ++n) {
    const QuantumState psi = n % 2 ? random_pure(6, {2, 3}) : random_density(6, {2, 3});
    const Operator x = random_hermitian(2), y = random_hermitian(3);
    const cplx dense = psi.expectation(kron(x, y));
    CHECK(std::abs(product_expectation(psi, x, y) - dense) < 1e-12);
    CHECK(std::abs(local_expectation(psi, 1, y) - psi.expectation(kron(Operator::identity(2), y))) <
          1e-12);
  }
}
