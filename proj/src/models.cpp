#include "autothermo/models.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "autothermo/errors.hpp"

namespace autothermo {
namespace {

constexpr double kCoherentTail = 1e-12;

Operator single(std::size_t dim, std::size_t row, std::size_t col, cplx value = 1.0) {
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = value;
  return Operator(std::move(m));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw BadSpec(what);
}

void check_subsystem(const SubsystemSpec& s) {
  require(s.frequency > 0.0, "subsystem " + s.label + ": frequency must be positive");
  require(s.truncation >= 2, "subsystem " + s.label + ": truncation must be at least 2");
  if (s.kind == SubsystemKind::qubit) {
    require(s.truncation == 2, "subsystem " + s.label + ": a qubit has exactly 2 levels");
  }
}

void check_kinds(const ModelSpec& spec, std::initializer_list<SubsystemKind> kinds,
                 const char* model) {
  require(spec.subsystems.size() == kinds.size(),
          std::string(model) + ": expected " + std::to_string(kinds.size()) + " subsystem(s)");
  std::size_t i = 0;
  for (auto k : kinds) {
    const auto& s = spec.subsystems[i++];
    require(s.kind == k, std::string(model) + ": subsystem " + s.label + " has the wrong kind");
    check_subsystem(s);
  }
}

Operator oscillator_hamiltonian(const SubsystemSpec& s) {
  return s.frequency * number_operator(s.truncation);
}

double parse_number(const std::string& text, const std::string& context) {
  const char* begin = text.data();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw BadSpec("malformed number '" + text + "' in " + context);
  }
  return v;
}

}  // namespace

// ------------------------------------------------------------- factors

FactorSpec parse_factor(const std::string& text) {
  FactorSpec f;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto no_arg = [&] {
    if (colon != std::string::npos) throw BadSpec("initial state '" + head + "' takes no argument");
  };
  if (head == "ground") {
    no_arg();
    f.kind = FactorSpec::Kind::ground;
  } else if (head == "excited") {
    no_arg();
    f.kind = FactorSpec::Kind::excited;
  } else if (head == "superposition") {
    no_arg();
    f.kind = FactorSpec::Kind::superposition;
  } else if (head == "mixed") {
    no_arg();
    f.kind = FactorSpec::Kind::maximally_mixed;
  } else if (head == "fock") {
    f.kind = FactorSpec::Kind::fock;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (arg.empty() || ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw BadSpec("malformed Fock index '" + arg + "'");
    }
    f.n = n;
  } else if (head == "coherent") {
    f.kind = FactorSpec::Kind::coherent;
    f.alpha = parse_number(arg, "coherent amplitude");
  } else if (head == "gibbs") {
    f.kind = FactorSpec::Kind::gibbs;
    f.beta = parse_number(arg, "inverse temperature");
    if (f.beta < 0.0) throw BadSpec("inverse temperature must be non-negative");
  } else {
    throw BadSpec("unknown initial state '" + text + "'");
  }
  return f;
}

std::string describe(const FactorSpec& f) {
  std::ostringstream os;
  os.precision(12);
  switch (f.kind) {
    case FactorSpec::Kind::ground: return "ground";
    case FactorSpec::Kind::excited: return "excited";
    case FactorSpec::Kind::superposition: return "superposition";
    case FactorSpec::Kind::maximally_mixed: return "mixed";
    case FactorSpec::Kind::fock: os << "fock:" << f.n; break;
    case FactorSpec::Kind::coherent: os << "coherent:" << f.alpha.real(); break;
    case FactorSpec::Kind::gibbs: os << "gibbs:" << f.beta; break;
  }
  return os.str();
}

// --------------------------------------------------------------- Model

Model::Model(ModelSpec spec, std::vector<Operator> local_h, std::vector<ProductTerm> interaction,
             std::vector<Jump> jumps)
    : spec_(std::move(spec)),
      local_h_(std::move(local_h)),
      interaction_(std::move(interaction)),
      jumps_(std::move(jumps)) {
  for (const auto& h : local_h_) dims_.push_back(h.dim());
  for (const auto& t : interaction_) {
    if (!bipartite() || t.on_a.dim() != dims_[0] || t.on_b.dim() != dims_[1]) {
      throw DimensionMismatch("interaction term does not match the subsystem dims");
    }
  }
  for (const auto& j : jumps_) {
    if (j.subsystem >= dims_.size() || j.op.dim() != dims_[j.subsystem]) {
      throw DimensionMismatch("jump operator does not match its subsystem");
    }
    if (j.rate < 0.0) throw BadSpec("jump rate must be non-negative");
  }
}

std::size_t Model::dim() const {
  std::size_t d = 1;
  for (auto x : dims_) d *= x;
  return d;
}

const Operator& Model::local_hamiltonian(std::size_t j) const {
  if (j >= local_h_.size()) throw IndexError("subsystem index out of range");
  return local_h_[j];
}

bool Model::closed() const {
  for (const auto& j : jumps_) {
    if (j.rate > 0.0) return false;
  }
  return true;
}

Operator Model::embedded(std::size_t j, const Operator& local) const {
  if (j >= dims_.size()) throw IndexError("subsystem index out of range");
  if (dims_.size() == 1) return local.with_dims({});
  Operator out = j == 0 ? local.with_dims({}) : Operator::identity(dims_[0]);
  for (std::size_t i = 1; i < dims_.size(); ++i) {
    out = kron(out, i == j ? local : Operator::identity(dims_[i]));
  }
  return out;
}

Operator Model::interaction() const {
  if (!bipartite()) return Operator::zero(dim());
  Operator v = Operator::zero(dim()).with_dims(dims_);
  for (const auto& t : interaction_) v += kron(t.on_a, t.on_b);
  return v;
}

Operator Model::total_hamiltonian() const {
  Operator h = Operator::zero(dim()).with_dims(dims_.size() > 1 ? dims_ : Dims{});
  for (std::size_t j = 0; j < local_h_.size(); ++j) h += embedded_hamiltonian(j);
  if (bipartite()) h += interaction();
  return h;
}

std::vector<std::pair<Operator, double>> Model::joint_jumps() const {
  std::vector<std::pair<Operator, double>> out;
  for (const auto& j : jumps_) out.emplace_back(embedded(j.subsystem, j.op), j.rate);
  return out;
}

Operator Model::excitation_number() const {
  Operator n = Operator::zero(dim()).with_dims(dims_.size() > 1 ? dims_ : Dims{});
  for (std::size_t j = 0; j < dims_.size(); ++j) n += embedded(j, number_operator(dims_[j]));
  return n;
}

// ------------------------------------------------------------ operators

Operator sigma_minus() { return single(2, 0, 1); }
Operator sigma_plus() { return single(2, 1, 0); }
Operator sigma_ee() { return single(2, 1, 1); }

Operator sigma_z() {
  const double d[] = {-1.0, 1.0};
  return Operator::diagonal(d);
}

Operator annihilation(std::size_t levels) {
  Matrix m = Matrix::Zero(levels, levels);
  for (std::size_t n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(m));
}

Operator creation(std::size_t levels) { return annihilation(levels).adjoint(); }

Operator number_operator(std::size_t levels) {
  std::vector<double> d(levels);
  for (std::size_t n = 0; n < levels; ++n) d[n] = static_cast<double>(n);
  return Operator::diagonal(d);
}

Operator qubit_hamiltonian(double omega, QubitEnergy convention) {
  return convention == QubitEnergy::half_sigma_z ? (0.5 * omega) * sigma_z() : omega * sigma_ee();
}

// -------------------------------------------------------------- builders

namespace {

std::vector<ProductTerm> exchange(double g, const Operator& lower_a, const Operator& lower_b) {
  return {{g * lower_a.adjoint(), lower_b}, {g * lower_a, lower_b.adjoint()}};
}

}  // namespace

Model build_jc(const ModelSpec& spec) {
  check_kinds(spec, {SubsystemKind::qubit, SubsystemKind::oscillator}, "jc");
  require(!spec.dissipator || spec.dissipator->rate == 0.0, "jc: model is closed");
  const auto conv = spec.qubit_energy.value_or(QubitEnergy::half_sigma_z);
  const auto& b = spec.subsystems[1];
  return Model(spec,
               {qubit_hamiltonian(spec.subsystems[0].frequency, conv), oscillator_hamiltonian(b)},
               exchange(spec.coupling, sigma_minus(), annihilation(b.truncation)), {});
}

Model build_qubit_qubit(const ModelSpec& spec) {
  check_kinds(spec, {SubsystemKind::qubit, SubsystemKind::qubit}, "qubit-qubit");
  require(!spec.dissipator || spec.dissipator->rate == 0.0, "qubit-qubit: model is closed");
  const auto conv = spec.qubit_energy.value_or(QubitEnergy::excited_only);
  return Model(spec,
               {qubit_hamiltonian(spec.subsystems[0].frequency, conv),
                qubit_hamiltonian(spec.subsystems[1].frequency, conv)},
               exchange(spec.coupling, sigma_minus(), sigma_minus()), {});
}

Model build_spontaneous_emission(const ModelSpec& spec) {
  check_kinds(spec, {SubsystemKind::qubit}, "spontaneous emission");
  const double rate = spec.dissipator ? spec.dissipator->rate : 0.0;
  require(rate >= 0.0, "spontaneous emission: rate must be non-negative");
  require(!spec.dissipator || spec.dissipator->subsystem == 0,
          "spontaneous emission: the jump acts on the qubit");
  const auto conv = spec.qubit_energy.value_or(QubitEnergy::half_sigma_z);
  return Model(spec, {qubit_hamiltonian(spec.subsystems[0].frequency, conv)}, {},
               {{0, sigma_minus(), rate}});
}

Model build_rc(const ModelSpec& spec) {
  check_kinds(spec, {SubsystemKind::qubit, SubsystemKind::oscillator}, "reaction coordinate");
  const double kappa = spec.dissipator ? spec.dissipator->rate : 0.0;
  require(kappa >= 0.0, "reaction coordinate: damping must be non-negative");
  require(!spec.dissipator || spec.dissipator->subsystem == 1,
          "reaction coordinate: the jump acts on the oscillator");
  const auto conv = spec.qubit_energy.value_or(QubitEnergy::half_sigma_z);
  const auto& rc = spec.subsystems[1];
  return Model(spec,
               {qubit_hamiltonian(spec.subsystems[0].frequency, conv), oscillator_hamiltonian(rc)},
               exchange(spec.coupling, sigma_minus(), annihilation(rc.truncation)),
               {{1, annihilation(rc.truncation), kappa}});
}

Model build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::jc: return build_jc(spec);
    case ModelKind::qubit_qubit: return build_qubit_qubit(spec);
    case ModelKind::spontaneous_emission: return build_spontaneous_emission(spec);
    case ModelKind::reaction_coordinate: return build_rc(spec);
  }
  throw BadSpec("unknown model kind");
}

// -------------------------------------------------------- initial states

std::size_t default_truncation(const FactorSpec& f, double frequency,
                               std::size_t partner_excitations) {
  switch (f.kind) {
    case FactorSpec::Kind::coherent: {
      const double a = std::abs(f.alpha);
      const auto n_max = static_cast<std::size_t>(std::ceil(a * a + 10.0 * a));
      std::size_t levels = std::max<std::size_t>(n_max, 1 + partner_excitations) + 1;
      // The 10-sigma rule undershoots the tail bound for small |alpha|.
      while (coherent_tail(f.alpha, levels) >= 1e-13) ++levels;
      return levels;
    }
    case FactorSpec::Kind::gibbs: {
      if (f.beta <= 0.0) throw BadSpec("an oscillator Gibbs state at beta = 0 needs an explicit truncation");
      // Boltzmann tail below 1e-12.
      const auto n_max = static_cast<std::size_t>(std::ceil(std::log(1e12) / (f.beta * frequency)));
      return std::max<std::size_t>(n_max, 1 + partner_excitations) + 1;
    }
    case FactorSpec::Kind::fock: return f.n + 1 + partner_excitations + 1;
    case FactorSpec::Kind::superposition: return 1 + 1 + partner_excitations + 1;
    case FactorSpec::Kind::ground: return 1 + partner_excitations + 1;
    case FactorSpec::Kind::excited:
    case FactorSpec::Kind::maximally_mixed:
      throw BadSpec("initial state '" + describe(f) + "' needs an explicit oscillator truncation");
  }
  return 2;
}

double coherent_tail(cplx alpha, std::size_t levels) {
  const double a2 = std::norm(alpha);
  if (a2 == 0.0) return 0.0;
  const double log_a2 = std::log(a2);
  double tail = 0.0;
  // Poisson weights beyond the truncation, summed until they stop mattering.
  for (std::size_t n = levels;; ++n) {
    const double w = std::exp(-a2 + n * log_a2 - std::lgamma(n + 1.0));
    tail += w;
    if (static_cast<double>(n) > a2 && w < 1e-18 * std::max(tail, 1e-300)) break;
    if (w == 0.0 && static_cast<double>(n) > a2) break;
  }
  return tail;
}

Vector coherent_amplitudes(cplx alpha, std::size_t levels) {
  Vector c = Vector::Zero(levels);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double phase = std::arg(alpha);
  for (std::size_t n = 0; n < levels; ++n) {
    const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    c(n) = std::polar(std::exp(log_mag), phase * static_cast<double>(n));
  }
  return c;
}

QuantumState make_factor_state(const FactorSpec& f, const SubsystemSpec& sub, const Operator& h) {
  const std::size_t d = sub.truncation;
  const bool qubit = sub.kind == SubsystemKind::qubit;
  Vector psi = Vector::Zero(d);
  switch (f.kind) {
    case FactorSpec::Kind::ground:
      psi(0) = 1.0;
      return QuantumState::pure(psi);
    case FactorSpec::Kind::excited:
      if (!qubit) throw BadSpec("'excited' applies to qubits; use fock:N for oscillators");
      psi(1) = 1.0;
      return QuantumState::pure(psi);
    case FactorSpec::Kind::superposition:
      psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
      return QuantumState::pure(psi);
    case FactorSpec::Kind::fock:
      if (f.n >= d) {
        throw TruncationTooSmall("fock:" + std::to_string(f.n) + " needs more than " +
                                 std::to_string(d) + " levels");
      }
      psi(f.n) = 1.0;
      return QuantumState::pure(psi);
    case FactorSpec::Kind::coherent: {
      if (qubit) throw BadSpec("coherent states apply to oscillators only");
      const double tail = coherent_tail(f.alpha, d);
      if (tail >= kCoherentTail) {
        std::ostringstream msg;
        msg << "coherent state tail " << tail << " beyond " << d << " levels";
        throw TruncationTooSmall(msg.str());
      }
      psi = coherent_amplitudes(f.alpha, d);
      psi /= psi.norm();
      return QuantumState::pure(psi);
    }
    case FactorSpec::Kind::maximally_mixed:
      return QuantumState::trusted_density(Matrix::Identity(d, d) / static_cast<double>(d));
    case FactorSpec::Kind::gibbs: {
      const Eigensystem es = hermitian_eig(h);
      std::vector<double> w(d);
      double z = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        w[k] = std::exp(-f.beta * (es.values[k] - es.values[0]));
        z += w[k];
      }
      Matrix rho = Matrix::Zero(d, d);
      for (std::size_t k = 0; k < d; ++k) {
        rho += (w[k] / z) * es.vectors.col(k) * es.vectors.col(k).adjoint();
      }
      return QuantumState::trusted_density(std::move(rho));
    }
  }
  throw BadSpec("unknown initial state kind");
}

QuantumState make_initial_state(const InitialStateSpec& init, const Model& model) {
  const auto& subs = model.spec().subsystems;
  if (init.factors.size() != subs.size()) {
    throw BadSpec("initial state needs one factor per subsystem");
  }
  QuantumState state = make_factor_state(init.factors[0], subs[0], model.local_hamiltonian(0));
  for (std::size_t j = 1; j < subs.size(); ++j) {
    state = kron(state, make_factor_state(init.factors[j], subs[j], model.local_hamiltonian(j)));
  }
  return state;
}

}  // namespace autothermo
