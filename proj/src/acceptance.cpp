#include "autothermo/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "autothermo/errors.hpp"
#include "autothermo/scenarios.hpp"

namespace autothermo::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;
const double kLn2 = std::log(2.0);

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> populations_excited(const Trajectory& traj) {
  std::vector<double> p(traj.size());
  const Operator ee = sigma_ee();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& st = traj.states[i];
    p[i] = st.factor_dims().size() == 1 ? st.expectation(ee).real()
                                        : local_expectation(st, 0, ee).real();
  }
  return p;
}

// Natural time of each row.
std::vector<double> natural_times(const ScenarioResult& r) {
  std::vector<double> t = r.table.times;
  for (double& x : t) x *= r.config.time_scale();
  return t;
}

struct MaxDev {
  double value = 0.0;
  double at = 0.0;
  void add(double dev, double t) {
    if (!(dev <= value)) {
      value = dev;
      at = t;
    }
  }
};

class Runner {
 public:
  Runner(const Options& opts, std::ostream& log) : opts_(opts), log_(log) {}

  bool selected(int c) const { return opts_.criteria.empty() || opts_.criteria.count(c) > 0; }

  void record(int c, const std::string& id, const std::string& name, bool passed,
              const std::string& detail) {
    Check ch{c, id, name, passed, false, detail};
    print(ch);
    checks_.push_back(std::move(ch));
  }

  void skip(int c, const std::string& id, const std::string& name, const std::string& reason) {
    Check ch{c, id, name, true, true, reason};
    print(ch);
    checks_.push_back(std::move(ch));
  }

  void runtime(int c, const std::string& id, Clock::time_point start, double budget) {
    const double s = seconds_since(start);
    record(c, id, "runtime under " + format_number(budget) + " s", s < budget, "took " + sci(s) + " s");
  }

  // Memoized scenario runs keyed by a caller-chosen tag.
  const ScenarioResult& scenario(const std::string& key, const std::function<ScenarioConfig()>& make) {
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, run_scenario(make())).first;
    return it->second;
  }

  // Runs one criterion body, turning library errors into a failed check.
  void guard(int c, const std::function<void()>& body) {
    if (!selected(c)) return;
    try {
      body();
    } catch (const Error& e) {
      record(c, std::to_string(c) + ".x", "criterion completed without error", false, e.what());
    }
  }

  const Options& options() const { return opts_; }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  void print(const Check& ch) {
    log_ << (ch.skipped ? "[SKIP] " : ch.passed ? "[PASS] " : "[FAIL] ") << ch.id << ' ' << ch.name
         << ": " << ch.detail << std::endl;
  }

  const Options& opts_;
  std::ostream& log_;
  std::vector<Check> checks_;
  std::map<std::string, ScenarioResult> cache_;
};

ScenarioConfig with_samples(const std::string& preset, std::size_t samples) {
  ScenarioConfig c = preset_config(preset);
  c.samples = samples;
  return c;
}

ScenarioConfig autonomous_only(ScenarioConfig c) {
  c.outputs = {ColumnGroup::autonomous, ColumnGroup::info};
  return c;
}

ScenarioConfig coherent_drive(double alpha, PropagationChoice prop) {
  ScenarioConfig c = preset_config("jc-coherent-drive");
  c.initial.factors[1] = parse_factor("coherent:" + std::to_string(alpha));
  c.samples = 500;
  c.propagation = prop;
  return c;
}

std::size_t index_at(const std::vector<double>& t, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(t[i] - x) < std::abs(t[best] - x)) best = i;
  }
  return best;
}

// ------------------------------------------------------------------ 1, 2

void criterion_1_2(Runner& r) {
  const auto start = Clock::now();
  const auto& res = r.scenario("jc-ev-2000", [] { return with_samples("jc-excited-vacuum", 2000); });
  const double elapsed = seconds_since(start);
  const auto t = natural_times(res);
  const auto& a = res.table.sub[0];
  const auto& b = res.table.sub[1];
  const std::size_t q4 = index_at(t, kPi / 4), q2 = index_at(t, kPi / 2);

  if (r.selected(1)) {
    r.record(1, "1.a", "W_A(gt=pi/4) = 1", std::abs(a.w[q4] - 1.0) <= 1e-6,
             "W_A = " + format_number(a.w[q4]));
    MaxDev flat;
    for (std::size_t i = q4; i <= q2; ++i) flat.add(std::abs(a.w[i] - a.w[q4]), t[i]);
    r.record(1, "1.b", "W_A constant on [pi/4, pi/2]", flat.value <= 1e-6,
             "max deviation " + sci(flat.value) + " at gt = " + sci(flat.at));
    r.record(1, "1.c", "Q_A(gt=pi/4) = -0.5", std::abs(a.q[q4] + 0.5) <= 1e-6,
             "Q_A = " + format_number(a.q[q4]));
    r.record(1, "1.d", "Q_A(gt=pi/2) = 0", std::abs(a.q[q2]) <= 1e-6,
             "Q_A = " + format_number(a.q[q2]));
    r.record(1, "1.e", "S_A(gt=pi/4) = ln 2 and beta_A = 0",
             std::abs(a.s[q4] - kLn2) <= 1e-9 && std::abs(a.beta[q4]) <= 1e-6,
             "S_A - ln2 = " + sci(a.s[q4] - kLn2) + ", beta_A = " + sci(a.beta[q4]));
    // Closed form: P_e = cos^2(gt), so Q_A = -sin^2(gt) before the inversion.
    MaxDev oracle;
    const auto pe = populations_excited(res.trajectory);
    for (std::size_t i = 0; i <= q2; ++i) oracle.add(std::abs(pe[i] - std::pow(std::cos(t[i]), 2)), t[i]);
    for (std::size_t i = 0; i <= q4; ++i) oracle.add(std::abs(a.q[i] + std::pow(std::sin(t[i]), 2)), t[i]);
    r.record(1, "1.f", "P_e = cos^2(gt) and Q_A = -sin^2(gt) on [0, pi/4]", oracle.value <= 1e-9,
             "max deviation " + sci(oracle.value) + " at gt = " + sci(oracle.at));
    r.record(1, "1.g", "runtime under 5 s", elapsed < 5.0, "took " + sci(elapsed) + " s");
  }
  if (r.selected(2)) {
    double worst_w = -kInfinity, worst_e = 0.0;
    for (std::size_t i = 1; i <= q4; ++i) {
      if (t[i] > 0.05) worst_w = std::max(worst_w, b.w[i]);
      worst_e = std::max(worst_e, std::abs(b.ergotropy[i]));
    }
    r.record(2, "2.a", "W_B < -1e-6 on (0.05, pi/4]", worst_w < -1e-6,
             "largest W_B " + sci(worst_w));
    r.record(2, "2.b", "ergotropy_B = 0 on (0, pi/4]", worst_e <= 1e-12,
             "max |ergo_B| " + sci(worst_e));
  }
}

// --------------------------------------------------------------------- 3

void criterion_3(Runner& r) {
  const auto start = Clock::now();
  const auto& res = r.scenario("se-1000", [] {
    ScenarioConfig c = with_samples("se-lindblad", 1000);
    c.dt = 1e-3 / c.gamma;
    return c;
  });
  r.runtime(3, "3.g", start, 10.0);
  const auto& a = res.table.sub[0];
  const auto pe = populations_excited(res.trajectory);
  const double gamma = res.config.gamma, w = res.config.omega_a;

  MaxDev decay, q_in, w_in, w_flat, q_lit, q_alt;
  std::size_t first_after = pe.size();
  for (std::size_t i = 0; i < pe.size(); ++i) {
    const double t = res.table.times[i];
    decay.add(std::abs(pe[i] - std::exp(-gamma * t)), t * gamma);
    if (pe[i] >= 0.5) {
      q_in.add(std::abs(a.q[i] + w * (1.0 - pe[i])), t * gamma);
      w_in.add(std::abs(a.w[i] - 2.0 * w * (1.0 - pe[i])), t * gamma);
    } else if (first_after == pe.size()) {
      first_after = i;
    }
  }
  double w_lo = kInfinity, w_hi = -kInfinity;
  for (std::size_t i = first_after; i < pe.size(); ++i) {
    const double gt = res.table.times[i] * gamma;
    w_lo = std::min(w_lo, a.w[i]);
    w_hi = std::max(w_hi, a.w[i]);
    q_alt.add(std::abs(a.q[i] + w * pe[i]), gt);
  }
  const std::size_t last = pe.size() - 1;
  q_lit.add(std::abs(a.q[last] - w * (pe[last] - 1.0)), res.table.times[last] * gamma);

  r.record(3, "3.a", "P_e = exp(-Gamma t)", decay.value < 1e-6,
           "max deviation " + sci(decay.value) + " at Gamma t = " + sci(decay.at));
  r.record(3, "3.b", "Q_q = -omega(1 - P_e) while P_e >= 1/2", q_in.value <= 1e-5,
           "max deviation " + sci(q_in.value));
  r.record(3, "3.c", "W_q = 2 omega(1 - P_e) while P_e >= 1/2", w_in.value <= 1e-5,
           "max deviation " + sci(w_in.value));
  r.record(3, "3.d", "W_q constant after tau", w_hi - w_lo <= 1e-5,
           "spread " + sci(w_hi - w_lo) + " (W_q about " + format_number(w_hi) + ")");
  r.record(3, "3.e", "Q_q -> omega(P_e - 1) at long times", q_lit.value <= 1e-5,
           "|Q_q - omega(P_e - 1)| = " + sci(q_lit.value) + " at Gamma t = " + sci(q_lit.at) +
               "; first-law closure with constant W_q = omega forces Q_q = -omega P_e");
  r.record(3, "3.f", "Q_q = -omega P_e after tau (first-law form)", q_alt.value <= 1e-5,
           "max deviation " + sci(q_alt.value));
}

// --------------------------------------------------------------------- 4

void criterion_4(Runner& r) {
  const auto start = Clock::now();
  for (const auto& info : preset_catalog()) {
    const std::string id = "4." + info.name;
    ScenarioConfig cfg = autonomous_only(preset_config(info.name));
    if (info.name == "jc-coherent-drive") {
      cfg.initial.factors[1] = parse_factor("coherent:10");
    }
    if (cfg.subsystem_count() == 1) {
      r.skip(4, id, "second law", "single subsystem: no partner, entropy production undefined");
      continue;
    }
    // Ledger checks run inside analyze for closed models and would throw.
    const ScenarioResult& res = r.scenario("c4-" + info.name, [&] { return cfg; });
    const bool closed = res.trajectory.model->closed();
    double worst_lhs = kInfinity, worst_rhs = kInfinity, gap = 0.0;
    std::size_t infinite = 0, compared = 0;
    for (const auto& s : res.table.sub) {
      for (std::size_t i = 0; i < s.sigma_rhs.size(); ++i) {
        worst_rhs = std::min(worst_rhs, s.sigma_rhs[i]);
        if (!closed) continue;
        worst_lhs = std::min(worst_lhs, s.sigma_lhs[i]);
        if (std::isinf(s.sigma_lhs[i]) || std::isinf(s.sigma_rhs[i])) {
          ++infinite;
          continue;
        }
        ++compared;
        gap = std::max(gap, std::abs(s.sigma_lhs[i] - s.sigma_rhs[i]));
      }
    }
    if (!closed) {
      r.record(4, id, "mutual-information form >= 0", worst_rhs >= -1e-9,
               "min " + sci(worst_rhs) + "; lhs form skipped: open system exchanges heat with a "
               "residual bath outside the ledger");
      continue;
    }
    const bool ok = worst_lhs >= -1e-9 && worst_rhs >= -1e-9 && gap <= 1e-7;
    r.record(4, id, "both forms >= 0 and agree", ok,
             "min lhs " + sci(worst_lhs) + ", min rhs " + sci(worst_rhs) + ", max gap " + sci(gap) +
                 " over " + std::to_string(compared) + " finite samples; " +
                 std::to_string(infinite) + " skipped (infinite-temperature-partner sentinel)");
  }
  r.record(4, "4.runtime", "preset sweep completed", true, "took " + sci(seconds_since(start)) + " s");
}

// --------------------------------------------------------------------- 5

// Max |residual| at the coarse-grid times, away from the listed singular
// points (pure states and population inversions).
double residual_max(const ScenarioResult& res, std::size_t stride, const std::vector<double>& avoid) {
  const auto t = natural_times(res);
  const double margin = 0.05 * t.back();
  const auto& rs = res.table.sub[0].residual;
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); i += stride) {
    bool near = false;
    for (double x : avoid) near = near || std::abs(t[i] - x) < margin;
    if (near || std::isnan(rs[i])) continue;
    worst = std::max(worst, std::abs(rs[i]));
  }
  return worst;
}

void criterion_5(Runner& r) {
  const auto start = Clock::now();
  struct Case {
    const char* label;
    std::function<ScenarioConfig(std::size_t)> make;
    std::size_t coarse;
    std::vector<double> avoid;
  };
  const std::vector<Case> cases = {
      {"jc-excited-vacuum",
       [](std::size_t n) { return autonomous_only(with_samples("jc-excited-vacuum", n)); }, 2000,
       {0.0, kPi / 4, kPi / 2}},
      {"se-lindblad",
       [](std::size_t n) {
         ScenarioConfig c = autonomous_only(with_samples("se-lindblad", n));
         c.dt = 0.1;
         return c;
       },
       500, {0.0, kLn2}},
  };
  for (const auto& c : cases) {
    const auto& lo = r.scenario(std::string("c5-") + c.label + "-1", [&] { return c.make(c.coarse); });
    const auto& hi = r.scenario(std::string("c5-") + c.label + "-2", [&] { return c.make(2 * c.coarse); });
    const double e1 = residual_max(lo, 1, c.avoid), e2 = residual_max(hi, 2, c.avoid);
    const double ratio = e1 / e2;
    r.record(5, std::string("5.") + c.label, "residual shrinks >= 3.5x when samples double",
             ratio >= 3.5,
             "max residual " + sci(e1) + " -> " + sci(e2) + " (ratio " + sci(ratio) + ")");
  }
  r.runtime(5, "5.runtime", start, 20.0);
}

// --------------------------------------------------------------------- 6

Matrix random_complex(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) m(i, k) = cplx(n(rng), n(rng));
  }
  return m;
}

void criterion_6(Runner& r) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  const std::size_t dims[] = {2, 3, 5, 8};
  double split = 0.0, order = 0.0, relent = 0.0;
  bool qubit_exact = true;
  std::size_t relent_cases = 0;
  for (int n = 0; n < 500; ++n) {
    const std::size_t d = dims[n % 4];
    const Matrix g = random_complex(rng, d);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    const Matrix x = random_complex(rng, d);
    const Operator h(Matrix((x + x.adjoint()) / 2.0));
    const QuantumState state = QuantumState::density(rho);
    const ExergyParts parts = exergy(state, h);
    split = std::max(split, std::abs(parts.exergy - parts.ergotropy - parts.nonunitary));
    order = std::max({order, -parts.ergotropy, parts.ergotropy - parts.exergy});
    if (d == 2 && parts.nonunitary != 0.0) qubit_exact = false;
    // Independent form of the non-unitary term: D[pi || rho_th] / beta.
    if (d > 2 && parts.beta > 1e-2 && std::isfinite(parts.beta)) {
      const EnergyBasis basis = EnergyBasis::of(h);
      const auto ts = thermal_from_spectrum(spectrum(state), basis);
      const double d_rel = relative_entropy(passive_state(state, h), ts.gibbs(basis));
      relent = std::max(relent, std::abs(d_rel / parts.beta - parts.nonunitary));
      ++relent_cases;
    }
  }
  r.record(6, "6.a", "exergy = ergotropy + nonunitary", split <= 1e-9, "max gap " + sci(split));
  r.record(6, "6.b", "exergy >= ergotropy >= 0", order <= 1e-12, "worst violation " + sci(order));
  r.record(6, "6.c", "qubit nonunitary term is exactly 0", qubit_exact,
           qubit_exact ? "all 125 qubit cases" : "nonzero qubit term found");
  r.record(6, "6.d", "nonunitary = D[passive || thermal] / beta", relent <= 1e-9,
           "max gap " + sci(relent) + " over " + std::to_string(relent_cases) + " cases");
  r.runtime(6, "6.runtime", start, 5.0);
}

// --------------------------------------------------------------------- 7

void criterion_7_at(Runner& r, double alpha, double budget) {
  const auto start = Clock::now();
  const std::string tag = "alpha=" + format_number(alpha);
  const auto& full = r.scenario("c7-full-" + tag,
                                [&] { return coherent_drive(alpha, PropagationChoice::automatic); });
  const auto& mf = r.scenario("c7-mf-" + tag,
                              [&] { return coherent_drive(alpha, PropagationChoice::mean_field); });
  const auto t = natural_times(full);
  const auto& a = full.table.sub[0];
  const auto& cmp = full.table.comparators.at(0);
  const auto& e_int = full.table.interaction_energy;
  const auto pe_full = populations_excited(full.trajectory);
  const auto pe_mf = populations_excited(mf.trajectory);

  MaxDev heat, eq20, pops;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 0.1 + 1e-12) continue;
    heat.add(std::abs(a.q[i]), t[i]);
    // W_A is provided-positive; the standard work is received-positive.
    eq20.add(std::abs(cmp.w_st[i] + a.w[i] - (e_int[i] - e_int[0])), t[i]);
    pops.add(std::abs(pe_full[i] - pe_mf[i]), t[i]);
  }
  const auto& mcmp = mf.table.comparators.at(0);
  const auto du = derivative(mf.table.times, mf.table.sub[0].u);
  MaxDev mca;
  for (std::size_t i = 0; i < du.size(); ++i) {
    mca.add(std::abs(mcmp.w_mca_rate[i] - du[i]), t[i]);
  }

  r.record(7, "7.a." + tag, "|Q_A| < 0.02 for gt <= 0.1", heat.value < 0.02,
           "max |Q_A| " + sci(heat.value) + " at gt = " + sci(heat.at));
  r.record(7, "7.b." + tag, "|W_st - W_A - dE_int| < 1e-3 for gt <= 0.1", eq20.value < 1e-3,
           "max " + sci(eq20.value) + " at gt = " + sci(eq20.at));
  r.record(7, "7.c." + tag, "mean-field P_e within 2e-2 for gt <= 0.1", pops.value <= 2e-2,
           "max gap " + sci(pops.value) + " at gt = " + sci(pops.at));
  r.record(7, "7.d." + tag, "MCA work rate matches dU_A/dt on mean field", mca.value < 1e-3,
           "max gap " + sci(mca.value) + " at gt = " + sci(mca.at));
  r.runtime(7, "7.runtime." + tag, start, budget);
}

void criterion_7(Runner& r) {
  criterion_7_at(r, 10.0, 60.0);
  if (r.options().slow) {
    criterion_7_at(r, 30.0, 900.0);
  } else {
    r.skip(7, "7.alpha=30", "alpha = 30 run", "slow; enable with --slow");
  }
}

// ------------------------------------------------------------------ 8, 9

bool same(double x, double y, double tol, bool relative) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
  const double scale = relative ? std::max(1.0, std::max(std::abs(x), std::abs(y))) : 1.0;
  return std::abs(x - y) <= tol * scale;
}

// Shift-invariant qubit-A columns; returns the first mismatch, empty if none.
std::string compare_a(const ScenarioResult& x, const ScenarioResult& y, double tol) {
  const auto& a = x.table.sub[0];
  const auto& b = y.table.sub[0];
  if (a.u.size() != b.u.size()) return "row counts differ";
  struct Col {
    const char* name;
    const std::vector<double> SubsystemSeries::*f;
    bool relative;
  };
  const Col cols[] = {{"Q", &SubsystemSeries::q, false},
                      {"W", &SubsystemSeries::w, false},
                      {"S", &SubsystemSeries::s, false},
                      {"beta", &SubsystemSeries::beta, true},
                      {"ergo", &SubsystemSeries::ergotropy, false},
                      {"exergy", &SubsystemSeries::exergy, false},
                      {"nonuni", &SubsystemSeries::nonunitary, false},
                      {"sigma", &SubsystemSeries::sigma_rhs, false}};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    for (const auto& c : cols) {
      const double p = (a.*c.f)[i], q = (b.*c.f)[i];
      if (!same(p, q, tol, c.relative)) {
        return std::string(c.name) + " differs at row " + std::to_string(i) + ": " +
               format_number(p) + " vs " + format_number(q);
      }
      if (std::isfinite(p) && std::isfinite(q)) worst = std::max(worst, std::abs(p - q));
    }
    const double du = (a.u[i] - a.u[0]) - (b.u[i] - b.u[0]);
    if (std::abs(du) > tol) return "dU differs at row " + std::to_string(i) + ": " + sci(du);
    worst = std::max(worst, std::abs(du));
  }
  return "max difference " + sci(worst);
}

void criterion_8(Runner& r) {
  const auto start = Clock::now();
  const auto& qq = r.scenario("qq-eg", [] { return preset_config("qq-excited-ground"); });
  const auto& jc = r.scenario("jc-ev", [] { return preset_config("jc-excited-vacuum"); });
  r.runtime(8, "8.runtime", start, 5.0);
  const std::string cmp = compare_a(qq, jc, 1e-9);
  r.record(8, "8.a", "qubit-A columns match jc-excited-vacuum", cmp.rfind("max", 0) == 0, cmp);

  const auto t = natural_times(qq);
  const auto& wb = qq.table.sub[1].w;
  double before = 0.0, after = -kInfinity;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= kPi / 4 + 1e-12) {
      before = std::max(before, std::abs(wb[i]));
    } else if (t[i] < kPi / 2 - 1e-12) {
      after = std::max(after, wb[i]);
    }
  }
  r.record(8, "8.b", "W_B = 0 on [0, pi/4]", before <= 1e-9, "max |W_B| " + sci(before));
  r.record(8, "8.c", "W_B < 0 on (pi/4, pi/2)", after < 0.0, "largest W_B " + sci(after));
  const auto& info = qq.table.mutual_information;
  const std::size_t peak = std::max_element(info.begin(), info.end()) - info.begin();
  const bool at = std::abs(t[peak] - kPi / 4) <= 0.5 * (t[1] - t[0]);
  r.record(8, "8.d", "I_AB peaks at gt = pi/4 with 2 ln 2",
           at && std::abs(info[peak] - 2 * kLn2) <= 1e-6,
           "peak " + format_number(info[peak]) + " at gt = " + format_number(t[peak]));
}

void criterion_9(Runner& r) {
  const auto start = Clock::now();
  const auto& jc = r.scenario("jc-sv", [] { return preset_config("jc-superposition-vacuum"); });
  const auto& qq = r.scenario("qq-sg", [] { return preset_config("qq-superposition-ground"); });
  r.runtime(9, "9.runtime", start, 10.0);
  const std::string cmp = compare_a(jc, qq, 1e-6);
  r.record(9, "9.a", "qubit-A columns match across oscillator and qubit partners",
           cmp.rfind("max", 0) == 0, cmp);
  for (const auto* res : {&jc, &qq}) {
    const auto& w = res->table.sub[0].w;
    double drop = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) drop = std::max(drop, w[i - 1] - w[i]);
    r.record(9, "9.b." + res->config.preset, "W_A non-decreasing", drop <= 1e-6,
             "largest decrease " + sci(drop) + ", final W_A " + format_number(w.back()));
  }
}

// -------------------------------------------------------------------- 10

void criterion_10(Runner& r) {
  const auto start = Clock::now();
  const auto& res = r.scenario("jc-ev-full", [] { return preset_config("jc-excited-vacuum-full"); });
  r.runtime(10, "10.runtime", start, 5.0);
  const auto& a = res.table.sub[0];
  const std::size_t n = a.u.size() - 1;
  double mirror = 0.0;
  for (std::size_t i = 0; i <= n; ++i) mirror = std::max(mirror, std::abs(a.u[i] - a.u[n - i]));
  r.record(10, "10.a", "U_A(t) = U_A(pi/g - t)", mirror <= 1e-8, "max gap " + sci(mirror));
  r.record(10, "10.b", "Q_A and W_A return to 0",
           std::abs(a.q[n]) <= 1e-6 && std::abs(a.w[n]) <= 1e-6,
           "Q_A = " + sci(a.q[n]) + ", W_A = " + sci(a.w[n]));
}

// -------------------------------------------------------------------- 11

// Times of the local maxima of y, refined by a parabola through each peak.
std::vector<double> refined_maxima(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    const double h = t[i] - t[i - 1];
    const double denom = y[i - 1] - 2 * y[i] + y[i + 1];
    const double shift = denom == 0.0 ? 0.0 : 0.5 * (y[i - 1] - y[i + 1]) / denom;
    out.push_back(t[i] + shift * h);
  }
  return out;
}

double peak_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void criterion_11(Runner& r) {
  const auto start = Clock::now();
  const auto& rc = r.scenario("rc-0.8", [] { return autonomous_only(preset_config("se-rc")); });
  const auto& se = r.scenario("se-lind", [] { return preset_config("se-lindblad"); });
  const auto& wq = rc.table.sub[0].w;
  const auto& wl = se.table.sub[0].w;
  const double peak_gap = std::abs(*std::max_element(wq.begin(), wq.end()) -
                                   *std::max_element(wl.begin(), wl.end()));
  const double plateau_gap = std::abs(wq.back() - wl.back());
  r.record(11, "11.a", "qubit work matches pure spontaneous emission",
           peak_gap <= 5e-2 && plateau_gap <= 5e-2,
           "peak gap " + sci(peak_gap) + ", final gap " + sci(plateau_gap) + " (W_q final " +
               format_number(wq.back()) + ")");
  const auto& w_rc = rc.table.sub[1].w;
  const auto& q_rc = rc.table.sub[1].q;
  const double min_w = *std::min_element(w_rc.begin(), w_rc.end());
  r.record(11, "11.b", "reaction coordinate receives work", min_w < -1e-3,
           "min W_RC " + format_number(min_w));
  const double pw = peak_abs(w_rc), pq = peak_abs(q_rc);
  r.record(11, "11.c", "RC work and heat decay below 10% of peak",
           std::abs(w_rc.back()) < 0.1 * pw && std::abs(q_rc.back()) < 0.1 * pq,
           "final |W_RC| " + sci(std::abs(w_rc.back())) + " of peak " + sci(pw) + ", final |Q_RC| " +
               sci(std::abs(q_rc.back())) + " of peak " + sci(pq));

  const auto& strong = r.scenario("rc-10", [] { return autonomous_only(preset_config("se-rc-strong")); });
  const double ps = peak_abs(strong.table.sub[1].w);
  r.record(11, "11.d", "strong damping lowers the RC work peak", ps < pw,
           "peak |W_RC| " + sci(ps) + " vs " + sci(pw));

  const auto& weak = r.scenario("rc-0.01", [] {
    ScenarioConfig c = autonomous_only(preset_config("se-rc-weak"));
    c.samples = 4000;
    return c;
  });
  const auto peaks = refined_maxima(natural_times(weak), populations_excited(weak.trajectory));
  if (peaks.size() < 4) {
    r.record(11, "11.e", "weak damping: periodic qubit populations", false,
             std::to_string(peaks.size()) + " maxima found, need at least 4");
  } else {
    double lo = kInfinity, hi = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
      lo = std::min(lo, peaks[i] - peaks[i - 1]);
      hi = std::max(hi, peaks[i] - peaks[i - 1]);
    }
    const double drift = (hi - lo) / lo;
    r.record(11, "11.e", "weak damping: periodic qubit populations", drift < 0.02,
             std::to_string(peaks.size() - 1) + " periods of " + format_number(lo) + " to " +
                 format_number(hi) + " (lambda t), drift " + sci(drift));
  }
  r.runtime(11, "11.runtime", start, 120.0);
}

}  // namespace

std::vector<Check> run(const Options& options, std::ostream& log) {
  Runner r(options, log);
  r.guard(1, [&] { criterion_1_2(r); });
  if (!r.selected(1)) r.guard(2, [&] { criterion_1_2(r); });
  r.guard(3, [&] { criterion_3(r); });
  r.guard(4, [&] { criterion_4(r); });
  r.guard(5, [&] { criterion_5(r); });
  r.guard(6, [&] { criterion_6(r); });
  r.guard(7, [&] { criterion_7(r); });
  r.guard(8, [&] { criterion_8(r); });
  r.guard(9, [&] { criterion_9(r); });
  r.guard(10, [&] { criterion_10(r); });
  r.guard(11, [&] { criterion_11(r); });
  return r.take();
}

int exit_status(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.passed) return 1;
  }
  return 0;
}

}  // namespace autothermo::acceptance
