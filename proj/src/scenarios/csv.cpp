#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "autothermo/errors.hpp"
#include "autothermo/scenarios.hpp"

namespace autothermo {
namespace {

struct Column {
  std::string name;
  std::function<double(std::size_t)> value;
};

std::vector<Column> columns(const ScenarioResult& r) {
  const auto& cfg = r.config;
  const auto& tab = r.table;
  const double scale = cfg.time_scale();
  std::vector<Column> cols;
  cols.push_back({"t", [&tab, scale](std::size_t i) { return tab.times[i] * scale; }});

  static const char* suffix[] = {"_A", "_B"};
  if (cfg.wants(ColumnGroup::autonomous)) {
    for (std::size_t j = 0; j < tab.sub.size(); ++j) {
      const SubsystemSeries* s = &tab.sub[j];
      auto add = [&](const char* name, const std::vector<double> SubsystemSeries::*field) {
        cols.push_back({std::string(name) + suffix[j], [s, field](std::size_t i) { return (s->*field)[i]; }});
      };
      add("U", &SubsystemSeries::u);
      add("Uth", &SubsystemSeries::u_th);
      add("S", &SubsystemSeries::s);
      add("beta", &SubsystemSeries::beta);
      add("Q", &SubsystemSeries::q);
      add("W", &SubsystemSeries::w);
      add("ergo", &SubsystemSeries::ergotropy);
      add("exergy", &SubsystemSeries::exergy);
      add("nonuni", &SubsystemSeries::nonunitary);
      add("sigma", &SubsystemSeries::sigma_rhs);
    }
  }
  if (!tab.bipartite()) return cols;
  if (cfg.wants(ColumnGroup::info)) {
    cols.push_back({"I_AB", [&tab](std::size_t i) { return tab.mutual_information[i]; }});
    cols.push_back({"E_int", [&tab](std::size_t i) { return tab.interaction_energy[i]; }});
  }
  if (!tab.comparators.empty()) {
    const ComparatorSeries* c = &tab.comparators[0];
    if (cfg.wants(ColumnGroup::standard)) {
      cols.push_back({"W_st_A", [c](std::size_t i) { return c->w_st[i]; }});
      cols.push_back({"Q_st_A", [c](std::size_t i) { return c->q_st[i]; }});
    }
    if (cfg.wants(ColumnGroup::mca)) {
      cols.push_back({"Wdot_MCA_A", [c](std::size_t i) { return c->w_mca_rate[i]; }});
      cols.push_back({"Qdot_MCA_A", [c](std::size_t i) { return c->q_mca_rate[i]; }});
    }
  }
  return cols;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> csv_columns(const ScenarioResult& result) {
  std::vector<std::string> names;
  for (const auto& c : columns(result)) names.push_back(c.name);
  return names;
}

std::string csv_metadata(const ScenarioResult& result) { return "# " + result.table.provenance; }

void write_csv(const ScenarioResult& result, std::ostream& os) {
  const auto cols = columns(result);
  os << csv_metadata(result) << '\n';
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].name;
  os << '\n';
  for (std::size_t i = 0; i < result.table.times.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      os << (c ? "," : "") << format_number(cols[c].value(i));
    }
    os << '\n';
  }
}

void emit_csv(const ScenarioResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_csv(result, f);
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string gnuplot_script(const ScenarioResult& result, const std::string& csv_path) {
  const auto names = csv_columns(result);
  auto index = [&](const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == n) return static_cast<int>(i) + 1;
    }
    return 0;
  };
  std::ostringstream os;
  os << "# plots internal energy, heat and work\n"
     << "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n"
     << "set xlabel '" << result.config.time_label() << "'\nset ylabel 'energy (hbar omega)'\n";
  const std::size_t n = result.table.sub.size();
  if (n == 2) os << "set multiplot layout 2,1\n";
  static const char* suffix[] = {"_A", "_B"};
  for (std::size_t j = 0; j < n; ++j) {
    std::string line = "plot";
    const char* sep = " ";
    for (const char* q : {"U", "Q", "W"}) {
      const int col = index(std::string(q) + suffix[j]);
      if (col == 0) continue;
      line += std::string(sep) + "'" + csv_path + "' using 1:" + std::to_string(col) + " with lines";
      sep = ", ";
    }
    if (std::string(sep) == ", ") os << line << '\n';
  }
  if (n == 2) os << "unset multiplot\n";
  os << "pause -1\n";
  return os.str();
}

}  // namespace autothermo
