#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(AUTOTHERMO_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) o.out += buf;
  const int raw = pclose(p);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "autothermo-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("list-presets") {
  const Outcome o = cli("list-presets");
  CHECK(o.status == 0);
  CHECK(o.out.find("jc-excited-vacuum") != std::string::npos);
  CHECK(o.out.find("se-rc-weak") != std::string::npos);
}

TEST_CASE("help lists config keys") {
  const Outcome o = cli("--help");
  CHECK(o.status == 0);
  CHECK(o.out.find("output.groups") != std::string::npos);
}

TEST_CASE("run writes csv and gnuplot script") {
  const fs::path out = scratch("ev.csv");
  const Outcome o = cli("run --preset jc-excited-vacuum --samples 40 --gnuplot --out " + out.string());
  REQUIRE(o.status == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("# preset=jc-excited-vacuum", 0) == 0);
  std::ifstream g(std::string(AUTOTHERMO_GOLDEN_DIR) + "/jc-excited-vacuum.header");
  std::string header;
  std::getline(g, header);
  CHECK(csv.find("\n" + header + "\n") != std::string::npos);
  CHECK(slurp(out.string() + ".gp").find(out.string()) != std::string::npos);

  const Outcome again = cli("run --preset jc-excited-vacuum --samples 40");
  CHECK(again.status == 0);
  CHECK(again.out == csv);
}

TEST_CASE("config file with overrides") {
  const fs::path cfg = scratch("qq.cfg");
  std::ofstream(cfg) << "# two qubits\npreset=qq-excited-ground\noutput.groups=autonomous\n";
  const Outcome o = cli("run --config " + cfg.string() + " --samples 10 --tmax 0.5");
  REQUIRE(o.status == 0);
  CHECK(o.out.find("samples=10") != std::string::npos);
  CHECK(o.out.find("I_AB") == std::string::npos);
  std::size_t lines = 0;
  for (char c : o.out) lines += c == '\n';
  CHECK(lines == 13);
}

TEST_CASE("alpha override") {
  const Outcome o = cli("run --preset jc-coherent-drive --alpha 2 --samples 5 --tmax 0.05");
  CHECK(o.status == 0);
  CHECK(o.out.find("initial.B=coherent:2") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(cli("run --preset no-such-preset").status == 1);
  CHECK(cli("frobnicate").status == 1);
  const fs::path bad = scratch("bad.cfg");
  std::ofstream(bad) << "preset=jc-excited-vacuum\nmodel.g=abc\n";
  CHECK(cli("run --config " + bad.string()).status == 1);
  CHECK(cli("run --config " + scratch("missing.cfg").string()).status == 3);
  CHECK(cli("run --preset se-lindblad --samples 10 --out /nonexistent-dir/x.csv").status == 3);
  const fs::path coarse = scratch("coarse.cfg");
  std::ofstream(coarse) << "preset=se-lindblad\ninitial.A=superposition\ndt=100\n";
  CHECK(cli("run --config " + coarse.string()).status == 2);
}

TEST_CASE("verify runs selected criteria") {
  const Outcome o = cli("verify --criterion 6");
  CHECK(o.status == 0);
  CHECK(o.out.find("[PASS] 6.a") != std::string::npos);
  CHECK(o.out.find("[PASS] 1.a") == std::string::npos);
}
