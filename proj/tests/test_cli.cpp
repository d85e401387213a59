#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cqad/json_io.hpp"
#include "cqad/spectrum.hpp"

using namespace cqad;

namespace {

std::string binary() {
  const char* env = std::getenv("CQADCTL_BIN");
  return env ? env : "./cqadctl";
}

int run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_reference_device(const std::string& path) {
  DeviceConfig d;
  d.transmon = {5.0e9, 150e6, 0.0, 0.0};
  d.spectrum.modes = {{0, 5.1e9, 10e6, 0.0},
                      {1, 5.11e9, 10e6, 0.0},
                      {2, 5.2e9, 10e6, 0.0}};
  d.graph.storage = {0, 1, 2};
  d.graph.pairs = {{0, 1}};
  std::ofstream out(path);
  out << to_json(d).dump(2);
}

}  // namespace

TEST_CASE("cli: unknown flags exit with usage code 1") {
  CHECK(run("--no-such-flag") == 1);
  CHECK(run("fidelity-map --bogus") == 1);
}

TEST_CASE("cli: couple computes a rate from config and drives") {
  write_reference_device("/tmp/cli_dev.json");
  {
    std::ofstream drv("/tmp/cli_drv.json");
    drv << R"({"drives":[{"omega_hz":5.4e9,"amplitude_hz":40e6,"label":"d1"},)"
        << R"({"omega_hz":5.41e9,"amplitude_hz":41e6,"label":"d2"}]})";
  }
  CHECK(run("couple --config /tmp/cli_dev.json --drives /tmp/cli_drv.json "
            "--kind two_mode --modes 0 1 --out /tmp/cli_couple.json") == 0);
  const json j = load_json("/tmp/cli_couple.json");
  CHECK(j.at("kind") == "two_mode");
  CHECK(std::abs(j.at("rate_hz_re").get<double>()) > 0.0);
  // Manifest written alongside the output.
  const json manifest = load_json("/tmp/cli_couple.json.manifest.json");
  CHECK(manifest.at("subcommand") == "couple");

  // Invalid device rejected with exit code 2.
  {
    std::ofstream bad("/tmp/cli_bad.json");
    bad << R"({"transmon":{"omega_q_hz":5e9,"alpha_hz":-1,"gamma_hz":0,)"
        << R"("gamma_phi_hf_hz":0},"modes":[]})";
  }
  CHECK(run("couple --config /tmp/cli_bad.json --drives /tmp/cli_drv.json "
            "--kind two_mode --modes 0 1 --out /tmp/x.json") == 2);
}

TEST_CASE("cli: fidelity map emits the requested grid") {
  CHECK(run("fidelity-map --gate swap --mode compare --grid 4x3 "
            "--kappa-range 1:1e6 --gamma-range 1:1e6 "
            "--out /tmp/cli_map.csv") == 0);
  std::ifstream in("/tmp/cli_map.csv");
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line.rfind("kappa_hz,gamma_hz,", 0) == 0);
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);
}

TEST_CASE("cli: qram sweep is byte-identical under a fixed seed") {
  const std::string args =
      "--seed 42 qram sweep --depths 1:2 --eps 5e-3 --channel loss "
      "--trials 120 --scheme readonly --out ";
  CHECK(run(args + "/tmp/cli_sweep_a.csv") == 0);
  CHECK(run(args + "/tmp/cli_sweep_b.csv") == 0);
  const std::string a = slurp("/tmp/cli_sweep_a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp("/tmp/cli_sweep_b.csv"));
  // Header and row shape.
  CHECK(a.rfind("depth,N,eps,channel,fidelity,stderr,gates_total,slots", 0) ==
        0);
}

TEST_CASE("cli: qram run returns the queried bit") {
  CHECK(run("qram run --depth 2 --scheme classical --db 0110 "
            "--address 10 --out /tmp/cli_qram.json") == 0);
  const json j = load_json("/tmp/cli_qram.json");
  CHECK(j.at("gates_total").get<long>() == 11 * 4 - 2 * 2 - 8);
  // Address 10 -> leaf 2 -> D_2 = 1 lands in the bus register (mode 2+1=...).
  // The bus register is mode index depth (= 2).
  bool found = false;
  for (const auto& term : j.at("terms")) {
    if (term.at("config")[2].get<int>() == 1) found = true;
  }
  CHECK(found);
}

TEST_CASE("cli: simulate applies a gate list") {
  {
    std::ofstream in("/tmp/cli_sim.json");
    in << R"({"register":{"modes":2,"truncation":3},)"
       << R"("initial":[{"config":[1,0],"amp":1.0}],)"
       << R"("gates":[{"kind":"beamsplitter","modes":[0,1],)"
       << R"("theta":0.7853981633974483,"phi":1.5707963267948966}]})";
  }
  CHECK(run("simulate --in /tmp/cli_sim.json --out /tmp/cli_sim_out.json") == 0);
  const json j = load_json("/tmp/cli_sim_out.json");
  CHECK(j.at("terms").size() == 2);
}

TEST_CASE("cli: plan emits a collision-checked drive plan") {
  // Nonuniform two-family device in the selective window.
  TwoFamilyScheme t;
  t.nu1_hz = 10e6;
  t.nu2_hz = 10.85e6;
  t.count1 = t.count2 = 40;
  t.base1_hz = 6.0e9;
  t.base2_hz = 6.0e9 - 16.8 * 0.85e6;
  t.g_hz = 10e6;
  DeviceConfig d;
  d.transmon = {5.0e9, 150e6, 0.0, 0.0};
  d.spectrum = generate_spectrum(t);
  d.graph = two_family_window(d.spectrum, 10e6, 10.85e6);
  {
    std::ofstream out("/tmp/cli_plan_dev.json");
    out << to_json(d).dump(2);
  }
  {
    std::ofstream req("/tmp/cli_plan_req.json");
    req << R"({"kind":"two_mode","modes":[)" << d.graph.pairs[0].first << ","
        << d.graph.pairs[0].second
        << R"(],"n_tot":4,"anchor":{"omega_hz":7.5e9,"amplitude_hz":2.5e8},)"
        << R"("amplitude2_hz":2.5e8})";
  }
  CHECK(run("plan --config /tmp/cli_plan_dev.json --request "
            "/tmp/cli_plan_req.json --out /tmp/cli_plan.json") == 0);
  const json j = load_json("/tmp/cli_plan.json");
  CHECK(j.at("collision_report").at("pass") == true);
  CHECK(j.at("tones").size() == 2);
}

TEST_CASE("cli: qvolume reports the optimal module size") {
  CHECK(run("qvolume --kappa 100 --gamma 1e4 --gate swap --delta-nu 0.85e6 "
            "--out /tmp/cli_qv.json") == 0);
  const json j = load_json("/tmp/cli_qv.json");
  CHECK(j.at("M_opt").get<int>() >= 2);
  CHECK(j.at("M_opt").get<int>() <= 12);
  CHECK(j.at("V").get<double>() >= 4.0);
}
