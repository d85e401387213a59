// Command-line front end: engineered-coupling evaluation, drive planning,
// fidelity maps, Fock-register simulation and QRAM queries/sweeps.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "cqad/dynamics.hpp"
#include "cqad/fidelity.hpp"
#include "cqad/json_io.hpp"
#include "cqad/manifest.hpp"
#include "cqad/qram.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace cqad;

struct GlobalOpts {
  uint64_t seed = 1;
  int threads = 0;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void finalize(const std::string& subcommand,
              const std::vector<std::string>& configs, uint64_t seed,
              const Timer& timer, const std::vector<std::string>& outputs) {
  RunManifest m;
  m.subcommand = subcommand;
  m.config_paths = configs;
  m.seed = seed;
  m.wall_clock_s = timer.seconds();
  for (const auto& f : outputs)
    m.output_hashes.push_back({f, fnv1a_hex(fnv1a_file(f))});
  write_manifest(m);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out << j.dump(2) << "\n";
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("range must look like a:b");
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

std::vector<uint8_t> parse_bits(const std::string& text, int n) {
  std::vector<uint8_t> bits;
  if (text.size() == static_cast<size_t>(n) &&
      text.find_first_not_of("01") == std::string::npos) {
    for (char c : text) bits.push_back(c == '1');
    return bits;
  }
  const json j = load_json(text);
  for (const auto& b : j) bits.push_back(b.get<int>() != 0);
  if (static_cast<int>(bits.size()) != n)
    throw std::invalid_argument("database length mismatch");
  return bits;
}

std::vector<cplx> parse_address(const std::string& text, int n_leaves,
                                int depth) {
  std::vector<cplx> amps(n_leaves, 0.0);
  if (text.size() == static_cast<size_t>(depth) &&
      text.find_first_not_of("01") == std::string::npos) {
    int j = 0;
    for (char c : text) j = 2 * j + (c == '1');
    amps[j] = 1.0;
    return amps;
  }
  const json j = load_json(text);
  if (static_cast<int>(j.size()) != n_leaves)
    throw std::invalid_argument("address amplitude count mismatch");
  for (int i = 0; i < n_leaves; ++i) amps[i] = cplx_from_json(j[i]);
  return amps;
}

GateType parse_gate(const std::string& g) {
  if (g == "swap") return GateType::Swap;
  if (g == "cz") return GateType::Cz;
  throw std::invalid_argument("gate must be swap or cz");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "classical") return Scheme::Classical;
  if (s == "readonly") return Scheme::ReadOnly;
  if (s == "quantum") return Scheme::Quantum;
  throw std::invalid_argument("scheme must be classical, readonly or quantum");
}

NoiseKind parse_channel(const std::string& c) {
  if (c == "loss") return NoiseKind::Loss;
  if (c == "dephasing") return NoiseKind::Dephasing;
  if (c == "heating") return NoiseKind::Heating;
  throw std::invalid_argument("channel must be loss, dephasing or heating");
}

// Canonical two-family layout used by the multimode fidelity models: FSRs
// nu and nu + delta_nu, 40 modes per family, window centred in the array.
ModeSpectrum canonical_two_family(double nu_hz, double delta_nu_hz,
                                  double base_hz) {
  TwoFamilyScheme scheme;
  scheme.nu1_hz = nu_hz;
  scheme.nu2_hz = nu_hz + delta_nu_hz;
  scheme.count1 = scheme.count2 = 40;
  scheme.base1_hz = base_hz;
  scheme.base2_hz = base_hz - 17.0 * delta_nu_hz + 0.2 * delta_nu_hz;
  scheme.g_hz = 0.0;
  scheme.kappa_hz = 0.0;
  return generate_spectrum(scheme);
}

int cmd_couple(const std::string& config_path, const std::string& drives_path,
               const std::string& kind, std::vector<int> modes,
               std::string drive1, std::string drive2, const std::string& out,
               const GlobalOpts& g, bool run_oracle, double g_estimate) {
  Timer timer;
  const DeviceConfig device = load_device(config_path);
  const ValidationReport report = validate_config(device);
  if (!report.ok()) {
    for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
    return 2;
  }
  const std::vector<DriveTone> drives = drives_from_json(load_json(drives_path));
  const DressedFrame frame = dressed_frame(device, drives);
  if (drive1.empty() && !drives.empty()) drive1 = drives[0].label;
  if (drive2.empty() && drives.size() > 1) drive2 = drives[1].label;

  EngineeredCoupling coupling;
  OracleTarget target;
  if (kind == "two_mode") {
    if (modes.size() != 2) throw std::invalid_argument("two_mode needs 2 modes");
    coupling = coupling_two_mode(frame, device.transmon, modes[0], modes[1],
                                 drive1, drive2);
    target = {CouplingKind::TwoMode, modes};
  } else if (kind == "three_mode") {
    if (modes.size() != 3) throw std::invalid_argument("three_mode needs 3 modes");
    coupling = coupling_three_mode(frame, device.transmon, modes[0], modes[1],
                                   modes[2], drive1);
    target = {CouplingKind::ThreeMode, modes};
  } else {
    throw std::invalid_argument("kind must be two_mode or three_mode");
  }

  json j = to_json(coupling);
  if (run_oracle) {
    OracleParams params;
    params.g_estimate_hz =
        g_estimate > 0.0 ? g_estimate : std::abs(coupling.rate_hz);
    // The dynamics oracle drives the coupling m_A m_B^dag m_C; start from
    // one phonon each in the annihilated modes.
    OracleTarget dyn = target;
    if (kind == "three_mode") dyn.mode_indices = {modes[0], modes[2], modes[1]};
    const OracleResult oracle =
        oracle_rate_from_dynamics(device, drives, dyn, params);
    j["g_fit_hz"] = oracle.g_fit_hz;
    j["fit_residual"] = oracle.fit_residual;
  }
  write_json(out, j);
  finalize(run_oracle ? "oracle" : "couple", {config_path, drives_path}, g.seed,
           timer, {out});
  return 0;
}

int cmd_plan(const std::string& config_path, const std::string& request_path,
             const std::string& out, const GlobalOpts& g) {
  Timer timer;
  const DeviceConfig device = load_device(config_path);
  const json req = load_json(request_path);
  const std::string kind = req.at("kind").get<std::string>();
  std::vector<int> modes;
  for (const auto& m : req.at("modes")) modes.push_back(m.get<int>());
  const int n_tot = req.value("n_tot", 2);

  DrivePlan plan;
  if (kind == "two_mode") {
    DriveTone anchor;
    anchor.omega_hz = req.at("anchor").at("omega_hz").get<double>();
    anchor.amplitude_hz = cplx_from_json(req.at("anchor").at("amplitude_hz"));
    anchor.label = "d1";
    const cplx amp2 = cplx_from_json(req.at("amplitude2_hz"));
    plan = plan_two_mode_drives(device, modes.at(0), modes.at(1), anchor, amp2,
                                n_tot);
  } else if (kind == "three_mode") {
    const cplx amp = cplx_from_json(req.at("amplitude_hz"));
    plan = plan_three_mode_drive(device, modes.at(0), modes.at(1), modes.at(2),
                                 amp, n_tot);
  } else {
    throw std::invalid_argument("kind must be two_mode or three_mode");
  }

  double tolerance = req.value("tolerance_hz", 0.0);
  if (tolerance <= 0.0) {
    const DressedFrame frame = dressed_frame(device, plan.tones);
    double max_rate = 0.0;
    for (const auto& c : plan.intended) {
      const EngineeredCoupling ec =
          c.kind == CouplingKind::TwoMode
              ? coupling_two_mode(frame, device.transmon, c.mode_indices[0],
                                  c.mode_indices[1], plan.tones[0].label,
                                  plan.tones[1].label)
              : coupling_three_mode(frame, device.transmon, c.mode_indices[0],
                                    c.mode_indices[2], c.mode_indices[1],
                                    plan.tones[0].label);
      max_rate = std::max(max_rate, std::abs(ec.rate_hz));
    }
    // Spurious couplings detuned by >> g_v contribute negligibly.
    tolerance = 10.0 * max_rate;
  }
  const CollisionReport collisions = check_drive_set(
      device.spectrum, device.graph, plan.tones, plan.intended, tolerance);

  json j = to_json(plan);
  j["collision_report"] = to_json(collisions);
  write_json(out, j);
  finalize("plan", {config_path, request_path}, g.seed, timer, {out});
  return collisions.pass() ? 0 : 3;
}

int cmd_fidelity_map(const std::string& gate_name, const std::string& mode,
                     const std::string& grid, const std::string& kappa_range,
                     const std::string& gamma_range, const std::string& out,
                     double nu, double delta_nu, double participation,
                     double bound_d, double bound_v, bool first_order,
                     const GlobalOpts& g) {
  Timer timer;
  MapSpec spec;
  const auto x = grid.find('x');
  if (x == std::string::npos) throw std::invalid_argument("grid must be RxC");
  spec.rows = std::stoi(grid.substr(0, x));
  spec.cols = std::stoi(grid.substr(x + 1));
  std::tie(spec.kappa_lo_hz, spec.kappa_hi_hz) = parse_range(kappa_range);
  std::tie(spec.gamma_lo_hz, spec.gamma_hi_hz) = parse_range(gamma_range);

  const InfidelityMap map = infidelity_map(
      spec, parse_gate(gate_name), participation, nu, delta_nu, bound_d,
      bound_v,
      first_order ? InfidelityForm::FirstOrder : InfidelityForm::HigherOrder);

  std::vector<std::string> header;
  if (mode == "compare") {
    header = {"kappa_hz",  "gamma_hz",           "g_opt_direct_hz",
              "infidelity_direct", "constrained_direct", "g_opt_virtual_hz",
              "infidelity_virtual", "constrained_virtual", "log10_ratio"};
  } else {
    header = {"kappa_hz", "gamma_hz", "g_opt_hz", "infidelity", "constrained"};
  }
  CsvWriter csv(out, header);
  for (const auto& cell : map.cells) {
    if (mode == "compare") {
      csv.row({CsvWriter::num(cell.kappa_hz), CsvWriter::num(cell.gamma_hz),
               CsvWriter::num(cell.direct.g_opt_hz),
               CsvWriter::num(cell.direct.infidelity),
               cell.direct.constrained ? "1" : "0",
               CsvWriter::num(cell.virt.g_opt_hz),
               CsvWriter::num(cell.virt.infidelity),
               cell.virt.constrained ? "1" : "0",
               CsvWriter::num(cell.log10_ratio)});
    } else {
      const FidelityReport& r = mode == "direct" ? cell.direct : cell.virt;
      csv.row({CsvWriter::num(cell.kappa_hz), CsvWriter::num(cell.gamma_hz),
               CsvWriter::num(r.g_opt_hz), CsvWriter::num(r.infidelity),
               r.constrained ? "1" : "0"});
    }
  }
  finalize("fidelity-map", {}, g.seed, timer, {out});
  return 0;
}

int cmd_qvolume(double kappa, double gamma, const std::string& gate_name,
                double participation, double nu, double delta_nu, int m_max,
                const std::string& out, const GlobalOpts& g) {
  Timer timer;
  const GateType gate = parse_gate(gate_name);
  const ModeSpectrum spectrum = canonical_two_family(nu, delta_nu, 5e9);
  const CouplingGraph window =
      two_family_window(spectrum, nu, nu + delta_nu);

  std::vector<double> s_v(m_max + 1, 0.0);
  for (int m = 2; m <= m_max; ++m)
    s_v[m] = crowding_coefficient_virtual(spectrum, window, m);

  const GateFidelityInputs inputs = make_inputs(
      kappa, gamma, participation, gate, nu, delta_nu, 10e6,
      gate == GateType::Swap ? 100e3 : 25e3);
  auto one_minus_f = [&](int m) {
    return global_infidelity(inputs, m, Route::Virtual, gate, M_PI * M_PI / 3.0,
                             s_v[m])
        .infidelity;
  };
  const QuantumVolume v = quantum_volume(one_minus_f, 2, m_max);
  write_json(out, {{"M_opt", v.m_opt}, {"V", v.volume}});
  finalize("qvolume", {}, g.seed, timer, {out});
  return 0;
}

int cmd_simulate(const std::string& in_path, const std::string& out,
                 const GlobalOpts& g) {
  Timer timer;
  const json j = load_json(in_path);
  const json& reg_spec = j.at("register");
  FockRegister reg = FockRegister::uniform(
      reg_spec.at("modes").get<int>(), reg_spec.value("truncation", 3));
  SparseFockState state(reg);
  for (const auto& term : j.at("initial")) {
    FockConfig config;
    for (const auto& n : term.at("config"))
      config.push_back(static_cast<uint8_t>(n.get<int>()));
    state.add_term(config, cplx_from_json(term.at("amp")));
  }
  state.normalize();
  for (const auto& gate : j.at("gates")) apply_gate(state, gate_from_json(gate));
  write_json(out, state_to_json(state));
  finalize("simulate", {in_path}, g.seed, timer, {out});
  return 0;
}

int cmd_qram_run(int depth, const std::string& scheme_name,
                 const std::string& db_text, const std::string& address_text,
                 const std::string& out, const GlobalOpts& g) {
  Timer timer;
  const Scheme scheme = parse_scheme(scheme_name);
  const QramTree tree = build_tree(depth);
  const std::vector<uint8_t> bits = parse_bits(db_text, tree.n_leaves);
  const Database db = scheme == Scheme::Classical ? Database::classical(bits)
                      : scheme == Scheme::ReadOnly ? Database::read_only(bits)
                                                   : Database::quantum_bits(bits);
  const std::vector<cplx> address =
      parse_address(address_text, tree.n_leaves, depth);
  const QueryResult result = run_ideal_query(tree, db, address, scheme);
  json j = state_to_json(result.state);
  j["gates_total"] = result.gates_total;
  j["slots"] = result.slots;
  j["scheme"] = scheme_name;
  j["depth"] = depth;
  write_json(out, j);
  finalize("qram run", {}, g.seed, timer, {out});
  return 0;
}

int cmd_qram_sweep(const std::string& depths_text, const std::string& eps_text,
                   const std::string& channel_name, int trials,
                   const std::string& scheme_name, const std::string& out,
                   const GlobalOpts& g) {
  Timer timer;
  SweepRequest req;
  const auto colon = depths_text.find(':');
  if (colon != std::string::npos) {
    const int lo = std::stoi(depths_text.substr(0, colon));
    const int hi = std::stoi(depths_text.substr(colon + 1));
    for (int d = lo; d <= hi; ++d) req.depths.push_back(d);
  } else {
    std::stringstream ss(depths_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) req.depths.push_back(std::stoi(tok));
  }
  std::stringstream ss(eps_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) req.eps_list.push_back(std::stod(tok));
  req.channels = {parse_channel(channel_name)};
  req.trials = trials;
  req.seed = g.seed;
  req.scheme = parse_scheme(scheme_name);

  const std::vector<SweepRow> rows = run_noisy_sweep(req);
  CsvWriter csv(out, {"depth", "N", "eps", "channel", "fidelity", "stderr",
                      "gates_total", "slots"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.depth), std::to_string(r.n),
             CsvWriter::num(r.eps), to_string(r.channel),
             CsvWriter::num(r.fidelity), CsvWriter::num(r.stderr_fidelity),
             std::to_string(r.gates_total), std::to_string(r.slots)});
  finalize("qram sweep", {}, g.seed, timer, {out});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimode phononic quantum memory toolkit"};
  app.require_subcommand(1);
  GlobalOpts gopts;
  app.add_option("--seed", gopts.seed, "Master RNG seed");
  app.add_option("--threads", gopts.threads, "OpenMP thread count (0 = default)");

  // couple / oracle
  std::string config_path, drives_path, kind = "two_mode", out = "out.json";
  std::string drive1, drive2;
  std::vector<int> modes;
  double g_estimate = 0.0;
  auto add_couple_opts = [&](CLI::App* sub, bool oracle) {
    sub->add_option("--config", config_path, "DeviceConfig JSON")->required();
    sub->add_option("--drives", drives_path, "Drive list JSON")->required();
    sub->add_option("--kind", kind, "two_mode | three_mode");
    sub->add_option("--modes", modes, "Mode indices")->required();
    sub->add_option("--drive1", drive1, "First drive label");
    sub->add_option("--drive2", drive2, "Second drive label");
    sub->add_option("--out", out, "Output JSON path");
    if (oracle)
      sub->add_option("--g-estimate", g_estimate,
                      "Rate scale for the integration window (Hz)");
  };
  CLI::App* couple = app.add_subcommand("couple", "Engineered coupling rates");
  add_couple_opts(couple, false);
  CLI::App* oracle = app.add_subcommand("oracle", "Time-domain rate check");
  add_couple_opts(oracle, true);

  // plan
  std::string request_path;
  CLI::App* plan = app.add_subcommand("plan", "Compensated drive planning");
  plan->add_option("--config", config_path, "DeviceConfig JSON")->required();
  plan->add_option("--request", request_path, "Plan request JSON")->required();
  plan->add_option("--out", out, "Output JSON path");

  // fidelity-map
  std::string gate_name = "swap", map_mode = "compare", grid = "50x50";
  std::string kappa_range = "1:1e6", gamma_range = "1:1e6";
  double nu = 10e6, delta_nu = 1e6, participation = 0.01;
  double bound_d = 10e6, bound_v = 100e3;
  bool first_order = false;
  CLI::App* fmap = app.add_subcommand("fidelity-map", "Optimal infidelity grids");
  fmap->add_option("--gate", gate_name, "swap | cz");
  fmap->add_option("--mode", map_mode, "direct | virtual | compare");
  fmap->add_option("--grid", grid, "RxC");
  fmap->add_option("--kappa-range", kappa_range, "a:b (Hz)");
  fmap->add_option("--gamma-range", gamma_range, "a:b (Hz)");
  fmap->add_option("--nu", nu, "FSR (Hz)");
  fmap->add_option("--delta-nu", delta_nu, "Nonuniformity (Hz)");
  fmap->add_option("--participation", participation, "|g/delta|^2");
  fmap->add_option("--g-bound-direct", bound_d, "Direct rate bound (Hz)");
  fmap->add_option("--g-bound-virtual", bound_v, "Virtual rate bound (Hz)");
  fmap->add_flag("--first-order", first_order, "Linear infidelity form");
  fmap->add_option("--out", out, "Output CSV path");

  // qvolume
  double kappa = 100.0, gamma = 1e4;
  int m_max = 16;
  CLI::App* qvol = app.add_subcommand("qvolume", "Quantum volume of a module");
  qvol->add_option("--kappa", kappa, "Phonon decoherence (Hz)");
  qvol->add_option("--gamma", gamma, "Transmon decoherence (Hz)");
  qvol->add_option("--gate", gate_name, "swap | cz");
  qvol->add_option("--participation", participation, "|g/delta|^2");
  qvol->add_option("--nu", nu, "FSR (Hz)");
  qvol->add_option("--delta-nu", delta_nu, "Family FSR difference (Hz)");
  qvol->add_option("--m-max", m_max, "Largest stored-mode count scanned");
  qvol->add_option("--out", out, "Output JSON path");

  // simulate
  std::string sim_in;
  CLI::App* sim = app.add_subcommand("simulate", "Apply a gate list");
  sim->add_option("--in", sim_in, "Gate list JSON")->required();
  sim->add_option("--out", out, "Output JSON path");

  // qram
  CLI::App* qram = app.add_subcommand("qram", "Bucket-brigade queries");
  qram->require_subcommand(1);
  int depth = 2, trials = 1000;
  std::string scheme_name = "classical", db_text, address_text;
  CLI::App* qrun = qram->add_subcommand("run", "Single ideal query");
  qrun->add_option("--depth", depth, "Tree depth")->required();
  qrun->add_option("--scheme", scheme_name, "classical | readonly | quantum");
  qrun->add_option("--db", db_text, "Bitstring or JSON file")->required();
  qrun->add_option("--address", address_text, "Bitstring or amplitude file")
      ->required();
  qrun->add_option("--out", out, "Output JSON path");

  std::string depths_text = "1:5", eps_text = "1e-3", channel_name = "loss";
  CLI::App* qsweep = qram->add_subcommand("sweep", "Noisy scaling sweep");
  qsweep->add_option("--depths", depths_text, "lo:hi or comma list");
  qsweep->add_option("--eps", eps_text, "Comma list of error probabilities");
  qsweep->add_option("--channel", channel_name, "loss | dephasing | heating");
  qsweep->add_option("--trials", trials, "Trajectories per cell");
  qsweep->add_option("--scheme", scheme_name, "classical | readonly | quantum");
  qsweep->add_option("--out", out, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors collapse to exit 1
  }

#ifdef _OPENMP
  if (gopts.threads > 0) omp_set_num_threads(gopts.threads);
#endif

  try {
    if (couple->parsed())
      return cmd_couple(config_path, drives_path, kind, modes, drive1, drive2,
                        out, gopts, false, 0.0);
    if (oracle->parsed())
      return cmd_couple(config_path, drives_path, kind, modes, drive1, drive2,
                        out, gopts, true, g_estimate);
    if (plan->parsed()) return cmd_plan(config_path, request_path, out, gopts);
    if (fmap->parsed())
      return cmd_fidelity_map(gate_name, map_mode, grid, kappa_range,
                              gamma_range, out, nu, delta_nu, participation,
                              bound_d, bound_v, first_order, gopts);
    if (qvol->parsed())
      return cmd_qvolume(kappa, gamma, gate_name, participation, nu, delta_nu,
                         m_max, out, gopts);
    if (sim->parsed()) return cmd_simulate(sim_in, out, gopts);
    if (qram->parsed()) {
      if (qrun->parsed())
        return cmd_qram_run(depth, scheme_name, db_text, address_text, out,
                            gopts);
      if (qsweep->parsed())
        return cmd_qram_sweep(depths_text, eps_text, channel_name, trials,
                              scheme_name, out, gopts);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
