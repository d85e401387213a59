#include "cqad/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace cqad {

namespace {

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
  for (const auto& k : required)
    if (!j.contains(k)) throw std::invalid_argument("missing key '" + k + "'");
  for (const auto& [k, v] : j.items()) {
    if (!required.count(k) && !optional.count(k))
      throw std::invalid_argument("unknown key '" + k + "'");
  }
}

}  // namespace

json to_json(cplx value) {
  if (value.imag() == 0.0) return value.real();
  return json::array({value.real(), value.imag()});
}

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

DeviceConfig device_from_json(const json& j) {
  require_keys(j, {"transmon", "modes"}, {"graph"});
  DeviceConfig config;

  const json& t = j.at("transmon");
  require_keys(t, {"omega_q_hz", "alpha_hz", "gamma_hz", "gamma_phi_hf_hz"});
  config.transmon.omega_q_hz = t.at("omega_q_hz").get<double>();
  config.transmon.alpha_hz = t.at("alpha_hz").get<double>();
  config.transmon.gamma_hz = t.at("gamma_hz").get<double>();
  config.transmon.gamma_phi_hf_hz = t.at("gamma_phi_hf_hz").get<double>();

  for (const json& m : j.at("modes")) {
    require_keys(m, {"index", "omega_hz", "g_hz", "kappa_hz"});
    PhononMode mode;
    mode.index = m.at("index").get<int>();
    mode.omega_hz = m.at("omega_hz").get<double>();
    mode.g_hz = cplx_from_json(m.at("g_hz"));
    mode.kappa_hz = m.at("kappa_hz").get<double>();
    config.spectrum.modes.push_back(mode);
  }
  std::sort(config.spectrum.modes.begin(), config.spectrum.modes.end(),
            [](const PhononMode& a, const PhononMode& b) {
              return a.omega_hz < b.omega_hz;
            });

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    require_keys(g, {"storage", "pairs"});
    for (const json& s : g.at("storage"))
      config.graph.storage.push_back(s.get<int>());
    for (const json& p : g.at("pairs")) {
      if (!p.is_array() || p.size() != 2)
        throw std::invalid_argument("pair must be [i, j]");
      config.graph.pairs.push_back({p[0].get<int>(), p[1].get<int>()});
    }
  }
  return config;
}

json to_json(const DeviceConfig& config) {
  json modes = json::array();
  for (const auto& m : config.spectrum.modes) {
    modes.push_back({{"index", m.index},
                     {"omega_hz", m.omega_hz},
                     {"g_hz", to_json(m.g_hz)},
                     {"kappa_hz", m.kappa_hz}});
  }
  json pairs = json::array();
  for (const auto& [a, b] : config.graph.pairs) pairs.push_back({a, b});
  return {{"transmon",
           {{"omega_q_hz", config.transmon.omega_q_hz},
            {"alpha_hz", config.transmon.alpha_hz},
            {"gamma_hz", config.transmon.gamma_hz},
            {"gamma_phi_hf_hz", config.transmon.gamma_phi_hf_hz}}},
          {"modes", modes},
          {"graph", {{"storage", config.graph.storage}, {"pairs", pairs}}}};
}

std::vector<DriveTone> drives_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("drives") : j;
  if (j.is_object()) require_keys(j, {"drives"});
  std::vector<DriveTone> drives;
  int auto_label = 1;
  for (const json& d : arr) {
    require_keys(d, {"omega_hz", "amplitude_hz"}, {"label"});
    DriveTone tone;
    tone.omega_hz = d.at("omega_hz").get<double>();
    tone.amplitude_hz = cplx_from_json(d.at("amplitude_hz"));
    tone.label = d.contains("label") ? d.at("label").get<std::string>()
                                     : "d" + std::to_string(auto_label);
    ++auto_label;
    drives.push_back(tone);
  }
  return drives;
}

json to_json(const std::vector<DriveTone>& drives) {
  json arr = json::array();
  for (const auto& d : drives)
    arr.push_back({{"omega_hz", d.omega_hz},
                   {"amplitude_hz", to_json(d.amplitude_hz)},
                   {"label", d.label}});
  return {{"drives", arr}};
}

json to_json(const EngineeredCoupling& coupling) {
  return {{"kind", coupling.kind == CouplingKind::TwoMode ? "two_mode"
                                                          : "three_mode"},
          {"modes", coupling.mode_indices},
          {"rate_hz_re", coupling.rate_hz.real()},
          {"rate_hz_im", coupling.rate_hz.imag()},
          {"beta", coupling.beta},
          {"stark_shift_hz", coupling.stark_shift_hz},
          {"drives", coupling.drive_labels}};
}

json to_json(const DrivePlan& plan) {
  json intended = json::array();
  for (const auto& c : plan.intended)
    intended.push_back(
        {{"kind", c.kind == CouplingKind::TwoMode ? "two_mode" : "three_mode"},
         {"modes", c.mode_indices}});
  return {{"tones", to_json(plan.tones).at("drives")},
          {"intended", intended},
          {"compensation",
           {{"stark_terms_hz", plan.compensation.stark_terms_hz},
            {"kerr_terms_hz", plan.compensation.kerr_terms_hz},
            {"residual_bound_hz", plan.compensation.residual_bound_hz}}},
          {"iterations", plan.iterations}};
}

json to_json(const CollisionReport& report) {
  json collisions = json::array();
  for (const auto& c : report.collisions) {
    collisions.push_back(
        {{"drives", c.drive_labels},
         {"kind", c.coupling.kind == CouplingKind::TwoMode ? "two_mode"
                                                           : "three_mode"},
         {"modes", c.coupling.mode_indices},
         {"detuning_hz", c.detuning_hz}});
  }
  return {{"pass", report.pass()},
          {"tolerance_hz", report.tolerance_hz},
          {"collisions", collisions}};
}

json to_json(const ValidationReport& report) {
  return {{"ok", report.ok()},
          {"errors", report.errors},
          {"warnings", report.warnings}};
}

GateSpec gate_from_json(const json& j) {
  require_keys(j, {"kind", "modes"}, {"theta", "phi"});
  GateSpec g;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "beamsplitter") g.kind = GateKind::Beamsplitter;
  else if (kind == "three_mode") g.kind = GateKind::ThreeMode;
  else if (kind == "cz") g.kind = GateKind::Cz;
  else if (kind == "cswap") g.kind = GateKind::Cswap;
  else if (kind == "phase") g.kind = GateKind::Phase;
  else if (kind == "dual_rail_rotation") g.kind = GateKind::DualRailRotation;
  else throw std::invalid_argument("unknown gate kind '" + kind + "'");
  for (const json& m : j.at("modes")) g.modes.push_back(m.get<int>());
  g.theta = j.value("theta", 0.0);
  g.phi = j.value("phi", 0.0);
  return g;
}

json to_json(const GateSpec& gate) {
  std::string kind;
  switch (gate.kind) {
    case GateKind::Beamsplitter: kind = "beamsplitter"; break;
    case GateKind::ThreeMode: kind = "three_mode"; break;
    case GateKind::Cz: kind = "cz"; break;
    case GateKind::Cswap: kind = "cswap"; break;
    case GateKind::Phase: kind = "phase"; break;
    case GateKind::DualRailRotation: kind = "dual_rail_rotation"; break;
  }
  return {{"kind", kind}, {"modes", gate.modes}, {"theta", gate.theta},
          {"phi", gate.phi}};
}

json state_to_json(const SparseFockState& state) {
  // Canonical order: configurations sorted lexicographically.
  std::vector<std::pair<FockConfig, cplx>> terms(state.terms().begin(),
                                                 state.terms().end());
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  json arr = json::array();
  for (const auto& [config, amp] : terms) {
    json c = json::array();
    for (uint8_t n : config) c.push_back(static_cast<int>(n));
    arr.push_back({{"config", c},
                   {"amp", json::array({amp.real(), amp.imag()})}});
  }
  return {{"n_modes", state.reg().n_modes}, {"terms", arr}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

DeviceConfig load_device(const std::string& path) {
  return device_from_json(load_json(path));
}

}  // namespace cqad
