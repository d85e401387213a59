#include "cqad/device.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cqad {

std::string to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::Uniform: return "uniform";
    case SchemeTag::PointDefect: return "point_defect";
    case SchemeTag::TwoFamily: return "two_family";
    case SchemeTag::Composite: return "composite";
    case SchemeTag::Custom: return "custom";
  }
  return "custom";
}

const PhononMode& ModeSpectrum::mode_by_index(int index) const {
  for (const auto& m : modes) {
    if (m.index == index) return m;
  }
  throw std::invalid_argument("unknown mode index " + std::to_string(index));
}

bool ModeSpectrum::has_index(int index) const {
  for (const auto& m : modes) {
    if (m.index == index) return true;
  }
  return false;
}

ValidationReport validate_config(const DeviceConfig& config) {
  ValidationReport report;
  auto err = [&](const std::string& msg) { report.errors.push_back(msg); };
  auto warn = [&](const std::string& msg) { report.warnings.push_back(msg); };

  const auto& t = config.transmon;
  if (!(t.alpha_hz > 0.0)) err("anharmonicity must be positive");
  if (t.gamma_hz < 0.0) err("negative transmon decoherence rate");
  if (t.gamma_phi_hf_hz < 0.0) err("negative dephasing rate");
  if (!(t.omega_q_hz > 0.0)) err("transmon frequency must be positive");

  std::set<int> seen;
  const PhononMode* prev = nullptr;
  for (const auto& m : config.spectrum.modes) {
    std::ostringstream tag;
    tag << "mode " << m.index << ": ";
    if (!(m.omega_hz > 0.0)) err(tag.str() + "frequency must be positive");
    if (m.kappa_hz < 0.0) err(tag.str() + "negative decoherence rate");
    if (!seen.insert(m.index).second) err(tag.str() + "duplicate index");
    if (prev && !(m.omega_hz > prev->omega_hz))
      err(tag.str() + "frequencies not strictly increasing");
    const double delta = m.omega_hz - t.omega_q_hz;
    if (delta != 0.0) {
      const double lam = std::abs(m.g_hz) / std::abs(delta);
      if (lam > kDispersiveWarnThreshold) {
        std::ostringstream w;
        w << "mode " << m.index << ": |g/delta| = " << lam
          << " exceeds dispersive threshold " << kDispersiveWarnThreshold;
        warn(w.str());
      }
    } else if (std::abs(m.g_hz) > 0.0) {
      warn(tag.str() + "resonant with transmon");
    }
    prev = &m;
  }

  for (int s : config.graph.storage) {
    if (!config.spectrum.has_index(s))
      err("storage set references unknown mode " + std::to_string(s));
  }
  std::set<int> storage(config.graph.storage.begin(), config.graph.storage.end());
  for (const auto& [a, b] : config.graph.pairs) {
    if (!storage.count(a) || !storage.count(b))
      err("pair (" + std::to_string(a) + "," + std::to_string(b) +
          ") not drawn from storage set");
    if (a == b) err("degenerate pair (" + std::to_string(a) + ")");
  }
  return report;
}

std::vector<double> spacing_profile(const ModeSpectrum& spectrum) {
  if (spectrum.modes.size() < 2)
    throw std::invalid_argument("insufficient modes");
  std::vector<double> out;
  out.reserve(spectrum.modes.size() - 1);
  for (size_t j = 0; j + 1 < spectrum.modes.size(); ++j)
    out.push_back(spectrum.modes[j + 1].omega_hz - spectrum.modes[j].omega_hz);
  return out;
}

}  // namespace cqad
