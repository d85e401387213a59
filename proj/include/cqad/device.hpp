#ifndef CQAD_DEVICE_HPP
#define CQAD_DEVICE_HPP

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// All frequencies and rates in this library are ordinary frequencies (Hz,
// i.e. omega/2pi). Angular conversion happens only inside time-evolution
// kernels.

namespace cqad {

using cplx = std::complex<double>;

struct TransmonParams {
  double omega_q_hz = 0.0;        // transition frequency
  double alpha_hz = 0.0;          // Kerr anharmonicity, > 0
  double gamma_hz = 0.0;          // decoherence rate
  double gamma_phi_hf_hz = 0.0;   // high-frequency pure dephasing rate
};

struct PhononMode {
  int index = 0;
  double omega_hz = 0.0;   // mode frequency
  cplx g_hz{0.0, 0.0};     // bare coupling to the transmon
  double kappa_hz = 0.0;   // bare decoherence rate
};

enum class SchemeTag { Uniform, PointDefect, TwoFamily, Composite, Custom };

std::string to_string(SchemeTag tag);

struct ModeSpectrum {
  std::vector<PhononMode> modes;  // strictly increasing in omega_hz
  SchemeTag scheme_tag = SchemeTag::Custom;

  const PhononMode& mode_by_index(int index) const;
  bool has_index(int index) const;
};

// Vertices are the storage set S; edges P are the protected couplings.
struct CouplingGraph {
  std::vector<int> storage;                  // mode indices, the set S
  std::vector<std::pair<int, int>> pairs;    // unordered pairs from S, the set P
};

struct DriveTone {
  double omega_hz = 0.0;
  cplx amplitude_hz{0.0, 0.0};
  std::string label;
};

struct DeviceConfig {
  TransmonParams transmon;
  ModeSpectrum spectrum;
  CouplingGraph graph;
};

// Dispersive warning threshold on |g/delta|. The perturbative expansion
// wants lambda << 1; warnings fire well before it visibly fails.
inline constexpr double kDispersiveWarnThreshold = 1.0 / 3.0;

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

ValidationReport validate_config(const DeviceConfig& config);

// Successive spacings omega_{j+1} - omega_j. Throws std::invalid_argument
// ("insufficient modes") for fewer than two modes.
std::vector<double> spacing_profile(const ModeSpectrum& spectrum);

}  // namespace cqad

#endif
