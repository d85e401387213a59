#ifndef CQAD_DRESSED_HPP
#define CQAD_DRESSED_HPP

#include <string>
#include <vector>

#include "cqad/device.hpp"

namespace cqad {

// Quantities in the frame where the transmon rotates at its Stark-shifted
// frequency. Tilde detunings are taken relative to that frequency; at zero
// drive all tilde quantities reduce to the bare ones.
struct DriveFrameEntry {
  std::string label;
  double omega_hz = 0.0;
  cplx amplitude_hz{};
  double delta_hz = 0.0;        // omega - omega_q
  double tilde_delta_hz = 0.0;  // omega - omega_q - S
  cplx xi{};                    // amplitude / delta
  cplx tilde_xi{};              // amplitude / tilde_delta
};

struct ModeFrameEntry {
  int index = 0;
  double delta_hz = 0.0;
  double tilde_delta_hz = 0.0;
  cplx lambda{};        // g / delta
  cplx tilde_lambda{};  // g / tilde_delta
  double stark_shift_hz = 0.0;  // drive-induced shift of this mode
};

struct DressedFrame {
  double stark_shift_hz = 0.0;  // transmon shift S
  std::vector<DriveFrameEntry> drives;
  std::vector<ModeFrameEntry> modes;

  const ModeFrameEntry& mode(int index) const;
  const DriveFrameEntry& drive(const std::string& label) const;
};

struct StarkOptions {
  // Closed form uses the (delta + alpha) denominator. The self-consistent
  // variant solves S = -2 alpha sum |amp/(delta - S)|^2 by fixed point.
  bool self_consistent = false;
  double rel_tol = 1e-10;
  int max_iters = 200;
};

double stark_shift(const TransmonParams& transmon,
                   const std::vector<DriveTone>& drives,
                   const StarkOptions& opts = {});

DressedFrame dressed_frame(const DeviceConfig& device,
                           const std::vector<DriveTone>& drives,
                           const StarkOptions& opts = {});

enum class CouplingKind { TwoMode, ThreeMode };

struct EngineeredCoupling {
  CouplingKind kind = CouplingKind::TwoMode;
  std::vector<int> mode_indices;        // A,B or A,B,C
  cplx rate_hz{};                       // g_v
  double beta = 0.0;                    // drive-dependent correction
  std::vector<std::string> drive_labels;
  double stark_shift_hz = 0.0;
};

// Beamsplitter-type rate between modes A and B from a pair of drive tones
// satisfying omega2 - omega1 = (omega_B + S_B) - (omega_A + S_A).
EngineeredCoupling coupling_two_mode(const DressedFrame& frame,
                                     const TransmonParams& transmon,
                                     int mode_a, int mode_b,
                                     const std::string& drive1,
                                     const std::string& drive2);

// Three-mode conversion rate for the coupling m_A m_B^dag m_C driven at
// omega1 = omega_A + omega_C - omega_B; B is the conjugated mode. A CZ gate
// on qubits (X, Y) with ancilla Z corresponds to (A, B, C) = (X, Z, Y).
EngineeredCoupling coupling_three_mode(const DressedFrame& frame,
                                       const TransmonParams& transmon,
                                       int mode_a, int mode_b, int mode_c,
                                       const std::string& drive1);

// Leading-order correction alpha / (delta_B + delta_1 + alpha), without
// Stark-frame dressing.
double beta_leading_order(const TransmonParams& transmon, double delta_b_hz,
                          double delta_1_hz);

struct DressedDecay {
  int mode_index = 0;
  double kappa_gamma_hz = 0.0;
  double beta_gamma = 0.0;
};

// kappa_gamma = kappa + gamma |g/tilde_delta|^2 (inverse Purcell with the
// drive-dependent correction beta_gamma = (delta/tilde_delta)^2 - 1).
DressedDecay dressed_decay(const DressedFrame& frame, const PhononMode& mode,
                           const TransmonParams& transmon);

}  // namespace cqad

#endif
