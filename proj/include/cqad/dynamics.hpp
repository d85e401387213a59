#ifndef CQAD_DYNAMICS_HPP
#define CQAD_DYNAMICS_HPP

#include <vector>

#include "cqad/device.hpp"
#include "cqad/dressed.hpp"

namespace cqad {

// Time-domain verification of engineered coupling rates: integrates the
// driven transmon-phonon Schroedinger dynamics in the frame rotating at the
// bare frequencies (transmon Kerr ladder absorbed into an interaction
// picture), then fits the slow population oscillation of the first target
// mode. For a resonant coupling g (m m'^dag + h.c.) a single excitation
// oscillates at angular frequency 2g; the fit divides by two.
struct OracleParams {
  int transmon_levels = 5;   // >= 4
  int mode_truncation = 2;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int n_samples = 240;
  // Integration window: t_final = window_periods / (2 g_estimate); covers
  // slightly past the first population minimum.
  double g_estimate_hz = 0.0;
  double window_periods = 0.6;
  double t_final_s = 0.0;  // overrides the estimate when set
  double residual_threshold = 0.05;
};

struct OracleTarget {
  CouplingKind kind = CouplingKind::TwoMode;
  // Two-mode: {A, B}, one phonon starts in A. Three-mode: {A, B, C} with one
  // phonon each in A and B.
  std::vector<int> mode_indices;
};

struct OracleResult {
  double g_fit_hz = 0.0;
  double fit_residual = 0.0;  // RMS of the damped-sinusoid fit
  double t_final_s = 0.0;
  long steps = 0;
  std::vector<double> times_s;
  std::vector<double> population;  // first target mode
};

OracleResult oracle_rate_from_dynamics(const DeviceConfig& device,
                                       const std::vector<DriveTone>& drives,
                                       const OracleTarget& target,
                                       const OracleParams& params = {});

// Damped sinusoid y = c + a exp(-decay t) cos(omega t + phase) fitted by
// Levenberg-Marquardt; omega in rad/s.
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double decay = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
  bool converged = false;
};

SinusoidFit fit_damped_sinusoid(const std::vector<double>& t,
                                const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Static-frame calibration
//
// With at most one tone the frame co-rotating at the drive frequency is
// exactly time-independent; diagonalising it gives the hybridised
// single-excitation energies, including the transmon repulsion g^2/delta
// that measured mode frequencies already contain. Oracle runs place their
// drives against these energies so that the planned condition refers to the
// same frequencies an experiment would use.

struct StaticDressing {
  double vacuum_energy_hz = 0.0;
  std::vector<double> mode_energy_hz;  // dressed frequency per config mode

  double dressed_omega(const DeviceConfig& device, int mode_index) const;
};

StaticDressing static_single_excitation_energies(
    const DeviceConfig& device, const DriveTone* tone = nullptr,
    int transmon_levels = 5, int mode_truncation = 2);

// Drive-2 placement for a beamsplitter conversion A -> B: anchor-dressed
// energy difference plus drive-2's own shift, iterated to the fixed point.
double calibrate_two_mode_drive(const DeviceConfig& device, int mode_a,
                                int mode_b, const DriveTone& anchor,
                                cplx amplitude2_hz);

// Single-tone placement for the conversion (A, C) -> B: position of the
// minimal gap between the |1_A 1_C>- and |1_B>-like static eigenstates.
// Also returns the gap, which equals twice the conversion rate.
struct ThreeModeCalibration {
  double omega1_hz = 0.0;
  double gap_hz = 0.0;
};
ThreeModeCalibration calibrate_three_mode_drive(const DeviceConfig& device,
                                                int mode_a, int mode_b,
                                                int mode_c, cplx amplitude_hz,
                                                double search_halfwidth_hz = 3e6);

}  // namespace cqad

#endif
