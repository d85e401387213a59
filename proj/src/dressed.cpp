#include "cqad/dressed.hpp"

#include <cmath>
#include <stdexcept>

namespace cqad {

namespace {

void check_drive_detuning(const DriveTone& d, double omega_q, double alpha) {
  const double delta = d.omega_hz - omega_q;
  const double scale = std::max(std::abs(d.omega_hz), std::abs(omega_q));
  if (std::abs(delta) <= 1e-6 * scale)
    throw std::invalid_argument("drive resonant with transmon: " + d.label);
  if (std::abs(delta + alpha) <= 1e-6 * scale)
    throw std::invalid_argument("drive resonant with two-photon transition: " +
                                d.label);
}

}  // namespace

const ModeFrameEntry& DressedFrame::mode(int index) const {
  for (const auto& m : modes)
    if (m.index == index) return m;
  throw std::invalid_argument("frame has no mode " + std::to_string(index));
}

const DriveFrameEntry& DressedFrame::drive(const std::string& label) const {
  for (const auto& d : drives)
    if (d.label == label) return d;
  throw std::invalid_argument("frame has no drive '" + label + "'");
}

double stark_shift(const TransmonParams& transmon,
                   const std::vector<DriveTone>& drives,
                   const StarkOptions& opts) {
  if (drives.empty()) return 0.0;
  const double alpha = transmon.alpha_hz;
  double s = 0.0;
  for (const auto& d : drives) {
    check_drive_detuning(d, transmon.omega_q_hz, alpha);
    const double delta = d.omega_hz - transmon.omega_q_hz;
    s += -2.0 * alpha * std::norm(d.amplitude_hz) / (delta * (delta + alpha));
  }
  if (!opts.self_consistent) return s;

  // Fixed point for S = -2 alpha sum_j |amp_j / (delta_j - S)|^2, seeded
  // with the closed form.
  for (int it = 0; it < opts.max_iters; ++it) {
    double next = 0.0;
    for (const auto& d : drives) {
      const double delta = d.omega_hz - transmon.omega_q_hz;
      const double td = delta - s;
      if (td == 0.0)
        throw std::runtime_error("stark fixed point hit a resonance");
      next += -2.0 * alpha * std::norm(d.amplitude_hz) / (td * td);
    }
    if (std::abs(next - s) <= opts.rel_tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    s = next;
  }
  throw std::runtime_error("stark fixed point did not converge");
}

DressedFrame dressed_frame(const DeviceConfig& device,
                           const std::vector<DriveTone>& drives,
                           const StarkOptions& opts) {
  DressedFrame frame;
  frame.stark_shift_hz = stark_shift(device.transmon, drives, opts);
  const double omega_q = device.transmon.omega_q_hz;
  const double s = frame.stark_shift_hz;

  for (const auto& d : drives) {
    DriveFrameEntry e;
    e.label = d.label;
    e.omega_hz = d.omega_hz;
    e.amplitude_hz = d.amplitude_hz;
    e.delta_hz = d.omega_hz - omega_q;
    e.tilde_delta_hz = e.delta_hz - s;
    e.xi = d.amplitude_hz / e.delta_hz;
    e.tilde_xi = d.amplitude_hz / e.tilde_delta_hz;
    frame.drives.push_back(e);
  }

  double sum_xi2 = 0.0;
  for (const auto& d : frame.drives) sum_xi2 += std::norm(d.tilde_xi);

  for (const auto& m : device.spectrum.modes) {
    ModeFrameEntry e;
    e.index = m.index;
    e.delta_hz = m.omega_hz - omega_q;
    e.tilde_delta_hz = e.delta_hz - s;
    if (e.delta_hz == 0.0 || e.tilde_delta_hz == 0.0)
      throw std::invalid_argument("mode " + std::to_string(m.index) +
                                  " resonant with (dressed) transmon");
    e.lambda = m.g_hz / e.delta_hz;
    e.tilde_lambda = m.g_hz / e.tilde_delta_hz;
    e.stark_shift_hz =
        -2.0 * device.transmon.alpha_hz * sum_xi2 * std::norm(e.tilde_lambda);
    frame.modes.push_back(e);
  }
  return frame;
}

namespace {

// Common correction factor (tilde_delta_B + tilde_delta_1) over the same
// plus alpha; pole-guarded.
double correction_factor(double td_b, double td_1, double alpha) {
  const double den = td_b + td_1 + alpha;
  const double scale = std::abs(td_b) + std::abs(td_1) + std::abs(alpha);
  if (std::abs(den) <= 1e-9 * scale)
    throw std::runtime_error("correction pole; adjust drive detuning");
  return (td_b + td_1) / den;
}

}  // namespace

EngineeredCoupling coupling_two_mode(const DressedFrame& frame,
                                     const TransmonParams& transmon,
                                     int mode_a, int mode_b,
                                     const std::string& drive1,
                                     const std::string& drive2) {
  const auto& a = frame.mode(mode_a);
  const auto& b = frame.mode(mode_b);
  const auto& d1 = frame.drive(drive1);
  const auto& d2 = frame.drive(drive2);
  const double alpha = transmon.alpha_hz;

  const double corr = correction_factor(b.tilde_delta_hz, d1.tilde_delta_hz, alpha);

  EngineeredCoupling out;
  out.kind = CouplingKind::TwoMode;
  out.mode_indices = {mode_a, mode_b};
  out.drive_labels = {drive1, drive2};
  out.stark_shift_hz = frame.stark_shift_hz;
  out.rate_hz = -2.0 * alpha * std::conj(d1.tilde_xi) * d2.tilde_xi *
                a.tilde_lambda * std::conj(b.tilde_lambda) * corr;
  const double bare_ratio =
      (d1.delta_hz * d2.delta_hz * a.delta_hz * b.delta_hz) /
      (d1.tilde_delta_hz * d2.tilde_delta_hz * a.tilde_delta_hz *
       b.tilde_delta_hz);
  out.beta = 1.0 - bare_ratio * corr;
  return out;
}

EngineeredCoupling coupling_three_mode(const DressedFrame& frame,
                                       const TransmonParams& transmon,
                                       int mode_a, int mode_b, int mode_c,
                                       const std::string& drive1) {
  const auto& a = frame.mode(mode_a);
  const auto& b = frame.mode(mode_b);
  const auto& c = frame.mode(mode_c);
  const auto& d1 = frame.drive(drive1);
  const double alpha = transmon.alpha_hz;

  const double corr = correction_factor(b.tilde_delta_hz, d1.tilde_delta_hz, alpha);

  EngineeredCoupling out;
  out.kind = CouplingKind::ThreeMode;
  out.mode_indices = {mode_a, mode_b, mode_c};
  out.drive_labels = {drive1};
  out.stark_shift_hz = frame.stark_shift_hz;
  out.rate_hz = -2.0 * alpha * std::conj(d1.tilde_xi) * a.tilde_lambda *
                std::conj(b.tilde_lambda) * c.tilde_lambda * corr;
  const double bare_ratio =
      (d1.delta_hz * a.delta_hz * b.delta_hz * c.delta_hz) /
      (d1.tilde_delta_hz * a.tilde_delta_hz * b.tilde_delta_hz *
       c.tilde_delta_hz);
  out.beta = 1.0 - bare_ratio * corr;
  return out;
}

double beta_leading_order(const TransmonParams& transmon, double delta_b_hz,
                          double delta_1_hz) {
  return transmon.alpha_hz / (delta_b_hz + delta_1_hz + transmon.alpha_hz);
}

DressedDecay dressed_decay(const DressedFrame& frame, const PhononMode& mode,
                           const TransmonParams& transmon) {
  const auto& m = frame.mode(mode.index);
  if (m.tilde_delta_hz == 0.0)
    throw std::invalid_argument("mode resonant with dressed transmon");
  DressedDecay out;
  out.mode_index = mode.index;
  const double ratio = m.delta_hz / m.tilde_delta_hz;
  out.beta_gamma = ratio * ratio - 1.0;
  out.kappa_gamma_hz =
      mode.kappa_hz + transmon.gamma_hz * std::norm(m.tilde_lambda);
  return out;
}

}  // namespace cqad
