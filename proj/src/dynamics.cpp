#include "cqad/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqad {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// One ladder operator with a rotating coefficient. Entries are grouped by
// transmon level so the interaction-picture Kerr phases cost one complex
// exponential per level class.
struct RotatingOp {
  cplx coeff_hz{};    // drive amplitude or coupling (Hz)
  double delta_hz = 0.0;  // rotation of the coefficient
  struct Entry {
    int row, col;
    double val;
  };
  std::vector<std::vector<Entry>> by_class;  // class = transmon level of col
};

struct HamiltonianModel {
  int dim = 0;
  int q_levels = 0;
  std::vector<double> class_shift_hz;  // Kerr ladder step per class
  std::vector<RotatingOp> ops;
  std::vector<double> population_weight;  // n_A per basis state

  void derivative(double t, const std::vector<cplx>& x,
                  std::vector<cplx>& dx) const {
    std::fill(dx.begin(), dx.end(), cplx(0.0));
    for (const auto& op : ops) {
      const cplx drive_phase =
          std::exp(cplx(0.0, -kTwoPi * op.delta_hz * t));
      for (size_t cls = 0; cls < op.by_class.size(); ++cls) {
        if (op.by_class[cls].empty()) continue;
        const cplx kerr_phase =
            std::exp(cplx(0.0, kTwoPi * class_shift_hz[cls] * t));
        const cplx c = cplx(0.0, -kTwoPi) * op.coeff_hz * drive_phase * kerr_phase;
        const cplx cc = cplx(0.0, -kTwoPi) *
                        std::conj(op.coeff_hz * drive_phase * kerr_phase);
        for (const auto& e : op.by_class[cls]) {
          dx[e.row] += c * e.val * x[e.col];
          dx[e.col] += cc * e.val * x[e.row];
        }
      }
    }
  }
};

HamiltonianModel build_model(const DeviceConfig& device,
                             const std::vector<DriveTone>& drives,
                             const std::vector<int>& mode_indices,
                             const OracleParams& p) {
  if (p.transmon_levels < 4)
    throw std::invalid_argument("transmon truncation must be at least 4 levels");
  if (mode_indices.size() > 3)
    throw std::invalid_argument("reduced model limited to 3 phonon modes");

  HamiltonianModel model;
  model.q_levels = p.transmon_levels;
  const int n_modes = static_cast<int>(mode_indices.size());
  const int d = p.mode_truncation;

  std::vector<int> strides(n_modes + 1);
  int dim = 1;
  for (int m = n_modes - 1; m >= 0; --m) {
    strides[m + 1] = dim;
    dim *= d;
  }
  strides[0] = dim;  // transmon stride
  dim *= model.q_levels;
  model.dim = dim;

  auto q_of = [&](int idx) { return idx / strides[0]; };
  auto n_of = [&](int idx, int m) { return (idx / strides[m + 1]) % d; };

  // Interaction picture over the transmon Kerr ladder E_n = -(alpha/2)
  // n(n-1): raising the transmon from level n rotates by E_{n+1} - E_n =
  // -alpha n.
  model.class_shift_hz.resize(model.q_levels);
  for (int n = 0; n + 1 < model.q_levels; ++n)
    model.class_shift_hz[n] = -device.transmon.alpha_hz * n;

  const double omega_q = device.transmon.omega_q_hz;

  for (const auto& tone : drives) {
    RotatingOp op;
    op.coeff_hz = tone.amplitude_hz;
    op.delta_hz = tone.omega_hz - omega_q;
    op.by_class.resize(model.q_levels);
    for (int i = 0; i < dim; ++i) {
      const int q = q_of(i);
      if (q + 1 >= model.q_levels) continue;
      op.by_class[q].push_back(
          {i + strides[0], i, std::sqrt(static_cast<double>(q + 1))});
    }
    model.ops.push_back(std::move(op));
  }

  for (int m = 0; m < n_modes; ++m) {
    const PhononMode& mode = device.spectrum.mode_by_index(mode_indices[m]);
    RotatingOp op;  // g q^dag m_k rotating at the mode detuning
    op.coeff_hz = mode.g_hz;
    op.delta_hz = mode.omega_hz - omega_q;
    op.by_class.resize(model.q_levels);
    for (int i = 0; i < dim; ++i) {
      const int q = q_of(i);
      const int n = n_of(i, m);
      if (q + 1 >= model.q_levels || n == 0) continue;
      op.by_class[q].push_back(
          {i + strides[0] - strides[m + 1], i,
           std::sqrt(static_cast<double>((q + 1) * n))});
    }
    model.ops.push_back(std::move(op));
  }

  model.population_weight.resize(dim);
  for (int i = 0; i < dim; ++i)
    model.population_weight[i] = static_cast<double>(n_of(i, 0));
  return model;
}

// Dormand-Prince 5(4) adaptive stepper with forced sample endpoints.
struct Rk45 {
  const HamiltonianModel& model;
  double rtol, atol;
  long steps = 0;

  std::vector<cplx> k1, k2, k3, k4, k5, k6, k7, tmp, y5, y4;

  explicit Rk45(const HamiltonianModel& m, double rt, double at)
      : model(m), rtol(rt), atol(at) {
    const int n = m.dim;
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp, &y5, &y4})
      v->assign(n, cplx(0.0));
  }

  void advance_to(double& t, std::vector<cplx>& y, double t_end, double& h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    while (t < t_end) {
      const double step = std::min(h, t_end - t);
      model.derivative(t, y, k1);
      axpy(y, step, {{&k1, 1.0 / 5}});
      model.derivative(t + c2 * step, tmp, k2);
      axpy(y, step, {{&k1, 3.0 / 40}, {&k2, 9.0 / 40}});
      model.derivative(t + c3 * step, tmp, k3);
      axpy(y, step, {{&k1, 44.0 / 45}, {&k2, -56.0 / 15}, {&k3, 32.0 / 9}});
      model.derivative(t + c4 * step, tmp, k4);
      axpy(y, step,
           {{&k1, 19372.0 / 6561}, {&k2, -25360.0 / 2187}, {&k3, 64448.0 / 6561},
            {&k4, -212.0 / 729}});
      model.derivative(t + c5 * step, tmp, k5);
      axpy(y, step,
           {{&k1, 9017.0 / 3168}, {&k2, -355.0 / 33}, {&k3, 46732.0 / 5247},
            {&k4, 49.0 / 176}, {&k5, -5103.0 / 18656}});
      model.derivative(t + step, tmp, k6);
      // 5th order solution
      for (int i = 0; i < model.dim; ++i)
        y5[i] = y[i] + step * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] +
                               125.0 / 192 * k4[i] - 2187.0 / 6784 * k5[i] +
                               11.0 / 84 * k6[i]);
      model.derivative(t + step, y5, k7);
      // embedded 4th order
      for (int i = 0; i < model.dim; ++i)
        y4[i] = y[i] + step * (5179.0 / 57600 * k1[i] + 7571.0 / 16695 * k3[i] +
                               393.0 / 640 * k4[i] - 92097.0 / 339200 * k5[i] +
                               187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
      double err = 0.0;
      for (int i = 0; i < model.dim; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
      }
      if (err <= 1.0) {
        t += step;
        y.swap(y5);
        ++steps;
      }
      const double factor =
          err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h = step * std::clamp(factor, 0.2, 5.0);
      if (h < 1e-16)
        throw std::runtime_error("integrator step size underflow");
    }
  }

 private:
  void axpy(const std::vector<cplx>& y, double step,
            std::initializer_list<std::pair<const std::vector<cplx>*, double>>
                terms) {
    for (int i = 0; i < model.dim; ++i) {
      cplx acc = y[i];
      for (const auto& [k, w] : terms) acc += step * w * (*k)[i];
      tmp[i] = acc;
    }
  }
};

}  // namespace

SinusoidFit fit_damped_sinusoid(const std::vector<double>& t,
                                const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 8)
    throw std::invalid_argument("fit needs matched samples");
  const int n = static_cast<int>(t.size());

  SinusoidFit fit;
  const double ymax = *std::max_element(y.begin(), y.end());
  const double ymin = *std::min_element(y.begin(), y.end());
  fit.offset = 0.5 * (ymax + ymin);
  fit.amplitude = y.front() - fit.offset;
  fit.decay = 0.0;
  fit.phase = 0.0;
  // Frequency seed from the first crossing of the midline.
  double t_cross = t.back();
  for (int i = 1; i < n; ++i) {
    if ((y[i] - fit.offset) * (y[0] - fit.offset) <= 0.0) {
      t_cross = t[i];
      break;
    }
  }
  fit.omega = t_cross > 0.0 ? (M_PI / 2.0) / t_cross : M_PI / t.back();

  Eigen::VectorXd p(5);
  p << fit.offset, fit.amplitude, fit.decay, fit.omega, fit.phase;

  auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r,
                       Eigen::MatrixXd* jac) {
    for (int i = 0; i < n; ++i) {
      const double damp = std::exp(-q(2) * t[i]);
      const double arg = q(3) * t[i] + q(4);
      const double c = std::cos(arg), s = std::sin(arg);
      r(i) = q(0) + q(1) * damp * c - y[i];
      if (jac) {
        (*jac)(i, 0) = 1.0;
        (*jac)(i, 1) = damp * c;
        (*jac)(i, 2) = -t[i] * q(1) * damp * c;
        (*jac)(i, 3) = -t[i] * q(1) * damp * s;
        (*jac)(i, 4) = -q(1) * damp * s;
      }
    }
  };

  Eigen::VectorXd r(n), r_try(n);
  Eigen::MatrixXd jac(n, 5);
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < 200; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::MatrixXd a = jtj;
    for (int i = 0; i < 5; ++i) a(i, i) += lambda * (jtj(i, i) + 1e-12);
    const Eigen::VectorXd delta = a.ldlt().solve(jtr);
    const Eigen::VectorXd p_try = p - delta;
    residuals(p_try, r_try, nullptr);
    const double cost_try = r_try.squaredNorm();
    if (cost_try < cost) {
      p = p_try;
      const double improvement = (cost - cost_try) / std::max(cost, 1e-300);
      cost = cost_try;
      residuals(p, r, &jac);
      lambda = std::max(lambda * 0.3, 1e-12);
      if (improvement < 1e-12) {
        fit.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  fit.offset = p(0);
  fit.amplitude = p(1);
  fit.decay = p(2);
  fit.omega = std::abs(p(3));
  fit.phase = p(4);
  fit.rms_residual = std::sqrt(cost / n);
  if (!fit.converged) fit.converged = fit.rms_residual < 1e-3;
  return fit;
}

namespace {

struct StaticFrame {
  int dim = 0;
  int q_levels = 0;
  int d = 0;
  std::vector<int> strides;  // [0] = transmon, then one per mode
  Eigen::MatrixXcd h;

  StaticFrame(const DeviceConfig& device, const DriveTone* tone, int q_levels_,
              int d_)
      : q_levels(q_levels_), d(d_) {
    const int n_modes = static_cast<int>(device.spectrum.modes.size());
    strides.assign(n_modes + 1, 0);
    dim = 1;
    for (int m = n_modes - 1; m >= 0; --m) {
      strides[m + 1] = dim;
      dim *= d;
    }
    strides[0] = dim;
    dim *= q_levels;

    const double f_rot = tone ? tone->omega_hz : device.transmon.omega_q_hz;
    h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const int q = i / strides[0];
      double e = (device.transmon.omega_q_hz - f_rot) * q -
                 device.transmon.alpha_hz / 2.0 * q * (q - 1);
      for (int m = 0; m < n_modes; ++m) {
        const int n = (i / strides[m + 1]) % d;
        e += (device.spectrum.modes[m].omega_hz - f_rot) * n;
      }
      h(i, i) = e;
      if (tone && q + 1 < q_levels) {
        h(i + strides[0], i) += tone->amplitude_hz * std::sqrt(q + 1.0);
        h(i, i + strides[0]) +=
            std::conj(tone->amplitude_hz) * std::sqrt(q + 1.0);
      }
      for (int m = 0; m < n_modes; ++m) {
        const int n = (i / strides[m + 1]) % d;
        if (q + 1 < q_levels && n > 0) {
          const int j = i + strides[0] - strides[m + 1];
          const cplx v =
              device.spectrum.modes[m].g_hz * std::sqrt((q + 1.0) * n);
          h(j, i) += v;
          h(i, j) += std::conj(v);
        }
      }
    }
  }

  int config_index(int q, const std::vector<int>& occ) const {
    int i = q * strides[0];
    for (size_t m = 0; m < occ.size(); ++m) i += occ[m] * strides[m + 1];
    return i;
  }

  // Eigenvalue of the eigenstate with maximal weight on a configuration.
  double energy_near(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es,
                     int index) const {
    int best = 0;
    double w = -1.0;
    for (int n = 0; n < dim; ++n) {
      const double o = std::norm(es.eigenvectors()(index, n));
      if (o > w) {
        w = o;
        best = n;
      }
    }
    return es.eigenvalues()(best);
  }
};

}  // namespace

double StaticDressing::dressed_omega(const DeviceConfig& device,
                                     int mode_index) const {
  for (size_t m = 0; m < device.spectrum.modes.size(); ++m)
    if (device.spectrum.modes[m].index == mode_index)
      return mode_energy_hz[m];
  throw std::invalid_argument("unknown mode index");
}

StaticDressing static_single_excitation_energies(const DeviceConfig& device,
                                                 const DriveTone* tone,
                                                 int transmon_levels,
                                                 int mode_truncation) {
  const StaticFrame frame(device, tone, transmon_levels, mode_truncation);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame.h);
  const int n_modes = static_cast<int>(device.spectrum.modes.size());
  const double f_rot = tone ? tone->omega_hz : device.transmon.omega_q_hz;

  StaticDressing out;
  std::vector<int> vac(n_modes, 0);
  out.vacuum_energy_hz = frame.energy_near(es, frame.config_index(0, vac));
  for (int m = 0; m < n_modes; ++m) {
    std::vector<int> occ(n_modes, 0);
    occ[m] = 1;
    const double e = frame.energy_near(es, frame.config_index(0, occ));
    out.mode_energy_hz.push_back(e - out.vacuum_energy_hz + f_rot);
  }
  return out;
}

double calibrate_two_mode_drive(const DeviceConfig& device, int mode_a,
                                int mode_b, const DriveTone& anchor,
                                cplx amplitude2_hz) {
  const StaticDressing bare = static_single_excitation_energies(device);
  const StaticDressing with1 =
      static_single_excitation_energies(device, &anchor);
  const double base = with1.dressed_omega(device, mode_b) -
                      with1.dressed_omega(device, mode_a);
  double omega2 = anchor.omega_hz + base;
  for (int it = 0; it < 3; ++it) {
    const DriveTone probe{omega2, amplitude2_hz, "d2"};
    const StaticDressing with2 =
        static_single_excitation_energies(device, &probe);
    const double own_shift =
        (with2.dressed_omega(device, mode_b) - with2.dressed_omega(device, mode_a)) -
        (bare.dressed_omega(device, mode_b) - bare.dressed_omega(device, mode_a));
    omega2 = anchor.omega_hz + base + own_shift;
  }
  return omega2;
}

ThreeModeCalibration calibrate_three_mode_drive(const DeviceConfig& device,
                                                int mode_a, int mode_b,
                                                int mode_c, cplx amplitude_hz,
                                                double search_halfwidth_hz) {
  const int n_modes = static_cast<int>(device.spectrum.modes.size());
  auto pos_of = [&](int idx) {
    for (int m = 0; m < n_modes; ++m)
      if (device.spectrum.modes[m].index == idx) return m;
    throw std::invalid_argument("unknown mode index");
  };
  const int pa = pos_of(mode_a), pb = pos_of(mode_b), pc = pos_of(mode_c);

  const double center = device.spectrum.mode_by_index(mode_a).omega_hz +
                        device.spectrum.mode_by_index(mode_c).omega_hz -
                        device.spectrum.mode_by_index(mode_b).omega_hz;

  auto gap_at = [&](double omega1) {
    const DriveTone tone{omega1, amplitude_hz, "d1"};
    const StaticFrame frame(device, &tone, 5, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame.h);
    std::vector<int> init(n_modes, 0), fin(n_modes, 0);
    init[pa] = 1;
    init[pc] = 1;
    fin[pb] = 1;
    const double ei = frame.energy_near(es, frame.config_index(0, init));
    const double ef = frame.energy_near(es, frame.config_index(0, fin));
    return std::abs(ei - ef);
  };

  // Golden-section on the level gap; its minimum marks the anticrossing.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = center - search_halfwidth_hz, hi = center + search_halfwidth_hz;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = gap_at(a), fb = gap_at(b);
  for (int it = 0; it < 60 && hi - lo > 1.0; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = gap_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = gap_at(b);
    }
  }
  ThreeModeCalibration out;
  out.omega1_hz = 0.5 * (lo + hi);
  out.gap_hz = gap_at(out.omega1_hz);
  return out;
}

OracleResult oracle_rate_from_dynamics(const DeviceConfig& device,
                                       const std::vector<DriveTone>& drives,
                                       const OracleTarget& target,
                                       const OracleParams& params) {
  const int want = target.kind == CouplingKind::TwoMode ? 2 : 3;
  if (static_cast<int>(target.mode_indices.size()) != want)
    throw std::invalid_argument("target mode count mismatch");

  const HamiltonianModel model =
      build_model(device, drives, target.mode_indices, params);

  double t_final = params.t_final_s;
  if (t_final <= 0.0) {
    if (params.g_estimate_hz <= 0.0)
      throw std::invalid_argument("need a rate estimate or explicit window");
    t_final = params.window_periods / (2.0 * params.g_estimate_hz);
  }

  // Initial state: |q=0>, one phonon in the first target mode (two-mode) or
  // in the first two (three-mode).
  std::vector<cplx> y(model.dim, cplx(0.0));
  {
    const int d = params.mode_truncation;
    const int n_modes = static_cast<int>(target.mode_indices.size());
    int idx = 0;
    std::vector<int> occ(n_modes, 0);
    occ[0] = 1;
    if (target.kind == CouplingKind::ThreeMode) occ[1] = 1;
    for (int m = 0; m < n_modes; ++m) idx = idx * d + occ[m];
    y[idx] = 1.0;
  }

  OracleResult result;
  result.t_final_s = t_final;
  Rk45 stepper(model, params.rel_tol, params.abs_tol);
  double t = 0.0;
  double h = 1e-12;
  for (int s = 0; s < params.n_samples; ++s) {
    const double t_target = t_final * s / (params.n_samples - 1);
    if (t_target > t) stepper.advance_to(t, y, t_target, h);
    double pop = 0.0;
    for (int i = 0; i < model.dim; ++i)
      pop += model.population_weight[i] * std::norm(y[i]);
    result.times_s.push_back(t_target);
    result.population.push_back(pop);
  }
  result.steps = stepper.steps;

  const double swing =
      *std::max_element(result.population.begin(), result.population.end()) -
      *std::min_element(result.population.begin(), result.population.end());
  if (swing < 0.1) {
    result.g_fit_hz = 0.0;  // no transfer within the noise floor
    result.fit_residual = swing;
    return result;
  }

  const SinusoidFit fit = fit_damped_sinusoid(result.times_s, result.population);
  result.fit_residual = fit.rms_residual;
  if (fit.rms_residual > params.residual_threshold)
    throw std::runtime_error(
        "no clean oscillation; drives may be off-resonant or too strong");
  // Population oscillates at twice the coupling rate.
  result.g_fit_hz = fit.omega / (2.0 * kTwoPi);
  return result;
}

}  // namespace cqad
