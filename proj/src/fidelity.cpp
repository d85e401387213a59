#include "cqad/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cqad {

double duration_constant(Route route, GateType gate) {
  if (route == Route::Direct) return gate == GateType::Swap ? 5.0 : 4.0;
  return gate == GateType::Swap ? 1.0 : 2.0;
}

double kappa_bar_gamma(const GateFidelityInputs& inputs, GateType gate) {
  const auto& k = inputs.kappa_gamma_hz;
  if (gate == GateType::Swap) {
    if (k.size() < 2) throw std::invalid_argument("SWAP needs two dressed rates");
    return k[0] + k[1];
  }
  if (k.size() < 3) throw std::invalid_argument("CZ needs three dressed rates");
  return (k[0] + k[1] + k[2]) / 2.0;
}

GateFidelityInputs make_inputs(double kappa_hz, double gamma_hz,
                               double participation, GateType gate,
                               double nu_hz, double delta_nu_hz,
                               double g_bound_direct_hz,
                               double g_bound_virtual_hz) {
  GateFidelityInputs in;
  in.kappa_hz = kappa_hz;
  in.gamma_hz = gamma_hz;
  const double kg = kappa_hz + gamma_hz * participation;
  in.kappa_gamma_hz.assign(gate == GateType::Swap ? 2 : 3, kg);
  in.nu_hz = nu_hz;
  in.delta_nu_hz = delta_nu_hz;
  in.g_bound_direct_hz = g_bound_direct_hz;
  in.g_bound_virtual_hz = g_bound_virtual_hz;
  return in;
}

namespace {

double combine(double kt, double eps, InfidelityForm form) {
  if (form == InfidelityForm::FirstOrder) return kt + eps;
  return 1.0 - std::exp(-kt) * std::max(0.0, 1.0 - eps);
}

struct Objective {
  double rate_hz;     // total decoherence rate
  double c;           // duration constant
  double scale_hz;    // nu or delta_nu
  double crowding;    // S prefactor on (g/scale)^2

  double operator()(double g_hz, InfidelityForm form) const {
    const double kt = rate_hz * c * M_PI / (2.0 * g_hz);
    const double x = g_hz / scale_hz;
    return combine(kt, crowding * x * x, form);
  }
};

Objective make_objective(const GateFidelityInputs& in, Route route,
                         GateType gate) {
  Objective obj;
  obj.c = duration_constant(route, gate);
  obj.crowding = 1.0;
  if (route == Route::Direct) {
    obj.rate_hz = in.kappa_hz + in.gamma_hz;
    obj.scale_hz = in.nu_hz;
  } else {
    obj.rate_hz = kappa_bar_gamma(in, gate);
    obj.scale_hz = in.delta_nu_hz;
  }
  return obj;
}

// Golden-section on log(g); the objective is unimodal in g.
FidelityReport minimize(const Objective& obj, double g_hi, InfidelityForm form) {
  if (!(g_hi > 0.0)) throw std::invalid_argument("coupling bound must be positive");
  if (!std::isfinite(obj.crowding)) {
    FidelityReport r;
    r.g_opt_hz = g_hi;
    r.infidelity = 1.0;
    r.constrained = true;
    return r;
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(g_hi) + std::log(1e-8);
  double hi = std::log(g_hi);
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = obj(std::exp(a), form);
  double fb = obj(std::exp(b), form);
  for (int it = 0; it < 400 && (hi - lo) > 1e-12; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = obj(std::exp(a), form);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = obj(std::exp(b), form);
    }
  }
  FidelityReport r;
  const double g_star = std::exp(0.5 * (lo + hi));
  const double f_star = obj(g_star, form);
  const double f_bound = obj(g_hi, form);
  if (f_bound <= f_star || g_star >= g_hi * (1.0 - 1e-9)) {
    r.g_opt_hz = g_hi;
    r.infidelity = f_bound;
    r.constrained = true;
  } else {
    r.g_opt_hz = g_star;
    r.infidelity = f_star;
    r.constrained = false;
    const double arg =
        obj.c * M_PI * obj.rate_hz * std::sqrt(obj.crowding) /
        (std::sqrt(2.0) * obj.scale_hz);
    r.closed_form = 1.5 * std::pow(arg, 2.0 / 3.0);
  }
  return r;
}

}  // namespace

double local_infidelity_direct(const GateFidelityInputs& inputs, GateType gate,
                               double g_d_hz, InfidelityForm form) {
  if (!(g_d_hz > 0.0)) throw std::invalid_argument("coupling rate must be positive");
  return make_objective(inputs, Route::Direct, gate)(g_d_hz, form);
}

double local_infidelity_virtual(const GateFidelityInputs& inputs, GateType gate,
                                double g_v_hz, InfidelityForm form) {
  if (!(g_v_hz > 0.0)) throw std::invalid_argument("coupling rate must be positive");
  return make_objective(inputs, Route::Virtual, gate)(g_v_hz, form);
}

FidelityReport optimize_gate(const GateFidelityInputs& inputs, Route route,
                             GateType gate, InfidelityForm form) {
  const Objective obj = make_objective(inputs, route, gate);
  const double bound = route == Route::Direct ? inputs.g_bound_direct_hz
                                              : inputs.g_bound_virtual_hz;
  return minimize(obj, bound, form);
}

double crowding_coefficient_direct(long cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  long double sum = 0.0L;  // ascending terms, smallest first
  for (long n = cutoff; n >= 1; --n) sum += 1.0L / (static_cast<long double>(n) * n);
  return static_cast<double>(2.0L * sum);
}

double crowding_coefficient_virtual(const ModeSpectrum& spectrum,
                                    const CouplingGraph& graph, int m_stored) {
  if (m_stored < 2) throw std::invalid_argument("need at least two stored modes");
  if (graph.pairs.empty()) throw std::invalid_argument("no pairs to protect");

  const double delta_nu = nonuniformity(spectrum, graph).delta_nu_hz;
  if (!(delta_nu > 0.0)) return std::numeric_limits<double>::infinity();

  // Stored modes fill the addressable window pair by pair. Storage beyond
  // the window has no selectivity left, which we report as infinite
  // crowding.
  const int max_modes = 2 * static_cast<int>(graph.pairs.size());
  if (m_stored > max_modes) {
    if (static_cast<int>(spectrum.modes.size()) < m_stored)
      throw std::invalid_argument("insufficient modes for M");
    return std::numeric_limits<double>::infinity();
  }

  std::vector<int> stored;
  std::vector<std::pair<int, int>> desired;
  for (const auto& p : graph.pairs) {
    if (static_cast<int>(stored.size()) >= m_stored) break;
    stored.push_back(p.first);
    if (static_cast<int>(stored.size()) >= m_stored) break;
    stored.push_back(p.second);
    desired.push_back(p);
  }
  if (desired.empty()) throw std::invalid_argument("insufficient modes for M");

  auto omega = [&](int idx) { return spectrum.mode_by_index(idx).omega_hz; };
  auto is_stored = [&](int idx) {
    return std::find(stored.begin(), stored.end(), idx) != stored.end();
  };

  const int n = static_cast<int>(spectrum.modes.size());
  double total = 0.0;
  for (const auto& [a, b] : desired) {
    const double nu_ab = std::abs(omega(b) - omega(a));
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const int i = spectrum.modes[p].index;
        const int j = spectrum.modes[q].index;
        if (!is_stored(i) && !is_stored(j)) continue;
        if ((i == a && j == b) || (i == b && j == a)) continue;
        const double det =
            nu_ab - (spectrum.modes[q].omega_hz - spectrum.modes[p].omega_hz);
        if (std::abs(det) < 1e-6) return std::numeric_limits<double>::infinity();
        sum += (delta_nu / det) * (delta_nu / det);
      }
    }
    total += sum;
  }
  return total / static_cast<double>(desired.size());
}

GlobalFidelityReport global_infidelity(const GateFidelityInputs& inputs, int m_stored,
                                       Route route, GateType gate, double s_d,
                                       double s_v, InfidelityForm form) {
  if (m_stored < 2) throw std::invalid_argument("need at least two stored modes");
  Objective obj = make_objective(inputs, route, gate);
  double bound;
  if (route == Route::Direct) {
    obj.rate_hz = (inputs.kappa_hz + inputs.gamma_hz) +
                  (m_stored - 2) * inputs.kappa_hz;
    obj.crowding = s_d;
    bound = inputs.g_bound_direct_hz;
  } else {
    const double kg = inputs.kappa_gamma_hz.at(0);
    obj.rate_hz = gate == GateType::Swap ? m_stored * kg
                                         : (m_stored - 0.5) * kg;
    obj.crowding = s_v;
    bound = inputs.g_bound_virtual_hz;
  }
  const FidelityReport r = minimize(obj, bound, form);
  GlobalFidelityReport out;
  out.m_stored = m_stored;
  out.crowding_coefficient = obj.crowding;
  out.g_opt_hz = r.g_opt_hz;
  out.infidelity = r.infidelity;
  out.constrained = r.constrained;
  out.depth = r.infidelity > 0.0
                  ? 1.0 / (m_stored * r.infidelity)
                  : std::numeric_limits<double>::infinity();
  return out;
}

QuantumVolume quantum_volume(const std::function<double(int)>& one_minus_f,
                             int m_lo, int m_hi) {
  if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("bad M range");
  QuantumVolume best;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double infid = one_minus_f(m);
    const double depth = infid > 0.0 ? 1.0 / (m * infid)
                                     : std::numeric_limits<double>::infinity();
    const double side = std::min(static_cast<double>(m), depth);
    const double v = side * side;
    if (v > best.volume) {
      best.volume = v;
      best.m_opt = m;
    }
  }
  return best;
}

KerrInfidelity kerr_leading_infidelity(double chi_ab_hz, double g_v_hz,
                                       double t_s) {
  if (g_v_hz == 0.0) throw std::invalid_argument("coupling rate must be nonzero");
  KerrInfidelity out;
  const double s = std::sin(2.0 * (2.0 * M_PI * g_v_hz) * t_s);
  const double ratio = chi_ab_hz / g_v_hz;
  out.value = (1.0 / 64.0) * s * s * s * s * ratio * ratio;
  out.valid_regime = std::abs(ratio) < 0.1;
  return out;
}

DetuningInfidelity detuning_infidelity(double detuning_hz, double g_v_hz) {
  if (g_v_hz == 0.0) throw std::invalid_argument("coupling rate must be nonzero");
  DetuningInfidelity out;
  const double r = detuning_hz / g_v_hz;
  out.value = r * r;
  out.valid_regime = std::abs(detuning_hz) < std::abs(g_v_hz);
  return out;
}

double drive_heating_rate(const HeatingInputs& in) {
  const double a = in.alpha_hz;
  auto guard = [&](double den, double scale) {
    if (std::abs(den) <= 1e-6 * scale)
      throw std::invalid_argument("two-photon resonance; rate formula invalid");
  };
  const double d11 = 2.0 * in.delta_1_hz + a;
  const double d22 = 2.0 * in.delta_2_hz + a;
  const double d12 = in.delta_1_hz + in.delta_2_hz + a;
  guard(d11, std::abs(in.delta_1_hz) + a);
  guard(d22, std::abs(in.delta_2_hz) + a);
  guard(d12, std::abs(in.delta_1_hz) + std::abs(in.delta_2_hz) + a);

  const double t1 = std::norm(a * in.xi_1 * in.xi_1 / d11);
  const double t2 = std::norm(a * in.xi_2 * in.xi_2 / d22);
  const double t12 = std::norm(2.0 * a * in.xi_1 * in.xi_2 / d12);
  return in.gamma_hz * (t1 + t2 + t12) +
         2.0 * in.gamma_phi_hf_hz * (std::norm(in.xi_1) + std::norm(in.xi_2));
}

const MapCell& InfidelityMap::at(int r, int c) const {
  return cells.at(static_cast<size_t>(r) * spec.cols + c);
}

InfidelityMap infidelity_map(const MapSpec& spec, GateType gate,
                             double participation, double nu_hz,
                             double delta_nu_hz, double g_bound_direct_hz,
                             double g_bound_virtual_hz, InfidelityForm form,
                             bool parallel) {
  if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("empty grid");
  InfidelityMap map;
  map.spec = spec;
  map.cells.resize(static_cast<size_t>(spec.rows) * spec.cols);

  auto logspace = [](double lo, double hi, int n, int i) {
    if (n == 1) return lo;
    const double t = static_cast<double>(i) / (n - 1);
    return std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  };

  auto eval_cell = [&](int r, int c) {
    MapCell cell;
    cell.kappa_hz = logspace(spec.kappa_lo_hz, spec.kappa_hi_hz, spec.rows, r);
    cell.gamma_hz = logspace(spec.gamma_lo_hz, spec.gamma_hi_hz, spec.cols, c);
    const GateFidelityInputs in =
        make_inputs(cell.kappa_hz, cell.gamma_hz, participation, gate, nu_hz,
                    delta_nu_hz, g_bound_direct_hz, g_bound_virtual_hz);
    cell.direct = optimize_gate(in, Route::Direct, gate, form);
    cell.virt = optimize_gate(in, Route::Virtual, gate, form);
    cell.log10_ratio = std::log10(cell.direct.infidelity) -
                       std::log10(cell.virt.infidelity);
    map.cells[static_cast<size_t>(r) * spec.cols + c] = cell;
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) eval_cell(r, c);
  } else {
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) eval_cell(r, c);
  }
  return map;
}

}  // namespace cqad
