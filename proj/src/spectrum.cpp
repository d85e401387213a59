#include "cqad/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cqad {

namespace {

void check_not_degenerate(const std::vector<PhononMode>& modes) {
  for (size_t i = 0; i + 1 < modes.size(); ++i) {
    if (modes[i + 1].omega_hz - modes[i].omega_hz < 1.0)
      throw std::invalid_argument("degenerate modes");
  }
}

ModeSpectrum from_modes(std::vector<PhononMode> modes, SchemeTag tag) {
  std::sort(modes.begin(), modes.end(),
            [](const PhononMode& a, const PhononMode& b) {
              return a.omega_hz < b.omega_hz;
            });
  check_not_degenerate(modes);
  ModeSpectrum s;
  s.modes = std::move(modes);
  s.scheme_tag = tag;
  return s;
}

ModeSpectrum generate_uniform(const UniformScheme& u, SchemeTag tag) {
  if (u.nu_hz <= 0.0 || u.count < 1)
    throw std::invalid_argument("uniform scheme requires positive spacing and count");
  std::vector<PhononMode> modes;
  modes.reserve(u.count);
  for (int k = 0; k < u.count; ++k) {
    PhononMode m;
    m.index = k;
    m.omega_hz = u.base_hz + k * u.nu_hz;
    m.g_hz = u.g_hz;
    m.kappa_hz = u.kappa_hz;
    modes.push_back(m);
  }
  return from_modes(std::move(modes), tag);
}

}  // namespace

ModeSpectrum generate_spectrum(const SpectrumScheme& scheme) {
  if (const auto* u = std::get_if<UniformScheme>(&scheme)) {
    return generate_uniform(*u, SchemeTag::Uniform);
  }
  if (const auto* p = std::get_if<PointDefectScheme>(&scheme)) {
    ModeSpectrum base = generate_uniform(p->base, SchemeTag::PointDefect);
    if (p->bandwidth_hz <= 0.0)
      throw std::invalid_argument("point defect bandwidth must be positive");
    std::vector<cplx> couplings;
    couplings.reserve(base.modes.size());
    for (const auto& m : base.modes) {
      const double x = (m.omega_hz - p->omega_ext_hz) / p->bandwidth_hz;
      couplings.push_back(p->coupling_hz * std::exp(-0.5 * x * x));
    }
    ModeSpectrum shifted = hybridize_external(base, p->omega_ext_hz, couplings);
    shifted.scheme_tag = SchemeTag::PointDefect;
    return shifted;
  }
  if (const auto* t = std::get_if<TwoFamilyScheme>(&scheme)) {
    if (t->nu1_hz <= 0.0 || t->nu2_hz <= 0.0 || t->count1 < 1 || t->count2 < 1)
      throw std::invalid_argument("two-family scheme requires positive spacings and counts");
    std::vector<PhononMode> modes;
    // Family 1 carries even indices, family 2 odd; indices are labels only.
    for (int k = 0; k < t->count1; ++k) {
      PhononMode m;
      m.index = 2 * k;
      m.omega_hz = t->base1_hz + k * t->nu1_hz;
      m.g_hz = t->g_hz;
      m.kappa_hz = t->kappa_hz;
      modes.push_back(m);
    }
    for (int k = 0; k < t->count2; ++k) {
      PhononMode m;
      m.index = 2 * k + 1;
      m.omega_hz = t->base2_hz + k * t->nu2_hz;
      m.g_hz = t->g_hz;
      m.kappa_hz = t->kappa_hz;
      modes.push_back(m);
    }
    return from_modes(std::move(modes), SchemeTag::TwoFamily);
  }
  const auto& c = std::get<CompositeScheme>(scheme);
  if (c.nu_hz <= 0.0 || c.count < 1 || c.period <= 0.0)
    throw std::invalid_argument("composite scheme requires positive spacing, count, period");
  std::vector<PhononMode> modes;
  double omega = c.base_hz;
  for (int j = 0; j < c.count; ++j) {
    PhononMode m;
    m.index = j;
    m.omega_hz = omega;
    m.g_hz = c.g_hz;
    m.kappa_hz = c.kappa_hz;
    modes.push_back(m);
    omega += c.nu_hz * (1.0 + c.depth * std::sin(2.0 * M_PI * j / c.period));
  }
  return from_modes(std::move(modes), SchemeTag::Composite);
}

ModeSpectrum hybridize_external(const ModeSpectrum& bare, double omega_ext_hz,
                                const std::vector<cplx>& couplings_hz) {
  const int n = static_cast<int>(bare.modes.size());
  if (static_cast<int>(couplings_hz.size()) != n)
    throw std::invalid_argument("one coupling per bare mode required");
  for (const auto& m : bare.modes) {
    if (std::abs(m.omega_hz - omega_ext_hz) <= 1.0)
      throw std::invalid_argument("external mode degenerate with bare mode " +
                                  std::to_string(m.index));
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    h(k, k) = bare.modes[k].omega_hz;
    h(k, n) = couplings_hz[k];
    h(n, k) = std::conj(couplings_hz[k]);
  }
  h(n, n) = omega_ext_hz;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hybridization eigensolve failed");

  // Drop the eigenmode with the largest external-component overlap.
  int ext_col = 0;
  double best = -1.0;
  for (int c = 0; c < n + 1; ++c) {
    const double w = std::norm(solver.eigenvectors()(n, c));
    if (w > best) {
      best = w;
      ext_col = c;
    }
  }

  std::vector<double> shifted;
  shifted.reserve(n);
  for (int c = 0; c < n + 1; ++c) {
    if (c != ext_col) shifted.push_back(solver.eigenvalues()(c));
  }
  std::sort(shifted.begin(), shifted.end());

  ModeSpectrum out = bare;  // keeps indices, couplings, kappas
  for (int k = 0; k < n; ++k) out.modes[k].omega_hz = shifted[k];
  check_not_degenerate(out.modes);
  return out;
}

CouplingGraph two_family_window(const ModeSpectrum& spectrum, double nu1_hz,
                                double nu2_hz, int max_pairs) {
  const double dnu = std::abs(nu2_hz - nu1_hz);
  if (dnu <= 0.0) throw std::invalid_argument("families must have distinct spacings");
  CouplingGraph graph;
  // Pairs are (even index 2k, odd index 2k+1). Keeping the cross spacing
  // below (nu1 - dnu)/2 guarantees the minimum spacing contrast over the
  // window equals |nu1 - nu2| exactly: reversed-orientation and
  // family-internal spacings then live in disjoint bands at least dnu away.
  const double lo = 0.15 * dnu;
  const double hi = 0.5 * (nu1_hz - dnu);
  for (int k = 0;; ++k) {
    if (!spectrum.has_index(2 * k) || !spectrum.has_index(2 * k + 1)) break;
    const double s = spectrum.mode_by_index(2 * k + 1).omega_hz -
                     spectrum.mode_by_index(2 * k).omega_hz;
    if (s < lo || s > hi) {
      if (graph.pairs.empty()) continue;  // window not reached yet
      break;
    }
    graph.storage.push_back(2 * k);
    graph.storage.push_back(2 * k + 1);
    graph.pairs.push_back({2 * k, 2 * k + 1});
    if (max_pairs > 0 && static_cast<int>(graph.pairs.size()) >= max_pairs) break;
  }
  if (graph.pairs.empty())
    throw std::invalid_argument("no selectively addressable window found");
  return graph;
}

NonuniformityReport nonuniformity(const ModeSpectrum& spectrum,
                                  const CouplingGraph& graph, bool parallel) {
  if (graph.pairs.empty()) throw std::invalid_argument("no pairs to protect");
  const int n_modes = static_cast<int>(spectrum.modes.size());
  const int n_pairs = static_cast<int>(graph.pairs.size());

  // Positions of storage modes in the sorted mode list.
  std::vector<int> storage_pos;
  for (int s : graph.storage) {
    for (int p = 0; p < n_modes; ++p)
      if (spectrum.modes[p].index == s) storage_pos.push_back(p);
  }
  std::sort(storage_pos.begin(), storage_pos.end());

  struct PairResult {
    double margin = std::numeric_limits<double>::infinity();
    std::pair<int, int> other{-1, -1};
  };
  std::vector<PairResult> results(n_pairs);

  auto eval_pair = [&](int pi) {
    const auto [ia, ib] = graph.pairs[pi];
    const double nu_p = std::abs(spectrum.mode_by_index(ia).omega_hz -
                                 spectrum.mode_by_index(ib).omega_hz);
    const int lo_idx = std::min(ia, ib), hi_idx = std::max(ia, ib);
    PairResult best;
    for (int kp : storage_pos) {
      const auto& mk = spectrum.modes[kp];
      for (int lp = 0; lp < n_modes; ++lp) {
        if (lp == kp) continue;
        const auto& ml = spectrum.modes[lp];
        const int a = std::min(mk.index, ml.index);
        const int b = std::max(mk.index, ml.index);
        if (a == lo_idx && b == hi_idx) continue;
        const double d = std::abs(nu_p - std::abs(mk.omega_hz - ml.omega_hz));
        if (d < best.margin ||
            (d == best.margin && std::make_pair(a, b) < best.other)) {
          best.margin = d;
          best.other = {a, b};
        }
      }
    }
    results[pi] = best;
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int pi = 0; pi < n_pairs; ++pi) eval_pair(pi);
  } else {
    for (int pi = 0; pi < n_pairs; ++pi) eval_pair(pi);
  }

  NonuniformityReport report;
  report.delta_nu_hz = std::numeric_limits<double>::infinity();
  for (int pi = 0; pi < n_pairs; ++pi) {
    const auto [ia, ib] = graph.pairs[pi];
    const std::pair<int, int> key{std::min(ia, ib), std::max(ia, ib)};
    report.margins.push_back({key, results[pi].margin});
    const bool better =
        results[pi].margin < report.delta_nu_hz ||
        (results[pi].margin == report.delta_nu_hz &&
         std::make_pair(key, results[pi].other) <
             std::make_pair(report.witness_pair, report.witness_other));
    if (better) {
      report.delta_nu_hz = results[pi].margin;
      report.witness_pair = key;
      report.witness_other = results[pi].other;
    }
  }
  return report;
}

double KerrModel::chi(int index_j, int index_k) const {
  auto pos = [&](int idx) {
    for (size_t p = 0; p < mode_indices.size(); ++p)
      if (mode_indices[p] == idx) return p;
    throw std::invalid_argument("kerr model has no mode " + std::to_string(idx));
  };
  return chi_hz[pos(index_j)][pos(index_k)];
}

KerrModel kerr_matrix(const DressedFrame& frame, const TransmonParams& transmon,
                      const std::vector<int>& occupations) {
  const double alpha = transmon.alpha_hz;
  const size_t n = frame.modes.size();
  KerrModel model;
  model.chi_hz.assign(n, std::vector<double>(n, 0.0));
  for (size_t j = 0; j < n; ++j) {
    model.mode_indices.push_back(frame.modes[j].index);
    const double lj2 = std::norm(frame.modes[j].tilde_lambda);
    for (size_t k = 0; k < n; ++k) {
      const double lk2 = std::norm(frame.modes[k].tilde_lambda);
      model.chi_hz[j][k] = (j == k) ? alpha * lj2 * lj2 : 2.0 * alpha * lj2 * lk2;
    }
  }
  model.occupations = occupations.empty() ? std::vector<int>(n, 1) : occupations;
  if (model.occupations.size() != n)
    throw std::invalid_argument("one occupation per mode required");
  model.n_tot = std::accumulate(model.occupations.begin(),
                                model.occupations.end(), 0);

  // Average cross-Kerr over populated mode pairs.
  double sum = 0.0;
  int terms = 0;
  for (size_t j = 0; j < n; ++j) {
    if (model.occupations[j] <= 0) continue;
    for (size_t k = j + 1; k < n; ++k) {
      if (model.occupations[k] <= 0) continue;
      sum += model.chi_hz[j][k];
      ++terms;
    }
  }
  model.chi_bar_hz = terms > 0 ? sum / terms : 0.0;
  return model;
}

namespace {

// Largest |sum over a t-element subset| of the given values.
double extremal_subset_sum(std::vector<double> values, int t) {
  if (t <= 0 || values.empty()) return 0.0;
  t = std::min<int>(t, static_cast<int>(values.size()));
  std::sort(values.begin(), values.end());
  double low = 0.0, high = 0.0;
  for (int i = 0; i < t; ++i) low += values[i];
  for (int i = 0; i < t; ++i) high += values[values.size() - 1 - i];
  return std::max(std::abs(low), std::abs(high));
}

// Exhaustive check over all exactly-t-element subsets (small mode counts).
double exhaustive_subset_sum(const std::vector<double>& values, int t) {
  const int n = static_cast<int>(values.size());
  t = std::min(t, n);
  if (t <= 0) return 0.0;
  double best = 0.0;
  std::vector<int> idx(t);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    double s = 0.0;
    for (int i : idx) s += values[i];
    best = std::max(best, std::abs(s));
    int pos = t - 1;
    while (pos >= 0 && idx[pos] == n - t + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < t; ++q) idx[q] = idx[q - 1] + 1;
  }
  return best;
}

double worst_case_detuning(const std::vector<double>& diffs, int budget) {
  if (diffs.size() <= 20) return exhaustive_subset_sum(diffs, budget);
  return extremal_subset_sum(diffs, budget);
}

struct FixedPoint {
  double value = 0.0;
  int iterations = 0;
};

// Damped fixed-point iteration on a frequency; throws on divergence.
template <typename F>
FixedPoint iterate_frequency(double start, F&& target_of, const PlanOptions& opts) {
  double x = start;
  double prev_step = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const double target = target_of(x);
    double step = target - x;
    if (std::abs(step) <= opts.tol_hz) return {target, it};
    if (prev_step != 0.0 && step * prev_step < 0.0) step *= opts.damping;
    x += step;
    prev_step = step;
  }
  throw std::runtime_error("Stark compensation diverges; reduce amplitudes");
}

}  // namespace

DrivePlan plan_two_mode_drives(const DeviceConfig& device, int mode_a,
                               int mode_b, const DriveTone& anchor,
                               cplx amplitude2_hz, int n_tot,
                               const PlanOptions& opts) {
  const double omega_a = device.spectrum.mode_by_index(mode_a).omega_hz;
  const double omega_b = device.spectrum.mode_by_index(mode_b).omega_hz;

  auto target_of = [&](double omega2) {
    std::vector<DriveTone> drives{anchor, {omega2, amplitude2_hz, "d2"}};
    const DressedFrame frame = dressed_frame(device, drives);
    return anchor.omega_hz + (omega_b + frame.mode(mode_b).stark_shift_hz) -
           (omega_a + frame.mode(mode_a).stark_shift_hz);
  };
  const FixedPoint fp =
      iterate_frequency(anchor.omega_hz + omega_b - omega_a, target_of, opts);

  DrivePlan plan;
  plan.tones = {anchor, {fp.value, amplitude2_hz, "d2"}};
  plan.intended.push_back({CouplingKind::TwoMode, {mode_a, mode_b}});
  plan.iterations = fp.iterations;

  const DressedFrame frame = dressed_frame(device, plan.tones);
  plan.compensation.stark_terms_hz = frame.mode(mode_b).stark_shift_hz -
                                     frame.mode(mode_a).stark_shift_hz;
  plan.compensation.kerr_terms_hz = 0.0;

  const KerrModel kerr = kerr_matrix(frame, device.transmon);
  std::vector<double> diffs;
  for (const auto& m : frame.modes) {
    if (m.index == mode_a || m.index == mode_b) continue;
    diffs.push_back(kerr.chi(mode_a, m.index) - kerr.chi(mode_b, m.index));
  }
  plan.compensation.residual_bound_hz =
      worst_case_detuning(diffs, std::max(0, n_tot - 2));
  return plan;
}

DrivePlan plan_three_mode_drive(const DeviceConfig& device, int mode_a,
                                int mode_b, int mode_c, cplx amplitude_hz,
                                int n_tot, const PlanOptions& opts) {
  const double omega_a = device.spectrum.mode_by_index(mode_a).omega_hz;
  const double omega_b = device.spectrum.mode_by_index(mode_b).omega_hz;
  const double omega_c = device.spectrum.mode_by_index(mode_c).omega_hz;

  std::vector<int> occupations;
  for (const auto& m : device.spectrum.modes) {
    const bool stored =
        std::find(device.graph.storage.begin(), device.graph.storage.end(),
                  m.index) != device.graph.storage.end();
    occupations.push_back(stored || device.graph.storage.empty() ? 1 : 0);
  }

  double kerr_comp = 0.0;
  auto target_of = [&](double omega1) {
    std::vector<DriveTone> drives{{omega1, amplitude_hz, "d1"}};
    const DressedFrame frame = dressed_frame(device, drives);
    const KerrModel kerr = kerr_matrix(frame, device.transmon, occupations);
    kerr_comp = -kerr.chi(mode_a, mode_b) - kerr.chi_bar_hz * (n_tot - 2);
    return omega_a + omega_b - omega_c +
           frame.mode(mode_a).stark_shift_hz +
           frame.mode(mode_b).stark_shift_hz -
           frame.mode(mode_c).stark_shift_hz + kerr_comp;
  };
  const FixedPoint fp =
      iterate_frequency(omega_a + omega_b - omega_c, target_of, opts);

  DrivePlan plan;
  plan.tones = {{fp.value, amplitude_hz, "d1"}};
  plan.intended.push_back({CouplingKind::ThreeMode, {mode_a, mode_b, mode_c}});
  plan.iterations = fp.iterations;

  const DressedFrame frame = dressed_frame(device, plan.tones);
  const KerrModel kerr = kerr_matrix(frame, device.transmon, occupations);
  plan.compensation.stark_terms_hz = frame.mode(mode_a).stark_shift_hz +
                                     frame.mode(mode_b).stark_shift_hz -
                                     frame.mode(mode_c).stark_shift_hz;
  plan.compensation.kerr_terms_hz = kerr_comp;

  std::vector<double> diffs;
  for (const auto& m : frame.modes) {
    if (m.index == mode_a || m.index == mode_b || m.index == mode_c) continue;
    diffs.push_back((kerr.chi(mode_c, m.index) - kerr.chi_bar_hz) -
                    (kerr.chi(mode_a, m.index) - kerr.chi_bar_hz) -
                    (kerr.chi(mode_b, m.index) - kerr.chi_bar_hz));
  }
  plan.compensation.residual_bound_hz =
      worst_case_detuning(diffs, std::max(0, n_tot - 2));
  return plan;
}

CollisionReport check_drive_set(const ModeSpectrum& spectrum,
                                const CouplingGraph& graph,
                                const std::vector<DriveTone>& tones,
                                const std::vector<IntendedCoupling>& intended,
                                double tolerance_hz, bool parallel) {
  if (tones.empty()) throw std::invalid_argument("at least one tone required");
  CollisionReport report;
  report.tolerance_hz = tolerance_hz;

  auto in_storage = [&](int idx) {
    return std::find(graph.storage.begin(), graph.storage.end(), idx) !=
           graph.storage.end();
  };
  auto intended_two = [&](int i, int j) {
    for (const auto& c : intended) {
      if (c.kind != CouplingKind::TwoMode) continue;
      if ((c.mode_indices[0] == i && c.mode_indices[1] == j) ||
          (c.mode_indices[0] == j && c.mode_indices[1] == i))
        return true;
    }
    return false;
  };
  auto intended_three = [&](int i, int j, int k) {
    for (const auto& c : intended) {
      if (c.kind != CouplingKind::ThreeMode) continue;
      const int a = c.mode_indices[0], b = c.mode_indices[1], cc = c.mode_indices[2];
      if (cc != k) continue;
      if ((a == i && b == j) || (a == j && b == i)) return true;
    }
    return false;
  };

  const int n = static_cast<int>(spectrum.modes.size());
  const int n_tones = static_cast<int>(tones.size());

  std::vector<std::vector<Collision>> found(n_tones * n_tones);

  // Pairwise tone differences against two-mode spacings.
  auto scan_tone_pair = [&](int a, int b) {
    const double diff = std::abs(tones[a].omega_hz - tones[b].omega_hz);
    auto& bucket = found[a * n_tones + b];
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const auto& mp = spectrum.modes[p];
        const auto& mq = spectrum.modes[q];
        if (!in_storage(mp.index) && !in_storage(mq.index)) continue;
        if (intended_two(mp.index, mq.index)) continue;
        const double det = diff - (mq.omega_hz - mp.omega_hz);
        if (std::abs(det) <= tolerance_hz) {
          bucket.push_back({{tones[a].label, tones[b].label},
                            {CouplingKind::TwoMode, {mp.index, mq.index}},
                            det});
        }
      }
    }
  };

  // Single tones against three-mode combinations over the storage set.
  auto scan_tone = [&](int a) {
    auto& bucket = found[a * n_tones + a];
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) {
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const auto& mp = spectrum.modes[p];
          const auto& mq = spectrum.modes[q];
          const auto& mr = spectrum.modes[r];
          if (!in_storage(mp.index) && !in_storage(mq.index) &&
              !in_storage(mr.index))
            continue;
          if (intended_three(mp.index, mq.index, mr.index)) continue;
          const double det =
              tones[a].omega_hz - (mp.omega_hz + mq.omega_hz - mr.omega_hz);
          if (std::abs(det) <= tolerance_hz) {
            bucket.push_back({{tones[a].label},
                              {CouplingKind::ThreeMode,
                               {mp.index, mq.index, mr.index}},
                              det});
          }
        }
      }
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) collapse(2)
#endif
    for (int a = 0; a < n_tones; ++a)
      for (int b = 0; b < n_tones; ++b) {
        if (a < b) scan_tone_pair(a, b);
        else if (a == b) scan_tone(a);
      }
  } else {
    for (int a = 0; a < n_tones; ++a)
      for (int b = 0; b < n_tones; ++b) {
        if (a < b) scan_tone_pair(a, b);
        else if (a == b) scan_tone(a);
      }
  }

  for (auto& bucket : found)
    for (auto& c : bucket) report.collisions.push_back(std::move(c));
  return report;
}

}  // namespace cqad
