#include "cqad/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cqad {

FockRegister FockRegister::uniform(int n_modes, int truncation,
                                   TruncationPolicy policy) {
  if (n_modes < 1 || truncation < 2)
    throw std::invalid_argument("register needs modes and truncation >= 2");
  FockRegister r;
  r.n_modes = n_modes;
  r.truncation.assign(n_modes, static_cast<uint8_t>(truncation));
  r.policy = policy;
  return r;
}

SparseFockState SparseFockState::vacuum(const FockRegister& reg) {
  SparseFockState s(reg);
  s.terms_[FockConfig(reg.n_modes, 0)] = 1.0;
  return s;
}

SparseFockState SparseFockState::basis(const FockRegister& reg,
                                       const FockConfig& config) {
  if (static_cast<int>(config.size()) != reg.n_modes)
    throw std::invalid_argument("configuration length mismatch");
  for (int m = 0; m < reg.n_modes; ++m)
    if (config[m] >= reg.truncation[m])
      throw std::invalid_argument("occupation exceeds truncation");
  SparseFockState s(reg);
  s.terms_[config] = 1.0;
  return s;
}

void SparseFockState::add_term(const FockConfig& config, cplx amplitude) {
  terms_[config] += amplitude;
}

double SparseFockState::norm2() const {
  double n = 0.0;
  for (const auto& [c, a] : terms_) n += std::norm(a);
  return n;
}

void SparseFockState::normalize() {
  const double n = std::sqrt(norm2());
  if (n == 0.0) throw std::runtime_error("cannot normalize null state");
  for (auto& [c, a] : terms_) a /= n;
}

void SparseFockState::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < threshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double SparseFockState::cap_terms(size_t max_terms) {
  if (terms_.size() <= max_terms) return 0.0;
  std::vector<std::pair<FockConfig, cplx>> all(terms_.begin(), terms_.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    const double wa = std::norm(a.second), wb = std::norm(b.second);
    if (wa != wb) return wa > wb;
    return a.first < b.first;
  });
  double discarded = 0.0;
  for (size_t i = max_terms; i < all.size(); ++i)
    discarded += std::norm(all[i].second);
  all.resize(max_terms);
  terms_ = TermMap(all.begin(), all.end());
  return discarded;
}

int SparseFockState::max_occupation() const {
  int m = 0;
  for (const auto& [c, a] : terms_)
    for (uint8_t n : c) m = std::max<int>(m, n);
  return m;
}

GateSpec inverse(const GateSpec& gate) {
  GateSpec inv = gate;
  switch (gate.kind) {
    case GateKind::Beamsplitter:
    case GateKind::ThreeMode:
    case GateKind::DualRailRotation:
      inv.theta = -gate.theta;
      break;
    case GateKind::Phase:
      inv.phi = -gate.phi;
      break;
    case GateKind::Cz:
    case GateKind::Cswap:
      break;  // self-inverse on their working subspaces
  }
  return inv;
}

namespace {

// Exponential of a small Hermitian matrix times -i theta.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(cplx(0.0, -theta * es.eigenvalues()(i)));
  return v * phases.asDiagonal() * v.adjoint();
}

struct BlockKey {
  int kind;  // 2 = beamsplitter chain, 3 = three-mode chain
  int a0, b0, c0, len;
  double theta, phi;
  bool operator<(const BlockKey& o) const {
    return std::tie(kind, a0, b0, c0, len, theta, phi) <
           std::tie(o.kind, o.a0, o.b0, o.c0, o.len, o.theta, o.phi);
  }
};

std::map<BlockKey, Eigen::MatrixXcd>& block_cache() {
  thread_local std::map<BlockKey, Eigen::MatrixXcd> cache;
  return cache;
}

const Eigen::MatrixXcd& beamsplitter_block(int na_lo, int len, int total,
                                           double theta, double phi) {
  const BlockKey key{2, na_lo, total, 0, len, theta, phi};
  auto& cache = block_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // Basis: n_a = na_lo .. na_lo+len-1, n_b = total - n_a.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(len, len);
  for (int i = 0; i + 1 < len; ++i) {
    const int na = na_lo + i;
    const int nb = total - na;
    // <na+1, nb-1| a^dag b |na, nb> = sqrt((na+1) nb), coefficient e^{-i phi}
    const double amp = std::sqrt(static_cast<double>((na + 1) * nb));
    h(i + 1, i) = std::exp(cplx(0.0, -phi)) * amp;
    h(i, i + 1) = std::exp(cplx(0.0, phi)) * amp;
  }
  return cache.emplace(key, expm_hermitian(h, theta)).first->second;
}

const Eigen::MatrixXcd& three_mode_block(int a0, int b0, int c0, int len,
                                         double theta, double phi) {
  const BlockKey key{3, a0, b0, c0, len, theta, phi};
  auto& cache = block_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // Basis: step k = 0 .. len-1 maps to (a0-k, b0-k, c0+k).
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(len, len);
  for (int k = 0; k + 1 < len; ++k) {
    const int a = a0 - k, b = b0 - k, c = c0 + k;
    // <a-1,b-1,c+1| a b c^dag |a,b,c> = sqrt(a b (c+1)), coefficient e^{i phi}
    const double amp = std::sqrt(static_cast<double>(a) * b * (c + 1));
    h(k + 1, k) = std::exp(cplx(0.0, phi)) * amp;
    h(k, k + 1) = std::exp(cplx(0.0, -phi)) * amp;
  }
  return cache.emplace(key, expm_hermitian(h, theta)).first->second;
}

void check_mode(const FockRegister& reg, int mode) {
  if (mode < 0 || mode >= reg.n_modes)
    throw std::invalid_argument("mode index out of range");
}

}  // namespace

void apply_beamsplitter(SparseFockState& state, int mode_a, int mode_b,
                        double theta, double phi) {
  const auto& reg = state.reg();
  check_mode(reg, mode_a);
  check_mode(reg, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("modes must be distinct");
  if (theta == 0.0) return;

  const int da = reg.truncation[mode_a], db = reg.truncation[mode_b];
  SparseFockState::TermMap out;
  out.reserve(state.terms().size() * 2);
  for (const auto& [config, amp] : state.terms()) {
    const int na = config[mode_a], nb = config[mode_b];
    const int total = na + nb;
    if (total == 0) {
      out[config] += amp;
      continue;
    }
    const int lo = std::max(0, total - (db - 1));
    const int hi = std::min(total, da - 1);
    if (reg.policy == TruncationPolicy::Strict && (lo > 0 || hi < total))
      throw std::runtime_error("truncation exceeded");
    const int len = hi - lo + 1;
    const auto& u = beamsplitter_block(lo, len, total, theta, phi);
    const int col = na - lo;
    FockConfig target = config;
    for (int row = 0; row < len; ++row) {
      const cplx w = u(row, col);
      if (std::abs(w) < 1e-16) continue;
      target[mode_a] = static_cast<uint8_t>(lo + row);
      target[mode_b] = static_cast<uint8_t>(total - (lo + row));
      out[target] += amp * w;
    }
  }
  state.terms() = std::move(out);
  state.prune();
}

void apply_three_mode(SparseFockState& state, int mode_a, int mode_b,
                      int mode_c, double theta, double phi) {
  const auto& reg = state.reg();
  check_mode(reg, mode_a);
  check_mode(reg, mode_b);
  check_mode(reg, mode_c);
  if (mode_a == mode_b || mode_a == mode_c || mode_b == mode_c)
    throw std::invalid_argument("modes must be distinct");
  if (theta == 0.0) return;

  const int da = reg.truncation[mode_a], db = reg.truncation[mode_b],
            dc = reg.truncation[mode_c];
  SparseFockState::TermMap out;
  out.reserve(state.terms().size() * 2);
  for (const auto& [config, amp] : state.terms()) {
    const int a = config[mode_a], b = config[mode_b], c = config[mode_c];
    // Chain through (a-k, b-k, c+k); k < 0 runs the conjugate direction.
    const int k_lo_phys = -c;
    const int k_hi_phys = std::min(a, b);
    if (k_lo_phys == 0 && k_hi_phys == 0) {
      out[config] += amp;  // annihilated by the generator
      continue;
    }
    const int k_lo = std::max({k_lo_phys, a - (da - 1), b - (db - 1)});
    const int k_hi = std::min(k_hi_phys, (dc - 1) - c);
    if (reg.policy == TruncationPolicy::Strict &&
        (k_lo > k_lo_phys || k_hi < k_hi_phys))
      throw std::runtime_error("truncation exceeded");
    const int len = k_hi - k_lo + 1;
    if (len <= 1) {
      out[config] += amp;  // clipped to a single state
      continue;
    }
    // Block basis index i corresponds to k = k_lo + i; the input sits at
    // column -k_lo (k = 0).
    const auto& u = three_mode_block(a - k_lo, b - k_lo, c + k_lo, len, theta, phi);
    const int col_idx = -k_lo;
    FockConfig target = config;
    for (int row = 0; row < len; ++row) {
      const cplx w = u(row, col_idx);
      if (std::abs(w) < 1e-16) continue;
      const int k = k_lo + row;
      target[mode_a] = static_cast<uint8_t>(a - k);
      target[mode_b] = static_cast<uint8_t>(b - k);
      target[mode_c] = static_cast<uint8_t>(c + k);
      out[target] += amp * w;
    }
  }
  state.terms() = std::move(out);
  state.prune();
}

void cz_gate(SparseFockState& state, int mode_a, int mode_b, int ancilla) {
  if (state.reg().policy == TruncationPolicy::Strict) {
    for (const auto& [config, amp] : state.terms())
      if (config[ancilla] != 0)
        throw std::runtime_error("ancilla not in vacuum");
  }
  apply_three_mode(state, mode_a, mode_b, ancilla, M_PI, 0.0);
}

void controlled_swap(SparseFockState& state, int ctrl, int mode_a, int mode_b,
                     int ancilla) {
  if (state.reg().policy == TruncationPolicy::Strict) {
    for (const auto& [config, amp] : state.terms()) {
      if (config[ancilla] != 0)
        throw std::runtime_error("ancilla not in vacuum");
      if (config[ctrl] >= 1 && config[mode_a] + config[mode_b] >= 2)
        throw std::runtime_error(
            "controlled-SWAP invalid for >=2 phonons in swap modes");
    }
  }
  apply_beamsplitter(state, mode_a, mode_b, -M_PI / 4.0, M_PI / 2.0);
  apply_three_mode(state, ctrl, mode_b, ancilla, M_PI, 0.0);
  apply_beamsplitter(state, mode_a, mode_b, M_PI / 4.0, M_PI / 2.0);
}

void phase_shift(SparseFockState& state, int mode, double phi) {
  check_mode(state.reg(), mode);
  for (auto& [config, amp] : state.terms())
    amp *= std::exp(cplx(0.0, phi * config[mode]));
}

void dual_rail_rotation(SparseFockState& state, int mode_a, int mode_b,
                        BlochAxis axis, double angle) {
  for (const auto& [config, amp] : state.terms())
    if (config[mode_a] + config[mode_b] != 1)
      throw std::runtime_error("state leaves the dual-rail subspace");
  const double phi = axis == BlochAxis::X ? 0.0 : M_PI / 2.0;
  apply_beamsplitter(state, mode_a, mode_b, angle / 2.0, phi);
}

void apply_gate(SparseFockState& state, const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::Beamsplitter:
      apply_beamsplitter(state, gate.modes.at(0), gate.modes.at(1), gate.theta,
                         gate.phi);
      return;
    case GateKind::ThreeMode:
      apply_three_mode(state, gate.modes.at(0), gate.modes.at(1),
                       gate.modes.at(2), gate.theta, gate.phi);
      return;
    case GateKind::Cz:
      cz_gate(state, gate.modes.at(0), gate.modes.at(1), gate.modes.at(2));
      return;
    case GateKind::Cswap:
      controlled_swap(state, gate.modes.at(0), gate.modes.at(1),
                      gate.modes.at(2), gate.modes.at(3));
      return;
    case GateKind::Phase:
      phase_shift(state, gate.modes.at(0), gate.phi);
      return;
    case GateKind::DualRailRotation:
      dual_rail_rotation(state, gate.modes.at(0), gate.modes.at(1),
                         gate.phi == 0.0 ? BlochAxis::X : BlochAxis::Y,
                         gate.theta);
      return;
  }
  throw std::invalid_argument("unknown gate kind");
}

void apply_qubit_hadamard(SparseFockState& state, int mode) {
  check_mode(state.reg(), mode);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  SparseFockState::TermMap out;
  out.reserve(state.terms().size() * 2);
  for (const auto& [config, amp] : state.terms()) {
    const int n = config[mode];
    if (n > 1) throw std::runtime_error("hadamard utility needs a {0,1} mode");
    FockConfig flip = config;
    flip[mode] = static_cast<uint8_t>(1 - n);
    out[config] += amp * inv_sqrt2 * (n == 1 ? -1.0 : 1.0);
    out[flip] += amp * inv_sqrt2;
  }
  state.terms() = std::move(out);
  state.prune();
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void loss_step(SparseFockState& state, int mode, double eps,
               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  // Sample the number of phonons lost this step; each is lost independently
  // with probability eps.
  int max_n = 0;
  for (const auto& [c, a] : state.terms()) max_n = std::max<int>(max_n, c[mode]);
  if (max_n == 0) return;

  std::vector<double> pk(max_n + 1, 0.0);
  for (const auto& [c, a] : state.terms()) {
    const int n = c[mode];
    const double w = std::norm(a);
    for (int k = 0; k <= n; ++k)
      pk[k] += w * binom(n, k) * std::pow(eps, k) * std::pow(1.0 - eps, n - k);
  }
  int kk = 0;
  double acc = 0.0;
  for (int k = 0; k <= max_n; ++k) {
    acc += pk[k];
    if (u < acc) {
      kk = k;
      break;
    }
    if (k == max_n) kk = max_n;
  }

  SparseFockState::TermMap out;
  for (const auto& [config, amp] : state.terms()) {
    const int n = config[mode];
    if (n < kk) continue;
    const double w =
        std::sqrt(binom(n, kk) * std::pow(eps, kk) * std::pow(1.0 - eps, n - kk));
    FockConfig target = config;
    target[mode] = static_cast<uint8_t>(n - kk);
    out[target] += amp * w;
  }
  state.terms() = std::move(out);
  state.normalize();
  state.prune();
}

void dephasing_step(SparseFockState& state, int mode, double eps,
                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng) >= eps) return;
  for (auto& [config, amp] : state.terms())
    if (config[mode] % 2 == 1) amp = -amp;
}

void heating_step(SparseFockState& state, int mode, double eps,
                  bool heat_unoccupied, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng) >= eps) return;
  const int cap = state.reg().truncation[mode] - 1;
  bool any = false;
  for (const auto& [c, a] : state.terms()) {
    if (c[mode] >= 1 || heat_unoccupied) {
      any = true;
      break;
    }
  }
  if (!any) return;

  SparseFockState::TermMap out;
  bool capped = false;
  for (const auto& [config, amp] : state.terms()) {
    const int n = config[mode];
    if (n == 0 && !heat_unoccupied) continue;
    FockConfig target = config;
    if (n >= cap) {
      capped = true;  // saturated at the truncation
      out[target] += amp;
    } else {
      target[mode] = static_cast<uint8_t>(n + 1);
      out[target] += amp * std::sqrt(static_cast<double>(n + 1));
    }
  }
  if (out.empty()) return;
  state.terms() = std::move(out);
  if (capped) state.count_heating_cap();
  state.normalize();
  state.prune();
}

}  // namespace

void apply_noise_step(SparseFockState& state,
                      const std::vector<NoiseChannel>& channels,
                      const std::vector<int>& scope_modes,
                      std::mt19937_64& rng) {
  std::vector<int> modes = scope_modes;
  std::sort(modes.begin(), modes.end());
  for (const auto& ch : channels) {
    if (ch.epsilon < 0.0 || ch.epsilon > 1.0)
      throw std::invalid_argument("noise probability outside [0,1]");
    if (ch.epsilon == 0.0) continue;
    for (int m : modes) {
      check_mode(state.reg(), m);
      switch (ch.kind) {
        case NoiseKind::Loss:
          loss_step(state, m, ch.epsilon, rng);
          break;
        case NoiseKind::Dephasing:
          dephasing_step(state, m, ch.epsilon, rng);
          break;
        case NoiseKind::Heating:
          heating_step(state, m, ch.epsilon, ch.heat_unoccupied, rng);
          break;
      }
    }
  }
}

cplx inner_product(const SparseFockState& a, const SparseFockState& b) {
  if (!(a.reg() == b.reg())) throw std::invalid_argument("register mismatch");
  const auto& small = a.terms().size() <= b.terms().size() ? a : b;
  const auto& large = a.terms().size() <= b.terms().size() ? b : a;
  const bool small_is_a = &small == &a;
  cplx acc = 0.0;
  for (const auto& [config, amp] : small.terms()) {
    auto it = large.terms().find(config);
    if (it == large.terms().end()) continue;
    acc += small_is_a ? std::conj(amp) * it->second
                      : std::conj(it->second) * amp;
  }
  return acc;
}

double state_fidelity(const SparseFockState& a, const SparseFockState& b) {
  return std::norm(inner_product(a, b));
}

double purity_of_subset(const SparseFockState& state,
                        const std::vector<int>& modes) {
  auto split = [&](const FockConfig& c) {
    FockConfig sub, rest;
    std::vector<bool> in(c.size(), false);
    for (int m : modes) in[m] = true;
    for (size_t i = 0; i < c.size(); ++i)
      (in[i] ? sub : rest).push_back(c[i]);
    return std::make_pair(sub, rest);
  };
  // rho[sub, sub'] = sum_rest psi(sub, rest) psi*(sub', rest)
  std::map<FockConfig, std::map<FockConfig, cplx>> by_rest;
  for (const auto& [config, amp] : state.terms()) {
    auto [sub, rest] = split(config);
    by_rest[rest][sub] = amp;
  }
  std::map<std::pair<FockConfig, FockConfig>, cplx> rho;
  for (const auto& [rest, subs] : by_rest)
    for (const auto& [s1, a1] : subs)
      for (const auto& [s2, a2] : subs) rho[{s1, s2}] += a1 * std::conj(a2);
  double purity = 0.0;
  for (const auto& [key, val] : rho) purity += std::norm(val);
  return purity;
}

// ---------------------------------------------------------------------------

DenseOracle::DenseOracle(FockRegister reg) : reg_(std::move(reg)) {
  if (reg_.n_modes > 6) throw std::invalid_argument("dense oracle limited to 6 modes");
  long dim = 1;
  strides_.assign(reg_.n_modes, 0);
  for (int m = reg_.n_modes - 1; m >= 0; --m) {
    strides_[m] = dim;
    dim *= reg_.truncation[m];
    if (dim > 4096) throw std::invalid_argument("dense oracle dimension overflow");
  }
  dim_ = static_cast<int>(dim);
}

long DenseOracle::index_of(const FockConfig& config) const {
  long idx = 0;
  for (int m = 0; m < reg_.n_modes; ++m) idx += strides_[m] * config[m];
  return idx;
}

FockConfig DenseOracle::config_of(long index) const {
  FockConfig c(reg_.n_modes, 0);
  for (int m = 0; m < reg_.n_modes; ++m) {
    c[m] = static_cast<uint8_t>(index / strides_[m]);
    index %= strides_[m];
  }
  return c;
}

Eigen::MatrixXcd DenseOracle::annihilation(int mode) const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (long i = 0; i < dim_; ++i) {
    FockConfig c = config_of(i);
    if (c[mode] == 0) continue;
    const double amp = std::sqrt(static_cast<double>(c[mode]));
    c[mode] -= 1;
    a(index_of(c), i) = amp;
  }
  return a;
}

Eigen::MatrixXcd DenseOracle::gate_unitary(const GateSpec& gate) const {
  using M = Eigen::MatrixXcd;
  switch (gate.kind) {
    case GateKind::Beamsplitter: {
      const M a = annihilation(gate.modes.at(0));
      const M b = annihilation(gate.modes.at(1));
      const M h = std::exp(cplx(0, -gate.phi)) * a.adjoint() * b +
                  std::exp(cplx(0, gate.phi)) * b.adjoint() * a;
      return expm_hermitian(h, gate.theta);
    }
    case GateKind::ThreeMode: {
      const M a = annihilation(gate.modes.at(0));
      const M b = annihilation(gate.modes.at(1));
      const M c = annihilation(gate.modes.at(2));
      const M h = std::exp(cplx(0, gate.phi)) * c.adjoint() * a * b +
                  std::exp(cplx(0, -gate.phi)) * a.adjoint() * b.adjoint() * c;
      return expm_hermitian(h, gate.theta);
    }
    case GateKind::Cz:
      return gate_unitary({GateKind::ThreeMode, gate.modes, M_PI, 0.0});
    case GateKind::Cswap: {
      const int ctrl = gate.modes.at(0), ma = gate.modes.at(1),
                mb = gate.modes.at(2), anc = gate.modes.at(3);
      const M pre =
          gate_unitary({GateKind::Beamsplitter, {ma, mb}, -M_PI / 4, M_PI / 2});
      const M cz = gate_unitary({GateKind::ThreeMode, {ctrl, mb, anc}, M_PI, 0.0});
      const M post =
          gate_unitary({GateKind::Beamsplitter, {ma, mb}, M_PI / 4, M_PI / 2});
      return post * cz * pre;
    }
    case GateKind::Phase: {
      M u = M::Zero(dim_, dim_);
      for (long i = 0; i < dim_; ++i)
        u(i, i) = std::exp(cplx(0.0, gate.phi * config_of(i)[gate.modes.at(0)]));
      return u;
    }
    case GateKind::DualRailRotation:
      return gate_unitary({GateKind::Beamsplitter, gate.modes, gate.theta / 2.0,
                           gate.phi == 0.0 ? 0.0 : M_PI / 2});
  }
  throw std::invalid_argument("unknown gate kind");
}

Eigen::MatrixXcd DenseOracle::sequence_unitary(
    const std::vector<GateSpec>& gates) const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim_, dim_);
  for (const auto& g : gates) u = gate_unitary(g) * u;
  return u;
}

Eigen::MatrixXcd DenseOracle::fredkin(int ctrl, int mode_a, int mode_b) const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (long i = 0; i < dim_; ++i) {
    FockConfig c = config_of(i);
    if (c[ctrl] >= 1) std::swap(c[mode_a], c[mode_b]);
    u(index_of(c), i) = 1.0;
  }
  return u;
}

Eigen::VectorXcd DenseOracle::to_vector(const SparseFockState& state) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  for (const auto& [config, amp] : state.terms()) v(index_of(config)) += amp;
  return v;
}

SparseFockState DenseOracle::to_state(const Eigen::VectorXcd& vec) const {
  SparseFockState s(reg_);
  for (long i = 0; i < dim_; ++i)
    if (std::abs(vec(i)) >= 1e-14) s.add_term(config_of(i), vec(i));
  return s;
}

}  // namespace cqad
