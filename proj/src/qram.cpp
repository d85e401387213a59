#include "cqad/qram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cqad {

int QramTree::level_of(int node) const {
  int l = 0;
  while ((2 << l) <= node) ++l;
  return l;
}

int QramTree::child_output(int node, int side) const {
  const int l = level_of(node);
  if (l < depth - 1) return top[2 * node + side];
  return bottom[2 * (node - (1 << (depth - 1))) + side];
}

int QramTree::node_ancilla(int node) const {
  const int l = level_of(node);
  const int offset = node - (1 << l);
  return ancilla[offset << (depth - l)];
}

std::vector<int> QramTree::router_modes() const {
  std::vector<int> out;
  for (int v = 1; v <= n_nodes(); ++v) {
    out.push_back(top[v]);
    out.push_back(routing[v]);
  }
  for (int j = 0; j < n_leaves; ++j) {
    out.push_back(bottom[j]);
    out.push_back(ancilla[j]);
    out.push_back(parking[j]);
  }
  return out;
}

QramTree build_tree(int depth) {
  if (depth < 1 || depth > 6)
    throw std::invalid_argument("tree depth must be between 1 and 6");
  QramTree t;
  t.depth = depth;
  t.n_leaves = 1 << depth;
  int next = 0;
  auto take = [&]() { return next++; };
  for (int k = 0; k < depth; ++k) t.addr_reg.push_back(take());
  t.bus_reg = take();
  t.pointer_reg = take();
  t.top.assign(t.n_nodes() + 1, -1);
  t.routing.assign(t.n_nodes() + 1, -1);
  for (int v = 1; v <= t.n_nodes(); ++v) {
    t.top[v] = take();
    t.routing[v] = take();
  }
  for (int j = 0; j < t.n_leaves; ++j) t.bottom.push_back(take());
  for (int j = 0; j < t.n_leaves; ++j) t.data.push_back(take());
  for (int j = 0; j < t.n_leaves; ++j) t.ancilla.push_back(take());
  for (int j = 0; j < t.n_leaves; ++j) t.parking.push_back(take());
  t.total_modes = next;
  return t;
}

Database Database::classical(std::vector<uint8_t> bits) {
  Database d;
  d.kind = Kind::Classical;
  d.bits = std::move(bits);
  return d;
}
Database Database::read_only(std::vector<uint8_t> bits) {
  Database d;
  d.kind = Kind::ReadOnlyClassical;
  d.bits = std::move(bits);
  return d;
}
Database Database::quantum_bits(std::vector<uint8_t> bits) {
  Database d;
  d.kind = Kind::Quantum;
  d.bits = std::move(bits);
  return d;
}
Database Database::quantum(std::vector<std::pair<cplx, cplx>> qubits) {
  Database d;
  d.kind = Kind::Quantum;
  d.qubits = std::move(qubits);
  return d;
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Classical: return "classical";
    case Scheme::ReadOnly: return "readonly";
    case Scheme::Quantum: return "quantum";
  }
  return "classical";
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Loss: return "loss";
    case NoiseKind::Dephasing: return "dephasing";
    case NoiseKind::Heating: return "heating";
  }
  return "loss";
}

// ---------------------------------------------------------------------------
// Scheduling

namespace {

GateSpec swap_move(int from, int to) {
  // Moves an excitation from -> to; the reverse move uses the inverse.
  return {GateKind::Beamsplitter, {from, to}, M_PI / 2.0, M_PI / 2.0};
}
GateSpec swap_back(int from, int to) { return inverse(swap_move(from, to)); }

}  // namespace

QuerySchedule schedule_query(const QramTree& tree, Scheme scheme,
                             const std::vector<uint8_t>& readonly_bits) {
  const int n = tree.depth;
  QuerySchedule sched;
  sched.depth = n;
  sched.scheme = scheme;
  if (scheme == Scheme::ReadOnly &&
      static_cast<int>(readonly_bits.size()) != tree.n_leaves)
    throw std::invalid_argument("read-only schedule needs one bit per leaf");

  auto add = [&](Stage stage, std::vector<GateSpec> gates) {
    if (gates.empty()) return;
    Slot slot;
    slot.stage = stage;
    std::set<int> active;
    for (const auto& g : gates) {
      for (int m : g.modes) {
        if (active.count(m) && g.kind != GateKind::Cswap)
          throw std::logic_error("mode targeted twice in one slot");
        active.insert(m);
      }
      ++sched.gates_total;
      switch (g.kind) {
        case GateKind::Cswap: ++sched.cswap_count; break;
        case GateKind::Beamsplitter: ++sched.swap_count; break;
        case GateKind::Cz: ++sched.cz_count; break;
        case GateKind::Phase: ++sched.phase_count; break;
        default: break;
      }
    }
    slot.gates = std::move(gates);
    slot.active_modes.assign(active.begin(), active.end());
    sched.slots.push_back(std::move(slot));
  };

  auto level_cswaps = [&](int level) {
    std::vector<GateSpec> gates;
    for (int v = tree.first_node(level); v < 2 * tree.first_node(level); ++v)
      gates.push_back({GateKind::Cswap,
                       {tree.routing[v], tree.top[v], tree.child_output(v, 1),
                        tree.node_ancilla(v)},
                       0.0,
                       0.0});
    return gates;
  };
  auto level_swaps_down = [&](int level) {
    std::vector<GateSpec> gates;
    for (int v = tree.first_node(level); v < 2 * tree.first_node(level); ++v)
      gates.push_back(swap_move(tree.top[v], tree.child_output(v, 0)));
    return gates;
  };
  auto level_swaps_up = [&](int level) {
    std::vector<GateSpec> gates;
    for (int v = tree.first_node(level); v < 2 * tree.first_node(level); ++v)
      gates.push_back(swap_back(tree.top[v], tree.child_output(v, 0)));
    return gates;
  };

  // Address routing-in: one qubit descends and parks per stage.
  for (int k = 0; k < n; ++k) {
    add(Stage::AddressIn, {swap_move(tree.addr_reg[k], tree.top[1])});
    for (int l = 0; l < k; ++l) {
      add(Stage::AddressIn, level_cswaps(l));
      add(Stage::AddressIn, level_swaps_down(l));
    }
    std::vector<GateSpec> parks;
    for (int v = tree.first_node(k); v < 2 * tree.first_node(k); ++v)
      parks.push_back(swap_move(tree.top[v], tree.routing[v]));
    add(Stage::AddressIn, parks);
  }

  auto descend = [&](Stage stage, int reg_mode) {
    add(stage, {swap_move(reg_mode, tree.top[1])});
    for (int l = 0; l < n; ++l) {
      add(stage, level_cswaps(l));
      add(stage, level_swaps_down(l));
    }
  };
  auto ascend = [&](Stage stage, int reg_mode) {
    for (int l = n - 1; l >= 0; --l) {
      add(stage, level_swaps_up(l));
      add(stage, level_cswaps(l));
    }
    add(stage, {swap_back(reg_mode, tree.top[1])});
  };

  if (scheme == Scheme::Quantum) {
    descend(Stage::PointerDescent, tree.pointer_reg);
    std::vector<GateSpec> parks, extracts, unparks;
    for (int j = 0; j < tree.n_leaves; ++j) {
      parks.push_back(swap_move(tree.bottom[j], tree.parking[j]));
      extracts.push_back({GateKind::Cswap,
                          {tree.parking[j], tree.data[j], tree.bottom[j],
                           tree.ancilla[j]},
                          0.0,
                          0.0});
      unparks.push_back(swap_back(tree.bottom[j], tree.parking[j]));
    }
    add(Stage::DataInteraction, parks);
    add(Stage::DataInteraction, extracts);
    ascend(Stage::DataAscent, tree.bus_reg);
    add(Stage::PointerAscent, unparks);
    ascend(Stage::PointerAscent, tree.pointer_reg);
  } else {
    descend(Stage::BusDescent, tree.bus_reg);
    if (scheme == Scheme::Classical) {
      std::vector<GateSpec> czs;
      for (int j = 0; j < tree.n_leaves; ++j)
        czs.push_back({GateKind::Cz,
                       {tree.data[j], tree.bottom[j], tree.ancilla[j]},
                       M_PI,
                       0.0});
      add(Stage::DataInteraction, czs);
    } else {
      std::vector<GateSpec> phases;
      for (int j = 0; j < tree.n_leaves; ++j)
        if (readonly_bits[j])
          phases.push_back({GateKind::Phase, {tree.bottom[j]}, 0.0, M_PI});
      add(Stage::DataInteraction, phases);
    }
    ascend(Stage::BusAscent, tree.bus_reg);
  }

  // Address extraction mirrors routing-in, deepest qubit first.
  for (int k = n - 1; k >= 0; --k) {
    std::vector<GateSpec> unparks;
    for (int v = tree.first_node(k); v < 2 * tree.first_node(k); ++v)
      unparks.push_back(swap_back(tree.top[v], tree.routing[v]));
    add(Stage::AddressOut, unparks);
    for (int l = k - 1; l >= 0; --l) {
      add(Stage::AddressOut, level_swaps_up(l));
      add(Stage::AddressOut, level_cswaps(l));
    }
    add(Stage::AddressOut, {swap_back(tree.addr_reg[k], tree.top[1])});
  }
  return sched;
}

QuerySchedule reverse_schedule(const QuerySchedule& schedule) {
  QuerySchedule rev;
  rev.depth = schedule.depth;
  rev.scheme = schedule.scheme;
  rev.gates_total = schedule.gates_total;
  rev.cswap_count = schedule.cswap_count;
  rev.swap_count = schedule.swap_count;
  rev.cz_count = schedule.cz_count;
  rev.phase_count = schedule.phase_count;
  for (auto it = schedule.slots.rbegin(); it != schedule.slots.rend(); ++it) {
    Slot slot;
    slot.stage = it->stage;
    slot.active_modes = it->active_modes;
    for (auto g = it->gates.rbegin(); g != it->gates.rend(); ++g)
      slot.gates.push_back(inverse(*g));
    rev.slots.push_back(std::move(slot));
  }
  return rev;
}

// ---------------------------------------------------------------------------
// Query execution

namespace {

// Far-from-ideal branches (a heated excitation spreading through gates)
// carry vanishing ideal overlap; bounding the term count keeps trajectory
// cost finite at an error no larger than the discarded weight.
constexpr size_t kTrajectoryTermCap = 3000;

void execute_schedule(SparseFockState& state, const QuerySchedule& schedule,
                      const std::vector<NoiseChannel>* noise,
                      std::mt19937_64* rng) {
  for (const auto& slot : schedule.slots) {
    for (const auto& g : slot.gates) apply_gate(state, g);
    if (noise && !noise->empty()) {
      apply_noise_step(state, *noise, slot.active_modes, *rng);
      state.cap_terms(kTrajectoryTermCap);
    }
  }
}

std::pair<cplx, cplx> leaf_qubit(const Database& db, int j) {
  if (db.kind == Database::Kind::Quantum && !db.qubits.empty())
    return db.qubits[j];
  return db.bits[j] ? std::make_pair(cplx(0.0), cplx(1.0))
                    : std::make_pair(cplx(1.0), cplx(0.0));
}

}  // namespace

SparseFockState prepare_query_state(const QramTree& tree, const Database& db,
                                    const std::vector<cplx>& address_amps,
                                    Scheme scheme, int truncation,
                                    TruncationPolicy policy) {
  if (static_cast<int>(address_amps.size()) != tree.n_leaves)
    throw std::invalid_argument("one address amplitude per leaf required");
  if (static_cast<int>(db.size()) != tree.n_leaves)
    throw std::invalid_argument("database length mismatch");

  FockRegister reg = FockRegister::uniform(tree.total_modes, truncation, policy);
  SparseFockState state(reg);

  // Base fragments: address bits (MSB routes at the root), data payload.
  std::vector<std::pair<FockConfig, cplx>> fragments;
  for (int j = 0; j < tree.n_leaves; ++j) {
    if (address_amps[j] == cplx(0.0)) continue;
    FockConfig c(tree.total_modes, 0);
    for (int k = 0; k < tree.depth; ++k)
      c[tree.addr_reg[k]] =
          static_cast<uint8_t>((j >> (tree.depth - 1 - k)) & 1);
    if (scheme == Scheme::Quantum) c[tree.pointer_reg] = 1;
    fragments.push_back({std::move(c), address_amps[j]});
  }

  // Data modes: Fock-encoded bits or product qubits; read-only data stays in
  // the classical array.
  if (scheme != Scheme::ReadOnly) {
    for (int j = 0; j < tree.n_leaves; ++j) {
      const auto [a0, a1] = leaf_qubit(db, j);
      std::vector<std::pair<FockConfig, cplx>> next;
      next.reserve(fragments.size() * 2);
      for (const auto& [c, amp] : fragments) {
        if (a0 != cplx(0.0)) next.push_back({c, amp * a0});
        if (a1 != cplx(0.0)) {
          FockConfig c1 = c;
          c1[tree.data[j]] = 1;
          next.push_back({std::move(c1), amp * a1});
        }
      }
      fragments = std::move(next);
    }
  }

  // Bus preparation: |+> for the copying schemes, vacuum for quantum reads.
  for (auto& [c, amp] : fragments) {
    if (scheme == Scheme::Quantum) {
      state.add_term(c, amp);
    } else {
      const double r = 1.0 / std::sqrt(2.0);
      state.add_term(c, amp * r);
      FockConfig c1 = c;
      c1[tree.bus_reg] = 1;
      state.add_term(c1, amp * r);
    }
  }
  state.normalize();
  return state;
}

QueryResult run_ideal_query(const QramTree& tree, const Database& db,
                            const std::vector<cplx>& address_amps,
                            Scheme scheme) {
  const QuerySchedule schedule = schedule_query(
      tree, scheme, scheme == Scheme::ReadOnly ? db.bits : std::vector<uint8_t>{});
  SparseFockState state = prepare_query_state(tree, db, address_amps, scheme);
  execute_schedule(state, schedule, nullptr, nullptr);

  if (state.max_occupation() > 1)
    throw std::runtime_error("phonon-number bound violated");
  for (int m : tree.router_modes())
    for (const auto& [config, amp] : state.terms())
      if (config[m] != 0)
        throw std::runtime_error("router modes not disentangled after query");
  if (scheme == Scheme::Quantum) {
    for (const auto& [config, amp] : state.terms())
      if (config[tree.pointer_reg] != 1)
        throw std::runtime_error("pointer qubit disturbed by ideal query");
  } else {
    apply_qubit_hadamard(state, tree.bus_reg);  // |+/-> readout bookkeeping
  }
  state.prune();

  QueryResult result;
  result.state = std::move(state);
  result.gates_total = schedule.gates_total;
  result.slots = static_cast<long>(schedule.slots.size());
  return result;
}

SparseFockState expected_query_output(const QramTree& tree, const Database& db,
                                      const std::vector<cplx>& address_amps,
                                      Scheme scheme) {
  FockRegister reg = FockRegister::uniform(tree.total_modes, 2);
  SparseFockState state(reg);
  for (int j = 0; j < tree.n_leaves; ++j) {
    if (address_amps[j] == cplx(0.0)) continue;
    FockConfig base(tree.total_modes, 0);
    for (int k = 0; k < tree.depth; ++k)
      base[tree.addr_reg[k]] =
          static_cast<uint8_t>((j >> (tree.depth - 1 - k)) & 1);

    std::vector<std::pair<FockConfig, cplx>> fragments{{base, address_amps[j]}};
    if (scheme == Scheme::ReadOnly) {
      for (auto& [c, amp] : fragments) c[tree.bus_reg] = db.bits[j];
    } else if (scheme == Scheme::Classical) {
      for (auto& [c, amp] : fragments) {
        c[tree.bus_reg] = db.bits[j];
        for (int k = 0; k < tree.n_leaves; ++k) c[tree.data[k]] = db.bits[k];
      }
    } else {
      // Quantum read: leaf j is emptied into the bus; the pointer returns.
      for (int k = 0; k < tree.n_leaves; ++k) {
        const auto [a0, a1] = leaf_qubit(db, k);
        std::vector<std::pair<FockConfig, cplx>> next;
        for (const auto& [c, amp] : fragments) {
          FockConfig c0 = c;
          FockConfig c1 = c;
          if (k == j) {
            c1[tree.bus_reg] = 1;
          } else {
            c1[tree.data[k]] = 1;
          }
          if (a0 != cplx(0.0)) next.push_back({std::move(c0), amp * a0});
          if (a1 != cplx(0.0)) next.push_back({std::move(c1), amp * a1});
        }
        fragments = std::move(next);
      }
      for (auto& [c, amp] : fragments) c[tree.pointer_reg] = 1;
    }
    for (const auto& [c, amp] : fragments) state.add_term(c, amp);
  }
  state.normalize();
  return state;
}

SparseFockState write_quantum(const QramTree& tree, const Database& db,
                              const std::vector<cplx>& address_amps,
                              cplx data_amp0, cplx data_amp1) {
  if (db.kind != Database::Kind::Quantum)
    throw std::invalid_argument("writes need a quantum database");
  SparseFockState state =
      prepare_query_state(tree, db, address_amps, Scheme::Quantum);
  // Load the qubit to be written into the bus register.
  SparseFockState::TermMap loaded;
  for (const auto& [config, amp] : state.terms()) {
    if (data_amp0 != cplx(0.0)) loaded[config] += amp * data_amp0;
    if (data_amp1 != cplx(0.0)) {
      FockConfig c1 = config;
      c1[tree.bus_reg] = 1;
      loaded[c1] += amp * data_amp1;
    }
  }
  state.terms() = std::move(loaded);
  state.normalize();

  const QuerySchedule writeback =
      reverse_schedule(schedule_query(tree, Scheme::Quantum));
  execute_schedule(state, writeback, nullptr, nullptr);
  state.prune();
  return state;
}

double verify_eq1(const QramTree& tree, const Database& db, Scheme scheme,
                  const std::vector<std::vector<cplx>>& extra_addresses) {
  std::vector<std::vector<cplx>> addresses;
  for (int j = 0; j < tree.n_leaves; ++j) {
    std::vector<cplx> basis(tree.n_leaves, 0.0);
    basis[j] = 1.0;
    addresses.push_back(std::move(basis));
  }
  addresses.insert(addresses.end(), extra_addresses.begin(),
                   extra_addresses.end());

  double worst = 0.0;
  for (const auto& amps : addresses) {
    const QueryResult result = run_ideal_query(tree, db, amps, scheme);
    const SparseFockState expected =
        expected_query_output(tree, db, amps, scheme);
    worst = std::max(worst, 1.0 - state_fidelity(result.state, expected));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Noisy sweeps

uint64_t substream_seed(uint64_t master, uint64_t cell, uint64_t trajectory) {
  uint64_t z = master + 0x9E3779B97F4A7C15ull * (cell + 1) +
               0xBF58476D1CE4E5B9ull * (trajectory + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SweepRow run_noisy_cell(int depth, double eps, NoiseKind channel, int trials,
                        uint64_t seed, Scheme scheme, bool parallel) {
  if (trials < 1) throw std::invalid_argument("at least one trajectory required");
  const QramTree tree = build_tree(depth);
  const uint64_t cell_id =
      substream_seed(seed, static_cast<uint64_t>(depth) * 31 +
                               static_cast<uint64_t>(channel) * 7,
                     static_cast<uint64_t>(eps * 1e9));

  // Deterministic pseudo-random database for the cell.
  std::mt19937_64 db_rng(substream_seed(seed, depth, 0xDBull));
  std::vector<uint8_t> bits(tree.n_leaves);
  for (auto& b : bits) b = static_cast<uint8_t>(db_rng() & 1);
  Database db = scheme == Scheme::ReadOnly ? Database::read_only(bits)
               : scheme == Scheme::Classical ? Database::classical(bits)
                                             : Database::quantum_bits(bits);

  std::vector<cplx> address(tree.n_leaves,
                            1.0 / std::sqrt(static_cast<double>(tree.n_leaves)));

  const QuerySchedule schedule = schedule_query(
      tree, scheme, scheme == Scheme::ReadOnly ? bits : std::vector<uint8_t>{});

  // Heating pushes occupations past the qubit subspace; give it headroom.
  const int truncation = channel == NoiseKind::Heating ? 3 : 2;
  const SparseFockState initial = prepare_query_state(
      tree, db, address, scheme, truncation, TruncationPolicy::Clip);

  SparseFockState ideal = initial;
  execute_schedule(ideal, schedule, nullptr, nullptr);

  const std::vector<NoiseChannel> channels{{channel, eps, false}};
  std::vector<double> fidelities(trials, 0.0);

  auto run_one = [&](int t) {
    SparseFockState traj = initial;
    std::mt19937_64 rng(substream_seed(seed, cell_id, t));
    execute_schedule(traj, schedule, &channels, &rng);
    fidelities[t] = state_fidelity(ideal, traj);
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int t = 0; t < trials; ++t) run_one(t);
  } else {
    for (int t = 0; t < trials; ++t) run_one(t);
  }

  double mean = 0.0;
  for (double f : fidelities) mean += f;
  mean /= trials;
  double var = 0.0;
  for (double f : fidelities) var += (f - mean) * (f - mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;

  SweepRow row;
  row.depth = depth;
  row.n = tree.n_leaves;
  row.eps = eps;
  row.channel = channel;
  row.fidelity = mean;
  row.stderr_fidelity = std::sqrt(var / trials);
  row.gates_total = schedule.gates_total;
  row.slots = static_cast<long>(schedule.slots.size());
  return row;
}

std::vector<SweepRow> run_noisy_sweep(const SweepRequest& request) {
  if (request.trials < 100)
    throw std::invalid_argument("sweeps need at least 100 trajectories");
  std::vector<SweepRow> rows;
  for (NoiseKind channel : request.channels)
    for (double eps : request.eps_list)
      for (int depth : request.depths)
        rows.push_back(run_noisy_cell(depth, eps, channel, request.trials,
                                      request.seed, request.scheme,
                                      request.parallel));
  return rows;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit needs matched samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace cqad
