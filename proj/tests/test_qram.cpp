#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cqad/qram.hpp"

using namespace cqad;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<cplx> basis_address(int n_leaves, int j) {
  std::vector<cplx> amps(n_leaves, 0.0);
  amps[j] = 1.0;
  return amps;
}

std::vector<cplx> random_address(int n_leaves, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> amps(n_leaves);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {unif(rng), unif(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return amps;
}

std::vector<uint8_t> random_bits(int n, std::mt19937_64& rng) {
  std::vector<uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
  return bits;
}

}  // namespace

TEST_CASE("tree structure counts") {
  const QramTree t1 = build_tree(1);
  CHECK(t1.n_nodes() == 1);
  CHECK(t1.n_leaves == 2);

  const QramTree t3 = build_tree(3);
  CHECK(t3.n_nodes() == 7);
  CHECK(t3.n_leaves == 8);
  // Modes: n address + bus + pointer + 2 per node + 4 per leaf.
  CHECK(t3.total_modes == 3 + 2 + 2 * 7 + 4 * 8);

  CHECK_THROWS_AS(build_tree(0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree(7), std::invalid_argument);
}

TEST_CASE("tree mode ids are unique") {
  const QramTree t = build_tree(3);
  std::set<int> seen;
  auto add = [&](int m) { CHECK(seen.insert(m).second); };
  for (int m : t.addr_reg) add(m);
  add(t.bus_reg);
  add(t.pointer_reg);
  for (int v = 1; v <= t.n_nodes(); ++v) {
    add(t.top[v]);
    add(t.routing[v]);
  }
  for (int j = 0; j < t.n_leaves; ++j) {
    add(t.bottom[j]);
    add(t.data[j]);
    add(t.ancilla[j]);
    add(t.parking[j]);
  }
  CHECK(static_cast<int>(seen.size()) == t.total_modes);
}

TEST_CASE("every leaf is reached by exactly one root-to-leaf path") {
  const QramTree t = build_tree(3);
  std::set<int> outputs;
  for (int v = 1; v <= t.n_nodes(); ++v) {
    outputs.insert(t.child_output(v, 0));
    outputs.insert(t.child_output(v, 1));
  }
  // Child outputs: every non-root top plus every bottom, each exactly once.
  CHECK(static_cast<int>(outputs.size()) == 2 * t.n_nodes());
  for (int j = 0; j < t.n_leaves; ++j) CHECK(outputs.count(t.bottom[j]) == 1);
}

TEST_CASE("depth-1 classical schedule shows the canonical stage pattern") {
  const QramTree t = build_tree(1);
  const QuerySchedule s = schedule_query(t, Scheme::Classical);
  std::vector<Stage> stages;
  for (const auto& slot : s.slots)
    if (stages.empty() || stages.back() != slot.stage)
      stages.push_back(slot.stage);
  const std::vector<Stage> expected{Stage::AddressIn, Stage::BusDescent,
                                    Stage::DataInteraction, Stage::BusAscent,
                                    Stage::AddressOut};
  CHECK(stages == expected);
  int cswaps = 0, czs = 0;
  for (const auto& slot : s.slots)
    for (const auto& g : slot.gates) {
      if (g.kind == GateKind::Cswap) ++cswaps;
      if (g.kind == GateKind::Cz) ++czs;
    }
  CHECK(cswaps == 2);  // bus descent + bus ascent routers
  CHECK(czs == 2);     // one per leaf
}

TEST_CASE("quantum schedule routes the pointer before data extraction") {
  const QramTree t = build_tree(2);
  const QuerySchedule s = schedule_query(t, Scheme::Quantum);
  bool seen_pointer = false, seen_data = false;
  for (const auto& slot : s.slots) {
    if (slot.stage == Stage::PointerDescent) {
      CHECK_FALSE(seen_data);
      seen_pointer = true;
    }
    if (slot.stage == Stage::DataInteraction) {
      CHECK(seen_pointer);
      seen_data = true;
    }
  }
  CHECK(seen_data);
}

TEST_CASE("gate counts match the closed-form tallies") {
  for (int n = 1; n <= 4; ++n) {
    const QramTree t = build_tree(n);
    const QuerySchedule s = schedule_query(t, Scheme::Classical);
    const long pow2 = 1L << n;
    CHECK(s.gates_total == 11 * pow2 - 2 * n - 8);
    CHECK(static_cast<long>(s.slots.size()) == 2L * n * n + 6 * n + 3);
    CHECK(s.cz_count == pow2);
  }
}

TEST_CASE("gate totals scale linearly in N with logarithmic bus depth") {
  std::vector<double> per_leaf;
  for (int n = 2; n <= 5; ++n) {
    const QramTree t = build_tree(n);
    const QuerySchedule s = schedule_query(t, Scheme::Classical);
    per_leaf.push_back(static_cast<double>(s.gates_total) / t.n_leaves);
    int bus_slots = 0;
    for (const auto& slot : s.slots)
      if (slot.stage == Stage::BusDescent) ++bus_slots;
    CHECK(bus_slots == 2 * n + 1);
  }
  // Theta(N): gates per leaf approach the constant 11.
  CHECK(per_leaf.back() == doctest::Approx(11.0).epsilon(0.15));
  CHECK(std::abs(per_leaf[3] - per_leaf[2]) <
        std::abs(per_leaf[1] - per_leaf[0]));
}

TEST_CASE("no mode is targeted twice within any slot") {
  for (Scheme scheme : {Scheme::Classical, Scheme::Quantum}) {
    const QramTree t = build_tree(3);
    const QuerySchedule s = schedule_query(t, scheme);
    for (const auto& slot : s.slots) {
      std::set<int> seen;
      for (const auto& g : slot.gates)
        for (int m : g.modes) CHECK(seen.insert(m).second);
    }
  }
}

TEST_CASE("schedule composed with its reverse is the identity") {
  const QramTree t = build_tree(2);
  std::mt19937_64 rng(31);
  const Database db = Database::classical(random_bits(4, rng));
  const std::vector<cplx> address = random_address(4, rng);
  SparseFockState state = prepare_query_state(t, db, address, Scheme::Classical);
  const SparseFockState initial = state;
  const QuerySchedule s = schedule_query(t, Scheme::Classical);
  for (const auto& slot : s.slots)
    for (const auto& g : slot.gates) apply_gate(state, g);
  const QuerySchedule r = reverse_schedule(s);
  for (const auto& slot : r.slots)
    for (const auto& g : slot.gates) apply_gate(state, g);
  CHECK(state_fidelity(state, initial) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ideal query: worked example at N = 4") {
  // D = [0, 1, 1, 0], address (|00> + |10>)/sqrt(2) ->
  // (|00>|D0 = 0> + |10>|D2 = 1>)/sqrt(2).
  const QramTree t = build_tree(2);
  const Database db = Database::classical({0, 1, 1, 0});
  std::vector<cplx> address(4, 0.0);
  address[0] = kInvSqrt2;  // |00>
  address[2] = kInvSqrt2;  // |10>
  const QueryResult result = run_ideal_query(t, db, address, Scheme::Classical);

  FockConfig want0(t.total_modes, 0);
  want0[t.data[1]] = 1;
  want0[t.data[2]] = 1;
  FockConfig want2 = want0;
  want2[t.addr_reg[0]] = 1;
  want2[t.bus_reg] = 1;
  REQUIRE(result.state.terms().size() == 2);
  CHECK(std::abs(result.state.terms().at(want0) - kInvSqrt2) < 1e-9);
  CHECK(std::abs(result.state.terms().at(want2) - kInvSqrt2) < 1e-9);
}

TEST_CASE("all-zero database leaves bus and address untouched") {
  const QramTree t = build_tree(2);
  const Database db = Database::classical({0, 0, 0, 0});
  std::mt19937_64 rng(7);
  const std::vector<cplx> address = random_address(4, rng);
  const QueryResult result = run_ideal_query(t, db, address, Scheme::Classical);
  const SparseFockState expected =
      expected_query_output(t, db, address, Scheme::Classical);
  CHECK(state_fidelity(result.state, expected) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("classical and quantum schemes agree on computational data") {
  const QramTree t = build_tree(2);
  const std::vector<uint8_t> bits = {1, 0, 0, 1};
  for (int j = 0; j < 4; ++j) {
    const auto address = basis_address(4, j);
    const QueryResult classical =
        run_ideal_query(t, Database::classical(bits), address, Scheme::Classical);
    const QueryResult quantum = run_ideal_query(
        t, Database::quantum_bits(bits), address, Scheme::Quantum);
    for (const auto& [config, amp] : classical.state.terms())
      CHECK(config[t.bus_reg] == bits[j]);
    for (const auto& [config, amp] : quantum.state.terms())
      CHECK(config[t.bus_reg] == bits[j]);
  }
}

TEST_CASE("verify_eq1 across schemes and depths") {
  std::mt19937_64 rng(17);
  for (int depth : {1, 2}) {
    const QramTree t = build_tree(depth);
    const int n = t.n_leaves;
    for (int rep = 0; rep < 3; ++rep) {
      const std::vector<uint8_t> bits = random_bits(n, rng);
      std::vector<std::vector<cplx>> supers{random_address(n, rng),
                                            random_address(n, rng)};
      CHECK(verify_eq1(t, Database::classical(bits), Scheme::Classical, supers) <
            1e-9);
      CHECK(verify_eq1(t, Database::read_only(bits), Scheme::ReadOnly, supers) <
            1e-9);
      CHECK(verify_eq1(t, Database::quantum_bits(bits), Scheme::Quantum,
                       supers) < 1e-9);
    }
  }
}

TEST_CASE("quantum write then read recovers the qubit") {
  const QramTree t = build_tree(2);
  const Database empty = Database::quantum_bits({0, 0, 0, 0});
  const cplx a0{0.6, 0.0}, a1{0.0, 0.8};
  const auto address = basis_address(4, 2);
  const SparseFockState written = write_quantum(t, empty, address, a0, a1);
  double p1 = 0.0;
  for (const auto& [config, amp] : written.terms()) {
    CHECK(config[t.bus_reg] == 0);
    CHECK(config[t.pointer_reg] == 1);
    if (config[t.data[2]] == 1) p1 += std::norm(amp);
  }
  CHECK(p1 == doctest::Approx(std::norm(a1)).epsilon(1e-9));

  SparseFockState state = written;
  const QuerySchedule read = schedule_query(t, Scheme::Quantum);
  for (const auto& slot : read.slots)
    for (const auto& g : slot.gates) apply_gate(state, g);
  FockConfig want0(t.total_modes, 0);
  want0[t.addr_reg[0]] = 1;  // address |10>
  want0[t.pointer_reg] = 1;
  FockConfig want1 = want0;
  want1[t.bus_reg] = 1;
  SparseFockState expected(state.reg());
  expected.add_term(want0, a0);
  expected.add_term(want1, a1);
  CHECK(state_fidelity(state, expected) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("write at |0>, read at |1> returns the stored bit unchanged") {
  const QramTree t = build_tree(1);
  const Database db = Database::quantum_bits({0, 1});
  const SparseFockState written =
      write_quantum(t, db, basis_address(2, 0), 1.0, 0.0);
  SparseFockState state = written;
  // Re-point the address register at leaf 1 before reading back.
  SparseFockState::TermMap flipped;
  for (const auto& [config, amp] : state.terms()) {
    FockConfig c = config;
    c[t.addr_reg[0]] = 1;
    flipped[c] += amp;
  }
  state.terms() = std::move(flipped);
  const QuerySchedule read = schedule_query(t, Scheme::Quantum);
  for (const auto& slot : read.slots)
    for (const auto& g : slot.gates) apply_gate(state, g);
  for (const auto& [config, amp] : state.terms())
    CHECK(config[t.bus_reg] == 1);  // D_1 = 1 retrieved
}

TEST_CASE("superposed-address write entangles the database") {
  const QramTree t = build_tree(1);
  const Database empty = Database::quantum_bits({0, 0});
  std::vector<cplx> address{kInvSqrt2, kInvSqrt2};
  const SparseFockState written = write_quantum(t, empty, address, 0.0, 1.0);
  const double purity = purity_of_subset(written, {t.data[0], t.data[1]});
  CHECK(purity < 1.0 - 1e-6);
}

TEST_CASE("noisy cell: zero error probability gives unit fidelity") {
  const SweepRow row =
      run_noisy_cell(2, 0.0, NoiseKind::Loss, 100, 42, Scheme::ReadOnly);
  CHECK(row.fidelity == doctest::Approx(1.0));
  CHECK(row.stderr_fidelity == doctest::Approx(0.0));
}

TEST_CASE("noisy cells are deterministic and thread-count independent") {
  const SweepRow a =
      run_noisy_cell(2, 5e-3, NoiseKind::Loss, 200, 42, Scheme::ReadOnly, true);
  const SweepRow b =
      run_noisy_cell(2, 5e-3, NoiseKind::Loss, 200, 42, Scheme::ReadOnly, false);
  CHECK(a.fidelity == b.fidelity);
  CHECK(a.stderr_fidelity == b.stderr_fidelity);
}

TEST_CASE("loss infidelity grows with depth and roughly with log N") {
  std::vector<double> x, y;
  for (int depth : {1, 3, 5}) {
    const SweepRow row =
        run_noisy_cell(depth, 2e-3, NoiseKind::Loss, 300, 7, Scheme::ReadOnly);
    x.push_back(depth);
    y.push_back(1.0 - row.fidelity);
  }
  CHECK(y[1] > y[0]);
  CHECK(y[2] > y[1]);
  const LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope > 0.0);
  CHECK(fit.r2 > 0.8);
}

TEST_CASE("linear fit recovers an exact line") {
  const LinearFit fit = linear_fit({1, 2, 3, 4}, {3.0, 5.0, 7.0, 9.0});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("substream seeds decorrelate cells and trajectories") {
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 0, 1));
  CHECK(substream_seed(1, 0, 0) != substream_seed(1, 1, 0));
  CHECK(substream_seed(1, 0, 0) != substream_seed(2, 0, 0));
}
