#ifndef CQAD_QRAM_HPP
#define CQAD_QRAM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cqad/fock.hpp"

namespace cqad {

// ---------------------------------------------------------------------------
// Tree layout

// Binary router tree. Node v (heap index, 1-based) at level l has a top
// (input) mode and a routing mode; its left/right output modes are the
// children's tops, or bottom modes below the last router level. Leaf j
// carries a data mode, an ancilla and a parking mode.
struct QramTree {
  int depth = 0;
  int n_leaves = 0;
  std::vector<int> addr_reg;  // one per address qubit
  int bus_reg = -1;
  int pointer_reg = -1;
  std::vector<int> top;      // indexed by node (1 .. 2^depth - 1); [0] unused
  std::vector<int> routing;  // same indexing
  std::vector<int> bottom;   // per leaf
  std::vector<int> data;     // per leaf
  std::vector<int> ancilla;  // per leaf; nodes borrow their leftmost leaf's
  std::vector<int> parking;  // per leaf (pointer parking, quantum scheme)
  int total_modes = 0;

  int n_nodes() const { return n_leaves - 1; }
  int level_of(int node) const;
  int first_node(int level) const { return 1 << level; }
  int nodes_at(int level) const { return 1 << level; }
  // Output mode on the given side (0 = left, 1 = right).
  int child_output(int node, int side) const;
  int node_ancilla(int node) const;  // leftmost descendant leaf's ancilla
  std::vector<int> router_modes() const;  // tops, bottoms, routing, ancillas, parking
};

QramTree build_tree(int depth);

// ---------------------------------------------------------------------------
// Database

struct Database {
  enum class Kind { Classical, ReadOnlyClassical, Quantum };
  Kind kind = Kind::Classical;
  std::vector<uint8_t> bits;  // classical / read-only payload, length N
  // Quantum payload: per-leaf qubit (amp0, amp1); bits are used when empty.
  std::vector<std::pair<cplx, cplx>> qubits;

  static Database classical(std::vector<uint8_t> bits);
  static Database read_only(std::vector<uint8_t> bits);
  static Database quantum_bits(std::vector<uint8_t> bits);
  static Database quantum(std::vector<std::pair<cplx, cplx>> qubits);
  size_t size() const { return kind == Kind::Quantum && !qubits.empty()
                                   ? qubits.size()
                                   : bits.size(); }
};

enum class Scheme { Classical, ReadOnly, Quantum };
std::string to_string(Scheme scheme);

// ---------------------------------------------------------------------------
// Schedule

enum class Stage {
  AddressIn,
  BusDescent,
  PointerDescent,
  DataInteraction,
  DataAscent,
  PointerAscent,
  BusAscent,
  AddressOut,
};

struct Slot {
  Stage stage = Stage::AddressIn;
  std::vector<GateSpec> gates;     // disjoint mode sets within a slot
  std::vector<int> active_modes;   // noise scope: modes driven this slot
};

struct QuerySchedule {
  int depth = 0;
  Scheme scheme = Scheme::Classical;
  std::vector<Slot> slots;
  long gates_total = 0;
  long cswap_count = 0;
  long swap_count = 0;  // beamsplitter-implemented moves
  long cz_count = 0;
  long phase_count = 0;
};

// Emits address routing-in, bus/pointer descent, the data interaction for
// the scheme, the mirrored ascent and address extraction. Read-only
// schedules need the database bits for the leaf phase program.
QuerySchedule schedule_query(const QramTree& tree, Scheme scheme,
                             const std::vector<uint8_t>& readonly_bits = {});

// Mirrored slots with inverse gates; running a quantum-scheme read schedule
// in reverse performs the write.
QuerySchedule reverse_schedule(const QuerySchedule& schedule);

// ---------------------------------------------------------------------------
// Queries

struct QueryResult {
  SparseFockState state;
  long gates_total = 0;
  long slots = 0;
  double fidelity = 1.0;
  double stderr_fidelity = 0.0;
  long trajectories = 0;
};

// Builds the initial register state: address amplitudes over bitstrings
// (MSB routes at the root), bus |+> for classical/read-only, pointer |1>
// for quantum, data modes loaded from the database.
SparseFockState prepare_query_state(const QramTree& tree, const Database& db,
                                    const std::vector<cplx>& address_amps,
                                    Scheme scheme, int truncation = 2,
                                    TruncationPolicy policy = TruncationPolicy::Strict);

// Ideal (noise-free) query; checks the one-phonon bound and router
// disentanglement, and decodes the |+/-> bus for classical/read-only
// schemes.
QueryResult run_ideal_query(const QramTree& tree, const Database& db,
                            const std::vector<cplx>& address_amps,
                            Scheme scheme);

// Analytic post-query state for comparison with runs.
SparseFockState expected_query_output(const QramTree& tree, const Database& db,
                                      const std::vector<cplx>& address_amps,
                                      Scheme scheme);

// Reverse-runs the quantum read schedule to deposit the bus qubit at the
// addressed leaf; returns the final full-register state.
SparseFockState write_quantum(const QramTree& tree, const Database& db,
                              const std::vector<cplx>& address_amps,
                              cplx data_amp0, cplx data_amp1);

// Max (1 - fidelity) against the analytic output over all basis addresses
// plus the supplied superpositions.
double verify_eq1(const QramTree& tree, const Database& db, Scheme scheme,
                  const std::vector<std::vector<cplx>>& extra_addresses = {});

// ---------------------------------------------------------------------------
// Noisy queries

struct SweepRequest {
  std::vector<int> depths;
  std::vector<double> eps_list;
  std::vector<NoiseKind> channels;
  int trials = 1000;
  uint64_t seed = 1;
  Scheme scheme = Scheme::ReadOnly;
  bool parallel = true;
};

struct SweepRow {
  int depth = 0;
  long n = 0;
  double eps = 0.0;
  NoiseKind channel = NoiseKind::Loss;
  double fidelity = 0.0;
  double stderr_fidelity = 0.0;
  long gates_total = 0;
  long slots = 0;
};

std::string to_string(NoiseKind kind);

// Monte Carlo trajectories of the scheduled query with a noise step after
// each slot on the slot's driven modes; deterministic per seed with
// per-trajectory substreams reduced in index order.
std::vector<SweepRow> run_noisy_sweep(const SweepRequest& request);

// Trajectory fidelity statistics for one cell.
SweepRow run_noisy_cell(int depth, double eps, NoiseKind channel, int trials,
                        uint64_t seed, Scheme scheme, bool parallel = true);

// ---------------------------------------------------------------------------
// Fits

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

uint64_t substream_seed(uint64_t master, uint64_t cell, uint64_t trajectory);

}  // namespace cqad

#endif
