#ifndef CQAD_FOCK_HPP
#define CQAD_FOCK_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace cqad {

using cplx = std::complex<double>;

// Occupation list, one entry per mode.
using FockConfig = std::vector<uint8_t>;

struct FockConfigHash {
  size_t operator()(const FockConfig& c) const {
    uint64_t h = 1469598103934665603ull;
    for (uint8_t b : c) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// Strict registers reject gates whose invariant block leaves the truncated
// space; clipped registers exponentiate the generator projected onto it
// (noise studies push occupations past the qubit subspace).
enum class TruncationPolicy { Strict, Clip };

struct FockRegister {
  int n_modes = 0;
  std::vector<uint8_t> truncation;  // allowed occupations are 0..trunc-1
  TruncationPolicy policy = TruncationPolicy::Strict;

  static FockRegister uniform(int n_modes, int truncation,
                              TruncationPolicy policy = TruncationPolicy::Strict);
  bool operator==(const FockRegister& o) const {
    return n_modes == o.n_modes && truncation == o.truncation;
  }
};

class SparseFockState {
 public:
  using TermMap = std::unordered_map<FockConfig, cplx, FockConfigHash>;

  SparseFockState() = default;
  explicit SparseFockState(FockRegister reg) : reg_(std::move(reg)) {}

  static SparseFockState vacuum(const FockRegister& reg);
  // Single configuration with amplitude 1.
  static SparseFockState basis(const FockRegister& reg, const FockConfig& config);

  const FockRegister& reg() const { return reg_; }
  const TermMap& terms() const { return terms_; }
  TermMap& terms() { return terms_; }

  void add_term(const FockConfig& config, cplx amplitude);
  double norm2() const;
  void normalize();
  void prune(double threshold = 1e-14);
  // Keeps the max_terms largest amplitudes (ties broken on the
  // configuration); returns the discarded weight. Bounds the cost of
  // propagating far-from-ideal noisy branches.
  double cap_terms(size_t max_terms);
  int max_occupation() const;
  int heating_cap_events() const { return heat_capped_; }
  void count_heating_cap() { ++heat_capped_; }

 private:
  FockRegister reg_;
  TermMap terms_;
  int heat_capped_ = 0;
};

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { Beamsplitter, ThreeMode, Cz, Cswap, Phase, DualRailRotation };

struct GateSpec {
  GateKind kind = GateKind::Beamsplitter;
  std::vector<int> modes;  // targets; cz/cswap list the ancilla last
  double theta = 0.0;
  double phi = 0.0;
};

GateSpec inverse(const GateSpec& gate);

// U = exp[-i theta (e^{-i phi} a^dag b + e^{i phi} a b^dag)]. theta = pi/2,
// phi = pi/2 is the canonical SWAP: |10> -> |01> phase-free, |01> -> -|10>,
// |11> -> -|11>. Moves in the reverse direction use the inverse gate.
void apply_beamsplitter(SparseFockState& state, int mode_a, int mode_b,
                        double theta, double phi);

// U = exp[-i theta (e^{i phi} a b c^dag + e^{-i phi} a^dag b^dag c)];
// conserves n_a - n_b and n_a + n_c. theta = pi on |110> gives -|110>.
void apply_three_mode(SparseFockState& state, int mode_a, int mode_b,
                      int mode_c, double theta, double phi);

// CZ on the {0,1} occupations of modes a, b with a vacuum ancilla: a full
// three-mode cycle (theta = pi).
void cz_gate(SparseFockState& state, int mode_a, int mode_b, int ancilla);

// Fredkin on the one-excitation subspace of {a, b}:
// BS(pi/4) . CZ(ctrl, b, ancilla) . BS(-pi/4), phases fixed so ctrl=|0>
// acts as the exact identity and ctrl=|1> swaps without extra phases.
void controlled_swap(SparseFockState& state, int ctrl, int mode_a, int mode_b,
                     int ancilla);

// Occupation n picks up e^{i n phi}.
void phase_shift(SparseFockState& state, int mode, double phi);

enum class BlochAxis { X, Y };

// Rotation exp(-i angle/2 sigma_axis) on the dual-rail qubit
// {|10>, |01>} of modes a, b.
void dual_rail_rotation(SparseFockState& state, int mode_a, int mode_b,
                        BlochAxis axis, double angle);

void apply_gate(SparseFockState& state, const GateSpec& gate);

// Measurement-basis bookkeeping for |+/-> readout of a {0,1}-occupied mode;
// not an engineered phonon gate.
void apply_qubit_hadamard(SparseFockState& state, int mode);

// ---------------------------------------------------------------------------
// Noise

enum class NoiseKind { Loss, Dephasing, Heating };

struct NoiseChannel {
  NoiseKind kind = NoiseKind::Loss;
  double epsilon = 0.0;  // probability per occupied mode per slot
  bool heat_unoccupied = false;  // heating also lifts vacuum when set
};

// One Monte Carlo step: channels act in list order on each scoped mode in
// ascending order, drawing one coin per (channel, mode). Loss samples the
// per-step Kraus rank (each phonon lost with probability epsilon); dephasing
// is a pi phase kick with probability epsilon; heating raises occupations
// with probability epsilon, capped at the truncation (capped events are
// counted on the state).
void apply_noise_step(SparseFockState& state,
                      const std::vector<NoiseChannel>& channels,
                      const std::vector<int>& scope_modes, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Measures

cplx inner_product(const SparseFockState& a, const SparseFockState& b);
double state_fidelity(const SparseFockState& a, const SparseFockState& b);

// Tr[rho_subset^2] for the reduced state on the given modes.
double purity_of_subset(const SparseFockState& state,
                        const std::vector<int>& modes);

// ---------------------------------------------------------------------------
// Dense oracle (small registers)

class DenseOracle {
 public:
  explicit DenseOracle(FockRegister reg);

  int dimension() const { return dim_; }
  long index_of(const FockConfig& config) const;
  FockConfig config_of(long index) const;

  Eigen::MatrixXcd annihilation(int mode) const;
  Eigen::MatrixXcd gate_unitary(const GateSpec& gate) const;
  Eigen::MatrixXcd sequence_unitary(const std::vector<GateSpec>& gates) const;
  Eigen::MatrixXcd fredkin(int ctrl, int mode_a, int mode_b) const;

  Eigen::VectorXcd to_vector(const SparseFockState& state) const;
  SparseFockState to_state(const Eigen::VectorXcd& vec) const;

 private:
  FockRegister reg_;
  int dim_ = 0;
  std::vector<long> strides_;
};

}  // namespace cqad

#endif
