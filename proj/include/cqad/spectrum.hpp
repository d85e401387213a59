#ifndef CQAD_SPECTRUM_HPP
#define CQAD_SPECTRUM_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqad/device.hpp"
#include "cqad/dressed.hpp"

namespace cqad {

// ---------------------------------------------------------------------------
// Spectrum generation

struct UniformScheme {
  double nu_hz = 0.0;      // free spectral range
  int count = 0;
  double base_hz = 0.0;    // frequency of the first mode
  double g_hz = 0.0;       // coupling applied to every generated mode
  double kappa_hz = 0.0;
};

struct PointDefectScheme {
  UniformScheme base;
  double omega_ext_hz = 0.0;   // external-mode frequency
  double coupling_hz = 0.0;    // peak phonon/external coupling G
  double bandwidth_hz = 0.0;   // Gaussian window width D for the coupling
};

struct TwoFamilyScheme {
  double nu1_hz = 0.0;
  double nu2_hz = 0.0;
  int count1 = 0;
  int count2 = 0;
  double base1_hz = 0.0;
  double base2_hz = 0.0;
  double g_hz = 0.0;
  double kappa_hz = 0.0;
};

struct CompositeScheme {
  double nu_hz = 0.0;          // mean spacing
  double depth = 0.0;          // relative modulation depth
  double period = 0.0;         // modulation period in mode index
  int count = 0;
  double base_hz = 0.0;
  double g_hz = 0.0;
  double kappa_hz = 0.0;
};

using SpectrumScheme = std::variant<UniformScheme, PointDefectScheme,
                                    TwoFamilyScheme, CompositeScheme>;

ModeSpectrum generate_spectrum(const SpectrumScheme& scheme);

// Eigenfrequencies of the phonon set linearly coupled to one external mode.
// The external eigenmode (largest overlap with the external basis vector) is
// dropped; the rest are returned re-sorted with the original index order.
ModeSpectrum hybridize_external(const ModeSpectrum& bare, double omega_ext_hz,
                                const std::vector<cplx>& couplings_hz);

// Storage window for a two-family spectrum in which any cross-family pair is
// selectively addressable with min spacing contrast |nu1 - nu2|. Pairs are
// interleaved (F1_k, F2_k) with cross spacings kept inside (0, nu1/2) so the
// reversed-orientation spacings live in a disjoint band.
CouplingGraph two_family_window(const ModeSpectrum& spectrum, double nu1_hz,
                                double nu2_hz, int max_pairs = -1);

// ---------------------------------------------------------------------------
// Nonuniformity metric

struct NonuniformityReport {
  double delta_nu_hz = 0.0;
  std::pair<int, int> witness_pair;    // protected pair achieving the min
  std::pair<int, int> witness_other;   // conflicting pair
  // Per protected pair: the smallest spacing contrast against all others.
  std::vector<std::pair<std::pair<int, int>, double>> margins;
};

// Min over protected pairs {i,j} of the min over pairs {k in S, l} != {i,j}
// of | |w_i - w_j| - |w_k - w_l| |, by exhaustive enumeration. Ties broken
// lexicographically on (pair, other).
NonuniformityReport nonuniformity(const ModeSpectrum& spectrum,
                                  const CouplingGraph& graph,
                                  bool parallel = true);

// ---------------------------------------------------------------------------
// Kerr model

struct KerrModel {
  std::vector<int> mode_indices;
  // chi[j][k] with self-Kerr on the diagonal; symmetric, Hz.
  std::vector<std::vector<double>> chi_hz;
  double chi_bar_hz = 0.0;  // average off-diagonal cross-Kerr over populated modes
  std::vector<int> occupations;
  int n_tot = 0;

  double chi(int index_j, int index_k) const;
};

// chi_jk = 2 alpha |lambda_j|^2 |lambda_k|^2 (j != k), chi_jj = alpha
// |lambda_j|^4, from the dressed participations. Occupations default to one
// phonon per mode when not supplied.
KerrModel kerr_matrix(const DressedFrame& frame, const TransmonParams& transmon,
                      const std::vector<int>& occupations = {});

// ---------------------------------------------------------------------------
// Drive planning

struct IntendedCoupling {
  CouplingKind kind = CouplingKind::TwoMode;
  std::vector<int> mode_indices;
};

struct CompensationRecord {
  double stark_terms_hz = 0.0;   // net Stark compensation applied
  double kerr_terms_hz = 0.0;    // net Kerr compensation applied
  double residual_bound_hz = 0.0;  // worst-case uncompensatable detuning
};

struct DrivePlan {
  std::vector<DriveTone> tones;
  std::vector<IntendedCoupling> intended;
  CompensationRecord compensation;
  int iterations = 0;
};

struct PlanOptions {
  double tol_hz = 1.0;
  int max_iters = 100;
  double damping = 0.5;  // applied when the fixed point oscillates
};

// Places drive 2 so that omega2 - omega1 = (omega_B + S_B) - (omega_A + S_A)
// self-consistently; drive 1 is the anchor. The residual report bounds
// sum_j (chi_Aj - chi_Bj) n_j over occupation patterns with the given total.
DrivePlan plan_two_mode_drives(const DeviceConfig& device, int mode_a,
                               int mode_b, const DriveTone& anchor,
                               cplx amplitude2_hz, int n_tot,
                               const PlanOptions& opts = {});

// Single tone at omega_A + omega_B - omega_C + S_A + S_B - S_C - chi_AB -
// chi_bar (n_tot - 2); the residual bound uses deviations of chi from its
// average.
DrivePlan plan_three_mode_drive(const DeviceConfig& device, int mode_a,
                                int mode_b, int mode_c, cplx amplitude_hz,
                                int n_tot, const PlanOptions& opts = {});

// ---------------------------------------------------------------------------
// Collision audit

struct Collision {
  std::vector<std::string> drive_labels;  // one or two tones
  IntendedCoupling coupling;              // the unintended resonance
  double detuning_hz = 0.0;
};

struct CollisionReport {
  std::vector<Collision> collisions;
  double tolerance_hz = 0.0;
  bool pass() const { return collisions.empty(); }
};

// Every pairwise drive difference is checked against every two-mode spacing
// with at least one mode in S, and every single tone against every
// three-mode combination omega_i + omega_j - omega_k over S. Matches within
// tolerance that are not intended couplings are reported.
CollisionReport check_drive_set(const ModeSpectrum& spectrum,
                                const CouplingGraph& graph,
                                const std::vector<DriveTone>& tones,
                                const std::vector<IntendedCoupling>& intended,
                                double tolerance_hz, bool parallel = true);

}  // namespace cqad

#endif
