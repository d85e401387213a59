#ifndef CQAD_FIDELITY_HPP
#define CQAD_FIDELITY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "cqad/spectrum.hpp"

namespace cqad {

enum class GateType { Swap, Cz };
enum class Route { Direct, Virtual };

// Gate-duration constants t = c pi / 2g.
double duration_constant(Route route, GateType gate);

struct GateFidelityInputs {
  double kappa_hz = 0.0;   // bare phonon decoherence
  double gamma_hz = 0.0;   // bare transmon decoherence
  // Dressed decay per involved mode (2 for SWAP, 3 for CZ).
  std::vector<double> kappa_gamma_hz;
  double nu_hz = 0.0;
  double delta_nu_hz = 0.0;
  double g_bound_direct_hz = 0.0;
  double g_bound_virtual_hz = 0.0;
};

// Total virtual-gate decoherence rate: sum of the two dressed rates for
// SWAP, half the three-mode sum for CZ.
double kappa_bar_gamma(const GateFidelityInputs& inputs, GateType gate);

// Uniform-rate inputs: kappa_gamma = kappa + gamma * participation for each
// involved mode, with participation = |g/delta|^2.
GateFidelityInputs make_inputs(double kappa_hz, double gamma_hz,
                               double participation, GateType gate,
                               double nu_hz, double delta_nu_hz,
                               double g_bound_direct_hz,
                               double g_bound_virtual_hz);

enum class InfidelityForm {
  FirstOrder,   // k t + eps
  HigherOrder,  // 1 - exp(-k t)(1 - eps), clamped to [0, 1]
};

double local_infidelity_direct(const GateFidelityInputs& inputs, GateType gate,
                               double g_d_hz,
                               InfidelityForm form = InfidelityForm::HigherOrder);
double local_infidelity_virtual(const GateFidelityInputs& inputs, GateType gate,
                                double g_v_hz,
                                InfidelityForm form = InfidelityForm::HigherOrder);

struct FidelityReport {
  double g_opt_hz = 0.0;
  double infidelity = 0.0;
  bool constrained = false;
  // Closed-form optimum (3/2)[c pi k / (sqrt(2) s)]^(2/3); filled when the
  // bound does not bind.
  std::optional<double> closed_form;
};

// Golden-section minimisation of the requested form over (0, bound].
FidelityReport optimize_gate(const GateFidelityInputs& inputs, Route route,
                             GateType gate,
                             InfidelityForm form = InfidelityForm::HigherOrder);

// Partial sum 2 sum_{n=1..cutoff} 1/n^2; converges to pi^2/3 from below.
double crowding_coefficient_direct(long cutoff);

// Average over the stored pairs of the exact spacing-contrast sum
// sum_n (delta_nu / delta'_n)^2 over unwanted two-mode couplings touching
// the M stored modes. Returns +inf when M exceeds the selectively
// addressable window (selectivity collapse). Requires a two-family layout
// with adjacent cross-family pairs (even/odd index convention).
double crowding_coefficient_virtual(const ModeSpectrum& spectrum,
                                    const CouplingGraph& graph, int m_stored);

struct GlobalFidelityReport {
  int m_stored = 0;
  double crowding_coefficient = 0.0;  // S_d or S_v used
  double g_opt_hz = 0.0;
  double infidelity = 0.0;
  bool constrained = false;
  double depth = 0.0;  // d(M) = 1 / [M (1 - F)]
};

// Multimode infidelity: direct adds (M-2) idling phonons and the S_d
// crowding prefactor; virtual scales the dressed rate by M (SWAP) or
// M - 1/2 (CZ) and uses S_v.
GlobalFidelityReport global_infidelity(const GateFidelityInputs& inputs, int m_stored,
                                       Route route, GateType gate, double s_d,
                                       double s_v,
                                       InfidelityForm form = InfidelityForm::HigherOrder);

struct QuantumVolume {
  int m_opt = 0;
  double volume = 0.0;
};

// V = max_M [min(M, d(M))]^2 with d(M) = 1/[M(1-F)], exhaustive over the
// range.
QuantumVolume quantum_volume(const std::function<double(int)>& one_minus_f,
                             int m_lo, int m_hi);

// Leading Kerr-induced infidelity (1/64) sin^4(2 g t) (chi/g)^2 for a
// two-mode gate; valid for chi << g (the flag records the check).
struct KerrInfidelity {
  double value = 0.0;
  bool valid_regime = true;
};
KerrInfidelity kerr_leading_infidelity(double chi_ab_hz, double g_v_hz,
                                       double t_s);

// (D/g)^2 for a residual detuning D of the drive from resonance.
struct DetuningInfidelity {
  double value = 0.0;
  bool valid_regime = true;
};
DetuningInfidelity detuning_infidelity(double detuning_hz, double g_v_hz);

struct HeatingInputs {
  double gamma_hz = 0.0;
  double gamma_phi_hf_hz = 0.0;
  cplx xi_1{};
  cplx xi_2{};
  double delta_1_hz = 0.0;
  double delta_2_hz = 0.0;
  double alpha_hz = 0.0;
};

// Drive-induced transmon heating rate to leading order in the drive
// strengths; exchange-symmetric in the two tones.
double drive_heating_rate(const HeatingInputs& inputs);

// ---------------------------------------------------------------------------
// Parameter maps

struct MapSpec {
  int rows = 50;
  int cols = 50;
  double kappa_lo_hz = 1.0;
  double kappa_hi_hz = 1e6;
  double gamma_lo_hz = 1.0;
  double gamma_hi_hz = 1e6;
};

struct MapCell {
  double kappa_hz = 0.0;
  double gamma_hz = 0.0;
  FidelityReport direct;
  FidelityReport virt;
  double log10_ratio = 0.0;  // log10[(1-F_d)/(1-F_v)]; > 0 where virtual wins
};

struct InfidelityMap {
  MapSpec spec;
  std::vector<MapCell> cells;  // row-major: kappa index major, gamma minor
  const MapCell& at(int r, int c) const;
};

// Log-spaced grid over kappa (rows) and gamma (columns); each cell optimises
// both routes. Deterministic row-major output regardless of scheduling.
InfidelityMap infidelity_map(const MapSpec& spec, GateType gate,
                             double participation, double nu_hz,
                             double delta_nu_hz, double g_bound_direct_hz,
                             double g_bound_virtual_hz,
                             InfidelityForm form = InfidelityForm::HigherOrder,
                             bool parallel = true);

}  // namespace cqad

#endif
