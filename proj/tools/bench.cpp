// Serial vs OpenMP timings for the data-parallel kernels: Monte Carlo
// trajectory ensembles, optimal-infidelity grids and the spacing-contrast
// enumeration. The parallel paths must reproduce the serial results
// bit-for-bit; this binary reports the speedups.

#include <chrono>
#include <cstdio>
#include <string>

#include "cqad/fidelity.hpp"
#include "cqad/qram.hpp"
#include "cqad/spectrum.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace cqad;

double seconds(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-28s serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n",
              name, serial_s, parallel_s, serial_s / parallel_s,
              equal ? "identical results" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP with up to %d threads\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif

  {
    SweepRow serial_row{}, parallel_row{};
    const double ts = seconds([&] {
      serial_row = run_noisy_cell(4, 2e-3, NoiseKind::Loss, 400, 42,
                                  Scheme::ReadOnly, false);
    });
    const double tp = seconds([&] {
      parallel_row = run_noisy_cell(4, 2e-3, NoiseKind::Loss, 400, 42,
                                    Scheme::ReadOnly, true);
    });
    report("trajectory ensemble", ts, tp,
           serial_row.fidelity == parallel_row.fidelity &&
               serial_row.stderr_fidelity == parallel_row.stderr_fidelity);
  }

  {
    MapSpec spec;
    spec.rows = spec.cols = 120;
    InfidelityMap a, b;
    const double ts = seconds([&] {
      a = infidelity_map(spec, GateType::Swap, 0.01, 10e6, 1e6, 10e6, 100e3,
                         InfidelityForm::HigherOrder, false);
    });
    const double tp = seconds([&] {
      b = infidelity_map(spec, GateType::Swap, 0.01, 10e6, 1e6, 10e6, 100e3,
                         InfidelityForm::HigherOrder, true);
    });
    bool equal = true;
    for (size_t i = 0; i < a.cells.size(); ++i) {
      equal = equal && a.cells[i].direct.infidelity == b.cells[i].direct.infidelity &&
              a.cells[i].virt.infidelity == b.cells[i].virt.infidelity;
    }
    report("infidelity grid", ts, tp, equal);
  }

  {
    TwoFamilyScheme t;
    t.nu1_hz = 10e6;
    t.nu2_hz = 10.85e6;
    t.count1 = t.count2 = 160;
    t.base1_hz = 6.0e9;
    t.base2_hz = 6.0e9 - 16.8 * 0.85e6;
    t.g_hz = 10e6;
    const ModeSpectrum s = generate_spectrum(t);
    const CouplingGraph g = two_family_window(s, 10e6, 10.85e6);
    NonuniformityReport ra, rb;
    const double ts = seconds([&] { ra = nonuniformity(s, g, false); });
    const double tp = seconds([&] { rb = nonuniformity(s, g, true); });
    report("spacing-contrast search", ts, tp,
           ra.delta_nu_hz == rb.delta_nu_hz && ra.witness_pair == rb.witness_pair);
  }
  return 0;
}
