#include <doctest.h>

#include "cqad/device.hpp"
#include "cqad/json_io.hpp"
#include "cqad/spectrum.hpp"

using namespace cqad;

namespace {

DeviceConfig fig3_device() {
  // g/2pi = 10 MHz, delta/2pi = 100 MHz, nu/2pi = 10 MHz, alpha/2pi = 150 MHz.
  DeviceConfig d;
  d.transmon = {5.0e9, 150e6, 0.0, 0.0};
  UniformScheme u;
  u.nu_hz = 10e6;
  u.count = 5;
  u.base_hz = 5.1e9;  // first mode detuned by 100 MHz
  u.g_hz = 10e6;
  d.spectrum = generate_spectrum(u);
  d.graph.storage = {0, 1, 2, 3, 4};
  d.graph.pairs = {{0, 1}, {1, 2}};
  return d;
}

}  // namespace

TEST_CASE("fig3 parameter set validates cleanly") {
  const ValidationReport report = validate_config(fig3_device());
  CHECK(report.ok());
  CHECK(report.warnings.empty());
}

TEST_CASE("negative decoherence rate is an error") {
  DeviceConfig d = fig3_device();
  d.spectrum.modes[2].kappa_hz = -1.0;
  const ValidationReport report = validate_config(d);
  CHECK_FALSE(report.ok());
  bool found = false;
  for (const auto& e : report.errors)
    if (e.find("negative decoherence rate") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("strong coupling triggers a dispersive warning") {
  DeviceConfig d = fig3_device();
  d.spectrum.modes[0].g_hz = 50e6;  // |g/delta| = 0.5
  const ValidationReport report = validate_config(d);
  CHECK(report.ok());
  REQUIRE_FALSE(report.warnings.empty());
  CHECK(report.warnings[0].find("dispersive") != std::string::npos);
}

TEST_CASE("validation is idempotent") {
  const DeviceConfig d = fig3_device();
  const ValidationReport a = validate_config(d);
  const ValidationReport b = validate_config(d);
  CHECK(a.errors == b.errors);
  CHECK(a.warnings == b.warnings);
}

TEST_CASE("uniform spacing profile is constant") {
  const DeviceConfig d = fig3_device();
  const auto profile = spacing_profile(d.spectrum);
  REQUIRE(profile.size() == 4);
  for (double s : profile) CHECK(s == doctest::Approx(10e6).epsilon(1e-9));
}

TEST_CASE("two-family spacing profile alternates") {
  TwoFamilyScheme t;
  t.nu1_hz = 10e6;
  t.nu2_hz = 11e6;
  t.count1 = t.count2 = 4;
  t.base1_hz = 1e9;
  t.base2_hz = 1e9 + 4e6;
  const ModeSpectrum s = generate_spectrum(t);
  const auto profile = spacing_profile(s);
  // Direct subtraction of the generated frequencies.
  for (size_t j = 0; j + 1 < s.modes.size(); ++j)
    CHECK(profile[j] ==
          doctest::Approx(s.modes[j + 1].omega_hz - s.modes[j].omega_hz));
  // Families interleave, so successive spacings alternate.
  CHECK(profile[0] != doctest::Approx(profile[1]));
}

TEST_CASE("single mode has no spacing profile") {
  UniformScheme u;
  u.nu_hz = 10e6;
  u.count = 1;
  u.base_hz = 1e9;
  const ModeSpectrum s = generate_spectrum(u);
  CHECK_THROWS_WITH_AS(spacing_profile(s), "insufficient modes",
                       std::invalid_argument);
}

TEST_CASE("device JSON round trip and unknown-key rejection") {
  const DeviceConfig d = fig3_device();
  const json j = to_json(d);
  const DeviceConfig back = device_from_json(j);
  CHECK(back.transmon.alpha_hz == d.transmon.alpha_hz);
  REQUIRE(back.spectrum.modes.size() == d.spectrum.modes.size());
  CHECK(back.spectrum.modes[3].omega_hz == d.spectrum.modes[3].omega_hz);
  CHECK(back.graph.pairs == d.graph.pairs);

  json bad = j;
  bad["transmon"]["frequency"] = 1.0;
  CHECK_THROWS_AS(device_from_json(bad), std::invalid_argument);
}
