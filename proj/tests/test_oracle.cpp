#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "lightstore/errors.hpp"
#include "lightstore/oracle.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

using lightstore::MediumParams;
using lightstore::OracleOptions;
using lightstore::SpectralProfile;
using lightstore::gaussian_pulse;
using lightstore::pi;
using lightstore::time_domain_oracle;

TEST_CASE("oracle reproduces attenuation on an untailored line") {
  const auto in = gaussian_pulse(1.0e-6, 16.0e-6, 0.0, 0.5e-6, 128);
  OracleOptions opt;
  opt.n_delta = 512;
  opt.n_z = 32;
  for (double alphaL : {0.5, 2.0}) {
    const auto medium = MediumParams::from_optical_depth(alphaL);
    const auto out = time_domain_oracle(in, SpectralProfile::flat(), medium, opt).output;
    const double ratio = lightstore::pulse_energy(out) / lightstore::pulse_energy(in);
    REQUIRE(ratio == Catch::Approx(std::exp(-alphaL)).epsilon(0.02));
    auto scaled = in;
    for (auto& v : scaled.values) v *= std::exp(-0.5 * alphaL);
    REQUIRE(lightstore::relative_l2_difference(out, scaled) < 0.02);
  }
}

TEST_CASE("oracle and transfer function agree on pulse delay through a hole") {
  // Same physics, two disjoint numeric routes. A sign error in either kernel
  // convention shows up here as an advanced rather than delayed pulse.
  const double sigma = 1.6e-6;
  const double delta0 = 10.0 / sigma;
  const auto medium = MediumParams::from_optical_depth(10.0);
  const auto profile = SpectralProfile::hole(delta0);
  const double dt = 0.4e-6;
  const std::size_t n = 128;
  const auto in = gaussian_pulse(sigma, 20.0e-6, 0.0, dt, n);

  const double d_omega = 2.0 * pi / (dt * static_cast<double>(n));
  const auto via_tf = lightstore::propagate(
      in, lightstore::transfer_function(profile, medium, d_omega, n));

  OracleOptions opt;
  opt.n_delta = 1536;
  opt.n_z = 128;
  const auto via_oracle = time_domain_oracle(in, profile, medium, opt).output;

  REQUIRE(lightstore::relative_l2_difference(via_oracle, via_tf) < 0.02);
  // Both routes must delay the pulse by roughly alpha L / delta0.
  const double expected_delay = medium.alphaL() / delta0;
  REQUIRE(lightstore::pulse_centroid(via_tf) - lightstore::pulse_centroid(in) ==
          Catch::Approx(expected_delay).epsilon(0.10));
  REQUIRE(lightstore::pulse_centroid(via_oracle) - lightstore::pulse_centroid(in) ==
          Catch::Approx(expected_delay).epsilon(0.10));
}

TEST_CASE("oracle rejects lattices that revive inside the trace") {
  const auto in = gaussian_pulse(1.0e-6, 8.0e-6, 0.0, 0.5e-6, 32);
  const auto medium = MediumParams::from_optical_depth(1.0);
  OracleOptions opt;
  opt.n_delta = 16;  // coarse lattice: revival lands inside the 16 us span
  REQUIRE_THROWS_AS(time_domain_oracle(in, SpectralProfile::flat(), medium, opt),
                    lightstore::StabilityError);
}

TEST_CASE("oracle rejects z steps coarser than the absorption length") {
  const auto in = gaussian_pulse(1.0e-6, 8.0e-6, 0.0, 0.5e-6, 32);
  const auto medium = MediumParams::from_optical_depth(300.0);
  OracleOptions opt;
  opt.n_z = 4;
  REQUIRE_THROWS_AS(time_domain_oracle(in, SpectralProfile::flat(), medium, opt),
                    lightstore::StabilityError);
}

TEST_CASE("oracle validates lattice sizes and snapshot times") {
  const auto in = gaussian_pulse(1.0e-6, 8.0e-6, 0.0, 0.5e-6, 32);
  const auto medium = MediumParams::from_optical_depth(1.0);
  OracleOptions opt;
  opt.n_delta = 8;
  REQUIRE_THROWS_AS(time_domain_oracle(in, SpectralProfile::flat(), medium, opt),
                    std::domain_error);
  opt.n_delta = 256;
  opt.n_z = 2;
  REQUIRE_THROWS_AS(time_domain_oracle(in, SpectralProfile::flat(), medium, opt),
                    std::domain_error);
  opt.n_z = 16;
  opt.snapshot_time = 1.0;  // far beyond the grid
  REQUIRE_THROWS_AS(time_domain_oracle(in, SpectralProfile::flat(), medium, opt),
                    std::domain_error);
}

TEST_CASE("oracle snapshot walks the field through the medium") {
  const auto in = gaussian_pulse(1.0e-6, 8.0e-6, 0.0, 0.5e-6, 64);
  const auto medium = MediumParams::from_optical_depth(2.0);
  OracleOptions opt;
  opt.n_delta = 512;
  opt.n_z = 16;
  opt.snapshot_time = 8.0e-6;  // pulse center: the field fills the medium
  const auto r = time_domain_oracle(in, SpectralProfile::flat(), medium, opt);
  REQUIRE(r.has_snapshot);
  REQUIRE(r.snapshot.z.size() == opt.n_z + 1);
  REQUIRE(r.snapshot.field.size() == opt.n_z + 1);
  REQUIRE(r.snapshot.dipole_density.size() == opt.n_z + 1);
  REQUIRE(r.snapshot.z.front() == 0.0);
  REQUIRE(r.snapshot.z.back() == Catch::Approx(medium.length).epsilon(1e-12));
  REQUIRE(r.snapshot.time == Catch::Approx(8.0e-6));
  // Entry sample is the unpropagated input at that instant.
  REQUIRE(std::abs(r.snapshot.field.front() - in.values[16]) < 1e-12);
  // Monotone attenuation front to back, and non-negative dipole energy.
  REQUIRE(std::abs(r.snapshot.field.back()) < std::abs(r.snapshot.field.front()));
  for (double d : r.snapshot.dipole_density) REQUIRE(d >= 0.0);
}
