#ifndef LIGHTSTORE_SLOWLIGHT_HPP
#define LIGHTSTORE_SLOWLIGHT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lightstore/errors.hpp"
#include "lightstore/oracle.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// Group delay and pulse fidelity for transmission through a spectral hole,
// plus an energy bookkeeping pass over the time-domain lattice that shows
// where a delayed pulse actually lives while it crosses the medium.

namespace lightstore {

// Centroid delay of output against reference. Refuses when almost nothing was
// transmitted; a centroid of noise is not a delay.
inline double group_delay(const PulseEnvelope& output, const PulseEnvelope& reference) {
  const double e_ref = pulse_energy(reference);
  const double e_out = pulse_energy(output);
  if (!(e_ref > 0.0)) throw std::domain_error("reference pulse carries no energy");
  if (e_out < 1e-6 * e_ref)
    throw UndetectableDelayError("transmitted energy below 1e-6 of the input");
  return pulse_centroid(output) - pulse_centroid(reference);
}

// K'(0) for the hole kernel gives delay alpha L / delta0 on top of the vacuum
// transit (which the retarded frame already removed).
inline double expected_hole_delay(const MediumParams& medium, double delta0) {
  if (!(delta0 > 0.0)) throw std::domain_error("hole width must be positive");
  return medium.alphaL() / delta0;
}

inline double hole_group_velocity_ratio(const MediumParams& medium, double delta0) {
  if (!(delta0 > 0.0)) throw std::domain_error("hole width must be positive");
  return 1.0 / (1.0 + speed_of_light * medium.alpha / delta0);
}

// Group delay over rms duration: how many pulse lengths the medium holds.
// Well above one means the delayed pulse sits fully inside at mid-flight.
inline double containment_fraction(const PulseEnvelope& pulse, const MediumParams& medium,
                                   double delta0) {
  const double rms = pulse_rms_duration(pulse);
  if (!(rms > 0.0)) throw std::domain_error("pulse rms duration must be positive");
  return expected_hole_delay(medium, delta0) / rms;
}

// Scale and shift invariant intensity mismatch in [0, 1]:
// sqrt(1 - rho^2) with rho the peak normalized cross-correlation, the shift
// refined below one sample (integer scan, parabolic vertex, then linear
// interpolation of the shifted reference).
inline double shape_distortion(const PulseEnvelope& output, const PulseEnvelope& reference) {
  const std::size_t m = output.size();
  if (reference.size() != m || m < 4)
    throw std::invalid_argument("traces must share one grid of at least 4 samples");
  std::vector<double> u(m), v(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = std::norm(output.values[i]);
  for (std::size_t i = 0; i < m; ++i) v[i] = std::norm(reference.values[i]);
  double uu = 0.0, vv = 0.0;
  for (double x : u) uu += x * x;
  for (double x : v) vv += x * x;
  if (!(uu > 0.0) || !(vv > 0.0))
    throw std::domain_error("shape comparison needs two non-empty traces");

  // rho at integer shift k: reference moved right by k samples.
  const auto rho_int = [&](std::ptrdiff_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - k;
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(m)) s += u[i] * v[static_cast<std::size_t>(j)];
    }
    return s / std::sqrt(uu * vv);
  };

  std::ptrdiff_t best_k = 0;
  double best = -1.0;
  const std::ptrdiff_t span = static_cast<std::ptrdiff_t>(m) - 1;
  for (std::ptrdiff_t k = -span; k <= span; ++k) {
    const double r = rho_int(k);
    if (r > best) {
      best = r;
      best_k = k;
    }
  }

  double frac = 0.0;
  if (best_k > -span && best_k < span) {
    const double rm = rho_int(best_k - 1), r0 = best, rp = rho_int(best_k + 1);
    const double denom = rm - 2.0 * r0 + rp;
    if (denom < 0.0) frac = std::clamp(0.5 * (rm - rp) / denom, -0.5, 0.5);
  }

  // Fractional shift by best_k + frac via linear interpolation of v.
  double sv = 0.0, svv = 0.0;
  const double f = frac >= 0.0 ? frac : 1.0 + frac;
  const std::ptrdiff_t base = frac >= 0.0 ? best_k : best_k - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(i) - base;
    const std::ptrdiff_t j1 = j0 - 1;
    double vs = 0.0;
    if (j0 >= 0 && j0 < static_cast<std::ptrdiff_t>(m)) vs += (1.0 - f) * v[static_cast<std::size_t>(j0)];
    if (j1 >= 0 && j1 < static_cast<std::ptrdiff_t>(m)) vs += f * v[static_cast<std::size_t>(j1)];
    sv += u[i] * vs;
    svv += vs * vs;
  }
  double rho = svv > 0.0 ? sv / std::sqrt(uu * svv) : best;
  rho = std::max(rho, best);  // refinement may only improve the integer fit
  return std::sqrt(std::max(0.0, 1.0 - rho * rho));
}

struct DelayProbe {
  double delta0 = 0.0;
  double expected_delay = 0.0;
  double measured_delay = 0.0;
  double transmission = 0.0;  // energy out / energy in
  double distortion = 0.0;
};

// Send the pulse through a hole of width delta0 and measure what came out.
inline DelayProbe delay_probe(const PulseEnvelope& pulse, double delta0,
                              const MediumParams& medium) {
  const auto profile = SpectralProfile::hole(delta0);
  const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
  const auto tf = transfer_function(profile, medium, d_omega, pulse.size());
  const auto out = propagate(pulse, tf);
  DelayProbe probe;
  probe.delta0 = delta0;
  probe.expected_delay = expected_hole_delay(medium, delta0);
  probe.measured_delay = group_delay(out, pulse);
  probe.transmission = pulse_energy(out) / pulse_energy(pulse);
  probe.distortion = shape_distortion(out, pulse);
  return probe;
}

struct EnergyAudit {
  double snapshot_time = 0.0;
  double field_fraction = 0.0;    // energy in the field inside the medium / E_in
  double atomic_fraction = 0.0;   // energy parked in the dipoles / E_in
  double total_fraction = 0.0;
  double vg_over_c = 0.0;         // adiabatic prediction 1 / (1 + c alpha / delta0)
  double entered_fraction = 0.0;  // input energy past z = 0 by the snapshot
  double exited_fraction = 0.0;   // energy past z = L by the snapshot
  bool contained = false;         // >= 99 % entered and <= 1 % exited
};

// Freeze the lattice at snapshot_time and account for every bit of pulse
// energy: in flight (int |Omega|^2 dz), parked in the dipoles
// ((c alpha / pi) int dz sum_j w_j |P_j|^2 / 2), already through either face.
// In the adiabatic regime field_fraction tracks V_g / c and the two fractions
// sum to one while the pulse is contained.
inline EnergyAudit energy_audit(const PulseEnvelope& pulse, const SpectralProfile& profile,
                                const MediumParams& medium, double snapshot_time,
                                OracleOptions opt = {}) {
  const auto* h = profile.get_if<HoleProfile>();
  if (!h) throw UnsupportedProfileError("energy audit expects a spectral hole profile");
  opt.snapshot_time = snapshot_time;
  const auto run = time_domain_oracle(pulse, profile, medium, opt);

  const double e_in = speed_of_light * pulse_energy(pulse);
  if (!(e_in > 0.0)) throw std::domain_error("input pulse carries no energy");

  const auto flux_until = [&](const PulseEnvelope& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.t(i) <= snapshot_time) acc += std::norm(p.values[i]) * p.dt;
    return speed_of_light * acc;
  };

  const auto& snap = run.snapshot;
  const std::size_t n = snap.z.size();
  double u_field = 0.0, u_at = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dz = snap.z[i + 1] - snap.z[i];
    u_field += 0.5 * dz * (std::norm(snap.field[i]) + std::norm(snap.field[i + 1]));
    u_at += 0.5 * dz * (snap.dipole_density[i] + snap.dipole_density[i + 1]);
  }
  u_at *= speed_of_light * medium.alpha / pi;

  EnergyAudit audit;
  audit.snapshot_time = snap.time;
  audit.field_fraction = u_field / e_in;
  audit.atomic_fraction = u_at / e_in;
  audit.total_fraction = audit.field_fraction + audit.atomic_fraction;
  audit.vg_over_c = hole_group_velocity_ratio(medium, h->delta0);
  audit.entered_fraction = flux_until(pulse) / e_in;
  audit.exited_fraction = flux_until(run.output) / e_in;
  audit.contained = audit.entered_fraction >= 0.99 && audit.exited_fraction <= 0.01;
  return audit;
}

}  // namespace lightstore

#endif
