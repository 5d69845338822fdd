#ifndef LIGHTSTORE_ORACLE_HPP
#define LIGHTSTORE_ORACLE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lightstore/errors.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// Direct time-domain integration of the coupled field/dipole equations on a
// detuning lattice, in the retarded frame:
//
//   d P_j / d tau = -(i delta_j + gamma) P_j - i Omega
//   d Omega / d z = -(i alpha / 2 pi) sum_j w_j P_j  -  (alpha b / pi W) dOmega/dtau
//
// with trapezoidal weights w_j ~ g(delta_j) d delta on [-W, W]. The last term
// is the adiabatic response of the far wings (|delta| > W, density b), kept so
// that a truncated lattice still models the same medium as the spectral path.
//
// Per atom the stiff part is integrated exactly: over one dt with Omega taken
// linear, P_{n+1} = E P_n + d1 Omega_n + d2 Omega_{n+1} with phi-function
// coefficients, so gamma and delta never restrict dt. The z march is explicit
// midpoint (two dipole sweeps per step).
//
// This file shares no frequency-domain machinery with response.hpp beyond the
// kernel sign conventions; it exists to disagree loudly when those are wrong.

namespace lightstore {

struct OracleOptions {
  std::size_t n_delta = 1024;
  std::size_t n_z = 64;
  // Half-width of the detuning lattice, rad/s. Zero means: pick from the
  // profile structure and the pulse bandwidth.
  double window = 0.0;
  // Capture |Omega(z)| and dipole energy density at this instant (NaN = off).
  double snapshot_time = std::numeric_limits<double>::quiet_NaN();
};

struct OracleSnapshot {
  double time = 0.0;
  std::vector<double> z;                      // n_z + 1 node positions, m
  std::vector<std::complex<double>> field;    // Omega(z_m, time)
  std::vector<double> dipole_density;         // sum_j w_j |P_j|^2 / 2 at time
};

struct OracleResult {
  PulseEnvelope output;
  bool has_snapshot = false;
  OracleSnapshot snapshot;
};

namespace detail {

// Lattice half-width wide enough that everything outside is background.
inline double oracle_window(const SpectralProfile& profile, double pulse_rms) {
  const double from_pulse = 20.0 / pulse_rms;
  if (profile.get_if<FlatProfile>()) return from_pulse;
  if (const auto* h = profile.get_if<HoleProfile>())
    return std::max(12.0 * h->delta0, from_pulse);
  if (const auto* s = profile.get_if<SampledProfile>())
    return std::min(-s->delta.front(), s->delta.back());  // no atoms beyond support
  const double spacing = 2.0 * pi / profile.period();
  return std::max(20.5 * spacing, from_pulse);
}

struct DipoleLattice {
  std::vector<double> delta, weight;
  std::vector<std::complex<double>> E, d1, d2;  // P <- E P + d1 Om_n + d2 Om_n+1
  double source_scale = 0.0;                    // alpha / 2 pi
  double wing_coeff = 0.0;                      // alpha b / (pi W)
  double dt = 0.0;
};

inline std::complex<double> phi1(std::complex<double> x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * (0.5 + x / 6.0);
  return (std::exp(x) - 1.0) / x;
}

inline std::complex<double> phi2(std::complex<double> x) {
  if (std::abs(x) < 1e-4) return 0.5 + x * (1.0 / 6.0 + x / 24.0);
  return (std::exp(x) - 1.0 - x) / (x * x);
}

inline DipoleLattice build_lattice(const SpectralProfile& profile,
                                   const MediumParams& medium, double dt, double window,
                                   std::size_t n_delta) {
  DipoleLattice lat;
  lat.dt = dt;
  lat.source_scale = medium.alpha / (2.0 * pi);
  const double b = background_level(profile);
  lat.wing_coeff = b > 0.0 ? medium.alpha * b / (pi * window) : 0.0;

  const double d_delta = 2.0 * window / static_cast<double>(n_delta - 1);
  lat.delta.resize(n_delta);
  lat.weight.resize(n_delta);
  lat.E.resize(n_delta);
  lat.d1.resize(n_delta);
  lat.d2.resize(n_delta);
  for (std::size_t j = 0; j < n_delta; ++j) {
    const double d = -window + d_delta * static_cast<double>(j);
    const double trap = (j == 0 || j + 1 == n_delta) ? 0.5 : 1.0;
    lat.delta[j] = d;
    lat.weight[j] = trap * d_delta * eval_profile(profile, d);
    const std::complex<double> x(-medium.gamma * dt, -d * dt);
    const std::complex<double> c1 = std::complex<double>(0.0, -dt) * phi1(x);
    const std::complex<double> c2 = std::complex<double>(0.0, -dt) * phi2(x);
    lat.E[j] = std::exp(x);
    lat.d1[j] = c1 - c2;
    lat.d2[j] = c2;
  }
  return lat;
}

// One dipole sweep: integrate every P_j across the trace, return d Omega / d z.
// When capture_index >= 0, also report sum_j w_j |P_j|^2 / 2 at that index.
inline void dipole_sweep(const DipoleLattice& lat,
                         const std::vector<std::complex<double>>& field,
                         std::vector<std::complex<double>>& slope,
                         std::ptrdiff_t capture_index = -1,
                         double* captured_density = nullptr) {
  const std::size_t m = field.size();
  std::vector<std::complex<double>> acc(m, 0.0);
  double density = 0.0;
  for (std::size_t j = 0; j < lat.delta.size(); ++j) {
    const double w = lat.weight[j];
    if (w == 0.0) continue;
    const std::complex<double> E = lat.E[j], d1 = lat.d1[j], d2 = lat.d2[j];
    std::complex<double> P = 0.0;  // ground state well before the pulse
    for (std::size_t i = 0; i + 1 < m; ++i) {
      P = E * P + d1 * field[i] + d2 * field[i + 1];
      acc[i + 1] += w * P;
      if (static_cast<std::ptrdiff_t>(i + 1) == capture_index)
        density += w * 0.5 * std::norm(P);
    }
  }
  slope.assign(m, 0.0);
  const std::complex<double> scale(0.0, -lat.source_scale);
  for (std::size_t i = 0; i < m; ++i) slope[i] = scale * acc[i];
  if (lat.wing_coeff != 0.0) {
    const double inv2dt = 1.0 / (2.0 * lat.dt);
    for (std::size_t i = 1; i + 1 < m; ++i)
      slope[i] -= lat.wing_coeff * (field[i + 1] - field[i - 1]) * inv2dt;
  }
  if (captured_density) *captured_density = density;
}

}  // namespace detail

inline OracleResult time_domain_oracle(const PulseEnvelope& pulse,
                                       const SpectralProfile& profile,
                                       const MediumParams& medium,
                                       const OracleOptions& opt = {}) {
  pulse.validate();
  if (opt.n_delta < 16 || opt.n_delta > 4096)
    throw std::domain_error("oracle detuning count must lie in [16, 4096]");
  if (opt.n_z < 4 || opt.n_z > 256)
    throw std::domain_error("oracle z step count must lie in [4, 256]");

  const double rms = pulse_rms_duration(pulse);
  const double window =
      opt.window > 0.0 ? opt.window : detail::oracle_window(profile, rms);
  const double d_delta = 2.0 * window / static_cast<double>(opt.n_delta - 1);
  // A discrete lattice revives after 2 pi / d delta; the trace must end first.
  if (d_delta * pulse.span() >= 2.0 * pi)
    throw StabilityError("detuning lattice revives inside the trace; raise n_delta or shorten the grid");
  const double dz = medium.length / static_cast<double>(opt.n_z);
  if (medium.alpha * dz > 1.0)
    throw StabilityError("z step too coarse for this optical depth; raise n_z");

  const bool want_snapshot = std::isfinite(opt.snapshot_time);
  std::ptrdiff_t snap_index = -1;
  if (want_snapshot) {
    const double off = (opt.snapshot_time - pulse.t0) / pulse.dt;
    snap_index = static_cast<std::ptrdiff_t>(std::lround(off));
    if (snap_index < 0 || snap_index >= static_cast<std::ptrdiff_t>(pulse.size()))
      throw std::domain_error("snapshot time lies outside the pulse grid");
  }

  const auto lat = detail::build_lattice(profile, medium, pulse.dt, window, opt.n_delta);

  OracleResult result;
  if (want_snapshot) {
    result.has_snapshot = true;
    result.snapshot.time = pulse.t(static_cast<std::size_t>(snap_index));
    result.snapshot.z.reserve(opt.n_z + 1);
    result.snapshot.field.reserve(opt.n_z + 1);
    result.snapshot.dipole_density.reserve(opt.n_z + 1);
  }

  std::vector<std::complex<double>> field = pulse.values;
  std::vector<std::complex<double>> slope, half(field.size());
  for (std::size_t step = 0; step <= opt.n_z; ++step) {
    double density = 0.0;
    const bool last = step == opt.n_z;
    // The sweep at the node doubles as the snapshot capture for that node.
    detail::dipole_sweep(lat, field, slope, want_snapshot ? snap_index : -1,
                         want_snapshot ? &density : nullptr);
    if (want_snapshot) {
      result.snapshot.z.push_back(dz * static_cast<double>(step));
      result.snapshot.field.push_back(field[static_cast<std::size_t>(snap_index)]);
      result.snapshot.dipole_density.push_back(density);
    }
    if (last) break;
    for (std::size_t i = 0; i < field.size(); ++i)
      half[i] = field[i] + 0.5 * dz * slope[i];
    detail::dipole_sweep(lat, half, slope);
    for (std::size_t i = 0; i < field.size(); ++i) field[i] += dz * slope[i];
  }

  result.output.t0 = pulse.t0;
  result.output.dt = pulse.dt;
  result.output.values = std::move(field);
  return result;
}

}  // namespace lightstore

#endif
