#ifndef LIGHTSTORE_RESPONSE_HPP
#define LIGHTSTORE_RESPONSE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lightstore/detail/fft.hpp"
#include "lightstore/detail/quadrature.hpp"
#include "lightstore/errors.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// Weak-signal propagation through a tailored absorber, frequency domain.
//
// Conventions, fixed once here:
//  * analysis transform F(w) = int f(t) e^{-i w t} dt, synthesis with e^{+i w t}
//    (matches the radix-2 FFT kernel in detail/fft.hpp);
//  * each detuning-delta dipole responds with P(w) = -Omega(w)/(w + delta - i gamma),
//    gamma > 0 the homogeneous half-width, so the medium kernel is
//        K(w) = (i alpha / 2 pi) int g(delta) / (w + delta - i gamma) d delta
//    and the envelope evolves as Omega(z, w) = Omega(0, w) e^{K(w) z};
//  * retarded frame: the vacuum transit L/c is not part of K or of any
//    envelope; MediumParams reports it as metadata. With this sign set a
//    transparency window produces a positive group delay (a hole delays, never
//    advances; pinned by tests).
//
// For g >= 0, Im of the kernel integrand is g * gamma / ((w+delta)^2 + gamma^2) >= 0,
// hence Re K <= 0 and |H| <= 1: the medium is passive. The numeric path below
// preserves that structurally (positive quadrature weights plus exact closed
// forms for the singular parts).
//
// Kernel evaluation per profile:
//  * Flat, Hole: residue closed forms. The flat background integrates to
//    i pi * level in the symmetric-limit sense; the hole dip is a Lorentzian
//    convolved with the dipole kernel, again a Lorentzian:
//        K_hole(w) = (i alpha / 2 pi) [ i pi - pi a / (w - i (a + gamma)) ],  a = delta0/2.
//  * CosineGrating, LorentzianComb: adaptive Gauss-Kronrod over a symmetric
//    window cut mid-gap, W = (20 + 1/2) * (2 pi / T), with two exact
//    corrections: the mean background level b beyond the window contributes
//    b * (i pi - int_{-W}^{W} d delta / (w + delta - i gamma)) and the resonant
//    g(-w) part is integrated in closed form so the numeric integrand stays
//    smooth on the tooth scale.
//  * Sampled: exact integral of the piecewise-linear interpolant against the
//    kernel, segment by segment (log closed form); no quadrature error at all.

namespace lightstore {

struct MediumParams {
  double alpha;   // background absorption coefficient, 1/m
  double length;  // m
  double gamma;   // homogeneous half-width, rad/s

  MediumParams(double alpha_, double length_, double gamma_)
      : alpha(alpha_), length(length_), gamma(gamma_) {
    if (!(alpha >= 0.0)) throw std::domain_error("alpha must be non-negative");
    if (!(length > 0.0)) throw std::domain_error("medium length must be positive");
    if (!(gamma > 0.0)) throw std::domain_error("homogeneous width gamma must be positive");
  }

  double alphaL() const { return alpha * length; }
  // Vacuum transit, reported as metadata only; never added to envelopes.
  double vacuum_transit_time() const { return length / speed_of_light; }

  static MediumParams from_optical_depth(double alphaL, double length = 0.01,
                                         double gamma = khz_to_angular(10.0)) {
    if (!(length > 0.0)) throw std::domain_error("medium length must be positive");
    return MediumParams(alphaL / length, length, gamma);
  }
};

namespace detail {

struct KernelOptions {
  double abs_tol = 1e-11;   // on the dimensionless integral I(w)
  int max_depth = 14;
  double fail_above = 1e-8;  // accumulated error estimate that triggers QuadratureError
};

// int_{lo}^{hi} d delta / (w + delta - i gamma), principal log branch. Both
// endpoints sit on Im = -gamma, so the branch cut is never crossed.
inline std::complex<double> window_kernel_integral(double lo, double hi, double w,
                                                   double gamma) {
  const std::complex<double> a(w + lo, -gamma);
  const std::complex<double> b(w + hi, -gamma);
  return std::log(b) - std::log(a);
}

// Exact integral of the piecewise-linear sampled profile against the kernel.
inline std::complex<double> sampled_kernel_integral(const SampledProfile& s, double w,
                                                    double gamma) {
  const std::complex<double> shift(w, -gamma);  // kernel is 1 / (delta + shift)
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.delta.size(); ++i) {
    const double x0 = s.delta[i], x1 = s.delta[i + 1];
    const double g0 = s.g[i], g1 = s.g[i + 1];
    if (g0 == 0.0 && g1 == 0.0) continue;
    const double m = (g1 - g0) / (x1 - x0);
    const std::complex<double> A = g0 - m * x0;  // integrand = (A + m delta)/(delta + shift)
    acc += m * (x1 - x0) +
           (A - m * shift) * (std::log(x1 + shift) - std::log(x0 + shift));
  }
  return acc;
}

// Panel boundaries for one comb/grating period centered on c: tooth core
// resolved at 1, 3 and 8 half-widths, gaps in two panels.
inline void period_breakpoints(double c, double half_period, double core,
                               std::vector<double>& out) {
  const double steps[] = {-half_period, -8 * core, -3 * core, -core,
                          core, 3 * core, 8 * core, half_period};
  double prev = c - half_period;
  out.push_back(prev);
  for (double s : steps) {
    const double x = c + std::clamp(s, -half_period, half_period);
    if (x > prev + 1e-12 * half_period) {
      out.push_back(x);
      prev = x;
    }
  }
}

// I(w) = int g(delta) / (w + delta - i gamma) d delta including the
// symmetric-limit background tail. Dimensionless up to the log factors.
inline std::complex<double> kernel_integral(const SpectralProfile& profile, double w,
                                            double gamma,
                                            const KernelOptions& opt = {}) {
  const std::complex<double> ipi(0.0, pi);

  if (const auto* f = profile.get_if<FlatProfile>()) return f->level * ipi;

  if (const auto* h = profile.get_if<HoleProfile>()) {
    const double a = 0.5 * h->delta0;
    return ipi - pi * a / std::complex<double>(w, -(a + gamma));
  }

  if (const auto* s = profile.get_if<SampledProfile>())
    return sampled_kernel_integral(*s, w, gamma);

  // Periodic profiles: numeric window plus background tail.
  double period_T, core;
  if (const auto* g = profile.get_if<CosineGratingProfile>()) {
    period_T = g->period;
    core = 0.25 * (2.0 * pi / period_T);  // smooth on the quarter-period scale
  } else {
    const auto* c = profile.get_if<LorentzianCombProfile>();
    period_T = c->period;
    core = c->gamma_peak;
  }
  const double spacing = 2.0 * pi / period_T;
  const int n_periods = 20;
  const double W = (n_periods + 0.5) * spacing;  // cut mid-gap

  // Resonant subtraction: g(-w) rides on the closed-form window integral, the
  // remainder is tooth-scale smooth.
  const double gref = eval_profile(profile, -w);
  const auto integrand = [&](double d) {
    return (eval_profile(profile, d) - gref) / std::complex<double>(w + d, -gamma);
  };

  std::vector<double> breaks;
  breaks.reserve(static_cast<std::size_t>(2 * n_periods + 1) * 8);
  for (int l = -n_periods; l <= n_periods; ++l)
    period_breakpoints(l * spacing, 0.5 * spacing, core, breaks);
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto r = adaptive_integrate(integrand, breaks, opt.abs_tol, opt.max_depth);
  if (!r.converged && r.error > opt.fail_above)
    throw QuadratureError("susceptibility kernel quadrature did not converge", r.error,
                          opt.fail_above);

  const std::complex<double> window = window_kernel_integral(-W, W, w, gamma);
  const double b = background_level(profile);
  return r.value + gref * window + b * (ipi - window);
}

}  // namespace detail

// K(w) = (i alpha / 2 pi) * I(w); Omega(z, w) = Omega(0, w) e^{K(w) z}.
inline std::complex<double> susceptibility_kernel(const SpectralProfile& profile,
                                                  const MediumParams& medium, double w) {
  if (!std::isfinite(w)) throw std::domain_error("kernel frequency must be finite");
  const std::complex<double> I = detail::kernel_integral(profile, w, medium.gamma);
  return std::complex<double>(0.0, medium.alpha / (2.0 * pi)) * I;
}

// H(w) = e^{K(w) L} sampled on a uniform angular-frequency grid.
struct TransferFunction {
  double omega0 = 0.0;    // frequency of sample 0, rad/s
  double d_omega = 0.0;   // rad/s
  std::vector<std::complex<double>> values;

  double omega(std::size_t i) const { return omega0 + static_cast<double>(i) * d_omega; }
  std::size_t size() const { return values.size(); }
};

// omega_grid: centered layout, omega_i = (i - n/2) * d_omega, so index n/2 is
// exactly zero frequency. Matches the fftshift of the propagation grid.
inline TransferFunction transfer_function(const SpectralProfile& profile,
                                          const MediumParams& medium, double d_omega,
                                          std::size_t n) {
  if (!(d_omega > 0.0)) throw std::domain_error("frequency spacing must be positive");
  if (!detail::is_power_of_two(n) || n < 8)
    throw std::domain_error("frequency grid length must be a power of two, at least 8");
  TransferFunction tf;
  tf.d_omega = d_omega;
  tf.omega0 = -d_omega * static_cast<double>(n / 2);
  tf.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> K = susceptibility_kernel(profile, medium, tf.omega(i));
    tf.values[i] = std::exp(K * medium.length);
  }
  return tf;
}

// Apply H to a pulse. The transfer grid must be FFT-conjugate to the pulse
// grid (same length, d_omega * (n * dt) = 2 pi). Refuses to proceed when the
// pulse spectrum has not decayed below 1e-6 of its peak at the grid edge:
// wrapping it silently would alias, not propagate.
inline PulseEnvelope propagate(const PulseEnvelope& pulse, const TransferFunction& tf) {
  pulse.validate();
  const std::size_t n = pulse.size();
  if (tf.size() != n)
    throw std::invalid_argument("transfer function and pulse grids differ in length");
  const double conj_spacing = 2.0 * pi / (pulse.dt * static_cast<double>(n));
  if (std::abs(tf.d_omega - conj_spacing) > 1e-9 * conj_spacing)
    throw std::invalid_argument("transfer function grid is not FFT-conjugate to the pulse grid");

  auto spectrum = detail::fft(pulse.values);

  double peak = 0.0;
  for (const auto& v : spectrum) peak = std::max(peak, std::abs(v));
  // Edge bins sit around index n/2 in FFT order (+/- Nyquist).
  const std::size_t guard = std::max<std::size_t>(2, n / 128);
  double edge = 0.0;
  for (std::size_t k = n / 2 - guard; k <= n / 2 + guard; ++k)
    edge = std::max(edge, std::abs(spectrum[k]));
  if (peak > 0.0 && edge > 1e-6 * peak)
    throw AliasingError("pulse spectrum does not decay below 1e-6 of peak at the grid edge");

  // FFT bin k carries w = 2 pi k / (n dt) for k < n/2, negative beyond; the
  // centered tf layout maps via an index rotation by n/2.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t centered = (k + n / 2) % n;
    spectrum[k] *= tf.values[centered];
  }

  PulseEnvelope out;
  out.t0 = pulse.t0;
  out.dt = pulse.dt;
  out.values = detail::ifft(std::move(spectrum));
  return out;
}

}  // namespace lightstore

#endif
