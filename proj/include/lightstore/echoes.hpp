#ifndef LIGHTSTORE_ECHOES_HPP
#define LIGHTSTORE_ECHOES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lightstore/errors.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// Echo emission from a periodically structured line. A profile with period
// 2 pi / T rephases the medium every T; writing the field as retarded orders
// Omega(z, tau) = sum_k a_k(z) f(tau - k T) turns propagation into a lower
// triangular ODE system in z,
//
//   d a_k / d z = -alpha [ g_0 a_k / 2 + sum_{m=1..k} g_{-m} e^{-m gamma T} a_{k-m} ],
//
// one coupling per Fourier coefficient of the profile, the factor 1/2 on the
// diagonal because an order overlaps its own source only half-sided. The
// damping e^{-m gamma T} is the homogeneous decay accumulated over m periods
// of rephasing delay.

namespace lightstore {

namespace detail {

struct RecursionOptions {
  std::size_t n_z = 512;
  // Half-sided self-overlap factor on the diagonal. 1/2 is the physical
  // value; the tests move it to 0 and 1 to prove the closed forms notice.
  double y_zero = 0.5;
};

}  // namespace detail

// a_k(z) on a uniform grid in z / L, orders 0..max_order.
struct EchoOrderAmplitudes {
  double period_T = 0.0;
  double alphaL = 0.0;
  std::vector<double> z_over_L;
  std::vector<std::vector<std::complex<double>>> amplitude;  // [order][iz]

  std::complex<double> at_exit(std::size_t order) const {
    if (order >= amplitude.size()) throw std::out_of_range("echo order not computed");
    return amplitude[order].back();
  }
};

// Integrate the order system with classic RK4. Depends on the medium only
// through alphaL and gamma T, so the grid is stored as z / L.
inline EchoOrderAmplitudes order_recursion(const FourierCoeffs& coeffs, double alphaL,
                                           double gamma_T, std::size_t max_order,
                                           const detail::RecursionOptions& opt = {}) {
  if (!(alphaL >= 0.0)) throw std::domain_error("alphaL must be non-negative");
  if (!(gamma_T >= 0.0)) throw std::domain_error("gamma T must be non-negative");
  if (opt.n_z < 8) throw std::domain_error("order recursion needs at least 8 z steps");
  if (static_cast<int>(max_order) > coeffs.cutoff)
    throw CutoffError("echo order exceeds the Fourier cutoff of the profile");

  const std::size_t n_ord = max_order + 1;
  // Constant coupling matrix row: row[k][m] multiplies a_{k-m}.
  std::vector<std::vector<std::complex<double>>> row(n_ord);
  for (std::size_t k = 0; k < n_ord; ++k) {
    row[k].resize(k + 1);
    row[k][0] = -alphaL * coeffs.at(0) * opt.y_zero;
    for (std::size_t m = 1; m <= k; ++m)
      row[k][m] = -alphaL * coeffs.at(-static_cast<int>(m)) *
                  std::exp(-static_cast<double>(m) * gamma_T);
  }
  const auto derivative = [&](const std::vector<std::complex<double>>& a,
                              std::vector<std::complex<double>>& out) {
    for (std::size_t k = 0; k < n_ord; ++k) {
      std::complex<double> s = 0.0;
      for (std::size_t m = 0; m <= k; ++m) s += row[k][m] * a[k - m];
      out[k] = s;
    }
  };

  EchoOrderAmplitudes result;
  result.period_T = coeffs.period_T;
  result.alphaL = alphaL;
  result.z_over_L.reserve(opt.n_z + 1);
  result.amplitude.assign(n_ord, {});
  for (auto& v : result.amplitude) v.reserve(opt.n_z + 1);

  std::vector<std::complex<double>> a(n_ord, 0.0), k1(n_ord), k2(n_ord), k3(n_ord),
      k4(n_ord), tmp(n_ord);
  a[0] = 1.0;
  const double h = 1.0 / static_cast<double>(opt.n_z);
  const auto record = [&](double zf) {
    result.z_over_L.push_back(zf);
    for (std::size_t k = 0; k < n_ord; ++k) result.amplitude[k].push_back(a[k]);
  };
  record(0.0);
  for (std::size_t step = 0; step < opt.n_z; ++step) {
    derivative(a, k1);
    for (std::size_t k = 0; k < n_ord; ++k) tmp[k] = a[k] + 0.5 * h * k1[k];
    derivative(tmp, k2);
    for (std::size_t k = 0; k < n_ord; ++k) tmp[k] = a[k] + 0.5 * h * k2[k];
    derivative(tmp, k3);
    for (std::size_t k = 0; k < n_ord; ++k) tmp[k] = a[k] + h * k3[k];
    derivative(tmp, k4);
    for (std::size_t k = 0; k < n_ord; ++k)
      a[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    record(static_cast<double>(step + 1) * h);
  }
  return result;
}

inline EchoOrderAmplitudes order_recursion(const SpectralProfile& profile,
                                           const MediumParams& medium,
                                           std::size_t max_order,
                                           const detail::RecursionOptions& opt = {}) {
  const auto coeffs = fourier_coeffs(
      profile, std::max<int>(8, static_cast<int>(max_order)));
  return order_recursion(coeffs, medium.alphaL(), medium.gamma * coeffs.period_T,
                         max_order, opt);
}

// First-order echo efficiency straight from the coefficients (gamma = 0):
// the order system gives a_1(L) = -g_{-1} alpha L e^{-g_0 alpha L / 2} exactly.
inline double eta_from_coeffs(const FourierCoeffs& coeffs, double alphaL) {
  const double g1 = std::abs(coeffs.at(-1));
  const double g0 = coeffs.at(0).real();
  const double amp = g1 * alphaL;
  return amp * amp * std::exp(-g0 * alphaL);
}

// Cosine grating (accumulated or two-pulse engraved): g_0 = 1/2, g_{-1} = 1/4.
inline double eta_3pe(double alphaL) {
  if (!(alphaL >= 0.0)) throw std::domain_error("alphaL must be non-negative");
  const double q = 0.25 * alphaL;
  return q * q * std::exp(-0.5 * alphaL);
}

// Lorentzian comb with finesse F: g_0 = pi / 2F, g_{-1} = g_0 e^{-pi / F}.
inline double eta_afc_forward(double alphaL, double finesse) {
  if (!(alphaL >= 0.0)) throw std::domain_error("alphaL must be non-negative");
  if (!(finesse > 0.0)) throw std::domain_error("finesse must be positive");
  const double d = 0.5 * pi * alphaL / finesse;
  return d * d * std::exp(-d - 2.0 * pi / finesse);
}

// d eta / d F = 0 has the single root F = pi (1 + alpha L / 4); there the
// forward efficiency is 4 e^{-2} (alpha L / (4 + alpha L))^2.
inline double optimal_finesse(double alphaL) {
  if (!(alphaL > 0.0)) throw std::domain_error("alphaL must be positive");
  return pi * (1.0 + 0.25 * alphaL);
}

inline double eta_afc_at_optimum(double alphaL) {
  if (!(alphaL > 0.0)) throw std::domain_error("alphaL must be positive");
  const double r = alphaL / (4.0 + alphaL);
  return 4.0 * std::exp(-2.0) * r * r;
}

struct CombDesign {
  double alphaL = 0.0;
  double finesse = 0.0;
  double period_T = 0.0;      // s; storage time of the first echo
  double predicted_eta = 0.0;

  double gamma_T() const { return pi / finesse; }             // tooth hwhm * T
  double gamma_peak() const { return pi / (finesse * period_T); }  // rad/s
};

inline CombDesign design_comb(double alphaL, double period_T) {
  if (!(period_T > 0.0)) throw std::domain_error("comb period must be positive");
  CombDesign d;
  d.alphaL = alphaL;
  d.finesse = optimal_finesse(alphaL);
  d.period_T = period_T;
  d.predicted_eta = eta_afc_at_optimum(alphaL);
  return d;
}

struct EchoWindow {
  int order = 0;
  double center = 0.0;        // window center, s
  double centroid = 0.0;      // intensity centroid inside the window, s
  double energy_ratio = 0.0;  // window energy / reference energy
};

struct EchoReport {
  double period_T = 0.0;
  double reference_energy = 0.0;
  std::vector<EchoWindow> windows;

  double transmitted() const { return windows.at(0).energy_ratio; }
  double first_echo() const { return windows.at(1).energy_ratio; }
};

// Slice the output trace into windows of width T around t_ref + k T and
// report per-order energies. The pulse must be short against T or the
// windows cannot separate orders.
inline EchoReport detect_echoes(const PulseEnvelope& output, const PulseEnvelope& reference,
                                double period_T, int max_order = -1) {
  output.validate();
  reference.validate();
  if (!(period_T > 0.0)) throw std::domain_error("echo period must be positive");
  const double e_ref = pulse_energy(reference);
  if (!(e_ref > 0.0)) throw std::domain_error("reference pulse carries no energy");
  const double rms = pulse_rms_duration(reference);
  if (period_T < 4.0 * rms)
    throw ResolutionError("echo period below four pulse widths; orders overlap");

  const double t_ref = pulse_centroid(reference);
  const double t_end = output.t(output.size() - 1);
  int fit = static_cast<int>(std::floor((t_end - t_ref - 0.5 * period_T) / period_T));
  if (max_order >= 0) fit = std::min(fit, max_order);
  if (fit < 1)
    throw ResolutionError("grid too short to hold the first echo window");

  EchoReport report;
  report.period_T = period_T;
  report.reference_energy = e_ref;
  for (int k = 0; k <= fit; ++k) {
    EchoWindow w;
    w.order = k;
    w.center = t_ref + static_cast<double>(k) * period_T;
    double energy = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
      const double t = output.t(i);
      if (t < w.center - 0.5 * period_T || t >= w.center + 0.5 * period_T) continue;
      const double p = std::norm(output.values[i]) * output.dt;
      energy += p;
      moment += p * t;
    }
    w.energy_ratio = energy / e_ref;
    w.centroid = energy > 0.0 ? moment / energy : w.center;
    report.windows.push_back(w);
  }
  return report;
}

}  // namespace lightstore

#endif
