#ifndef LIGHTSTORE_PULSE_HPP
#define LIGHTSTORE_PULSE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lightstore/detail/fft.hpp"

// Complex field envelope on a uniform time grid. Length is a power of two so
// the propagation FFT is exact radix-2. Times are in the retarded frame: the
// trivial z/c transit never appears in an envelope.

namespace lightstore {

struct PulseEnvelope {
  double t0 = 0.0;  // time of sample 0, seconds
  double dt = 0.0;  // grid spacing, seconds
  std::vector<std::complex<double>> values;

  double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  std::size_t size() const { return values.size(); }
  double span() const { return dt * static_cast<double>(values.size()); }

  void validate() const {
    if (!(dt > 0.0)) throw std::domain_error("pulse grid spacing must be positive");
    if (!detail::is_power_of_two(values.size()) || values.size() < 8)
      throw std::domain_error("pulse grid length must be a power of two, at least 8");
    for (const auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("pulse envelope contains non-finite samples");
  }
};

// Gaussian with intensity rms duration `rms`: field exp(-(t-center)^2/(4 rms^2)).
inline PulseEnvelope gaussian_pulse(double rms, double center, double t0, double dt,
                                    std::size_t n, double amplitude = 1.0) {
  if (!(rms > 0.0)) throw std::domain_error("pulse rms duration must be positive");
  PulseEnvelope p;
  p.t0 = t0;
  p.dt = dt;
  p.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (p.t(i) - center) / (2.0 * rms);
    p.values[i] = amplitude * std::exp(-x * x);
  }
  p.validate();
  return p;
}

inline double pulse_energy(const PulseEnvelope& p) {
  double e = 0.0;
  for (const auto& v : p.values) e += std::norm(v);
  return e * p.dt;
}

// Intensity-weighted mean arrival time.
inline double pulse_centroid(const PulseEnvelope& p) {
  double e = 0.0, m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = std::norm(p.values[i]);
    e += w;
    m += w * p.t(i);
  }
  if (e <= 0.0) throw std::domain_error("pulse_centroid: zero-energy envelope");
  return m / e;
}

// Intensity rms duration about the centroid.
inline double pulse_rms_duration(const PulseEnvelope& p) {
  const double c = pulse_centroid(p);
  double e = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = std::norm(p.values[i]);
    const double d = p.t(i) - c;
    e += w;
    m2 += w * d * d;
  }
  return std::sqrt(m2 / e);
}

inline double relative_l2_difference(const PulseEnvelope& a, const PulseEnvelope& b) {
  if (a.size() != b.size()) throw std::invalid_argument("envelope grids differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(a.values[i]);
  }
  if (den <= 0.0) throw std::domain_error("relative_l2_difference: zero reference");
  return std::sqrt(num / den);
}

}  // namespace lightstore

#endif
