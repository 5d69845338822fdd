#ifndef LIGHTSTORE_SPECTRA_HPP
#define LIGHTSTORE_SPECTRA_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lightstore/errors.hpp"
#include "lightstore/units.hpp"

// Spectral distributions g(delta) of an inhomogeneously broadened absorber
// after tailoring, normalized so the untouched line is g == 1. Detunings are
// angular (rad/s). Supported shapes:
//
//   Flat           g = level (level 1: untouched line, level 0: fully bleached)
//   Hole           g = 1 - 1/(1 + 4 delta^2 / delta0^2), delta0 the FWHM of the
//                  transparency dip
//   CosineGrating  g = (1 + cos(delta T)) / 2, the population grating left by a
//                  pulse pair separated by T
//   LorentzianComb g = sum_l tooth(delta - 2 pi l / T), Lorentzian teeth of
//                  half-width gamma_peak spaced by 2 pi / T
//   Sampled        tabulated g on a uniform detuning grid, linear interpolation
//
// Periodic profiles expose Fourier coefficients g_n in the series
// g(delta) = sum_n g_n exp(-i n delta T); g_0 is the mean optical depth scale
// and g_-1 drives the first echo.

namespace lightstore {

struct FlatProfile {
  double level = 1.0;
};

struct HoleProfile {
  double delta0;  // FWHM of the dip, rad/s
};

struct CosineGratingProfile {
  double period;  // T, seconds
};

struct LorentzianCombProfile {
  double gamma_peak;  // tooth half-width, rad/s
  double period;      // T, seconds; tooth spacing is 2 pi / T
};

struct SampledProfile {
  std::vector<double> delta;  // uniform, strictly increasing, rad/s
  std::vector<double> g;      // same length, g >= 0
  double period = 0.0;        // T if the data is periodic, else 0
};

class SpectralProfile {
 public:
  using Variant = std::variant<FlatProfile, HoleProfile, CosineGratingProfile,
                               LorentzianCombProfile, SampledProfile>;

  static SpectralProfile flat(double level = 1.0) {
    if (!(level >= 0.0 && level <= 1.0))
      throw std::domain_error("flat profile level must be in [0, 1]");
    return SpectralProfile(FlatProfile{level});
  }

  static SpectralProfile hole(double delta0) {
    if (!(delta0 > 0.0)) throw std::domain_error("hole width delta0 must be positive");
    return SpectralProfile(HoleProfile{delta0});
  }

  static SpectralProfile cosine_grating(double period) {
    if (!(period > 0.0)) throw std::domain_error("grating period must be positive");
    return SpectralProfile(CosineGratingProfile{period});
  }

  static SpectralProfile lorentzian_comb(double gamma_peak, double period) {
    if (!(gamma_peak > 0.0)) throw std::domain_error("comb tooth width must be positive");
    if (!(period > 0.0)) throw std::domain_error("comb period must be positive");
    // gamma_peak * period > pi means finesse < 1: teeth merge and peak values
    // leave [0, 1]. Such combs are rejected rather than silently renormalized.
    if (gamma_peak * period > pi)
      throw std::domain_error("comb teeth overlap: gamma_peak * period must not exceed pi");
    return SpectralProfile(LorentzianCombProfile{gamma_peak, period});
  }

  static SpectralProfile sampled(std::vector<double> delta, std::vector<double> g,
                                 double period = 0.0) {
    if (delta.size() != g.size() || delta.size() < 2)
      throw std::invalid_argument("sampled profile needs matching delta/g arrays, length >= 2");
    const double h = delta[1] - delta[0];
    if (!(h > 0.0)) throw std::invalid_argument("sampled delta grid must be strictly increasing");
    for (std::size_t i = 1; i < delta.size(); ++i) {
      const double hi = delta[i] - delta[i - 1];
      if (!(hi > 0.0) || std::abs(hi - h) > 1e-6 * h)
        throw std::invalid_argument("sampled delta grid must be uniform");
    }
    for (double v : g)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("sampled g values must be finite and non-negative");
    if (period < 0.0) throw std::domain_error("sampled period must be non-negative");
    return SpectralProfile(SampledProfile{std::move(delta), std::move(g), period});
  }

  const Variant& value() const { return v_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  bool is_periodic() const {
    return std::holds_alternative<CosineGratingProfile>(v_) ||
           std::holds_alternative<LorentzianCombProfile>(v_) ||
           (std::holds_alternative<SampledProfile>(v_) &&
            std::get<SampledProfile>(v_).period > 0.0);
  }

  // Period T for periodic profiles, 0 otherwise.
  double period() const {
    if (const auto* c = get_if<CosineGratingProfile>()) return c->period;
    if (const auto* c = get_if<LorentzianCombProfile>()) return c->period;
    if (const auto* s = get_if<SampledProfile>()) return s->period;
    return 0.0;
  }

  const char* kind_name() const {
    switch (v_.index()) {
      case 0: return "flat";
      case 1: return "hole";
      case 2: return "cosine_grating";
      case 3: return "lorentzian_comb";
      default: return "sampled";
    }
  }

 private:
  explicit SpectralProfile(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace detail {

// Periodized Lorentzian comb, closed form: summing teeth over all l equals the
// geometric Fourier series sum_n (gT/2) e^{-|n| gT} e^{-i n x T}, which
// collapses to a Poisson kernel. Exact, and exactly even about tooth centers.
inline double comb_value(const LorentzianCombProfile& c, double delta) {
  const double gt = c.gamma_peak * c.period;
  const double r = std::exp(-gt);
  const double cosx = std::cos(delta * c.period);
  return 0.5 * gt * (1.0 - r * r) / (1.0 - 2.0 * r * cosx + r * r);
}

inline double sampled_value(const SampledProfile& s, double delta) {
  if (delta < s.delta.front() || delta > s.delta.back())
    throw std::out_of_range("sampled profile evaluated outside its detuning grid");
  const double h = s.delta[1] - s.delta[0];
  const double pos = (delta - s.delta.front()) / h;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= s.delta.size()) i = s.delta.size() - 2;
  const double t = (delta - s.delta[i]) / h;
  return s.g[i] * (1.0 - t) + s.g[i + 1] * t;
}

}  // namespace detail

inline double eval_profile(const SpectralProfile& profile, double delta) {
  if (!std::isfinite(delta)) throw std::out_of_range("detuning must be finite");
  if (const auto* f = profile.get_if<FlatProfile>()) return f->level;
  if (const auto* h = profile.get_if<HoleProfile>()) {
    const double x = 2.0 * delta / h->delta0;
    return 1.0 - 1.0 / (1.0 + x * x);
  }
  if (const auto* g = profile.get_if<CosineGratingProfile>())
    return 0.5 * (1.0 + std::cos(delta * g->period));
  if (const auto* c = profile.get_if<LorentzianCombProfile>())
    return detail::comb_value(*c, delta);
  return detail::sampled_value(*profile.get_if<SampledProfile>(), delta);
}

// Coefficients of g(delta) = sum_{|n| <= N} g_n exp(-i n delta T) plus a bound
// on the dropped |n| > N tail.
struct FourierCoeffs {
  double period_T = 0.0;
  int cutoff = 0;  // N
  std::vector<std::complex<double>> c;  // size 2N+1, index n + N
  double tail_bound = 0.0;  // sum of |g_n| over the dropped |n| > N

  std::complex<double> at(int n) const {
    if (n < -cutoff || n > cutoff)
      throw std::out_of_range("fourier coefficient index beyond cutoff");
    return c[static_cast<std::size_t>(n + cutoff)];
  }
};

// N defaults to 8: coefficients of physical combs decay geometrically and
// |g_8| is already < 1e-3 of g_0 for any accepted finesse.
inline FourierCoeffs fourier_coeffs(const SpectralProfile& profile, int cutoff = 8) {
  if (cutoff < 1) throw std::domain_error("fourier cutoff must be at least 1");
  FourierCoeffs out;
  out.cutoff = cutoff;
  out.c.assign(static_cast<std::size_t>(2 * cutoff + 1), 0.0);

  if (const auto* g = profile.get_if<CosineGratingProfile>()) {
    out.period_T = g->period;
    out.c[static_cast<std::size_t>(cutoff)] = 0.5;
    out.c[static_cast<std::size_t>(cutoff - 1)] = 0.25;
    out.c[static_cast<std::size_t>(cutoff + 1)] = 0.25;
    out.tail_bound = 0.0;
    return out;
  }
  if (const auto* c = profile.get_if<LorentzianCombProfile>()) {
    const double gt = c->gamma_peak * c->period;
    out.period_T = c->period;
    for (int n = -cutoff; n <= cutoff; ++n)
      out.c[static_cast<std::size_t>(n + cutoff)] = 0.5 * gt * std::exp(-std::abs(n) * gt);
    const double r = std::exp(-gt);
    out.tail_bound = gt * std::pow(r, cutoff + 1) / (1.0 - r);
    return out;
  }
  if (const auto* s = profile.get_if<SampledProfile>()) {
    if (!(s->period > 0.0))
      throw UnsupportedProfileError("fourier_coeffs: sampled profile carries no period");
    const double span = s->delta.back() - s->delta.front();
    const double periods = span / (2.0 * pi / s->period);
    const double rounded = std::round(periods);
    if (rounded < 1.0 || std::abs(periods - rounded) > 1e-6 * std::max(1.0, rounded))
      throw UnsupportedProfileError(
          "fourier_coeffs: sampled grid must span an integer number of periods (>= 1)");
    if ((s->delta.size() - 1) / static_cast<std::size_t>(rounded) < 64)
      throw UnsupportedProfileError(
          "fourier_coeffs: sampled grid needs at least 64 points per period");
    out.period_T = s->period;
    const double h = s->delta[1] - s->delta[0];
    for (int n = -cutoff; n <= cutoff; ++n) {
      // Trapezoid of g e^{+i n delta T} over the full span, averaged. On a
      // uniform grid spanning whole periods this is spectrally accurate.
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < s->delta.size(); ++i) {
        const double w = (i == 0 || i + 1 == s->delta.size()) ? 0.5 : 1.0;
        acc += w * s->g[i] * std::polar(1.0, n * s->delta[i] * s->period);
      }
      out.c[static_cast<std::size_t>(n + cutoff)] = acc * h / span;
    }
    out.tail_bound = std::max(std::abs(out.c.front()), std::abs(out.c.back()));
    return out;
  }
  throw UnsupportedProfileError(
      std::string("fourier_coeffs: profile kind '") + profile.kind_name() + "' is not periodic");
}

// F = pi / (gamma_peak * period) = tooth spacing over tooth FWHM.
inline double finesse(double gamma_peak, double period) {
  if (!(gamma_peak > 0.0) || !(period > 0.0))
    throw std::domain_error("finesse: gamma_peak and period must be positive");
  return pi / (gamma_peak * period);
}

inline double finesse(const SpectralProfile& profile) {
  const auto* c = profile.get_if<LorentzianCombProfile>();
  if (!c) throw UnsupportedProfileError("finesse is defined for lorentzian combs only");
  return finesse(c->gamma_peak, c->period);
}

namespace detail {

// Effective level of the profile far outside any finite window: the true
// background for flat and hole, the period mean for combs and gratings (a
// window cut mid-gap sees the oscillation around the mean integrate away).
// The part of the kernel integral beyond the window comes from this level.
inline double background_level(const SpectralProfile& profile) {
  if (const auto* f = profile.get_if<FlatProfile>()) return f->level;
  if (profile.get_if<HoleProfile>()) return 1.0;
  if (profile.get_if<CosineGratingProfile>()) return 0.5;  // mean of the grating
  if (const auto* c = profile.get_if<LorentzianCombProfile>())
    return 0.5 * c->gamma_peak * c->period;  // mean of the comb
  return 0.0;  // sampled data has no atoms beyond its support
}

}  // namespace detail

}  // namespace lightstore

#endif
