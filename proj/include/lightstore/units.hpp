#ifndef LIGHTSTORE_UNITS_HPP
#define LIGHTSTORE_UNITS_HPP

#include <numbers>

// Internal unit system: angular frequencies and detunings in rad/s, times in
// seconds, lengths in meters, absorption coefficients in 1/m. The helpers
// below convert the interface units (ordinary MHz/kHz, microseconds, 1/cm)
// at the boundary; nothing inside the library mixes unit systems.

namespace lightstore {

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299'792'458.0;  // m/s

inline constexpr double mhz_to_angular(double mhz) { return 2.0 * pi * 1e6 * mhz; }
inline constexpr double angular_to_mhz(double w) { return w / (2.0 * pi * 1e6); }
inline constexpr double khz_to_angular(double khz) { return 2.0 * pi * 1e3 * khz; }

inline constexpr double us_to_s(double us) { return us * 1e-6; }
inline constexpr double s_to_us(double s) { return s * 1e6; }

inline constexpr double per_cm_to_per_m(double a) { return a * 100.0; }
inline constexpr double cm_to_m(double l) { return l * 0.01; }

}  // namespace lightstore

#endif
