#ifndef LIGHTSTORE_PROTOCOL_HPP
#define LIGHTSTORE_PROTOCOL_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lightstore/errors.hpp"

// Retrieval bookkeeping for the two storage schemes built on a tailored line:
//
//  * comb_echo: the structured line re-emits on its own, one period after the
//    signal. An optional pair of ground-state transfer pulses parks the
//    coherence in a spin state mid-count, which pauses the rephasing clock
//    between the two pulses and allows phase-matched backward retrieval.
//  * hole_slow_light: the signal crawls through a transparency window; the
//    transfer pair freezes it as a spin wave and releases it on demand. The
//    echo clock plays no role, readout happens at the second transfer pulse,
//    always forward.
//
// Times are absolute, same clock as the pulse grids. The transfer pair is
// idealized as instantaneous; each pass costs one factor of the transfer
// efficiency in amplitude, and the spin wave decays exponentially while
// parked.

namespace lightstore {

enum class Scheme { comb_echo, hole_slow_light };
enum class Direction { forward, backward };

inline const char* to_string(Scheme s) {
  return s == Scheme::comb_echo ? "comb_echo" : "hole_slow_light";
}
inline const char* to_string(Direction d) {
  return d == Direction::forward ? "forward" : "backward";
}

struct ProtocolTimeline {
  Scheme scheme = Scheme::comb_echo;
  double signal_in_time = 0.0;            // s
  std::optional<double> raman1;           // first transfer pulse, s
  std::optional<double> raman2;           // second transfer pulse, s
  double comb_period_T = 0.0;             // s; ignored by hole_slow_light
  double spin_lifetime = std::numeric_limits<double>::infinity();  // s
  double transfer_efficiency = 1.0;       // amplitude factor per transfer pass
  Direction requested_direction = Direction::forward;
};

struct RetrievalPrediction {
  double retrieval_time = 0.0;
  Direction direction = Direction::forward;
  // Amplitude left after the transfer passes and the parked-state decay.
  double amplitude_factor = 1.0;
  // Whether the medium can emit in the requested direction at all.
  bool phase_matched = false;
};

inline RetrievalPrediction predict_retrieval(const ProtocolTimeline& tl) {
  if (tl.raman1.has_value() != tl.raman2.has_value())
    throw std::invalid_argument("transfer pulses come in pairs; exactly one time was set");
  if (!(tl.spin_lifetime > 0.0))
    throw std::domain_error("spin lifetime must be positive (infinity allowed)");
  if (!(tl.transfer_efficiency > 0.0 && tl.transfer_efficiency <= 1.0))
    throw std::domain_error("transfer efficiency must lie in (0, 1]");

  const bool pair = tl.raman1.has_value();
  double parked = 0.0;
  if (pair) {
    const double r1 = *tl.raman1, r2 = *tl.raman2;
    if (r1 < tl.signal_in_time)
      throw std::invalid_argument("first transfer pulse precedes the signal");
    if (r2 < r1)
      throw std::invalid_argument("transfer pulses out of order");
    parked = r2 - r1;
  }

  RetrievalPrediction p;
  p.amplitude_factor =
      pair ? tl.transfer_efficiency * tl.transfer_efficiency * std::exp(-parked / tl.spin_lifetime)
           : 1.0;

  if (tl.scheme == Scheme::hole_slow_light) {
    if (!pair)
      throw std::invalid_argument("hole_slow_light stores nothing without the transfer pair");
    p.retrieval_time = *tl.raman2;
    p.direction = Direction::forward;
    p.phase_matched = tl.requested_direction == Direction::forward;
    return p;
  }

  if (!(tl.comb_period_T > 0.0))
    throw std::domain_error("comb period must be positive");
  if (pair) {
    // The rephasing clock has run for r1 - t_in when the coherence parks; the
    // remainder of the period plays out after r2.
    const double elapsed = *tl.raman1 - tl.signal_in_time;
    if (elapsed >= tl.comb_period_T)
      throw TooLateError("transfer pulse after the echo has already left");
    p.retrieval_time = *tl.raman2 + (tl.comb_period_T - elapsed);
    p.direction = tl.requested_direction;  // the pair provides the momentum reversal
    p.phase_matched = true;
  } else {
    p.retrieval_time = tl.signal_in_time + tl.comb_period_T;
    p.direction = Direction::forward;
    p.phase_matched = tl.requested_direction == Direction::forward;
  }
  return p;
}

// Energy efficiency of the full chain: the medium response contributes
// base_eta, the protocol squares its amplitude factor.
inline double compose_efficiency(double base_eta, const RetrievalPrediction& p) {
  if (!(base_eta >= 0.0)) throw std::domain_error("base efficiency must be non-negative");
  return base_eta * p.amplitude_factor * p.amplitude_factor;
}

}  // namespace lightstore

#endif
