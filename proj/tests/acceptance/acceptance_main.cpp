// Release gate. Every top-level behaviour of the library gets one
// self-contained check and one verdict line; the process exits nonzero if any
// check fails. Checks compare independent routes to the same number (closed
// form, order recursion, frequency domain propagation, time domain lattice)
// rather than replaying stored outputs.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "lightstore/lightstore.hpp"

using namespace lightstore;

namespace {

struct Gate {
  int failed = 0;

  void run(const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), seconds,
                detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

double detected_first_echo(const SpectralProfile& profile, const MediumParams& medium,
                           const PulseEnvelope& pulse, double period) {
  const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
  const auto tf = transfer_function(profile, medium, d_omega, pulse.size());
  const auto out = propagate(pulse, tf);
  return detect_echoes(out, pulse, period).first_echo();
}

double rel_l2(const PulseEnvelope& a, const PulseEnvelope& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

// -------------------------------------------------------------------------

bool check_three_pulse_echo(std::string& detail) {
  const double T = 7.0e-6;
  const auto profile = SpectralProfile::cosine_grating(T);
  const auto pulse = gaussian_pulse(0.4e-6, 10.0e-6, 0.0, 0.25e-6, 1024);
  for (const double alphaL : {0.5, 1.0, 2.0, 4.0, 6.0, 8.0}) {
    const auto medium = MediumParams::from_optical_depth(alphaL, 0.01, khz_to_angular(0.01));
    const double closed = eta_3pe(alphaL);
    const double rec = std::norm(order_recursion(profile, medium, 2).at_exit(1));
    const double det = detected_first_echo(profile, medium, pulse, T);
    if (!close_rel(rec, closed, 0.05) || !close_rel(det, closed, 0.05)) {
      detail = "alphaL " + std::to_string(alphaL) + ": closed " + std::to_string(closed) +
               " recursion " + std::to_string(rec) + " detected " + std::to_string(det);
      return false;
    }
  }
  // The closed form peaks at alphaL = 4 with efficiency e^-2.
  double best_x = 0.0, best = -1.0;
  for (double x = 0.5; x <= 8.0; x += 1e-3)
    if (eta_3pe(x) > best) best = eta_3pe(x), best_x = x;
  if (std::abs(best_x - 4.0) > 0.05 || std::abs(best - std::exp(-2.0)) > 3e-3) {
    detail = "peak at " + std::to_string(best_x) + " value " + std::to_string(best);
    return false;
  }
  return true;
}

bool check_comb_echo_routes(std::string& detail) {
  const double T = 2.0e-6;
  // Pulse short against T: at 8 rms per period the transmitted pulse and the
  // echo no longer interfere across the half-period window boundaries, so the
  // windowed energies isolate the orders cleanly.
  const auto pulse = gaussian_pulse(0.25e-6, 10.0e-6, 0.0, 0.125e-6, 1024);
  for (const double F : {3.0, 5.0, 10.0}) {
    const auto profile = SpectralProfile::lorentzian_comb(pi / (F * T), T);
    for (const double alphaL : {1.0, 2.0, 4.0, 8.0}) {
      const auto medium =
          MediumParams::from_optical_depth(alphaL, 0.01, khz_to_angular(0.01));
      const double closed = eta_afc_forward(alphaL, F);
      const double rec = std::norm(order_recursion(profile, medium, 2).at_exit(1));
      const double det = detected_first_echo(profile, medium, pulse, T);
      if (!close_rel(rec, closed, 0.05) || !close_rel(det, closed, 0.05) ||
          !close_rel(det, rec, 0.05)) {
        detail = "F " + std::to_string(F) + " alphaL " + std::to_string(alphaL) +
                 ": closed " + std::to_string(closed) + " recursion " +
                 std::to_string(rec) + " detected " + std::to_string(det);
        return false;
      }
    }
  }
  return true;
}

bool check_optimal_finesse(std::string& detail) {
  for (const double alphaL : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double analytic = optimal_finesse(alphaL);
    // Golden-section argmax, independent of the derivative algebra.
    double lo = 1.0, hi = 6.0 * analytic;
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    for (int i = 0; i < 200; ++i) {
      if (eta_afc_forward(alphaL, x1) < eta_afc_forward(alphaL, x2)) {
        lo = x1;
        x1 = x2;
        x2 = lo + inv_phi * (hi - lo);
      } else {
        hi = x2;
        x2 = x1;
        x1 = hi - inv_phi * (hi - lo);
      }
    }
    const double numeric = 0.5 * (lo + hi);
    if (!close_rel(numeric, analytic, 1e-3)) {
      detail = "alphaL " + std::to_string(alphaL) + ": argmax " + std::to_string(numeric) +
               " vs " + std::to_string(analytic);
      return false;
    }
    if (!close_rel(eta_afc_forward(alphaL, analytic), eta_afc_at_optimum(alphaL), 1e-6)) {
      detail = "alphaL " + std::to_string(alphaL) + ": optimum efficiency mismatch";
      return false;
    }
  }
  // Saturation: the optimum efficiency climbs toward 4 e^-2 = 0.5413 but gets
  // there only as alphaL grows without bound. At alphaL = 100 it is still
  // 0.5005 (7 % below the asymptote; 0.51 first needs alphaL > 132), so the
  // deep-depth clause pins the exact closed-form value.
  const double v100 = eta_afc_at_optimum(100.0);
  if (std::abs(v100 - 0.500500307828) > 1e-9) {
    detail = "eta at optimum for alphaL 100 is " + std::to_string(v100);
    return false;
  }
  std::printf(
      "NOTE: forward comb retrieval at the optimal finesse saturates at "
      "4 e^-2 (alphaL / (4 + alphaL))^2; at alphaL = 100 that is 0.5005, and "
      "values above 0.51 require alphaL > 132, so the deep-depth check pins "
      "the exact value instead of a band near the asymptote.\n");
  return true;
}

bool check_hole_delay(std::string& detail) {
  const double sigma = 1.75e-6;
  const auto pulse = gaussian_pulse(sigma, 20.0e-6, 0.0, 0.5e-6, 128);
  // alphaL / Delta0 is the gamma -> 0 law; gamma at 1 kHz keeps its
  // (1 + 2 gamma / Delta0)^-2 correction below the probe tolerance.
  const auto medium = MediumParams::from_optical_depth(10.0, 0.01, khz_to_angular(1.0));
  std::vector<double> err;
  for (const double k : {3.0, 5.0, 10.0, 20.0}) {
    const auto probe = delay_probe(pulse, k / sigma, medium);
    err.push_back(std::abs(probe.measured_delay - probe.expected_delay) /
                  probe.expected_delay);
  }
  // Wide holes (width 10 and 20 pulse bandwidths) must track alphaL / Delta0
  // to 5 %; narrowing the hole must degrade the agreement monotonically.
  if (err[2] > 0.05 || err[3] > 0.05) {
    detail = "wide-hole delay errors " + std::to_string(err[2]) + ", " +
             std::to_string(err[3]);
    return false;
  }
  if (!(err[0] > err[1] && err[1] > err[2])) {
    detail = "errors not monotone: " + std::to_string(err[0]) + " -> " +
             std::to_string(err[1]) + " -> " + std::to_string(err[2]);
    return false;
  }
  return true;
}

bool check_beer_lambert(std::string& detail) {
  const auto profile = SpectralProfile::flat(1.0);
  const auto pulse = gaussian_pulse(1.0e-6, 10.0e-6, 0.0, 0.5e-6, 128);
  const double e_in = pulse_energy(pulse);
  for (const double alphaL : {0.5, 1.0, 2.0, 4.0}) {
    const auto medium = MediumParams::from_optical_depth(alphaL, 0.01, khz_to_angular(10.0));
    const double expected = std::exp(-alphaL);

    const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
    const auto tf = transfer_function(profile, medium, d_omega, pulse.size());
    const double through_tf = pulse_energy(propagate(pulse, tf)) / e_in;
    if (!close_rel(through_tf, expected, 1e-4)) {
      detail = "frequency route at alphaL " + std::to_string(alphaL) + ": " +
               std::to_string(through_tf);
      return false;
    }

    OracleOptions opt;
    opt.n_delta = 512;
    opt.n_z = 32;
    const auto oracle = time_domain_oracle(pulse, profile, medium, opt);
    const double through_lattice = pulse_energy(oracle.output) / e_in;
    if (!close_rel(through_lattice, expected, 0.02)) {
      detail = "lattice route at alphaL " + std::to_string(alphaL) + ": " +
               std::to_string(through_lattice);
      return false;
    }
  }
  return true;
}

bool check_solver_agreement(std::string& detail) {
  {
    const double sigma = 1.6e-6;
    const auto pulse = gaussian_pulse(sigma, 20.0e-6, 0.0, 0.4e-6, 128);
    const auto profile = SpectralProfile::hole(10.0 / sigma);
    const auto medium = MediumParams::from_optical_depth(10.0, 0.01, khz_to_angular(10.0));
    const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
    const auto tf_out = propagate(pulse, transfer_function(profile, medium, d_omega,
                                                           pulse.size()));
    OracleOptions opt;
    opt.n_delta = 1536;
    opt.n_z = 128;
    const auto lattice_out = time_domain_oracle(pulse, profile, medium, opt).output;
    const double err = rel_l2(lattice_out, tf_out);
    if (err > 0.02) {
      detail = "hole L2 mismatch " + std::to_string(err);
      return false;
    }
  }
  {
    const double T = 7.0e-6;
    const auto pulse = gaussian_pulse(0.7e-6, 10.0e-6, 0.0, 0.25e-6, 1024);
    const auto profile = SpectralProfile::cosine_grating(T);
    const auto medium = MediumParams::from_optical_depth(2.0, 0.01, khz_to_angular(0.01));
    const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
    const auto tf_out = propagate(pulse, transfer_function(profile, medium, d_omega,
                                                           pulse.size()));
    OracleOptions opt;
    opt.n_delta = 2560;
    opt.n_z = 64;
    const auto lattice_out = time_domain_oracle(pulse, profile, medium, opt).output;
    const double err = rel_l2(lattice_out, tf_out);
    if (err > 0.02) {
      detail = "grating L2 mismatch " + std::to_string(err);
      return false;
    }
  }
  return true;
}

bool check_energy_bookkeeping(std::string& detail) {
  // Deep hole, small homogeneous width: residual absorption alphaL
  // gamma / (a + gamma) stays a few percent and the audit can balance. The
  // hole spans 24.5 pulse bandwidths so the spectral wings avoid the
  // absorbing shoulders and the field fraction tracks vg/c.
  const double sigma = 1.75e-6;
  const double delta0 = 24.5 / sigma;
  const auto medium = MediumParams(25000.0, 0.01, khz_to_angular(0.1));
  const auto profile = SpectralProfile::hole(delta0);
  const auto pulse = gaussian_pulse(sigma, 20.0e-6, 0.0, 0.125e-6, 256);
  if (!(containment_fraction(pulse, medium, delta0) >= 10.0)) {
    detail = "containment ratio below 10";
    return false;
  }
  const double delay = expected_hole_delay(medium, delta0);  // 17.86 us
  OracleOptions opt;
  opt.n_delta = 2048;
  opt.n_z = 256;
  const auto audit = energy_audit(pulse, profile, medium, 20.0e-6 + 0.30 * delay, opt);
  if (!audit.contained) {
    detail = "pulse not contained at the snapshot";
    return false;
  }
  if (!(std::abs(audit.field_fraction / audit.vg_over_c - 1.0) <= 0.2)) {
    detail = "field fraction " + std::to_string(audit.field_fraction) + " vs vg/c " +
             std::to_string(audit.vg_over_c);
    return false;
  }
  if (!(std::abs(audit.total_fraction - 1.0) <= 0.05)) {
    detail = "total fraction " + std::to_string(audit.total_fraction);
    return false;
  }
  return true;
}

bool check_sampled_comb_design(std::string& detail) {
  // Sample a comb, measure its harmonic content, choose the depth that makes
  // the first echo carry 7.8 % of the input, then simulate at that depth.
  const double T = 2.0e-6, F = 5.0;
  const auto comb = SpectralProfile::lorentzian_comb(pi / (F * T), T);
  const double spectral_period = 2.0 * pi / T;
  const std::size_t n = 8 * 256 + 1;
  std::vector<double> delta(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = -4.0 * spectral_period +
               8.0 * spectral_period * static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = eval_profile(comb, delta[i]);
  }
  const auto sampled = SpectralProfile::sampled(delta, g, T);
  const auto coeffs = fourier_coeffs(sampled, 8);
  const double g0 = coeffs.at(0).real();
  const double g1 = std::abs(coeffs.at(-1));

  const double target = 0.078;
  double lo = 0.05, hi = 2.0 / g0;  // rising branch of (g1 x)^2 e^{-g0 x}
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double eta = g1 * g1 * mid * mid * std::exp(-g0 * mid);
    (eta < target ? lo : hi) = mid;
  }
  const double alphaL = 0.5 * (lo + hi);

  const auto medium = MediumParams::from_optical_depth(alphaL, 0.01, khz_to_angular(0.01));
  const double eta_sim = std::norm(order_recursion(sampled, medium, 2).at_exit(1));
  if (!close_rel(eta_sim, target, 0.10)) {
    detail = "designed alphaL " + std::to_string(alphaL) + " gives " +
             std::to_string(eta_sim);
    return false;
  }

  // The same design must hold on a propagated trace: push a short pulse
  // through the sampled profile and read the first echo window.
  const auto pulse = gaussian_pulse(0.25e-6, 10.0e-6, 0.0, 0.125e-6, 1024);
  const double detected = detected_first_echo(sampled, medium, pulse, T);
  if (!close_rel(detected, target, 0.10)) {
    detail = "designed alphaL " + std::to_string(alphaL) + " detects " +
             std::to_string(detected);
    return false;
  }
  return true;
}

bool check_protocol_rules(std::string& detail) {
  const auto near = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };

  ProtocolTimeline bare;
  bare.scheme = Scheme::comb_echo;
  bare.signal_in_time = 3.0e-6;
  bare.comb_period_T = 17.0e-6;
  const auto p0 = predict_retrieval(bare);
  if (!near(p0.retrieval_time, 20.0e-6) || p0.direction != Direction::forward ||
      !p0.phase_matched || p0.amplitude_factor != 1.0) {
    detail = "bare comb prediction wrong";
    return false;
  }

  ProtocolTimeline paused = bare;
  paused.signal_in_time = 10.0e-6;
  paused.comb_period_T = 7.0e-6;
  paused.raman1 = 13.0e-6;
  paused.raman2 = 113.0e-6;
  paused.spin_lifetime = 200.0e-6;
  paused.transfer_efficiency = 0.9;
  paused.requested_direction = Direction::backward;
  const auto p1 = predict_retrieval(paused);
  const double dwell = *paused.raman2 - *paused.raman1;
  if (!near(p1.retrieval_time, 117.0e-6) || p1.direction != Direction::backward ||
      !p1.phase_matched ||
      !near(p1.amplitude_factor, 0.81 * std::exp(-dwell / 200.0e-6))) {
    detail = "paused-clock prediction wrong";
    return false;
  }
  if (!near(compose_efficiency(0.25, p1),
            0.25 * p1.amplitude_factor * p1.amplitude_factor)) {
    detail = "efficiency composition wrong";
    return false;
  }

  ProtocolTimeline slow;
  slow.scheme = Scheme::hole_slow_light;
  slow.signal_in_time = 10.0e-6;
  slow.raman1 = 14.0e-6;
  slow.raman2 = 80.0e-6;
  const auto p2 = predict_retrieval(slow);
  if (!near(p2.retrieval_time, 80.0e-6) || p2.direction != Direction::forward ||
      !p2.phase_matched) {
    detail = "slow light prediction wrong";
    return false;
  }

  ProtocolTimeline late = bare;
  late.raman1 = bare.signal_in_time + bare.comb_period_T;
  late.raman2 = *late.raman1 + 1.0e-6;
  try {
    predict_retrieval(late);
    detail = "late transfer not rejected";
    return false;
  } catch (const TooLateError&) {
  }
  return true;
}

}  // namespace

int main() {
  Gate gate;
  gate.run("three-pulse echo efficiency against the closed form", check_three_pulse_echo);
  gate.run("comb echo efficiency: closed form, recursion, propagation agree",
           check_comb_echo_routes);
  gate.run("optimal comb finesse and peak efficiency", check_optimal_finesse);
  gate.run("spectral hole group delay and its narrowband breakdown", check_hole_delay);
  gate.run("flat background obeys Beer-Lambert in both solvers", check_beer_lambert);
  gate.run("frequency and time domain solvers agree on hole and grating",
           check_solver_agreement);
  gate.run("energy bookkeeping against the group velocity picture",
           check_energy_bookkeeping);
  gate.run("comb design from sampled spectra hits a target efficiency",
           check_sampled_comb_design);
  gate.run("protocol timing and amplitude rules", check_protocol_rules);
  if (gate.failed) {
    std::printf("%d check(s) failed\n", gate.failed);
    return 1;
  }
  std::printf("all checks passed\n");
  return 0;
}
