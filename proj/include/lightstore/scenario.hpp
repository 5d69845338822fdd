#ifndef LIGHTSTORE_SCENARIO_HPP
#define LIGHTSTORE_SCENARIO_HPP

#include <atomic>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lightstore/config.hpp"
#include "lightstore/echoes.hpp"
#include "lightstore/errors.hpp"
#include "lightstore/io.hpp"
#include "lightstore/oracle.hpp"
#include "lightstore/protocol.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/slowlight.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"
#include "lightstore/version.hpp"

// Turns a parsed scenario into files in an output directory. Each run leaves
// a manifest.json carrying the tool version and the verbatim config, and a
// manifest can be fed back in as a config.

namespace lightstore {

struct RunSummary {
  std::vector<std::string> files;  // paths written, in order
  std::vector<std::string> notes;  // one-line human readable results
};

namespace detail {

inline SpectralProfile build_profile(const ScenarioConfig& c,
                                     const std::string& base_dir) {
  const auto& p = c.profile;
  if (p.kind == "flat") return SpectralProfile::flat(p.level);
  if (p.kind == "hole") return SpectralProfile::hole(p.delta0);
  if (p.kind == "cosine_grating") return SpectralProfile::cosine_grating(p.period);
  if (p.kind == "lorentzian_comb")
    return SpectralProfile::lorentzian_comb(p.tooth_hwhm, p.period);
  std::filesystem::path csv(p.csv_path);
  if (csv.is_relative() && !base_dir.empty()) csv = std::filesystem::path(base_dir) / csv;
  const auto data = load_sampled_csv(csv.string());
  return SpectralProfile::sampled(data.delta, data.g, p.period);
}

inline MediumParams build_medium(const MediumSpec& m) {
  return MediumParams(m.alpha, m.length, m.gamma);
}

inline PulseEnvelope build_pulse(const PulseSpec& p) {
  return gaussian_pulse(p.rms, p.center, p.grid.t0, p.grid.dt, p.grid.n_points);
}

// Refuses to scribble over a non-empty directory unless forced.
inline void prepare_out_dir(const std::string& out_dir, bool force) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw std::runtime_error("output path '" + out_dir + "' is not a directory");
    if (!force && fs::directory_iterator(dir) != fs::directory_iterator())
      throw std::runtime_error("output directory '" + out_dir +
                               "' is not empty; pass --force to overwrite");
  } else {
    fs::create_directories(dir);
  }
}

inline std::string write_manifest(const std::string& out_dir, const ScenarioConfig& c) {
  nlohmann::json manifest;
  manifest["tool"] = {{"name", "lightstore"}, {"version", version()}};
  manifest["config"] = c.raw;
  const std::string path = (std::filesystem::path(out_dir) / "manifest.json").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("short write to '" + path + "'");
  return path;
}

// Spectrum plot range per profile kind: wide enough to show the structure.
inline std::pair<double, double> spectrum_range(const SpectralProfile& profile,
                                                double pulse_rms) {
  if (const auto* h = profile.get_if<HoleProfile>())
    return {-10.0 * h->delta0, 10.0 * h->delta0};
  if (const auto* s = profile.get_if<SampledProfile>())
    return {s->delta.front(), s->delta.back()};
  if (profile.is_periodic()) {
    const double spacing = 2.0 * pi / profile.period();
    return {-3.5 * spacing, 3.5 * spacing};
  }
  return {-4.0 / pulse_rms, 4.0 / pulse_rms};
}

// Deterministic parallel map: slot i always receives the result for index i,
// whatever the thread count.
template <typename Fn>
void indexed_parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const unsigned n_threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::vector<double> sweep_values(const SweepSpec& s) {
  std::vector<double> v(s.steps);
  for (std::size_t i = 0; i < s.steps; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(s.steps - 1);
    v[i] = s.log_scale ? std::exp(std::log(s.from) + f * (std::log(s.to) - std::log(s.from)))
                       : s.from + f * (s.to - s.from);
  }
  return v;
}

}  // namespace detail

// One propagation run: traces, transfer function, spectrum, plus whatever the
// profile kind makes meaningful (delay probe for a hole, echo report for a
// periodic profile, protocol prediction when configured).
inline RunSummary run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                               bool force, const std::string& config_dir = {}) {
  namespace fs = std::filesystem;
  detail::prepare_out_dir(out_dir, force);

  const auto profile = detail::build_profile(config, config_dir);
  const auto medium = detail::build_medium(config.medium);
  const auto pulse = detail::build_pulse(config.pulse);

  RunSummary summary;
  const auto emit = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };

  const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
  const auto tf = transfer_function(profile, medium, d_omega, pulse.size());
  const auto output = propagate(pulse, tf);

  write_trace_csv(emit("input_trace.csv"), pulse);
  summary.files.push_back(emit("input_trace.csv"));
  write_trace_csv(emit("output_trace.csv"), output);
  summary.files.push_back(emit("output_trace.csv"));
  write_transfer_csv(emit("transfer_function.csv"), tf);
  summary.files.push_back(emit("transfer_function.csv"));
  const auto range = detail::spectrum_range(profile, config.pulse.rms);
  write_spectrum_csv(emit("spectrum.csv"), profile, medium, range.first, range.second, 1001);
  summary.files.push_back(emit("spectrum.csv"));

  const double transmission = pulse_energy(output) / pulse_energy(pulse);
  summary.notes.push_back("transmission " + detail::g9(transmission));

  double base_eta = transmission;
  if (const auto* h = profile.get_if<HoleProfile>()) {
    const auto probe = delay_probe(pulse, h->delta0, medium);
    write_delay_csv(emit("delay.csv"), {probe}, medium.alphaL());
    summary.files.push_back(emit("delay.csv"));
    summary.notes.push_back("group delay " + detail::g9(s_to_us(probe.measured_delay)) +
                            " us (expected " + detail::g9(s_to_us(probe.expected_delay)) +
                            " us)");
  }
  if (profile.is_periodic()) {
    const auto report = detect_echoes(output, pulse, profile.period());
    write_echo_csv(emit("echoes.csv"), report);
    summary.files.push_back(emit("echoes.csv"));
    if (report.windows.size() > 1) {
      base_eta = report.first_echo();
      summary.notes.push_back("first echo efficiency " + detail::g9(base_eta) + " at " +
                              detail::g9(s_to_us(report.windows[1].centroid)) + " us");
    }
  }

  if (config.protocol) {
    const auto& ps = *config.protocol;
    ProtocolTimeline tl;
    tl.scheme = ps.scheme;
    tl.signal_in_time = config.pulse.center;
    tl.raman1 = ps.raman1;
    tl.raman2 = ps.raman2;
    tl.comb_period_T = profile.is_periodic() ? profile.period() : 0.0;
    tl.spin_lifetime = ps.spin_lifetime;
    tl.transfer_efficiency = ps.transfer_efficiency;
    tl.requested_direction = ps.direction;
    const auto prediction = predict_retrieval(tl);
    const double efficiency = compose_efficiency(base_eta, prediction);
    write_protocol_csv(emit("protocol.csv"), tl.scheme, prediction, efficiency);
    summary.files.push_back(emit("protocol.csv"));
    summary.notes.push_back("retrieval at " + detail::g9(s_to_us(prediction.retrieval_time)) +
                            " us, " + to_string(prediction.direction) + ", efficiency " +
                            detail::g9(efficiency));
  }

  summary.files.push_back(detail::write_manifest(out_dir, config));
  return summary;
}

// Parameter sweep. Row i of sweep.csv always belongs to value i; worker
// threads only race for work, never for slots.
inline RunSummary run_sweep(const ScenarioConfig& config, const std::string& out_dir,
                            bool force, unsigned threads,
                            const std::string& config_dir = {}) {
  namespace fs = std::filesystem;
  if (!config.sweep) throw std::invalid_argument("config has no sweep block");
  detail::prepare_out_dir(out_dir, force);

  const auto& sw = *config.sweep;
  const auto values = detail::sweep_values(sw);
  const auto pulse = detail::build_pulse(config.pulse);
  RunSummary summary;

  if (sw.parameter == "delta0_mhz" ||
      (sw.parameter == "alpha_per_cm" && config.profile.kind == "hole")) {
    std::vector<DelayProbe> rows(values.size());
    detail::indexed_parallel_for(values.size(), threads, [&](std::size_t i) {
      MediumSpec ms = config.medium;
      double delta0 = config.profile.delta0;
      if (sw.parameter == "delta0_mhz") delta0 = mhz_to_angular(values[i]);
      else ms.alpha = per_cm_to_per_m(values[i]);
      rows[i] = delay_probe(pulse, delta0, detail::build_medium(ms));
    });
    const std::string path = (fs::path(out_dir) / "sweep.csv").string();
    write_delay_csv(path, rows, detail::build_medium(config.medium).alphaL());
    summary.files.push_back(path);
    summary.notes.push_back("swept " + sw.parameter + " over " +
                            std::to_string(values.size()) + " points");
  } else {
    // Efficiency sweeps over comb finesse or optical depth.
    std::vector<EfficiencyRow> rows(values.size());
    detail::indexed_parallel_for(values.size(), threads, [&](std::size_t i) {
      MediumSpec ms = config.medium;
      ProfileSpec pf = config.profile;
      if (sw.parameter == "finesse") {
        pf.finesse = values[i];
        pf.tooth_hwhm = pi / (pf.finesse * pf.period);
      } else {
        ms.alpha = per_cm_to_per_m(values[i]);
      }
      const auto medium = detail::build_medium(ms);
      ScenarioConfig point = config;
      point.profile = pf;
      const auto profile = detail::build_profile(point, config_dir);

      EfficiencyRow row;
      row.alphaL = medium.alphaL();
      row.finesse = pf.kind == "lorentzian_comb" ? pf.finesse : 0.0;
      const auto rec = order_recursion(profile, medium, 1);
      row.eta_recursion = std::norm(rec.at_exit(1));
      row.eta_closed = pf.kind == "lorentzian_comb"
                           ? eta_afc_forward(medium.alphaL(), pf.finesse)
                           : eta_3pe(medium.alphaL());
      const double d_omega = 2.0 * pi / (pulse.dt * static_cast<double>(pulse.size()));
      const auto tf = transfer_function(profile, medium, d_omega, pulse.size());
      const auto report = detect_echoes(propagate(pulse, tf), pulse, profile.period());
      row.eta_detected = report.windows.size() > 1 ? report.first_echo() : 0.0;
      rows[i] = row;
    });
    const std::string path = (fs::path(out_dir) / "sweep.csv").string();
    write_efficiency_csv(path, rows);
    summary.files.push_back(path);
    summary.notes.push_back("swept " + sw.parameter + " over " +
                            std::to_string(values.size()) + " points");
  }

  summary.files.push_back(detail::write_manifest(out_dir, config));
  return summary;
}

// Energy bookkeeping on the time-domain lattice, snapshot mid-transit.
inline RunSummary run_energy_audit(const ScenarioConfig& config, const std::string& out_dir,
                                   bool force, const std::string& config_dir = {}) {
  namespace fs = std::filesystem;
  detail::prepare_out_dir(out_dir, force);
  const auto profile = detail::build_profile(config, config_dir);
  const auto* h = profile.get_if<HoleProfile>();
  if (!h) throw UnsupportedProfileError("the energy audit needs a hole profile");
  const auto medium = detail::build_medium(config.medium);
  const auto pulse = detail::build_pulse(config.pulse);

  const double delay = expected_hole_delay(medium, h->delta0);
  const double snapshot_time = config.pulse.center + 0.5 * delay;

  OracleOptions opt;
  opt.n_z = std::min<std::size_t>(256, std::max<std::size_t>(64, static_cast<std::size_t>(
                                           std::ceil(medium.alphaL() * 1.25))));
  const double window = detail::oracle_window(profile, config.pulse.rms);
  const double needed =
      window * pulse.span() / pi * 1.1;  // lattice revival bound with headroom
  opt.n_delta = std::min<std::size_t>(4096, std::max<std::size_t>(256, static_cast<std::size_t>(
                                               std::ceil(needed))));
  const auto audit = energy_audit(pulse, profile, medium, snapshot_time, opt);

  nlohmann::json j;
  j["snapshot_time_us"] = s_to_us(audit.snapshot_time);
  j["field_fraction"] = audit.field_fraction;
  j["atomic_fraction"] = audit.atomic_fraction;
  j["total_fraction"] = audit.total_fraction;
  j["vg_over_c"] = audit.vg_over_c;
  j["entered_fraction"] = audit.entered_fraction;
  j["exited_fraction"] = audit.exited_fraction;
  j["contained"] = audit.contained;
  const std::string path = (fs::path(out_dir) / "energy_audit.json").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("short write to '" + path + "'");
  RunSummary summary;
  summary.files.push_back(path);
  summary.files.push_back(detail::write_manifest(out_dir, config));
  summary.notes.push_back("field fraction " + detail::g9(audit.field_fraction) +
                          " (vg/c " + detail::g9(audit.vg_over_c) + "), dipole fraction " +
                          detail::g9(audit.atomic_fraction) + ", sum " +
                          detail::g9(audit.total_fraction) +
                          (audit.contained ? "" : " [pulse not fully contained]"));
  return summary;
}

}  // namespace lightstore

#endif
