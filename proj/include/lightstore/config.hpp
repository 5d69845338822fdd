#ifndef LIGHTSTORE_CONFIG_HPP
#define LIGHTSTORE_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightstore/protocol.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// Scenario files are JSON with external units (cm, us, MHz, kHz); parsing
// converts once to the internal SI / rad/s system. Validation walks the whole
// document and reports every problem with the dotted path of the offending
// field, instead of bailing at the first.

namespace lightstore {

struct Issue {
  std::string field;
  std::string message;
};

struct MediumSpec {
  double alpha = 0.0;   // 1/m
  double length = 0.0;  // m
  double gamma = 0.0;   // rad/s
};

struct ProfileSpec {
  std::string kind;
  double level = 1.0;       // flat
  double delta0 = 0.0;      // hole, rad/s
  double period = 0.0;      // grating/comb/sampled, s
  double tooth_hwhm = 0.0;  // comb, rad/s
  double finesse = 0.0;     // comb, pi / (tooth_hwhm * period)
  std::string csv_path;     // sampled
};

struct GridSpec {
  std::size_t n_points = 0;
  double dt = 0.0;  // s
  double t0 = 0.0;  // s
};

struct PulseSpec {
  double rms = 0.0;     // s, intensity rms width
  double center = 0.0;  // s
  GridSpec grid;
};

struct ProtocolSpec {
  Scheme scheme = Scheme::comb_echo;
  std::optional<double> raman1;  // s
  std::optional<double> raman2;  // s
  double spin_lifetime = std::numeric_limits<double>::infinity();  // s
  double transfer_efficiency = 1.0;
  Direction direction = Direction::forward;
};

struct SweepSpec {
  std::string parameter;  // delta0_mhz | alpha_per_cm | finesse
  double from = 0.0;      // external units of the parameter
  double to = 0.0;
  std::size_t steps = 0;
  bool log_scale = false;
};

struct ScenarioConfig {
  MediumSpec medium;
  ProfileSpec profile;
  PulseSpec pulse;
  std::optional<ProtocolSpec> protocol;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 0;
  nlohmann::json raw;  // verbatim copy for the manifest
};

namespace detail {

using nlohmann::json;

struct IssueSink {
  std::vector<Issue>* out;
  void add(const std::string& field, const std::string& message) {
    out->push_back({field, message});
  }
};

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed, IssueSink& sink) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      sink.add(path + "." + item.key(), "unknown field");
}

inline std::optional<double> want_number(const json& j, const std::string& path,
                                         const char* key, IssueSink& sink,
                                         bool required = true) {
  if (!j.contains(key)) {
    if (required) sink.add(path + "." + key, "missing");
    return std::nullopt;
  }
  if (!j.at(key).is_number()) {
    sink.add(path + "." + key, "must be a number");
    return std::nullopt;
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    sink.add(path + "." + key, "must be finite");
    return std::nullopt;
  }
  return v;
}

inline std::optional<std::string> want_string(const json& j, const std::string& path,
                                              const char* key, IssueSink& sink,
                                              bool required = true) {
  if (!j.contains(key)) {
    if (required) sink.add(path + "." + key, "missing");
    return std::nullopt;
  }
  if (!j.at(key).is_string()) {
    sink.add(path + "." + key, "must be a string");
    return std::nullopt;
  }
  return j.at(key).get<std::string>();
}

}  // namespace detail

// Every problem in the document, with dotted field paths. Empty means valid.
inline std::vector<Issue> validate_config(const nlohmann::json& root) {
  using nlohmann::json;
  std::vector<Issue> issues;
  detail::IssueSink sink{&issues};

  if (!root.is_object()) {
    sink.add("$", "config must be a JSON object");
    return issues;
  }
  detail::check_keys(root, "$", {"medium", "profile", "pulse", "protocol", "sweep", "seed"},
                     sink);

  // medium
  double alpha_per_cm = 0.0;
  if (!root.contains("medium") || !root.at("medium").is_object()) {
    sink.add("$.medium", "missing or not an object");
  } else {
    const auto& m = root.at("medium");
    detail::check_keys(m, "$.medium", {"alpha_per_cm", "length_cm", "gamma_khz"}, sink);
    if (auto v = detail::want_number(m, "$.medium", "alpha_per_cm", sink)) {
      alpha_per_cm = *v;
      if (*v < 0.0) sink.add("$.medium.alpha_per_cm", "must be non-negative");
    }
    if (auto v = detail::want_number(m, "$.medium", "length_cm", sink))
      if (!(*v > 0.0)) sink.add("$.medium.length_cm", "must be positive");
    if (auto v = detail::want_number(m, "$.medium", "gamma_khz", sink))
      if (!(*v > 0.0)) sink.add("$.medium.gamma_khz", "must be positive");
  }

  // profile
  std::string kind;
  double period_us = 0.0, finesse = 0.0;
  if (!root.contains("profile") || !root.at("profile").is_object()) {
    sink.add("$.profile", "missing or not an object");
  } else {
    const auto& p = root.at("profile");
    auto k = detail::want_string(p, "$.profile", "kind", sink);
    kind = k.value_or("");
    if (kind == "flat") {
      detail::check_keys(p, "$.profile", {"kind", "level"}, sink);
      if (auto v = detail::want_number(p, "$.profile", "level", sink, false))
        if (!(*v >= 0.0 && *v <= 1.0)) sink.add("$.profile.level", "must lie in [0, 1]");
    } else if (kind == "hole") {
      detail::check_keys(p, "$.profile", {"kind", "delta0_mhz"}, sink);
      if (auto v = detail::want_number(p, "$.profile", "delta0_mhz", sink))
        if (!(*v > 0.0)) sink.add("$.profile.delta0_mhz", "must be positive");
    } else if (kind == "cosine_grating") {
      detail::check_keys(p, "$.profile", {"kind", "period_us"}, sink);
      if (auto v = detail::want_number(p, "$.profile", "period_us", sink)) {
        period_us = *v;
        if (!(*v > 0.0)) sink.add("$.profile.period_us", "must be positive");
      }
    } else if (kind == "lorentzian_comb") {
      detail::check_keys(p, "$.profile", {"kind", "period_us", "tooth_hwhm_mhz", "finesse"},
                         sink);
      if (auto v = detail::want_number(p, "$.profile", "period_us", sink)) {
        period_us = *v;
        if (!(*v > 0.0)) sink.add("$.profile.period_us", "must be positive");
      }
      const bool has_tooth = p.contains("tooth_hwhm_mhz");
      const bool has_f = p.contains("finesse");
      if (has_tooth == has_f) {
        sink.add("$.profile", "give exactly one of tooth_hwhm_mhz or finesse");
      } else if (has_tooth) {
        if (auto v = detail::want_number(p, "$.profile", "tooth_hwhm_mhz", sink)) {
          if (!(*v > 0.0)) sink.add("$.profile.tooth_hwhm_mhz", "must be positive");
          else if (period_us > 0.0) {
            const double gt = mhz_to_angular(*v) * us_to_s(period_us);
            finesse = pi / gt;
            if (gt > pi)
              sink.add("$.profile.tooth_hwhm_mhz",
                       "teeth wider than half the spacing (finesse below 1)");
          }
        }
      } else {
        if (auto v = detail::want_number(p, "$.profile", "finesse", sink)) {
          finesse = *v;
          if (!(*v >= 1.0)) sink.add("$.profile.finesse", "must be at least 1");
        }
      }
    } else if (kind == "sampled") {
      detail::check_keys(p, "$.profile", {"kind", "csv_path", "period_us"}, sink);
      if (auto v = detail::want_string(p, "$.profile", "csv_path", sink))
        if (v->empty()) sink.add("$.profile.csv_path", "must not be empty");
      if (auto v = detail::want_number(p, "$.profile", "period_us", sink, false)) {
        period_us = *v;
        if (!(*v > 0.0)) sink.add("$.profile.period_us", "must be positive");
      }
    } else if (!kind.empty()) {
      sink.add("$.profile.kind",
               "unknown kind '" + kind +
                   "' (expected flat, hole, cosine_grating, lorentzian_comb or sampled)");
    }
  }

  // pulse
  double rms_us = 0.0, center_us = 0.0, dt_us = 0.0, t0_us = 0.0;
  std::size_t n_points = 0;
  if (!root.contains("pulse") || !root.at("pulse").is_object()) {
    sink.add("$.pulse", "missing or not an object");
  } else {
    const auto& p = root.at("pulse");
    detail::check_keys(p, "$.pulse", {"shape", "rms_us", "center_us", "grid"}, sink);
    if (auto s = detail::want_string(p, "$.pulse", "shape", sink, false))
      if (*s != "gaussian") sink.add("$.pulse.shape", "only 'gaussian' is supported");
    if (auto v = detail::want_number(p, "$.pulse", "rms_us", sink)) {
      rms_us = *v;
      if (!(*v > 0.0)) sink.add("$.pulse.rms_us", "must be positive");
    }
    if (auto v = detail::want_number(p, "$.pulse", "center_us", sink)) center_us = *v;
    if (!p.contains("grid") || !p.at("grid").is_object()) {
      sink.add("$.pulse.grid", "missing or not an object");
    } else {
      const auto& g = p.at("grid");
      detail::check_keys(g, "$.pulse.grid", {"n_points", "dt_us", "t0_us"}, sink);
      if (!g.contains("n_points") || !g.at("n_points").is_number_integer()) {
        sink.add("$.pulse.grid.n_points", "missing or not an integer");
      } else {
        const auto n = g.at("n_points").get<std::int64_t>();
        if (n < 8 || n > (std::int64_t{1} << 22) || (n & (n - 1)) != 0)
          sink.add("$.pulse.grid.n_points", "must be a power of two in [8, 2^22]");
        else
          n_points = static_cast<std::size_t>(n);
      }
      if (auto v = detail::want_number(g, "$.pulse.grid", "dt_us", sink)) {
        dt_us = *v;
        if (!(*v > 0.0)) sink.add("$.pulse.grid.dt_us", "must be positive");
      }
      if (auto v = detail::want_number(g, "$.pulse.grid", "t0_us", sink, false)) t0_us = *v;
    }
  }

  // grid consistency, only meaningful once the pieces parsed
  if (rms_us > 0.0 && dt_us > 0.0 && n_points > 0) {
    // Sampling: a gaussian spectrum must fall below 1e-6 of peak at the band
    // edge, which needs dt <= 0.845 rms.
    if (dt_us > 0.845 * rms_us)
      sink.add("$.pulse.grid.dt_us",
               "too coarse for the pulse; needs dt_us <= 0.845 * rms_us");
    const double span = dt_us * static_cast<double>(n_points);
    if (center_us - t0_us < 6.0 * rms_us)
      sink.add("$.pulse.center_us", "closer than 6 rms to the grid start");
    if (t0_us + span - center_us < 6.0 * rms_us)
      sink.add("$.pulse.center_us", "closer than 6 rms to the grid end");
    if (kind == "cosine_grating" && period_us > 0.0 && span < 16.0 * period_us)
      sink.add("$.pulse.grid", "span below 16 grating periods; echoes would wrap");
    if (kind == "lorentzian_comb" && period_us > 0.0 && finesse > 0.0 &&
        span < 16.0 * finesse * period_us)
      sink.add("$.pulse.grid",
               "span below 16 * finesse * period; comb teeth unresolved in frequency");
  }

  // protocol
  if (root.contains("protocol")) {
    if (!root.at("protocol").is_object()) {
      sink.add("$.protocol", "must be an object");
    } else {
      const auto& pr = root.at("protocol");
      detail::check_keys(pr, "$.protocol",
                         {"scheme", "raman1_us", "raman2_us", "spin_lifetime_us",
                          "transfer_efficiency", "direction"},
                         sink);
      std::string scheme;
      if (auto s = detail::want_string(pr, "$.protocol", "scheme", sink)) {
        scheme = *s;
        if (*s != "comb_echo" && *s != "hole_slow_light")
          sink.add("$.protocol.scheme", "expected 'comb_echo' or 'hole_slow_light'");
      }
      const bool h1 = pr.contains("raman1_us"), h2 = pr.contains("raman2_us");
      if (h1 != h2) sink.add("$.protocol", "raman1_us and raman2_us come as a pair");
      std::optional<double> r1, r2;
      if (h1) r1 = detail::want_number(pr, "$.protocol", "raman1_us", sink);
      if (h2) r2 = detail::want_number(pr, "$.protocol", "raman2_us", sink);
      if (r1 && r2 && *r2 < *r1)
        sink.add("$.protocol.raman2_us", "must not precede raman1_us");
      if (r1 && *r1 < center_us)
        sink.add("$.protocol.raman1_us", "precedes the signal pulse center");
      if (auto v = detail::want_number(pr, "$.protocol", "spin_lifetime_us", sink, false))
        if (!(*v > 0.0)) sink.add("$.protocol.spin_lifetime_us", "must be positive");
      if (auto v = detail::want_number(pr, "$.protocol", "transfer_efficiency", sink, false))
        if (!(*v > 0.0 && *v <= 1.0))
          sink.add("$.protocol.transfer_efficiency", "must lie in (0, 1]");
      if (auto s = detail::want_string(pr, "$.protocol", "direction", sink, false))
        if (*s != "forward" && *s != "backward")
          sink.add("$.protocol.direction", "expected 'forward' or 'backward'");
      if (scheme == "comb_echo" && kind != "" && kind != "lorentzian_comb" &&
          kind != "cosine_grating" && !(kind == "sampled" && period_us > 0.0))
        sink.add("$.protocol.scheme",
                 "comb_echo needs a periodic profile (comb, grating, or sampled with period_us)");
      if (scheme == "hole_slow_light" && !h1)
        sink.add("$.protocol", "hole_slow_light needs the transfer pulse pair");
    }
  }

  // sweep
  if (root.contains("sweep")) {
    if (!root.at("sweep").is_object()) {
      sink.add("$.sweep", "must be an object");
    } else {
      const auto& sw = root.at("sweep");
      detail::check_keys(sw, "$.sweep", {"parameter", "from", "to", "steps", "scale"}, sink);
      std::string param;
      if (auto s = detail::want_string(sw, "$.sweep", "parameter", sink)) {
        param = *s;
        if (*s != "delta0_mhz" && *s != "alpha_per_cm" && *s != "finesse")
          sink.add("$.sweep.parameter",
                   "expected 'delta0_mhz', 'alpha_per_cm' or 'finesse'");
      }
      bool log_scale = false;
      if (auto s = detail::want_string(sw, "$.sweep", "scale", sink, false)) {
        if (*s != "linear" && *s != "log")
          sink.add("$.sweep.scale", "expected 'linear' or 'log'");
        log_scale = (*s == "log");
      }
      const auto from = detail::want_number(sw, "$.sweep", "from", sink);
      const auto to = detail::want_number(sw, "$.sweep", "to", sink);
      if (from && !(*from > 0.0)) sink.add("$.sweep.from", "must be positive");
      if (to && !(*to > 0.0)) sink.add("$.sweep.to", "must be positive");
      (void)log_scale;
      if (!sw.contains("steps") || !sw.at("steps").is_number_integer()) {
        sink.add("$.sweep.steps", "missing or not an integer");
      } else {
        const auto n = sw.at("steps").get<std::int64_t>();
        if (n < 2 || n > 4096) sink.add("$.sweep.steps", "must lie in [2, 4096]");
      }
      if (param == "delta0_mhz" && kind != "" && kind != "hole")
        sink.add("$.sweep.parameter", "delta0_mhz sweeps need a hole profile");
      if (param == "finesse" && kind != "" && kind != "lorentzian_comb")
        sink.add("$.sweep.parameter", "finesse sweeps need a lorentzian_comb profile");
      if (param == "alpha_per_cm" && kind != "" && kind != "hole" &&
          kind != "lorentzian_comb" && kind != "cosine_grating")
        sink.add("$.sweep.parameter",
                 "alpha_per_cm sweeps need a hole, comb, or grating profile");
      if (param == "finesse" && from && to && period_us > 0.0 && dt_us > 0.0 &&
          n_points > 0) {
        const double span = dt_us * static_cast<double>(n_points);
        if (span < 16.0 * std::max(*from, *to) * period_us)
          sink.add("$.sweep.to",
                   "grid span below 16 * finesse * period at the sweep end");
      }
    }
  }

  if (root.contains("seed") &&
      (!root.at("seed").is_number_integer() || root.at("seed").get<std::int64_t>() < 0))
    sink.add("$.seed", "must be a non-negative integer");

  (void)alpha_per_cm;
  return issues;
}

// Validated parse into internal units. Throws std::invalid_argument carrying
// every issue when the document is bad.
inline ScenarioConfig parse_config(const nlohmann::json& root) {
  const auto issues = validate_config(root);
  if (!issues.empty()) {
    std::string msg = "invalid config:";
    for (const auto& i : issues) msg += "\n  " + i.field + ": " + i.message;
    throw std::invalid_argument(msg);
  }

  ScenarioConfig c;
  c.raw = root;

  const auto& m = root.at("medium");
  c.medium.alpha = per_cm_to_per_m(m.at("alpha_per_cm").get<double>());
  c.medium.length = cm_to_m(m.at("length_cm").get<double>());
  c.medium.gamma = khz_to_angular(m.at("gamma_khz").get<double>());

  const auto& p = root.at("profile");
  c.profile.kind = p.at("kind").get<std::string>();
  if (c.profile.kind == "flat") {
    c.profile.level = p.value("level", 1.0);
  } else if (c.profile.kind == "hole") {
    c.profile.delta0 = mhz_to_angular(p.at("delta0_mhz").get<double>());
  } else if (c.profile.kind == "cosine_grating") {
    c.profile.period = us_to_s(p.at("period_us").get<double>());
  } else if (c.profile.kind == "lorentzian_comb") {
    c.profile.period = us_to_s(p.at("period_us").get<double>());
    if (p.contains("finesse")) {
      c.profile.finesse = p.at("finesse").get<double>();
      c.profile.tooth_hwhm = pi / (c.profile.finesse * c.profile.period);
    } else {
      c.profile.tooth_hwhm = mhz_to_angular(p.at("tooth_hwhm_mhz").get<double>());
      c.profile.finesse = pi / (c.profile.tooth_hwhm * c.profile.period);
    }
  } else {
    c.profile.csv_path = p.at("csv_path").get<std::string>();
    if (p.contains("period_us")) c.profile.period = us_to_s(p.at("period_us").get<double>());
  }

  const auto& pu = root.at("pulse");
  c.pulse.rms = us_to_s(pu.at("rms_us").get<double>());
  c.pulse.center = us_to_s(pu.at("center_us").get<double>());
  const auto& g = pu.at("grid");
  c.pulse.grid.n_points = g.at("n_points").get<std::size_t>();
  c.pulse.grid.dt = us_to_s(g.at("dt_us").get<double>());
  c.pulse.grid.t0 = us_to_s(g.value("t0_us", 0.0));

  if (root.contains("protocol")) {
    const auto& pr = root.at("protocol");
    ProtocolSpec spec;
    spec.scheme = pr.at("scheme").get<std::string>() == "comb_echo"
                      ? Scheme::comb_echo
                      : Scheme::hole_slow_light;
    if (pr.contains("raman1_us")) {
      spec.raman1 = us_to_s(pr.at("raman1_us").get<double>());
      spec.raman2 = us_to_s(pr.at("raman2_us").get<double>());
    }
    if (pr.contains("spin_lifetime_us"))
      spec.spin_lifetime = us_to_s(pr.at("spin_lifetime_us").get<double>());
    spec.transfer_efficiency = pr.value("transfer_efficiency", 1.0);
    if (pr.value("direction", "forward") == std::string("backward"))
      spec.direction = Direction::backward;
    c.protocol = spec;
  }

  if (root.contains("sweep")) {
    const auto& sw = root.at("sweep");
    SweepSpec spec;
    spec.parameter = sw.at("parameter").get<std::string>();
    spec.from = sw.at("from").get<double>();
    spec.to = sw.at("to").get<double>();
    spec.steps = sw.at("steps").get<std::size_t>();
    spec.log_scale = sw.value("scale", "linear") == std::string("log");
    c.sweep = spec;
  }

  c.seed = root.value("seed", std::uint64_t{0});
  return c;
}

// Reads a config file. A manifest produced by an earlier run (an object with
// a "config" member) unwraps to the embedded config, so results reproduce
// from their own provenance record.
inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);  // throws nlohmann parse_error
  if (j.is_object() && j.contains("config")) return j.at("config");
  return j;
}

}  // namespace lightstore

#endif
