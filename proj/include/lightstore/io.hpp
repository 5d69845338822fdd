#ifndef LIGHTSTORE_IO_HPP
#define LIGHTSTORE_IO_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightstore/echoes.hpp"
#include "lightstore/protocol.hpp"
#include "lightstore/pulse.hpp"
#include "lightstore/response.hpp"
#include "lightstore/slowlight.hpp"
#include "lightstore/spectra.hpp"
#include "lightstore/units.hpp"

// CSV emitters, one per result kind. Values go out with %.9g, times in us,
// frequencies in ordinary MHz; everything internal stays SI / rad/s until the
// last moment.

namespace lightstore {

namespace detail {

inline std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

inline void write_trace_csv(const std::string& path, const PulseEnvelope& pulse) {
  auto out = detail::open_csv(path);
  out << "t_us,re,im,intensity\n";
  for (std::size_t i = 0; i < pulse.size(); ++i) {
    const auto v = pulse.values[i];
    out << detail::g9(s_to_us(pulse.t(i))) << ',' << detail::g9(v.real()) << ','
        << detail::g9(v.imag()) << ',' << detail::g9(std::norm(v)) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

inline void write_transfer_csv(const std::string& path, const TransferFunction& tf) {
  auto out = detail::open_csv(path);
  out << "omega_mhz,re_H,im_H,abs2_H\n";
  for (std::size_t i = 0; i < tf.size(); ++i) {
    const auto v = tf.values[i];
    out << detail::g9(angular_to_mhz(tf.omega(i))) << ',' << detail::g9(v.real()) << ','
        << detail::g9(v.imag()) << ',' << detail::g9(std::norm(v)) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

inline void write_spectrum_csv(const std::string& path, const SpectralProfile& profile,
                               const MediumParams& medium, double delta_min,
                               double delta_max, std::size_t n) {
  if (!(delta_max > delta_min) || n < 2)
    throw std::domain_error("spectrum grid needs an increasing range and >= 2 points");
  auto out = detail::open_csv(path);
  out << "delta_mhz,g,optical_depth\n";
  const double step = (delta_max - delta_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = delta_min + step * static_cast<double>(i);
    const double g = eval_profile(profile, d);
    out << detail::g9(angular_to_mhz(d)) << ',' << detail::g9(g) << ','
        << detail::g9(medium.alphaL() * g) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

inline void write_delay_csv(const std::string& path, const std::vector<DelayProbe>& rows,
                            double alphaL) {
  auto out = detail::open_csv(path);
  out << "delta0_mhz,alphaL,delay_expected_us,delay_measured_us,transmission,distortion\n";
  for (const auto& r : rows) {
    out << detail::g9(angular_to_mhz(r.delta0)) << ',' << detail::g9(alphaL) << ','
        << detail::g9(s_to_us(r.expected_delay)) << ','
        << detail::g9(s_to_us(r.measured_delay)) << ',' << detail::g9(r.transmission)
        << ',' << detail::g9(r.distortion) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

// One efficiency comparison row; finesse 0 marks a grating (no comb teeth).
struct EfficiencyRow {
  double alphaL = 0.0;
  double finesse = 0.0;
  double eta_recursion = 0.0;
  double eta_closed = 0.0;
  double eta_detected = 0.0;
};

inline void write_efficiency_csv(const std::string& path,
                                 const std::vector<EfficiencyRow>& rows) {
  auto out = detail::open_csv(path);
  out << "alphaL,F,eta_recursion,eta_closed,eta_detected\n";
  for (const auto& r : rows) {
    out << detail::g9(r.alphaL) << ',' << detail::g9(r.finesse) << ','
        << detail::g9(r.eta_recursion) << ',' << detail::g9(r.eta_closed) << ','
        << detail::g9(r.eta_detected) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

inline void write_echo_csv(const std::string& path, const EchoReport& report) {
  auto out = detail::open_csv(path);
  out << "order,time_us,energy_ratio\n";
  for (const auto& w : report.windows) {
    out << w.order << ',' << detail::g9(s_to_us(w.centroid)) << ','
        << detail::g9(w.energy_ratio) << '\n';
  }
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

inline void write_protocol_csv(const std::string& path, Scheme scheme,
                               const RetrievalPrediction& p, double efficiency) {
  auto out = detail::open_csv(path);
  out << "scheme,retrieval_time_us,direction,amplitude_factor,efficiency\n";
  out << to_string(scheme) << ',' << detail::g9(s_to_us(p.retrieval_time)) << ','
      << to_string(p.direction) << ',' << detail::g9(p.amplitude_factor) << ','
      << detail::g9(efficiency) << '\n';
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

struct SampledData {
  std::vector<double> delta;  // rad/s
  std::vector<double> g;
};

// Input format: header line "delta_mhz,g", then one pair per line. Frequencies
// arrive in ordinary MHz and leave as rad/s.
inline SampledData load_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "' is empty");
  // Tolerate a UTF-8 BOM and stray whitespace in the header.
  std::string header;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) header += c;
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
  if (header != "delta_mhz,g")
    throw std::runtime_error("'" + path + "': expected header 'delta_mhz,g', got '" + line + "'");

  SampledData data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    std::istringstream row(line);
    double d = 0.0, g = 0.0;
    char comma = 0;
    if (!(row >> d >> comma >> g) || comma != ',')
      throw std::runtime_error("'" + path + "' line " + std::to_string(lineno) +
                               ": expected 'delta_mhz,g'");
    data.delta.push_back(mhz_to_angular(d));
    data.g.push_back(g);
  }
  if (data.delta.size() < 2)
    throw std::runtime_error("'" + path + "' holds fewer than 2 samples");
  return data;
}

}  // namespace lightstore

#endif
