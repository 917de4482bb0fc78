#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "eitpt/errors.hpp"
#include "eitpt/perturbation.hpp"
#include "eitpt/potential.hpp"
#include "eitpt/propagator.hpp"
#include "eitpt/spectrum.hpp"

namespace eitpt {

// Shortest representation that round-trips the exact double.
inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("malformed number '" + s + "'");
  return v;
}

namespace detail {
inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}
}  // namespace detail

inline void write_imk_csv(const std::string& path, const std::vector<ImkRow>& rows) {
  auto f = detail::open_out(path);
  f << "delta3_over_gamma3,variant_id,re_K_per_cm,im_K_per_cm\n";
  for (const auto& r : rows)
    f << fmt_double(r.delta3_over_gamma3) << ',' << r.variant_id << ','
      << fmt_double(r.K.real()) << ',' << fmt_double(r.K.imag()) << '\n';
}

// Potential file: one '#'-prefixed JSON header line with the defining
// coefficients, then xi,re_V,im_V rows.
inline nlohmann::json potential_header_json(const PotentialSpec& spec) {
  nlohmann::json j;
  j["format"] = "eitpt-potential";
  j["preset"] = spec.preset_name;
  j["g12"] = {{"re", spec.g12.real()}, {"im", spec.g12.imag()}};
  j["g13"] = {{"re", spec.g13.real()}, {"im", spec.g13.imag()}};
  j["K0"] = {{"re", spec.K0.real()}, {"im", spec.K0.imag()}};
  j["Ldiff_cm"] = spec.Ldiff;
  j["R_cm"] = spec.R;
  j["period_xi"] = kPi;
  return j;
}

inline void write_potential_csv(const std::string& path, const PotentialSpec& spec,
                                const nlohmann::json& extra = {}) {
  auto f = detail::open_out(path);
  nlohmann::json j = potential_header_json(spec);
  if (!extra.is_null()) for (auto& [k, v] : extra.items()) j[k] = v;
  f << "# " << j.dump() << '\n';
  f << "xi,re_V,im_V\n";
  for (size_t i = 0; i < spec.xi.size(); ++i)
    f << fmt_double(spec.xi[i]) << ',' << fmt_double(spec.V[i].real()) << ','
      << fmt_double(spec.V[i].imag()) << '\n';
}

inline PotentialSpec read_potential_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line.rfind("# ", 0) != 0)
    throw Error("potential file '" + path + "' is missing the JSON header line");
  nlohmann::json j = nlohmann::json::parse(line.substr(2), nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "eitpt-potential")
    throw Error("potential file '" + path + "' has a malformed header");

  PotentialSpec spec;
  spec.preset_name = j.value("preset", "");
  spec.g12 = Complex(j["g12"]["re"].get<double>(), j["g12"]["im"].get<double>());
  spec.g13 = Complex(j["g13"]["re"].get<double>(), j["g13"]["im"].get<double>());
  spec.K0 = Complex(j["K0"]["re"].get<double>(), j["K0"]["im"].get<double>());
  spec.Ldiff = j["Ldiff_cm"].get<double>();
  spec.R = j["R_cm"].get<double>();

  if (!std::getline(f, line) || line != "xi,re_V,im_V")
    throw Error("potential file '" + path + "' is missing the column header");
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != 3) throw Error("malformed potential row '" + line + "'");
    spec.xi.push_back(parse_double(cells[0]));
    spec.V.push_back(Complex(parse_double(cells[1]), parse_double(cells[2])));
  }
  if (spec.xi.size() < 2) throw Error("potential file '" + path + "' has too few samples");

  // The sampled grid must cover an integer number of pi periods and agree
  // with the header coefficients.
  double dxi = spec.xi[1] - spec.xi[0];
  double length = dxi * double(spec.xi.size());
  double periods = length / kPi;
  if (std::abs(periods - std::round(periods)) > 1e-9 || std::round(periods) < 1)
    throw PeriodMismatch("sampled grid covers " + std::to_string(periods) +
                         " periods of pi");
  double vmax = 0, err = 0;
  for (size_t i = 0; i < spec.xi.size(); ++i) {
    vmax = std::max(vmax, std::abs(spec.V[i]));
    err = std::max(err, std::abs(spec.V[i] - spec.value(spec.xi[i])));
  }
  if (err > 1e-9 * std::max(vmax, 1.0))
    throw Error("potential samples disagree with the header coefficients by " +
                std::to_string(err));
  return spec;
}

inline void write_trajectory_csv(const std::string& path, const PropagationLog& log) {
  auto f = detail::open_out(path);
  f << "s,P,re_Q,im_Q\n";
  for (const auto& r : log.records)
    f << fmt_double(r.s) << ',' << fmt_double(r.power) << ',' << fmt_double(r.quasi.real())
      << ',' << fmt_double(r.quasi.imag()) << '\n';
}

inline void write_snapshot_csv(const std::string& path, const BeamState& beam) {
  auto f = detail::open_out(path);
  f << "xi,abs_u_sq,re_u,im_u\n";
  for (size_t j = 0; j < beam.size(); ++j)
    f << fmt_double(beam.xi(j)) << ',' << fmt_double(std::norm(beam.u[j])) << ','
      << fmt_double(beam.u[j].real()) << ',' << fmt_double(beam.u[j].imag()) << '\n';
}

inline void write_bands_csv(const std::string& path, const BandStructure& bs) {
  auto f = detail::open_out(path);
  f << "q,band_index,re_beta,im_beta\n";
  for (size_t iq = 0; iq < bs.q.size(); ++iq)
    for (int b = 0; b < bs.n_bands; ++b)
      f << fmt_double(bs.q[iq]) << ',' << b << ',' << fmt_double(bs.beta[iq][b].real())
        << ',' << fmt_double(bs.beta[iq][b].imag()) << '\n';
}

inline void write_threshold_csv(const std::string& path, const ThresholdResult& result) {
  auto f = detail::open_out(path);
  nlohmann::json j;
  j["format"] = "eitpt-threshold";
  j["W_c"] = result.W_c;
  f << "# " << j.dump() << '\n';
  f << "W,im_spread\n";
  for (const auto& r : result.scan)
    f << fmt_double(r.W) << ',' << fmt_double(r.im_spread) << '\n';
}

}  // namespace eitpt
