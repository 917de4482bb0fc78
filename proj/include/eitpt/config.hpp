#pragma once

#include <fstream>
#include <map>
#include <string>

#include "eitpt/design.hpp"
#include "eitpt/errors.hpp"
#include "eitpt/io.hpp"

namespace eitpt {

// Flat TOML subset: comments, [section] headers (organizational only),
// key = number | "string". One file per run, overriding preset fields.
inline std::map<std::string, std::string> parse_toml_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section at line " + std::to_string(lineno));
      continue;  // sections are organizational; keys are globally flat
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value at line " + std::to_string(lineno));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    kv[key] = value;
  }
  return kv;
}

inline void apply_overrides(Preset& preset, const std::map<std::string, std::string>& kv) {
  bool recalibrate = false;
  for (const auto& [key, value] : kv) {
    auto num = [&] { return parse_double(value); };
    if (key == "gamma13") preset.atom.Gamma13 = num();
    else if (key == "gamma23") preset.atom.Gamma23 = num();
    else if (key == "gamma24") preset.atom.Gamma24 = num();
    else if (key == "gamma31") preset.atom.Gamma31 = num();
    else if (key == "gamma_dph_21") preset.atom.set_gamma_dph(2, 1, num());
    else if (key == "gamma_dph_31") preset.atom.set_gamma_dph(3, 1, num());
    else if (key == "gamma_dph_32") preset.atom.set_gamma_dph(3, 2, num());
    else if (key == "gamma_dph_41") preset.atom.set_gamma_dph(4, 1, num());
    else if (key == "gamma_dph_42") preset.atom.set_gamma_dph(4, 2, num());
    else if (key == "gamma_dph_43") preset.atom.set_gamma_dph(4, 3, num());
    else if (key == "alpha1") preset.atom.alpha[1] = num();
    else if (key == "alpha2") preset.atom.alpha[2] = num();
    else if (key == "alpha3") preset.atom.alpha[3] = num();
    else if (key == "alpha4") preset.atom.alpha[4] = num();
    else if (key == "p13") preset.atom.p13 = num();
    else if (key == "p24") preset.atom.p24 = num();
    else if (key == "kappa13") preset.atom.kappa13 = num();
    else if (key == "omega_p") preset.atom.omega_p = num();
    else if (key == "omega_c") preset.drives.omega_c = Complex(num());
    else if (key == "delta1") preset.drives.detunings.delta[1] = num();
    else if (key == "delta2") preset.drives.detunings.delta[2] = num();
    else if (key == "delta3") preset.drives.detunings.delta[3] = num();
    else if (key == "delta4") preset.drives.detunings.delta[4] = num();
    else if (key == "ea0") preset.Ea0 = num();
    else if (key == "es0") preset.Es0 = num();
    else if (key == "r") preset.R = num();
    else if (key == "name") preset.name = value;
    else if (key == "recalibrate_alpha3") recalibrate = value == "true";
    else throw ConfigError("unknown key '" + key + "'");
  }
  preset.atom.validate();
  if (recalibrate)
    preset.atom.alpha[3] =
        preset.atom.alpha[1] +
        calibrated_alpha3(preset.atom, preset.drives, preset.Es0, preset.R);
}

}  // namespace eitpt
