// Command-line front end: parameter presets, dispersion scans, potential
// design, split-step propagation, and Floquet-Bloch spectra as CSV tables.

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eitpt/eitpt.hpp"

namespace {

using namespace eitpt;

Preset load_preset(const std::string& name, const std::string& config_path) {
  Preset preset = preset_by_name(name);
  if (!config_path.empty()) apply_overrides(preset, parse_toml_file(config_path));
  return preset;
}

int cmd_dispersion_scan(const std::string& preset_name, const std::string& config_path,
                        const std::string& out, const std::string& variants_arg, int points,
                        double range) {
  Preset preset = load_preset(preset_name, config_path);
  const double gamma3 = preset.atom.Gamma3() / 2.0;
  std::vector<ImkVariant> variants = fig2_variants(gamma3);
  if (!variants_arg.empty()) {
    std::vector<ImkVariant> picked;
    std::stringstream ss(variants_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto it = std::find_if(variants.begin(), variants.end(),
                             [&](const ImkVariant& v) { return v.id == tok; });
      if (it == variants.end()) throw ConfigError("unknown variant '" + tok + "'");
      picked.push_back(*it);
    }
    variants = picked;
  }
  auto rows = imk_scan(preset.atom, preset.drives.detunings, linspace(-range, range, points),
                       variants);
  write_imk_csv(out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

int cmd_design_potential(const std::string& preset_name, const std::string& config_path,
                         const std::string& out, const std::string& knob_arg, int periods,
                         int samples) {
  Preset preset = load_preset(preset_name, config_path);
  DesignResult design = run_design(preset, periods, samples);

  nlohmann::json extra;
  extra["residual"] = design.residual;
  extra["balance"] = design.balance;
  extra["K_per_cm"] = {{"re", design.coeffs.fo.K.real()}, {"im", design.coeffs.fo.K.imag()}};
  extra["closed_form_rel_discrepancy_F"] = design.coeffs.max_rel_discrepancy_F;
  extra["closed_form_rel_discrepancy_G"] = design.coeffs.max_rel_discrepancy_G;

  PotentialSpec to_write = design.spec;
  if (!knob_arg.empty()) {
    BalanceKnob knob;
    if (knob_arg == "kappa13") knob = BalanceKnob::kappa13;
    else if (knob_arg == "gamma31") knob = BalanceKnob::gamma31;
    else if (knob_arg == "ea0") knob = BalanceKnob::ea0;
    else throw ConfigError("unknown balance knob '" + knob_arg + "'");
    TuneResult tuned = tune_pump(preset, knob);
    extra["balance_knob"] = knob_arg;
    extra["balance_knob_value"] = tuned.knob_value;
    extra["balance_after_tuning"] = tuned.balance_after;
    to_write = tuned.tuned;
    to_write.preset_name = preset.name;
  }
  write_potential_csv(out, to_write, extra);
  std::cout << "g12 = " << to_write.g12 << "  g13 = " << to_write.g13
            << "  K0 = " << to_write.K0 << "\nresidual = " << design.residual
            << "  balance = " << design.balance << "\nwrote " << out << "\n";
  return 0;
}

BeamState parse_input_beam(const std::string& arg, int periods, size_t points) {
  auto colon = arg.find(':');
  std::string kind = arg.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(arg.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError("bad input parameter '" + tok + "'");
      params[tok.substr(0, eq)] = parse_double(tok.substr(eq + 1));
    }
  }
  if (kind == "gaussian") {
    double width = params.count("width") ? params["width"] : 2.0;
    double amp = params.count("amplitude") ? params["amplitude"] : 1.0;
    if (!(width > 0)) throw ConfigError("gaussian width must be > 0");
    return gaussian_beam(periods, points, width, amp);
  }
  if (kind == "planewave") {
    double k = params.count("k") ? params["k"] : 0.0;
    double amp = params.count("amplitude") ? params["amplitude"] : 1.0;
    return plane_wave(periods, points, k, amp);
  }
  throw ConfigError("unknown input kind '" + kind + "' (gaussian or planewave)");
}

int cmd_propagate(const std::string& potential_path, const std::string& input_arg, int steps,
                  double ds, const std::string& out, int periods, size_t points,
                  const std::string& snapshot_arg, const std::string& snapshot_prefix) {
  if (!(ds > 0)) throw ConfigError("--ds must be > 0");
  if (steps <= 0) throw ConfigError("--steps must be > 0");
  PotentialSpec spec = read_potential_csv(potential_path);
  BeamState beam = parse_input_beam(input_arg, periods, points);
  std::vector<Complex> V = spec.sample_on(beam.grid());

  std::vector<std::pair<int, std::string>> snap_steps;  // (step, label from the request)
  if (!snapshot_arg.empty()) {
    std::stringstream ss(snapshot_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      double s = parse_double(tok);
      int step = int(std::lround(s / ds));
      if (step < 0 || step > steps)
        throw ConfigError("snapshot s = " + tok + " outside the propagation range");
      snap_steps.push_back({step, tok});
    }
    std::sort(snap_steps.begin(), snap_steps.end());
  }

  PropagationLog full_log;
  int done = 0;
  auto append_log = [&](const PropagationLog& log, bool first) {
    size_t skip = first ? 0 : 1;  // segment logs repeat the joining record
    full_log.records.insert(full_log.records.end(), log.records.begin() + skip,
                            log.records.end());
    full_log.max_boundary_amplitude =
        std::max(full_log.max_boundary_amplitude, log.max_boundary_amplitude);
    full_log.boundary_guard_exceeded |= log.boundary_guard_exceeded;
    for (const auto& w : log.warnings) full_log.warnings.push_back(w);
  };
  for (const auto& [target, label] : snap_steps) {
    if (target > done) {
      auto [next, log] = split_step(beam, V, ds, target - done);
      append_log(log, done == 0);
      beam = std::move(next);
      done = target;
    }
    write_snapshot_csv(snapshot_prefix + "_s" + label + ".csv", beam);
  }
  if (done < steps) {
    auto [next, log] = split_step(beam, V, ds, steps - done);
    append_log(log, done == 0);
    beam = std::move(next);
  }
  write_trajectory_csv(out, full_log);
  for (const auto& w : full_log.warnings) std::cerr << "warning: " << w << "\n";
  if (full_log.boundary_guard_exceeded)
    std::cerr << "warning: boundary amplitude guard exceeded (max relative edge amplitude "
              << full_log.max_boundary_amplitude << ")\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_bands(const std::string& potential_path, const std::string& out, int n_pw, int n_q,
              int n_bands) {
  PotentialSpec spec = read_potential_csv(potential_path);
  BandStructure bs = bloch_bands(spec, default_q_grid(n_q), n_pw, BandOptions{n_bands});
  write_bands_csv(out, bs);
  std::cout << "max |Im beta| over the exported window: " << bs.max_abs_imag() << "\nwrote "
            << out << "\n";
  return 0;
}

int cmd_pt_threshold(const std::string& potential_path, const std::string& out, double w_min,
                     double w_max, double w_step) {
  PotentialSpec spec = read_potential_csv(potential_path);
  std::vector<double> w_grid;
  for (double w = w_min; w <= w_max + 1e-12; w += w_step) w_grid.push_back(w);
  ThresholdResult result = pt_threshold(spec.harmonics(), w_grid);
  write_threshold_csv(out, result);
  std::cout << "W_c = " << result.W_c << "\nwrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric lattice engineering in a four-level EIT medium"};
  app.require_subcommand(1);

  std::string preset = "design", config, out, variants, knob;
  int scan_points = 481;
  double scan_range = 6.0;

  auto* scan = app.add_subcommand("dispersion-scan", "Im K vs Delta3/gamma3 table");
  scan->add_option("--preset", preset, "preset name (fig2 or design)");
  scan->add_option("--config", config, "TOML override file");
  scan->add_option("--out", out, "output CSV")->required();
  scan->add_option("--variants", variants, "comma list of variant ids (default all)");
  scan->add_option("--points", scan_points, "grid points")->check(CLI::PositiveNumber);
  scan->add_option("--range", scan_range, "half-range in Delta3/gamma3");

  std::string d_preset = "design", d_config, d_out, d_knob;
  int d_periods = 1, d_samples = 512;
  auto* design = app.add_subcommand("design-potential", "build the complex lattice potential");
  design->add_option("--preset", d_preset, "preset name");
  design->add_option("--config", d_config, "TOML override file");
  design->add_option("--out", d_out, "output potential CSV")->required();
  design->add_option("--balance-knob", d_knob, "kappa13|gamma31|ea0");
  design->add_option("--periods", d_periods, "pi periods to sample")->check(CLI::PositiveNumber);
  design->add_option("--samples", d_samples, "samples per period")->check(CLI::PositiveNumber);

  std::string p_potential, p_input = "gaussian:width=2", p_out, p_snap, p_snap_prefix = "snapshot";
  int p_steps = 1000, p_periods = 8;
  size_t p_points = 1024;
  double p_ds = 1e-3;
  auto* prop = app.add_subcommand("propagate", "split-step propagation of a probe envelope");
  prop->add_option("--potential", p_potential, "potential CSV")->required();
  prop->add_option("--input", p_input, "gaussian:width=W | planewave:k=K");
  prop->add_option("--steps", p_steps, "number of steps");
  prop->add_option("--ds", p_ds, "step size in s");
  prop->add_option("--out", p_out, "trajectory CSV")->required();
  prop->add_option("--periods", p_periods, "domain size in pi periods");
  prop->add_option("--points", p_points, "grid points (power of two)");
  prop->add_option("--snapshot-at", p_snap, "comma list of s values to dump");
  prop->add_option("--snapshot-prefix", p_snap_prefix, "snapshot file prefix");

  std::string b_potential, b_out;
  int b_pw = 65, b_q = 64, b_bands = 16;
  auto* bands = app.add_subcommand("bands", "Floquet-Bloch propagation constants");
  bands->add_option("--potential", b_potential, "potential CSV")->required();
  bands->add_option("--out", b_out, "bands CSV")->required();
  bands->add_option("--plane-waves", b_pw, "plane waves (odd, >= 33)");
  bands->add_option("--q-points", b_q, "quasimomentum samples");
  bands->add_option("--bands", b_bands, "exported bands");

  std::string t_potential, t_out;
  double t_wmin = 0.1, t_wmax = 2.0, t_wstep = 0.05;
  auto* thresh = app.add_subcommand("pt-threshold", "PT-breaking threshold of the Im-scaled family");
  thresh->add_option("--potential", t_potential, "potential CSV")->required();
  thresh->add_option("--out", t_out, "scan CSV")->required();
  thresh->add_option("--w-min", t_wmin, "scan start");
  thresh->add_option("--w-max", t_wmax, "scan end");
  thresh->add_option("--w-step", t_wstep, "scan step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (scan->parsed())
      return cmd_dispersion_scan(preset, config, out, variants, scan_points, scan_range);
    if (design->parsed())
      return cmd_design_potential(d_preset, d_config, d_out, d_knob, d_periods, d_samples);
    if (prop->parsed())
      return cmd_propagate(p_potential, p_input, p_steps, p_ds, p_out, p_periods, p_points,
                           p_snap, p_snap_prefix);
    if (bands->parsed()) return cmd_bands(b_potential, b_out, b_pw, b_q, b_bands);
    if (thresh->parsed()) return cmd_pt_threshold(t_potential, t_out, t_wmin, t_wmax, t_wstep);
  } catch (const PumpRequired& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateSteadyState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PoleAtResonance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoBalancePoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoThresholdFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
