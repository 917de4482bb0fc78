#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "eitpt/design.hpp"
#include "eitpt/parallel.hpp"
#include "eitpt/propagator.hpp"

namespace eitpt {

// Nonperturbative co-propagation of the physical probe envelope:
//   i dOmega_p/dz + c/(2 omega_p) d^2 Omega_p/dx^2 + kappa13 sigma31 = 0,
// with sigma31 taken from the stationary Bloch solution at the local drives
// (adiabatic response per z slice). Strang stepping: half source, full
// diffraction, half source. The source is applied as the local multiplier
// exp(i kappa13 sigma31 / Omega_p dz); beam tails fall back to the
// precomputed weak-probe response of the same column.
struct FullMbOptions {
  double ds = 1e-3;         // step in z / Ldiff
  double probe_floor = 1e-9;  // |Omega_p| / peak below which tails use the linear response
  double warn_epsilon = 0.1;  // |Omega_p| / |Omega_c| warning threshold
};

struct FullMbReport {
  BeamState final_mb;      // Omega_p(x) after propagation [s^-1 units]
  BeamState final_eq12;    // envelope-equation prediction with the supplied potential
  double rel_l2_deviation = 0;        // MB vs supplied-potential prediction
  double rel_l2_deviation_local = 0;  // MB vs local-linear-response potential (diagnostic)
  std::vector<Complex> local_potential;  // K_local(xi) * Ldiff, dimensionless
  std::vector<std::string> warnings;
};

inline FullMbReport full_mb_propagate(const BeamState& probe0, const Preset& preset,
                                      const PotentialSpec& spec, double s_end,
                                      const FullMbOptions& opts = {}) {
  const AtomParams& atom = preset.atom;
  const size_t n = probe0.size();
  FullMbReport report;

  double peak0 = 0;
  for (const Complex& v : probe0.u) peak0 = std::max(peak0, std::abs(v));
  const double eps = peak0 / std::abs(preset.drives.omega_c);
  if (eps > opts.warn_epsilon)
    report.warnings.push_back("probe amplitude beyond the weak-field regime (epsilon = " +
                              std::to_string(eps) + ")");

  // Per-column drives and the weak-probe (linear) response.
  std::vector<DriveConfig> columns(n);
  std::vector<Complex> k_linear(n);
  {
    FieldProfiles prof;
    prof.Ea0 = preset.Ea0;
    prof.Es0 = preset.Es0;
    prof.R = preset.R;
    const double rabi_per_field = atom.p24 / kHbar;
    const Complex probe_ref = 1e-6 * std::abs(preset.drives.omega_c);
    parallel_for(n, [&](size_t j) {
      double x = probe0.xi(j);
      DriveConfig dr = preset.drives;
      dr.omega_a = rabi_per_field * prof.ea(x);
      dr.es = prof.es(x);
      columns[j] = dr;
      DensityMatrix ss = steady_state(dr.with_probe(probe_ref), atom);
      k_linear[j] = atom.kappa13 * ss(3, 1) / probe_ref;
    });
  }
  const double ldiff = diffraction_length(atom.omega_p, preset.R);
  report.local_potential.resize(n);
  for (size_t j = 0; j < n; ++j) report.local_potential[j] = k_linear[j] * ldiff;

  // March the Maxwell-Bloch system in z.
  const int n_steps = int(std::lround(s_end / opts.ds));
  const double dz = s_end * ldiff / double(n_steps);
  BeamState mb = probe0;
  {
    std::vector<Complex> diffraction(n);
    const double dk = 2.0 * kPi / (mb.length() * preset.R);  // physical wavenumber
    for (size_t j = 0; j < n; ++j) {
      double m = (j <= n / 2) ? double(j) : double(j) - double(n);
      double kx = m * dk;
      diffraction[j] =
          std::exp(Complex(0, -kSpeedOfLight / (2.0 * atom.omega_p) * kx * kx * dz));
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> spec_buf(n), k_eff(n);
    auto source_half = [&](double step_peak) {
      parallel_for(n, [&](size_t j) {
        Complex op = mb.u[j];
        if (std::abs(op) < opts.probe_floor * step_peak) {
          k_eff[j] = k_linear[j];
        } else {
          DensityMatrix ss = steady_state(columns[j].with_probe(op), atom);
          k_eff[j] = atom.kappa13 * ss(3, 1) / op;
        }
        mb.u[j] *= std::exp(Complex(0, 1) * k_eff[j] * (dz / 2.0));
      });
    };
    for (int step = 0; step < n_steps; ++step) {
      double peak = 0;
      for (const Complex& v : mb.u) peak = std::max(peak, std::abs(v));
      if (!std::isfinite(peak)) throw NumericalBlowup(step);
      source_half(peak);
      fft.fwd(spec_buf, mb.u);
      for (size_t j = 0; j < n; ++j) spec_buf[j] *= diffraction[j];
      fft.inv(mb.u, spec_buf);
      source_half(peak);
      mb.s += dz / ldiff;
    }
  }
  report.final_mb = mb;

  // Envelope-equation predictions on the same grid.
  auto run_eq12 = [&](const std::vector<Complex>& V) {
    BeamState u0 = probe0;
    SplitStepOptions sso;
    sso.log_every = n_steps;  // end-point diagnostics only
    return split_step(u0, V, s_end / double(n_steps), n_steps, sso).first;
  };
  std::vector<Complex> v_design = spec.sample_on(probe0.grid());
  BeamState eq12 = run_eq12(v_design);
  BeamState eq12_local = run_eq12(report.local_potential);
  report.final_eq12 = eq12;

  auto rel_l2 = [&](const BeamState& a, const BeamState& b) {
    double num = 0, den = 0;
    for (size_t j = 0; j < n; ++j) {
      num += std::norm(a.u[j] - b.u[j]);
      den += std::norm(b.u[j]);
    }
    return std::sqrt(num / den);
  };
  report.rel_l2_deviation = rel_l2(mb, eq12);
  report.rel_l2_deviation_local = rel_l2(mb, eq12_local);
  return report;
}

}  // namespace eitpt
