#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "eitpt/constants.hpp"
#include "eitpt/errors.hpp"
#include "eitpt/potential.hpp"

namespace eitpt {

// Probe envelope u(xi) on a uniform periodic grid covering an integer number
// of pi-periods, symmetric about xi = 0, endpoint-exclusive.
struct BeamState {
  std::vector<Complex> u;
  double s = 0;      // propagation coordinate (dimensionless)
  double xi0 = 0;    // first sample
  double dxi = 0;    // spacing

  size_t size() const { return u.size(); }
  double length() const { return dxi * double(u.size()); }
  double xi(size_t j) const { return xi0 + double(j) * dxi; }

  std::vector<double> grid() const {
    std::vector<double> g(u.size());
    for (size_t j = 0; j < g.size(); ++j) g[j] = xi(j);
    return g;
  }
};

inline bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline BeamState make_beam_grid(int periods, size_t n_points) {
  if (!is_power_of_two(n_points)) throw GridMismatch("grid size must be a power of two");
  BeamState b;
  b.u.assign(n_points, Complex(0));
  b.dxi = periods * kPi / double(n_points);
  b.xi0 = -0.5 * periods * kPi;
  return b;
}

inline BeamState gaussian_beam(int periods, size_t n_points, double width,
                               double amplitude = 1.0) {
  BeamState b = make_beam_grid(periods, n_points);
  for (size_t j = 0; j < b.size(); ++j) {
    double x = b.xi(j);
    b.u[j] = amplitude * std::exp(-x * x / (2.0 * width * width));
  }
  return b;
}

// Plane wave e^{i k xi}; k snaps to the nearest wavenumber representable on
// the periodic domain.
inline BeamState plane_wave(int periods, size_t n_points, double k, double amplitude = 1.0) {
  BeamState b = make_beam_grid(periods, n_points);
  const double dk = 2.0 * kPi / b.length();
  const double ks = dk * std::round(k / dk);
  for (size_t j = 0; j < b.size(); ++j)
    b.u[j] = amplitude * std::exp(Complex(0, ks * b.xi(j)));
  return b;
}

inline double beam_power(const BeamState& b) {
  double p = 0;
  for (const Complex& v : b.u) p += std::norm(v);
  return p * b.dxi;
}

namespace detail {
inline void require_symmetric_beam(const BeamState& b) {
  if (std::abs(b.xi0 + 0.5 * b.length()) > 1e-9 * b.length())
    throw GridMismatch("beam grid is not symmetric about xi = 0");
}
}  // namespace detail

// Quasi-power Q = sum u(xi) conj(u(-xi)) dxi with exact grid reflection;
// conserved by Eq.-(12)-type propagation when V*(-xi) = V(xi).
inline Complex quasi_power(const BeamState& b) {
  detail::require_symmetric_beam(b);
  const size_t n = b.size();
  Complex q = 0;
  for (size_t j = 0; j < n; ++j) q += b.u[j] * std::conj(b.u[j == 0 ? 0 : n - j]);
  return q * b.dxi;
}

struct PropagationRecord {
  double s;
  double power;
  Complex quasi;
};

struct PropagationLog {
  std::vector<PropagationRecord> records;
  double max_boundary_amplitude = 0;  // max |u(edge)| / max |u| seen
  bool boundary_guard_exceeded = false;
  std::vector<std::string> warnings;
};

struct SplitStepOptions {
  int log_every = 1;
  double boundary_guard = 1e-8;
};

// Strang-symmetric spectral step for i u_s + u_xixi + V u = 0:
// half potential phase exp(i V ds / 2), full kinetic factor exp(-i k^2 ds)
// in Fourier space, half potential phase.
inline std::pair<BeamState, PropagationLog> split_step(const BeamState& input,
                                                       const std::vector<Complex>& V,
                                                       double ds, int n_steps,
                                                       const SplitStepOptions& opts = {}) {
  if (V.size() != input.size())
    throw GridMismatch("potential samples do not match the beam grid");
  if (!(ds > 0)) throw Error("ds must be > 0");

  BeamState beam = input;
  const size_t n = beam.size();
  PropagationLog log;

  double vmax = 0;
  for (const Complex& v : V) vmax = std::max(vmax, std::abs(v));
  if (vmax * ds > 0.5)
    log.warnings.push_back("ds exceeds the stability guideline |V| ds <= 0.5");

  std::vector<Complex> half_phase(n), kinetic(n);
  for (size_t j = 0; j < n; ++j) half_phase[j] = std::exp(Complex(0, 1) * V[j] * (ds / 2.0));
  const double dk = 2.0 * kPi / beam.length();
  for (size_t j = 0; j < n; ++j) {
    double m = (j <= n / 2) ? double(j) : double(j) - double(n);
    double k = m * dk;
    kinetic[j] = std::exp(Complex(0, -k * k * ds));
  }

  Eigen::FFT<double> fft;
  std::vector<Complex> spec(n);
  log.records.push_back({beam.s, beam_power(beam), quasi_power(beam)});

  for (int step = 0; step < n_steps; ++step) {
    for (size_t j = 0; j < n; ++j) beam.u[j] *= half_phase[j];
    fft.fwd(spec, beam.u);
    for (size_t j = 0; j < n; ++j) spec[j] *= kinetic[j];
    fft.inv(beam.u, spec);
    for (size_t j = 0; j < n; ++j) beam.u[j] *= half_phase[j];
    beam.s += ds;

    if ((step + 1) % opts.log_every == 0 || step + 1 == n_steps) {
      double peak = 0;
      for (const Complex& v : beam.u) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw NumericalBlowup(step + 1);
        peak = std::max(peak, std::abs(v));
      }
      double edge = std::abs(beam.u[0]);
      if (peak > 0) {
        log.max_boundary_amplitude = std::max(log.max_boundary_amplitude, edge / peak);
        if (edge / peak > opts.boundary_guard) log.boundary_guard_exceeded = true;
      }
      log.records.push_back({beam.s, beam_power(beam), quasi_power(beam)});
    }
  }
  return {std::move(beam), std::move(log)};
}

}  // namespace eitpt
