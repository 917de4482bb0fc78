#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eitpt/constants.hpp"
#include "eitpt/errors.hpp"
#include "eitpt/perturbation.hpp"
#include "eitpt/profiles.hpp"

namespace eitpt {

inline double diffraction_length(double omega_p, double R) {
  return 2.0 * omega_p * R * R / kSpeedOfLight;
}

// Dimensionless complex lattice potential
//   V(xi) = (g12 + g12 sin 2xi) + g13 cos^2 xi + K0,      period pi.
// Carries its defining coefficients; samples are derived from them.
struct PotentialSpec {
  Complex g12{}, g13{}, K0{};
  double Ldiff = 0;  // cm
  double R = 0;      // cm
  std::string preset_name;
  std::vector<double> xi;
  std::vector<Complex> V;

  Complex value(double x) const {
    double c = std::cos(x);
    return g12 * (1.0 + std::sin(2.0 * x)) + g13 * (c * c) + K0;
  }

  void resample() {
    V.resize(xi.size());
    for (size_t i = 0; i < xi.size(); ++i) V[i] = value(xi[i]);
  }

  std::vector<Complex> sample_on(const std::vector<double>& grid) const {
    std::vector<Complex> out(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) out[i] = value(grid[i]);
    return out;
  }

  // Fourier content: V = c0 + c_plus e^{+2 i xi} + c_minus e^{-2 i xi}.
  struct Harmonics {
    Complex c0, c_plus, c_minus;
    Complex cos2_coeff() const { return c_plus + c_minus; }
    Complex sin2_coeff() const { return Complex(0, 1) * (c_plus - c_minus); }
  };
  Harmonics harmonics() const {
    return {g12 + K0 + 0.5 * g13, 0.25 * g13 - Complex(0, 0.5) * g12,
            0.25 * g13 + Complex(0, 0.5) * g12};
  }
};

// Dimensional potential of the probe envelope equation, sampled on the
// profile grid [cm^-1]: alpha12 |Omega_a(x)|^2 + alpha13 |Es(x)|^2 + K.
inline std::vector<Complex> dimensional_potential(const ThirdOrderCoeffs& coeffs,
                                                  const AtomParams& atom,
                                                  const std::vector<double>& ea_samples,
                                                  const std::vector<double>& es_samples,
                                                  Complex K) {
  if (ea_samples.size() != es_samples.size())
    throw GridMismatch("assisted and Stark profiles have different sample counts");
  const double rabi_per_field = atom.p24 / kHbar;  // |Omega_a| = p24 Ea / hbar
  std::vector<Complex> vt(ea_samples.size());
  for (size_t i = 0; i < vt.size(); ++i) {
    double oa2 = std::norm(rabi_per_field * ea_samples[i]);
    vt[i] = coeffs.alpha12 * oa2 + coeffs.alpha13 * es_samples[i] * es_samples[i] + K;
  }
  return vt;
}

inline PotentialSpec nondimensionalize(const ThirdOrderCoeffs& coeffs, const AtomParams& atom,
                                       const FieldProfiles& profiles, Complex K,
                                       const std::string& preset_name = "") {
  if (!(profiles.R > 0)) throw Error("lattice scale R must be > 0");
  PotentialSpec spec;
  spec.Ldiff = diffraction_length(atom.omega_p, profiles.R);
  spec.R = profiles.R;
  spec.preset_name = preset_name;
  const double oa0 = atom.p24 * profiles.Ea0 / kHbar;
  spec.g12 = coeffs.alpha12 * oa0 * oa0 * spec.Ldiff;
  spec.g13 = coeffs.alpha13 * profiles.Es0 * profiles.Es0 * spec.Ldiff;
  spec.K0 = K * spec.Ldiff;
  spec.xi = profiles.xi;
  spec.resample();
  return spec;
}

// Inverse of nondimensionalize on the sampled values (cm^-1).
inline std::vector<Complex> redimensionalize(const PotentialSpec& spec) {
  std::vector<Complex> vt(spec.V.size());
  for (size_t i = 0; i < vt.size(); ++i) vt[i] = spec.V[i] / spec.Ldiff;
  return vt;
}

namespace detail {
// Index of the reflected point -xi on a uniform endpoint-exclusive grid that
// is symmetric about 0 (modulo the periodic domain).
inline size_t reflect_index(size_t j, size_t n) { return j == 0 ? 0 : n - j; }

inline void require_symmetric_grid(const std::vector<double>& xi) {
  if (xi.size() < 2) throw GridMismatch("grid too small");
  const double dxi = xi[1] - xi[0];
  const double length = dxi * xi.size();
  if (std::abs(xi.front() + 0.5 * length) > 1e-9 * length)
    throw GridMismatch("grid is not symmetric about xi = 0");
  for (size_t i = 1; i < xi.size(); ++i)
    if (std::abs(xi[i] - xi[i - 1] - dxi) > 1e-9 * std::abs(dxi))
      throw GridMismatch("grid is not uniform");
}
}  // namespace detail

// max_xi |V(xi) - conj(V(-xi))| on the sampled grid; zero iff the potential
// is PT symmetric there.
inline double pt_residual(const PotentialSpec& spec) {
  detail::require_symmetric_grid(spec.xi);
  double worst = 0;
  const size_t n = spec.V.size();
  for (size_t j = 0; j < n; ++j) {
    Complex diff = spec.V[j] - std::conj(spec.V[detail::reflect_index(j, n)]);
    worst = std::max(worst, std::abs(diff));
  }
  return worst;
}

// Constant imaginary offset of V: 2 Im(g12) + Im(g13) + 2 Im(K0).
inline double gain_balance(const PotentialSpec& spec) {
  return 2.0 * spec.g12.imag() + spec.g13.imag() + 2.0 * spec.K0.imag();
}

struct GaugeResult {
  PotentialSpec gauged;
  Complex offset;  // removed xi-independent part
};

// Removes the xi-independent part of V (mean over one period); propagation
// with the gauged potential differs by exp(i * offset * s).
inline GaugeResult phase_gauge(const PotentialSpec& spec) {
  GaugeResult out;
  out.offset = spec.g12 + 0.5 * spec.g13 + spec.K0;
  out.gauged = spec;
  out.gauged.K0 -= out.offset;
  out.gauged.resample();
  return out;
}

struct Susceptibility {
  std::vector<Complex> chi;  // 2 c Vt / omega_p
  std::vector<Complex> n;    // 1 + c Vt / omega_p
};

inline Susceptibility susceptibility(const std::vector<Complex>& vt, const AtomParams& atom) {
  Susceptibility s;
  s.chi.resize(vt.size());
  s.n.resize(vt.size());
  const double f = kSpeedOfLight / atom.omega_p;
  for (size_t i = 0; i < vt.size(); ++i) {
    s.chi[i] = 2.0 * f * vt[i];
    s.n[i] = 1.0 + f * vt[i];
  }
  return s;
}

}  // namespace eitpt
