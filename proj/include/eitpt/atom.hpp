#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "eitpt/constants.hpp"
#include "eitpt/errors.hpp"

namespace eitpt {

using Complex = std::complex<double>;

// Four-level N scheme: |1>,|2> ground hyperfine states, |3>,|4> excited.
// Probe couples 1-3, control 2-3, assisted 2-4; incoherent pump 1->3.
// All level/pair arrays are 1-based (index 0 unused) to match the level labels.
struct AtomParams {
  double Gamma13 = 0;  // |3> -> |1> population decay [s^-1]
  double Gamma23 = 0;  // |3> -> |2>
  double Gamma24 = 0;  // |4> -> |2>
  double Gamma31 = 0;  // incoherent pump |1> -> |3> [s^-1]
  std::array<std::array<double, 5>, 5> gamma_dph{};  // collisional dephasing, symmetric
  std::array<double, 5> alpha{};  // scalar polarizabilities [J cm^2 / V^2]
  double p13 = 0;      // dipole moments [C cm]
  double p24 = 0;
  double kappa13 = 0;  // probe coupling constant [cm^-1 s^-1]
  double omega_p = 0;  // probe angular frequency [s^-1]

  double Gamma3() const { return Gamma13 + Gamma23; }
  double Gamma4() const { return Gamma24; }

  // Gamma_l = sum of decay rates out of level l.
  double level_decay(int l) const {
    switch (l) {
      case 1: case 2: return 0.0;
      case 3: return Gamma3();
      case 4: return Gamma4();
      default: throw std::out_of_range("level index");
    }
  }

  // Coherence decay gamma_jl = (Gamma_j + Gamma_l)/2 + gamma_dph;
  // the pump broadens only the 3-1 coherence (extra Gamma31/2).
  double gamma(int j, int l) const {
    double g = 0.5 * (level_decay(j) + level_decay(l)) + gamma_dph[j][l];
    if ((j == 3 && l == 1) || (j == 1 && l == 3)) g += 0.5 * Gamma31;
    return g;
  }

  void set_gamma_dph(int j, int l, double value) {
    gamma_dph[j][l] = value;
    gamma_dph[l][j] = value;
  }

  double stark_shift(int j, double es) const { return alpha[j] * es * es / (2.0 * kHbar); }

  void validate() const {
    if (Gamma13 < 0 || Gamma23 < 0 || Gamma24 < 0 || Gamma31 < 0)
      throw Error("decay/pump rates must be >= 0");
    if (kappa13 <= 0) throw Error("kappa13 must be > 0");
    if (omega_p <= 0) throw Error("omega_p must be > 0");
    for (int j = 1; j <= 4; ++j)
      for (int l = 1; l <= 4; ++l)
        if (gamma_dph[j][l] < 0 || gamma_dph[j][l] != gamma_dph[l][j])
          throw Error("gamma_dph must be symmetric and >= 0");
  }
};

struct Detunings {
  std::array<double, 5> delta{};  // laser detunings [s^-1], 1-based

  // Stark-shifted detunings Delta'_j = Delta_j + alpha_j |Es|^2 / (2 hbar).
  std::array<double, 5> shifted(const AtomParams& atom, double es) const {
    if (!std::isfinite(es)) throw Error("Stark field must be finite");
    std::array<double, 5> out{};
    for (int j = 1; j <= 4; ++j) out[j] = delta[j] + atom.stark_shift(j, es);
    return out;
  }
};

inline std::array<double, 5> stark_detunings(const Detunings& det, const AtomParams& atom,
                                             double es) {
  return det.shifted(atom, es);
}

// Complex transition denominators d_jl = Delta'_j - Delta'_l + i gamma_jl.
struct ComplexDij {
  std::array<std::array<Complex, 5>, 5> d{};

  Complex operator()(int j, int l) const { return d[j][l]; }

  static ComplexDij build(const AtomParams& atom, const Detunings& det, double es) {
    ComplexDij out;
    auto dp = det.shifted(atom, es);
    for (int j = 1; j <= 4; ++j)
      for (int l = 1; l <= 4; ++l)
        if (j != l) out.d[j][l] = Complex(dp[j] - dp[l], atom.gamma(j, l));
    return out;
  }

  // Zeroth-order part (no Stark field).
  static ComplexDij zero_order(const AtomParams& atom, const Detunings& det) {
    return build(atom, det, 0.0);
  }

  // Order-eps^2 Stark part d2_jl = (alpha_j - alpha_l) |Es|^2 / (2 hbar).
  static double stark_part(const AtomParams& atom, int j, int l, double es) {
    return (atom.alpha[j] - atom.alpha[l]) * es * es / (2.0 * kHbar);
  }
};

// Point values of the drive fields. Transverse profiles are sampled into one
// of these per grid point (see FieldProfiles).
struct DriveConfig {
  Complex omega_p{};  // probe half Rabi frequency [s^-1]
  Complex omega_c{};  // control
  Complex omega_a{};  // assisted
  double es = 0;      // Stark field amplitude [V/cm]
  Detunings detunings{};

  DriveConfig with_probe(Complex op) const {
    DriveConfig d = *this;
    d.omega_p = op;
    return d;
  }
};

struct DensityMatrix {
  Eigen::Matrix4cd sigma = Eigen::Matrix4cd::Zero();

  Complex operator()(int j, int l) const { return sigma(j - 1, l - 1); }
  Complex& operator()(int j, int l) { return sigma(j - 1, l - 1); }

  static DensityMatrix ground() {
    DensityMatrix d;
    d.sigma(0, 0) = 1.0;
    return d;
  }

  double trace_real() const { return sigma.trace().real(); }

  double hermiticity_error() const { return (sigma - sigma.adjoint()).cwiseAbs().maxCoeff(); }

  double min_population_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (sigma + sigma.adjoint()));
    return es.eigenvalues().minCoeff();
  }

  bool is_physical(double tol = 1e-9) const {
    return hermiticity_error() <= tol && std::abs(trace_real() - 1.0) <= tol &&
           min_population_eigenvalue() >= -1e-10;
  }
};

}  // namespace eitpt
