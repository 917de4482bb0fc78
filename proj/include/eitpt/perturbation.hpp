#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eitpt/bloch.hpp"
#include "eitpt/parallel.hpp"

namespace eitpt {

// Base state at probe = assisted = Stark = 0: populations in |1>,|2>,|3> and
// the 3-2 coherence sustained by control + pump. The linear solve is
// authoritative; X1, X2 are the closed-form auxiliaries for cross-reporting,
// with signs fixed so that sigma33 = X2 and sigma22 = (1 + X1) X2.
struct ZerothOrder {
  DensityMatrix sigma0;
  double X1 = 0;
  double X2 = 0;
};

inline ZerothOrder zeroth_order(const DriveConfig& dr, const AtomParams& atom) {
  DriveConfig base = dr;
  base.omega_p = base.omega_a = Complex(0);
  base.es = 0.0;

  ZerothOrder out;
  out.sigma0 = steady_state(base, atom);
  if (std::abs(dr.omega_c) > 0) {
    const ComplexDij d0 = ComplexDij::zero_order(atom, dr.detunings);
    const double oc2 = std::norm(dr.omega_c);
    out.X1 = atom.Gamma23 * std::norm(d0(3, 2)) / (2.0 * oc2 * atom.gamma(3, 2));
    out.X2 = atom.Gamma31 / (atom.Gamma13 + atom.Gamma31 * (2.0 + out.X1));
  } else {
    out.X1 = std::numeric_limits<double>::infinity();
    out.X2 = 0.0;
  }
  return out;
}

struct FirstOrder {
  Complex K;        // linear dispersion [cm^-1]
  Complex alpha21;  // sigma21 per probe Rabi frequency [dimensionless]
  Complex alpha31;  // = K / kappa13 [s]
  Complex alpha42;  // sigma42 per assisted Rabi frequency
  Complex alpha43;
  Complex D1, D2;   // [s^-2]
  ZerothOrder zo;
  ComplexDij d0;
};

namespace detail {
inline void check_pole(Complex D, Complex oc, Complex da, Complex db, const char* name) {
  double scale = std::norm(oc) + std::abs(da) * std::abs(db);
  if (std::abs(D) <= 1e-14 * scale || (scale == 0.0 && std::abs(D) == 0.0))
    throw PoleAtResonance(std::string(name) + " = |Omega_c|^2 - " +
                          std::to_string(da.real()) + "+" + std::to_string(da.imag()) +
                          "i times d-partner");
}
}  // namespace detail

inline FirstOrder first_order(const DriveConfig& dr, const AtomParams& atom) {
  FirstOrder fo;
  fo.zo = zeroth_order(dr, atom);
  fo.d0 = ComplexDij::zero_order(atom, dr.detunings);
  const Complex oc = dr.omega_c;
  const auto& s0 = fo.zo.sigma0;

  fo.D1 = std::norm(oc) - fo.d0(2, 1) * fo.d0(3, 1);
  fo.D2 = std::norm(oc) - fo.d0(4, 2) * fo.d0(4, 3);
  detail::check_pole(fo.D1, oc, fo.d0(2, 1), fo.d0(3, 1), "D1");
  detail::check_pole(fo.D2, oc, fo.d0(4, 2), fo.d0(4, 3), "D2");

  const double s11 = s0(1, 1).real(), s22 = s0(2, 2).real(), s33 = s0(3, 3).real();
  const Complex s23 = s0(2, 3);

  fo.K = atom.kappa13 * (fo.d0(2, 1) * (s11 - s33) + oc * s23) / fo.D1;
  fo.alpha21 = (std::conj(oc) * (s33 - s11) - fo.d0(3, 1) * s23) / fo.D1;
  fo.alpha31 = fo.K / atom.kappa13;
  fo.alpha42 = (fo.d0(4, 3) * s22 + oc * s23) / fo.D2;
  fo.alpha43 = (std::conj(oc) * s22 + fo.d0(4, 2) * s23) / fo.D2;
  return fo;
}

inline Complex dispersion_K(const DriveConfig& dr, const AtomParams& atom) {
  return first_order(dr, atom).K;
}

// Second-order response coefficients. F-branch entries multiply the probe
// intensity |F|^2, G-branch entries |Omega_a|^2; a41 multiplies
// Omega_p Omega_a. Population coefficients are real.
struct SecondOrderAlphas {
  double a22F = 0, a33F = 0, a11F = 0;
  double a22G = 0, a33G = 0, a11G = 0, a44 = 0;
  Complex a41{}, a23F{}, a23G{};
};

namespace detail {

inline SecondOrderAlphas second_order_closed(const DriveConfig& dr, const AtomParams& atom,
                                             const FirstOrder& fo, double X3) {
  const Complex oc = dr.omega_c;
  const double G = atom.Gamma13 + atom.Gamma31;
  const double G23 = atom.Gamma23, G31 = atom.Gamma31, G13 = atom.Gamma13, G4 = atom.Gamma4();
  const double Ia31 = fo.alpha31.imag(), Ia42 = fo.alpha42.imag();
  const Complex d32 = fo.d0(3, 2);
  const double den = G * X3 - G31 * (G23 - X3);

  SecondOrderAlphas a;
  a.a22F = (-2.0 * G * std::imag(std::conj(oc) * std::conj(fo.alpha21) / d32) -
            2.0 * (G23 - X3) * Ia31) / den;
  a.a33F = (2.0 * Ia31 - G31 * a.a22F) / G;
  a.a22G = (2.0 * G * std::imag(std::conj(oc) * std::conj(fo.alpha43) / d32) +
            2.0 * G * Ia42 + 2.0 * G31 * (G23 - X3) * Ia42 / G4) / den;
  a.a44 = 2.0 * Ia42 / G4;
  a.a41 = (fo.alpha43 - fo.alpha21) / fo.d0(4, 1);
  a.a33G = (-G31 * a.a44 - G31 * a.a22G) / G;
  a.a11F = (G13 * a.a33F - 2.0 * Ia31) / G31;
  a.a11G = G13 * a.a33G / G31;
  a.a23F = (-fo.alpha21 + std::conj(oc) * a.a33F - std::conj(oc) * a.a22F) / std::conj(d32);
  a.a23G = (fo.alpha43 + std::conj(oc) * a.a33G - std::conj(oc) * a.a22G) / std::conj(d32);
  return a;
}

// Independent route: stationary O(eps^2) system solved directly. The
// zero-field Liouvillian acts on the correction; sources are the bilinears of
// the first-order coefficients. Trace row pins trace(sigma^(2)) = 0.
inline SecondOrderAlphas second_order_oracle(const DriveConfig& dr, const AtomParams& atom,
                                             const FirstOrder& fo) {
  DriveConfig base = dr;
  base.omega_p = base.omega_a = Complex(0);
  base.es = 0.0;
  const Matrix16 L0 = liouvillian(base, atom);

  auto solve = [&](const Vector16& source) {
    Matrix16 A = L0;
    Vector16 b = -source;
    A.row(vec_index(1, 1)).setZero();
    for (int j = 1; j <= 4; ++j) A(vec_index(1, 1), vec_index(j, j)) = 1.0;
    b(vec_index(1, 1)) = 0.0;
    Eigen::PartialPivLU<Matrix16> lu(A);
    if (!(lu.rcond() > 1e-14)) throw DegenerateSteadyState(1.0 / lu.rcond());
    return Vector16(lu.solve(b));
  };

  const Complex I(0, 1);
  Vector16 sF = Vector16::Zero();
  sF(vec_index(1, 1)) = -2.0 * fo.alpha31.imag();
  sF(vec_index(3, 3)) = +2.0 * fo.alpha31.imag();
  sF(vec_index(3, 2)) = I * std::conj(fo.alpha21);
  sF(vec_index(2, 3)) = std::conj(sF(vec_index(3, 2)));
  Vector16 xF = solve(sF);

  Vector16 sG = Vector16::Zero();
  sG(vec_index(2, 2)) = -2.0 * fo.alpha42.imag();
  sG(vec_index(4, 4)) = +2.0 * fo.alpha42.imag();
  sG(vec_index(3, 2)) = -I * std::conj(fo.alpha43);
  sG(vec_index(2, 3)) = std::conj(sG(vec_index(3, 2)));
  Vector16 xG = solve(sG);

  SecondOrderAlphas a;
  a.a11F = xF(vec_index(1, 1)).real();
  a.a22F = xF(vec_index(2, 2)).real();
  a.a33F = xF(vec_index(3, 3)).real();
  a.a23F = xF(vec_index(2, 3));
  a.a11G = xG(vec_index(1, 1)).real();
  a.a22G = xG(vec_index(2, 2)).real();
  a.a33G = xG(vec_index(3, 3)).real();
  a.a44 = xG(vec_index(4, 4)).real();
  a.a23G = xG(vec_index(2, 3));
  a.a41 = (fo.alpha43 - fo.alpha21) / fo.d0(4, 1);
  return a;
}

inline double rel_diff(double a, double b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}
inline double rel_diff(Complex a, Complex b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace detail

struct ThirdOrderCoeffs {
  Complex alpha12{};         // CPM coefficient [cm^-1 s^2], from the oracle route
  Complex alpha12_closed{};  // same combination from the printed closed forms
  Complex alpha13{};         // Stark coefficient [cm^-1 (V/cm)^-2]
  SecondOrderAlphas oracle;  // authoritative
  SecondOrderAlphas closed;  // printed forms at the resolved X3
  double X3 = 0;             // resolved value of the undetermined constant
  double max_rel_discrepancy_F = 0;  // closed vs oracle, F branch
  double max_rel_discrepancy_G = 0;  // closed vs oracle, G branch
  FirstOrder fo;
};

// Evaluates the full second/third-order coefficient ladder. The undetermined
// constant X3 is resolved against the oracle on the F branch (the reading
// X3 = -2|Omega_c|^2 gamma32 / |d32|^2 reproduces it identically); the
// residual G-branch discrepancy of the printed forms is reported, and the
// oracle values feed alpha12.
inline ThirdOrderCoeffs third_order(const DriveConfig& dr, const AtomParams& atom) {
  if (atom.Gamma31 <= 0.0) throw PumpRequired();
  ThirdOrderCoeffs out;
  out.fo = first_order(dr, atom);
  const FirstOrder& fo = out.fo;
  out.oracle = detail::second_order_oracle(dr, atom, fo);

  const double Y = 2.0 * std::norm(dr.omega_c) * atom.gamma(3, 2) / std::norm(fo.d0(3, 2));
  double best_x3 = 0, best_err = std::numeric_limits<double>::infinity();
  for (double cand : {-Y, +Y}) {
    SecondOrderAlphas c = detail::second_order_closed(dr, atom, fo, cand);
    double err = detail::rel_diff(c.a22F, out.oracle.a22F);
    if (err < best_err) { best_err = err; best_x3 = cand; }
  }
  if (best_err > 1e-3)
    throw AmbiguousClosedForm(
        "a22F oracle = " + std::to_string(out.oracle.a22F) +
        ", best closed-form relative error = " + std::to_string(best_err));
  out.X3 = best_x3;
  out.closed = detail::second_order_closed(dr, atom, fo, best_x3);

  out.max_rel_discrepancy_F = std::max({detail::rel_diff(out.closed.a11F, out.oracle.a11F),
                                        detail::rel_diff(out.closed.a22F, out.oracle.a22F),
                                        detail::rel_diff(out.closed.a33F, out.oracle.a33F),
                                        detail::rel_diff(out.closed.a23F, out.oracle.a23F)});
  out.max_rel_discrepancy_G = std::max({detail::rel_diff(out.closed.a11G, out.oracle.a11G),
                                        detail::rel_diff(out.closed.a22G, out.oracle.a22G),
                                        detail::rel_diff(out.closed.a33G, out.oracle.a33G),
                                        detail::rel_diff(out.closed.a44, out.oracle.a44),
                                        detail::rel_diff(out.closed.a23G, out.oracle.a23G)});

  auto a12_from = [&](const SecondOrderAlphas& a) {
    return atom.kappa13 *
           (dr.omega_c * (a.a23G - a.a41) + fo.d0(2, 1) * (a.a11G - a.a33G)) / fo.D1;
  };
  out.alpha12 = a12_from(out.oracle);
  out.alpha12_closed = a12_from(out.closed);
  out.alpha13 = atom.kappa13 * (atom.alpha[3] - atom.alpha[1]) / (2.0 * kHbar) *
                fo.d0(2, 1) * fo.alpha31 / fo.D1;
  return out;
}

// Im K scan over Delta3 (with Delta2 = Delta3) for a set of
// (Omega_c, Gamma31) variants.
struct ImkVariant {
  Complex omega_c{};
  double gamma31 = 0;
  std::string id;
};

struct ImkRow {
  double delta3_over_gamma3 = 0;
  std::string variant_id;
  Complex K{};
};

inline std::vector<ImkVariant> fig2_variants(double gamma3) {
  return {{Complex(0), 0.0, "0"},
          {Complex(5e7), 0.0, "1"},
          {Complex(5e7), 0.7 * gamma3, "2"}};
}

inline std::vector<ImkRow> imk_scan(const AtomParams& atom_in, const Detunings& det,
                                    const std::vector<double>& delta3_over_gamma3,
                                    const std::vector<ImkVariant>& variants) {
  const double gamma3 = atom_in.Gamma3() / 2.0;
  std::vector<ImkRow> rows(variants.size() * delta3_over_gamma3.size());
  for (size_t v = 0; v < variants.size(); ++v) {
    AtomParams atom = atom_in;
    atom.Gamma31 = variants[v].gamma31;
    parallel_for(delta3_over_gamma3.size(), [&](size_t i) {
      DriveConfig dr;
      dr.omega_c = variants[v].omega_c;
      dr.detunings = det;
      dr.detunings.delta[3] = delta3_over_gamma3[i] * gamma3;
      dr.detunings.delta[2] = dr.detunings.delta[3];  // scan couples Delta2 = Delta3
      ImkRow& row = rows[v * delta3_over_gamma3.size() + i];
      row.delta3_over_gamma3 = delta3_over_gamma3[i];
      row.variant_id = variants[v].id;
      row.K = dispersion_K(dr, atom);
    });
  }
  return rows;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / double(n - 1);
  return out;
}

}  // namespace eitpt
