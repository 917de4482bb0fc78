#pragma once

#include <complex>

#include <Eigen/Dense>

#include "eitpt/atom.hpp"
#include "eitpt/errors.hpp"

namespace eitpt {

using Matrix16 = Eigen::Matrix<Complex, 16, 16>;
using Vector16 = Eigen::Matrix<Complex, 16, 1>;

// Row-major vectorization of sigma_{jl}, 1-based levels.
constexpr int vec_index(int j, int l) { return 4 * (j - 1) + (l - 1); }

// Time derivative of the density matrix for the four-level N scheme with
// incoherent pumping. Diagonal flow: pump 1->3 at Gamma31, decays 3->1, 3->2,
// 4->2; coherences evolve with d_jl = Delta'_j - Delta'_l + i gamma_jl.
// Lower-triangle derivatives follow from Hermiticity.
inline Eigen::Matrix4cd bloch_rhs(const DensityMatrix& dm, const DriveConfig& dr,
                                  const AtomParams& atom) {
  const auto& s = dm.sigma;
  auto sig = [&](int j, int l) { return s(j - 1, l - 1); };
  const Complex I(0, 1);
  const Complex op = dr.omega_p, oc = dr.omega_c, oa = dr.omega_a;
  const ComplexDij d = ComplexDij::build(atom, dr.detunings, dr.es);

  Eigen::Matrix4cd out;
  Complex d11 = -atom.Gamma31 * sig(1, 1) + atom.Gamma13 * sig(3, 3) +
                I * (std::conj(op) * sig(3, 1) - op * sig(1, 3));
  Complex d22 = atom.Gamma23 * sig(3, 3) + atom.Gamma24 * sig(4, 4) +
                I * (std::conj(oc) * sig(3, 2) - oc * sig(2, 3)) +
                I * (std::conj(oa) * sig(4, 2) - oa * sig(2, 4));
  Complex d33 = -atom.Gamma3() * sig(3, 3) + atom.Gamma31 * sig(1, 1) -
                I * (std::conj(op) * sig(3, 1) - op * sig(1, 3)) -
                I * (std::conj(oc) * sig(3, 2) - oc * sig(2, 3));
  Complex d44 = -atom.Gamma4() * sig(4, 4) - I * (std::conj(oa) * sig(4, 2) - oa * sig(2, 4));
  Complex d21 = I * (d(2, 1) * sig(2, 1) + std::conj(oc) * sig(3, 1) +
                     std::conj(oa) * sig(4, 1) - op * sig(2, 3));
  Complex d31 = I * (d(3, 1) * sig(3, 1) + op * (sig(1, 1) - sig(3, 3)) + oc * sig(2, 1));
  Complex d41 = I * (d(4, 1) * sig(4, 1) + oa * sig(2, 1) - op * sig(4, 3));
  Complex d32 = I * (d(3, 2) * sig(3, 2) + oc * (sig(2, 2) - sig(3, 3)) + op * sig(1, 2) -
                     oa * sig(3, 4));
  Complex d42 = I * (d(4, 2) * sig(4, 2) + oa * (sig(2, 2) - sig(4, 4)) - oc * sig(4, 3));
  Complex d43 = I * (d(4, 3) * sig(4, 3) + oa * sig(2, 3) - std::conj(op) * sig(4, 1) -
                     std::conj(oc) * sig(4, 2));

  out(0, 0) = d11; out(1, 1) = d22; out(2, 2) = d33; out(3, 3) = d44;
  out(1, 0) = d21; out(2, 0) = d31; out(3, 0) = d41;
  out(2, 1) = d32; out(3, 1) = d42; out(3, 2) = d43;
  out(0, 1) = std::conj(d21); out(0, 2) = std::conj(d31); out(0, 3) = std::conj(d41);
  out(1, 2) = std::conj(d32); out(1, 3) = std::conj(d42); out(2, 3) = std::conj(d43);
  return out;
}

// The same generator as a 16x16 matrix acting on vec(sigma), with conjugated
// elements rewritten through Hermiticity (sigma_lj for conj(sigma_jl)).
inline Matrix16 liouvillian(const DriveConfig& dr, const AtomParams& atom) {
  Matrix16 A = Matrix16::Zero();
  const Complex I(0, 1);
  const Complex op = dr.omega_p, oc = dr.omega_c, oa = dr.omega_a;
  const ComplexDij d = ComplexDij::build(atom, dr.detunings, dr.es);

  struct Term { int pj, pl; Complex c; };
  auto add_eq = [&](int j, int l, std::initializer_list<Term> terms) {
    for (const Term& t : terms) A(vec_index(j, l), vec_index(t.pj, t.pl)) += t.c;
    if (j != l)
      for (const Term& t : terms)
        A(vec_index(l, j), vec_index(t.pl, t.pj)) += std::conj(t.c);
  };

  add_eq(1, 1, {{1, 1, -atom.Gamma31}, {3, 3, atom.Gamma13},
                {3, 1, I * std::conj(op)}, {1, 3, -I * op}});
  add_eq(2, 2, {{3, 3, atom.Gamma23}, {4, 4, atom.Gamma24},
                {3, 2, I * std::conj(oc)}, {2, 3, -I * oc},
                {4, 2, I * std::conj(oa)}, {2, 4, -I * oa}});
  add_eq(3, 3, {{3, 3, -atom.Gamma3()}, {1, 1, atom.Gamma31},
                {3, 1, -I * std::conj(op)}, {1, 3, I * op},
                {3, 2, -I * std::conj(oc)}, {2, 3, I * oc}});
  add_eq(4, 4, {{4, 4, -atom.Gamma4()}, {4, 2, -I * std::conj(oa)}, {2, 4, I * oa}});
  add_eq(2, 1, {{2, 1, I * d(2, 1)}, {3, 1, I * std::conj(oc)},
                {4, 1, I * std::conj(oa)}, {2, 3, -I * op}});
  add_eq(3, 1, {{3, 1, I * d(3, 1)}, {1, 1, I * op}, {3, 3, -I * op}, {2, 1, I * oc}});
  add_eq(4, 1, {{4, 1, I * d(4, 1)}, {2, 1, I * oa}, {4, 3, -I * op}});
  add_eq(3, 2, {{3, 2, I * d(3, 2)}, {2, 2, I * oc}, {3, 3, -I * oc},
                {1, 2, I * op}, {3, 4, -I * oa}});
  add_eq(4, 2, {{4, 2, I * d(4, 2)}, {2, 2, I * oa}, {4, 4, -I * oa}, {4, 3, -I * oc}});
  add_eq(4, 3, {{4, 3, I * d(4, 3)}, {2, 3, I * oa},
                {4, 1, -I * std::conj(op)}, {4, 2, -I * std::conj(oc)}});
  return A;
}

namespace detail {
inline void overwrite_with_trace_row(Matrix16& A, Vector16& b, Complex rhs) {
  A.row(vec_index(1, 1)).setZero();
  for (int j = 1; j <= 4; ++j) A(vec_index(1, 1), vec_index(j, j)) = 1.0;
  b.setZero();
  b(vec_index(1, 1)) = rhs;
}
}  // namespace detail

struct SteadyStateOptions {
  double condition_limit = 1e14;
};

// Direct stationary solution: the sigma_11 row of the vectorized system is
// replaced by the trace constraint and the dense 16x16 system is solved.
// With every field and the pump off the populations of |1> and |2> are
// separately conserved and the system is singular; the prepared ground state
// is returned for that case.
inline DensityMatrix steady_state(const DriveConfig& dr, const AtomParams& atom,
                                  const SteadyStateOptions& opts = {}) {
  if (dr.omega_p == Complex(0) && dr.omega_a == Complex(0) && dr.omega_c == Complex(0) &&
      atom.Gamma31 == 0.0)
    return DensityMatrix::ground();

  Matrix16 A = liouvillian(dr, atom);
  Vector16 b;
  detail::overwrite_with_trace_row(A, b, 1.0);

  Eigen::PartialPivLU<Matrix16> lu(A);
  double rcond = lu.rcond();
  if (!(rcond > 1.0 / opts.condition_limit)) {
    Eigen::JacobiSVD<Matrix16> svd(A);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    throw DegenerateSteadyState(smin > 0 ? smax / smin
                                         : std::numeric_limits<double>::infinity());
  }
  Vector16 x = lu.solve(b);

  DensityMatrix out;
  for (int j = 1; j <= 4; ++j)
    for (int l = 1; l <= 4; ++l) out(j, l) = x(vec_index(j, l));
  out.sigma = 0.5 * (out.sigma + out.sigma.adjoint().eval());
  return out;
}

}  // namespace eitpt
