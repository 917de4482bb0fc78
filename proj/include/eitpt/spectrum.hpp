#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eitpt/errors.hpp"
#include "eitpt/parallel.hpp"
#include "eitpt/potential.hpp"

namespace eitpt {

// Floquet-Bloch problem for the stationary reduction of the envelope
// equation: substituting u = phi(xi) e^{i beta s} gives
// phi'' + V phi = beta phi. In the plane-wave basis e^{i (q + 2m) xi} the
// operator is tridiagonal because V carries only the 0, +-2 harmonics.
struct BandStructure {
  std::vector<double> q;
  int n_plane_waves = 0;
  int n_bands = 0;  // export/diagnostic window, descending Re(beta)
  std::vector<std::vector<Complex>> beta;      // [iq][mode], all eigenvalues
  std::vector<Eigen::MatrixXcd> eigenvectors;  // [iq], columns follow beta order

  double max_abs_imag(int window = -1) const {
    int w = window < 0 ? n_bands : window;
    double m = 0;
    for (const auto& bq : beta)
      for (int b = 0; b < std::min<size_t>(w, bq.size()); ++b)
        m = std::max(m, std::abs(bq[b].imag()));
    return m;
  }
};

namespace detail {

inline Eigen::MatrixXcd pw_matrix(const PotentialSpec::Harmonics& h, double q, int n_pw) {
  const int M = (n_pw - 1) / 2;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n_pw, n_pw);
  for (int i = 0; i < n_pw; ++i) {
    double kk = q + 2.0 * (i - M);
    A(i, i) = -kk * kk + h.c0;
    if (i + 1 < n_pw) {
      A(i + 1, i) = h.c_plus;  // e^{+2 i xi} couples m-1 -> m
      A(i, i + 1) = h.c_minus;
    }
  }
  return A;
}

// Greedy eigenvector-overlap assignment: for each previous band pick the
// current eigenvector with the largest overlap. Keeps band labels continuous
// across q near avoided crossings.
inline std::vector<int> overlap_assignment(const Eigen::MatrixXcd& prev,
                                           const Eigen::MatrixXcd& cur) {
  const int n = int(prev.cols());
  Eigen::MatrixXd overlap = (prev.adjoint() * cur).cwiseAbs();
  std::vector<int> assign(n, -1);
  std::vector<bool> used_row(n, false), used_col(n, false);
  for (int pick = 0; pick < n; ++pick) {
    int bi = -1, bj = -1;
    double best = -1;
    for (int i = 0; i < n; ++i) {
      if (used_row[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (used_col[j]) continue;
        if (overlap(i, j) > best) { best = overlap(i, j); bi = i; bj = j; }
      }
    }
    assign[bi] = bj;
    used_row[bi] = true;
    used_col[bj] = true;
  }
  return assign;
}

}  // namespace detail

struct BandOptions {
  int n_bands = 16;
};

inline BandStructure bloch_bands(const PotentialSpec::Harmonics& h,
                                 const std::vector<double>& q_grid, int n_plane_waves,
                                 const BandOptions& opts = {}) {
  if (n_plane_waves < 33 || n_plane_waves % 2 == 0)
    throw Error("n_plane_waves must be odd and >= 33");
  BandStructure bs;
  bs.q = q_grid;
  bs.n_plane_waves = n_plane_waves;
  bs.n_bands = std::min(opts.n_bands, n_plane_waves);
  bs.beta.resize(q_grid.size());
  bs.eigenvectors.resize(q_grid.size());

  parallel_for(q_grid.size(), [&](size_t iq) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(
        detail::pw_matrix(h, q_grid[iq], n_plane_waves), true);
    Eigen::VectorXcd vals = solver.eigenvalues();
    Eigen::MatrixXcd vecs = solver.eigenvectors();
    std::vector<int> order(n_plane_waves);
    for (int i = 0; i < n_plane_waves; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals(a).real() > vals(b).real(); });
    bs.beta[iq].resize(n_plane_waves);
    Eigen::MatrixXcd sorted(n_plane_waves, n_plane_waves);
    for (int i = 0; i < n_plane_waves; ++i) {
      bs.beta[iq][i] = vals(order[i]);
      sorted.col(i) = vecs.col(order[i]);
    }
    bs.eigenvectors[iq] = std::move(sorted);
  });

  // Continuity relabeling across q, so that band indices follow eigenvector
  // overlap rather than raw real-part order near crossings.
  for (size_t iq = 1; iq < q_grid.size(); ++iq) {
    std::vector<int> assign =
        detail::overlap_assignment(bs.eigenvectors[iq - 1], bs.eigenvectors[iq]);
    std::vector<Complex> nb(n_plane_waves);
    Eigen::MatrixXcd nv(n_plane_waves, n_plane_waves);
    for (int b = 0; b < n_plane_waves; ++b) {
      nb[b] = bs.beta[iq][assign[b]];
      nv.col(b) = bs.eigenvectors[iq].col(assign[b]);
    }
    bs.beta[iq] = std::move(nb);
    bs.eigenvectors[iq] = std::move(nv);
  }
  return bs;
}

inline BandStructure bloch_bands(const PotentialSpec& spec, const std::vector<double>& q_grid,
                                 int n_plane_waves, const BandOptions& opts = {}) {
  return bloch_bands(spec.harmonics(), q_grid, n_plane_waves, opts);
}

inline std::vector<double> default_q_grid(int n = 64) {
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = -1.0 + 2.0 * i / double(n);
  return q;
}

// One Bloch eigenmode (plane-wave coefficients for e^{i (q + 2m) xi}).
struct BlochMode {
  Complex beta;
  double q;
  std::vector<Complex> coeff;  // m = -M .. M
};

inline BlochMode bloch_mode_max_imag(const PotentialSpec::Harmonics& h, double q, int n_pw) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(detail::pw_matrix(h, q, n_pw), true);
  int best = 0;
  for (int i = 1; i < n_pw; ++i)
    if (solver.eigenvalues()(i).imag() > solver.eigenvalues()(best).imag()) best = i;
  BlochMode m;
  m.beta = solver.eigenvalues()(best);
  m.q = q;
  m.coeff.resize(n_pw);
  for (int i = 0; i < n_pw; ++i) m.coeff[i] = solver.eigenvectors()(i, best);
  return m;
}

struct ThresholdOptions {
  int n_plane_waves = 65;
  int n_q = 64;
  int window = 16;
  double im_tol = 1e-6;
  double refine_tol = 1e-3;
};

struct ThresholdScanRow {
  double W;
  double im_spread;
};

struct ThresholdResult {
  double W_c = 0;
  std::vector<ThresholdScanRow> scan;
};

// Scales the imaginary part of the sin(2 xi) harmonic by W and locates the
// smallest W whose spectrum acquires an imaginary spread beyond the uniform
// background Im(c0). Grid scan first, then bisection to refine_tol.
inline ThresholdResult pt_threshold(const PotentialSpec::Harmonics& base,
                                    const std::vector<double>& w_grid,
                                    const ThresholdOptions& opts = {}) {
  const Complex C = base.cos2_coeff();
  const Complex S = base.sin2_coeff();
  auto family = [&](double W) {
    Complex sw(S.real(), W * S.imag());
    PotentialSpec::Harmonics h;
    h.c0 = base.c0;
    h.c_plus = 0.5 * (C - Complex(0, 1) * sw);
    h.c_minus = 0.5 * (C + Complex(0, 1) * sw);
    return h;
  };
  std::vector<double> qs = default_q_grid(opts.n_q);
  auto spread = [&](double W) {
    BandStructure bs =
        bloch_bands(family(W), qs, opts.n_plane_waves, BandOptions{opts.window});
    double m = 0;
    for (const auto& bq : bs.beta)
      for (int b = 0; b < bs.n_bands; ++b)
        m = std::max(m, std::abs(bq[b].imag() - base.c0.imag()));
    return m;
  };

  ThresholdResult out;
  double lo = 0, hi = -1;
  for (size_t i = 0; i < w_grid.size(); ++i) {
    double m = spread(w_grid[i]);
    out.scan.push_back({w_grid[i], m});
    if (m > opts.im_tol) {
      hi = w_grid[i];
      lo = i == 0 ? 0.0 : w_grid[i - 1];
      break;
    }
  }
  if (hi < 0) {
    double worst = 0;
    for (const auto& r : out.scan) worst = std::max(worst, r.im_spread);
    throw NoThresholdFound(w_grid.back(), worst);
  }
  while (hi - lo > opts.refine_tol) {
    double mid = 0.5 * (lo + hi);
    if (spread(mid) > opts.im_tol)
      hi = mid;
    else
      lo = mid;
  }
  out.W_c = 0.5 * (lo + hi);
  return out;
}

}  // namespace eitpt
