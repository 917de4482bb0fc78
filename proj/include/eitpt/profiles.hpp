#pragma once

#include <cmath>
#include <vector>

#include "eitpt/atom.hpp"
#include "eitpt/constants.hpp"

namespace eitpt {

// Uniform endpoint-exclusive grid over an integer number of pi-periods,
// symmetric about xi = 0 (0 is a sample; -xi maps to an exact grid
// reflection modulo the period).
inline std::vector<double> uniform_xi_grid(int periods, int samples_per_period) {
  const int n = periods * samples_per_period;
  const double length = periods * kPi;
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) xi[i] = -0.5 * length + i * (length / n);
  return xi;
}

// Lattice field profiles: Ea(x) = Ea0 [cos(x/R) + sin(x/R)],
// Es(x) = Es0 cos(x/R), sampled in the dimensionless coordinate xi = x/R.
struct FieldProfiles {
  double Ea0 = 0;  // assisted field amplitude [V/cm]
  double Es0 = 0;  // Stark field amplitude [V/cm]
  double R = 0;    // lattice length scale [cm]
  std::vector<double> xi;

  static FieldProfiles lattice(double ea0, double es0, double r, int periods = 1,
                               int samples_per_period = 512) {
    FieldProfiles p;
    p.Ea0 = ea0;
    p.Es0 = es0;
    p.R = r;
    p.xi = uniform_xi_grid(periods, samples_per_period);
    return p;
  }

  double ea(double x) const { return Ea0 * (std::cos(x) + std::sin(x)); }
  double es(double x) const { return Es0 * std::cos(x); }

  std::vector<double> ea_samples() const {
    std::vector<double> v(xi.size());
    for (size_t i = 0; i < xi.size(); ++i) v[i] = ea(xi[i]);
    return v;
  }
  std::vector<double> es_samples() const {
    std::vector<double> v(xi.size());
    for (size_t i = 0; i < xi.size(); ++i) v[i] = es(xi[i]);
    return v;
  }
};

}  // namespace eitpt
