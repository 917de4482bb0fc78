#pragma once

namespace eitpt {

// Unit system used throughout: rates and angular frequencies in s^-1,
// lengths in cm, electric fields in V/cm, dipole moments in C*cm,
// polarizabilities in J*cm^2/V^2.
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kSpeedOfLight = 2.99792458e10;  // cm/s
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace eitpt
