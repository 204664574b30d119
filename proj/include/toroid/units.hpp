#pragma once

#include <numbers>

// Lengths are nanometres, charges elementary charges, energies electronvolts.
namespace toroid::units {

inline constexpr double kElementaryCharge = 1.602176634e-19;      // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kNanometre = 1e-9;                        // m

/// e^2 / (4 pi eps0 * 1 nm) expressed in eV: the Coulomb energy scale.
inline constexpr double kCoulombEvNm =
    kElementaryCharge / (4.0 * std::numbers::pi * kVacuumPermittivity * kNanometre);

inline constexpr double kDebye = 3.33564095198152e-30;  // C m

/// Multiply a dipole in C m by this to get e nm.
inline constexpr double kCoulombMetreToENm = 1.0 / (kElementaryCharge * kNanometre);

}  // namespace toroid::units
