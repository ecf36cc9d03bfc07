//! Physical constants in SI units.
//! All values from CODATA 2018 / NIST, frozen at full printed precision.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s.
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// Fine-structure constant, dimensionless.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Classical electron radius, m.
pub const CLASSICAL_ELECTRON_RADIUS: f64 = 2.817_940_326_2e-15;
