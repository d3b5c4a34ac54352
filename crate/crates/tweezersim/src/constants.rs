//! Physical constants (SI units).

/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380_649e-23;

/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;

/// Mass of a single 87Rb atom, kg.
pub const RB87_MASS: f64 = 1.443_16e-25;

/// Standard gravitational acceleration, m/s^2.
pub const STANDARD_GRAVITY: f64 = 9.81;
