//! Numerical tolerances shared across the crate.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default absolute tolerance (max-norm) for Hermiticity, idempotency,
/// orthogonality and completeness checks.
pub const DEFAULT_STRUCTURE_TOL: f64 = 1e-10;

/// Default tolerance on condition margins: a report is satisfied when its
/// margin is at least `-SATISFACTION_TOL`.
pub const SATISFACTION_TOL: f64 = 1e-9;

/// Half-width of the band within which equality constraints of the
/// feasibility problem are considered met.
pub const FEASIBILITY_BAND: f64 = 1e-9;

/// Lüders bound for three-time (and two-time) LG sums.
pub const LUDERS_BOUND: f64 = -0.5;

/// Algebraic floor of the three-time LG sum `1 + C12 + C23 + C13`.
pub const ALGEBRAIC_FLOOR: f64 = -2.0;

static STRUCTURE_TOL_BITS: AtomicU64 = AtomicU64::new(0x3DDB_7CDF_D9D7_BDBB); // 1e-10

/// Current structural tolerance.
pub fn structure_tol() -> f64 {
    f64::from_bits(STRUCTURE_TOL_BITS.load(Ordering::Relaxed))
}

/// Override the structural tolerance process-wide. Non-positive or
/// non-finite values are ignored.
pub fn set_structure_tol(tol: f64) {
    if tol.is_finite() && tol > 0.0 {
        STRUCTURE_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_decode_to_default_tol() {
        assert_eq!(f64::from_bits(0x3DDB_7CDF_D9D7_BDBB), DEFAULT_STRUCTURE_TOL);
    }
}
