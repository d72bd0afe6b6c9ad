//! Working precision and the tolerances derived from it.
//!
//! The precision is process-wide: every scalar created through [`real`],
//! [`cplx`] or [`parse_real`] carries the current number of bits. A scenario
//! sets it once before any measure is built and never changes it afterwards.

use std::sync::atomic::{AtomicU32, Ordering};

use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted by [`set_precision`].
pub const MIN_PRECISION: u32 = 64;

static PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

/// Current working precision in bits.
pub fn precision() -> u32 {
    PRECISION.load(Ordering::Relaxed)
}

/// Sets the working precision. Values below 64 bits are rejected.
pub fn set_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION {
        return Err(Error::InvalidInput(format!(
            "precision must be at least {MIN_PRECISION} bits, got {bits}"
        )));
    }
    PRECISION.store(bits, Ordering::Relaxed);
    Ok(())
}

pub type Real = Float;
pub type Cplx = Complex;

/// A real scalar at working precision.
pub fn real<T>(value: T) -> Real
where
    Float: rug::Assign<T>,
{
    Float::with_val(precision(), value)
}

/// A complex scalar at working precision.
pub fn cplx<T>(value: T) -> Cplx
where
    Complex: rug::Assign<T>,
{
    Complex::with_val(precision(), value)
}

/// The real number `0`.
pub fn zero() -> Real {
    Float::new(precision())
}

/// Parses a decimal string at full working precision.
pub fn parse_real(text: &str) -> Result<Real> {
    let parsed = Float::parse(text.trim())
        .map_err(|e| Error::InvalidInput(format!("cannot parse real number {text:?}: {e}")))?;
    Ok(Float::with_val(precision(), parsed))
}

/// `2^-(p * num / den)` for the current precision `p`.
fn pow2_fraction(num: u32, den: u32) -> Real {
    let exp = -((precision() * num / den) as i32);
    let mut one = real(1);
    one <<= exp;
    one
}

/// Relative magnitude below which a polynomial coefficient is treated as zero: `2^(-p/2)`.
pub fn trim_threshold() -> Real {
    pow2_fraction(1, 2)
}

/// Kernel residual tolerance: `2^(-p/3)`.
pub fn kernel_tol() -> Real {
    pow2_fraction(1, 3)
}

/// Root residual tolerance: `2^(-p/4)`.
pub fn root_tol() -> Real {
    pow2_fraction(1, 4)
}

/// Relative distance under which computed roots are merged into one cluster: `2^(-p/8)`.
pub fn cluster_tol() -> Real {
    pow2_fraction(1, 8)
}

/// Relative pivot magnitude under which elimination stops: `2^(-3p/4)`.
pub fn pivot_tol() -> Real {
    pow2_fraction(3, 4)
}

/// Relative spacing of adjacent floating-point numbers: `2^(1-p)`.
pub fn machine_spacing() -> Real {
    let mut one = real(1);
    one <<= 1 - precision() as i32;
    one
}

/// Absolute value of a complex scalar as a real.
pub fn cabs(z: &Cplx) -> Real {
    Float::with_val(precision(), z.abs_ref())
}

/// Largest absolute value in a slice, zero for an empty slice.
pub fn max_abs(values: &[Real]) -> Real {
    values.iter().fold(zero(), |acc, v| {
        let a = Float::with_val(precision(), v.abs_ref());
        if a > acc {
            a
        } else {
            acc
        }
    })
}
