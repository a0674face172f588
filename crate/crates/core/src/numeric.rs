//! High-precision constants and roots as exact rationals.
//!
//! Transcendental ingredients (powers of pi, square roots) are approximated
//! by `BigRational` values accurate to a requested number of decimal digits.
//! Everything is integer arithmetic underneath, so results are deterministic
//! across platforms and thread schedules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Working precision in decimal digits. The default comfortably exceeds the
/// 50 digits required for coefficient work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 60 }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision {
            digits: digits.max(10),
        }
    }
}

fn pow10(d: u32) -> BigInt {
    BigInt::from(10u32).pow(d)
}

/// `atan(1/x)` scaled by `10^d`, truncated integer value.
fn atan_inv_scaled(x: u64, d: u32) -> BigInt {
    let scale = pow10(d);
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut term = &scale / BigInt::from(x); // 10^d / x^(2k+1), k = 0
    let mut k = 0u64;
    let mut sum = BigInt::zero();
    while !term.is_zero() {
        let contrib = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += &contrib;
        } else {
            sum -= &contrib;
        }
        term /= &xx;
        k += 1;
    }
    sum
}

/// Pi to `prec.digits` decimal digits (Machin's formula).
pub fn pi(prec: Precision) -> BigRational {
    let d = prec.digits + 10;
    let scaled = BigInt::from(16) * atan_inv_scaled(5, d) - BigInt::from(4) * atan_inv_scaled(239, d);
    BigRational::new(scaled, pow10(d))
}

/// Floor square root of a nonnegative rational, to `prec.digits` digits.
pub fn sqrt_rational(x: &BigRational, prec: Precision) -> Result<BigRational> {
    if x.is_negative() {
        return Err(Error::InvalidParameter(
            "square root of a negative value".into(),
        ));
    }
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q; scale by 10^(2d) and take the exact integer root.
    let d = prec.digits + 5;
    let p = x.numer().magnitude().clone();
    let q = x.denom().magnitude().clone();
    let scaled: BigUint = &p * &q * pow10(2 * d).magnitude();
    let root = scaled.sqrt();
    Ok(BigRational::new(
        BigInt::from(root),
        BigInt::from(q) * pow10(d),
    ))
}

/// `base^(num/2)` for integer `num`: integer power with a square root when
/// `num` is odd. `base` must be positive when a root is taken.
pub fn pow_half(base: &BigRational, num: i64, prec: Precision) -> Result<BigRational> {
    let whole = base.pow((num.div_euclid(2)) as i32);
    if num.rem_euclid(2) == 0 {
        Ok(whole)
    } else {
        Ok(whole * sqrt_rational(base, prec)?)
    }
}

/// Fixed-point decimal rendering with `digits` places after the point.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let negative = x.is_negative();
    let abs = x.abs();
    let scaled = (abs * BigRational::from_integer(pow10(digits))).floor();
    let s = scaled.numer().magnitude().to_string();
    let (int_part, frac_part) = if s.len() <= digits as usize {
        ("0".to_string(), format!("{:0>width$}", s, width = digits as usize))
    } else {
        let split = s.len() - digits as usize;
        (s[..split].to_string(), s[split..].to_string())
    };
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Lossy conversion for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
