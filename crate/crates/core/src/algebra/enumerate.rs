//! Enumeration of order elements by norm.
//!
//! The walkers visit exactly the elements with `norm <= bound`, using exact
//! integer range bounds per coordinate (derived by completing the square in
//! the norm form) followed by an exact norm test, so no boundary element is
//! ever misclassified.

use super::{OrderElement, ScalarDomain};
use crate::primes::isqrt_u64;
use crate::{Budget, Result};

fn isqrt_i128(n: i128) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x as i64
}

/// Upper bound on the number of elements visited, used for budget checks.
fn box_estimate(domain: ScalarDomain, bound: u64) -> u128 {
    let s = isqrt_u64(bound) as u128;
    match domain {
        ScalarDomain::Real => 2 * s + 1,
        ScalarDomain::ImagQuad { d } => {
            let tb = isqrt_u64(4 * bound / d as u64) as u128;
            (2 * s + 3) * (tb + 3)
        }
        ScalarDomain::Hurwitz => {
            let t = isqrt_u64(4 * bound) as u128 + 3;
            t * t * t * t
        }
    }
}

/// Visits every `x` in `O` with `norm(x) <= bound` exactly once.
///
/// Visit order is unspecified; callers that need the deterministic
/// lexicographic order sort afterwards.
fn for_each_with_norm_le<F: FnMut(&OrderElement, u64)>(
    domain: ScalarDomain,
    bound: u64,
    mut f: F,
) {
    match domain {
        ScalarDomain::Real => {
            let s = isqrt_u64(bound) as i64;
            for a in -s..=s {
                f(&OrderElement::from_coords(&[a]), (a * a) as u64);
            }
        }
        ScalarDomain::ImagQuad { d } => {
            let dd = d as i128;
            let b4 = 4 * bound as i128;
            if domain.half_basis() {
                // norm = a^2 + ab + b^2 (1+d)/4; 4*norm = (2a+b)^2 + d b^2
                let bmax = isqrt_i128(b4 / dd);
                for b in -bmax..=bmax {
                    let rem = b4 - dd * (b as i128) * (b as i128);
                    let s = isqrt_i128(rem) as i128;
                    // 2a + b in [-s, s]
                    let lo = (-(s) - b as i128).div_euclid(2);
                    let hi = (s - b as i128).div_euclid(2);
                    for a in lo..=hi {
                        let x = OrderElement::from_coords(&[a as i64, b]);
                        let n = domain.norm_i128(&x);
                        if n <= bound as i128 {
                            f(&x, n as u64);
                        }
                    }
                }
            } else {
                // norm = a^2 + d b^2
                let bmax = isqrt_i128(bound as i128 / dd);
                for b in -bmax..=bmax {
                    let rem = bound as i128 - dd * (b as i128) * (b as i128);
                    let amax = isqrt_i128(rem);
                    for a in -amax..=amax {
                        let x = OrderElement::from_coords(&[a, b]);
                        f(&x, domain.norm_i128(&x) as u64);
                    }
                }
            }
        }
        ScalarDomain::Hurwitz => {
            // 4*norm = (2a+d)^2 + (2b+d)^2 + (2c+d)^2 + d^2
            let b4 = 4 * bound as i128;
            let dmax = isqrt_i128(b4);
            for dc in -dmax..=dmax {
                let rem_d = b4 - (dc as i128) * (dc as i128);
                let sa = isqrt_i128(rem_d) as i128;
                let alo = (-sa - dc as i128).div_euclid(2);
                let ahi = (sa - dc as i128).div_euclid(2);
                for a in alo..=ahi {
                    let ta = 2 * a + dc as i128;
                    let rem_a = rem_d - ta * ta;
                    if rem_a < 0 {
                        continue;
                    }
                    let sb = isqrt_i128(rem_a) as i128;
                    let blo = (-sb - dc as i128).div_euclid(2);
                    let bhi = (sb - dc as i128).div_euclid(2);
                    for b in blo..=bhi {
                        let tb = 2 * b + dc as i128;
                        let rem_b = rem_a - tb * tb;
                        if rem_b < 0 {
                            continue;
                        }
                        let sc = isqrt_i128(rem_b) as i128;
                        let clo = (-sc - dc as i128).div_euclid(2);
                        let chi = (sc - dc as i128).div_euclid(2);
                        for c in clo..=chi {
                            let x = OrderElement::from_coords(&[
                                a as i64, b as i64, c as i64, dc,
                            ]);
                            let n = domain.norm_i128(&x);
                            if n <= bound as i128 {
                                f(&x, n as u64);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// All `x` in `O` with `norm(x) <= bound`, in lexicographic coordinate order.
pub fn elements_with_norm_le(
    domain: ScalarDomain,
    bound: u64,
    budget: Budget,
) -> Result<Vec<OrderElement>> {
    budget.check(box_estimate(domain, bound), "elements_with_norm_le")?;
    let mut out = Vec::new();
    for_each_with_norm_le(domain, bound, |x, _| out.push(*x));
    out.sort_unstable();
    Ok(out)
}

/// Dense norm census: `census[u] = #{x in O : norm(x) = u}` for `0 <= u <= bound`.
pub fn norm_census(domain: ScalarDomain, bound: u64, budget: Budget) -> Result<Vec<u64>> {
    budget.check(box_estimate(domain, bound), "norm_census")?;
    budget.check(bound as u128 + 1, "norm_census output")?;
    let mut census = vec![0u64; bound as usize + 1];
    for_each_with_norm_le(domain, bound, |_, n| census[n as usize] += 1);
    Ok(census)
}

/// Sparse census: the pairs `(u, R_O(u))` with `R_O(u) > 0`, ascending in `u`.
pub fn norm_shells(domain: ScalarDomain, bound: u64, budget: Budget) -> Result<Vec<(u64, u64)>> {
    if domain == ScalarDomain::Real {
        // Only perfect squares occur; avoid the dense table.
        let s = isqrt_u64(bound);
        return Ok((0..=s)
            .map(|v| (v * v, if v == 0 { 1 } else { 2 }))
            .collect());
    }
    let census = norm_census(domain, bound, budget)?;
    Ok(census
        .iter()
        .enumerate()
        .filter_map(|(u, &c)| if c > 0 { Some((u as u64, c)) } else { None })
        .collect())
}

/// The unit group of `O`, in lexicographic order.
pub fn units(domain: ScalarDomain) -> Vec<OrderElement> {
    let mut out = Vec::new();
    for_each_with_norm_le(domain, 1, |x, n| {
        if n == 1 {
            out.push(*x);
        }
    });
    out.sort_unstable();
    debug_assert_eq!(out.len() as u64, domain.unit_count());
    out
}
