//! Divisor-formula sieves for the classical representation numbers
//! `r_2`, `r_3`, `r_4` (sums of two, three, four squares), plus per-value
//! divisor evaluations that double as independent oracles.

/// `r_2(m)` for all `m <= max_value` by sieving `4 (d_1(m) - d_3(m))`.
pub fn r2_table(max_value: u64) -> Vec<u64> {
    let m = max_value as usize;
    let mut acc = vec![0i64; m + 1];
    let mut d = 1usize;
    while d <= m {
        let w = match d % 4 {
            1 => 4,
            3 => -4,
            _ => 0,
        };
        if w != 0 {
            let mut k = d;
            while k <= m {
                acc[k] += w;
                k += d;
            }
        }
        d += 1;
    }
    let mut out = vec![0u64; m + 1];
    out[0] = 1;
    for k in 1..=m {
        debug_assert!(acc[k] >= 0);
        out[k] = acc[k] as u64;
    }
    out
}

/// `r_4(m)` for all `m <= max_value`, Jacobi: `8 sum_{d | m, 4 !| d} d`.
pub fn r4_table(max_value: u64) -> Vec<u64> {
    let m = max_value as usize;
    let mut out = vec![0u64; m + 1];
    out[0] = 1;
    let mut d = 1usize;
    while d <= m {
        if !d.is_multiple_of(4) {
            let mut k = d;
            while k <= m {
                out[k] += 8 * d as u64;
                k += d;
            }
        }
        d += 1;
    }
    out
}

/// `r_3(m)` from an `r_2` table: `r_3(m) = sum_x r_2(m - x^2)`.
pub fn r3_from_r2(m: u64, r2: &[u64]) -> u64 {
    let mut total = r2[m as usize];
    let mut x = 1u64;
    while x * x <= m {
        total += 2 * r2[(m - x * x) as usize];
        x += 1;
    }
    total
}

/// Per-value `r_2` by direct divisor enumeration (oracle).
pub fn r2_divisor(m: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    let mut diff: i64 = 0;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            for div in [d, m / d] {
                if d * d == m && div != d {
                    continue;
                }
                match div % 4 {
                    1 => diff += 1,
                    3 => diff -= 1,
                    _ => {}
                }
                if d * d == m {
                    break;
                }
            }
        }
        d += 1;
    }
    debug_assert!(diff >= 0);
    4 * diff as u64
}

/// Per-value `r_4` by direct divisor enumeration (oracle).
pub fn r4_divisor(m: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    let mut sum = 0u64;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            if !d.is_multiple_of(4) {
                sum += d;
            }
            let other = m / d;
            if other != d && !other.is_multiple_of(4) {
                sum += other;
            }
        }
        d += 1;
    }
    8 * sum
}

/// Number of Eisenstein integers of norm `m`:
/// `6 (d_{1 mod 3}(m) - d_{2 mod 3}(m))` for `m >= 1` (oracle).
pub fn eisenstein_divisor(m: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    let mut diff: i64 = 0;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut push = |div: u64| match div % 3 {
                1 => diff += 1,
                2 => diff -= 1,
                _ => {}
            };
            push(d);
            if m / d != d {
                push(m / d);
            }
        }
        d += 1;
    }
    debug_assert!(diff >= 0);
    6 * diff as u64
}

/// Number of Hurwitz quaternions of norm `m`: `24 * sigma_odd(m)` for
/// `m >= 1` (oracle).
pub fn hurwitz_divisor(m: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    let mut sum = 0u64;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            if d % 2 == 1 {
                sum += d;
            }
            let other = m / d;
            if other != d && other % 2 == 1 {
                sum += other;
            }
        }
        d += 1;
    }
    24 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r2_small_values() {
        let t = r2_table(25);
        assert_eq!(t[0], 1);
        assert_eq!(t[1], 4);
        assert_eq!(t[2], 4);
        assert_eq!(t[3], 0);
        assert_eq!(t[4], 4);
        assert_eq!(t[5], 8);
        assert_eq!(t[25], 12);
    }

    #[test]
    fn r4_small_values() {
        let t = r4_table(4);
        assert_eq!(t[1], 8);
        assert_eq!(t[2], 24);
        assert_eq!(t[3], 32);
        assert_eq!(t[4], 24);
    }

    #[test]
    fn tables_match_divisor_oracles() {
        let r2 = r2_table(500);
        let r4 = r4_table(500);
        for m in 0..=500u64 {
            assert_eq!(r2[m as usize], r2_divisor(m), "r2({m})");
            assert_eq!(r4[m as usize], r4_divisor(m), "r4({m})");
        }
    }

    #[test]
    fn r3_brute_force() {
        let r2 = r2_table(100);
        for m in 0..=100i64 {
            let mut brute = 0u64;
            for x in -10..=10i64 {
                for y in -10..=10i64 {
                    for z in -10..=10i64 {
                        if x * x + y * y + z * z == m {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(r3_from_r2(m as u64, &r2), brute, "r3({m})");
        }
    }
}
