//! Exact evaluation of the counting functions: the slab count
//! `N_t = #{x : Q[x] = -k, |x_{n+1}| <= t}` and the ball count
//! `N~_s = #{x : Q[x] = -k, ||x|| <= s}`.
//!
//! The primary algorithm never materializes solutions: it groups them by the
//! norm `u` of the last coordinate, multiplying the shell census `R_O(u)` by
//! the representation number `r_A(a u - k)` of the definite block. An
//! independent brute-force oracle over coordinate boxes is provided for
//! validation.

pub mod sieves;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{norm_shells, OrderElement, ScalarDomain};
use crate::forms::HermitianForm;
use crate::primes::isqrt_u64;
use crate::{Budget, Error, Result};

/// Which constraint produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// `|x_{n+1}| <= t`
    Slab,
    /// `||x|| <= s`
    Ball,
}

/// One shell `u = |x_{n+1}|^2` of the grouped count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShellTerm {
    /// Norm of the last coordinate.
    pub u: u64,
    /// `R_O(u)`: number of order elements of that norm.
    pub census: u64,
    /// `r_A(a u - k)`: representation number of the definite block.
    pub rep: u64,
    /// `census * rep`.
    pub contribution: u128,
}

/// Exact count with its per-shell breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub mode: CountMode,
    /// The constraint bound `t` (slab) or `s` (ball), as given.
    pub bound: BigRational,
    /// Effective integer constraint: `norm(x_{n+1}) <= norm_bound`.
    pub norm_bound: u64,
    pub total: u128,
    pub shells: Vec<ShellTerm>,
}

/// Evaluator for `r_A(m)`, either a divisor-formula fast path (identity
/// forms over `Z` and `Z[i]`) or a generic enumeration table.
enum RepSource {
    Table(Vec<u64>),
    ThreeSquares { r2: Vec<u64> },
}

impl RepSource {
    fn get(&self, m: u64) -> u64 {
        match self {
            RepSource::Table(t) => t[m as usize],
            RepSource::ThreeSquares { r2 } => sieves::r3_from_r2(m, r2),
        }
    }
}

fn is_identity_block(q: &HermitianForm) -> bool {
    q.is_diagonal() && q.diagonal_coeffs().iter().all(|&c| c == 1)
}

fn build_rep_source(q: &HermitianForm, max_value: u64, budget: Budget) -> Result<RepSource> {
    let fast: Option<RepSource> = if is_identity_block(q) {
        match (q.domain(), q.n()) {
            (ScalarDomain::Real, 2) => Some(RepSource::Table(sieves::r2_table(max_value))),
            (ScalarDomain::Real, 3) => Some(RepSource::ThreeSquares {
                r2: sieves::r2_table(max_value),
            }),
            (ScalarDomain::Real, 4) => Some(RepSource::Table(sieves::r4_table(max_value))),
            (ScalarDomain::ImagQuad { d: 1 }, 2) => {
                Some(RepSource::Table(sieves::r4_table(max_value)))
            }
            _ => None,
        }
    } else {
        None
    };
    match fast {
        Some(source) => {
            // cross-check the sieve against direct enumeration on a prefix
            let prefix = max_value.min(64);
            let direct = q.rep_numbers(prefix, budget)?;
            for (m, &expect) in direct.iter().enumerate() {
                if source.get(m as u64) != expect {
                    return Err(Error::InvalidParameter(format!(
                        "fast-path representation numbers disagree with enumeration at m = {m}"
                    )));
                }
            }
            Ok(source)
        }
        None => Ok(RepSource::Table(q.rep_numbers(max_value, budget)?)),
    }
}

fn grouped_count(
    q: &HermitianForm,
    k: u64,
    norm_bound: u64,
    budget: Budget,
) -> Result<(u128, Vec<ShellTerm>)> {
    let a = q.a() as i128;
    let m_max = a * norm_bound as i128 - k as i128;
    if m_max < 0 {
        return Ok((0, Vec::new()));
    }
    let shells_in = norm_shells(q.domain(), norm_bound, budget)?;
    let rep = build_rep_source(q, m_max as u64, budget)?;
    let mut total: u128 = 0;
    let mut shells = Vec::new();
    for (u, census) in shells_in {
        let m = a * u as i128 - k as i128;
        if m < 0 {
            continue;
        }
        let r = rep.get(m as u64);
        let contribution = census as u128 * r as u128;
        total += contribution;
        shells.push(ShellTerm {
            u,
            census,
            rep: r,
            contribution,
        });
    }
    Ok((total, shells))
}

fn floor_to_u64(x: &BigRational, what: &str) -> Result<u64> {
    if x.is_negative() {
        return Err(Error::InvalidParameter(format!("{what} must be nonnegative")));
    }
    x.floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} out of range")))
}

/// `N_t(Q, -k)`: solutions of `Q[x] = -k` with `|x_{n+1}| <= t`.
///
/// `t` is an exact rational; the effective constraint is
/// `norm(x_{n+1}) <= floor(t^2)`.
pub fn count_slab(
    q: &HermitianForm,
    k: u64,
    t: &BigRational,
    budget: Budget,
) -> Result<CountResult> {
    require_k(k)?;
    let tsq = t * t;
    let norm_bound = floor_to_u64(&tsq, "t^2")?;
    let (total, shells) = grouped_count(q, k, norm_bound, budget)?;
    Ok(CountResult {
        mode: CountMode::Slab,
        bound: t.clone(),
        norm_bound,
        total,
        shells,
    })
}

/// Slab count with the squared bound given directly (used for the exact
/// slab/ball identity, where `t = sqrt((s^2+k)/(2a))` is irrational).
pub fn count_slab_with_t_squared(
    q: &HermitianForm,
    k: u64,
    t_squared: &BigRational,
    budget: Budget,
) -> Result<CountResult> {
    require_k(k)?;
    let norm_bound = floor_to_u64(t_squared, "t^2")?;
    let (total, shells) = grouped_count(q, k, norm_bound, budget)?;
    Ok(CountResult {
        mode: CountMode::Slab,
        bound: t_squared.clone(),
        norm_bound,
        total,
        shells,
    })
}

/// `N~_s(Q, -k)`: solutions with `||x||^2 = A[xhat] + a |x_{n+1}|^2 <= s^2`.
///
/// On the solution set `||x||^2 = 2a |x_{n+1}|^2 - k`, so this is the slab
/// count with `norm(x_{n+1}) <= floor((s^2 + k) / (2a))`, exactly.
pub fn count_ball(
    q: &HermitianForm,
    k: u64,
    s: &BigRational,
    budget: Budget,
) -> Result<CountResult> {
    require_k(k)?;
    let two_a = BigRational::from_integer(BigInt::from(2 * q.a()));
    let tsq = (s * s + BigRational::from_integer(BigInt::from(k))) / two_a;
    let norm_bound = floor_to_u64(&tsq, "(s^2+k)/(2a)")?;
    let (total, shells) = grouped_count(q, k, norm_bound, budget)?;
    Ok(CountResult {
        mode: CountMode::Ball,
        bound: s.clone(),
        norm_bound,
        total,
        shells,
    })
}

fn require_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("k must be a positive integer".into()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Per-coordinate box bound for `A[xhat] <= m`: `y_l^2 <= m * (G^-1)_ll`,
/// with the Gram inverse computed exactly.
fn gram_box_bounds(q: &HermitianForm, m: u64) -> Result<Vec<i64>> {
    let rf = q.realify()?;
    let d = rf.dim();
    // invert G = TwoG/2 by exact Gauss-Jordan
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::new(BigInt::from(rf.two_gram()[i * d + j]), BigInt::from(2)))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    BigRational::from_integer(BigInt::from(if i == j { 1 } else { 0 }))
                })
                .collect()
        })
        .collect();
    for col in 0..d {
        let pivot_row = (col..d)
            .find(|&r| !a[r][col].is_zero())
            .expect("positive definite matrix is invertible");
        a.swap(pivot_row, col);
        inv.swap(pivot_row, col);
        let pivot = a[col][col].clone();
        for j in 0..d {
            a[col][j] = &a[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..d {
                let s1 = &factor * &a[col][j];
                a[r][j] = &a[r][j] - &s1;
                let s2 = &factor * &inv[col][j];
                inv[r][j] = &inv[r][j] - &s2;
            }
        }
    }
    let m_rat = BigRational::from_integer(BigInt::from(m));
    let mut bounds = Vec::with_capacity(d);
    for (l, row) in inv.iter().enumerate() {
        let cap = (&m_rat * &row[l]).floor().to_integer();
        let cap = cap.to_u64().ok_or(Error::Overflow("oracle box bound".into()))?;
        bounds.push(isqrt_u64(cap) as i64);
    }
    Ok(bounds)
}

/// Histogram of `A[xhat]` over the full coordinate box containing the ball
/// `A[xhat] <= m_max`, by direct evaluation.
fn box_rep_histogram(q: &HermitianForm, m_max: u64, budget: Budget) -> Result<Vec<u64>> {
    let bounds = gram_box_bounds(q, m_max)?;
    let mut volume: u128 = 1;
    for &b in &bounds {
        volume = volume.saturating_mul(2 * b as u128 + 1);
    }
    budget.check(volume, "oracle box enumeration")?;
    let rf = q.realify()?;
    let mut hist = vec![0u64; m_max as usize + 1];
    let mut y = vec![0i64; bounds.len()];
    fn recurse(
        rf: &crate::forms::RealifiedForm,
        bounds: &[i64],
        level: usize,
        y: &mut Vec<i64>,
        m_max: u64,
        hist: &mut [u64],
    ) {
        if level == bounds.len() {
            let v2 = rf.value_times_two(y);
            debug_assert!(v2 % 2 == 0);
            let v = v2 / 2;
            if v >= 0 && v <= m_max as i128 {
                hist[v as usize] += 1;
            }
            return;
        }
        for c in -bounds[level]..=bounds[level] {
            y[level] = c;
            recurse(rf, bounds, level + 1, y, m_max, hist);
        }
        y[level] = 0;
    }
    recurse(&rf, &bounds, 0, &mut y, m_max, &mut hist);
    Ok(hist)
}

/// Histogram of `norm(x_{n+1})` over a plain coordinate box covering
/// `norm <= bound` (independent of the tight shell walkers).
fn box_norm_histogram(domain: ScalarDomain, bound: u64, budget: Budget) -> Result<Vec<u64>> {
    let r = domain.rank();
    let c = isqrt_u64(4 * bound) as i64 + 1;
    let volume = (2 * c as u128 + 1).pow(r as u32);
    budget.check(volume, "oracle last-coordinate box")?;
    let mut hist = vec![0u64; bound as usize + 1];
    let mut coords = [0i64; 4];
    fn recurse(
        domain: ScalarDomain,
        r: usize,
        c: i64,
        level: usize,
        coords: &mut [i64; 4],
        bound: u64,
        hist: &mut [u64],
    ) {
        if level == r {
            let x = OrderElement::from_coords(&coords[..r]);
            let n = domain.norm_i128(&x);
            if n <= bound as i128 {
                hist[n as usize] += 1;
            }
            return;
        }
        for v in -c..=c {
            coords[level] = v;
            recurse(domain, r, c, level + 1, coords, bound, hist);
        }
        coords[level] = 0;
    }
    recurse(domain, r, c, 0, &mut coords, bound, &mut hist);
    Ok(hist)
}

fn oracle_count(
    q: &HermitianForm,
    k: u64,
    norm_bound: u64,
    budget: Budget,
) -> Result<(u128, Vec<ShellTerm>)> {
    let a = q.a() as i128;
    let m_max = a * norm_bound as i128 - k as i128;
    if m_max < 0 {
        return Ok((0, Vec::new()));
    }
    let rep_hist = box_rep_histogram(q, m_max as u64, budget)?;
    let norm_hist = box_norm_histogram(q.domain(), norm_bound, budget)?;
    let mut total: u128 = 0;
    let mut shells = Vec::new();
    for (u, &census) in norm_hist.iter().enumerate() {
        if census == 0 {
            continue;
        }
        let m = a * u as i128 - k as i128;
        if m < 0 {
            continue;
        }
        let r = rep_hist[m as usize];
        let contribution = census as u128 * r as u128;
        total += contribution;
        shells.push(ShellTerm {
            u: u as u64,
            census,
            rep: r,
            contribution,
        });
    }
    Ok((total, shells))
}

/// Independent oracle for [`count_slab`]: direct enumeration of coordinate
/// boxes with exact evaluation, sharing none of the sieves, shell walkers
/// or pruned lattice enumeration of the primary path.
pub fn count_slab_oracle(
    q: &HermitianForm,
    k: u64,
    t: &BigRational,
    budget: Budget,
) -> Result<CountResult> {
    require_k(k)?;
    let tsq = t * t;
    let norm_bound = floor_to_u64(&tsq, "t^2")?;
    let (total, shells) = oracle_count(q, k, norm_bound, budget)?;
    Ok(CountResult {
        mode: CountMode::Slab,
        bound: t.clone(),
        norm_bound,
        total,
        shells,
    })
}

/// Independent oracle for [`count_ball`]; the ball condition is evaluated
/// through the exact identity `||x||^2 = 2a norm(x_{n+1}) - k`.
pub fn count_ball_oracle(
    q: &HermitianForm,
    k: u64,
    s: &BigRational,
    budget: Budget,
) -> Result<CountResult> {
    require_k(k)?;
    let two_a = BigRational::from_integer(BigInt::from(2 * q.a()));
    let tsq = (s * s + BigRational::from_integer(BigInt::from(k))) / two_a;
    let norm_bound = floor_to_u64(&tsq, "(s^2+k)/(2a)")?;
    let (total, shells) = oracle_count(q, k, norm_bound, budget)?;
    Ok(CountResult {
        mode: CountMode::Ball,
        bound: s.clone(),
        norm_bound,
        total,
        shells,
    })
}

// ---------------------------------------------------------------------------
// Witness search
// ---------------------------------------------------------------------------

/// Searches for one solution of `Q[x] = -k` with `|x_{n+1}| <= t_max`.
///
/// Returns `None` when no solution exists in the slab; absence does not
/// certify that `-k` is unrepresented. The witness is deterministic:
/// minimal last-coordinate norm, then lexicographically greatest
/// coordinates.
pub fn first_representation(
    q: &HermitianForm,
    k: u64,
    t_max: &BigRational,
    budget: Budget,
) -> Result<Option<Vec<OrderElement>>> {
    require_k(k)?;
    let tsq = t_max * t_max;
    let norm_bound = floor_to_u64(&tsq, "t_max^2")?;
    let a = q.a() as i128;
    let shells = norm_shells(q.domain(), norm_bound, budget)?;
    for (u, _) in shells {
        let m = a * u as i128 - k as i128;
        if m < 0 {
            continue;
        }
        if let Some(xhat) = find_block_witness(q, m as u64, budget)? {
            let last = find_element_of_norm(q.domain(), u)
                .expect("census reported a nonempty shell");
            let mut x = xhat;
            x.push(last);
            debug_assert_eq!(q.evaluate(&x).unwrap(), -(k as i128));
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Lexicographically greatest `xhat` with `A[xhat] = m`, if any.
fn find_block_witness(
    q: &HermitianForm,
    m: u64,
    budget: Budget,
) -> Result<Option<Vec<OrderElement>>> {
    let bounds = gram_box_bounds(q, m)?;
    let mut volume: u128 = 1;
    for &b in &bounds {
        volume = volume.saturating_mul(2 * b as u128 + 1);
    }
    budget.check(volume, "witness search box")?;
    let rf = q.realify()?;
    let mut y = vec![0i64; bounds.len()];
    fn recurse(
        rf: &crate::forms::RealifiedForm,
        bounds: &[i64],
        level: usize,
        y: &mut Vec<i64>,
        m: u64,
    ) -> bool {
        if level == bounds.len() {
            return rf.value_times_two(y) == 2 * m as i128;
        }
        let mut c = bounds[level];
        while c >= -bounds[level] {
            y[level] = c;
            if recurse(rf, bounds, level + 1, y, m) {
                return true;
            }
            c -= 1;
        }
        y[level] = 0;
        false
    }
    if recurse(&rf, &bounds, 0, &mut y, m) {
        Ok(Some(rf.element_of(&y)))
    } else {
        Ok(None)
    }
}

/// Lexicographically greatest order element of exact norm `u`.
fn find_element_of_norm(domain: ScalarDomain, u: u64) -> Option<OrderElement> {
    let r = domain.rank();
    let c = isqrt_u64(4 * u) as i64 + 1;
    let mut coords = [0i64; 4];
    fn recurse(
        domain: ScalarDomain,
        r: usize,
        c: i64,
        level: usize,
        coords: &mut [i64; 4],
        u: u64,
    ) -> bool {
        if level == r {
            let x = OrderElement::from_coords(&coords[..r]);
            return domain.norm_i128(&x) == u as i128;
        }
        let mut v = c;
        while v >= -c {
            coords[level] = v;
            if recurse(domain, r, c, level + 1, coords, u) {
                return true;
            }
            v -= 1;
        }
        coords[level] = 0;
        false
    }
    if recurse(domain, r, c, 0, &mut coords, u) {
        Some(OrderElement::from_coords(&coords[..r]))
    } else {
        None
    }
}
