//! Value histograms of the coordinate maps `z -> c |z|^2` over `Z/p^j`,
//! compressed as class functions.
//!
//! For `p` odd, every such histogram `h(v) = #{z : c |z|^2 = v mod p^j}` is
//! invariant under multiplication of `v` by squares of units (substitute
//! `z -> t z`), so it is constant on the classes
//! `(valuation e, quadratic class of the unit part)` plus the zero class —
//! `2j + 1` classes in all. Convolving class functions stays within class
//! functions, so the full (n+1)-fold convolution of the density count runs
//! on vectors of length `2j + 1` with one brute-forced structure tensor per
//! modulus, instead of on histograms of length `p^j`.
//!
//! `p = 2` uses plain dense histograms; the modulus `2^j` stays tiny.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::ScalarDomain;
use crate::{Budget, Error, Result};

fn pow_u64(p: u64, e: u32) -> Result<u64> {
    (0..e)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .ok_or(Error::Overflow("p^j".into()))
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol of a unit `u` mod an odd prime `p`: `true` iff residue.
fn is_quadratic_residue(u: u64, p: u64) -> bool {
    debug_assert!(!u.is_multiple_of(p));
    pow_mod(u, (p - 1) / 2, p) == 1
}

/// The class structure of `Z/p^j` under multiplication by unit squares
/// (`p` odd): index `2e + s` for nonzero valuation-`e` values with unit part
/// in the residue (`s = 0`) or non-residue (`s = 1`) class, and `2j` for 0.
#[derive(Debug, Clone)]
pub struct ClassStructure {
    pub p: u64,
    pub j: u32,
    pub q: u64,
    nonresidue: u64,
}

impl ClassStructure {
    pub fn new(p: u64, j: u32) -> Result<Self> {
        debug_assert!(p % 2 == 1 && p > 2);
        let q = pow_u64(p, j)?;
        let nonresidue = (2..p)
            .find(|&g| !is_quadratic_residue(g, p))
            .expect("odd primes have non-residues");
        Ok(ClassStructure { p, j, q, nonresidue })
    }

    pub fn class_count(&self) -> usize {
        2 * self.j as usize + 1
    }

    pub fn zero_class(&self) -> usize {
        2 * self.j as usize
    }

    pub fn class_of(&self, v: u64) -> usize {
        if v == 0 {
            return self.zero_class();
        }
        let mut e = 0u32;
        let mut u = v;
        while u.is_multiple_of(self.p) {
            u /= self.p;
            e += 1;
        }
        let s = if is_quadratic_residue(u % self.p, self.p) { 0 } else { 1 };
        2 * e as usize + s
    }

    /// A representative of each class.
    pub fn representative(&self, class: usize) -> u64 {
        if class == self.zero_class() {
            return 0;
        }
        let e = (class / 2) as u32;
        let s = class % 2;
        let pe = pow_u64(self.p, e).unwrap();
        if s == 0 {
            pe
        } else {
            pe * self.nonresidue
        }
    }

    /// Number of values in each class.
    pub fn class_size(&self, class: usize) -> u64 {
        if class == self.zero_class() {
            return 1;
        }
        let e = (class / 2) as u32;
        pow_u64(self.p, self.j - e - 1).unwrap() * (self.p - 1) / 2
    }
}

/// A class function on `Z/p^j` (odd `p`), e.g. a coordinate histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassProfile {
    pub counts: Vec<BigUint>, // indexed by class
}

impl ClassProfile {
    fn zeros(structure: &ClassStructure) -> Self {
        ClassProfile {
            counts: vec![BigUint::zero(); structure.class_count()],
        }
    }
}

/// The convolution structure tensor: `tensor[ct][c1][c2]` counts pairs
/// `(v1, v2)` with `v1` in class `c1`, `v2` in class `c2` and
/// `v1 + v2 = rep(ct)`. Computed by one `O(classes * q)` sweep.
#[derive(Debug, Clone)]
pub struct ConvTensor {
    classes: usize,
    data: Vec<u64>, // [ct][c1][c2]
}

impl ConvTensor {
    pub fn new(structure: &ClassStructure) -> Self {
        let classes = structure.class_count();
        let q = structure.q;
        // precompute class of every value once
        let class_table: Vec<u8> = (0..q).map(|v| structure.class_of(v) as u8).collect();
        let mut data = vec![0u64; classes * classes * classes];
        for ct in 0..classes {
            let rep = structure.representative(ct);
            let base = ct * classes * classes;
            for v1 in 0..q {
                let c1 = class_table[v1 as usize] as usize;
                let v2 = (rep + q - v1 % q) % q;
                let c2 = class_table[v2 as usize] as usize;
                data[base + c1 * classes + c2] += 1;
            }
        }
        ConvTensor { classes, data }
    }

    /// `(f * g)` as a class function.
    pub fn convolve(&self, f: &ClassProfile, g: &ClassProfile) -> ClassProfile {
        let n = self.classes;
        let mut out = vec![BigUint::zero(); n];
        for (ct, slot) in out.iter_mut().enumerate() {
            let base = ct * n * n;
            let mut acc = BigUint::zero();
            for c1 in 0..n {
                if f.counts[c1].is_zero() {
                    continue;
                }
                for c2 in 0..n {
                    let w = self.data[base + c1 * n + c2];
                    if w == 0 || g.counts[c2].is_zero() {
                        continue;
                    }
                    acc += &f.counts[c1] * &g.counts[c2] * BigUint::from(w);
                }
            }
            *slot = acc;
        }
        ClassProfile { counts: out }
    }
}

/// Histogram profile of `x -> c x^2` over `Z/p^j` (`p` odd), brute force.
pub fn real_square_profile(structure: &ClassStructure, c: i64) -> Result<ClassProfile> {
    let q = structure.q;
    let c_red = c.rem_euclid(q as i64) as u64;
    let mut acc = vec![BigUint::zero(); structure.class_count()];
    for x in 0..q {
        let sq = ((x as u128 * x as u128) % q as u128) as u64;
        let v = ((sq as u128 * c_red as u128) % q as u128) as u64;
        acc[structure.class_of(v)] += BigUint::one();
    }
    normalize_profile(structure, acc)
}

/// Histogram profile of `z -> c |z|^2` over `(O/p^j)` for an imaginary
/// quadratic order (`p` odd).
///
/// For `p` not dividing the field data the profile has a closed form
/// (split: `(e+1)(p-1) p^(j-1)` per nonzero valuation-`e` class; inert: the
/// same with `(p+1)` on even valuations only); ramified primes fall back
/// to a budget-guarded brute-force sweep. The closed form is validated
/// against the brute-force path in tests.
pub fn imag_norm_profile(
    structure: &ClassStructure,
    domain: ScalarDomain,
    c: i64,
    budget: Budget,
) -> Result<ClassProfile> {
    let d = match domain {
        ScalarDomain::ImagQuad { d } => d as u64,
        _ => {
            return Err(Error::UnsupportedDomain(
                "imag_norm_profile needs an imaginary quadratic domain".into(),
            ))
        }
    };
    let p = structure.p;
    let j = structure.j;
    let q = structure.q;
    let c_red = c.rem_euclid(q as i64) as u64;
    if c_red == 0 {
        let mut prof = ClassProfile::zeros(structure);
        prof.counts[structure.zero_class()] =
            BigUint::from(q) * BigUint::from(q);
        return Ok(prof);
    }
    let mut s = 0u32;
    let mut c_unit = c_red;
    while c_unit.is_multiple_of(p) {
        c_unit /= p;
        s += 1;
    }
    let m = j - s; // level of the base norm histogram; >= 1 since c_red != 0
    if d % p == 0 {
        // ramified: brute force at level j directly
        return imag_norm_profile_brute(structure, domain, c, budget);
    }
    // closed form at level m
    let base = closed_norm_profile(p, m, d)?;
    // coefficient transform: flip the square class when c_unit is a
    // non-residue, scale by p^(2s), shift valuations by s
    let flip = if is_quadratic_residue(c_unit % p, p) { 0 } else { 1 };
    let scale = BigUint::from(pow_u64(p, s)?).pow(2);
    let mut out = ClassProfile::zeros(structure);
    for e in 0..m {
        for sigma in 0..2usize {
            let src = 2 * e as usize + (sigma ^ flip);
            let dst = 2 * (e + s) as usize + sigma;
            out.counts[dst] = &base[src] * &scale;
        }
    }
    out.counts[structure.zero_class()] = &base[2 * m as usize] * &scale;
    Ok(out)
}

/// Closed-form norm histogram profile at level `p^m` for `p` odd not
/// dividing `d` (unit coefficient). Index layout as in [`ClassStructure`]
/// for exponent `m`.
fn closed_norm_profile(p: u64, m: u32, d: u64) -> Result<Vec<BigUint>> {
    // split iff -d is a nonzero square mod p
    let md = (p - d % p) % p;
    debug_assert!(md != 0);
    let split = is_quadratic_residue(md, p);
    let mut counts = vec![BigUint::zero(); 2 * m as usize + 1];
    let pj1 = BigUint::from(pow_u64(p, m - 1)?);
    let mut nonzero_mass = BigUint::zero();
    for e in 0..m {
        let value = if split {
            BigUint::from(e as u64 + 1) * BigUint::from(p - 1) * &pj1
        } else if e % 2 == 0 {
            BigUint::from(p + 1) * &pj1
        } else {
            BigUint::zero()
        };
        // both square classes get the same value (norm groups of unramified
        // extensions contain all units)
        counts[2 * e as usize] = value.clone();
        counts[2 * e as usize + 1] = value.clone();
        let class_count = BigUint::from(pow_u64(p, m - e - 1)?) * BigUint::from(p - 1);
        nonzero_mass += value * class_count;
    }
    let total = BigUint::from(pow_u64(p, m)?).pow(2);
    counts[2 * m as usize] = total - nonzero_mass;
    Ok(counts)
}

/// Brute-force norm histogram profile; `O(p^(2j))`, budget guarded.
pub fn imag_norm_profile_brute(
    structure: &ClassStructure,
    domain: ScalarDomain,
    c: i64,
    budget: Budget,
) -> Result<ClassProfile> {
    let q = structure.q;
    budget.check(q as u128 * q as u128, "norm histogram brute force")?;
    let d = match domain {
        ScalarDomain::ImagQuad { d } => d as i128,
        _ => unreachable!(),
    };
    let half = domain.half_basis();
    let c_red = c.rem_euclid(q as i64) as u128;
    let qq = q as u128;
    let mut acc = vec![BigUint::zero(); structure.class_count()];
    for x in 0..q {
        for y in 0..q {
            let (a, b) = (x as i128, y as i128);
            let n = if half {
                a * a + a * b + b * b * ((1 + d) / 4)
            } else {
                a * a + d * b * b
            };
            let v = ((n.rem_euclid(qq as i128) as u128) * c_red % qq) as u64;
            acc[structure.class_of(v)] += BigUint::one();
        }
    }
    normalize_profile(structure, acc)
}

/// Divide accumulated per-class mass by class sizes; exactness of the
/// division is itself a check that the histogram is a class function.
fn normalize_profile(structure: &ClassStructure, acc: Vec<BigUint>) -> Result<ClassProfile> {
    let mut counts = Vec::with_capacity(acc.len());
    for (cls, mass) in acc.into_iter().enumerate() {
        let size = BigUint::from(structure.class_size(cls));
        let (qout, rem) = num_integer::Integer::div_rem(&mass, &size);
        if !rem.is_zero() {
            return Err(Error::InvalidParameter(
                "histogram is not constant on square classes (internal invariant)".into(),
            ));
        }
        counts.push(qout);
    }
    Ok(ClassProfile { counts })
}

// ---------------------------------------------------------------------------
// Dense path for p = 2
// ---------------------------------------------------------------------------

/// Dense histogram of `x -> c x^2` (real) over `Z/2^j`.
pub fn dense_real_square_histogram(q: u64, c: i64) -> Vec<BigUint> {
    let c_red = c.rem_euclid(q as i64) as u128;
    let mut hist = vec![BigUint::zero(); q as usize];
    for x in 0..q {
        let v = ((x as u128 * x as u128) % q as u128 * c_red % q as u128) as usize;
        hist[v] += BigUint::one();
    }
    hist
}

/// Dense histogram of `z -> c |z|^2` (imaginary quadratic) over `O/2^j`.
pub fn dense_imag_norm_histogram(q: u64, domain: ScalarDomain, c: i64) -> Vec<BigUint> {
    let d = match domain {
        ScalarDomain::ImagQuad { d } => d as i128,
        _ => unreachable!(),
    };
    let half = domain.half_basis();
    let c_red = c.rem_euclid(q as i64) as u128;
    let qq = q as u128;
    let mut hist = vec![BigUint::zero(); q as usize];
    for x in 0..q {
        for y in 0..q {
            let (a, b) = (x as i128, y as i128);
            let n = if half {
                a * a + a * b + b * b * ((1 + d) / 4)
            } else {
                a * a + d * b * b
            };
            let v = ((n.rem_euclid(qq as i128) as u128) * c_red % qq) as usize;
            hist[v] += BigUint::one();
        }
    }
    hist
}

/// Dense cyclic convolution mod `q`.
pub fn dense_convolve(f: &[BigUint], g: &[BigUint]) -> Vec<BigUint> {
    let q = f.len();
    let mut out = vec![BigUint::zero(); q];
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (k, gk) in g.iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            out[(i + k) % q] += fi * gk;
        }
    }
    out
}
