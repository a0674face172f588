//! p-adic densities of the representation `Q[x] = -k` by exact residue
//! counting, and their truncated Euler product.
//!
//! The density at `p` is the stabilized value of
//! `d_j = p^(-j (r(n+1) - 1)) * #{x in (O/p^j O)^(n+1) : Q[x] = -k mod p^j}`.
//! Counts are exact big integers, the `d_j` exact rationals; only reporting
//! converts to decimal.

pub mod profiles;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{ResidueRing, ScalarDomain};
use crate::forms::HermitianForm;
use crate::primes::primes_up_to;
use crate::{Budget, Error, Result};
use profiles::{ClassStructure, ConvTensor};

fn require_supported_domain(q: &HermitianForm) -> Result<()> {
    match q.domain() {
        ScalarDomain::Hurwitz => Err(Error::UnsupportedDomain(
            "densities are defined here for the real and imaginary quadratic cases only".into(),
        )),
        _ => Ok(()),
    }
}

/// `#{x in (O/p^j O)^(n+1) : Q[x] = -k mod p^j}`, choosing the convolution
/// path for diagonal `A` and direct product enumeration otherwise.
pub fn count_mod(
    q: &HermitianForm,
    k: u64,
    p: u64,
    j: u32,
    budget: Budget,
) -> Result<BigUint> {
    if q.is_diagonal() {
        count_mod_convolution(q, k, p, j, budget)
    } else {
        count_mod_direct(q, k, p, j, budget)
    }
}

/// Convolution path: per-coordinate value histograms of `c |z|^2` folded
/// cyclically. Requires a diagonal block `A`.
pub fn count_mod_convolution(
    q: &HermitianForm,
    k: u64,
    p: u64,
    j: u32,
    budget: Budget,
) -> Result<BigUint> {
    require_supported_domain(q)?;
    if !q.is_diagonal() {
        return Err(Error::InvalidParameter(
            "convolution path requires a diagonal block A".into(),
        ));
    }
    if j == 0 {
        return Err(Error::InvalidParameter("j must be >= 1".into()));
    }
    let mut coeffs = q.diagonal_coeffs();
    coeffs.push(-(q.a() as i64));
    let modulus = (0..j)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .ok_or(Error::Overflow("p^j".into()))?;
    let target = (-(k as i64)).rem_euclid(modulus as i64) as u64;

    if p == 2 {
        // dense path; the modulus stays tiny
        budget.check(
            (modulus as u128) * (modulus as u128),
            "dense residue histogram",
        )?;
        let mut folded: Option<Vec<BigUint>> = None;
        for &c in &coeffs {
            let hist = match q.domain() {
                ScalarDomain::Real => profiles::dense_real_square_histogram(modulus, c),
                ScalarDomain::ImagQuad { .. } => {
                    profiles::dense_imag_norm_histogram(modulus, q.domain(), c)
                }
                ScalarDomain::Hurwitz => unreachable!(),
            };
            folded = Some(match folded {
                None => hist,
                Some(acc) => profiles::dense_convolve(&acc, &hist),
            });
        }
        return Ok(folded.unwrap()[target as usize].clone());
    }

    let structure = ClassStructure::new(p, j)?;
    let tensor = ConvTensor::new(&structure);
    let mut folded: Option<profiles::ClassProfile> = None;
    for &c in &coeffs {
        let prof = match q.domain() {
            ScalarDomain::Real => profiles::real_square_profile(&structure, c)?,
            ScalarDomain::ImagQuad { .. } => {
                profiles::imag_norm_profile(&structure, q.domain(), c, budget)?
            }
            ScalarDomain::Hurwitz => unreachable!(),
        };
        folded = Some(match folded {
            None => prof,
            Some(acc) => tensor.convolve(&acc, &prof),
        });
    }
    Ok(folded.unwrap().counts[structure.class_of(target)].clone())
}

/// Direct path: full product enumeration over `(O/p^j O)^(n+1)`.
pub fn count_mod_direct(
    q: &HermitianForm,
    k: u64,
    p: u64,
    j: u32,
    budget: Budget,
) -> Result<BigUint> {
    require_supported_domain(q)?;
    let ring = ResidueRing::new(q.domain(), p, j)?;
    let slots = q.n() + 1;
    let per_slot = ring.element_count()?;
    let total = (0..slots).try_fold(1u128, |acc, _| acc.checked_mul(per_slot)).ok_or(
        Error::Overflow("residue product space".into()),
    )?;
    budget.check(total, "direct residue enumeration")?;
    budget.check(per_slot, "residue ring elements")?;
    let elems: Vec<_> = ring.elements().collect();
    let target = ring.from_int(-(k as i64));

    if q.is_diagonal() {
        // per-slot scalar value tables, then an odometer sum
        let mut coeffs = q.diagonal_coeffs();
        coeffs.push(-(q.a() as i64));
        let modulus = ring.modulus();
        let tables: Vec<Vec<u64>> = coeffs
            .iter()
            .map(|&c| {
                let c_red = c.rem_euclid(modulus as i64) as u128;
                elems
                    .iter()
                    .map(|z| ((ring.norm(z) as u128 * c_red) % modulus as u128) as u64)
                    .collect()
            })
            .collect();
        let want = target.coords(1)[0];
        let mut count: u64 = 0;
        let mut idx = vec![0usize; slots];
        let mut partial = vec![0u64; slots + 1];
        let mut level = 0usize;
        loop {
            if level == slots {
                if partial[slots] == want {
                    count += 1;
                }
                // backtrack
                level -= 1;
                idx[level] += 1;
                while idx[level] == elems.len() {
                    idx[level] = 0;
                    if level == 0 {
                        return Ok(BigUint::from(count));
                    }
                    level -= 1;
                    idx[level] += 1;
                }
            }
            partial[level + 1] = (partial[level] + tables[level][idx[level]]) % modulus;
            level += 1;
        }
    } else {
        // evaluate the hermitian form in the residue ring per tuple
        let n = q.n();
        let entries: Vec<_> = (0..n * n)
            .map(|idx| ring.reduce(q.entry(idx / n, idx % n)))
            .collect();
        let a_red = ring.from_int(-(q.a() as i64));
        let mut count = BigUint::zero();
        let mut idx = vec![0usize; slots];
        loop {
            // Q[x] = sum conj(x_i) A_ij x_j - a |x_last|^2
            let mut acc = ring.zero();
            for i in 0..n {
                let ci = ring.conj(&elems[idx[i]]);
                for jj in 0..n {
                    let t = ring.mul(&ci, &ring.mul(&entries[i * n + jj], &elems[idx[jj]]));
                    acc = ring.add(&acc, &t);
                }
            }
            let last_norm = ring.from_int(ring.norm(&elems[idx[n]]) as i64);
            acc = ring.add(&acc, &ring.mul(&a_red, &last_norm));
            if acc == target {
                count += BigUint::one();
            }
            // odometer
            let mut l = slots;
            loop {
                if l == 0 {
                    return Ok(count);
                }
                l -= 1;
                idx[l] += 1;
                if idx[l] < elems.len() {
                    break;
                }
                idx[l] = 0;
            }
        }
    }
}

/// Stabilization trace of the p-adic density at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensityResult {
    pub p: u64,
    /// Raw counts for `j = 1..=j_used`.
    pub counts: Vec<BigUint>,
    /// `d_j = p^(-j(r(n+1)-1)) * count_j` for `j = 1..=j_used`, exact.
    pub trace: Vec<BigRational>,
    /// Declared stabilized: the last two trace entries agree exactly and
    /// the depth passed the bad-prime threshold.
    pub stabilized: bool,
    /// The stabilized value, when `stabilized`.
    pub value: Option<BigRational>,
    /// Minimal `j` at which stabilization may be declared.
    pub threshold_j: u32,
    /// Whether `p` divides `2 a k |det Q| |d_O|`.
    pub bad: bool,
}

fn valuation_bigint(n: &BigInt, p: u64) -> u32 {
    let mut v = 0u32;
    let p = BigInt::from(p);
    let mut n = n.abs();
    if n.is_zero() {
        return 0;
    }
    loop {
        let (quo, rem) = num_integer::Integer::div_rem(&n, &p);
        if !rem.is_zero() {
            return v;
        }
        n = quo;
        v += 1;
    }
}

/// `delta_p(Q, -k)`: computes `d_j` for increasing `j` until two successive
/// values agree exactly (past the bad-prime threshold) or `j_max` is hit.
pub fn local_density(
    q: &HermitianForm,
    k: u64,
    p: u64,
    j_max: u32,
    budget: Budget,
) -> Result<LocalDensityResult> {
    require_supported_domain(q)?;
    if j_max < 1 {
        return Err(Error::InvalidParameter("j_max must be >= 1".into()));
    }
    let det_a = q.det_a()?;
    if !det_a.is_integer() {
        return Err(Error::InvalidParameter(
            "determinant of an integral hermitian block must be a rational integer".into(),
        ));
    }
    let det_a = det_a.to_integer();
    let disc = q.domain().discriminant()?;
    // bad primes divide 2 a k |det Q| |d_O|
    let bad_product: BigInt =
        BigInt::from(2) * BigInt::from(q.a()) * BigInt::from(k) * det_a.abs()
            * BigInt::from(q.a())
            * BigInt::from(disc).abs();
    let bad = (&bad_product % BigInt::from(p)).is_zero();
    let threshold_j = if bad {
        // depth of reliable Hensel lifting: past v_p(4 a k det A)
        let v = valuation_bigint(
            &(BigInt::from(4) * BigInt::from(q.a()) * BigInt::from(k) * det_a.abs()),
            p,
        );
        v + 1
    } else {
        1
    };

    let r = q.domain().rank() as u32;
    let n1 = (q.n() + 1) as u32;
    let exponent = r * n1 - 1;
    let mut counts = Vec::new();
    let mut trace: Vec<BigRational> = Vec::new();
    let mut stabilized = false;
    let mut value = None;
    for j in 1..=j_max {
        let count = count_mod(q, k, p, j, budget)?;
        let denom = BigInt::from(p).pow(j * exponent);
        let d_j = BigRational::new(BigInt::from(count.clone()), denom);
        counts.push(count);
        trace.push(d_j);
        let len = trace.len();
        if len >= 2 && trace[len - 1] == trace[len - 2] && (j - 1) >= threshold_j {
            stabilized = true;
            value = Some(trace[len - 1].clone());
            break;
        }
    }
    Ok(LocalDensityResult {
        p,
        counts,
        trace,
        stabilized,
        value,
        threshold_j,
        bad,
    })
}

/// Truncated Euler product of the stabilized local densities.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensityProduct {
    pub p_max: u64,
    pub j_max: u32,
    /// Per-prime results, ascending in `p`.
    pub factors: Vec<LocalDensityResult>,
    /// Product of the stabilized factors, exact.
    pub value: BigRational,
    /// Primes dividing `2 a k |det Q| |d_O|` up to `p_max`.
    pub bad_primes: Vec<u64>,
    /// Good primes that failed to stabilize by `j_max` (excluded from the
    /// product, reported as warnings).
    pub unstabilized: Vec<u64>,
    /// Partial products at roughly `p_max/4`, `p_max/2` and `p_max`,
    /// exposing the convergence of the truncation.
    pub partial_trace: Vec<(u64, BigRational)>,
}

/// `prod_{p <= p_max} delta_p(Q, -k)`, evaluated exactly.
///
/// Fails if a bad prime does not stabilize by `j_max`; good primes failing
/// to stabilize are excluded and recorded as warnings. Primes run in
/// parallel; the product is multiplied in ascending order so the result is
/// independent of the schedule.
pub fn local_density_product(
    q: &HermitianForm,
    k: u64,
    p_max: u64,
    j_max: u32,
    budget: Budget,
) -> Result<LocalDensityProduct> {
    require_supported_domain(q)?;
    if p_max < 2 {
        return Err(Error::InvalidParameter("P_max must be >= 2".into()));
    }
    let primes = primes_up_to(p_max);
    let results: Vec<Result<LocalDensityResult>> = primes
        .par_iter()
        .map(|&p| local_density(q, k, p, j_max, budget))
        .collect();
    let mut factors = Vec::with_capacity(primes.len());
    for r in results {
        factors.push(r?);
    }
    let mut bad_primes = Vec::new();
    let mut unstabilized = Vec::new();
    let mut value = BigRational::one();
    let cutoffs = [(p_max / 4).max(2), (p_max / 2).max(2), p_max];
    let mut partial_trace: Vec<(u64, BigRational)> = Vec::new();
    let mut cutoff_idx = 0usize;
    for f in &factors {
        while cutoff_idx < cutoffs.len() && f.p > cutoffs[cutoff_idx] {
            partial_trace.push((cutoffs[cutoff_idx], value.clone()));
            cutoff_idx += 1;
        }
        if f.bad {
            bad_primes.push(f.p);
        }
        match (&f.value, f.bad) {
            (Some(v), _) => value *= v,
            (None, true) => {
                return Err(Error::NotStabilized { p: f.p, j_max });
            }
            (None, false) => unstabilized.push(f.p),
        }
    }
    while cutoff_idx < cutoffs.len() {
        partial_trace.push((cutoffs[cutoff_idx], value.clone()));
        cutoff_idx += 1;
    }
    Ok(LocalDensityProduct {
        p_max,
        j_max,
        factors,
        value,
        bad_primes,
        unstabilized,
        partial_trace,
    })
}

impl LocalDensityProduct {
    /// Lossy value for reporting.
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> ScalarDomain {
        ScalarDomain::imag_quad(1).unwrap()
    }

    fn i21_real() -> HermitianForm {
        HermitianForm::lorentzian(ScalarDomain::real(), 2).unwrap()
    }

    #[test]
    fn count_mod_real_p3() {
        // x1^2 + x2^2 - x3^2 = -1 mod 3 has 6 solutions among 27 triples
        let c = count_mod(&i21_real(), 1, 3, 1, Budget::default()).unwrap();
        assert_eq!(c, BigUint::from(6u32));
    }

    #[test]
    fn count_mod_real_p2() {
        // squares are the identity mod 2: x1+x2+x3 = 1 has 4 solutions
        let c = count_mod(&i21_real(), 1, 2, 1, Budget::default()).unwrap();
        assert_eq!(c, BigUint::from(4u32));
    }

    #[test]
    fn convolution_equals_direct_spot() {
        let forms = [
            i21_real(),
            HermitianForm::lorentzian(ScalarDomain::real(), 3).unwrap(),
            HermitianForm::diagonal(ScalarDomain::real(), &[1, 2], 3).unwrap(),
            HermitianForm::lorentzian(gauss(), 2).unwrap(),
            HermitianForm::lorentzian(ScalarDomain::imag_quad(3).unwrap(), 2).unwrap(),
        ];
        for q in &forms {
            let r = q.domain().rank() as u32;
            for k in [1u64, 2] {
                for p in [2u64, 3, 5, 7] {
                    for j in 1..=3u32 {
                        let space = (p as u128).pow(r * j * (q.n() as u32 + 1));
                        if space > 1_000_000 {
                            continue;
                        }
                        let conv = count_mod_convolution(q, k, p, j, Budget::default()).unwrap();
                        let direct = count_mod_direct(q, k, p, j, Budget::default()).unwrap();
                        assert_eq!(conv, direct, "k={k} p={p} j={j} n={}", q.n());
                    }
                }
            }
        }
    }

    #[test]
    fn nondiagonal_direct_path() {
        let dom = gauss();
        let e = |a, b| dom.element(&[a, b]).unwrap();
        let entries = vec![e(2, 0), e(1, 1), e(1, -1), e(3, 0)];
        let q = HermitianForm::new(dom, 2, entries, 1).unwrap();
        // count_mod dispatches to the direct path
        let c = count_mod(&q, 1, 3, 1, Budget::default()).unwrap();
        let direct = count_mod_direct(&q, 1, 3, 1, Budget::default()).unwrap();
        assert_eq!(c, direct);
        // convolution path must refuse
        assert!(count_mod_convolution(&q, 1, 3, 1, Budget::default()).is_err());
    }

    #[test]
    fn good_prime_stabilizes_at_one() {
        let q = i21_real();
        let r = local_density(&q, 1, 5, 6, Budget::default()).unwrap();
        assert!(r.stabilized);
        assert!(!r.bad);
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.trace[0], r.trace[1]);
    }

    #[test]
    fn bad_prime_waits_for_threshold() {
        let q = i21_real();
        let r = local_density(&q, 1, 2, 8, Budget::default()).unwrap();
        assert!(r.bad);
        // v_2(4 a k det A) = 2, so stabilization needs j >= 3
        assert_eq!(r.threshold_j, 3);
        assert!(r.stabilized, "trace: {:?}", r.trace);
    }

    #[test]
    fn product_runs_small() {
        let q = i21_real();
        let prod = local_density_product(&q, 1, 20, 8, Budget::default()).unwrap();
        assert!(prod.value.to_f64().unwrap() > 0.0);
        assert_eq!(prod.bad_primes, vec![2]);
        assert!(prod.unstabilized.is_empty());
        assert_eq!(prod.partial_trace.len(), 3);
    }

    #[test]
    fn quaternion_rejected() {
        let q = HermitianForm::lorentzian(ScalarDomain::hurwitz(), 2).unwrap();
        assert!(matches!(
            local_density(&q, 1, 3, 4, Budget::default()),
            Err(Error::UnsupportedDomain(_))
        ));
    }
}
