//! The finite quotient rings `O / p^j O`.
//!
//! Elements are coordinate vectors reduced mod `p^j` in the same integral
//! basis used for `O`, so reduction is a ring homomorphism by construction.

use super::{OrderElement, ScalarDomain};
use crate::primes::is_prime;
use crate::{Error, Result};

/// `O / p^j O` for a rational prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueRing {
    domain: ScalarDomain,
    p: u64,
    j: u32,
    q: u64, // p^j
}

/// An element of a residue ring; coordinates lie in `[0, p^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    coords: [u64; 4],
}

impl ResidueElement {
    pub fn coords(&self, rank: usize) -> &[u64] {
        &self.coords[..rank]
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }
}

impl ResidueRing {
    pub fn new(domain: ScalarDomain, p: u64, j: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        if j == 0 {
            return Err(Error::InvalidParameter("j must be >= 1".into()));
        }
        if domain == ScalarDomain::Hurwitz && p == 2 {
            return Err(Error::UnsupportedDomain(
                "residue rings of the Hurwitz order at p = 2 are not supported".into(),
            ));
        }
        let q = (0..j).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or(
            Error::Overflow("residue ring modulus p^j".into()),
        )?;
        Ok(ResidueRing { domain, p, j, q })
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.j
    }

    /// The modulus `p^j`.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `p^(r j)`, the number of elements.
    pub fn element_count(&self) -> Result<u128> {
        let r = self.domain.rank() as u32;
        (0..r * self.j)
            .try_fold(1u128, |acc, _| acc.checked_mul(self.p as u128))
            .ok_or(Error::Overflow("residue ring element count".into()))
    }

    /// Reduction `O -> O/p^j O`, coordinatewise.
    pub fn reduce(&self, x: &OrderElement) -> ResidueElement {
        let mut c = [0u64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = x.raw()[i].rem_euclid(self.q as i64) as u64;
        }
        ResidueElement { coords: c }
    }

    pub fn from_int(&self, v: i64) -> ResidueElement {
        let mut c = [0u64; 4];
        c[0] = v.rem_euclid(self.q as i64) as u64;
        ResidueElement { coords: c }
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement { coords: [0; 4] }
    }

    pub fn add(&self, x: &ResidueElement, y: &ResidueElement) -> ResidueElement {
        let mut c = [0u64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = (x.coords[i] + y.coords[i]) % self.q;
        }
        ResidueElement { coords: c }
    }

    pub fn neg(&self, x: &ResidueElement) -> ResidueElement {
        let mut c = [0u64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = (self.q - x.coords[i]) % self.q;
        }
        ResidueElement { coords: c }
    }

    /// Product, via the same structure constants as `O`, reduced mod `p^j`.
    pub fn mul(&self, x: &ResidueElement, y: &ResidueElement) -> ResidueElement {
        let q = self.q as i128;
        match self.domain {
            ScalarDomain::Real => {
                let v = (x.coords[0] as i128 * y.coords[0] as i128).rem_euclid(q);
                ResidueElement {
                    coords: [v as u64, 0, 0, 0],
                }
            }
            ScalarDomain::ImagQuad { d } => {
                let (a, b) = (x.coords[0] as i128, x.coords[1] as i128);
                let (cc, e) = (y.coords[0] as i128, y.coords[1] as i128);
                let (re, im) = if self.domain.half_basis() {
                    let nm = (1 + d as i128) / 4;
                    (a * cc - nm * b * e, a * e + b * cc + b * e)
                } else {
                    (a * cc - d as i128 * b * e, a * e + b * cc)
                };
                ResidueElement {
                    coords: [re.rem_euclid(q) as u64, im.rem_euclid(q) as u64, 0, 0],
                }
            }
            ScalarDomain::Hurwitz => {
                // reuse the exact structure constants through OrderElement,
                // coordinates stay below p^j so i128 accumulation is safe
                let xo = OrderElement::from_coords(&[
                    x.coords[0] as i64,
                    x.coords[1] as i64,
                    x.coords[2] as i64,
                    x.coords[3] as i64,
                ]);
                let yo = OrderElement::from_coords(&[
                    y.coords[0] as i64,
                    y.coords[1] as i64,
                    y.coords[2] as i64,
                    y.coords[3] as i64,
                ]);
                let z = self.domain.mul(&xo, &yo);
                let mut c = [0u64; 4];
                for (i, slot) in c.iter_mut().enumerate() {
                    *slot = (z.raw()[i] as i128).rem_euclid(q) as u64;
                }
                ResidueElement { coords: c }
            }
        }
    }

    pub fn conj(&self, x: &ResidueElement) -> ResidueElement {
        let q = self.q;
        match self.domain {
            ScalarDomain::Real => *x,
            ScalarDomain::ImagQuad { .. } => {
                let (a, b) = (x.coords[0], x.coords[1]);
                if self.domain.half_basis() {
                    ResidueElement {
                        coords: [(a + b) % q, (q - b) % q, 0, 0],
                    }
                } else {
                    ResidueElement {
                        coords: [a, (q - b) % q, 0, 0],
                    }
                }
            }
            ScalarDomain::Hurwitz => {
                let [a, b, c, d] = x.coords;
                ResidueElement {
                    coords: [(a + d) % q, (q - b) % q, (q - c) % q, (q - d) % q],
                }
            }
        }
    }

    /// `norm(x) mod p^j`.
    pub fn norm(&self, x: &ResidueElement) -> u64 {
        let q = self.q as i128;
        match self.domain {
            ScalarDomain::Real => {
                let a = x.coords[0] as i128;
                (a * a).rem_euclid(q) as u64
            }
            ScalarDomain::ImagQuad { d } => {
                let (a, b) = (x.coords[0] as i128, x.coords[1] as i128);
                let n = if self.domain.half_basis() {
                    a * a + a * b + b * b * ((1 + d as i128) / 4)
                } else {
                    a * a + d as i128 * b * b
                };
                n.rem_euclid(q) as u64
            }
            ScalarDomain::Hurwitz => {
                let [a, b, c, d] = x.coords.map(|v| v as i128);
                (a * a + b * b + c * c + d * d + (a + b + c) * d).rem_euclid(q) as u64
            }
        }
    }

    /// Iterator over all ring elements (intended for small rings).
    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        let rank = self.domain.rank();
        let q = self.q;
        let total = (0..rank).fold(1u128, |acc, _| acc * q as u128);
        (0..total).map(move |idx| {
            let mut c = [0u64; 4];
            let mut rem = idx;
            for slot in c.iter_mut().take(rank) {
                *slot = (rem % q as u128) as u64;
                rem /= q as u128;
            }
            ResidueElement { coords: c }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_real() {
        let r = ResidueRing::new(ScalarDomain::real(), 3, 2).unwrap();
        assert_eq!(r.reduce(&ScalarDomain::real().from_int(10)).coords(1), &[1]);
    }

    #[test]
    fn gaussian_square_of_one_plus_i() {
        let d = ScalarDomain::imag_quad(1).unwrap();
        let r = ResidueRing::new(d, 2, 1).unwrap();
        let x = d.element(&[1, 1]).unwrap();
        let sq = d.mul(&x, &x); // 2i
        assert!(r.reduce(&sq).is_zero());
    }

    #[test]
    fn gaussian_mod5_norm_zero_count() {
        let d = ScalarDomain::imag_quad(1).unwrap();
        let r = ResidueRing::new(d, 5, 1).unwrap();
        assert_eq!(r.element_count().unwrap(), 25);
        let count = r.elements().filter(|z| r.norm(z).is_multiple_of(5)).count();
        assert_eq!(count, 9);
    }

    #[test]
    fn hurwitz_p2_rejected() {
        assert!(matches!(
            ResidueRing::new(ScalarDomain::hurwitz(), 2, 1),
            Err(Error::UnsupportedDomain(_))
        ));
        assert!(ResidueRing::new(ScalarDomain::hurwitz(), 3, 1).is_ok());
    }

    #[test]
    fn nonprime_rejected() {
        assert!(ResidueRing::new(ScalarDomain::real(), 6, 1).is_err());
        assert!(ResidueRing::new(ScalarDomain::real(), 5, 0).is_err());
    }

    #[test]
    fn reduction_is_homomorphism_spot() {
        for dom in [
            ScalarDomain::real(),
            ScalarDomain::imag_quad(1).unwrap(),
            ScalarDomain::imag_quad(3).unwrap(),
            ScalarDomain::hurwitz(),
        ] {
            for (p, j) in [(3u64, 2u32), (5, 1), (7, 1)] {
                let r = ResidueRing::new(dom, p, j).unwrap();
                let rank = dom.rank();
                let mk = |seed: i64| {
                    let full = [seed, seed * 3 - 7, -seed + 2, 5 - seed];
                    OrderElement::from_coords(&full[..rank])
                };
                for sx in -6..6 {
                    for sy in -6..6 {
                        let (x, y) = (mk(sx), mk(sy));
                        assert_eq!(
                            r.reduce(&dom.mul(&x, &y)),
                            r.mul(&r.reduce(&x), &r.reduce(&y))
                        );
                        assert_eq!(
                            r.reduce(&dom.add(&x, &y)),
                            r.add(&r.reduce(&x), &r.reduce(&y))
                        );
                        assert_eq!(r.reduce(&dom.conj(&x)), r.conj(&r.reduce(&x)));
                        assert_eq!(r.norm(&r.reduce(&x)), dom.norm(&x) % r.modulus());
                    }
                }
            }
        }
    }
}
