use std::fmt;

use crate::{Error, Result};

/// The coefficient system `F` together with its fixed maximal order `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    /// `F = R`, `O = Z`.
    Real,
    /// `F = Q(sqrt(-d))`, `O` its ring of integers; `d > 0` squarefree.
    ImagQuad { d: u32 },
    /// `F = H`, `O` the Hurwitz quaternions.
    Hurwitz,
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Real => write!(f, "Z"),
            ScalarDomain::ImagQuad { d } => write!(f, "O(Q(sqrt(-{d})))"),
            ScalarDomain::Hurwitz => write!(f, "Hurwitz"),
        }
    }
}

fn is_squarefree(d: u32) -> bool {
    let mut n = d;
    let mut p = 2u32;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        while n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// An element of the order in integral-basis coordinates.
///
/// Coordinates beyond the domain rank are zero, so derived lexicographic
/// ordering and equality are consistent across domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderElement {
    coords: [i64; 4],
}

impl OrderElement {
    pub fn from_coords(coords: &[i64]) -> Self {
        let mut c = [0i64; 4];
        c[..coords.len()].copy_from_slice(coords);
        OrderElement { coords: c }
    }

    pub const fn zero() -> Self {
        OrderElement { coords: [0; 4] }
    }

    pub fn coords(&self, rank: usize) -> &[i64] {
        &self.coords[..rank]
    }

    pub(crate) fn raw(&self) -> &[i64; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }
}

/// Hurwitz basis products `T[a][b] = e_a * e_b` expressed in the basis
/// `{1, i, j, h}` with `h = (1+i+j+k)/2`, `k = 2h - 1 - i - j`.
const HURWITZ_TABLE: [[[i64; 4]; 4]; 4] = [
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
        [-1, -1, -1, 2], // i*j = k
        [-1, 0, -1, 1],  // i*h = h - 1 - j
    ],
    [
        [0, 0, 1, 0],
        [1, 1, 1, -2], // j*i = -k
        [-1, 0, 0, 0],
        [0, 1, 1, -1], // j*h = i + j - h
    ],
    [
        [0, 0, 0, 1],
        [0, 1, 1, -1],  // h*i = i + j - h
        [-1, -1, 0, 1], // h*j = h - 1 - i
        [-1, 0, 0, 1],  // h*h = h - 1
    ],
];

impl ScalarDomain {
    /// Ring of rational integers.
    pub fn real() -> Self {
        ScalarDomain::Real
    }

    /// Ring of integers of `Q(sqrt(-d))`; `d` must be positive squarefree.
    pub fn imag_quad(d: u32) -> Result<Self> {
        if d == 0 || !is_squarefree(d) {
            return Err(Error::InvalidParameter(format!(
                "imag_quad requires a squarefree positive d, got {d}"
            )));
        }
        Ok(ScalarDomain::ImagQuad { d })
    }

    /// Hurwitz quaternion order.
    pub fn hurwitz() -> Self {
        ScalarDomain::Hurwitz
    }

    /// Rank of `O` as a Z-lattice (1, 2 or 4).
    pub fn rank(&self) -> usize {
        match self {
            ScalarDomain::Real => 1,
            ScalarDomain::ImagQuad { .. } => 2,
            ScalarDomain::Hurwitz => 4,
        }
    }

    /// True when the basis is `{1, (1+sqrt(-d))/2}`.
    pub fn half_basis(&self) -> bool {
        matches!(self, ScalarDomain::ImagQuad { d } if d % 4 == 3)
    }

    /// Number of units of `O` (2, 4 for d=1, 6 for d=3, 24 for Hurwitz).
    pub fn unit_count(&self) -> u64 {
        match self {
            ScalarDomain::Real => 2,
            ScalarDomain::ImagQuad { d: 1 } => 4,
            ScalarDomain::ImagQuad { d: 3 } => 6,
            ScalarDomain::ImagQuad { .. } => 2,
            ScalarDomain::Hurwitz => 24,
        }
    }

    /// Field discriminant `d_O`: 1 for `Z`, `-d` or `-4d` in the imaginary
    /// quadratic case. The quaternionic coefficient theory is out of scope,
    /// so `Hurwitz` is rejected.
    pub fn discriminant(&self) -> Result<i64> {
        match self {
            ScalarDomain::Real => Ok(1),
            ScalarDomain::ImagQuad { d } => {
                if d % 4 == 3 {
                    Ok(-(*d as i64))
                } else {
                    Ok(-4 * (*d as i64))
                }
            }
            ScalarDomain::Hurwitz => Err(Error::UnsupportedDomain(
                "discriminant is not defined for the quaternion order here".into(),
            )),
        }
    }

    pub fn element(&self, coords: &[i64]) -> Result<OrderElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(OrderElement::from_coords(coords))
    }

    pub fn from_int(&self, value: i64) -> OrderElement {
        OrderElement::from_coords(&[value])
    }

    pub fn one(&self) -> OrderElement {
        self.from_int(1)
    }

    pub fn add(&self, x: &OrderElement, y: &OrderElement) -> OrderElement {
        let mut c = [0i64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = x.coords[i] + y.coords[i];
        }
        OrderElement { coords: c }
    }

    pub fn sub(&self, x: &OrderElement, y: &OrderElement) -> OrderElement {
        let mut c = [0i64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = x.coords[i] - y.coords[i];
        }
        OrderElement { coords: c }
    }

    pub fn neg(&self, x: &OrderElement) -> OrderElement {
        let mut c = [0i64; 4];
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = -x.coords[i];
        }
        OrderElement { coords: c }
    }

    /// Product `x * y` in `O` (order matters for Hurwitz).
    pub fn mul(&self, x: &OrderElement, y: &OrderElement) -> OrderElement {
        match self {
            ScalarDomain::Real => OrderElement::from_coords(&[x.coords[0] * y.coords[0]]),
            ScalarDomain::ImagQuad { d } => {
                let (a, b) = (x.coords[0] as i128, x.coords[1] as i128);
                let (c, e) = (y.coords[0] as i128, y.coords[1] as i128);
                let (re, im) = if self.half_basis() {
                    // w^2 = w - (1+d)/4
                    let nm = (1 + *d as i128) / 4 ;
                    (a * c - nm * b * e, a * e + b * c + b * e)
                } else {
                    // w^2 = -d
                    (a * c - (*d as i128) * b * e, a * e + b * c)
                };
                OrderElement::from_coords(&[
                    i64::try_from(re).expect("order product overflow"),
                    i64::try_from(im).expect("order product overflow"),
                ])
            }
            ScalarDomain::Hurwitz => {
                let mut acc = [0i128; 4];
                for (ia, &xa) in x.coords.iter().enumerate() {
                    if xa == 0 {
                        continue;
                    }
                    for (ib, &yb) in y.coords.iter().enumerate() {
                        if yb == 0 {
                            continue;
                        }
                        let prod = xa as i128 * yb as i128;
                        let basis = &HURWITZ_TABLE[ia][ib];
                        for (k, &coeff) in basis.iter().enumerate() {
                            acc[k] += prod * coeff as i128;
                        }
                    }
                }
                let mut c = [0i64; 4];
                for (k, slot) in c.iter_mut().enumerate() {
                    *slot = i64::try_from(acc[k]).expect("order product overflow");
                }
                OrderElement { coords: c }
            }
        }
    }

    /// Conjugation (the canonical involution).
    pub fn conj(&self, x: &OrderElement) -> OrderElement {
        match self {
            ScalarDomain::Real => *x,
            ScalarDomain::ImagQuad { .. } => {
                let (a, b) = (x.coords[0], x.coords[1]);
                if self.half_basis() {
                    // conj(w) = 1 - w
                    OrderElement::from_coords(&[a + b, -b])
                } else {
                    OrderElement::from_coords(&[a, -b])
                }
            }
            ScalarDomain::Hurwitz => {
                let [a, b, c, d] = x.coords;
                // conj(h) = 1 - h
                OrderElement::from_coords(&[a + d, -b, -c, -d])
            }
        }
    }

    /// Norm `x * conj(x)`, an exact nonnegative rational integer.
    pub fn norm(&self, x: &OrderElement) -> u64 {
        let v = self.norm_i128(x);
        debug_assert!(v >= 0);
        u64::try_from(v).expect("norm overflow")
    }

    pub(crate) fn norm_i128(&self, x: &OrderElement) -> i128 {
        match self {
            ScalarDomain::Real => {
                let a = x.coords[0] as i128;
                a * a
            }
            ScalarDomain::ImagQuad { d } => {
                let (a, b) = (x.coords[0] as i128, x.coords[1] as i128);
                if self.half_basis() {
                    a * a + a * b + b * b * ((1 + *d as i128) / 4)
                } else {
                    a * a + (*d as i128) * b * b
                }
            }
            ScalarDomain::Hurwitz => {
                let [a, b, c, d] = x.coords.map(|v| v as i128);
                a * a + b * b + c * c + d * d + (a + b + c) * d
            }
        }
    }

    /// `2 Re(x)`, always a rational integer.
    pub fn trace(&self, x: &OrderElement) -> i64 {
        match self {
            ScalarDomain::Real => 2 * x.coords[0],
            ScalarDomain::ImagQuad { .. } => {
                if self.half_basis() {
                    2 * x.coords[0] + x.coords[1]
                } else {
                    2 * x.coords[0]
                }
            }
            ScalarDomain::Hurwitz => 2 * x.coords[0] + x.coords[3],
        }
    }

    /// If `x` lies in `Z . 1`, returns that integer.
    pub fn as_rational_integer(&self, x: &OrderElement) -> Option<i64> {
        if x.coords[1..] == [0, 0, 0] {
            Some(x.coords[0])
        } else {
            None
        }
    }
}
