//! Exact arithmetic in maximal orders and their finite quotient rings.
//!
//! Supported coefficient systems:
//! * `Real` — `O = Z` inside `R` (rank 1),
//! * `ImagQuad { d }` — the ring of integers of `Q(sqrt(-d))`, `d > 0`
//!   squarefree, with integral basis `{1, w}` where `w = (1+sqrt(-d))/2`
//!   if `-d = 1 mod 4` and `w = sqrt(-d)` otherwise (rank 2),
//! * `Hurwitz` — the Hurwitz quaternions with the integral basis
//!   `{1, i, j, h}`, `h = (1+i+j+k)/2` (rank 4).
//!
//! Elements are integer coordinate vectors in the fixed integral basis, so
//! every operation (multiplication, conjugation, norm, trace) is exact.

mod domain;
mod enumerate;
mod residue;

pub use domain::{OrderElement, ScalarDomain};
pub use enumerate::{elements_with_norm_le, norm_census, norm_shells, units};
pub use residue::{ResidueElement, ResidueRing};
