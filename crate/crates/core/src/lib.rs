//! Exact counting of integral representations of `-k` by indefinite
//! hermitian forms `Q = diag(A, -a)` of signature `(n,1)` over a maximal
//! order `O` in `R`, `C` (imaginary quadratic) or `H` (Hurwitz), together
//! with the local-density and asymptotic machinery needed to predict the
//! growth `N_t ~ C t^{2*rho}` of the counts and validate it empirically.
//!
//! The crate is organized along the pipeline:
//!
//! * [`algebra`] — exact arithmetic in the order `O` and its residue rings
//!   `O / p^j O`,
//! * [`forms`] — the form data `Q = diag(A, -a)`, exact evaluation,
//!   realification of the definite block and its representation numbers,
//! * [`counting`] — the counting functions `N_t` (slab) and `N~_s` (ball),
//!   plus an independent brute-force oracle,
//! * [`density`] — p-adic densities by exact residue counting and the
//!   truncated Euler product,
//! * [`asymptotics`] — growth exponents, the main coefficient, predicted
//!   counts and log–log fitting.
//!
//! All counts and densities are exact integers / rationals; floating point
//! only ever enters as a search-pruning hint, never in a reported value.

// index-based loops are the clearer form for the matrix elimination code
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod asymptotics;
pub mod counting;
pub mod density;
pub mod forms;
pub mod numeric;

mod error;
mod primes;

pub use error::{Error, Result};
pub use primes::{is_prime, primes_up_to};

/// Resource guard for enumerations.
///
/// Any operation whose predicted output (or iteration space) exceeds
/// `elements` aborts with [`Error::BudgetExceeded`] instead of exhausting
/// memory or running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of elements an enumeration may visit or produce.
    pub elements: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            elements: 1_000_000_000,
        }
    }
}

impl Budget {
    pub fn new(elements: u64) -> Self {
        Budget { elements }
    }

    /// Checks a predicted element count against the budget.
    pub fn check(&self, predicted: u128, what: &str) -> Result<()> {
        if predicted > self.elements as u128 {
            Err(Error::BudgetExceeded {
                what: what.to_string(),
                predicted,
                budget: self.elements,
            })
        } else {
            Ok(())
        }
    }
}
