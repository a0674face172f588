//! Growth data for the counting functions: the exponents `rho` and `tau`,
//! sphere volumes, the main coefficient `C` of the asymptotic law
//! `N_t = C t^(2 rho) + O(t^tau)`, predicted counts, and log–log fitting of
//! observed counts.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive};

use crate::algebra::ScalarDomain;
use crate::density::LocalDensityProduct;
use crate::forms::HermitianForm;
use crate::numeric::{self, Precision};
use crate::{Error, Result};

/// `rho = (n+1) r / 2 - 1` as an exact rational.
pub fn rho_exponent(domain: ScalarDomain, n: usize) -> Result<Rational64> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be >= 2".into()));
    }
    let r = domain.rank() as i64;
    Ok(Rational64::new((n as i64 + 1) * r - 2, 2))
}

/// The error-term exponent `tau`.
///
/// With a spectral parameter `nu1` supplied (`0 < nu1 < rho`), returns
/// `rho + nu1` when that branch applies (`>=` threshold over `R`, `>` over
/// `C`/`H`), otherwise the unconditional `2 rho n/(n+1) + eps`. Without
/// `nu1`, the real case with `n >= 3` uses the known worst-case bound
/// `tau = n - 3/2`; all other cases fall back to the unconditional branch.
/// `eps` must be positive over `C`/`H` and defaults to 0 (`R`) or 1/100.
pub fn tau_exponent(
    domain: ScalarDomain,
    n: usize,
    nu1: Option<f64>,
    eps: Option<f64>,
) -> Result<f64> {
    let rho = rho_exponent(domain, n)?.to_f64().unwrap();
    let threshold = 2.0 * rho * n as f64 / (n as f64 + 1.0);
    let is_real = domain == ScalarDomain::Real;
    let eps = match eps {
        Some(e) => {
            if e < 0.0 || (!is_real && e == 0.0) {
                return Err(Error::InvalidParameter(
                    "eps must be positive for the complex and quaternion cases".into(),
                ));
            }
            e
        }
        None => {
            if is_real {
                0.0
            } else {
                1e-2
            }
        }
    };
    let fallback = threshold + eps;
    let tau = match nu1 {
        Some(nu) => {
            if nu <= 0.0 || nu >= rho {
                return Err(Error::InvalidParameter(format!(
                    "nu1 must satisfy 0 < nu1 < rho = {rho}"
                )));
            }
            let candidate = rho + nu;
            let applies = if is_real {
                candidate >= threshold
            } else {
                candidate > threshold
            };
            if applies {
                candidate
            } else {
                fallback
            }
        }
        None => {
            if is_real && n >= 3 {
                n as f64 - 1.5
            } else {
                fallback
            }
        }
    };
    if tau >= 2.0 * rho {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau} is not subleading (2 rho = {})",
            2.0 * rho
        )));
    }
    Ok(tau)
}

/// `vol(S^(m-1)) = 2 pi^(m/2) / Gamma(m/2)`, evaluated at working precision.
///
/// For any `m` this is a rational multiple of an integer power of pi:
/// `m = 2h` gives `2 pi^h / (h-1)!` and `m = 2h+1` gives
/// `2^(2h+1) h! pi^h / (2h)!`.
pub fn sphere_volume(m: u32, prec: Precision) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be >= 1".into()));
    }
    let pi = numeric::pi(prec);
    let h = m / 2;
    let fact = |k: u32| -> BigInt {
        (1..=k as u64).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
    };
    if m.is_multiple_of(2) {
        // 2 pi^h / (h-1)!
        Ok(BigRational::new(BigInt::from(2), fact(h - 1)) * pi.pow(h as i32))
    } else {
        // 2^(2h+1) h! pi^h / (2h)!
        let num = BigInt::from(2).pow(2 * h + 1) * fact(h);
        Ok(BigRational::new(num, fact(2 * h)) * pi.pow(h as i32))
    }
}

/// The recorded multiplicative ingredients of the main coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingredients {
    /// `2^((r-1)(n+1))`
    pub power_of_two: BigRational,
    /// `|d_O|^((n+1)/2)` (divides)
    pub disc_power: BigRational,
    /// `a^rho`
    pub a_rho: BigRational,
    /// `vol(S^(nr-1))`
    pub sphere_vol: BigRational,
    /// `2 rho` (divides)
    pub two_rho: BigRational,
    /// `|det Q|^(r/2)` (divides)
    pub det_power: BigRational,
    /// `pi^(r/2) / Gamma(r/2)`: 1 over `R`, pi over `C`
    pub gamma_factor: BigRational,
}

impl Ingredients {
    /// Recomputes the coefficient from the recorded parts times `delta`.
    pub fn reconstruct(&self, delta: &BigRational) -> BigRational {
        &self.power_of_two / &self.disc_power * &self.a_rho * &self.sphere_vol
            / &self.two_rho
            / &self.det_power
            * &self.gamma_factor
            * delta
    }
}

/// The predicted asymptotic data for one `(Q, k)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPrediction {
    pub rho: Rational64,
    /// `2 rho = r(n+1) - 2`, always an integer.
    pub two_rho: u32,
    pub tau: f64,
    /// The main coefficient `C`, at working precision.
    pub coefficient: BigRational,
    pub ingredients: Ingredients,
    /// The truncated local density used.
    pub delta: BigRational,
    pub a: u64,
}

/// Assembles the main coefficient
/// `C = 2^((r-1)(n+1)) |d_O|^(-(n+1)/2) a^rho vol(S^(nr-1)) / (2 rho)
///      / |det Q|^(r/2) * (pi^(r/2)/Gamma(r/2)) * delta`.
pub fn main_coefficient(
    q: &HermitianForm,
    k: u64,
    delta: &LocalDensityProduct,
    nu1: Option<f64>,
    eps: Option<f64>,
    prec: Precision,
) -> Result<AsymptoticPrediction> {
    let domain = q.domain();
    let (r, n) = (domain.rank() as u32, q.n());
    if domain == ScalarDomain::Hurwitz {
        return Err(Error::UnsupportedDomain(
            "the coefficient formula covers the real and complex cases only".into(),
        ));
    }
    let _ = k; // the dependence on k enters through delta
    let rho = rho_exponent(domain, n)?;
    let two_rho = r * (n as u32 + 1) - 2;
    let tau = tau_exponent(domain, n, nu1, eps)?;

    let power_of_two = BigRational::from_integer(BigInt::from(2).pow((r - 1) * (n as u32 + 1)));
    let disc = BigInt::from(domain.discriminant()?).abs();
    let disc_power = numeric::pow_half(
        &BigRational::from_integer(disc),
        n as i64 + 1,
        prec,
    )?;
    let a_rho = numeric::pow_half(
        &BigRational::from_integer(BigInt::from(q.a())),
        2 * rho.numer() / *rho.denom(),
        prec,
    )?;
    let sphere_vol = sphere_volume(n as u32 * r, prec)?;
    let two_rho_rat = BigRational::from_integer(BigInt::from(two_rho));
    let det_power = numeric::pow_half(&q.det_form()?, r as i64, prec)?;
    let gamma_factor = match r {
        1 => BigRational::one(), // sqrt(pi)/Gamma(1/2)
        2 => numeric::pi(prec),  // pi/Gamma(1)
        _ => unreachable!(),
    };
    let ingredients = Ingredients {
        power_of_two,
        disc_power,
        a_rho,
        sphere_vol,
        two_rho: two_rho_rat,
        det_power,
        gamma_factor,
    };
    let coefficient = ingredients.reconstruct(&delta.value);
    Ok(AsymptoticPrediction {
        rho,
        two_rho,
        tau,
        coefficient,
        ingredients,
        delta: delta.value.clone(),
        a: q.a(),
    })
}

/// Leading coefficient of the ball count: `N~_s ~ C (2a)^(-rho) s^(2 rho)`,
/// which reduces to the printed `2^(-rho) C` when `a = 1`.
pub fn ball_coefficient(pred: &AsymptoticPrediction, prec: Precision) -> Result<BigRational> {
    let two_a = BigRational::from_integer(BigInt::from(2 * pred.a));
    let factor = numeric::pow_half(&two_a, -(pred.two_rho as i64), prec)?;
    Ok(&pred.coefficient * factor)
}

/// `C t^(2 rho)`, exact in `t`.
pub fn predicted_count(pred: &AsymptoticPrediction, t: &BigRational) -> BigRational {
    &pred.coefficient * t.pow(pred.two_rho as i32)
}

/// Least-squares fit of `log N` against `log t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// `(t, N_t)` pairs as supplied.
    pub observations: Vec<(f64, f64)>,
    /// Fitted exponent (slope of the log–log fit).
    pub exponent: f64,
    /// Fitted coefficient (exp of the intercept).
    pub coefficient: f64,
    /// `N_t / t^(2 rho)` at the largest `t`, when a prediction was given.
    pub ratio_at_largest: Option<f64>,
    /// Slope of `log |N_t - C t^(2 rho)|` against `log t`, when a
    /// prediction was given and residuals are nonzero.
    pub error_exponent: Option<f64>,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Log–log least squares over `(t, N_t)` observations.
///
/// With a prediction, also regresses the residuals for an empirical error
/// exponent. Requires at least 3 observations with strictly increasing `t`
/// and positive counts.
pub fn fit(
    observations: &[(BigRational, u128)],
    pred: Option<&AsymptoticPrediction>,
) -> Result<FitReport> {
    if observations.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 observations, got {}",
            observations.len()
        )));
    }
    for w in observations.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::DegenerateFit(
                "observations must be strictly increasing in t".into(),
            ));
        }
    }
    if observations.iter().any(|(_, n)| *n == 0) {
        return Err(Error::DegenerateFit("zero counts cannot be fitted".into()));
    }
    let obs_f64: Vec<(f64, f64)> = observations
        .iter()
        .map(|(t, n)| (t.to_f64().unwrap(), *n as f64))
        .collect();
    let xs: Vec<f64> = obs_f64.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = obs_f64.iter().map(|(_, n)| n.ln()).collect();
    let (exponent, intercept) = least_squares(&xs, &ys);
    let coefficient = intercept.exp();

    let mut ratio_at_largest = None;
    let mut error_exponent = None;
    if let Some(p) = pred {
        let (t_last, n_last) = observations.last().unwrap();
        let tp = t_last.pow(p.two_rho as i32).to_f64().unwrap();
        ratio_at_largest = Some(*n_last as f64 / tp);
        let mut rx = Vec::new();
        let mut ry = Vec::new();
        for (t, n) in observations {
            let predicted = predicted_count(p, t);
            let resid = (BigRational::from_integer(BigInt::from(*n)) - predicted)
                .abs()
                .to_f64()
                .unwrap();
            if resid > 0.0 {
                rx.push(t.to_f64().unwrap().ln());
                ry.push(resid.ln());
            }
        }
        if rx.len() >= 2 {
            error_exponent = Some(least_squares(&rx, &ry).0);
        }
    }
    Ok(FitReport {
        observations: obs_f64,
        exponent,
        coefficient,
        ratio_at_largest,
        error_exponent,
    })
}
