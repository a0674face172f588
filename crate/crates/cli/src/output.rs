//! Machine-readable output: JSON documents and CSV tables.
//!
//! All numeric renderings are deterministic (fixed decimal places, exact
//! rational strings), so identical inputs produce byte-identical output.

use hermcount_core::asymptotics::{AsymptoticPrediction, FitReport};
use hermcount_core::counting::{CountMode, CountResult};
use hermcount_core::density::{LocalDensityProduct, LocalDensityResult};
use hermcount_core::numeric::{decimal_string, to_f64};
use num_rational::BigRational;
use serde::Serialize;

/// Counts above `u64::MAX` are emitted as strings so plain JSON numbers
/// stay within what consumers can parse exactly.
pub fn count_value(v: u128) -> serde_json::Value {
    match u64::try_from(v) {
        Ok(small) => serde_json::Value::from(small),
        Err(_) => serde_json::Value::from(v.to_string()),
    }
}

fn rational_string(x: &BigRational) -> String {
    format!("{x}")
}

#[derive(Serialize)]
pub struct ShellRow {
    pub u: u64,
    pub census: u64,
    pub rep: u64,
    pub contribution: serde_json::Value,
}

#[derive(Serialize)]
pub struct CountOutput {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    pub norm_bound: u64,
    pub total: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shells: Option<Vec<ShellRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_total: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_matches: Option<bool>,
}

impl CountOutput {
    pub fn new(result: &CountResult, with_shells: bool) -> Self {
        let bound = rational_string(&result.bound);
        let (t, s, mode) = match result.mode {
            CountMode::Slab => (Some(bound), None, "slab"),
            CountMode::Ball => (None, Some(bound), "ball"),
        };
        CountOutput {
            mode,
            t,
            s,
            norm_bound: result.norm_bound,
            total: count_value(result.total),
            shells: with_shells.then(|| {
                result
                    .shells
                    .iter()
                    .map(|sh| ShellRow {
                        u: sh.u,
                        census: sh.census,
                        rep: sh.rep,
                        contribution: count_value(sh.contribution),
                    })
                    .collect()
            }),
            oracle_total: None,
            oracle_matches: None,
        }
    }
}

/// CSV emission of the per-shell breakdown: columns `u, R_O, r_A, contribution`.
pub fn shells_csv(result: &CountResult) -> String {
    let mut out = String::from("u,R_O,r_A,contribution\n");
    for sh in &result.shells {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sh.u, sh.census, sh.rep, sh.contribution
        ));
    }
    out
}

#[derive(Serialize)]
pub struct PrimeFactorOutput {
    pub p: u64,
    pub bad: bool,
    pub threshold_j: u32,
    pub stabilized: bool,
    pub counts: Vec<String>,
    pub trace: Vec<String>,
    pub trace_decimal: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_decimal: Option<String>,
}

impl PrimeFactorOutput {
    pub fn new(r: &LocalDensityResult, digits: u32) -> Self {
        PrimeFactorOutput {
            p: r.p,
            bad: r.bad,
            threshold_j: r.threshold_j,
            stabilized: r.stabilized,
            counts: r.counts.iter().map(|c| c.to_string()).collect(),
            trace: r.trace.iter().map(rational_string).collect(),
            trace_decimal: r
                .trace
                .iter()
                .map(|d| decimal_string(d, digits.min(12)))
                .collect(),
            value: r.value.as_ref().map(rational_string),
            value_decimal: r.value.as_ref().map(|v| decimal_string(v, digits)),
        }
    }
}

#[derive(Serialize)]
pub struct PartialTraceRow {
    pub p_cutoff: u64,
    pub value_decimal: String,
}

#[derive(Serialize)]
pub struct DensityProductOutput {
    pub p_max: u64,
    pub j_max: u32,
    pub value: String,
    pub value_decimal: String,
    pub bad_primes: Vec<u64>,
    pub unstabilized: Vec<u64>,
    pub partial_trace: Vec<PartialTraceRow>,
    pub factors: Vec<PrimeFactorOutput>,
}

impl DensityProductOutput {
    pub fn new(p: &LocalDensityProduct, digits: u32) -> Self {
        DensityProductOutput {
            p_max: p.p_max,
            j_max: p.j_max,
            value: rational_string(&p.value),
            value_decimal: decimal_string(&p.value, digits),
            bad_primes: p.bad_primes.clone(),
            unstabilized: p.unstabilized.clone(),
            partial_trace: p
                .partial_trace
                .iter()
                .map(|(c, v)| PartialTraceRow {
                    p_cutoff: *c,
                    value_decimal: decimal_string(v, digits),
                })
                .collect(),
            factors: p
                .factors
                .iter()
                .map(|f| PrimeFactorOutput::new(f, digits))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct IngredientsOutput {
    pub power_of_two: String,
    pub disc_power: String,
    pub a_rho: String,
    pub sphere_vol: String,
    pub two_rho: String,
    pub det_power: String,
    pub gamma_factor: String,
}

#[derive(Serialize)]
pub struct CoefficientOutput {
    pub rho: String,
    pub two_rho: u32,
    pub tau: f64,
    pub coefficient: String,
    pub coefficient_f64: f64,
    pub ball_coefficient: String,
    pub delta: String,
    pub delta_rational: String,
    pub ingredients: IngredientsOutput,
    pub a: u64,
    pub k: u64,
    pub p_max: u64,
    pub j_max: u32,
}

impl CoefficientOutput {
    pub fn new(
        pred: &AsymptoticPrediction,
        ball: &BigRational,
        delta: &LocalDensityProduct,
        k: u64,
        digits: u32,
    ) -> Self {
        let ing = &pred.ingredients;
        CoefficientOutput {
            rho: format!("{}", pred.rho),
            two_rho: pred.two_rho,
            tau: pred.tau,
            coefficient: decimal_string(&pred.coefficient, digits),
            coefficient_f64: to_f64(&pred.coefficient),
            ball_coefficient: decimal_string(ball, digits),
            delta: decimal_string(&pred.delta, digits),
            delta_rational: rational_string(&pred.delta),
            ingredients: IngredientsOutput {
                power_of_two: decimal_string(&ing.power_of_two, digits),
                disc_power: decimal_string(&ing.disc_power, digits),
                a_rho: decimal_string(&ing.a_rho, digits),
                sphere_vol: decimal_string(&ing.sphere_vol, digits),
                two_rho: decimal_string(&ing.two_rho, digits),
                det_power: decimal_string(&ing.det_power, digits),
                gamma_factor: decimal_string(&ing.gamma_factor, digits),
            },
            a: pred.a,
            k,
            p_max: delta.p_max,
            j_max: delta.j_max,
        }
    }
}

#[derive(Serialize)]
pub struct SeriesRow {
    pub bound: String,
    pub count: serde_json::Value,
    pub prediction: String,
    pub ratio: String,
}

#[derive(Serialize)]
pub struct FitOutput {
    pub exponent: f64,
    pub coefficient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_at_largest: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_exponent: Option<f64>,
}

impl FitOutput {
    pub fn new(fit: &FitReport) -> Self {
        FitOutput {
            exponent: fit.exponent,
            coefficient: fit.coefficient,
            ratio_at_largest: fit.ratio_at_largest,
            error_exponent: fit.error_exponent,
        }
    }
}

#[derive(Serialize)]
pub struct VerifyOutput {
    pub mode: &'static str,
    pub fit: FitOutput,
    pub prediction: CoefficientOutput,
    pub rows: Vec<SeriesRow>,
}

#[derive(Serialize)]
pub struct SweepOutput {
    pub mode: &'static str,
    pub rows: Vec<SeriesRow>,
}

/// CSV for verify/sweep series: `t, N_t, prediction, ratio` (or `s, N_s, ...`).
pub fn series_csv(rows: &[SeriesRow], mode: CountMode) -> String {
    let head = match mode {
        CountMode::Slab => "t,N_t,prediction,ratio\n",
        CountMode::Ball => "s,N_s,prediction,ratio\n",
    };
    let mut out = String::from(head);
    for r in rows {
        let count = match &r.count {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            _ => unreachable!(),
        };
        out.push_str(&format!("{},{},{},{}\n", r.bound, count, r.prediction, r.ratio));
    }
    out
}
