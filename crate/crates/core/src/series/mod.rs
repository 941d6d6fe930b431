//! Reference summation routes.
//!
//! Every power series here has coefficients that decrease in modulus, so the
//! remainder after the term of index `K` is bounded by
//! `|c_K| |z|^{K+1} / (1 - |z|)`. That bound is the stopping rule and the
//! reported error estimate.

mod hypergeometric;
mod lambda;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{validate_for, EvalResult, LerchParams, PhiParams, Route, ToleranceConfig};

pub use hypergeometric::{hypergeometric_pfq, phi_via_hypergeometric};
pub use lambda::{lambda_outer_terms, lerch_lambda_series};

/// Geometric bound on a truncated power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTail {
    pub last_term_mag: f64,
    pub geometric_ratio_bound: f64,
    /// `last_term_mag · r / (1 - r)`.
    pub bound: f64,
}

impl SeriesTail {
    pub fn new(last_term_mag: f64, geometric_ratio_bound: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&geometric_ratio_bound));
        let r = geometric_ratio_bound;
        Self {
            last_term_mag,
            geometric_ratio_bound: r,
            bound: last_term_mag * r / (1.0 - r),
        }
    }
}

/// A finished summation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Summed {
    pub value: Complex64,
    pub tail: SeriesTail,
    pub terms: usize,
    /// Σ |terms|, for the roundoff part of the error estimate.
    pub abs_sum: f64,
}

impl Summed {
    pub fn error_estimate(&self) -> f64 {
        self.tail.bound + 4.0 * f64::EPSILON * self.abs_sum
    }
}

/// Sums `Σ_{k ≥ start} coeff(k) z^k` for coefficients non-increasing in
/// modulus, until the geometric tail bound drops below `tol`.
pub(crate) fn sum_power_series(
    z: Complex64,
    start: usize,
    coeff: impl Fn(usize) -> f64,
    tol: f64,
    max_terms: usize,
    route: Route,
) -> Result<Summed> {
    let r = z.norm();
    let mut zk = z.powu(start as u32);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut k = start;
    let mut terms = 0;
    loop {
        let c = coeff(k);
        let term = zk * c;
        sum += term;
        abs_sum += term.norm();
        terms += 1;
        zk *= z;
        let exhausted = zk == Complex64::new(0.0, 0.0);
        let tail = SeriesTail::new(if exhausted { 0.0 } else { term.norm() }, r);
        if tail.bound <= tol || exhausted {
            return Ok(Summed {
                value: sum,
                tail,
                terms,
                abs_sum,
            });
        }
        if terms >= max_terms {
            return Err(Error::NonConvergence {
                route,
                terms,
                tail_estimate: tail.bound,
            });
        }
        k += 1;
    }
}

/// Φ_{p,q}(a,b;z) by direct summation of its defining series.
pub fn phi_series(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    let params = validate_for(params, Route::Series, tol)?;
    if params.z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact_zero(Route::Series));
    }
    let PhiParams { p, q, a, b, z } = params;
    let coeff = |k: usize| {
        let k = k as f64;
        (-p * ((k + a) / (1.0 + a)).ln() - q * ((k + b) / (1.0 + b)).ln()).exp()
    };
    let s = sum_power_series(z, 1, coeff, tol.target_abs_tol, tol.max_terms, Route::Series)?;
    Ok(EvalResult::new(s.value, s.error_estimate(), Route::Series, s.terms))
}

/// Lerch transcendent Σ_{n≥0} z^n / (n+a)^s. `lambda` is ignored.
pub fn lerch_series(params: LerchParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    tol.validate()?;
    let LerchParams { s, a, z, .. } = params.with_lambda(0.0).validate()?;
    let coeff = |n: usize| (-s * (n as f64 + a).ln()).exp();
    let sum = sum_power_series(z, 0, coeff, tol.target_abs_tol, tol.max_terms, Route::Series)?;
    Ok(EvalResult::new(sum.value, sum.error_estimate(), Route::Series, sum.terms))
}

/// Polylogarithm Li_r(z) = Σ_{n≥1} z^n / n^r.
pub fn polylog_series(r: f64, z: Complex64, tol: &ToleranceConfig) -> Result<EvalResult> {
    tol.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(crate::error::DomainError::new("r", "r>0 required").into());
    }
    if !(z.norm() < 1.0) {
        return Err(crate::error::DomainError::new("z", "|z|<1 required").into());
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact_zero(Route::Series));
    }
    let coeff = |n: usize| (-r * (n as f64).ln()).exp();
    let sum = sum_power_series(z, 1, coeff, tol.target_abs_tol, tol.max_terms, Route::Series)?;
    Ok(EvalResult::new(sum.value, sum.error_estimate(), Route::Series, sum.terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default().with_abs_tol(1e-15)
    }

    // Li₂(1/2) = π²/12 − ln²2/2
    fn dilog_half() -> f64 {
        PI * PI / 12.0 - LN_2 * LN_2 / 2.0
    }

    #[test]
    fn phi_vanishes_at_origin() {
        let r = phi_series(PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.0), &tol()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.terms_or_evals, 1);
    }

    #[test]
    fn phi_unit_orders_matches_dilogarithm() {
        // Σ z^k/(k+1)² = (Li₂(z) − z)/z, normalized by 4.
        let truth = 4.0 * (dilog_half() - 0.5) / 0.5;
        let r = phi_series(PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.5), &tol()).unwrap();
        assert!((r.re() - truth).abs() < 1e-14);
        assert!((r.re() - 0.657_924_211_7).abs() < 1e-10);
        assert!(r.value.im == 0.0);
    }

    #[test]
    fn phi_lies_inside_its_bounds() {
        let r = phi_series(PhiParams::new(0.5, 0.75, 1.2, 1.3, 0.5), &tol()).unwrap();
        assert!(r.re() > 0.5 && r.re() < 2.7703, "{}", r.re());
    }

    #[test]
    fn lerch_examples() {
        let t = tol();
        let r = lerch_series(LerchParams::new(2.0, 1.0, 0.0), &t).unwrap();
        assert_eq!(r.re(), 1.0);
        let r = lerch_series(LerchParams::new(2.0, 1.0, 0.5), &t).unwrap();
        assert!((r.re() - dilog_half() / 0.5).abs() < 1e-14);
        assert!((r.re() - 1.164_481_052_9).abs() < 1e-10);
        let r = lerch_series(LerchParams::new(1.0, 2.0, 0.5), &t).unwrap();
        assert!((r.re() - (4.0 * LN_2 - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn polylog_examples() {
        let t = tol();
        assert_eq!(polylog_series(2.0, 0.0.into(), &t).unwrap().re(), 0.0);
        let r = polylog_series(1.0, 0.5.into(), &t).unwrap();
        assert!((r.re() - LN_2).abs() < 1e-14);
        let r = polylog_series(2.0, 0.5.into(), &t).unwrap();
        assert!((r.re() - 0.582_240_526_5).abs() < 1e-10);
        assert!((r.re() - dilog_half()).abs() < 1e-14);
    }

    #[test]
    fn polylog_of_complex_argument() {
        // Li₁(z) = −log(1 − z)
        let z = Complex64::new(0.3, -0.4);
        let r = polylog_series(1.0, z, &tol()).unwrap();
        assert!((r.value + (Complex64::new(1.0, 0.0) - z).ln()).norm() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let t = tol().with_max_terms(16);
        let err = phi_series(PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.99), &t).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { route: Route::Series, terms: 16, .. }));
    }

    #[test]
    fn tail_bound_covers_the_truncation() {
        let loose = ToleranceConfig::default().with_abs_tol(1e-6);
        let params = PhiParams::new(0.5, 0.75, 1.2, 1.3, 0.9);
        let coarse = phi_series(params, &loose).unwrap();
        let fine = phi_series(params, &tol()).unwrap();
        assert!((coarse.re() - fine.re()).abs() <= coarse.abs_error_estimate);
        assert!(coarse.abs_error_estimate <= 1e-6 + 1e-13);
    }
}
