//! Double-integral representations of Φ.
//!
//! The Hadamard product of the two shifted power series gives
//!
//! ```text
//! Φ = C · (z q / Γ(p)) ∫_0^∞ ∫_0^∞ e^{-qu} e^{-(a+1)v} v^{p-1}
//!         (1 - (z e^{-v})^{m(u)}) / (1 - z e^{-v}) dv du,     m(u) = ⌊e^u - b⌋,
//! ```
//!
//! with `C = (1+a)^p (1+b)^q`. The exponent `m(u)` is a staircase in `u`
//! that jumps at `u_m = log(m+b)`, so the `u` integral splits into strips on
//! which it is elementary. Below `u_1` the staircase is not positive and the
//! kernel is taken as zero (no terms of the geometric sum yet).
//!
//! [`phi_double_integral_known`] is the older symmetric form
//! `∬ z x^{p-1} y^{q-1} e^{-(a+1)x-(b+1)y} / (1 - z e^{-x-y}) dx dy`.

use std::cell::Cell;

use crate::error::{DomainError, Error, Result};
use crate::gamma::gamma;
use crate::params::{validate_for, EvalResult, PhiParams, Route, ToleranceConfig};
use crate::quadrature::{integrate_adaptive, QuadratureOutcome, QuadratureProblem};

/// Smallest absolute tolerance worth asking of the quadrature engine for an
/// integral of size `magnitude`.
fn floor_tol(requested: f64, magnitude: f64) -> f64 {
    requested.max(200.0 * f64::EPSILON * magnitude)
}

/// The integrand of the strip representation, for real `z ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleIntegrandSpec {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl DoubleIntegrandSpec {
    pub fn new(params: &PhiParams) -> Self {
        Self {
            p: params.p,
            q: params.q,
            a: params.a,
            b: params.b,
            z: params.z.re,
        }
    }

    /// `m(u) = ⌊e^u - b⌋`, clamped at zero.
    pub fn staircase(&self, u: f64) -> u64 {
        let m = (u.exp() - self.b).floor();
        if m > 0.0 {
            m as u64
        } else {
            0
        }
    }

    /// `u_m = log(m+b)`.
    pub fn breakpoint(&self, m: u64) -> f64 {
        (m as f64 + self.b).ln()
    }

    /// `∫_{u_m}^{u_{m+1}} e^{-qu} du`. Strip zero is `[0, u_1)`.
    pub fn strip_weight(&self, m: u64) -> f64 {
        let q = self.q;
        if m == 0 {
            return -(-q * self.breakpoint(1)).exp_m1() / q;
        }
        let hi = (-q * self.breakpoint(m)).exp();
        hi * -(-q * (1.0 / (m as f64 + self.b)).ln_1p()).exp_m1() / q
    }

    /// `Σ_{m > last} strip_weight(m) = (last+1+b)^{-q} / q`.
    pub fn strip_weight_tail(&self, last: u64) -> f64 {
        (-self.q * self.breakpoint(last + 1)).exp() / self.q
    }

    /// `(1 - (z e^{-v})^m) / (1 - z e^{-v})`; `m = u64::MAX` stands for the
    /// limit `1 / (1 - z e^{-v})`.
    pub fn kernel(&self, m: u64, v: f64) -> f64 {
        let log_x = self.z.ln() - v;
        let den = -log_x.exp_m1();
        if m == u64::MAX {
            return 1.0 / den;
        }
        -(m as f64 * log_x).exp_m1() / den
    }

    /// `e^{-(a+1)v} v^{p-1}`.
    pub fn weight(&self, v: f64) -> f64 {
        ((self.p - 1.0) * v.ln() - (self.a + 1.0) * v).exp()
    }

    /// `∫_0^∞ weight(v) kernel(m, v) dv` by quadrature.
    pub fn strip_moment(&self, m: u64, abs_tol: f64, max_evals: usize) -> Result<QuadratureOutcome> {
        let f = |v: f64| self.weight(v) * self.kernel(m, v);
        let problem = QuadratureProblem::semi_infinite(&f, 0.0, self.a + 1.0)
            .with_singularity((self.p - 1.0).min(0.0));
        integrate_adaptive(&problem, abs_tol, max_evals)
    }

    /// The same moment from the expanded kernel:
    /// `Σ_{k<m} z^k Γ(p) / (a+1+k)^p`.
    pub fn strip_moment_closed_form(&self, m: u64) -> f64 {
        let g = gamma(self.p);
        let mut zk = 1.0;
        let mut sum = 0.0;
        for k in 0..m {
            sum += zk * (-self.p * (self.a + 1.0 + k as f64).ln()).exp();
            zk *= self.z;
            if zk == 0.0 {
                break;
            }
        }
        g * sum
    }

    /// Upper bound on `Σ_{m > last} w_m (V_∞ - V_m)`, the error of closing
    /// the strip sum with the limiting moment.
    fn closure_bound(&self, last: u64) -> f64 {
        let m = last as f64 + 1.0;
        let rest = gamma(self.p) * self.z.powf(m) * (-self.p * (self.a + 1.0 + m).ln()).exp()
            / (1.0 - self.z);
        self.strip_weight_tail(last) * rest
    }
}

/// Φ from the strip decomposition of the Hadamard double integral.
///
/// Strips `m = 1..=M` are integrated in `v` by quadrature. The remaining
/// strips have moments within `O(z^M)` of the limit `V_∞`, so they are
/// closed as `V_∞ · Σ_{m>M} w_m` in one step; `M` is the first strip count
/// for which that closure error is below a quarter of the tolerance.
pub fn phi_double_integral(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    let params = validate_for(params, Route::DoubleIntegral, tol)?;
    if params.z.re == 0.0 {
        return Ok(EvalResult::exact_zero(Route::DoubleIntegral));
    }
    let spec = DoubleIntegrandSpec::new(&params);
    let pref = params.normalization() * spec.z * spec.q / gamma(spec.p);

    let mut last = 1u64;
    while pref * spec.closure_bound(last) > 0.25 * tol.target_abs_tol {
        last += 1;
        if last as usize > tol.max_terms {
            return Err(Error::NonConvergence {
                route: Route::DoubleIntegral,
                terms: tol.max_terms,
                tail_estimate: pref * spec.closure_bound(last),
            });
        }
    }

    let total_weight = spec.strip_weight_tail(0);
    let v_limit = gamma(spec.p) / ((spec.a + 1.0).powf(spec.p) * (1.0 - spec.z));
    let moment_tol = floor_tol(0.5 * tol.target_abs_tol / (pref * total_weight), v_limit);

    let mut evals = 0;
    let mut sum = 0.0;
    let mut err = 0.0;
    for m in 1..=last {
        let budget = tol.max_function_evals.saturating_sub(evals);
        let out = spec.strip_moment(m, moment_tol, budget)?;
        let w = spec.strip_weight(m);
        sum += w * out.value;
        err += w * out.error_estimate;
        evals += out.evals;
    }
    let budget = tol.max_function_evals.saturating_sub(evals);
    let limit = spec.strip_moment(u64::MAX, moment_tol, budget)?;
    let tail_w = spec.strip_weight_tail(last);
    sum += tail_w * limit.value;
    err += tail_w * limit.error_estimate + spec.closure_bound(last);
    evals += limit.evals;

    Ok(EvalResult::new(
        (pref * sum).into(),
        pref * err,
        Route::DoubleIntegral,
        evals,
    ))
}

/// Φ from the symmetric double integral
/// `C z / (Γ(p)Γ(q)) ∬_{[0,∞)²} x^{p-1} y^{q-1} e^{-(a+1)x-(b+1)y} / (1 - z e^{-x-y}) dx dy`,
/// integrated as an outer `x` quadrature over inner `y` quadratures.
pub fn phi_double_integral_known(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    let params = validate_for(params, Route::DoubleIntegralKnown, tol)?;
    let PhiParams { p, q, a, b, .. } = params;
    let z = params.z.re;
    if z == 0.0 {
        return Ok(EvalResult::exact_zero(Route::DoubleIntegralKnown));
    }
    let pref = params.normalization() * z / (gamma(p) * gamma(q));
    // Bounds on the inner integral and on the outer weight's mass.
    let inner_size = gamma(q) / ((b + 1.0).powf(q) * (1.0 - z));
    let outer_mass = gamma(p) / (a + 1.0).powf(p);
    let inner_tol = floor_tol(0.25 * tol.target_abs_tol / (pref * outer_mass), inner_size);
    let outer_tol = floor_tol(0.5 * tol.target_abs_tol / pref, inner_size * outer_mass);

    let inner_evals = Cell::new(0usize);
    let inner_err = Cell::new(0.0f64);
    let failure = Cell::new(None::<Error>);
    let log_z = z.ln();
    let inner = |x: f64| -> f64 {
        let g = |y: f64| {
            let den = -(log_z - x - y).exp_m1();
            ((q - 1.0) * y.ln() - (b + 1.0) * y).exp() / den
        };
        let problem = QuadratureProblem::semi_infinite(&g, 0.0, b + 1.0).with_singularity((q - 1.0).min(0.0));
        let budget = tol.max_function_evals.saturating_sub(inner_evals.get());
        match integrate_adaptive(&problem, inner_tol, budget) {
            Ok(out) => {
                inner_evals.set(inner_evals.get() + out.evals);
                inner_err.set(inner_err.get().max(out.error_estimate));
                out.value
            }
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let outer = |x: f64| {
        if failure_is_set(&failure) {
            return 0.0;
        }
        ((p - 1.0) * x.ln() - (a + 1.0) * x).exp() * inner(x)
    };
    let problem = QuadratureProblem::semi_infinite(&outer, 0.0, a + 1.0).with_singularity((p - 1.0).min(0.0));
    let result = integrate_adaptive(&problem, outer_tol, tol.max_function_evals);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let out = result?;
    let evals = out.evals + inner_evals.get();
    let err = pref * (out.error_estimate + inner_err.get() * outer_mass);
    Ok(EvalResult::new(
        (pref * out.value).into(),
        err,
        Route::DoubleIntegralKnown,
        evals,
    ))
}

fn failure_is_set(cell: &Cell<Option<Error>>) -> bool {
    let e = cell.take();
    let set = e.is_some();
    cell.set(e);
    set
}

/// Lerch transcendent from its kernel integral
/// `a^{-s} + (z/Γ(s)) ∫_0^∞ x^{s-1} e^{-(a+1)x} / (1 - z e^{-x}) dx`.
pub fn lerch_kernel_integral(s: f64, a: f64, z: f64, tol: &ToleranceConfig) -> Result<EvalResult> {
    tol.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(DomainError::new("s", "s>0 required").into());
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(DomainError::new("a", "a>0 required").into());
    }
    if !(0.0..1.0).contains(&z) {
        return Err(DomainError::new("z", "real z in [0,1) required").into());
    }
    let head = (-s * a.ln()).exp();
    if z == 0.0 {
        return Ok(EvalResult::new(head.into(), 0.0, Route::LerchKernel, 1));
    }
    let pref = z / gamma(s);
    let log_z = z.ln();
    let f = |x: f64| ((s - 1.0) * x.ln() - (a + 1.0) * x).exp() / -(log_z - x).exp_m1();
    let size = gamma(s) / ((a + 1.0).powf(s) * (1.0 - z));
    let problem = QuadratureProblem::semi_infinite(&f, 0.0, a + 1.0).with_singularity((s - 1.0).min(0.0));
    let out = integrate_adaptive(&problem, floor_tol(tol.target_abs_tol / pref, size), tol.max_function_evals)?;
    let value = head + pref * out.value;
    Ok(EvalResult::new(
        value.into(),
        pref * out.error_estimate + 4.0 * f64::EPSILON * value,
        Route::LerchKernel,
        out.evals,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{lerch_series, phi_series};
    use crate::LerchParams;

    fn tol(t: f64) -> ToleranceConfig {
        ToleranceConfig::default().with_abs_tol(t)
    }

    #[test]
    fn strip_weights_cover_the_half_line() {
        let spec = DoubleIntegrandSpec::new(&PhiParams::new(0.5, 0.75, 1.5, 1.3, 0.5));
        let mut total = 0.0;
        for m in 0..=5000 {
            total += spec.strip_weight(m);
        }
        total += spec.strip_weight_tail(5000);
        assert!((total - 1.0 / 0.75).abs() < 1e-12);
    }

    #[test]
    fn staircase_jumps_at_breakpoints() {
        let spec = DoubleIntegrandSpec::new(&PhiParams::new(1.0, 1.0, 1.4, 1.2, 0.5));
        assert_eq!(spec.staircase(0.0), 0);
        for m in 1..50u64 {
            let u = spec.breakpoint(m);
            assert_eq!(spec.staircase(u + 1e-12), m);
            assert_eq!(spec.staircase(u - 1e-9), m - 1);
        }
    }

    #[test]
    fn strip_moments_match_expanded_kernel() {
        for params in [
            PhiParams::new(1.0, 1.0, 1.4, 1.2, 0.5),
            PhiParams::new(0.5, 0.75, 1.5, 1.5, 0.3),
            PhiParams::new(2.5, 1.0, 1.1, 1.2, 0.9),
        ] {
            let spec = DoubleIntegrandSpec::new(&params);
            for m in [1, 2, 7, 40] {
                let out = spec.strip_moment(m, 1e-12, 1_000_000).unwrap();
                let closed = spec.strip_moment_closed_form(m);
                assert!((out.value - closed).abs() < 1e-10, "{params:?} m={m}");
            }
        }
    }

    #[test]
    fn strip_moments_grow_with_the_strip() {
        let spec = DoubleIntegrandSpec::new(&PhiParams::new(0.5, 0.75, 1.5, 1.5, 0.3));
        let values: Vec<f64> = (1..10).map(|m| spec.strip_moment(m, 1e-12, 100_000).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn double_integral_examples() {
        let t = tol(1e-10);
        let params = PhiParams::new(1.0, 1.0, 1.4, 1.2, 0.5);
        let d = phi_double_integral(params, &t).unwrap();
        let s = phi_series(params, &t).unwrap();
        assert!((d.re() - s.re()).abs() < 1e-8);

        let params = PhiParams::new(0.5, 0.75, 1.5, 1.5, 0.3);
        let d = phi_double_integral(params, &t).unwrap();
        let s = phi_series(params, &t).unwrap();
        assert!((d.re() - s.re()).abs() < 1e-7);

        let zero = phi_double_integral(params.with_z(0.0), &t).unwrap();
        assert_eq!(zero.re(), 0.0);
    }

    #[test]
    fn double_integral_requires_real_argument() {
        let params = PhiParams::new(1.0, 1.0, 1.4, 1.2, num_complex::Complex64::new(0.1, 0.2));
        assert!(phi_double_integral(params, &tol(1e-8)).unwrap_err().is_domain());
    }

    #[test]
    fn known_double_integral_examples() {
        let t = tol(1e-10);
        let relaxed = ToleranceConfig { allow_small_shifts: true, ..t };
        let unit = phi_double_integral_known(PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.5), &relaxed).unwrap();
        assert!((unit.re() - 0.657_924_211_7).abs() < 1e-8);

        let params = PhiParams::new(2.0, 2.0, 1.2, 1.4, 0.7);
        let k = phi_double_integral_known(params, &t).unwrap();
        let s = phi_series(params, &t).unwrap();
        assert!((k.re() - s.re()).abs() < 1e-8);

        let zero = phi_double_integral_known(params.with_z(0.0), &t).unwrap();
        assert_eq!(zero.re(), 0.0);
    }

    #[test]
    fn lerch_kernel_examples() {
        let t = tol(1e-12);
        let r = lerch_kernel_integral(2.0, 1.0, 0.5, &t).unwrap();
        assert!((r.re() - 1.164_481_052_9).abs() < 1e-9);
        let r = lerch_kernel_integral(1.0, 2.0, 0.5, &t).unwrap();
        assert!((r.re() - (4.0 * std::f64::consts::LN_2 - 2.0)).abs() < 1e-9);
        assert_eq!(lerch_kernel_integral(2.0, 1.5, 0.0, &t).unwrap().re(), 1.5f64.powf(-2.0));
        let r = lerch_kernel_integral(0.5, 1.5, 0.9, &t).unwrap();
        let s = lerch_series(LerchParams::new(0.5, 1.5, 0.9), &t).unwrap();
        assert!((r.re() - s.re()).abs() < 1e-9);
    }
}
