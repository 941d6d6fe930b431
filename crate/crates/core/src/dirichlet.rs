//! The single-integral (Laplace) representation of Φ.
//!
//! Written as a Dirichlet series in `p`, Φ becomes
//!
//! ```text
//! Φ_{p,q}(a,b;z) = (1+a)^p (1+b)^q ( z/(1-z) + p z/(z-1) ∫_0^∞ e^{-py} z^{j(y)} dy ),
//! j(y) = ⌊Δ^{-1}(e^y)⌋,   Δ(y) = (y+a)(y+b)^{q/p},
//! ```
//!
//! valid for `a, b > 1`. The staircase `j` equals `n` on `[y_n, y_{n+1})`
//! with breakpoints `y_n = log Δ(n)`, so the integral splits into segments
//! that integrate in closed form.
//!
//! Two evaluators are provided. [`phi_single_integral_segments`] sums the
//! exact segment integrals; [`phi_single_integral_quadrature`] hands the
//! integrand, with `j` found pointwise by root finding, to the adaptive
//! quadrature engine and only borrows the breakpoints as split points.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DomainError, Error, Result};
use crate::params::{validate_for, EvalResult, PhiParams, Route, ToleranceConfig};
use crate::quadrature::{integrate_adaptive, QuadratureProblem};
use crate::ZERO;

const MAX_NEWTON_ITERATIONS: usize = 200;
const SNAP: f64 = 1e-12;

/// `Δ(y) = (y+a)(y+b)^{ratio}` with `ratio = q/p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaMap {
    pub a: f64,
    pub b: f64,
    pub ratio: f64,
}

impl DeltaMap {
    pub fn new(a: f64, b: f64, ratio: f64) -> Self {
        Self { a, b, ratio }
    }

    pub fn from_params(params: &PhiParams) -> Self {
        Self::new(params.a, params.b, params.q / params.p)
    }

    /// `log Δ(y)`.
    pub fn log_delta(&self, y: f64) -> f64 {
        (y + self.a).ln() + self.ratio * (y + self.b).ln()
    }

    fn log_delta_slope(&self, y: f64) -> f64 {
        1.0 / (y + self.a) + self.ratio / (y + self.b)
    }
}

pub fn delta(d: &DeltaMap, y: f64) -> f64 {
    (y + d.a) * (y + d.b).powf(d.ratio)
}

/// Solves `Δ(x) = t` for `x ≥ 0`.
pub fn delta_inverse(d: &DeltaMap, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(DomainError::new("t", "t>=Δ(0) required").into());
    }
    delta_inverse_log(d, t.ln())
}

/// Solves `log Δ(x) = log_t`, which avoids forming `e^y` for large `y`.
///
/// Safeguarded Newton on the concave, increasing `log Δ`; steps that leave
/// the bracket fall back to bisection.
pub fn delta_inverse_log(d: &DeltaMap, log_t: f64) -> Result<f64> {
    let base = d.log_delta(0.0);
    if log_t < base {
        // Δ(0) is the smallest value; allow rounding noise at the edge.
        if base - log_t <= 4.0 * f64::EPSILON * base.abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(DomainError::new("t", "t>=Δ(0) required").into());
    }
    // Δ(x) ≥ x^{1+ratio}, and Δ(x) ≤ (x + max(a,b))^{1+ratio}.
    let root = (log_t / (1.0 + d.ratio)).exp();
    if !(root * 4.0).is_finite() {
        return Err(DomainError::new("t", "Δ^{-1}(t) exceeds the f64 range").into());
    }
    let mut lo = (root - d.a.max(d.b)).max(0.0);
    let mut hi = root.max(lo + 1.0);
    let mut widen = 0;
    while d.log_delta(hi) < log_t {
        hi *= 2.0;
        widen += 1;
        if widen > 1100 {
            return Err(Error::ConvergenceFailure { iterations: widen });
        }
    }
    let mut x = lo;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let f = d.log_delta(x) - log_t;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f / d.log_delta_slope(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(1.0) || hi - lo <= f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::ConvergenceFailure {
        iterations: MAX_NEWTON_ITERATIONS,
    })
}

fn snap_floor(x: f64) -> u64 {
    let nearest = x.round();
    let x = if (x - nearest).abs() <= SNAP { nearest } else { x };
    x.floor().max(0.0) as u64
}

/// The staircase `j(y) = ⌊Δ^{-1}(e^y)⌋`, zero below `log Δ(0)`.
pub fn j_of_y(d: &DeltaMap, y: f64) -> u64 {
    if y < d.log_delta(0.0) {
        return 0;
    }
    match delta_inverse_log(d, y) {
        Ok(x) => snap_floor(x),
        // Only reachable when the root overflows f64.
        Err(_) => u64::MAX,
    }
}

/// Closed form of the staircase when `p = q`:
/// `⌊(-(a+b) + sqrt((a-b)^2 + 4e^y)) / 2⌋`, clamped at zero.
pub fn n_of_y_closed_form(a: f64, b: f64, y: f64) -> u64 {
    let ey = y.exp();
    let disc = ((a - b) * (a - b) + 4.0 * ey).sqrt();
    // Same root, rationalized to avoid cancelling a+b against the square root.
    let root = 2.0 * (ey - a * b) / ((a + b) + disc);
    if root <= 0.0 {
        return 0;
    }
    snap_floor(root)
}

/// Breakpoints of the staircase and the exact integral of `e^{-py}` over
/// every segment.
///
/// Segment `n` (1-based) is `[y_n, y_{n+1})`, on which `j = n`. The
/// decomposition stops after `N` segments; everything beyond `y_{N+1}` is
/// covered by `truncation_tail`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentDecomposition {
    pub p: f64,
    pub z: Complex64,
    /// `y_1, …, y_{N+1}`.
    pub breakpoints: Vec<f64>,
    /// `z^1, …, z^N`.
    pub coefficients: Vec<Complex64>,
    /// `e^{-p y_n}` for `n = 1..=N+1`.
    decays: Vec<f64>,
    /// `e^{-p y_n} - e^{-p y_{n+1}}` for `n = 1..=N`.
    drops: Vec<f64>,
    /// Bound on `|∫_{y_{N+1}}^∞ e^{-py} z^{j(y)} dy|`, i.e. `|z|^{N+1} e^{-p y_{N+1}} / p`.
    pub truncation_tail: f64,
}

impl SegmentDecomposition {
    pub fn segments(&self) -> usize {
        self.coefficients.len()
    }

    /// The truncated Laplace integral `∫_0^{y_{N+1}} e^{-py} z^{j(y)} dy`.
    pub fn laplace_integral(&self) -> Complex64 {
        let head = -(-self.p * self.breakpoints[0]).exp_m1() / self.p;
        let body: Complex64 = self
            .coefficients
            .iter()
            .zip(&self.drops)
            .map(|(c, d)| c * (d / self.p))
            .sum();
        head + body
    }

    /// `Σ_{n≥1} z^n e^{-p y_n}` rebuilt from the segments.
    ///
    /// Summing `z/(1-z) - p z/(1-z) ∫ e^{-py} z^{j} dy` directly cancels badly
    /// for `z` near one. Telescoping the segment integrals gives the same
    /// quantity as `z Σ_n g_n (e^{-p y_n} - e^{-p y_{n+1}})` with
    /// `g_n = 1 + z + … + z^{n-1}`, plus the closed-form remainder
    /// `z e^{-p y_{N+1}} / (1 - z)`. Every term is non-negative for real `z`.
    pub fn dirichlet_sum(&self) -> Complex64 {
        let z = self.z;
        let mut partial = Complex64::new(1.0, 0.0);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut acc = ZERO;
        for d in &self.drops {
            acc += partial * *d;
            zk *= z;
            partial += zk;
        }
        let last = *self.decays.last().unwrap();
        z * (acc + last / (1.0 - z))
    }

    /// Bound on the error of [`Self::dirichlet_sum`] from truncation.
    pub fn dirichlet_tail(&self) -> f64 {
        let z = self.z;
        self.p * z.norm() * self.truncation_tail / (1.0 - z).norm()
    }
}

/// Builds the segment decomposition for Φ.
///
/// Breakpoints are computed forward as `y_n = log Δ(n)`; no root finding.
/// Segments are added until the truncation error of the resulting Φ value
/// is below `target_abs_tol`.
pub fn build_segments(params: PhiParams, tol: &ToleranceConfig) -> Result<SegmentDecomposition> {
    let params = validate_for(params, Route::SingleIntegralSegments, tol)?;
    let PhiParams { p, q, a, b, z } = params;
    let d = DeltaMap::from_params(&params);
    let scale = params.normalization();
    segments_from(
        p,
        z,
        |n| d.log_delta(n),
        |n| p * (n + a).ln() + q * (n + b).ln(),
        |n| p * (1.0 / (n + a)).ln_1p() + q * (1.0 / (n + b)).ln_1p(),
        scale,
        tol,
        Route::SingleIntegralSegments,
    )
}

/// Shared builder. `breakpoint(n) = y_n`, `scaled(n) = p·y_n`,
/// `gap(n) = p·(y_{n+1} - y_n)`; `scale` multiplies the final value.
#[allow(clippy::too_many_arguments)]
fn segments_from(
    p: f64,
    z: Complex64,
    breakpoint: impl Fn(f64) -> f64,
    scaled: impl Fn(f64) -> f64,
    gap: impl Fn(f64) -> f64,
    scale: f64,
    tol: &ToleranceConfig,
    route: Route,
) -> Result<SegmentDecomposition> {
    let zn = z.norm();
    let weight = scale * p * zn / (1.0 - z).norm();
    let mut breakpoints = vec![breakpoint(1.0)];
    let mut decays = vec![(-scaled(1.0)).exp()];
    let mut coefficients = Vec::new();
    let mut drops = Vec::new();
    let mut zk = Complex64::new(1.0, 0.0);
    let mut zk_abs = 1.0;
    loop {
        let n = coefficients.len() as f64 + 1.0;
        zk *= z;
        zk_abs *= zn;
        let decay = *decays.last().unwrap();
        coefficients.push(zk);
        drops.push(-decay * (-gap(n)).exp_m1());
        breakpoints.push(breakpoint(n + 1.0));
        let next = (-scaled(n + 1.0)).exp();
        decays.push(next);

        let tail = zk_abs * zn * next / p;
        if weight * tail <= tol.target_abs_tol || tail == 0.0 {
            return Ok(SegmentDecomposition {
                p,
                z,
                breakpoints,
                coefficients,
                decays,
                drops,
                truncation_tail: tail,
            });
        }
        if coefficients.len() >= tol.max_terms {
            return Err(Error::NonConvergence {
                route,
                terms: coefficients.len(),
                tail_estimate: weight * tail,
            });
        }
    }
}

/// Φ from the exact segment integrals of the single-integral representation.
pub fn phi_single_integral_segments(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    let params = validate_for(params, Route::SingleIntegralSegments, tol)?;
    if params.z == ZERO {
        return Ok(EvalResult::exact_zero(Route::SingleIntegralSegments));
    }
    let segs = build_segments(params, tol)?;
    let scale = params.normalization();
    let value = scale * segs.dirichlet_sum();
    let roundoff = 8.0 * f64::EPSILON * value.norm() * (segs.segments() as f64).sqrt().max(1.0);
    Ok(EvalResult::new(
        value,
        scale * segs.dirichlet_tail() + roundoff,
        Route::SingleIntegralSegments,
        segs.segments(),
    ))
}

/// How the quadrature route evaluates the staircase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Staircase {
    /// `⌊Δ^{-1}(e^y)⌋` by root finding.
    #[default]
    Inverse,
    /// The `p = q` closed form.
    ClosedForm,
}

/// Φ by adaptive quadrature of `e^{-py} z^{j(y)}`.
pub fn phi_single_integral_quadrature(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    phi_single_integral_quadrature_with(params, tol, Staircase::Inverse)
}

pub fn phi_single_integral_quadrature_with(
    params: PhiParams,
    tol: &ToleranceConfig,
    staircase: Staircase,
) -> Result<EvalResult> {
    let params = validate_for(params, Route::SingleIntegralQuad, tol)?;
    if staircase == Staircase::ClosedForm && params.p != params.q {
        return Err(DomainError::new("q", "closed-form staircase needs p=q").into());
    }
    if params.z == ZERO {
        return Ok(EvalResult::exact_zero(Route::SingleIntegralQuad));
    }
    let PhiParams { p, a, b, .. } = params;
    let x = params.z.re;
    let scale = params.normalization();
    let weight = scale * p * x / (1.0 - x);

    // Truncation point and split points come from the forward breakpoints.
    let half = tol.with_abs_tol(0.5 * tol.target_abs_tol);
    let segs = build_segments(params, &half)?;
    let end = *segs.breakpoints.last().unwrap();
    let splits = segs.breakpoints[..segs.breakpoints.len() - 1].to_vec();

    let d = DeltaMap::from_params(&params);
    let integrand = |y: f64| {
        let j = match staircase {
            Staircase::Inverse => j_of_y(&d, y),
            Staircase::ClosedForm => n_of_y_closed_form(a, b, y),
        };
        (-p * y).exp() * x.powi(j.min(i32::MAX as u64) as i32)
    };
    let problem = QuadratureProblem::finite(&integrand, 0.0, end).with_splits(splits);
    // Below ~100 ulp of the integral the rule cannot resolve anything.
    let quad_tol = (0.5 * tol.target_abs_tol / weight).max(200.0 * f64::EPSILON / p);
    let out = integrate_adaptive(&problem, quad_tol, tol.max_function_evals)?;

    let value = phi_from_laplace(scale, p, params.z, Complex64::new(out.value, 0.0));
    let error = weight * (out.error_estimate + segs.truncation_tail)
        + 8.0 * f64::EPSILON * scale * x / (1.0 - x);
    Ok(EvalResult::new(value, error, Route::SingleIntegralQuad, out.evals))
}

/// `scale · (z/(1-z) + p z/(z-1) · laplace)`.
pub fn phi_from_laplace(scale: f64, p: f64, z: Complex64, laplace: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    scale * (z / (one - z) + p * z / (z - one) * laplace)
}

/// Lerch transcendent from its single-integral form
///
/// ```text
/// Σ_{n≥0} z^n/(n+a)^s = a^{-s} + z/(1-z) + s z/(z-1) ∫_0^∞ e^{-sτ} z^{⌊e^τ - a⌋} dτ,
/// ```
///
/// evaluated segment by segment with breakpoints `τ_n = log(n+a)`. The floor
/// is negative for `τ < log a`; there the staircase is zero (no terms yet).
pub fn lerch_single_integral(s: f64, a: f64, z: f64, tol: &ToleranceConfig) -> Result<EvalResult> {
    tol.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(DomainError::new("s", "s>0 required").into());
    }
    let min_a = if tol.allow_small_shifts { 0.0 } else { 1.0 };
    if !(a > min_a && a.is_finite()) {
        let msg = if tol.allow_small_shifts { "a>0 required" } else { "a>1 required" };
        return Err(DomainError::new("a", msg).into());
    }
    if !(0.0..1.0).contains(&z) {
        return Err(DomainError::new("z", "real z in [0,1) required").into());
    }
    let head = (-s * a.ln()).exp();
    if z == 0.0 {
        return Ok(EvalResult::new(head.into(), 0.0, Route::LerchIntegral, 1));
    }
    let segs = segments_from(
        s,
        z.into(),
        |n| (n + a).ln(),
        |n| s * (n + a).ln(),
        |n| s * (1.0 / (n + a)).ln_1p(),
        1.0,
        tol,
        Route::LerchIntegral,
    )?;
    let value = head + segs.dirichlet_sum();
    let roundoff = 8.0 * f64::EPSILON * value.norm();
    Ok(EvalResult::new(
        value,
        segs.dirichlet_tail() + roundoff,
        Route::LerchIntegral,
        segs.segments(),
    ))
}
