//! Numerical checks of the analytic properties of Φ.
//!
//! Everything is phrased through
//!
//! ```text
//! ψ(p) = (Φ_{p,q}(a,b;x) / ((1+a)^p (1+b)^q) - x/(1-x)) · (x-1)/(p x)
//!      = ∫_0^∞ e^{-pt} x^{j(t)} dt,
//! ```
//!
//! which is completely monotonic and log-convex in `p`. Checks return a
//! [`PropertyReport`] with one signed gap per test; a gap `≥ -tolerance`
//! passes.

use serde::Serialize;

use crate::dirichlet::build_segments;
use crate::error::{DomainError, Result};
use crate::params::{PhiParams, ToleranceConfig};
use crate::series::phi_series;

const PSI_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Property {
    CompleteMonotonicity,
    LogConvexity,
    TuranPsi,
    TuranPhiQ,
    TuranPhiP,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    /// Evaluation point of each gap.
    pub grid: Vec<f64>,
    /// Difference order for monotonicity; 0 = lower, 1 = upper for bounds;
    /// 0 otherwise.
    pub component: Vec<u32>,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PropertyReport {
    fn new(property: Property, grid: Vec<f64>, component: Vec<u32>, gaps: Vec<f64>, tolerance: f64) -> Self {
        let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let verdict = if min_gap >= -tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            property,
            grid,
            component,
            gaps,
            min_gap,
            tolerance,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `lo, lo+step, …, hi`, inclusive, computed as `lo + i·step` so every
/// caller sees the same points.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).round() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

/// Fixed parameters of ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiParams {
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl PsiParams {
    pub fn new(q: f64, a: f64, b: f64, x: f64) -> Self {
        Self { q, a, b, x }
    }

    pub fn validate(&self) -> Result<Self> {
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(DomainError::new("q", "q>0 required").into());
        }
        if !(self.a > 1.0 && self.a.is_finite()) {
            return Err(DomainError::new("a", "a>1 required").into());
        }
        if !(self.b > 1.0 && self.b.is_finite()) {
            return Err(DomainError::new("b", "b>1 required").into());
        }
        if !(self.x > 0.0 && self.x < 1.0) {
            return Err(DomainError::new("x", "x in (0,1) required").into());
        }
        Ok(*self)
    }

    pub fn phi_params(&self, p: f64) -> PhiParams {
        PhiParams::new(p, self.q, self.a, self.b, self.x)
    }
}

/// Which representation ψ is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiRoute {
    #[default]
    Series,
    Segments,
}

/// ψ(p) from the power series of Φ.
pub fn psi(p: f64, ctx: &PsiParams) -> Result<f64> {
    psi_with(p, ctx, PsiRoute::Series)
}

pub fn psi_with(p: f64, ctx: &PsiParams, route: PsiRoute) -> Result<f64> {
    ctx.validate()?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(DomainError::new("p", "p>0 required").into());
    }
    let x = ctx.x;
    let params = ctx.phi_params(p);
    let c = params.normalization();
    let tol = ToleranceConfig::default().with_abs_tol(PSI_TOL * c);
    match route {
        PsiRoute::Series => {
            let phi = phi_series(params, &tol)?.re() / c;
            Ok((x / (1.0 - x) - phi) * (1.0 - x) / (p * x))
        }
        PsiRoute::Segments => Ok(build_segments(params, &tol)?.laplace_integral().re),
    }
}

/// `Δ_h^k f(p0) = Σ_j (-1)^{k-j} C(k,j) f(p0 + j h)`.
pub fn forward_differences<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    p0: f64,
    h: f64,
    k: usize,
) -> std::result::Result<f64, E> {
    assert!(k <= 8, "difference order above 8");
    assert!(h > 0.0, "step must be positive");
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..=k {
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += sign * binom * f(p0 + j as f64 * h)?;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    Ok(sum)
}

/// `(-1)^k Δ_h^k f(p) ≥ -tol` for every grid point and `k ≤ max_order`.
pub fn check_complete_monotonicity_fn<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    p_grid: &[f64],
    max_order: usize,
    h: f64,
    tol: f64,
) -> std::result::Result<PropertyReport, E> {
    assert!(max_order <= 6, "difference order above 6");
    let (mut grid, mut component, mut gaps) = (Vec::new(), Vec::new(), Vec::new());
    for &p in p_grid {
        // One sweep of samples serves every order at this point.
        let samples = (0..=max_order)
            .map(|j| f(p + j as f64 * h))
            .collect::<std::result::Result<Vec<_>, E>>()?;
        for k in 0..=max_order {
            let d = forward_differences(|t| Ok::<_, E>(samples[((t - p) / h).round() as usize]), p, h, k)?;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            grid.push(p);
            component.push(k as u32);
            gaps.push(sign * d);
        }
    }
    Ok(PropertyReport::new(Property::CompleteMonotonicity, grid, component, gaps, tol))
}

pub fn check_complete_monotonicity(
    ctx: &PsiParams,
    p_grid: &[f64],
    max_order: usize,
    h: f64,
    tol: f64,
) -> Result<PropertyReport> {
    check_complete_monotonicity_fn(|p| psi(p, ctx), p_grid, max_order, h, tol)
}

/// `log f(p-h) - 2 log f(p) + log f(p+h) ≥ -tol` at grid points with `p > h`.
pub fn check_log_convexity_fn<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    p_grid: &[f64],
    h: f64,
    tol: f64,
) -> std::result::Result<PropertyReport, E> {
    let (mut grid, mut gaps) = (Vec::new(), Vec::new());
    for &p in p_grid.iter().filter(|&&p| p > h) {
        let gap = f(p - h)?.ln() - 2.0 * f(p)?.ln() + f(p + h)?.ln();
        grid.push(p);
        gaps.push(gap);
    }
    let component = vec![0; grid.len()];
    Ok(PropertyReport::new(Property::LogConvexity, grid, component, gaps, tol))
}

pub fn check_log_convexity(ctx: &PsiParams, p_grid: &[f64], h: f64, tol: f64) -> Result<PropertyReport> {
    check_log_convexity_fn(|p| psi(p, ctx), p_grid, h, tol)
}

/// `f(p) f(p+2) - f(p+1)²`.
pub fn turan_gap_fn<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    p: f64,
) -> std::result::Result<f64, E> {
    let mid = f(p + 1.0)?;
    Ok(f(p)? * f(p + 2.0)? - mid * mid)
}

pub fn turan_gap_psi(p: f64, ctx: &PsiParams) -> Result<f64> {
    turan_gap_fn(|t| psi(t, ctx), p)
}

pub fn check_turan_psi(ctx: &PsiParams, p_grid: &[f64], tol: f64) -> Result<PropertyReport> {
    let gaps = p_grid
        .iter()
        .map(|&p| turan_gap_psi(p, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport::new(
        Property::TuranPsi,
        p_grid.to_vec(),
        vec![0; p_grid.len()],
        gaps,
        tol,
    ))
}

fn real_phi(params: PhiParams) -> Result<f64> {
    let x = params
        .real_z()
        .filter(|x| *x > 0.0)
        .ok_or_else(|| DomainError::new("z", "real x in (0,1) required"))?;
    let scale = params.normalization() * x / (1.0 - x);
    let tol = ToleranceConfig::default().with_abs_tol(PSI_TOL * scale);
    Ok(phi_series(params, &tol)?.re())
}

/// `Φ_{p,q} Φ_{p,q+2} - Φ_{p,q+1}²` at real `x`.
pub fn turan_gap_phi_q(params: PhiParams) -> Result<f64> {
    let shifted = |dq: f64| real_phi(PhiParams { q: params.q + dq, ..params });
    let mid = shifted(1.0)?;
    Ok(shifted(0.0)? * shifted(2.0)? - mid * mid)
}

/// `Φ_{p,q} Φ_{p+2,q} - Φ_{p+1,q}²` at real `x`.
pub fn turan_gap_phi_p(params: PhiParams) -> Result<f64> {
    let shifted = |dp: f64| real_phi(PhiParams { p: params.p + dp, ..params });
    let mid = shifted(1.0)?;
    Ok(shifted(0.0)? * shifted(2.0)? - mid * mid)
}

/// Truncated double-sum form of the `q`-shift Turán gap:
/// `x² (1+a)^{2p} (1+b)^{2q+2} Σ_{n≤N} x^n Σ_{k≤n} f(n,k)` with
/// `f(n,k) = (2k-n) / ((k+1+a)^p (n-k+1+a)^p (k+1+b)^{q+1} (n-k+1+b)^{q+2})`.
pub fn turan_phi_q_double_sum(params: PhiParams, n_max: usize) -> f64 {
    let PhiParams { p, q, a, b, .. } = params;
    let x = params.z.re;
    let pref = (2.0 * p * a.ln_1p() + (2.0 * q + 2.0) * b.ln_1p()).exp();
    pref * x * x * double_sum(x, n_max, |n, k| {
        let (i, j) = (k + 1.0, n - k + 1.0);
        (2.0 * k - n)
            * (-p * (i + a).ln() - p * (j + a).ln() - (q + 1.0) * (i + b).ln() - (q + 2.0) * (j + b).ln()).exp()
    })
}

/// The `p`-shift analogue, with exponents `p+1, p+2` on the `a` factors and
/// prefactor `(1+a)^{2p+2} (1+b)^{2q}`.
pub fn turan_phi_p_double_sum(params: PhiParams, n_max: usize) -> f64 {
    let PhiParams { p, q, a, b, .. } = params;
    let x = params.z.re;
    let pref = ((2.0 * p + 2.0) * a.ln_1p() + 2.0 * q * b.ln_1p()).exp();
    pref * x * x * double_sum(x, n_max, |n, k| {
        let (i, j) = (k + 1.0, n - k + 1.0);
        (2.0 * k - n)
            * (-(p + 1.0) * (i + a).ln() - (p + 2.0) * (j + a).ln() - q * (i + b).ln() - q * (j + b).ln()).exp()
    })
}

fn double_sum(x: f64, n_max: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut total = 0.0;
    let mut xn = 1.0;
    for n in 0..=n_max {
        let inner: f64 = (0..=n).map(|k| f(n as f64, k as f64)).sum();
        total += xn * inner;
        xn *= x;
    }
    total
}

/// Bound on what either double sum drops after `n_max`.
///
/// With the prefactor folded in, every `|f(n,k)|` is at most
/// `n / (1 + min(a, b))`, so the tail is at most
/// `x² Σ_{n>N} n (n+1) x^n / (1 + min(a, b))`.
pub fn turan_double_sum_tail(params: PhiParams, n_max: usize) -> f64 {
    let x = params.z.re;
    let mut tail = 0.0;
    let mut n = n_max + 1;
    let mut xn = x.powi(n as i32);
    loop {
        let term = (n * (n + 1)) as f64 * xn;
        tail += term;
        if term <= 1e-17 * tail && (n as f64) * (1.0 - x) > 2.0 {
            break;
        }
        n += 1;
        xn *= x;
    }
    x * x * tail / (1.0 + params.a.min(params.b))
}

/// `x ≤ Φ ≤ (1+a)^p (1+b)^q x/(1-x)` over `x_grid`.
pub fn bounds_check(params: PhiParams, x_grid: &[f64], tol: f64) -> Result<PropertyReport> {
    let (mut grid, mut component, mut gaps) = (Vec::new(), Vec::new(), Vec::new());
    let c = params.normalization();
    for &x in x_grid {
        let phi = real_phi(params.with_z(x))?;
        for (side, gap) in [(0, phi - x), (1, c * x / (1.0 - x) - phi)] {
            grid.push(x);
            component.push(side);
            gaps.push(gap);
        }
    }
    Ok(PropertyReport::new(Property::Bounds, grid, component, gaps, tol))
}

/// The `q`-shift Turán gaps over `x_grid`.
pub fn check_turan_phi_q(params: PhiParams, x_grid: &[f64], tol: f64) -> Result<PropertyReport> {
    turan_phi_report(Property::TuranPhiQ, params, x_grid, tol, turan_gap_phi_q)
}

pub fn check_turan_phi_p(params: PhiParams, x_grid: &[f64], tol: f64) -> Result<PropertyReport> {
    turan_phi_report(Property::TuranPhiP, params, x_grid, tol, turan_gap_phi_p)
}

fn turan_phi_report(
    property: Property,
    params: PhiParams,
    x_grid: &[f64],
    tol: f64,
    gap: fn(PhiParams) -> Result<f64>,
) -> Result<PropertyReport> {
    let gaps = x_grid
        .iter()
        .map(|&x| gap(params.with_z(x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport::new(property, x_grid.to_vec(), vec![0; x_grid.len()], gaps, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> std::result::Result<f64, Infallible> {
        move |x| Ok(f(x))
    }

    fn fig1() -> PsiParams {
        PsiParams::new(0.75, 1.4, 1.2, 0.5)
    }

    #[test]
    fn grids_are_inclusive() {
        let g = grid(0.1, 5.0, 0.1);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.1);
        assert!((g[49] - 5.0).abs() < 1e-12);
        assert_eq!(grid(0.05, 0.95, 0.05).len(), 19);
    }

    #[test]
    fn difference_examples() {
        assert_eq!(forward_differences(ok(|_| 1.0), 0.3, 0.1, 3).unwrap(), 0.0);
        let d = forward_differences(ok(|p: f64| (-p).exp()), 1.0, 0.1, 2).unwrap();
        let truth = (-1.0f64).exp() * (1.0 - (-0.1f64).exp()).powi(2);
        assert!((d - truth).abs() < 1e-15);
        assert_eq!(forward_differences(ok(|p| p), 2.0, 0.5, 1).unwrap(), 0.5);
    }

    #[test]
    fn psi_is_positive_and_below_one_over_p() {
        for p in grid(0.1, 5.0, 0.3) {
            let v = psi(p, &fig1()).unwrap();
            assert!(v > 0.0 && v < 1.0 / p, "p={p}: {v}");
        }
    }

    #[test]
    fn psi_routes_agree() {
        for p in [0.1, 1.0, 2.7, 5.0] {
            let s = psi_with(p, &fig1(), PsiRoute::Series).unwrap();
            let g = psi_with(p, &fig1(), PsiRoute::Segments).unwrap();
            assert!((s - g).abs() < 1e-10, "p={p}: {s} vs {g}");
        }
    }

    #[test]
    fn psi_matches_segment_sum() {
        // ψ(p) = (1 - Δ(1)^{-p})/p + Σ_n x^n (Δ(n)^{-p} - Δ(n+1)^{-p})/p
        let ctx = fig1();
        let p = 1.3;
        let delta = |n: f64| (n + ctx.a) * (n + ctx.b).powf(ctx.q / p);
        let mut oracle = (1.0 - delta(1.0).powf(-p)) / p;
        for n in 1..200 {
            let n = n as f64;
            oracle += ctx.x.powf(n) * (delta(n).powf(-p) - delta(n + 1.0).powf(-p)) / p;
        }
        assert!((psi(p, &ctx).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn complete_monotonicity_of_psi() {
        let r = check_complete_monotonicity(&fig1(), &grid(0.1, 5.0, 0.1), 5, 0.01, 1e-9).unwrap();
        assert!(r.passed(), "min gap {}", r.min_gap);
        assert_eq!(r.gaps.len(), 50 * 6);
    }

    #[test]
    fn monotonicity_check_catches_perturbation() {
        let ctx = fig1();
        let r = check_complete_monotonicity_fn(|p| psi(p, &ctx).map(|v| v + p), &grid(0.1, 1.0, 0.1), 2, 0.01, 1e-9)
            .unwrap();
        assert!(!r.passed());
        let first = r.component.iter().zip(&r.gaps).find(|(_, g)| **g < -1e-9).unwrap();
        assert_eq!(*first.0, 1);
    }

    #[test]
    fn log_convexity_examples() {
        let r = check_log_convexity(&PsiParams::new(0.75, 1.5, 1.2, 0.5), &grid(0.1, 5.0, 0.1), 0.01, 1e-9).unwrap();
        assert!(r.passed());
        let lin = check_log_convexity_fn(ok(|p: f64| (-p).exp()), &grid(0.5, 3.0, 0.5), 0.01, 1e-12).unwrap();
        assert!(lin.gaps.iter().all(|g| g.abs() < 1e-13));
        let concave = check_log_convexity_fn(ok(|p: f64| (-p * p).exp()), &grid(0.5, 3.0, 0.5), 0.01, 1e-9).unwrap();
        assert!(!concave.passed());
    }

    #[test]
    fn turan_examples() {
        let ctx = PsiParams::new(0.75, 1.6, 1.2, 0.5);
        for p in grid(0.1, 5.0, 0.1) {
            assert!(turan_gap_psi(p, &ctx).unwrap() >= -1e-12);
        }
        assert!(turan_gap_fn(ok(|p: f64| (-p).exp()), 0.7).unwrap().abs() < 1e-16);
        let g = turan_gap_fn(ok(|p: f64| 1.0 / p), 2.0).unwrap();
        assert!((g - (1.0 / 8.0 - 1.0 / 9.0)).abs() < 1e-16);
    }

    #[test]
    fn phi_turan_gaps_match_double_sums() {
        let base = PhiParams::new(0.5, 0.75, 1.4, 1.8, 0.3);
        for x in [0.05, 0.2, 0.3] {
            let params = base.with_z(x);
            let gq = turan_gap_phi_q(params).unwrap();
            let gp = turan_gap_phi_p(params).unwrap();
            assert!((gq - turan_phi_q_double_sum(params, 40)).abs() < 1e-10);
            assert!((gp - turan_phi_p_double_sum(params, 40)).abs() < 1e-10);
        }
        let params = base.with_z(0.9);
        let gap = turan_gap_phi_q(params).unwrap();
        let short = turan_phi_q_double_sum(params, 40);
        assert!((gap - short).abs() <= turan_double_sum_tail(params, 40));
        assert!((gap - turan_phi_q_double_sum(params, 600)).abs() < 1e-10);
    }

    #[test]
    fn phi_turan_symmetry_and_origin() {
        let params = PhiParams::new(0.5, 0.75, 1.4, 1.8, 0.6);
        let swapped = PhiParams::new(0.75, 0.5, 1.8, 1.4, 0.6);
        let a = turan_gap_phi_p(params).unwrap();
        let b = turan_gap_phi_q(swapped).unwrap();
        assert!((a - b).abs() < 1e-13);
        let small = turan_gap_phi_q(params.with_z(1e-4)).unwrap();
        assert!(small.abs() < 1e-8);
    }

    #[test]
    fn bounds_examples() {
        let r = bounds_check(PhiParams::new(0.5, 0.75, 1.2, 1.3, 0.5), &grid(0.05, 0.95, 0.05), 0.0).unwrap();
        assert!(r.passed() && r.min_gap > 0.0);
        let unit = PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.5);
        let r = bounds_check(unit, &[0.5], 0.0).unwrap();
        assert!((r.gaps[0] - (0.657_924_211_7 - 0.5)).abs() < 1e-10);
        assert!((r.gaps[1] - (4.0 - 0.657_924_211_7)).abs() < 1e-10);
    }

    #[test]
    fn psi_rejects_bad_context() {
        assert!(psi(1.0, &PsiParams::new(0.75, 1.0, 1.2, 0.5)).unwrap_err().is_domain());
        assert!(psi(0.0, &fig1()).unwrap_err().is_domain());
    }
}
