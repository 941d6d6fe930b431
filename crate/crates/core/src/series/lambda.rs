//! The λ-accelerated Lerch series
//!
//! ```text
//! Ψ_λ(z, s, a) = Σ_{n≥0} (1-λ)^{-(n+1)} Σ_{k=0}^{n} C(n,k) (-λ)^{n-k} z^k / (k+a)^s,   λ < 1/2.
//! ```
//!
//! With `θ = 1/(1-λ)` the n-th outer term is `θ ((θE - θλ)^n w)_0`, where
//! `w_k = z^k/(k+a)^s` and `E` shifts the sequence by one. Applying the
//! operator `θE - θλ` repeatedly to `w` produces every outer term in
//! `O(N²)` work without forming binomials.
//!
//! Each outer term is bounded by `a^{-s} ρ^n θ^{n+1}` with
//! `ρ = max(|z - λ|, |λ|)`, because the inner sum equals
//! `Γ(s)^{-1} ∫ t^{s-1} e^{-at} (z e^{-t} - λ)^n dt`. That gives a rigorous
//! geometric tail bound and fixes the number of terms up front.
//!
//! For `λ > 0` (or a complex or negative `z`) the inner sums cancel: their
//! terms grow like `(θ(|λ| + |z|))^n` while the sum decays like `(θρ)^n`.
//! Those cases run in binary floating point with enough bits to absorb the
//! cancellation; the non-negative case stays in `f64`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

use crate::error::{DomainError, Error, Result};
use crate::params::{EvalResult, LerchParams, Route, ToleranceConfig};

const RM: RoundingMode = RoundingMode::ToEven;

/// Lerch transcendent through the λ-series.
///
/// Stops once the rigorous tail bound is below `target_abs_tol` and the last
/// three outer terms are below it as well.
pub fn lerch_lambda_series(params: LerchParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    tol.validate()?;
    let params = params.validate()?;
    let plan = Plan::new(&params, tol.target_abs_tol)?;
    if plan.terms > tol.max_terms {
        return Err(Error::NonConvergence {
            route: Route::LambdaSeries,
            terms: tol.max_terms,
            tail_estimate: plan.tail_after(tol.max_terms),
        });
    }

    let count = plan.terms + 3;
    let outer = outer_terms(&params, count, plan.bits(count, tol.target_abs_tol));
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    let mut used = 0;
    for (n, term) in outer.iter().enumerate() {
        value += term;
        abs_sum += term.norm();
        used = n + 1;
        small_run = if term.norm() < tol.target_abs_tol { small_run + 1 } else { 0 };
        if n + 1 >= plan.terms && small_run >= 3 {
            break;
        }
    }
    let error = plan.tail_after(used) + 4.0 * f64::EPSILON * abs_sum * (used as f64).sqrt();
    Ok(EvalResult::new(value, error, Route::LambdaSeries, used))
}

/// The first `count` outer terms of the λ-series, in order.
///
/// With `λ = 0` these are exactly the terms `z^n/(n+a)^s` of the plain series.
pub fn lambda_outer_terms(params: LerchParams, count: usize) -> Result<Vec<Complex64>> {
    let params = params.validate()?;
    let plan = Plan::new(&params, 1e-16)?;
    Ok(outer_terms(&params, count, plan.bits(count, 1e-16)))
}

struct Plan {
    lambda: f64,
    z_abs: f64,
    scale: f64,
    /// θρ, the geometric decay rate of the outer terms.
    rate: f64,
    /// Number of outer terms after which the tail bound is below tolerance.
    terms: usize,
    stable: bool,
}

impl Plan {
    fn new(params: &LerchParams, tol: f64) -> Result<Self> {
        let LerchParams { s, a, z, lambda } = *params;
        let theta = 1.0 / (1.0 - lambda);
        let rho = (z - lambda).norm().max(lambda.abs());
        let rate = theta * rho;
        if !(rate < 1.0) {
            return Err(DomainError::new("z", "|z-λ|<1-λ required for the λ-series").into());
        }
        let scale = (-s * a.ln()).exp();
        let mut plan = Self {
            lambda,
            z_abs: z.norm(),
            scale,
            rate,
            terms: 1,
            stable: lambda <= 0.0 && z.im == 0.0 && z.re >= 0.0,
        };
        if rate > 0.0 {
            // smallest N with tail_after(N) ≤ tol
            let needed = (tol * (1.0 - rate) / (theta * scale)).ln() / rate.ln();
            plan.terms = needed.ceil().max(1.0) as usize;
            while plan.terms > 1 && plan.tail_after(plan.terms - 1) <= tol {
                plan.terms -= 1;
            }
            while plan.tail_after(plan.terms) > tol {
                plan.terms += 1;
            }
        }
        Ok(plan)
    }

    /// Bound on Σ_{n ≥ used} |outer_n|.
    fn tail_after(&self, used: usize) -> f64 {
        if self.rate == 0.0 {
            return if used >= 1 { 0.0 } else { self.scale };
        }
        let theta = 1.0 / (1.0 - self.lambda);
        theta * self.scale * self.rate.powi(used as i32) / (1.0 - self.rate)
    }

    /// Working precision for `count` outer terms, or `None` for plain `f64`.
    fn bits(&self, count: usize, tol: f64) -> Option<usize> {
        if self.stable {
            return None;
        }
        let theta = 1.0 / (1.0 - self.lambda);
        let growth = (theta * (self.lambda.abs() + self.z_abs)).max(1.0).log2();
        let extra = (theta * self.scale.max(1.0) * 10.0 * (count as f64 + 1.0) / tol).log2();
        let bits = 64.0 + count as f64 * growth + extra.max(0.0);
        Some((bits.ceil() as usize).max(128).div_ceil(64) * 64)
    }
}

fn outer_terms(params: &LerchParams, count: usize, bits: Option<usize>) -> Vec<Complex64> {
    match bits {
        None => outer_terms_f64(params, count),
        Some(bits) => outer_terms_mp(params, count, bits),
    }
}

fn outer_terms_f64(params: &LerchParams, count: usize) -> Vec<Complex64> {
    let LerchParams { s, a, z, lambda } = *params;
    let theta = 1.0 / (1.0 - lambda);
    let shift = theta * lambda;
    // Same arithmetic as the plain series, so λ = 0 reproduces it bit for bit.
    let mut row = Vec::with_capacity(count);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 0..count {
        row.push(zk * (-s * (k as f64 + a).ln()).exp());
        zk *= z;
    }
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        out.push(row[0] * theta);
        let len = count - n - 1;
        for k in 0..len {
            row[k] = row[k + 1] * theta - row[k] * shift;
        }
        row.truncate(len);
    }
    out
}

/// Complex sequence element; `im` is absent for real arguments.
struct MpComplex {
    re: BigFloat,
    im: Option<BigFloat>,
}

fn outer_terms_mp(params: &LerchParams, count: usize, bits: usize) -> Vec<Complex64> {
    let LerchParams { s, a, z, lambda } = *params;
    let mut cc = Consts::new().expect("astro-float constants");
    let mp = |x: f64| BigFloat::from_f64(x, bits);

    let one = mp(1.0);
    let theta = one.div(&one.sub(&mp(lambda), bits, RM), bits, RM);
    let shift = theta.mul(&mp(lambda), bits, RM);
    let neg_s = mp(-s);
    let big_a = mp(a);
    let real = z.im == 0.0;
    let (zr, zi) = (mp(z.re), mp(z.im));

    let mut row = Vec::with_capacity(count);
    let (mut pr, mut pi) = (mp(1.0), mp(0.0));
    for k in 0..count {
        let base = big_a.add(&mp(k as f64), bits, RM);
        let c = base.ln(bits, RM, &mut cc).mul(&neg_s, bits, RM).exp(bits, RM, &mut cc);
        row.push(MpComplex {
            re: pr.mul(&c, bits, RM),
            im: (!real).then(|| pi.mul(&c, bits, RM)),
        });
        if real {
            pr = pr.mul(&zr, bits, RM);
        } else {
            let nr = pr.mul(&zr, bits, RM).sub(&pi.mul(&zi, bits, RM), bits, RM);
            let ni = pr.mul(&zi, bits, RM).add(&pi.mul(&zr, bits, RM), bits, RM);
            pr = nr;
            pi = ni;
        }
    }

    let step = |hi: &BigFloat, lo: &BigFloat| {
        theta
            .mul(hi, bits, RM)
            .sub(&shift.mul(lo, bits, RM), bits, RM)
    };
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let head = &row[0];
        let re = to_f64(&theta.mul(&head.re, bits, RM));
        let im = head
            .im
            .as_ref()
            .map_or(0.0, |im| to_f64(&theta.mul(im, bits, RM)));
        out.push(Complex64::new(re, im));
        let len = count - n - 1;
        for k in 0..len {
            let re = step(&row[k + 1].re, &row[k].re);
            let im = match (&row[k + 1].im, &row[k].im) {
                (Some(hi), Some(lo)) => Some(step(hi, lo)),
                _ => None,
            };
            row[k] = MpComplex { re, im };
        }
        row.truncate(len);
    }
    out
}

/// Nearest `f64` to a finite binary float.
fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, exponent, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() || words.is_empty() {
        return 0.0;
    }
    let word_bits = u64::BITS;
    let hi = *words.last().unwrap() as u128;
    let lo = if words.len() > 1 {
        words[words.len() - 2] as u128
    } else {
        0
    };
    let top = (hi << word_bits) | lo;
    // top / 2^128 lies in [1/2, 1)
    let frac = top as f64 * 2f64.powi(-128);
    let value = scale_by_power_of_two(frac, exponent);
    if sign == Sign::Neg {
        -value
    } else {
        value
    }
}

fn scale_by_power_of_two(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::lerch_series;

    #[test]
    fn conversion_round_trips() {
        for x in [1.0, -2.5, 0.1, 1e-300, 3.0e250, -7.25e-17, 0.0] {
            let big = BigFloat::from_f64(x, 256);
            assert_eq!(to_f64(&big), x);
        }
        let third = BigFloat::from_f64(1.0, 512).div(&BigFloat::from_f64(3.0, 512), 512, RM);
        assert_eq!(to_f64(&third), 1.0 / 3.0);
    }

    #[test]
    fn zero_lambda_reproduces_plain_terms() {
        let params = LerchParams::new(2.0, 1.0, 0.5);
        let terms = lambda_outer_terms(params, 40).unwrap();
        let mut zk = 1.0;
        for (n, t) in terms.iter().enumerate() {
            let plain = zk * (-2.0 * (n as f64 + 1.0).ln()).exp();
            assert_eq!(t.re, plain, "term {n}");
            zk *= 0.5;
        }
        let tol = ToleranceConfig::default().with_abs_tol(1e-15);
        let lam = lerch_lambda_series(params, &tol).unwrap();
        let plain = lerch_series(params, &tol).unwrap();
        assert!((lam.re() - plain.re()).abs() < 1e-15);
    }

    #[test]
    fn positive_lambda_agrees_with_plain_series() {
        let tol = ToleranceConfig::default().with_abs_tol(1e-12);
        let params = LerchParams::new(2.0, 1.0, 0.5);
        let plain = lerch_series(params, &tol).unwrap();
        let lam = lerch_lambda_series(params.with_lambda(0.25), &tol).unwrap();
        assert!((lam.re() - plain.re()).abs() < 1e-10);
        assert!(lam.abs_error_estimate <= 2e-12);
    }

    #[test]
    fn negative_lambda_stays_in_double_precision() {
        let params = LerchParams::new(0.5, 1.5, 0.9).with_lambda(-1.0);
        let plan = Plan::new(&params, 1e-12).unwrap();
        assert!(plan.bits(10, 1e-12).is_none());
        let tol = ToleranceConfig::default().with_abs_tol(1e-12);
        let lam = lerch_lambda_series(params, &tol).unwrap();
        let plain = lerch_series(params, &tol).unwrap();
        assert!((lam.re() - plain.re()).abs() < 1e-10);
    }

    #[test]
    fn complex_argument() {
        let params = LerchParams::new(1.5, 2.0, Complex64::new(0.3, 0.4)).with_lambda(0.2);
        let tol = ToleranceConfig::default().with_abs_tol(1e-12);
        let lam = lerch_lambda_series(params, &tol).unwrap();
        let plain = lerch_series(params, &tol).unwrap();
        assert!((lam.value - plain.value).norm() < 1e-10);
    }

    #[test]
    fn lambda_at_or_above_half_is_rejected() {
        let tol = ToleranceConfig::default();
        let err = lerch_lambda_series(LerchParams::new(2.0, 1.0, 0.5).with_lambda(0.6), &tol).unwrap_err();
        assert!(err.is_domain());
        let err = lerch_lambda_series(LerchParams::new(2.0, 1.0, 0.5).with_lambda(0.5), &tol).unwrap_err();
        assert!(err.is_domain());
    }

    #[test]
    fn divergent_negative_arguments_are_rejected() {
        // |z - λ| = 1.3 exceeds 1 - λ = 0.6: the outer terms grow.
        let tol = ToleranceConfig::default();
        let err = lerch_lambda_series(LerchParams::new(2.0, 1.0, -0.9).with_lambda(0.4), &tol).unwrap_err();
        assert!(err.is_domain());
    }

    #[test]
    fn origin_keeps_only_the_leading_term() {
        let tol = ToleranceConfig::default();
        let r = lerch_lambda_series(LerchParams::new(2.0, 1.5, 0.0), &tol).unwrap();
        assert!((r.re() - 1.5f64.powf(-2.0)).abs() < 1e-15);
    }
}
