use num_complex::Complex64;

use super::{SeriesTail, Summed};
use crate::error::{DomainError, Error, Result};
use crate::params::{validate_for, EvalResult, PhiParams, Route, ToleranceConfig};

/// Sums the generalized hypergeometric series `_pF_q(num; den; z)`.
///
/// Terms are built by the Pochhammer recurrence
/// `t_{k+1} = t_k · Π(a_i + k) / Π(b_j + k) · z / (k + 1)`.
/// The tail is bounded geometrically with ratio `max(|t_{k+1}/t_k|, |z|)`,
/// valid once the term ratios are monotone, which holds for `p = q + 1`
/// with positive parameters once `k` exceeds every parameter.
pub fn hypergeometric_pfq(
    num: &[f64],
    den: &[f64],
    z: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<(Complex64, SeriesTail, usize)> {
    let s = pfq_sum(num, den, z, tol, max_terms, Route::Hypergeometric)?;
    Ok((s.value, s.tail, s.terms))
}

fn pfq_sum(
    num: &[f64],
    den: &[f64],
    z: Complex64,
    tol: f64,
    max_terms: usize,
    route: Route,
) -> Result<Summed> {
    if den.iter().any(|&b| b <= 0.0 && b.fract() == 0.0) {
        return Err(DomainError::new("den", "denominator parameters must not be non-positive integers").into());
    }
    if num.len() > den.len() + 1 {
        return Err(DomainError::new("num", "series with p > q + 1 diverge").into());
    }
    if num.len() == den.len() + 1 && !(z.norm() < 1.0) {
        return Err(DomainError::new("z", "|z|<1 required").into());
    }
    let zn = z.norm();
    let largest_param = num
        .iter()
        .chain(den)
        .fold(0.0f64, |m, &x| m.max(x.abs()));

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let mut ratio = 1.0 / (kf + 1.0);
        for &a in num {
            ratio *= a + kf;
        }
        for &b in den {
            ratio /= b + kf;
        }
        let next = term * z * ratio;
        k += 1;
        if next == Complex64::new(0.0, 0.0) {
            return Ok(Summed {
                value: sum,
                tail: SeriesTail::new(0.0, zn.min(0.5)),
                terms: k,
                abs_sum,
            });
        }
        let r = (ratio.abs() * zn).max(if num.len() == den.len() + 1 { zn } else { 0.0 });
        sum += next;
        abs_sum += next.norm();
        term = next;
        if kf > largest_param && r < 1.0 {
            let tail = SeriesTail::new(term.norm(), r);
            if tail.bound <= tol {
                return Ok(Summed {
                    value: sum,
                    tail,
                    terms: k + 1,
                    abs_sum,
                });
            }
        }
        if k + 1 >= max_terms {
            return Err(Error::NonConvergence {
                route,
                terms: k + 1,
                tail_estimate: if r < 1.0 {
                    SeriesTail::new(term.norm(), r).bound
                } else {
                    f64::INFINITY
                },
            });
        }
    }
}

/// Φ_{p,q}(a,b;z) for integer orders as `z · _{p+q+1}F_{p+q}`, with
/// numerator parameters `1, (1+a)×p, (1+b)×q` and denominator parameters
/// `(2+a)×p, (2+b)×q`.
pub fn phi_via_hypergeometric(params: PhiParams, tol: &ToleranceConfig) -> Result<EvalResult> {
    let params = validate_for(params, Route::Hypergeometric, tol)?;
    if params.z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact_zero(Route::Hypergeometric));
    }
    let (num, den) = phi_parameters(&params);
    let zn = params.z.norm();
    let inner_tol = tol.target_abs_tol / zn;
    let s = pfq_sum(&num, &den, params.z, inner_tol, tol.max_terms, Route::Hypergeometric)?;
    let value = params.z * s.value;
    Ok(EvalResult::new(
        value,
        zn * s.error_estimate(),
        Route::Hypergeometric,
        s.terms,
    ))
}

fn phi_parameters(params: &PhiParams) -> (Vec<f64>, Vec<f64>) {
    let p = params.p as usize;
    let q = params.q as usize;
    let mut num = Vec::with_capacity(1 + p + q);
    num.push(1.0);
    num.extend(std::iter::repeat_n(1.0 + params.a, p));
    num.extend(std::iter::repeat_n(1.0 + params.b, q));
    let mut den = Vec::with_capacity(p + q);
    den.extend(std::iter::repeat_n(2.0 + params.a, p));
    den.extend(std::iter::repeat_n(2.0 + params.b, q));
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::phi_series;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default().with_abs_tol(1e-15)
    }

    #[test]
    fn parameter_lists_follow_the_orders() {
        let (num, den) = phi_parameters(&PhiParams::new(2.0, 1.0, 1.5, 1.2, 0.3));
        assert_eq!(num, vec![1.0, 2.5, 2.5, 2.2]);
        assert_eq!(den, vec![3.5, 3.5, 3.2]);
    }

    #[test]
    fn gauss_function_closed_form() {
        // 2F1(1, 1; 2; z) = −log(1 − z)/z
        let (v, _, _) = hypergeometric_pfq(&[1.0, 1.0], &[2.0], 0.5.into(), 1e-15, 10_000).unwrap();
        assert!((v.re - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
        // 0F0(;;z) = e^z
        let (v, _, _) = hypergeometric_pfq(&[], &[], 1.5.into(), 1e-15, 10_000).unwrap();
        assert!((v.re - 1.5f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn unit_orders_match_the_series() {
        let params = PhiParams::new(1.0, 1.0, 1.0, 1.0, 0.5);
        let h = phi_via_hypergeometric(params, &tol()).unwrap();
        assert!((h.re() - 0.657_924_211_7).abs() < 1e-10);
        let s = phi_series(params, &tol()).unwrap();
        assert!((h.re() - s.re()).abs() < 1e-14);
    }

    #[test]
    fn origin_and_mixed_orders() {
        let r = phi_via_hypergeometric(PhiParams::new(1.0, 1.0, 1.3, 1.7, 0.0), &tol()).unwrap();
        assert_eq!(r.re(), 0.0);
        let params = PhiParams::new(2.0, 1.0, 1.5, 1.2, 0.3);
        let h = phi_via_hypergeometric(params, &tol()).unwrap();
        let s = phi_series(params, &tol()).unwrap();
        assert!((h.re() - s.re()).abs() < 1e-11);
    }

    #[test]
    fn rejects_fractional_orders() {
        let err = phi_via_hypergeometric(PhiParams::new(0.5, 1.0, 1.5, 1.2, 0.3), &tol()).unwrap_err();
        assert!(err.is_domain());
    }

    #[test]
    fn divergent_shapes_are_rejected() {
        assert!(hypergeometric_pfq(&[1.0, 1.0, 1.0], &[2.0], 0.5.into(), 1e-12, 100).is_err());
        assert!(hypergeometric_pfq(&[1.0], &[-2.0], 0.5.into(), 1e-12, 100).is_err());
    }
}
