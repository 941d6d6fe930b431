//! Generalized polylogarithm Φ_{p,q}(a, b; z) through independent routes.
//!
//! ```text
//! Φ_{p,q}(a, b; z) = Σ_{k≥1} (1+a)^p (1+b)^q / ((k+a)^p (k+b)^q) · z^k,   |z| < 1
//! ```
//!
//! * [`series`]: direct summation, the Lerch transcendent and its λ-series,
//!   the polylogarithm, and the hypergeometric identity for integer orders.
//! * [`dirichlet`]: the single-integral (Laplace) representation built on the
//!   staircase `j(y) = ⌊Δ^{-1}(e^y)⌋`.
//! * [`double`]: the double-integral representations.
//! * [`analysis`]: numerical checks of complete monotonicity, log-convexity,
//!   Turán inequalities and bounds.
//! * [`quadrature`]: the adaptive Gauss–Kronrod engine behind the integral
//!   routes.
//!
//! ```
//! use genpolylog::{phi_series, phi_single_integral_segments, PhiParams, ToleranceConfig};
//!
//! let params = PhiParams::new(1.0, 1.0, 1.4, 1.2, 0.5);
//! let tol = ToleranceConfig::default();
//! let a = phi_series(params, &tol).unwrap();
//! let b = phi_single_integral_segments(params, &tol).unwrap();
//! assert!((a.value - b.value).norm() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dirichlet;
pub mod double;
pub mod error;
pub mod gamma;
pub mod params;
pub mod quadrature;
pub mod series;

pub use dirichlet::{
    build_segments, delta, delta_inverse, j_of_y, lerch_single_integral, n_of_y_closed_form,
    phi_single_integral_quadrature, phi_single_integral_segments, DeltaMap, SegmentDecomposition,
};
pub use double::{lerch_kernel_integral, phi_double_integral, phi_double_integral_known};
pub use error::{DomainError, Error, Result};
pub use params::{
    validate, validate_with, EvalResult, Hypothesis, LerchParams, PhiParams, Route, ToleranceConfig,
};
pub use series::{
    lerch_lambda_series, lerch_series, phi_series, phi_via_hypergeometric, polylog_series, SeriesTail,
};

pub use num_complex::Complex64;

/// Evaluates Φ through `route`.
pub fn evaluate(params: PhiParams, route: Route, tol: &ToleranceConfig) -> Result<EvalResult> {
    match route {
        Route::Series => phi_series(params, tol),
        Route::SingleIntegralSegments => phi_single_integral_segments(params, tol),
        Route::SingleIntegralQuad => phi_single_integral_quadrature(params, tol),
        Route::DoubleIntegral => phi_double_integral(params, tol),
        Route::DoubleIntegralKnown => phi_double_integral_known(params, tol),
        Route::Hypergeometric => phi_via_hypergeometric(params, tol),
        Route::LerchIntegral | Route::LambdaSeries | Route::LerchKernel => Err(DomainError::new(
            "route",
            format!("{route} evaluates the Lerch transcendent, not Φ"),
        )
        .into()),
    }
}

/// Evaluates the Lerch transcendent through `route`.
pub fn evaluate_lerch(params: LerchParams, route: Route, tol: &ToleranceConfig) -> Result<EvalResult> {
    let real_z = || -> Result<f64> {
        if params.z.im == 0.0 {
            Ok(params.z.re)
        } else {
            Err(DomainError::new("z", "real z required").into())
        }
    };
    match route {
        Route::Series => lerch_series(params, tol),
        Route::LambdaSeries => lerch_lambda_series(params, tol),
        Route::LerchIntegral => lerch_single_integral(params.s, params.a, real_z()?, tol),
        Route::LerchKernel => lerch_kernel_integral(params.s, params.a, real_z()?, tol),
        _ => Err(DomainError::new("route", format!("{route} evaluates Φ, not the Lerch transcendent")).into()),
    }
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
