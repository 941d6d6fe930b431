//! Parameter bundles, results and tolerance policy shared by every route.
//!
//! Each evaluation route has its own hypothesis on the parameters. The series
//! routes accept any positive orders and shifts with `|z| < 1`; the integral
//! routes additionally need both shifts above one, and the quadrature-based
//! routes need a real argument so that their integrands stay real.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;

/// Parameters of Φ_{p,q}(a, b; z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiParams {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    #[serde(with = "complex_serde")]
    pub z: Complex64,
}

impl PhiParams {
    pub fn new(p: f64, q: f64, a: f64, b: f64, z: impl Into<Complex64>) -> Self {
        Self {
            p,
            q,
            a,
            b,
            z: z.into(),
        }
    }

    /// `(1+a)^p (1+b)^q`, the factor that makes Φ start with `z`.
    pub fn normalization(&self) -> f64 {
        ((self.p * self.a.ln_1p()) + (self.q * self.b.ln_1p())).exp()
    }

    /// The argument as a real number, when it has no imaginary part.
    pub fn real_z(&self) -> Option<f64> {
        (self.z.im == 0.0).then_some(self.z.re)
    }

    pub fn with_z(self, z: impl Into<Complex64>) -> Self {
        Self { z: z.into(), ..self }
    }
}

/// Parameters of the Lerch transcendent Σ_{n≥0} z^n / (n+a)^s.
///
/// `lambda` is only read by the λ-accelerated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerchParams {
    pub s: f64,
    pub a: f64,
    #[serde(with = "complex_serde")]
    pub z: Complex64,
    pub lambda: f64,
}

impl LerchParams {
    pub fn new(s: f64, a: f64, z: impl Into<Complex64>) -> Self {
        Self {
            s,
            a,
            z: z.into(),
            lambda: 0.0,
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn validate(&self) -> Result<Self, DomainError> {
        positive("s", self.s)?;
        positive("a", self.a)?;
        inside_unit_disk(self.z)?;
        if !(self.lambda.is_finite() && self.lambda < 0.5) {
            return Err(DomainError::new("lambda", "lambda<1/2 required"));
        }
        Ok(*self)
    }
}

/// Evaluation routes for Φ and the Lerch transcendent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Series,
    SingleIntegralQuad,
    #[serde(rename = "single-integral")]
    SingleIntegralSegments,
    DoubleIntegral,
    DoubleIntegralKnown,
    Hypergeometric,
    LerchIntegral,
    LambdaSeries,
    LerchKernel,
}

impl Route {
    pub const PHI_ROUTES: [Route; 6] = [
        Route::Series,
        Route::SingleIntegralSegments,
        Route::SingleIntegralQuad,
        Route::DoubleIntegral,
        Route::DoubleIntegralKnown,
        Route::Hypergeometric,
    ];

    pub const LERCH_ROUTES: [Route; 4] = [
        Route::Series,
        Route::LambdaSeries,
        Route::LerchIntegral,
        Route::LerchKernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::SingleIntegralQuad => "single-integral-quad",
            Route::SingleIntegralSegments => "single-integral",
            Route::DoubleIntegral => "double-integral",
            Route::DoubleIntegralKnown => "double-integral-known",
            Route::Hypergeometric => "hypergeometric",
            Route::LerchIntegral => "lerch-integral",
            Route::LambdaSeries => "lambda-series",
            Route::LerchKernel => "lerch-kernel",
        }
    }

    /// Routes built on the single- or double-integral representations.
    pub fn needs_large_shifts(self) -> bool {
        matches!(
            self,
            Route::SingleIntegralQuad
                | Route::SingleIntegralSegments
                | Route::DoubleIntegral
                | Route::DoubleIntegralKnown
        )
    }

    /// Routes whose integrands are only real for real `z`.
    pub fn needs_real_z(self) -> bool {
        matches!(
            self,
            Route::SingleIntegralQuad | Route::DoubleIntegral | Route::DoubleIntegralKnown
        )
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Route {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = Route::PHI_ROUTES
            .iter()
            .chain(Route::LERCH_ROUTES.iter())
            .copied();
        for route in all {
            if route.name() == s {
                return Ok(route);
            }
        }
        match s {
            "single-integral-segments" | "segments" => Ok(Route::SingleIntegralSegments),
            _ => Err(DomainError::new("route", format!("unknown route '{s}'"))),
        }
    }
}

/// A computed value with its error bound and the work it took.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    #[serde(with = "complex_serde")]
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub route: Route,
    /// Series terms, segments or integrand evaluations, depending on the route.
    pub terms_or_evals: usize,
}

impl EvalResult {
    pub(crate) fn new(value: Complex64, abs_error_estimate: f64, route: Route, work: usize) -> Self {
        Self {
            value,
            abs_error_estimate: abs_error_estimate.max(0.0),
            route,
            terms_or_evals: work.max(1),
        }
    }

    pub(crate) fn exact_zero(route: Route) -> Self {
        Self::new(Complex64::new(0.0, 0.0), 0.0, route, 1)
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Accuracy targets and work limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub target_abs_tol: f64,
    pub max_terms: usize,
    pub max_function_evals: usize,
    /// Step of the forward differences used by the property checks.
    pub fd_step: f64,
    /// Let the integral routes run with shifts in (0, 1]. Outside the
    /// proven hypothesis; meant for exploration only.
    pub allow_small_shifts: bool,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-12,
            max_terms: 200_000,
            max_function_evals: 5_000_000,
            fd_step: 1e-2,
            allow_small_shifts: false,
        }
    }
}

impl ToleranceConfig {
    pub fn with_abs_tol(self, target_abs_tol: f64) -> Self {
        Self {
            target_abs_tol,
            ..self
        }
    }

    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self { max_terms, ..self }
    }

    pub fn validate(&self) -> Result<Self, DomainError> {
        if !(self.target_abs_tol > 0.0 && self.target_abs_tol.is_finite()) {
            return Err(DomainError::new("tol", "target_abs_tol>0 required"));
        }
        if self.max_terms < 16 {
            return Err(DomainError::new("max_terms", "max_terms>=16 required"));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(DomainError::new("fd_step", "fd_step>0 required"));
        }
        Ok(*self)
    }
}

/// Which shift hypothesis the integral routes check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hypothesis {
    /// a, b > 1 for the integral routes.
    #[default]
    Strict,
    /// a, b > 0 everywhere.
    RelaxedShifts,
}

/// Checks `params` against the hypothesis of `route`.
///
/// Returns the parameters unchanged when they are admissible.
pub fn validate(params: PhiParams, route: Route) -> Result<PhiParams, DomainError> {
    validate_with(params, route, Hypothesis::Strict)
}

pub fn validate_with(
    params: PhiParams,
    route: Route,
    hypothesis: Hypothesis,
) -> Result<PhiParams, DomainError> {
    positive("p", params.p)?;
    positive("q", params.q)?;
    positive("a", params.a)?;
    positive("b", params.b)?;
    inside_unit_disk(params.z)?;

    if route.needs_large_shifts() && hypothesis == Hypothesis::Strict {
        if params.a <= 1.0 {
            return Err(DomainError::new("a", "a>1 required"));
        }
        if params.b <= 1.0 {
            return Err(DomainError::new("b", "b>1 required"));
        }
    }
    if route.needs_real_z() && (params.z.im != 0.0 || params.z.re < 0.0) {
        return Err(DomainError::new("z", "real z in [0,1) required"));
    }
    if route == Route::Hypergeometric {
        integer_order("p", params.p)?;
        integer_order("q", params.q)?;
    }
    Ok(params)
}

pub(crate) fn validate_for(
    params: PhiParams,
    route: Route,
    tol: &ToleranceConfig,
) -> Result<PhiParams, DomainError> {
    tol.validate()?;
    let hypothesis = if tol.allow_small_shifts {
        Hypothesis::RelaxedShifts
    } else {
        Hypothesis::Strict
    };
    validate_with(params, route, hypothesis)
}

fn positive(field: &'static str, value: f64) -> Result<(), DomainError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DomainError::new(field, format!("{field}>0 required")))
    }
}

fn inside_unit_disk(z: Complex64) -> Result<(), DomainError> {
    if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
        Ok(())
    } else {
        Err(DomainError::new("z", "|z|<1 required"))
    }
}

fn integer_order(field: &'static str, value: f64) -> Result<(), DomainError> {
    if value.fract() == 0.0 && (1.0..=64.0).contains(&value) {
        Ok(())
    } else {
        Err(DomainError::new(
            field,
            format!("{field} must be a positive integer"),
        ))
    }
}

/// Complex numbers serialize as `[re, im]`.
pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
