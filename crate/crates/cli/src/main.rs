//! `genpolylog`: evaluate, compare and verify the generalized polylogarithm
//! from the command line.
//!
//! Exit codes: 0 success, 2 domain or usage error, 3 numerical
//! non-convergence, 4 route disagreement, 5 property verdict failure.

mod presets;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genpolylog::analysis::{self, PropertyReport, PsiParams};
use genpolylog::{evaluate, evaluate_lerch, validate, Complex64, EvalResult, LerchParams, PhiParams, Route, ToleranceConfig};
use serde_json::{json, Value};

use presets::Preset;
use table::{render_csv, render_json, Cell, Table};

#[derive(Parser, Debug)]
#[command(name = "genpolylog", version, about = "Generalized polylogarithm Φ_{p,q}(a,b;z) through independent routes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Φ, or the Lerch transcendent when --s is given, through one route.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "series")]
        route: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate through several routes and check them pairwise.
    Compare {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated routes; defaults to every route whose hypotheses hold.
        #[arg(long, value_delimiter = ',')]
        route: Vec<String>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check an analytic property over a grid and report every gap.
    Verify {
        #[arg(value_enum)]
        property: PropertyName,
        #[command(flatten)]
        params: ParamArgs,
        /// Replace the default grid, e.g. `p:0.1:5:0.1` or `x:0.05:0.95:0.05`.
        #[arg(long)]
        sweep: Option<Sweep>,
        /// Finite-difference step for ψ properties.
        #[arg(long)]
        h: Option<f64>,
        /// Highest difference order for `cm`.
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        /// A gap passes when it is at least minus this value.
        #[arg(long, allow_hyphen_values = true)]
        gap_tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tabulate a quantity over one or two parameter sweeps.
    Grid {
        #[command(flatten)]
        params: ParamArgs,
        /// `VAR:LO:HI:STEP`, given once or twice; the first is the outer loop.
        #[arg(long, required = true)]
        sweep: Vec<Sweep>,
        #[arg(long, value_enum, default_value = "phi")]
        quantity: Quantity,
        #[arg(long, default_value = "series")]
        route: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Real (`0.5`) or complex (`0.3+0.4i`).
    #[arg(long, allow_hyphen_values = true)]
    z: Option<ComplexArg>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

#[derive(Args, Debug, Clone, Default)]
struct TolArgs {
    /// Absolute error target.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
    /// Accept 0 < a, b ≤ 1 on the integral routes.
    #[arg(long)]
    allow_small_shifts: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyName {
    Cm,
    LogConvexity,
    TuranPsi,
    TuranPhiQ,
    TuranPhiP,
    Bounds,
}

impl PropertyName {
    fn name(self) -> &'static str {
        match self {
            Self::Cm => "cm",
            Self::LogConvexity => "log-convexity",
            Self::TuranPsi => "turan-psi",
            Self::TuranPhiQ => "turan-phi-q",
            Self::TuranPhiP => "turan-phi-p",
            Self::Bounds => "bounds",
        }
    }

    fn on_psi(self) -> bool {
        matches!(self, Self::Cm | Self::LogConvexity | Self::TuranPsi)
    }

    fn default_gap_tol(self) -> f64 {
        match self {
            Self::Cm | Self::LogConvexity => 1e-9,
            Self::TuranPsi | Self::TuranPhiQ | Self::TuranPhiP => 1e-12,
            Self::Bounds => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Phi,
    Psi,
    Bounds,
    Lerch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ComplexArg(Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot read '{s}' as a number like 0.5 or 0.3-0.4i");
        let Some(body) = s.strip_suffix('i') else {
            return s.parse().map(|re| ComplexArg(Complex64::new(re, 0.0))).map_err(|_| bad());
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
        Ok(ComplexArg(Complex64::new(re, im)))
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Sweep {
    var: Var,
    lo: f64,
    hi: f64,
    step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    P,
    Q,
    A,
    B,
    X,
    S,
    Lambda,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::A => "a",
            Var::B => "b",
            Var::X => "x",
            Var::S => "s",
            Var::Lambda => "lambda",
        }
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, lo, hi, step] = parts[..] else {
            return Err(format!("sweep '{s}' must look like VAR:LO:HI:STEP"));
        };
        let var = match var {
            "p" => Var::P,
            "q" => Var::Q,
            "a" => Var::A,
            "b" => Var::B,
            "x" | "z" => Var::X,
            "s" => Var::S,
            "lambda" => Var::Lambda,
            other => return Err(format!("unknown sweep variable '{other}'")),
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("'{t}' in sweep '{s}' is not a number"));
        Ok(Sweep {
            var,
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.var.name(), self.lo, self.hi, self.step)
    }
}

impl Sweep {
    fn points(&self) -> Result<Vec<f64>, Failure> {
        let finite = self.lo.is_finite() && self.hi.is_finite() && self.step.is_finite();
        if !finite || self.step <= 0.0 || self.lo > self.hi {
            return Err(Failure::Usage(format!("sweep {self} is empty or malformed")));
        }
        Ok(analysis::grid(self.lo, self.hi, self.step))
    }
}

enum Failure {
    Usage(String),
    Numeric(genpolylog::Error),
    Disagreement,
    Verdict,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(e) if e.is_domain() => 2,
            Failure::Numeric(_) => 3,
            Failure::Disagreement => 4,
            Failure::Verdict => 5,
        }
    }
}

impl From<genpolylog::Error> for Failure {
    fn from(e: genpolylog::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<genpolylog::DomainError> for Failure {
    fn from(e: genpolylog::DomainError) -> Self {
        Failure::Numeric(e.into())
    }
}

/// Point-wise values after the preset and explicit flags are merged.
#[derive(Debug, Clone, Copy, Default)]
struct Point {
    p: Option<f64>,
    q: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    z: Option<Complex64>,
    s: Option<f64>,
    lambda: Option<f64>,
}

fn need(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

impl Point {
    fn from_args(args: &ParamArgs) -> Self {
        let preset = args.preset.map(Preset::values).unwrap_or_default();
        Point {
            p: args.p.or(preset.p),
            q: args.q.or(preset.q),
            a: args.a.or(preset.a),
            b: args.b.or(preset.b),
            z: args.z.map(|c| c.0).or(preset.x.map(|x| Complex64::new(x, 0.0))),
            s: args.s,
            lambda: args.lambda,
        }
    }

    fn set(&mut self, var: Var, v: f64) {
        match var {
            Var::P => self.p = Some(v),
            Var::Q => self.q = Some(v),
            Var::A => self.a = Some(v),
            Var::B => self.b = Some(v),
            Var::X => self.z = Some(Complex64::new(v, 0.0)),
            Var::S => self.s = Some(v),
            Var::Lambda => self.lambda = Some(v),
        }
    }

    fn z(&self) -> Result<Complex64, Failure> {
        self.z.ok_or_else(|| Failure::Usage("missing --z".into()))
    }

    fn x(&self) -> Result<f64, Failure> {
        let z = self.z()?;
        if z.im != 0.0 {
            return Err(Failure::Usage("this command needs a real --z".into()));
        }
        Ok(z.re)
    }

    fn phi(&self) -> Result<PhiParams, Failure> {
        Ok(PhiParams::new(
            need(self.p, "p")?,
            need(self.q, "q")?,
            need(self.a, "a")?,
            need(self.b, "b")?,
            self.z()?,
        ))
    }

    fn phi_without_z(&self) -> Result<PhiParams, Failure> {
        Ok(PhiParams::new(
            need(self.p, "p")?,
            need(self.q, "q")?,
            need(self.a, "a")?,
            need(self.b, "b")?,
            0.0,
        ))
    }

    fn lerch(&self) -> Result<LerchParams, Failure> {
        Ok(LerchParams::new(need(self.s, "s")?, need(self.a, "a")?, self.z()?).with_lambda(self.lambda.unwrap_or(0.0)))
    }

    fn psi_ctx(&self) -> Result<PsiParams, Failure> {
        Ok(PsiParams::new(need(self.q, "q")?, need(self.a, "a")?, need(self.b, "b")?, self.x()?))
    }

    fn manifest(&self) -> Value {
        let mut m = serde_json::Map::new();
        for (k, v) in [("p", self.p), ("q", self.q), ("a", self.a), ("b", self.b), ("s", self.s), ("lambda", self.lambda)] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        if let Some(z) = self.z {
            m.insert("z".into(), json!([z.re, z.im]));
        }
        Value::Object(m)
    }
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig, Failure> {
        let mut tol = ToleranceConfig::default();
        if let Some(t) = self.tol {
            tol = tol.with_abs_tol(t);
        }
        if let Some(n) = self.max_terms {
            tol = tol.with_max_terms(n);
        }
        tol.allow_small_shifts = self.allow_small_shifts;
        Ok(tol.validate()?)
    }
}

fn parse_route(name: &str) -> Result<Route, Failure> {
    Ok(name.parse::<Route>()?)
}

fn value_row(r: &EvalResult) -> Vec<Cell> {
    vec![
        r.route.name().into(),
        r.value.re.into(),
        r.value.im.into(),
        r.abs_error_estimate.into(),
        r.terms_or_evals.into(),
    ]
}

const VALUE_HEADER: [&str; 5] = ["route", "re", "im", "abs_error_estimate", "terms_or_evals"];

struct Outcome {
    manifest: Value,
    tables: Vec<Table>,
    status: Result<(), Failure>,
}

fn eval_one(point: &Point, route: Route, tol: &ToleranceConfig) -> Result<EvalResult, Failure> {
    if point.s.is_some() {
        Ok(evaluate_lerch(point.lerch()?, route, tol)?)
    } else {
        Ok(evaluate(point.phi()?, route, tol)?)
    }
}

fn cmd_eval(params: &ParamArgs, route: &str, tol: &TolArgs) -> Result<Outcome, Failure> {
    let point = Point::from_args(params);
    let config = tol.config()?;
    let route = parse_route(route)?;
    let result = eval_one(&point, route, &config)?;
    let mut t = Table::new("values", &VALUE_HEADER);
    t.push(value_row(&result));
    Ok(Outcome {
        manifest: json!({
            "command": "eval",
            "preset": params.preset,
            "params": point.manifest(),
            "routes": [route.name()],
            "tol": config,
        }),
        tables: vec![t],
        status: Ok(()),
    })
}

fn default_routes(point: &Point) -> Result<Vec<Route>, Failure> {
    if let Some(s) = point.s {
        let z = point.z()?;
        let a = need(point.a, "a")?;
        let mut routes = vec![Route::Series, Route::LambdaSeries];
        if z.im == 0.0 && z.re >= 0.0 && s > 0.0 {
            routes.push(Route::LerchKernel);
            if a > 1.0 {
                routes.push(Route::LerchIntegral);
            }
        }
        return Ok(routes);
    }
    let params = point.phi()?;
    validate(params, Route::Series)?;
    Ok(Route::PHI_ROUTES
        .into_iter()
        .filter(|r| validate(params, *r).is_ok())
        .collect())
}

fn cmd_compare(params: &ParamArgs, routes: &[String], tol: &TolArgs) -> Result<Outcome, Failure> {
    let point = Point::from_args(params);
    let config = tol.config()?;
    let routes = if routes.is_empty() {
        default_routes(&point)?
    } else {
        routes.iter().map(|r| parse_route(r)).collect::<Result<Vec<_>, _>>()?
    };
    if routes.len() < 2 {
        return Err(Failure::Usage("compare needs at least two routes".into()));
    }
    let results = routes
        .iter()
        .map(|r| eval_one(&point, *r, &config))
        .collect::<Result<Vec<_>, _>>()?;

    let mut values = Table::new("values", &VALUE_HEADER);
    for r in &results {
        values.push(value_row(r));
    }
    let mut pairs = Table::new("pairs", &["route_a", "route_b", "abs_diff", "allowed", "pass"]);
    let mut all_pass = true;
    for (i, x) in results.iter().enumerate() {
        for y in &results[i + 1..] {
            let diff = (x.value - y.value).norm();
            let allowed =
                x.abs_error_estimate + y.abs_error_estimate + 4.0 * f64::EPSILON * (x.value.norm() + y.value.norm());
            let pass = diff <= allowed;
            all_pass &= pass;
            pairs.push(vec![
                x.route.name().into(),
                y.route.name().into(),
                diff.into(),
                allowed.into(),
                (if pass { "pass" } else { "fail" }).into(),
            ]);
        }
    }
    Ok(Outcome {
        manifest: json!({
            "command": "compare",
            "preset": params.preset,
            "params": point.manifest(),
            "routes": routes.iter().map(|r| r.name()).collect::<Vec<_>>(),
            "tol": config,
        }),
        tables: vec![values, pairs],
        status: if all_pass { Ok(()) } else { Err(Failure::Disagreement) },
    })
}

struct VerifyArgs<'a> {
    property: PropertyName,
    params: &'a ParamArgs,
    sweep: Option<&'a Sweep>,
    h: Option<f64>,
    max_order: usize,
    gap_tol: Option<f64>,
}

fn cmd_verify(v: VerifyArgs<'_>) -> Result<Outcome, Failure> {
    let point = Point::from_args(v.params);
    let property = v.property;
    let (var, default) = if property.on_psi() {
        (Var::P, Sweep { var: Var::P, lo: 0.1, hi: 5.0, step: 0.1 })
    } else {
        (Var::X, Sweep { var: Var::X, lo: 0.05, hi: 0.95, step: 0.05 })
    };
    let sweep = v.sweep.cloned().unwrap_or(default);
    if sweep.var != var {
        return Err(Failure::Usage(format!(
            "{} is checked over {}, not {}",
            property.name(),
            var.name(),
            sweep.var.name()
        )));
    }
    let grid = sweep.points()?;
    let gap_tol = v.gap_tol.unwrap_or(property.default_gap_tol());
    let h = v.h.unwrap_or(ToleranceConfig::default().fd_step);
    if !(h > 0.0 && h.is_finite()) {
        return Err(Failure::Usage("--h must be positive".into()));
    }
    if v.max_order > 6 {
        return Err(Failure::Usage("--max-order above 6 is not supported".into()));
    }

    let report: PropertyReport = match property {
        PropertyName::Cm => analysis::check_complete_monotonicity(&point.psi_ctx()?, &grid, v.max_order, h, gap_tol)?,
        PropertyName::LogConvexity => analysis::check_log_convexity(&point.psi_ctx()?, &grid, h, gap_tol)?,
        PropertyName::TuranPsi => analysis::check_turan_psi(&point.psi_ctx()?, &grid, gap_tol)?,
        PropertyName::TuranPhiQ => analysis::check_turan_phi_q(point.phi_without_z()?, &grid, gap_tol)?,
        PropertyName::TuranPhiP => analysis::check_turan_phi_p(point.phi_without_z()?, &grid, gap_tol)?,
        PropertyName::Bounds => analysis::bounds_check(point.phi_without_z()?, &grid, gap_tol)?,
    };

    let mut gaps = Table::new("gaps", &[var.name(), "component", "gap"]);
    for ((x, c), g) in report.grid.iter().zip(&report.component).zip(&report.gaps) {
        gaps.push(vec![(*x).into(), (*c as usize).into(), (*g).into()]);
    }
    let verdict = if report.passed() { "pass" } else { "fail" };
    let mut summary = Table::new("summary", &["property", "points", "min_gap", "tolerance", "verdict"]);
    summary.push(vec![
        property.name().into(),
        report.gaps.len().into(),
        report.min_gap.into(),
        report.tolerance.into(),
        verdict.into(),
    ]);
    eprintln!("{}: {verdict} (min gap {:e})", property.name(), report.min_gap);
    Ok(Outcome {
        manifest: json!({
            "command": "verify",
            "property": property.name(),
            "preset": v.params.preset,
            "params": point.manifest(),
            "sweep": sweep.to_string(),
            "h": h,
            "max_order": v.max_order,
            "gap_tolerance": gap_tol,
        }),
        tables: vec![gaps, summary],
        status: if report.passed() { Ok(()) } else { Err(Failure::Verdict) },
    })
}

fn cmd_grid(params: &ParamArgs, sweeps: &[Sweep], quantity: Quantity, route: &str, tol: &TolArgs) -> Result<Outcome, Failure> {
    if sweeps.is_empty() || sweeps.len() > 2 {
        return Err(Failure::Usage("grid takes one or two --sweep axes".into()));
    }
    if sweeps.len() == 2 && sweeps[0].var == sweeps[1].var {
        return Err(Failure::Usage("the two sweeps must vary different parameters".into()));
    }
    let base = Point::from_args(params);
    let config = tol.config()?;
    let route = parse_route(route)?;
    let outer = sweeps[0].points()?;
    let inner = match sweeps.get(1) {
        Some(s) => s.points()?,
        None => vec![f64::NAN],
    };

    let mut header: Vec<String> = sweeps.iter().map(|s| s.var.name().to_string()).collect();
    let columns: &[&str] = match quantity {
        Quantity::Phi | Quantity::Lerch => &["re", "im", "abs_error_estimate", "terms_or_evals"],
        Quantity::Psi => &["psi"],
        Quantity::Bounds => &["lower", "phi", "upper"],
    };
    header.extend(columns.iter().map(|c| c.to_string()));
    let mut table = Table::with_header("grid", header);

    for &u in &outer {
        for &w in &inner {
            let mut point = base;
            let mut axes = vec![Cell::Num(u)];
            point.set(sweeps[0].var, u);
            if let Some(s) = sweeps.get(1) {
                point.set(s.var, w);
                axes.push(Cell::Num(w));
            }
            let at = |e: Failure| match e {
                Failure::Numeric(err) => {
                    let code = if err.is_domain() { 2 } else { 3 };
                    let where_ = sweeps
                        .iter()
                        .zip([u, w])
                        .map(|(s, v)| format!("{}={v}", s.var.name()))
                        .collect::<Vec<_>>()
                        .join(", ");
                    if code == 2 {
                        Failure::Usage(format!("at {where_}: {err}"))
                    } else {
                        eprintln!("at {where_}:");
                        Failure::Numeric(err)
                    }
                }
                other => other,
            };
            let cells: Vec<Cell> = (|| -> Result<Vec<Cell>, Failure> {
                Ok(match quantity {
                    Quantity::Phi => {
                        let r = evaluate(point.phi()?, route, &config)?;
                        value_row(&r)[1..].to_vec()
                    }
                    Quantity::Lerch => {
                        let r = evaluate_lerch(point.lerch()?, route, &config)?;
                        value_row(&r)[1..].to_vec()
                    }
                    Quantity::Psi => {
                        let v = analysis::psi(need(point.p, "p")?, &point.psi_ctx()?)?;
                        vec![v.into()]
                    }
                    Quantity::Bounds => {
                        let params = point.phi()?;
                        let x = point.x()?;
                        let r = analysis::bounds_check(params, &[x], f64::INFINITY)?;
                        let phi = x + r.gaps[0];
                        vec![x.into(), phi.into(), (params.normalization() * x / (1.0 - x)).into()]
                    }
                })
            })()
            .map_err(at)?;
            axes.extend(cells);
            table.push(axes);
        }
    }
    Ok(Outcome {
        manifest: json!({
            "command": "grid",
            "preset": params.preset,
            "params": base.manifest(),
            "routes": [route.name()],
            "quantity": format!("{quantity:?}").to_lowercase(),
            "sweeps": sweeps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "tol": config,
        }),
        tables: vec![table],
        status: Ok(()),
    })
}

fn emit(outcome: &Outcome, out: &OutArgs) -> Result<(), Failure> {
    let mut manifest = outcome.manifest.clone();
    manifest["output_format"] = json!(match out.format {
        Format::Csv => "csv",
        Format::Json => "json",
    });
    manifest["output_path"] = json!(out.out.as_ref().map(|p| p.display().to_string()));
    let text = match out.format {
        Format::Csv => render_csv(&outcome.tables),
        Format::Json => render_json(manifest, &outcome.tables),
    };
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (outcome, out) = match &cli.command {
        Command::Eval { params, route, tol, out } => (cmd_eval(params, route, tol)?, out),
        Command::Compare { params, route, tol, out } => (cmd_compare(params, route, tol)?, out),
        Command::Verify {
            property,
            params,
            sweep,
            h,
            max_order,
            gap_tol,
            out,
        } => (
            cmd_verify(VerifyArgs {
                property: *property,
                params,
                sweep: sweep.as_ref(),
                h: *h,
                max_order: *max_order,
                gap_tol: *gap_tol,
            })?,
            out,
        ),
        Command::Grid {
            params,
            sweep,
            quantity,
            route,
            tol,
            out,
        } => (cmd_grid(params, sweep, *quantity, route, tol)?, out),
    };
    emit(&outcome, out)?;
    outcome.status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Numeric(e) => eprintln!("error: {e}"),
                Failure::Disagreement => eprintln!("error: routes disagree beyond their error estimates"),
                Failure::Verdict => eprintln!("error: property check failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        let c = |s: &str| s.parse::<ComplexArg>().unwrap().0;
        assert_eq!(c("0.5"), Complex64::new(0.5, 0.0));
        assert_eq!(c("0.3+0.4i"), Complex64::new(0.3, 0.4));
        assert_eq!(c("-0.3-0.4i"), Complex64::new(-0.3, -0.4));
        assert_eq!(c("0.4i"), Complex64::new(0.0, 0.4));
        assert_eq!(c("1e-3-2e-1i"), Complex64::new(1e-3, -0.2));
        assert!("abc".parse::<ComplexArg>().is_err());
    }

    #[test]
    fn sweeps() {
        let s: Sweep = "x:0.05:0.95:0.05".parse().unwrap();
        assert_eq!(s.var, Var::X);
        assert_eq!(s.points().ok().unwrap().len(), 19);
        let empty: Sweep = "p:2:1:0.1".parse().unwrap();
        assert!(empty.points().is_err());
        assert!("w:0:1:0.1".parse::<Sweep>().is_err());
        assert!("p:0:1".parse::<Sweep>().is_err());
    }

    #[test]
    fn property_names_are_kebab_case() {
        assert_eq!(PropertyName::TuranPhiQ.name(), "turan-phi-q");
        assert_eq!(PropertyName::Cm.name(), "cm");
    }
}
