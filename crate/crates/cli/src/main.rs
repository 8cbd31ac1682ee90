//! Command-line front end: compute transforms, run the identity suites,
//! invert images and solve the two PDE examples.
//!
//! Exit codes: 0 success, 1 failed identity, 2 parse/usage error,
//! 3 domain error, 4 non-convergence.

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use mtrans::funcdsl::{self, Expr};
use mtrans::identities;
use mtrans::laplace_inv::{self, InversionConfig, InversionMethod};
use mtrans::mtransform::{self, FuncHandle, GrowthBound, MParams};
use mtrans::pde::{self, HeatProblem, SeriesSign, TransportProblem};
use mtrans::quad::QuadConfig;
use mtrans::rules;
use mtrans::{Error, ResidualReport};

const EXIT_FAILED_IDENTITY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_NONCONVERGENCE: u8 = 4;

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::SyntaxError { .. } => EXIT_PARSE,
        Error::BudgetExceeded { .. }
        | Error::NonFinite { .. }
        | Error::TailNotDecaying { .. }
        | Error::DivergentTail(_)
        | Error::TailBoundExceeded { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_DOMAIN,
    }
}

#[derive(Parser)]
#[command(name = "mtrans", version, about = "Generalized M-transform toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the M-transform (or a named special case) of an expression.
    Transform(TransformArgs),
    /// Run the identity suites and emit a JSON report array.
    Verify(VerifyArgs),
    /// Round-trip an expression through its M-image and the inversion formula.
    Invert(InvertArgs),
    /// Solve the first-order transport problem; emits CSV.
    SolveTransport(SolveTransportArgs),
    /// Solve the heat problem by sine series; emits CSV.
    SolveHeat(SolveHeatArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    M,
    Laplace,
    Natural,
    Sumudu,
    Stieltjes,
    Mellin,
    Borel,
}

#[derive(Args)]
struct ParamFlags {
    /// rho parameter, "re" or "re,im"
    #[arg(long)]
    rho: Option<String>,
    /// m parameter (positive integer)
    #[arg(long)]
    m: Option<u32>,
    /// u parameter, "re" or "re,im"
    #[arg(long)]
    u: Option<String>,
    /// v parameter, "re" or "re,im"
    #[arg(long)]
    v: Option<String>,
    /// omega parameter (positive real)
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args)]
struct GrowthFlags {
    /// growth certificate constant K
    #[arg(long, default_value_t = 100.0)]
    growth_k: f64,
    /// growth certificate constant beta
    #[arg(long, default_value_t = 10.0)]
    growth_beta: f64,
    /// growth certificate threshold T
    #[arg(long, default_value_t = 0.0)]
    growth_t: f64,
    /// growth certificate polynomial power
    #[arg(long, default_value_t = 0.0)]
    growth_power: f64,
}

impl GrowthFlags {
    fn bound(&self) -> GrowthBound {
        GrowthBound::new(self.growth_k, self.growth_beta, self.growth_t, self.growth_power)
    }
}

#[derive(Args)]
struct TransformArgs {
    /// expression for f(x)
    #[arg(short = 'f', long = "function")]
    function: Option<String>,
    #[arg(long, value_enum, default_value_t = Kind::M)]
    kind: Kind,
    #[command(flatten)]
    params: ParamFlags,
    /// Borel order nu
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Borel order mu
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[command(flatten)]
    growth: GrowthFlags,
    /// JSON file providing any of: function, kind, rho, m, u, v, omega
    #[arg(long)]
    config: Option<String>,
    /// write the JSON result here instead of stdout
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// run only suites whose name contains this substring
    #[arg(long)]
    only: Option<String>,
    /// override every suite tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// JSON file providing any of: only, tol
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct InvertArgs {
    /// expression for the original f(x); its M-image is computed by quadrature
    #[arg(short = 'f', long = "function")]
    function: String,
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    growth: GrowthFlags,
    /// comma-separated x points to recover f at
    #[arg(long, default_value = "0.5,1.0,2.0")]
    x: String,
    /// inversion contour
    #[arg(long, value_enum, default_value_t = MethodFlag::Bromwich)]
    method: MethodFlag,
    /// contour node count (even, >= 16)
    #[arg(long, default_value_t = 48)]
    n_nodes: usize,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodFlag {
    Talbot,
    Bromwich,
}

#[derive(Args)]
struct SolveTransportArgs {
    /// t-dependent factor of the source r(t,x)
    #[arg(long, default_value = "0")]
    r_t: String,
    /// x-dependent factor of the source r(t,x)
    #[arg(long, default_value = "1")]
    r_x: String,
    /// the constant omega*phi(omega), "re" or "re,im"
    #[arg(long, default_value = "0")]
    phi: String,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long, default_value = "0.5,1.0,1.5")]
    t_grid: String,
    #[arg(long, default_value = "0.5,1.0,1.5")]
    x_grid: String,
    /// append a max-difference summary line vs the characteristics oracle
    #[arg(long)]
    with_oracle: bool,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SolveHeatArgs {
    /// initial data f(x) on [0, pi] (must vanish at both ends)
    #[arg(short = 'f', long = "function", default_value = "0")]
    function: String,
    /// t-dependent factor of the source r(x,t)
    #[arg(long, default_value = "0")]
    r_t: String,
    /// x-dependent factor of the source r(x,t)
    #[arg(long, default_value = "1")]
    r_x: String,
    #[command(flatten)]
    params: ParamFlags,
    /// series length
    #[arg(long, default_value_t = pde::HEAT_K_MAX_DEFAULT)]
    k_max: usize,
    /// series sign convention
    #[arg(long, value_enum, default_value_t = SignFlag::Corrected)]
    sign: SignFlag,
    #[arg(long, default_value = "0.1,0.325,0.55,0.775,1.0")]
    t_grid: String,
    #[arg(long, default_value = "0.524,1.047,1.571,2.094,2.618")]
    x_grid: String,
    /// append a max-difference summary line vs the Crank-Nicolson oracle
    #[arg(long)]
    with_oracle: bool,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignFlag {
    Corrected,
    Verbatim,
}

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

struct Failure {
    code: u8,
    message: String,
}

type CmdResult<T> = std::result::Result<T, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        fail(exit_code_for(&e), e.to_string())
    }
}

fn parse_complex(s: &str, what: &str) -> CmdResult<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || fail(EXIT_PARSE, format!("{what}: expected \"re\" or \"re,im\", got {s:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn parse_grid(s: &str, what: &str) -> CmdResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| fail(EXIT_PARSE, format!("{what}: bad number {p:?}")))
        })
        .collect()
}

fn parse_expr(src: &str) -> CmdResult<Expr> {
    funcdsl::parse(src).map_err(|e| fail(EXIT_PARSE, format!("in {src:?}: {e}")))
}

fn load_config(path: &Option<String>) -> CmdResult<serde_json::Map<String, serde_json::Value>> {
    let Some(path) = path else {
        return Ok(serde_json::Map::new());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read config {path}: {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("config {path}: {e}")))?;
    v.as_object()
        .cloned()
        .ok_or_else(|| fail(EXIT_PARSE, format!("config {path}: expected a JSON object")))
}

/// Flag value, else config value (number or string), else default.
fn complex_setting(
    flag: &Option<String>,
    cfg: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    default: Complex64,
) -> CmdResult<Complex64> {
    if let Some(s) = flag {
        return parse_complex(s, key);
    }
    match cfg.get(key) {
        Some(serde_json::Value::Number(n)) => Ok(Complex64::new(n.as_f64().unwrap(), 0.0)),
        Some(serde_json::Value::String(s)) => parse_complex(s, key),
        Some(other) => Err(fail(EXIT_PARSE, format!("config {key}: bad value {other}"))),
        None => Ok(default),
    }
}

fn write_out(output: &Option<String>, text: &str) -> CmdResult<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| fail(EXIT_DOMAIN, format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| fail(EXIT_DOMAIN, format!("stdout: {e}")))
        }
    }
}

fn build_params(p: &ParamFlags, cfg: &serde_json::Map<String, serde_json::Value>) -> CmdResult<MParams> {
    let rho = complex_setting(&p.rho, cfg, "rho", Complex64::new(0.0, 0.0))?;
    let u = complex_setting(&p.u, cfg, "u", Complex64::new(1.0, 0.0))?;
    let v = complex_setting(&p.v, cfg, "v", Complex64::new(0.0, 0.0))?;
    let m = match (p.m, cfg.get("m")) {
        (Some(m), _) => m,
        (None, Some(val)) => val
            .as_u64()
            .map(|m| m as u32)
            .ok_or_else(|| fail(EXIT_PARSE, "config m: expected a positive integer"))?,
        (None, None) => 1,
    };
    let omega = match (p.omega, cfg.get("omega")) {
        (Some(w), _) => w,
        (None, Some(val)) => val
            .as_f64()
            .ok_or_else(|| fail(EXIT_PARSE, "config omega: expected a number"))?,
        (None, None) => 1.0,
    };
    Ok(MParams::new(rho, m, u, v, omega)?)
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

fn cmd_transform(a: &TransformArgs) -> CmdResult<()> {
    let cfgmap = load_config(&a.config)?;
    let src = match (&a.function, cfgmap.get("function")) {
        (Some(s), _) => s.clone(),
        (None, Some(serde_json::Value::String(s))) => s.clone(),
        _ => return Err(fail(EXIT_PARSE, "missing required --function (or config \"function\")")),
    };
    let expr = parse_expr(&src)?;
    let f = funcdsl::to_handle(&expr, a.growth.bound())?;
    let p = build_params(&a.params, &cfgmap)?;
    let require_u = || -> CmdResult<Complex64> {
        if a.params.u.is_none() && !cfgmap.contains_key("u") {
            return Err(fail(EXIT_PARSE, "this kind requires --u"));
        }
        Ok(p.u)
    };
    let qcfg = QuadConfig::default();
    let kind = match (&a.kind, cfgmap.get("kind")) {
        (Kind::M, Some(serde_json::Value::String(s))) => {
            Kind::from_str(s, true).map_err(|e| fail(EXIT_PARSE, format!("config kind: {e}")))?
        }
        (k, _) => *k,
    };
    let result = match kind {
        Kind::M => {
            require_u()?;
            mtransform::m_transform(&f, &p, &qcfg)?
        }
        Kind::Laplace => mtransform::laplace(&f, require_u()?, &qcfg)?,
        Kind::Natural => mtransform::natural(&f, require_u()?, p.omega, &qcfg)?,
        Kind::Sumudu => mtransform::sumudu(&f, p.omega, &qcfg)?,
        Kind::Stieltjes => mtransform::stieltjes(&f, p.rho, p.omega, &qcfg)?,
        Kind::Mellin => mtransform::mellin(&f, require_u()?, &qcfg)?,
        Kind::Borel => mtransform::borel_dzrbashjan(&f, require_u()?, a.nu, a.mu, &qcfg)?,
    };
    let json = serde_json::json!({
        "value_re": result.value.re,
        "value_im": result.value.im,
        "abs_err_est": result.abs_err_est,
        "n_evals": result.n_evals,
    });
    write_out(&a.output, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn corpus() -> CmdResult<(FuncHandle, FuncHandle, FuncHandle)> {
    let mild = GrowthBound::new(2.0, 1e6, 0.0, 0.0);
    let f1 = funcdsl::to_handle(&parse_expr("exp(-x)")?, mild)?;
    let f2 = funcdsl::to_handle(&parse_expr("x*exp(-x)")?, mild)?;
    let g = funcdsl::to_handle(&parse_expr("exp(-x^2)")?, mild)?;
    Ok((f1, f2, g))
}

fn retol(r: ResidualReport, tol: Option<f64>) -> ResidualReport {
    match tol {
        Some(t) => ResidualReport::new(r.identity_id, r.lhs, r.rhs, t, r.n_evals_total),
        None => r,
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult<()> {
    let cfgmap = load_config(&a.config)?;
    let only = match (&a.only, cfgmap.get("only")) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(serde_json::Value::String(s))) => Some(s.clone()),
        _ => None,
    };
    let tol = match (a.tol, cfgmap.get("tol")) {
        (Some(t), _) => Some(t),
        (None, Some(v)) => Some(
            v.as_f64()
                .ok_or_else(|| fail(EXIT_PARSE, "config tol: expected a number"))?,
        ),
        _ => None,
    };

    let (f1, f2, g) = corpus()?;
    let qcfg = QuadConfig::default();
    let p = MParams::real(1.0, 1, 1.0, 0.5, 1.0)?;
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);

    type Suite<'a> = (&'a str, Box<dyn FnOnce() -> mtrans::Result<Vec<ResidualReport>> + 'a>);
    let suites: Vec<Suite> = vec![
        ("duality", Box::new(|| mtransform::duality_residuals(&f1, &p, &qcfg))),
        ("scaling", Box::new(|| Ok(vec![rules::apply_scaling(&f1, 1.3, &p, &qcfg)?]))),
        ("elimination", Box::new(|| rules::apply_elimination(&f1, half, &p, &qcfg))),
        ("table1", Box::new(|| rules::table1_residuals(&f1, 1, 0.7, &p, &qcfg))),
        ("derivative", Box::new(|| {
            Ok(vec![
                rules::m_derivative(&f1, 1, &p, &qcfg)?.report,
                rules::m_derivative(&f1, 2, &p, &qcfg)?.report,
                rules::m_derivative_weighted(&f1, 1, half, &p, &qcfg)?.report,
            ])
        })),
        ("parseval", Box::new(|| {
            Ok(vec![identities::parseval(&f1, &f2, one, half, &p, &qcfg)?])
        })),
        ("parseval_mixed", Box::new(|| {
            Ok(vec![identities::parseval_mixed(&f1, &f2, one, half, one, &p, &qcfg)?])
        })),
        ("relation_natural", Box::new(|| {
            Ok(vec![identities::relation_natural(&f1, &f2, 1.0, &p, &qcfg)?])
        })),
        ("relation_mellin", Box::new(|| {
            Ok(vec![identities::relation_mellin(&f1, 1.0, Complex64::new(0.7, 0.0), &p, &qcfg)?])
        })),
        ("relation_borel", Box::new(|| {
            Ok(vec![identities::relation_borel(&f2, 1.0, 1.0, 1.0, &p, &qcfg)?])
        })),
        ("convolution", Box::new(|| {
            Ok(vec![identities::convolution_theorem(&f1, &g, &p, &qcfg)?])
        })),
        ("inversion", Box::new(|| {
            let icfg = InversionConfig::default().with_method(InversionMethod::BromwichTrapezoid);
            let mut out = Vec::new();
            for &x in &[0.5f64, 1.0, 2.0] {
                let rec = laplace_inv::m_inverse(
                    |u| Ok(mtransform::m_transform(&f1, &p.with_u(u), &qcfg)?.value),
                    x,
                    &p,
                    &icfg,
                )?;
                out.push(ResidualReport::new(
                    format!("inversion_x{x}"),
                    f1.call(x),
                    rec,
                    1e-5,
                    0,
                ));
            }
            Ok(out)
        })),
    ];

    let mut reports = Vec::new();
    for (name, run) in suites {
        if let Some(filter) = &only {
            if !name.contains(filter.as_str()) {
                continue;
            }
        }
        for r in run()? {
            reports.push(retol(r, tol));
        }
    }
    if reports.is_empty() {
        return Err(fail(EXIT_PARSE, "no suite matches --only filter"));
    }
    let all_pass = reports.iter().all(|r| r.pass);
    write_out(
        &a.output,
        &format!("{}\n", serde_json::to_string_pretty(&reports).unwrap()),
    )?;
    if all_pass {
        Ok(())
    } else {
        Err(fail(EXIT_FAILED_IDENTITY, "one or more identities failed"))
    }
}

// ---------------------------------------------------------------------------
// invert
// ---------------------------------------------------------------------------

fn cmd_invert(a: &InvertArgs) -> CmdResult<()> {
    let expr = parse_expr(&a.function)?;
    let f = funcdsl::to_handle(&expr, a.growth.bound())?;
    let p = build_params(&a.params, &serde_json::Map::new())?;
    let xs = parse_grid(&a.x, "--x")?;
    let qcfg = QuadConfig::default();
    let icfg = InversionConfig {
        method: match a.method {
            MethodFlag::Talbot => InversionMethod::TalbotFixed,
            MethodFlag::Bromwich => InversionMethod::BromwichTrapezoid,
        },
        n_nodes: a.n_nodes,
        ..InversionConfig::default()
    };
    let mut rows = Vec::new();
    for &x in &xs {
        let rec = laplace_inv::m_inverse(
            |u| Ok(mtransform::m_transform(&f, &p.with_u(u), &qcfg)?.value),
            x,
            &p,
            &icfg,
        )?;
        let orig = f.call(x);
        rows.push(serde_json::json!({
            "x": x,
            "original_re": orig.re,
            "recovered_re": rec.re,
            "recovered_im": rec.im,
            "abs_err": (rec - orig).norm(),
        }));
    }
    write_out(
        &a.output,
        &format!("{}\n", serde_json::to_string_pretty(&rows).unwrap()),
    )
}

// ---------------------------------------------------------------------------
// solvers
// ---------------------------------------------------------------------------

fn product_source(
    ft: Expr,
    fx: Expr,
) -> Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync> {
    // first argument feeds ft, second feeds fx
    Arc::new(move |a, b| match (ft.eval(a), fx.eval(b)) {
        (Ok(t), Ok(x)) => Complex64::new(t * x, 0.0),
        _ => Complex64::new(f64::NAN, f64::NAN),
    })
}

fn csv_rows(rows: &[(f64, f64, Complex64, &str, u8)]) -> String {
    let mut s = String::from("t,x,re(w),im(w),method,err_flag\n");
    for (t, x, w, method, flag) in rows {
        s.push_str(&format!("{t},{x},{},{},{method},{flag}\n", w.re, w.im));
    }
    s
}

fn cmd_solve_transport(a: &SolveTransportArgs) -> CmdResult<()> {
    let r = product_source(parse_expr(&a.r_t)?, parse_expr(&a.r_x)?);
    let phi = parse_complex(&a.phi, "--phi")?;
    let p = build_params(&a.params, &serde_json::Map::new())?;
    let t_grid = parse_grid(&a.t_grid, "--t-grid")?;
    let x_grid = parse_grid(&a.x_grid, "--x-grid")?;
    let t_max = t_grid.iter().cloned().fold(0.0f64, f64::max).max(1e-9);
    let x_max = x_grid.iter().cloned().fold(0.0f64, f64::max).max(1e-9);
    let prob = TransportProblem::new(r, phi, p, x_max, t_max)?;
    let icfg = InversionConfig::default();
    let qcfg = QuadConfig::default();

    let mut rows = Vec::new();
    let mut max_diff = 0.0f64;
    for &t in &t_grid {
        for &x in &x_grid {
            let sol = pde::solve_transport(&prob, t, x, &icfg, &qcfg)?;
            if a.with_oracle {
                let oracle = pde::transport_char_oracle(&prob, t, x, 1e-3)?;
                max_diff = max_diff.max((sol.value - oracle).norm());
            }
            rows.push((t, x, sol.value, "transform", sol.near_characteristic as u8));
        }
    }
    let mut text = csv_rows(&rows);
    if a.with_oracle {
        text.push_str(&format!("# max_abs_diff_vs_oracle = {max_diff:e}\n"));
    }
    write_out(&a.output, &text)
}

fn cmd_solve_heat(a: &SolveHeatArgs) -> CmdResult<()> {
    let f_expr = parse_expr(&a.function)?;
    let f_init: Arc<dyn Fn(f64) -> Complex64 + Send + Sync> =
        Arc::new(move |x| match f_expr.eval(x) {
            Ok(v) => Complex64::new(v, 0.0),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        });
    // heat source r(x, t): x feeds the x-factor, t the t-factor
    let rt = parse_expr(&a.r_t)?;
    let rx = parse_expr(&a.r_x)?;
    let r: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync> =
        Arc::new(move |x, t| match (rx.eval(x), rt.eval(t)) {
            (Ok(a), Ok(b)) => Complex64::new(a * b, 0.0),
            _ => Complex64::new(f64::NAN, f64::NAN),
        });
    let p = build_params(&a.params, &serde_json::Map::new())?;
    let t_grid = parse_grid(&a.t_grid, "--t-grid")?;
    let x_grid = parse_grid(&a.x_grid, "--x-grid")?;
    let prob = HeatProblem::new(
        f_init,
        r,
        p.rho,
        p.m,
        p.v,
        a.k_max,
        t_grid.clone(),
        x_grid.clone(),
    )?;
    let sign = match a.sign {
        SignFlag::Corrected => SeriesSign::Corrected,
        SignFlag::Verbatim => SeriesSign::Verbatim,
    };
    let qcfg = QuadConfig::default();

    let oracle = if a.with_oracle {
        Some(pde::heat_fd_oracle(&prob, 200, 200)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut max_diff = 0.0f64;
    for (ti, &t) in t_grid.iter().enumerate() {
        for (xi, &x) in x_grid.iter().enumerate() {
            let w = pde::solve_heat_series(&prob, x, t, sign, &qcfg)?;
            if let Some(grid) = &oracle {
                max_diff = max_diff.max((w - grid.values[ti][xi]).norm());
            }
            rows.push((t, x, w, "series", 0u8));
        }
    }
    let mut text = csv_rows(&rows);
    if a.with_oracle {
        text.push_str(&format!("# max_abs_diff_vs_oracle = {max_diff:e}\n"));
    }
    write_out(&a.output, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Invert(a) => cmd_invert(a),
        Command::SolveTransport(a) => cmd_solve_transport(a),
        Command::SolveHeat(a) => cmd_solve_heat(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
