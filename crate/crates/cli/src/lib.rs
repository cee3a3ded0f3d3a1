//! Command-line surface over the core library: one subcommand per
//! computation, emitting CSV, JSON, or OBJ with every number printed to 17
//! significant digits so the artifacts re-parse bit-for-bit.
//!
//! Exit codes: 0 success, 1 domain errors (unreachable target, inadmissible
//! plan, failed solve), 2 usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorheis::family_one::{self, Chart1, RegionStatus, SphereSpec, SurfaceGrid};
use lorheis::family_two::{self, Chart2, PmpSurfaceGrid};
use lorheis::group::Covector;
use lorheis::limit_zero::{self, Chart0, LimitGrid};
use lorheis::oracle;
use lorheis::{discrepancy, Epsilon, FamilyTag, GroupElement};

/// Numerical engine for two families of left-invariant Lorentzian problems
/// on the Heisenberg group.
#[derive(Debug, Parser)]
#[command(name = "lorheis", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format. `obj` is accepted only by the mesh commands
    /// (sphere, surface, pmp-surface).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an exponential map at one chart point.
    Exp(ExpArgs),
    /// Lorentzian distance from the origin (family one).
    Dist(PointArgs),
    /// Invert the family-one exponential map at an interior point.
    Invert(PointArgs),
    /// Classify a point against an attainable set.
    Attain(AttainArgs),
    /// Sample a family-one Lorentzian sphere S(r) over a chart grid.
    Sphere(SphereArgs),
    /// Sample the lightlike boundary surface of the family-one
    /// attainable set.
    Surface(SurfaceArgs),
    /// Sample the family-two boundary-candidate surface singled out by
    /// the maximum principle.
    PmpSurface(PmpSurfaceArgs),
    /// Scan family-two extremals for conjugate points.
    ConjugateScan(ConjugateScanArgs),
    /// Build the closed admissible loop through the origin (family two).
    Periodic(PeriodicArgs),
    /// Build an admissible plan reaching a target point (family two).
    Reach(ReachArgs),
    /// Convergence of the family-one exponential map to its flat limit.
    ConvergeExp(ConvergeExpArgs),
    /// Convergence of the attainable-set indicator to its flat limit.
    ConvergeAttain(ConvergeAttainArgs),
    /// Sphere lower-semicontinuity proxy along a list of ε values.
    ConvergeSphere(ConvergeSphereArgs),
    /// Check a closed-form exponential against the RK4 oracle, or dump
    /// the ambiguity-resolution ledger with `--ledger`.
    OracleCheck(OracleCheckArgs),
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    /// 0 (flat limit), 1, or 2.
    #[arg(long, allow_hyphen_values = true)]
    pub family: u8,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Chart angle θ (families 1 and 2).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Chart angle φ (families 1 and 2).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Flat-limit chart coordinate ψ (family 0).
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    /// Flat-limit chart coordinate c (family 0).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    /// Relative solver / classification tolerance.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct AttainArgs {
    /// 0 (flat limit) or 1.
    #[arg(long, allow_hyphen_values = true)]
    pub family: u8,
    /// Required for family 1; ignored for family 0.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    pub theta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    pub theta_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_theta: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phi_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::TAU)]
    pub phi_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_phi: usize,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.1)]
    pub beta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::PI - 0.1)]
    pub beta_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_beta: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.05)]
    pub tau_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
    pub tau_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_tau: usize,
}

#[derive(Debug, Args)]
pub struct PmpSurfaceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::TAU)]
    pub alpha_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_alpha: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -6.0)]
    pub h3_min: f64,
    /// Must stay ≤ −1/ε so the level constraint has real solutions.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.1)]
    pub h3_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_h3: usize,
}

#[derive(Debug, Args)]
pub struct ConjugateScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub theta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.5)]
    pub theta_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
    pub n_theta: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub tau_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 7.0)]
    pub tau_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 130)]
    pub n_tau: usize,
}

#[derive(Debug, Args)]
pub struct PeriodicArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t2: f64,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
}

#[derive(Debug, Args)]
pub struct ConvergeExpArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    /// Strictly decreasing ε list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0, 0.1, 0.01])]
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeAttainArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0, 0.1, 0.01])]
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeSphereArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0, 0.1, 0.01])]
    pub eps_list: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    pub psi_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    pub psi_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_psi: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
    pub c_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    pub c_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    pub n_c: usize,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    /// Dump the ambiguity-resolution ledger instead of a point check;
    /// exits 1 if any recorded resolution fails its oracle comparison.
    #[arg(long, default_value_t = false)]
    pub ledger: bool,
    /// 1 or 2 (point-check mode).
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub family: u8,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub phi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub t: f64,
    /// RK4 step density per unit time.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1000.0)]
    pub steps_per_unit: f64,
}

// ---------------------------------------------------------------------------
// output plumbing

/// One number, 17 significant digits — enough for f64 to re-parse
/// bit-for-bit, and the same text in CSV and JSON.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Minimal JSON document builder so numeric fields go through `num`
/// (serde_json would reformat them with shortest-representation rules).
enum Json {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    fn render(&self, out: &mut String) {
        match self {
            Json::Num(v) => out.push_str(&num(*v)),
            Json::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str((*k).to_string()).render(out);
                    out.push(':');
                    v.render(out);
                }
                out.push('}');
            }
        }
    }

    fn to_string(&self) -> String {
        let mut s = String::new();
        self.render(&mut s);
        s.push('\n');
        s
    }
}

fn point_json(q: GroupElement) -> Json {
    Json::Obj(vec![("x", Json::Num(q.x)), ("y", Json::Num(q.y)), ("z", Json::Num(q.z))])
}

/// CSV table: header row plus rows of pre-formatted cells.
struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Wavefront OBJ for a row-major point grid: one `v` line per vertex,
/// quad faces between adjacent rows.
fn obj_mesh(points: &[GroupElement], rows: usize, cols: usize) -> String {
    assert_eq!(points.len(), rows * cols);
    let mut s = String::new();
    for q in points {
        let _ = writeln!(s, "v {} {} {}", num(q.x), num(q.y), num(q.z));
    }
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols - 1 {
            let a = i * cols + j + 1;
            let b = a + 1;
            let c = a + cols + 1;
            let d = a + cols;
            let _ = writeln!(s, "f {a} {b} {c} {d}");
        }
    }
    s
}

enum CliError {
    Usage(String),
    Domain(lorheis::Error),
    Io(std::io::Error),
}

impl From<lorheis::Error> for CliError {
    fn from(e: lorheis::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn eps_flag(v: f64) -> Result<Epsilon, CliError> {
    Epsilon::new(v).ok_or_else(|| usage(format!("--eps must be positive and finite, got {v}")))
}

fn require_eps(v: Option<f64>) -> Result<Epsilon, CliError> {
    eps_flag(v.ok_or_else(|| usage("--eps is required for this family"))?)
}

// ---------------------------------------------------------------------------
// entry point

/// Parses `argv` and runs the command; returns the process exit status.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with status 0
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            1
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let content = match &cli.command {
        Command::Exp(a) => cmd_exp(a, cli.format)?,
        Command::Dist(a) => cmd_dist(a, cli.format)?,
        Command::Invert(a) => cmd_invert(a, cli.format)?,
        Command::Attain(a) => cmd_attain(a, cli.format)?,
        Command::Sphere(a) => cmd_sphere(a, cli.format)?,
        Command::Surface(a) => cmd_surface(a, cli.format)?,
        Command::PmpSurface(a) => cmd_pmp_surface(a, cli.format)?,
        Command::ConjugateScan(a) => cmd_conjugate_scan(a, cli.format)?,
        Command::Periodic(a) => cmd_periodic(a, cli.format)?,
        Command::Reach(a) => cmd_reach(a, cli.format)?,
        Command::ConvergeExp(a) => cmd_converge_exp(a, cli.format)?,
        Command::ConvergeAttain(a) => cmd_converge_attain(a, cli.format)?,
        Command::ConvergeSphere(a) => cmd_converge_sphere(a, cli.format)?,
        Command::OracleCheck(a) => cmd_oracle_check(a, cli.format)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn no_obj(format: Format) -> Result<(), CliError> {
    if format == Format::Obj {
        Err(usage("--format obj is only available for sphere, surface, and pmp-surface"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// commands

fn cmd_exp(a: &ExpArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let q = match a.family {
        0 => {
            let psi = a.psi.ok_or_else(|| usage("--psi is required for --family 0"))?;
            let c = a.c.ok_or_else(|| usage("--c is required for --family 0"))?;
            limit_zero::exp0(Chart0::new(psi, c, a.t))
        }
        1 | 2 => {
            let e = require_eps(a.eps)?;
            let theta = a.theta.ok_or_else(|| usage("--theta is required for this family"))?;
            let phi = a.phi.ok_or_else(|| usage("--phi is required for this family"))?;
            if a.family == 1 {
                family_one::exp1(e, Chart1::new(theta, phi, a.t))
            } else {
                family_two::exp2(e, Chart2::new(theta, phi, a.t))
            }
        }
        f => return Err(usage(format!("--family must be 0, 1 or 2, got {f}"))),
    };
    Ok(match format {
        Format::Csv => Table {
            header: &["x", "y", "z"],
            rows: vec![vec![num(q.x), num(q.y), num(q.z)]],
        }
        .to_csv(),
        _ => point_json(q).to_string(),
    })
}

fn cmd_dist(a: &PointArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let e = eps_flag(a.eps)?;
    let q = GroupElement::new(a.x, a.y, a.z);
    let d = family_one::distance1(e, q, a.tol)?
        .ok_or(lorheis::Error::OutsideCausalShadow)?;
    Ok(match format {
        Format::Csv => Table { header: &["d"], rows: vec![vec![num(d)]] }.to_csv(),
        _ => Json::Obj(vec![("d", Json::Num(d))]).to_string(),
    })
}

fn cmd_invert(a: &PointArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let e = eps_flag(a.eps)?;
    let p = family_one::invert_exp1(e, GroupElement::new(a.x, a.y, a.z), a.tol)?;
    Ok(match format {
        Format::Csv => Table {
            header: &["theta", "phi", "t"],
            rows: vec![vec![num(p.theta), num(p.phi), num(p.t)]],
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("theta", Json::Num(p.theta)),
            ("phi", Json::Num(p.phi)),
            ("t", Json::Num(p.t)),
        ])
        .to_string(),
    })
}

fn status_name(s: RegionStatus) -> &'static str {
    match s {
        RegionStatus::Interior => "interior",
        RegionStatus::Boundary => "boundary",
        RegionStatus::Exterior => "exterior",
    }
}

fn cmd_attain(a: &AttainArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let q = GroupElement::new(a.x, a.y, a.z);
    let v = match a.family {
        0 => limit_zero::attain0(q, a.tol),
        1 => family_one::attain_region1(require_eps(a.eps)?, q, a.tol),
        f => return Err(usage(format!("--family must be 0 or 1 for attain, got {f}"))),
    };
    let tau = v.tau.unwrap_or(f64::NAN);
    Ok(match format {
        Format::Csv => Table {
            header: &["status", "defect", "tau"],
            rows: vec![vec![status_name(v.status).to_string(), num(v.defect), num(tau)]],
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("status", Json::Str(status_name(v.status).to_string())),
            ("defect", Json::Num(v.defect)),
            ("tau", Json::Num(tau)),
        ])
        .to_string(),
    })
}

fn cmd_sphere(a: &SphereArgs, format: Format) -> Result<String, CliError> {
    let e = eps_flag(a.eps)?;
    if a.radius <= 0.0 {
        return Err(usage("--radius must be positive"));
    }
    if a.n_theta < 2 || a.n_phi < 2 {
        return Err(usage("--n-theta and --n-phi must be at least 2"));
    }
    let spec = SphereSpec {
        radius: a.radius,
        theta_min: a.theta_min,
        theta_max: a.theta_max,
        n_theta: a.n_theta,
        phi_min: a.phi_min,
        phi_max: a.phi_max,
        n_phi: a.n_phi,
    };
    let samples = family_one::sphere1(e, &spec);
    Ok(match format {
        Format::Csv => Table {
            header: &["theta", "phi", "t", "x", "y", "z"],
            rows: samples
                .iter()
                .map(|s| {
                    vec![
                        num(s.chart.theta),
                        num(s.chart.phi),
                        num(s.chart.t),
                        num(s.point.x),
                        num(s.point.y),
                        num(s.point.z),
                    ]
                })
                .collect(),
        }
        .to_csv(),
        Format::Json => Json::Arr(
            samples
                .iter()
                .map(|s| {
                    Json::Obj(vec![
                        ("theta", Json::Num(s.chart.theta)),
                        ("phi", Json::Num(s.chart.phi)),
                        ("t", Json::Num(s.chart.t)),
                        ("x", Json::Num(s.point.x)),
                        ("y", Json::Num(s.point.y)),
                        ("z", Json::Num(s.point.z)),
                    ])
                })
                .collect(),
        )
        .to_string(),
        Format::Obj => {
            let points: Vec<GroupElement> = samples.iter().map(|s| s.point).collect();
            obj_mesh(&points, a.n_theta, a.n_phi)
        }
    })
}

fn cmd_surface(a: &SurfaceArgs, format: Format) -> Result<String, CliError> {
    let e = eps_flag(a.eps)?;
    if a.n_beta < 2 || a.n_tau < 2 {
        return Err(usage("--n-beta and --n-tau must be at least 2"));
    }
    let grid = SurfaceGrid {
        beta_min: a.beta_min,
        beta_max: a.beta_max,
        n_beta: a.n_beta,
        tau_min: a.tau_min,
        tau_max: a.tau_max,
        n_tau: a.n_tau,
    };
    let samples = family_one::lightlike_surface1(e, &grid);
    // samples are row-major in (β, τ); recover β from the row index
    let beta_of = |idx: usize| {
        let i = idx / a.n_tau;
        a.beta_min + (a.beta_max - a.beta_min) * i as f64 / (a.n_beta - 1) as f64
    };
    Ok(match format {
        Format::Csv => Table {
            header: &["beta", "tau", "x", "y", "z", "nx", "ny", "nz"],
            rows: samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    vec![
                        num(beta_of(i)),
                        num(s.tau),
                        num(s.point.x),
                        num(s.point.y),
                        num(s.point.z),
                        num(s.normal[0]),
                        num(s.normal[1]),
                        num(s.normal[2]),
                    ]
                })
                .collect(),
        }
        .to_csv(),
        Format::Json => Json::Arr(
            samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    Json::Obj(vec![
                        ("beta", Json::Num(beta_of(i))),
                        ("tau", Json::Num(s.tau)),
                        ("x", Json::Num(s.point.x)),
                        ("y", Json::Num(s.point.y)),
                        ("z", Json::Num(s.point.z)),
                        (
                            "normal",
                            Json::Arr(s.normal.iter().map(|&n| Json::Num(n)).collect()),
                        ),
                    ])
                })
                .collect(),
        )
        .to_string(),
        Format::Obj => {
            let points: Vec<GroupElement> = samples.iter().map(|s| s.point).collect();
            obj_mesh(&points, a.n_beta, a.n_tau)
        }
    })
}

fn cmd_pmp_surface(a: &PmpSurfaceArgs, format: Format) -> Result<String, CliError> {
    let e = eps_flag(a.eps)?;
    if a.n_alpha < 2 || a.n_h3 < 2 {
        return Err(usage("--n-alpha and --n-h3 must be at least 2"));
    }
    if a.h3_max >= 0.0 || a.h3_max * e.get() > -1.0 + 1e-12 {
        return Err(usage("--h3-max must satisfy h3 <= -1/eps"));
    }
    let grid = PmpSurfaceGrid {
        alpha_min: a.alpha_min,
        alpha_max: a.alpha_max,
        n_alpha: a.n_alpha,
        h3_min: a.h3_min,
        h3_max: a.h3_max,
        n_h3: a.n_h3,
    };
    let points = family_two::pmp_surface2(e, &grid);
    Ok(match format {
        Format::Csv => Table {
            header: &["x", "y", "z"],
            rows: points.iter().map(|q| vec![num(q.x), num(q.y), num(q.z)]).collect(),
        }
        .to_csv(),
        Format::Json => Json::Arr(points.iter().map(|&q| point_json(q)).collect()).to_string(),
        Format::Obj => obj_mesh(&points, a.n_alpha, a.n_h3),
    })
}

fn cmd_conjugate_scan(a: &ConjugateScanArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let e = eps_flag(a.eps)?;
    if a.n_theta < 1 || a.n_tau < 8 {
        return Err(usage("need --n-theta >= 1 and --n-tau >= 8"));
    }
    if !(a.tau_min > 0.0 && a.tau_max > a.tau_min) {
        return Err(usage("need 0 < --tau-min < --tau-max"));
    }
    let reports = family_two::conjugate_scan(
        e,
        (a.theta_min, a.theta_max),
        (a.tau_min, a.tau_max),
        a.n_theta,
        a.n_tau,
    );
    Ok(match format {
        Format::Csv => {
            // long format: one row per located zero / prediction
            let mut rows = Vec::new();
            for r in &reports {
                for &z in &r.tau_zeros {
                    rows.push(vec![num(r.theta), "fd_zero".to_string(), num(z)]);
                }
                for &z in &r.f_zeros {
                    rows.push(vec![num(r.theta), "f_zero".to_string(), num(z)]);
                }
                for &(n, z) in &r.predicted {
                    rows.push(vec![num(r.theta), format!("predicted_z_{n}"), num(z)]);
                }
            }
            Table { header: &["theta", "kind", "value"], rows }.to_csv()
        }
        _ => Json::Arr(
            reports
                .iter()
                .map(|r| {
                    Json::Obj(vec![
                        ("theta", Json::Num(r.theta)),
                        (
                            "tau_zeros",
                            Json::Arr(r.tau_zeros.iter().map(|&z| Json::Num(z)).collect()),
                        ),
                        (
                            "f_zeros",
                            Json::Arr(r.f_zeros.iter().map(|&z| Json::Num(z)).collect()),
                        ),
                        (
                            "predicted",
                            Json::Arr(
                                r.predicted
                                    .iter()
                                    .map(|&(n, z)| {
                                        Json::Obj(vec![
                                            ("n", Json::Int(n as i64)),
                                            ("z", Json::Num(z)),
                                        ])
                                    })
                                    .collect(),
                            ),
                        ),
                    ])
                })
                .collect(),
        )
        .to_string(),
    })
}

fn cmd_periodic(a: &PeriodicArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let e = eps_flag(a.eps)?;
    let plan = family_two::periodic_plan(e, a.t1, a.t2)?;
    let residual = plan.waypoints[2].norm_inf();
    Ok(match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for s in &plan.plan().segments {
                rows.push(vec![
                    num(s.control.u1),
                    num(s.control.u2),
                    num(s.control.u3),
                    num(s.duration),
                ]);
            }
            Table { header: &["u1", "u2", "u3", "duration"], rows }.to_csv()
        }
        _ => Json::Obj(vec![
            ("eps", Json::Num(e.get())),
            ("t1", Json::Num(plan.t1)),
            ("t2", Json::Num(plan.t2)),
            ("t3", Json::Num(plan.t3)),
            (
                "segments",
                Json::Arr(
                    plan.plan()
                        .segments
                        .iter()
                        .map(|s| {
                            Json::Obj(vec![
                                ("u1", Json::Num(s.control.u1)),
                                ("u2", Json::Num(s.control.u2)),
                                ("u3", Json::Num(s.control.u3)),
                                ("duration", Json::Num(s.duration)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "waypoints",
                Json::Arr(plan.waypoints.iter().map(|&q| point_json(q)).collect()),
            ),
            ("lorentz_length", Json::Num(plan.lorentz_length)),
            ("closure_residual", Json::Num(residual)),
        ])
        .to_string(),
    })
}

fn cmd_reach(a: &ReachArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    let e = eps_flag(a.eps)?;
    let target = GroupElement::new(a.x, a.y, a.z);
    let plan = family_two::reach_plan(e, target)?;
    let endpoint = oracle::integrate_control(e, GroupElement::IDENTITY, &plan, 64).endpoint();
    let residual = (endpoint.inverse() * target).norm_inf();
    Ok(match format {
        Format::Csv => Table {
            header: &["u1", "u2", "u3", "duration"],
            rows: plan
                .segments
                .iter()
                .map(|s| {
                    vec![
                        num(s.control.u1),
                        num(s.control.u2),
                        num(s.control.u3),
                        num(s.duration),
                    ]
                })
                .collect(),
        }
        .to_csv(),
        _ => Json::Obj(vec![
            (
                "segments",
                Json::Arr(
                    plan.segments
                        .iter()
                        .map(|s| {
                            Json::Obj(vec![
                                ("u1", Json::Num(s.control.u1)),
                                ("u2", Json::Num(s.control.u2)),
                                ("u3", Json::Num(s.control.u3)),
                                ("duration", Json::Num(s.duration)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("total_duration", Json::Num(plan.total_duration())),
            ("endpoint_residual", Json::Num(residual)),
        ])
        .to_string(),
    })
}

fn parse_eps_list(list: &[f64]) -> Result<(), CliError> {
    if list.is_empty() {
        return Err(usage("--eps-list must not be empty"));
    }
    for w in list.windows(2) {
        if w[1] >= w[0] {
            return Err(usage("--eps-list must be strictly decreasing"));
        }
    }
    if list.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
        return Err(usage("--eps-list entries must be positive and finite"));
    }
    Ok(())
}

fn cmd_converge_exp(a: &ConvergeExpArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    parse_eps_list(&a.eps_list)?;
    if a.t <= 0.0 {
        return Err(usage("--t must be positive"));
    }
    let r = limit_zero::exp_convergence(a.psi, a.c, a.t, &a.eps_list);
    Ok(match format {
        Format::Csv => Table {
            header: &["eps", "error"],
            rows: r
                .eps_values
                .iter()
                .zip(&r.errors)
                .map(|(&e, &err)| vec![num(e), num(err)])
                .collect(),
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("eps", Json::Arr(r.eps_values.iter().map(|&e| Json::Num(e)).collect())),
            ("errors", Json::Arr(r.errors.iter().map(|&e| Json::Num(e)).collect())),
            ("monotone", Json::Bool(r.monotone)),
        ])
        .to_string(),
    })
}

fn cmd_converge_attain(a: &ConvergeAttainArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    parse_eps_list(&a.eps_list)?;
    let r = limit_zero::indicator_convergence(GroupElement::new(a.x, a.y, a.z), &a.eps_list);
    Ok(match format {
        Format::Csv => Table {
            header: &["eps", "member", "error"],
            rows: r
                .eps_values
                .iter()
                .zip(r.members.iter().zip(&r.errors))
                .map(|(&e, (&m, &err))| vec![num(e), m.to_string(), num(err)])
                .collect(),
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("eps", Json::Arr(r.eps_values.iter().map(|&e| Json::Num(e)).collect())),
            ("members", Json::Arr(r.members.iter().map(|&m| Json::Bool(m)).collect())),
            ("errors", Json::Arr(r.errors.iter().map(|&e| Json::Num(e)).collect())),
            ("monotone", Json::Bool(r.monotone)),
        ])
        .to_string(),
    })
}

fn cmd_converge_sphere(a: &ConvergeSphereArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    parse_eps_list(&a.eps_list)?;
    if a.radius <= 0.0 {
        return Err(usage("--radius must be positive"));
    }
    let grid = LimitGrid {
        psi_min: a.psi_min,
        psi_max: a.psi_max,
        n_psi: a.n_psi,
        c_min: a.c_min,
        c_max: a.c_max,
        n_c: a.n_c,
    };
    let defects: Vec<f64> = a
        .eps_list
        .iter()
        .map(|&e| limit_zero::sphere_semicontinuity(a.radius, Epsilon::new(e).unwrap(), &grid))
        .collect();
    Ok(match format {
        Format::Csv => Table {
            header: &["eps", "defect"],
            rows: a
                .eps_list
                .iter()
                .zip(&defects)
                .map(|(&e, &d)| vec![num(e), num(d)])
                .collect(),
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("eps", Json::Arr(a.eps_list.iter().map(|&e| Json::Num(e)).collect())),
            ("defects", Json::Arr(defects.iter().map(|&d| Json::Num(d)).collect())),
        ])
        .to_string(),
    })
}

fn cmd_oracle_check(a: &OracleCheckArgs, format: Format) -> Result<String, CliError> {
    no_obj(format)?;
    if a.ledger {
        return ledger_report(format);
    }
    let e = eps_flag(a.eps)?;
    if a.t <= 0.0 {
        return Err(usage("--t must be positive"));
    }
    let (family, closed, h0) = match a.family {
        1 => (
            FamilyTag::FamilyOne,
            family_one::exp1(e, Chart1::new(a.theta, a.phi, a.t)),
            family_one::chart1(e, a.theta, a.phi),
        ),
        2 => (
            FamilyTag::FamilyTwo,
            family_two::exp2(e, Chart2::new(a.theta, a.phi, a.t)),
            family_two::chart2(e, a.theta, a.phi),
        ),
        f => return Err(usage(format!("--family must be 1 or 2, got {f}"))),
    };
    let steps = ((a.steps_per_unit * a.t).ceil() as usize).max(16);
    let traj = oracle::integrate_extremal(family, e, h0, a.t, steps);
    let q = traj.endpoint();
    let err = (closed.x - q.x).abs().max((closed.y - q.y).abs()).max((closed.z - q.z).abs());
    let ham = |h: Covector| match family {
        FamilyTag::FamilyOne => family_one::hamiltonian1(e, h),
        FamilyTag::FamilyTwo => family_two::hamiltonian2(e, h),
    };
    let h_start = ham(h0);
    let drift = traj
        .covectors
        .as_ref()
        .unwrap()
        .iter()
        .map(|&h| (ham(h) - h_start).abs())
        .fold(0.0_f64, f64::max);
    Ok(match format {
        Format::Csv => Table {
            header: &["closed_x", "closed_y", "closed_z", "rk4_x", "rk4_y", "rk4_z", "error",
                "hamiltonian_drift"],
            rows: vec![vec![
                num(closed.x),
                num(closed.y),
                num(closed.z),
                num(q.x),
                num(q.y),
                num(q.z),
                num(err),
                num(drift),
            ]],
        }
        .to_csv(),
        _ => Json::Obj(vec![
            ("closed", point_json(closed)),
            ("rk4", point_json(q)),
            ("error", Json::Num(err)),
            ("hamiltonian_drift", Json::Num(drift)),
        ])
        .to_string(),
    })
}

fn ledger_report(format: Format) -> Result<String, CliError> {
    let entries = discrepancy::all();
    let all_ok = entries.iter().all(|r| r.adopted_agrees() && r.rejected_all_disagree());
    let content = match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &entries {
                rows.push(vec![
                    r.id.to_string(),
                    "adopted".to_string(),
                    r.adopted.label.to_string(),
                    num(r.adopted.value),
                    r.adopted_agrees().to_string(),
                ]);
                for rej in &r.rejected {
                    rows.push(vec![
                        r.id.to_string(),
                        "rejected".to_string(),
                        rej.label.to_string(),
                        num(rej.value),
                        "false".to_string(),
                    ]);
                }
                rows.push(vec![
                    r.id.to_string(),
                    "oracle".to_string(),
                    r.oracle.label.to_string(),
                    num(r.oracle.value),
                    "true".to_string(),
                ]);
            }
            Table { header: &["id", "role", "label", "value", "agrees"], rows }.to_csv()
        }
        _ => Json::Arr(
            entries
                .iter()
                .map(|r| {
                    let reading = |rd: &discrepancy::Reading| {
                        Json::Obj(vec![
                            ("label", Json::Str(rd.label.to_string())),
                            ("value", Json::Num(rd.value)),
                        ])
                    };
                    Json::Obj(vec![
                        ("id", Json::Str(r.id.to_string())),
                        ("context", Json::Str(r.context.to_string())),
                        ("adopted", reading(&r.adopted)),
                        ("rejected", Json::Arr(r.rejected.iter().map(reading).collect())),
                        ("oracle", reading(&r.oracle)),
                        ("tol", Json::Num(r.tol)),
                        ("adopted_agrees", Json::Bool(r.adopted_agrees())),
                        ("rejected_all_disagree", Json::Bool(r.rejected_all_disagree())),
                    ])
                })
                .collect(),
        )
        .to_string(),
    };
    if all_ok {
        Ok(content)
    } else {
        // still emit the report, then signal the failed comparison
        use std::io::Write;
        std::io::stdout().write_all(content.as_bytes())?;
        Err(CliError::Domain(lorheis::Error::IllConditioned))
    }
}
