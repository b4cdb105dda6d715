//! `sphsep`: joint spectra, actions, eigenfunctions, monodromy and oracle
//! checks from the command line.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

mod config;
mod svg;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sphsep::actions::{state_actions, EtildeMode};
use sphsep::ellipsoidal::admissible_classes;
use sphsep::monodromy::{circle_loop, initial_cell, transport};
use sphsep::oracle::{oracle_check, ORACLE_MAX_DEGREE};
use sphsep::{counts, eigenfunctions, Error, JointSpectrum, Quanta, QuantumState, SystemKind, SystemSpec};

use config::{parse_classes, resolve_system, Etilde, FileConfig, Format, RunConfig, Scaling, DEFAULT_SEED};
use svg::{barycentric, Frame, Plot};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidProblem(_) | Error::DimensionGuard { .. } | Error::UnreachableTarget(_) | Error::OutOfBox(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "sphsep", version, about = "Separable quantum integrable systems on S3 and S2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint spectrum of one degree.
    Spectrum(Common),
    /// Joint spectrum with the action variables of every state.
    Actions(ActionArgs),
    /// Compare separation spectra with the Cartesian operator matrices.
    OracleCheck(Common),
    /// Transport a lattice cell around a loop in the joint spectrum.
    Monodromy(MonodromyArgs),
    /// Cartesian polynomial of one state.
    Eigenfunction(EigenArgs),
    /// Number of states per symmetry class.
    Counts(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// System name, or `all` for oracle-check.
    #[arg(long)]
    system: Option<String>,
    /// Shape parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<f64>>,
    /// Polynomial degree D (angular momentum ℓ on S²).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Class filter, e.g. `0000,0101`.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<String>>,
    #[arg(long, value_enum)]
    scaling: Option<Scaling>,
}

#[derive(Args)]
struct ActionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    etilde: Option<Etilde>,
}

#[derive(Args)]
struct MonodromyArgs {
    #[command(flatten)]
    common: Common,
    /// Loop centre in scaled units.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct EigenArgs {
    #[command(flatten)]
    common: Common,
    /// Position of the state in the (filtered) spectrum.
    #[arg(long)]
    index: Option<usize>,
    /// Rename variable i to perm[i] (1-based), e.g. `3,4,1,2`.
    #[arg(long, value_delimiter = ',')]
    permute: Option<Vec<usize>>,
}

fn load(common: &Common) -> Result<(RunConfig, FileConfig), CliError> {
    let file = match &common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let system = resolve_system(common.system.as_deref(), common.params.as_deref(), file.system.as_ref())?;
    let degree = common
        .degree
        .or(file.degree)
        .ok_or_else(|| CliError::Validation("no degree given (use --degree or a config file)".into()))?;
    let classes = match common.classes.as_ref().or(file.classes.as_ref()) {
        Some(raw) => Some(parse_classes(raw)?),
        None => None,
    };
    let cfg = RunConfig {
        system,
        degree,
        classes,
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        format: common.format.or(file.output),
        out: common.out.clone().or(file.out.clone()),
        scaling: common.scaling.or(file.scaling).unwrap_or_default(),
        etilde: file.etilde_mode.unwrap_or_default(),
    };
    Ok((cfg, file))
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Numerical(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn format_or(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cfg.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Validation(format!("format {f:?} is not available for this command")))
    }
}

fn filtered(spec: &JointSpectrum, classes: &Option<Vec<Vec<u8>>>) -> JointSpectrum {
    match classes {
        None => spec.clone(),
        Some(keep) => {
            let states = spec.states.iter().filter(|s| keep.contains(&s.class)).cloned().collect();
            JointSpectrum { system: spec.system.clone(), degree: spec.degree, hbar: spec.hbar, states }
        }
    }
}

/// Class labels in legend order: the admissible-class order for the
/// ellipsoidal system, lexicographic otherwise.
fn class_order(spec: &JointSpectrum) -> Vec<String> {
    let label = |c: &[u8]| c.iter().map(|b| char::from(b'0' + b)).collect::<String>();
    if spec.system.kind == SystemKind::Ellipsoidal {
        return admissible_classes(spec.degree).iter().map(|c| label(c)).collect();
    }
    let mut v: Vec<String> = spec.states.iter().map(|s| s.class_label()).collect();
    v.sort();
    v.dedup();
    v
}

/// `key=value` pairs of the quanta, `;` separated; arrays joined by `/`.
fn quanta_string(q: &Quanta) -> String {
    let v = serde_json::to_value(q).expect("quanta serialise");
    let Value::Object(map) = v else { unreachable!() };
    let mut parts = vec![format!("type={}", map["type"].as_str().unwrap_or_default())];
    for (k, val) in &map {
        if k == "type" {
            continue;
        }
        let s = match val {
            Value::Array(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/"),
            other => other.to_string(),
        };
        parts.push(format!("{k}={s}"));
    }
    parts.join(";")
}

fn state_fields(s: &QuantumState) -> Vec<String> {
    vec![
        s.system.name().to_string(),
        s.degree.to_string(),
        s.class_label(),
        quanta_string(&s.quanta),
        s.raw[0].to_string(),
        s.raw[1].to_string(),
        s.scaled[0].to_string(),
        s.scaled[1].to_string(),
    ]
}

const STATE_HEADER: [&str; 8] = ["system", "degree", "class", "quanta", "raw1", "raw2", "scaled1", "scaled2"];

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Numerical(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Numerical(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn axis_labels(kind: SystemKind) -> (&'static str, &'static str) {
    match kind {
        SystemKind::Ellipsoidal => ("lambda1", "lambda2"),
        SystemKind::Prolate | SystemKind::Oblate | SystemKind::Spherical23 => ("m", "lambda"),
        SystemKind::Cylindrical => ("m1", "m2"),
        SystemKind::Lame => ("f", "g"),
        SystemKind::S2Ellipsoidal => ("E", "lambda"),
        SystemKind::S2Spherical => ("m", "E"),
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let full = sphsep::spectrum(&cfg.system, cfg.degree, cfg.seed)?;
    let sp = filtered(&full, &cfg.classes);
    let text = match format_or(cfg, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])? {
        Format::Csv => csv_text(&STATE_HEADER, &sp.states.iter().map(state_fields).collect::<Vec<_>>())?,
        Format::Json => json_text(&sp),
        _ => {
            let order = class_order(&full);
            let idx = |s: &QuantumState| order.iter().position(|c| *c == s.class_label()).unwrap_or(0);
            let points = sp
                .states
                .iter()
                .map(|s| (if cfg.scaling == Scaling::Raw { s.raw } else { s.scaled }, idx(s)))
                .collect();
            let (x, y) = axis_labels(cfg.system.kind);
            svg::render(&Plot {
                title: format!("{} joint spectrum, D = {}", cfg.system.kind, cfg.degree),
                x_label: x.into(),
                y_label: y.into(),
                frame: Frame::Axes,
                points,
                segments: Vec::new(),
                legend: order.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect(),
            })
        }
    };
    emit(cfg, &text)
}

fn cmd_actions(cfg: &RunConfig) -> Result<(), CliError> {
    let full = sphsep::spectrum(&cfg.system, cfg.degree, cfg.seed)?;
    let sp = filtered(&full, &cfg.classes);
    let mode = match cfg.etilde {
        Etilde::Unit => EtildeMode::Unit,
        Etilde::Exact => EtildeMode::Exact,
    };
    let acts: Vec<Result<Vec<f64>, Error>> = sp.states.iter().map(|s| state_actions(s, &sp.system.params, mode)).collect();
    let status = |a: &Result<Vec<f64>, Error>| match a {
        Ok(_) => "ok".to_string(),
        Err(Error::OutsideImage) => "outside-image".to_string(),
        Err(e) => format!("error: {e}"),
    };
    let text = match format_or(cfg, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])? {
        Format::Csv => {
            let mut header = STATE_HEADER.to_vec();
            header.extend(["j1", "j2", "j3", "status"]);
            let rows: Vec<Vec<String>> = sp
                .states
                .iter()
                .zip(&acts)
                .map(|(s, a)| {
                    let mut r = state_fields(s);
                    let vals = a.clone().unwrap_or_default();
                    for k in 0..3 {
                        r.push(vals.get(k).map(|x| x.to_string()).unwrap_or_default());
                    }
                    r.push(status(a));
                    r
                })
                .collect();
            csv_text(&header, &rows)?
        }
        Format::Json => {
            let rows: Vec<Value> = sp
                .states
                .iter()
                .zip(&acts)
                .map(|(s, a)| json!({ "state": s, "actions": a.as_ref().ok(), "status": status(a) }))
                .collect();
            json_text(&json!({ "system": sp.system, "degree": sp.degree, "hbar": sp.hbar, "etilde": mode, "states": rows }))
        }
        _ => {
            let order = class_order(&full);
            let idx = |s: &QuantumState| order.iter().position(|c| *c == s.class_label()).unwrap_or(0);
            let tri = cfg.system.kind.nvars() == 4;
            let points = sp
                .states
                .iter()
                .zip(&acts)
                .filter_map(|(s, a)| {
                    let v = a.as_ref().ok()?;
                    let p = if tri {
                        let sum: f64 = v.iter().sum();
                        barycentric([v[0] / sum, v[1] / sum, v[2] / sum])
                    } else {
                        [v[0], v[1]]
                    };
                    Some((p, idx(s)))
                })
                .collect();
            svg::render(&Plot {
                title: format!("{} actions, D = {}", cfg.system.kind, cfg.degree),
                x_label: "J1".into(),
                y_label: "J2".into(),
                frame: if tri { Frame::Triangle } else { Frame::Axes },
                points,
                segments: Vec::new(),
                legend: order.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect(),
            })
        }
    };
    emit(cfg, &text)
}

/// Largest relative deviation accepted by `oracle-check`.
const ORACLE_TOL: f64 = 1e-7;
const ORACLE_CLI_MAX: usize = 8;

fn cmd_oracle_check(common: &Common) -> Result<(), CliError> {
    let all = common.system.as_deref() == Some("all");
    let mut c = common.clone();
    if all {
        c.system = Some("prolate".into());
        c.params = None;
    }
    let (cfg, _) = load(&c)?;
    if cfg.degree < 2 || cfg.degree > ORACLE_CLI_MAX.min(ORACLE_MAX_DEGREE) {
        return Err(CliError::Validation(format!("oracle-check needs 2 ≤ D ≤ {ORACLE_CLI_MAX}")));
    }
    format_or(&cfg, Format::Json, &[Format::Json])?;
    let systems: Vec<SystemSpec> = if all {
        SystemKind::ALL
            .iter()
            .map(|k| SystemSpec::new(*k, config::default_params(*k)))
            .collect::<Result<_, _>>()?
    } else {
        vec![cfg.system.clone()]
    };
    let degrees: Vec<usize> = (2..=cfg.degree).collect();
    let mut reports = Vec::new();
    let mut pass = true;
    for s in &systems {
        match oracle_check(s, &degrees, cfg.seed) {
            Ok(r) => {
                let ok = r.max_deviation() <= ORACLE_TOL;
                pass &= ok;
                reports.push(json!({
                    "system": s,
                    "calibration": r.calibration,
                    "calibration_residual": r.calibration_residual,
                    "deviations": r.deviations,
                    "max_deviation": r.max_deviation(),
                    "pass": ok,
                }));
            }
            Err(e) => {
                pass = false;
                reports.push(json!({ "system": s, "error": e.to_string(), "pass": false }));
            }
        }
    }
    emit(&cfg, &json_text(&json!({ "tolerance": ORACLE_TOL, "seed": cfg.seed, "pass": pass, "systems": reports })))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("oracle mismatch".into()))
    }
}

fn cmd_monodromy(args: &MonodromyArgs) -> Result<(), CliError> {
    let (cfg, file) = load(&args.common)?;
    let center = match (&args.center, file.center) {
        (Some(c), _) if c.len() == 2 => [c[0], c[1]],
        (Some(_), _) => return Err(CliError::Validation("--center takes two values, x,y".into())),
        (None, Some(c)) => c,
        (None, None) => [0.0, 1.0],
    };
    let radius = args.radius.or(file.radius).unwrap_or(0.35);
    let steps = args.steps.or(file.steps).unwrap_or(64);
    if !(radius > 0.0) || steps < 3 {
        return Err(CliError::Validation("loop needs a positive radius and at least 3 steps".into()));
    }
    let full = sphsep::spectrum(&cfg.system, cfg.degree, cfg.seed)?;
    let sp = filtered(&full, &cfg.classes);
    let points = sp.scaled_points();
    let waypoints = circle_loop(center, radius, steps);
    let result = initial_cell(&points, waypoints[0]).and_then(|cell| transport(&points, &waypoints, cell))?;
    let report = json!({
        "system": cfg.system,
        "degree": cfg.degree,
        "classes": cfg.classes.as_ref().map(|v| v.iter().map(|c| c.iter().map(|b| char::from(b'0' + b)).collect::<String>()).collect::<Vec<_>>()),
        "center": center,
        "radius": radius,
        "steps": steps,
        "matrix": result.matrix,
        "raw": result.raw,
        "det": result.det(),
        "omega": result.omega(),
    });
    let text = match format_or(&cfg, Format::Json, &[Format::Json, Format::Text, Format::Svg])? {
        Format::Json => json_text(&report),
        Format::Text => {
            let m = result.matrix;
            format!("matrix [[{}, {}], [{}, {}]]\nomega {}\n", m[0][0], m[0][1], m[1][0], m[1][1], result.omega())
        }
        _ => {
            let mut segments = Vec::new();
            for c in &result.cells {
                let tip = |v: [f64; 2]| [c.base[0] + v[0], c.base[1] + v[1]];
                segments.push((c.base, tip(c.v1), 1));
                segments.push((c.base, tip(c.v2), 2));
            }
            for w in waypoints.windows(2) {
                segments.push((w[0], w[1], 8));
            }
            svg::render(&Plot {
                title: format!("{} transport, omega = {}", cfg.system.kind, result.omega()),
                x_label: "m".into(),
                y_label: "lambda".into(),
                frame: Frame::Axes,
                points: points.iter().map(|p| (*p, 0)).collect(),
                segments,
                legend: vec![("v1".into(), 1), ("v2".into(), 2), ("loop".into(), 8)],
            })
        }
    };
    emit(&cfg, &text)
}

fn cmd_eigenfunction(args: &EigenArgs) -> Result<(), CliError> {
    let (cfg, file) = load(&args.common)?;
    let index = args.index.or(file.index).unwrap_or(0);
    let full = sphsep::spectrum(&cfg.system, cfg.degree, cfg.seed)?;
    let sp = filtered(&full, &cfg.classes);
    let state = sp
        .states
        .get(index)
        .ok_or_else(|| CliError::Validation(format!("index {index} out of range (0..{})", sp.len())))?;
    let poles = if cfg.system.params.is_empty() { Vec::new() } else { cfg.system.poles() };
    let mut p = eigenfunctions::reconstruct(state, &poles)?;
    if let Some(perm) = args.permute.as_ref().or(file.permute.as_ref()) {
        if perm.contains(&0) {
            return Err(CliError::Validation("--permute is 1-based".into()));
        }
        let zero: Vec<usize> = perm.iter().map(|k| k - 1).collect();
        p = p.permuted(&zero)?;
    }
    let v = eigenfunctions::verify(&p);
    let parity = match &v.parity {
        Ok(b) => b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        Err(e) => format!("error: {e}"),
    };
    let text = match format_or(&cfg, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json_text(&json!({
            "state": state,
            "terms": p.terms.iter().map(|(e, c)| json!({ "exponent": e, "coeff": c })).collect::<Vec<_>>(),
            "verification": { "degree": v.degree, "harmonic_residual": v.harmonic_residual, "parity": v.parity.as_ref().ok() },
        })),
        _ => {
            let mut s = String::new();
            s.push_str(&format!("# system {} {:?}\n", cfg.system.kind, cfg.system.params));
            s.push_str(&format!("# state {} {} {}\n", state.degree, state.class_label(), quanta_string(&state.quanta)));
            s.push_str(&p.export());
            s.push_str("# verification\n");
            s.push_str(&format!("# degree {}\n", v.degree.map_or("none".to_string(), |d| d.to_string())));
            s.push_str(&format!("# harmonic_residual {:e}\n", v.harmonic_residual.abs()));
            s.push_str(&format!("# parity {parity}\n"));
            s
        }
    };
    emit(&cfg, &text)
}

fn cmd_counts(cfg: &RunConfig) -> Result<(), CliError> {
    let rows = counts::class_counts(&cfg.system, cfg.degree);
    let total: usize = rows.iter().map(|(_, n)| n).sum();
    let label = |c: &[u8]| c.iter().map(|b| char::from(b'0' + b)).collect::<String>();
    let text = match format_or(cfg, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => json_text(&json!({
            "system": cfg.system,
            "degree": cfg.degree,
            "classes": rows.iter().map(|(c, n)| json!({ "class": label(c), "count": n })).collect::<Vec<_>>(),
            "total": total,
        })),
        _ => {
            let mut body: Vec<Vec<String>> = rows.iter().map(|(c, n)| vec![label(c), n.to_string()]).collect();
            body.push(vec!["total".into(), total.to_string()]);
            csv_text(&["class", "count"], &body)?
        }
    };
    emit(cfg, &text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(c) => cmd_spectrum(&load(&c)?.0),
        Command::Actions(a) => {
            let (mut cfg, file) = load(&a.common)?;
            cfg.etilde = a.etilde.or(file.etilde_mode).unwrap_or_default();
            cmd_actions(&cfg)
        }
        Command::OracleCheck(c) => cmd_oracle_check(&c),
        Command::Monodromy(m) => cmd_monodromy(&m),
        Command::Eigenfunction(e) => cmd_eigenfunction(&e),
        Command::Counts(c) => cmd_counts(&load(&c)?.0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Validation(m) => eprintln!("error: {m}"),
                CliError::Numerical(m) => eprintln!("numerical failure: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
