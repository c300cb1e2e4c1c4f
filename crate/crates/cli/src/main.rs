//! `phiform`: batch verification of field configurations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};
use thiserror::Error;

use phiform::config::{ConfigError, FieldConfig, VectorFieldConfig};
use phiform::eed::{eed_checks, I1_FACTOR, I2_FACTOR};
use phiform::expr::{
    parse, parse_decimal, ParseError, Point4, ScalarExpr, Witness, ZeroOptions, ZeroVerdict,
};
use phiform::maxwell::{format_vec3, Angle, AngleError, EMField3, NamedResidual};
use phiform::report::{Entry, Report, EXIT_CONFIG};
use phiform::structures::tables;
use phiform::symmetry::{flow_consistency_check, symmetry_checks, Flow, FlowError, FLOW_FAMILIES};

/// Discrepancy allowed between a closed-form flow and its integrated
/// generator.
const FLOW_TOLERANCE: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "phiform",
    version,
    about = "Verify vacuum field configurations exactly"
)]
struct Cli {
    /// Emit the machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Decide every residual by sampling instead of normalization.
    #[arg(long, global = true)]
    numeric_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residuals of the 3-d, ℝ²-valued and 4-d formulations.
    CheckMaxwell { file: PathBuf },
    /// Residuals of the nonlinear extension in all three formulations.
    CheckEed { file: PathBuf },
    /// Duality rotation by `--alpha` and the invariance checks.
    Dualize {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// I₁, I₂, energy density and Poynting vector.
    Invariants { file: PathBuf },
    /// The twelve symmetry equations and the conformal condition.
    Symmetry {
        #[arg(long)]
        field: PathBuf,
    },
    /// Evaluates a flow at a point and checks it against its generator.
    Flows {
        #[arg(long)]
        family: String,
        /// One value `s`, or four constants for `translation` and `special-conformal`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        param: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        point: Vec<String>,
    },
    /// Dumps the structure tables as JSON.
    MetricTable,
    /// Wave-equation residual of `d f(dU)`.
    WaveCheck {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("`{src}`: {source}")]
    Expr {
        src: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Usage(String),
}

struct Input {
    bytes: Vec<u8>,
    path: PathBuf,
}

impl Input {
    fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Input {
            bytes,
            path: path.to_path_buf(),
        })
    }

    fn text(&self) -> String {
        String::from_utf8_lossy(&self.bytes).into_owned()
    }

    fn field(&self) -> Result<EMField3, CliError> {
        let config_err = |source| CliError::Config {
            path: self.path.clone(),
            source,
        };
        FieldConfig::from_json(&self.text())
            .and_then(|c| c.field())
            .map_err(config_err)
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn entries(check: &str, residuals: Vec<NamedResidual>) -> impl Iterator<Item = Entry> + '_ {
    residuals.into_iter().map(move |r| Entry {
        check: check.to_string(),
        residual: r.name,
        value: r.residual,
        verdict: r.verdict,
        elapsed_us: u64::try_from(r.elapsed.as_micros()).unwrap_or(u64::MAX),
    })
}

fn expression(src: &str) -> Result<ScalarExpr, CliError> {
    parse(src).map_err(|source| CliError::Expr {
        src: src.to_string(),
        source,
    })
}

/// A constant: a decimal taken exactly, or a constant expression.
fn constant(src: &str) -> Result<ScalarExpr, CliError> {
    let trimmed = src.trim();
    if let Some(q) = parse_decimal(trimmed) {
        return Ok(ScalarExpr::rational(q));
    }
    let e = expression(trimmed)?;
    if !e.symbols().is_empty() {
        return Err(CliError::Usage(format!("`{src}` is not a constant")));
    }
    Ok(e)
}

fn difference<const N: usize>(
    name: &str,
    a: &[ScalarExpr; N],
    b: &[ScalarExpr; N],
    opts: &ZeroOptions,
) -> NamedResidual {
    let diff: Vec<ScalarExpr> = a.iter().zip(b).map(|(x, y)| (x - y).normalize()).collect();
    let rendered = diff
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    NamedResidual::decide(name, format!("({rendered})"), || {
        ZeroVerdict::combine(diff.iter().map(|d| d.is_zero_with(opts)))
    })
}

fn check_maxwell(input: &Input, opts: &ZeroOptions, report: &mut Report) -> Result<(), CliError> {
    let f = input.field()?;
    report
        .entries
        .extend(entries("check-maxwell", f.checks(opts)));
    Ok(())
}

fn check_eed(input: &Input, opts: &ZeroOptions, report: &mut Report) -> Result<(), CliError> {
    let f = input.field()?;
    report
        .entries
        .extend(entries("check-eed", eed_checks(&f, opts)));
    let inv = f.invariants();
    report.values.insert("I1".into(), inv.i1.to_string());
    report.values.insert("I2".into(), inv.i2.to_string());
    report
        .values
        .insert("i_df_f / I1".into(), I1_FACTOR.to_string());
    report
        .values
        .insert("i_df_phif / I2".into(), I2_FACTOR.to_string());
    Ok(())
}

fn dualize(
    input: &Input,
    alpha: &str,
    opts: &ZeroOptions,
    report: &mut Report,
) -> Result<(), CliError> {
    let f = input.field()?;
    let alpha = Angle::parse(alpha)?;
    let g = f.duality_rotate(&alpha);
    report.entries.extend(entries(
        "dualize",
        f.checks(opts)
            .into_iter()
            .map(|mut r| {
                r.name = format!("source.{}", r.name);
                r
            })
            .collect(),
    ));
    report.entries.extend(entries(
        "dualize",
        g.checks(opts)
            .into_iter()
            .map(|mut r| {
                r.name = format!("rotated.{}", r.name);
                r
            })
            .collect(),
    ));
    let (inv, rot) = (f.invariants(), g.invariants());
    let want = inv.rotate(&alpha);
    let (em, rem) = (f.energy_momentum(), g.energy_momentum());
    let pairs = vec![
        difference(
            "invariants.rotation",
            &[rot.i1.clone(), rot.i2.clone()],
            &[want.i1, want.i2],
            opts,
        ),
        difference(
            "invariants.sum_of_squares",
            &[rot.sum_of_squares()],
            &[inv.sum_of_squares()],
            opts,
        ),
        difference("energy.w", &[rem.w], &[em.w], opts),
        difference("momentum.S", &rem.s, &em.s, opts),
    ];
    report.entries.extend(entries("dualize", pairs));
    report.values.insert("alpha".into(), alpha.to_string());
    report.values.insert("E".into(), format_vec3(&g.e));
    report.values.insert("B".into(), format_vec3(&g.b));
    Ok(())
}

fn invariants(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let f = input.field()?;
    let inv = f.invariants();
    let em = f.energy_momentum();
    report.values.insert("I1".into(), inv.i1.to_string());
    report.values.insert("I2".into(), inv.i2.to_string());
    report.values.insert("w".into(), em.w.to_string());
    report.values.insert("S".into(), format_vec3(&em.s));
    Ok(())
}

fn symmetry(input: &Input, opts: &ZeroOptions, report: &mut Report) -> Result<(), CliError> {
    let config_err = |source| CliError::Config {
        path: input.path.clone(),
        source,
    };
    let x = VectorFieldConfig::from_json(&input.text())
        .and_then(|c| c.field())
        .map_err(config_err)?;
    report
        .entries
        .extend(entries("symmetry", symmetry_checks(&x, opts)));
    Ok(())
}

fn flows(
    family: &str,
    params: &[String],
    point: &[String],
    report: &mut Report,
) -> Result<(), CliError> {
    let params: Vec<ScalarExpr> = params
        .iter()
        .map(|p| constant(p))
        .collect::<Result<_, _>>()?;
    let flow = Flow::parse(family, &params).map_err(|e| match e {
        FlowError::UnknownFamily(f) => CliError::Usage(format!(
            "unknown family `{f}`; expected one of {}",
            FLOW_FAMILIES.join(", ")
        )),
        other => CliError::Flow(other),
    })?;
    if point.len() != 4 {
        return Err(CliError::Usage(format!(
            "--point takes 4 coordinates, got {}",
            point.len()
        )));
    }
    let coords: Vec<ScalarExpr> = point
        .iter()
        .map(|p| constant(p))
        .collect::<Result<_, _>>()?;
    let numeric = coords
        .iter()
        .map(|c| c.eval(&Point4::new(0.0, 0.0, 0.0, 0.0)))
        .collect::<Result<Vec<_>, _>>();
    let numeric = numeric.map_err(|e| CliError::Usage(format!("point: {e}")))?;
    let p = Point4::new(numeric[0], numeric[1], numeric[2], numeric[3]);
    let map = flow.map();
    report.values.insert("map".into(), map.to_string());
    let rational: Option<Vec<_>> = coords
        .iter()
        .map(|c| c.normalize().as_rational().cloned())
        .collect();
    let exact = match rational {
        Some(r) => match map.apply_exact(&Point4::new(
            r[0].clone(),
            r[1].clone(),
            r[2].clone(),
            r[3].clone(),
        )) {
            Ok(img) => Some(img.to_string()),
            Err(FlowError::Eval(_)) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let image = map.apply(&p)?;
    report
        .values
        .insert("image".into(), exact.unwrap_or_else(|| image.to_string()));
    let start = Instant::now();
    let residual = match flow_consistency_check(&flow, &p) {
        Ok(discrepancy) => integrator_residual(discrepancy, p, start.elapsed()),
        // The endpoint is regular, so the orbit left the chart before unit time.
        Err(FlowError::Singular { point }) => NamedResidual {
            name: "integrator".into(),
            residual: format!("orbit meets the singular locus near {point}"),
            verdict: ZeroVerdict::Indeterminate,
            elapsed: start.elapsed(),
        },
        Err(e) => return Err(e.into()),
    };
    report.entries.extend(entries("flows", vec![residual]));
    Ok(())
}

fn integrator_residual(discrepancy: f64, p: Point4, elapsed: Duration) -> NamedResidual {
    let verdict = if discrepancy <= FLOW_TOLERANCE {
        ZeroVerdict::NumericZero {
            tolerance: FLOW_TOLERANCE,
            max_abs: discrepancy,
        }
    } else {
        ZeroVerdict::NonZero {
            witness: Some(Witness {
                point: p,
                params: Default::default(),
                value: discrepancy,
            }),
        }
    };
    NamedResidual {
        name: "integrator".into(),
        residual: format!("{discrepancy:e}"),
        verdict,
        elapsed,
    }
}

fn wave_check(u_src: &str, opts: &ZeroOptions, report: &mut Report) -> Result<(), CliError> {
    use phiform::expr::ChartVar::{Xi, X, Y, Z};
    let u = expression(u_src)?;
    let coeff = phiform::maxwell::wave_f_map(&u).top_coeff().normalize();
    let second = |v| u.diff(v).diff(v);
    let expected = (second(Xi) - second(X) - second(Y) - second(Z)).normalize();
    let residuals = vec![
        NamedResidual::decide("box", coeff.to_string(), || coeff.is_zero_with(opts)),
        difference("identity", &[coeff.clone()], &[expected], opts),
    ];
    report.entries.extend(entries("wave-check", residuals));
    Ok(())
}

fn run(cli: &Cli) -> Result<Option<Report>, CliError> {
    let opts = ZeroOptions {
        numeric_only: cli.numeric_only,
    };
    let version = env!("CARGO_PKG_VERSION");
    let with_file = |path: &Path| -> Result<(Input, Report), CliError> {
        let input = Input::read(path)?;
        let report = Report::new("phiform", version, &digest(&input.bytes));
        Ok((input, report))
    };
    let report = match &cli.command {
        Command::CheckMaxwell { file } => {
            let (input, mut r) = with_file(file)?;
            check_maxwell(&input, &opts, &mut r)?;
            r
        }
        Command::CheckEed { file } => {
            let (input, mut r) = with_file(file)?;
            check_eed(&input, &opts, &mut r)?;
            r
        }
        Command::Dualize { file, alpha } => {
            let (input, mut r) = with_file(file)?;
            dualize(&input, alpha, &opts, &mut r)?;
            r
        }
        Command::Invariants { file } => {
            let (input, mut r) = with_file(file)?;
            invariants(&input, &mut r)?;
            r
        }
        Command::Symmetry { field } => {
            let (input, mut r) = with_file(field)?;
            symmetry(&input, &opts, &mut r)?;
            r
        }
        Command::Flows {
            family,
            param,
            point,
        } => {
            let args = format!("{family} {} {}", param.join(","), point.join(","));
            let mut r = Report::new("phiform", version, &digest(args.as_bytes()));
            flows(family, param, point, &mut r)?;
            r
        }
        Command::WaveCheck { u } => {
            let mut r = Report::new("phiform", version, &digest(u.as_bytes()));
            wave_check(u, &opts, &mut r)?;
            r
        }
        Command::MetricTable => return Ok(None),
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(mut report)) => {
            report.sort();
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Ok(None) => {
            println!("{}", serde_json_pretty_tables());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}

fn serde_json_pretty_tables() -> String {
    serde_json::to_string_pretty(tables()).expect("tables serialize")
}
