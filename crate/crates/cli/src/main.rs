//! `holisom`: batch front end. Reads JSON from a file or stdin and writes
//! JSON (or CSV for membership grids) to a file or stdout.
//!
//! Exit status: 0 on success, 2 when a mathematical precondition fails,
//! 1 on malformed input or I/O failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use holisom::spectra::{membership_grid, MembershipOracle, Window};
use holisom::{
    blaschke::detect_boundary_set, classify_one_seminorm, classify_two_seminorm,
    decide_similarity_spec, metric_d, point_spectrum_oracle, spectrum_of, Membership,
    MetricVariant, OperatorSpec, SeminormFamily, SpectrumReport, TaylorSeries, WCOp,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "holisom", version, about = "Isometries, similarity and spectra of weighted composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Input JSON file; stdin when omitted.
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an operator from its basis images e_0, e_1, ... (JSON array of series).
    Classify {
        #[command(flatten)]
        io: Io,
        #[arg(long, requires = "r2", conflicts_with = "r")]
        r1: Option<f64>,
        #[arg(long, requires = "r1")]
        r2: Option<f64>,
        /// Single seminorm radius.
        #[arg(long)]
        r: Option<f64>,
        /// Use only the images of e_0..e_degree.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether an operator is similar to an isometry.
    Similar {
        #[command(flatten)]
        io: Io,
        /// Working truncation degree; overrides the input.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Spectrum of an isometry or of a Blaschke-weight operator.
    Spectrum {
        #[command(flatten)]
        io: Io,
        /// Membership probe, `re` or `re,im`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        probe: Vec<String>,
        /// Grid size as WxH.
        #[arg(long, requires = "window")]
        grid: Option<String>,
        /// Grid window as x0,x1,y0,y1.
        #[arg(long, requires = "grid", allow_hyphen_values = true)]
        window: Option<String>,
        /// Write the membership grid as CSV to this file.
        #[arg(long, requires = "grid")]
        emit_grid: Option<PathBuf>,
    },
    /// Decide whether |g| = 1 on a finite set or on all of the unit circle.
    BlaschkeDetect {
        #[command(flatten)]
        io: Io,
    },
    /// Truncated Fréchet metric between two series ({"f": ..., "g": ...}).
    Metric {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = VariantArg::Min1)]
        variant: VariantArg,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Diagonal of the (n+1)×(n+1) truncation matrix of a rotation-symbol operator.
    Oracle {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    Min1,
    Ratio,
}

impl From<VariantArg> for MetricVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Min1 => MetricVariant::Min1,
            VariantArg::Ratio => MetricVariant::Ratio,
        }
    }
}

#[derive(Deserialize)]
struct MetricInput {
    f: TaylorSeries,
    g: TaylorSeries,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct Probe {
    lambda: Complex64,
    membership: Membership,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct SpectrumOutput {
    report: SpectrumReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    probes: Vec<Probe>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct OracleOutput {
    n: usize,
    diagonal: Vec<Complex64>,
}

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> anyhow::Result<T> {
    serde_json::from_str(text).context("parsing input JSON")
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parse = |p: &str| p.parse::<f64>().with_context(|| format!("bad number {p:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => bail!("expected `re` or `re,im`, got {s:?}"),
    }
}

fn parse_grid(s: &str) -> anyhow::Result<(usize, usize)> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("expected WxH, got {s:?}"))?;
    Ok((w.trim().parse()?, h.trim().parse()?))
}

fn parse_window(s: &str) -> anyhow::Result<Window> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad window {s:?}"))?;
    let [x0, x1, y0, y1] = v[..] else {
        bail!("expected x0,x1,y0,y1, got {s:?}");
    };
    Ok(Window { x0, x1, y0, y1 })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Classify {
            io,
            r1,
            r2,
            r,
            degree,
            trials,
            seed,
        } => {
            let mut images: Vec<TaylorSeries> = parse_json(&read_input(&io.input)?)?;
            if let Some(k) = degree {
                images.truncate(k + 1);
            }
            let verdict = match (r1, r2, r) {
                (Some(r1), Some(r2), None) => classify_two_seminorm(&images, r1, r2, trials, seed)?,
                (None, None, Some(r)) => classify_one_seminorm(&images, r, trials, seed)?,
                _ => bail!("give either --r1 and --r2, or --r"),
            };
            write_output(&io.output, &to_json(&verdict)?)
        }
        Command::Similar { io, degree } => {
            let mut spec: OperatorSpec = parse_json(&read_input(&io.input)?)?;
            if degree.is_some() {
                spec.degree = degree;
            }
            write_output(&io.output, &to_json(&decide_similarity_spec(&spec)?)?)
        }
        Command::Spectrum {
            io,
            probe,
            grid,
            window,
            emit_grid,
        } => {
            let spec: OperatorSpec = parse_json(&read_input(&io.input)?)?;
            let op = WCOp::try_from(spec)?;
            let report = spectrum_of(&op)?;
            let lambdas = probe
                .iter()
                .map(|p| parse_complex(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let oracle = MembershipOracle::new(&report);
            let probes = lambdas
                .into_iter()
                .map(|lambda| Probe {
                    lambda,
                    membership: oracle.classify(lambda),
                })
                .collect();
            if let (Some(grid), Some(window)) = (grid, window) {
                let (w, h) = parse_grid(&grid)?;
                let cells = membership_grid(&report, w, h, parse_window(&window)?)?;
                let mut csv = String::from("re,im,status\n");
                for (z, m) in cells {
                    csv.push_str(&format!("{},{},{}\n", z.re, z.im, m));
                }
                match emit_grid {
                    Some(path) => fs::write(&path, csv)
                        .with_context(|| format!("writing {}", path.display()))?,
                    None => return write_output(&io.output, &csv),
                }
            }
            write_output(&io.output, &to_json(&SpectrumOutput { report, probes })?)
        }
        Command::BlaschkeDetect { io } => {
            let g: TaylorSeries = parse_json(&read_input(&io.input)?)?;
            write_output(&io.output, &to_json(&detect_boundary_set(&g)?)?)
        }
        Command::Metric { io, variant, terms } => {
            let input: MetricInput = parse_json(&read_input(&io.input)?)?;
            let family = SeminormFamily::standard(terms);
            let value = metric_d(&input.f, &input.g, &family, terms, variant.into())?;
            write_output(&io.output, &to_json(&value)?)
        }
        Command::Oracle { io, n } => {
            let spec: OperatorSpec = parse_json(&read_input(&io.input)?)?;
            let op = WCOp::try_from(spec)?;
            let diagonal = point_spectrum_oracle(&op, n)?;
            write_output(&io.output, &to_json(&OracleOutput { n, diagonal })?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<holisom::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
