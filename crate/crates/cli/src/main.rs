use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polycx_core::complex::{enumerate_full, DEFAULT_VERTEX_CAP};
use polycx_core::context::Context;
use polycx_core::curvature::{curvature_report, pcs_census};
use polycx_core::dot::{arc_graph_dot, complex_dot, hyperplane_dot};
use polycx_core::hyperplanes::{distance_comparison, quadrant_crossing_graph};
use polycx_core::io::{cache_dir, cached_document, enumerate, read_document, write_atomic, ComplexDocument, Request};
use polycx_core::verify::{exempt_exceptional, verify_document, Suite};
use polycx_core::{ArcId, Error, Report, SurfaceSignature};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "polycx", version, about = "Polygonalisation complexes of marked surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Ball,
}

#[derive(clap::Args)]
struct Enumeration {
    /// Enumerate the full complex or a ball around the base triangulation.
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Ball radius, required with `--mode ball`.
    #[arg(long)]
    radius: Option<usize>,
    /// Maximum number of vertices before giving up.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

impl Enumeration {
    fn request(&self) -> Result<Request, Usage> {
        match (self.mode, self.radius) {
            (ModeArg::Full, None) => Ok(Request::Full),
            (ModeArg::Full, Some(_)) => Err(Usage("--radius requires --mode ball".into())),
            (ModeArg::Ball, Some(radius)) => Ok(Request::Ball { radius }),
            (ModeArg::Ball, None) => Err(Usage("--mode ball requires --radius".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the arc count, triangle count and exceptional flag of a surface.
    Surface {
        signature: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate a complex and write it as a JSON document.
    Enumerate {
        signature: String,
        #[command(flatten)]
        enumeration: Enumeration,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the list of cubes of dimension at least 2.
        #[arg(long)]
        cubes: bool,
        /// Bypass the enumeration cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Export a stored complex as Graphviz DOT.
    Export {
        /// A JSON document produced by `enumerate`.
        input: PathBuf,
        /// `complex`, `crossing` or `hyperplane:ARC`.
        #[arg(long, default_value = "complex")]
        what: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites on a signature or a stored document.
    Verify {
        #[arg(required_unless_present = "input", conflicts_with = "input")]
        signature: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        enumeration: Enumeration,
        #[arg(long)]
        json: bool,
    },
    /// Compare crossing-graph and arc-graph distances on the full complex.
    Distances {
        signature: String,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Positive curvature systems per vertex and the curvature checks.
    Curvature {
        signature: String,
        #[command(flatten)]
        enumeration: Enumeration,
        #[arg(long)]
        json: bool,
    },
}

/// A malformed invocation detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::EnumerationDiverged { .. }) => EXIT_CAP,
        Some(Error::Parse { .. } | Error::InvalidSignature(_) | Error::UnsupportedSignature(_)) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn signature(text: &str) -> Result<SurfaceSignature> {
    Ok(text.parse::<SurfaceSignature>()?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_report(report: &Report, json: bool) -> Result<bool> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        println!("{report}");
    }
    Ok(report.passed())
}

/// Runs one command; `Ok(false)` means a verification failure.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Surface { signature: text, json } => {
            let sig = signature(&text)?;
            let (e, f, exceptional) = (sig.complexity(), sig.face_count(), sig.is_exceptional());
            if json {
                let value = serde_json::json!({ "signature": sig.to_string(), "E": e, "F": f, "exceptional": exceptional });
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                println!("E={e} F={f} exceptional={exceptional}");
            }
            Ok(true)
        }
        Command::Enumerate { signature: text, enumeration, out, cubes, no_cache } => {
            let sig = signature(&text)?;
            let request = enumeration.request()?;
            let doc = if cubes || no_cache {
                let mut ctx = Context::new(sig)?;
                let cx = enumerate(&mut ctx, request, enumeration.cap)?;
                ComplexDocument::from_complex(&cx, cubes)
            } else {
                cached_document(&cache_dir(), &sig, request, enumeration.cap)?
            };
            emit(out.as_deref(), &doc.to_json()?)?;
            if out.is_some() {
                eprintln!("{} vertices, {} edges, digest {}", doc.vertices.len(), doc.edges.len(), doc.content_digest);
            }
            Ok(true)
        }
        Command::Export { input, what, out } => {
            let doc = read_document(&input).with_context(|| format!("reading {}", input.display()))?;
            let cx = doc.to_complex()?;
            let dot = match what.as_str() {
                "complex" => complex_dot(&cx),
                "crossing" => arc_graph_dot("crossing", &quadrant_crossing_graph(&cx)?),
                other => match other.strip_prefix("hyperplane:") {
                    Some(arc) => {
                        let id: u32 = arc
                            .trim_start_matches('a')
                            .parse()
                            .map_err(|_| Usage(format!("hyperplane arc {arc:?} is not an arc id")))?;
                        hyperplane_dot(&cx, ArcId(id))?
                    }
                    None => bail!(Usage(format!("unknown export {other:?}"))),
                },
            };
            emit(out.as_deref(), &dot)?;
            Ok(true)
        }
        Command::Verify { signature: text, input, suite, enumeration, json } => {
            let suite: Suite = suite.parse()?;
            let report = match (text, input) {
                (Some(text), None) => {
                    let sig = signature(&text)?;
                    let doc = cached_document(&cache_dir(), &sig, enumeration.request()?, enumeration.cap)?;
                    verify_document(&doc, suite, enumeration.cap)?
                }
                (None, Some(path)) => {
                    let doc = read_document(&path).with_context(|| format!("reading {}", path.display()))?;
                    verify_document(&doc, suite, enumeration.cap)?
                }
                _ => bail!(Usage("give a signature or --input".into())),
            };
            print_report(&report, json)
        }
        Command::Distances { signature: text, cap, json } => {
            let sig = signature(&text)?;
            let exceptional = sig.is_exceptional();
            let mut ctx = Context::new(sig)?;
            let cx = enumerate_full(&mut ctx, cap)?;
            let mut report = distance_comparison(&mut ctx, &cx)?;
            exempt_exceptional(&mut report, exceptional);
            print_report(&report, json)
        }
        Command::Curvature { signature: text, enumeration, json } => {
            let sig = signature(&text)?;
            let exceptional = sig.is_exceptional();
            let mut ctx = Context::new(sig)?;
            let cx = enumerate(&mut ctx, enumeration.request()?, enumeration.cap)?;
            let census = pcs_census(&ctx, &cx)?;
            let mut report = curvature_report(&ctx, &cx)?;
            exempt_exceptional(&mut report, exceptional);
            if json {
                let value = serde_json::json!({ "vertices": census, "report": report });
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                println!("{:>7}  {:>9}  {:>7}  sizes", "vertex", "certified", "systems");
                for v in &census {
                    let sizes: Vec<String> = v.systems.iter().map(|s| s.arcs.len().to_string()).collect();
                    println!("{:>7}  {:>9}  {:>7}  {}", v.vertex, v.certified, v.systems.len(), sizes.join(","));
                }
                println!("{report}");
            }
            Ok(report.passed())
        }
    }
}
