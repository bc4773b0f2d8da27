//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 for domain errors, 2 for data-integrity failures.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bifurcation;
use crate::code::{self, GRAPH_COUNT};
use crate::data;
use crate::error::{Error, Result};
use crate::export::{self, Window};
use crate::model::ModelParams;
use crate::oracle::{self, Budget};
use crate::separating;
use crate::topology::{self, FACE_COUNT, XI_ARCS};

#[derive(Parser, Debug)]
#[command(name = "kovtop", version, about = "Bifurcation diagrams, separating set and orbit codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Model {
    /// Pencil parameter (must be positive)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    kappa: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c1: f64,
}

#[derive(Args, Debug, Clone, Copy)]
struct Orbit {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Svg,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Region, subregion and code of an orbit
    Classify {
        #[command(flatten)]
        orbit: Orbit,
        #[command(flatten)]
        model: Model,
        /// Also print a tab-separated record
        #[arg(long)]
        record: bool,
    },
    /// Write the bifurcation diagram of an orbit
    Diagram {
        #[command(flatten)]
        orbit: Orbit,
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
    /// Write the separating curves in the (u, v) plane
    Atlas {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        out: PathBuf,
        /// u0,u1,v0,v1
        #[arg(long)]
        window: Option<String>,
        /// Defaults to the extension of --out
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Fomenko graph and Liouville class of an isoenergy surface
    Isoenergy {
        #[command(flatten)]
        orbit: Orbit,
        #[command(flatten)]
        model: Model,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
    },
    /// Adjacency of chambers and faces
    Chambers {
        /// Chamber (graph number, or E for the empty set)
        #[arg(long, conflicts_with = "face", required_unless_present = "face")]
        graph: Option<String>,
        /// Second chamber: print the faces between the two
        #[arg(long, requires = "graph")]
        to: Option<String>,
        /// Face number, with or without the leading p
        #[arg(long)]
        face: Option<String>,
    },
    /// Numerical cross-check of the analytic diagram
    Verify {
        #[command(flatten)]
        orbit: Orbit,
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Validate the embedded tables
    Selfcheck,
}

fn model(m: Model) -> Result<ModelParams> {
    let p = ModelParams::new(m.kappa, m.c1)?;
    p.require_compact()?;
    Ok(p)
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DataIntegrity(_) => 2,
        _ => 1,
    }
}

/// Parses argv (program name first), runs the command and returns the exit
/// code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run_with(argv, &mut out)
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Domain(format!("i/o: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Classify { orbit, model: m, record } => {
            let m = model(m)?;
            let cls = separating::classify(orbit.a, orbit.b, &m)?;
            let code = code::code_for_orbit(orbit.a, orbit.b, &m)?;
            writeln!(out, "region {}", cls.region.major).map_err(io)?;
            writeln!(out, "subregion {}", cls.region).map_err(io)?;
            writeln!(out, "code {code}").map_err(io)?;
            if record {
                writeln!(
                    out,
                    "a={}\tb={}\tregion={}\tsubregion={}\tcode={}",
                    orbit.a, orbit.b, cls.region.major, cls.region, code
                )
                .map_err(io)?;
            }
        }
        Command::Diagram { orbit, model: m, out: path, format } => {
            let m = model(m)?;
            let d = bifurcation::diagram(orbit.a, orbit.b, &m)?;
            let text = match format {
                Format::Csv => export::diagram_csv(&d, &m)?,
                Format::Svg => export::diagram_svg(&d, &m)?,
            };
            write_file(&path, &text)?;
            writeln!(out, "{} arcs, {} singular points -> {}", d.arcs.len(), d.singular_points.len(), path.display())
                .map_err(io)?;
        }
        Command::Atlas { model: m, out: path, window, format } => {
            let m = model(m)?;
            let w = match window {
                Some(s) => parse_window(&s)?,
                None => Window::default_for(&m),
            };
            let format = match format {
                Some(f) => f,
                None => match path.extension().and_then(|e| e.to_str()) {
                    Some("svg") => Format::Svg,
                    Some("csv") => Format::Csv,
                    _ => return Err(Error::Domain("cannot infer --format from the file name".into())),
                },
            };
            let pieces = export::atlas(w, 400, &m)?;
            let text = match format {
                Format::Csv => export::atlas_csv(&pieces),
                Format::Svg => export::atlas_svg(&pieces),
            };
            write_file(&path, &text)?;
            writeln!(out, "{} curve pieces -> {}", pieces.len(), path.display()).map_err(io)?;
        }
        Command::Isoenergy { orbit, model: m, h } => {
            let m = model(m)?;
            let c = code::isoenergy_class(orbit.a, orbit.b, h, &m)?;
            writeln!(out, "{c}").map_err(io)?;
        }
        Command::Chambers { graph, to, face } => chambers(graph, to, face, out)?,
        Command::Verify {
            orbit,
            model: m,
            restarts,
            samples,
            seed,
        } => {
            let m = model(m)?;
            let budget = Budget { restarts, samples, seed };
            let r = oracle::verify_diagram(orbit.a, orbit.b, budget, &m)?;
            if let Some(reg) = &r.region {
                writeln!(out, "subregion {reg}").map_err(io)?;
            }
            for x in &r.matches {
                let found = x
                    .empirical
                    .map(|(h, k)| format!("{h:.12} {k:.12}"))
                    .unwrap_or_else(|| "none".into());
                writeln!(
                    out,
                    "{:<4} analytic {:.12} {:.12}  found {}  distance {:.3e}",
                    x.label, x.analytic.0, x.analytic.1, found, x.distance
                )
                .map_err(io)?;
            }
            writeln!(
                out,
                "{} critical values, {} missing, {} spurious, {} pinned, max mismatch {:.3e}",
                r.empirical_count,
                r.missing.len(),
                r.spurious.len(),
                r.pinned.len(),
                r.max_mismatch
            )
            .map_err(io)?;
            writeln!(out, "cloud h in [{:.6}, {:.6}]", r.cloud_h_range.0, r.cloud_h_range.1).map_err(io)?;
            if r.passed {
                writeln!(out, "PASS").map_err(io)?;
            } else {
                writeln!(out, "FAIL").map_err(io)?;
                return Err(Error::NoMatch(format!("verification failed, missing {:?}", r.missing)));
            }
        }
        Command::Selfcheck => {
            for line in selfcheck()? {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn parse_window(s: &str) -> Result<Window> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Domain(format!("bad window {s:?}")))?;
    match v[..] {
        [u0, u1, v0, v1] if u0 < u1 && v0 < v1 && v.iter().all(|x| x.is_finite()) => Ok(Window { u0, u1, v0, v1 }),
        _ => Err(Error::Domain(format!("window must be u0,u1,v0,v1 with u0<u1, v0<v1; got {s:?}"))),
    }
}

fn chambers(graph: Option<String>, to: Option<String>, face: Option<String>, out: &mut dyn Write) -> Result<()> {
    let t = data::tables()?;
    if let Some(p) = face {
        let id: u8 = p
            .trim_start_matches('p')
            .parse()
            .map_err(|_| Error::Domain(format!("bad face {p:?}")))?;
        let f = t
            .faces
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::Domain(format!("no face p{id}")))?;
        writeln!(
            out,
            "p{} {}: above {}, below {}",
            f.id,
            f.label,
            topology::chamber_name(f.above),
            topology::chamber_name(f.below)
        )
        .map_err(io)?;
        return Ok(());
    }
    let g = topology::parse_chamber(graph.as_deref().unwrap_or_default())?;
    if let Some(other) = to {
        let h = topology::parse_chamber(&other)?;
        let faces = topology::face_between(g, h)?;
        let names: Vec<String> = faces.iter().map(|f| f.to_string()).collect();
        writeln!(out, "{}", if names.is_empty() { "none".to_string() } else { names.join(" ") }).map_err(io)?;
        return Ok(());
    }
    for f in t.faces.iter().filter(|f| f.above == g || f.below == g) {
        let (side, other) = if f.above == g { ("below", f.below) } else { ("above", f.above) };
        writeln!(out, "p{} {}: {} {}", f.id, f.label, side, topology::chamber_name(other)).map_err(io)?;
    }
    Ok(())
}

/// Checks the embedded tables and returns the report lines; the last one is
/// the summary.
pub fn selfcheck() -> Result<Vec<String>> {
    let t = data::tables()?;
    let mut lines = Vec::new();
    for c in &t.checksums {
        if !c.ok() {
            return Err(Error::DataIntegrity(format!(
                "{}: sha256 {} differs from {}",
                c.file, c.actual, c.expected
            )));
        }
        lines.push(format!("{}: sha256 ok", c.file));
    }
    let census = code::census_of(t)?;
    for (class, graphs) in &census.by_class {
        let gs: Vec<String> = graphs.iter().map(|g| g.to_string()).collect();
        lines.push(format!("L{class}: {}", gs.join(" ")));
    }
    if census.graphs != GRAPH_COUNT || census.classes != code::CLASS_COUNT {
        return Err(Error::DataIntegrity(format!(
            "expected {GRAPH_COUNT} graphs and {} classes, found {} and {}",
            code::CLASS_COUNT,
            census.graphs,
            census.classes
        )));
    }
    if t.faces.len() != FACE_COUNT {
        return Err(Error::DataIntegrity(format!("expected {FACE_COUNT} faces, found {}", t.faces.len())));
    }
    for arc in XI_ARCS {
        let b = topology::admissible_matrix(arc)?;
        if !b.matrix.is_unimodular() {
            return Err(Error::DataIntegrity(format!("{arc} matrix is not unimodular")));
        }
        lines.push(format!("{arc}: det {}", b.matrix.det()));
    }
    let report = topology::validate_chamber_graph_in(t)?;
    if !report.consistent() {
        return Err(Error::DataIntegrity("chamber graph disagrees with the codes".into()));
    }
    for q in &report.quarantined {
        lines.push(format!("quarantined p{}: {}", q.face.id, q.reason));
    }
    lines.push(format!(
        "{} graphs, {} classes, {} faces, OK",
        census.graphs,
        census.classes,
        t.faces.len()
    ));
    Ok(lines)
}
