use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ncg_core::graph::{encode_graph6, isomorphic_small, k33, pappus, GraphError, K33_NAMES};
use ncg_core::kgroup::{find_unit_cube_roots, KError, KParams};
use ncg_core::symmetry::{certify_non_cayley, is_prime, CertifyOptions, SymmetryError, DEFAULT_VERTEX_CAP};
use ncg_core::voltage::{ncg_cover, ArcVoltage, CoverGraph, VoltageAssignment, VoltageError};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;
const EXIT_CONTRADICTION: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ncg", version, about = "Cubic symmetric non-Cayley graphs of order 18n^3 as covers of K3,3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// Modulus n of the voltage group.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    /// Root r of r^2 + r + 1 = 0 (mod n); defaults to the smallest one.
    #[arg(long)]
    root: Option<u64>,
    /// Largest number of cover vertices to construct.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    /// Record per-stage timings in the certificate.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the cover as graph6 plus a JSON label sidecar.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Output graph6 path; the sidecar goes next to it with a `.labels.json` suffix.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON list of {tail, head, voltage: [x,y,z,t]} on K3,3 replacing the built-in
        /// assignment; unlisted arcs carry the identity.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Run every check and write a JSON certificate.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Certificate path; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Seed for randomized searches in groups too large to enumerate.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the full automorphism group computation.
        #[arg(long)]
        skip_full_aut: bool,
    },
    /// Quotient of the cover by a group of translations.
    Quotient {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        by: QuotientBy,
        /// Output graph6 path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum QuotientBy {
    /// All translations; the quotient is K3,3.
    VoltageGroup,
    /// Translations by a, b, c; the quotient is the Pappus graph.
    SylowP,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<SymmetryError> for Failure {
    fn from(e: SymmetryError) -> Self {
        let code = match &e {
            SymmetryError::NoRoot(_)
            | SymmetryError::InvalidParams(_)
            | SymmetryError::SizeCap { .. }
            | SymmetryError::NotApplicable(_)
            | SymmetryError::Graph(GraphError::SizeCap { .. }) => EXIT_PRECONDITION,
            _ => EXIT_CONTRADICTION,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<KError> for Failure {
    fn from(e: KError) -> Self {
        SymmetryError::from(e).into()
    }
}

impl From<VoltageError> for Failure {
    fn from(e: VoltageError) -> Self {
        match e {
            VoltageError::K(k) => k.into(),
            other => SymmetryError::Voltage(other).into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        SymmetryError::Graph(e).into()
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))
}

fn params(common: &Common) -> Result<KParams, Failure> {
    let roots = find_unit_cube_roots(common.n)?;
    if roots.is_empty() {
        return Err(KError::NoRoot(common.n).into());
    }
    let order = 18u128 * (common.n as u128).pow(3);
    if order > common.cap as u128 {
        return Err(SymmetryError::SizeCap {
            what: "cover".into(),
            size: order,
            cap: common.cap as u128,
        }
        .into());
    }
    Ok(match common.root {
        Some(r) => KParams::new(common.n, r)?,
        None => KParams::with_default_root(common.n)?,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn timed<T>(stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("[{stage}] {:.2}s", start.elapsed().as_secs_f64());
    out
}

fn read_assignment(p: &KParams, path: &Path) -> Result<VoltageAssignment<KParams>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let arcs: Vec<ArcVoltage<_>> = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot parse {}: {e}", path.display())))?;
    VoltageAssignment::from_arc_voltages(*p, k33(), &arcs)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, format!("invalid assignment: {e}")))
}

fn generate(common: &Common, out: Option<PathBuf>, assignment: Option<PathBuf>) -> Result<(), Failure> {
    let p = params(common)?;
    let cover = match assignment {
        Some(path) => {
            let va = read_assignment(&p, &path)?;
            timed("cover", || CoverGraph::build(va))?
        }
        None => timed("cover", || ncg_cover(&p))?,
    };
    let g6 = encode_graph6(cover.graph())?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("ncg{}.g6", p.n())));
    fs::write(&out, format!("{g6}\n")).map_err(|e| io_failure(&out, e))?;
    let names: Vec<String> = K33_NAMES.iter().map(|s| s.to_string()).collect();
    let sidecar = json!({
        "params": p,
        "vertex_count": cover.graph().vertex_count(),
        "edge_count": cover.graph().edge_count(),
        "assignment": cover.assignment().arc_voltages(),
        "cover": cover.labels(&names),
    });
    let mut side_path = out.clone().into_os_string();
    side_path.push(".labels.json");
    let side_path = PathBuf::from(side_path);
    let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    fs::write(&side_path, format!("{text}\n")).map_err(|e| io_failure(&side_path, e))?;
    println!(
        "wrote {} ({} vertices, {} edges, r = {}) and {}",
        out.display(),
        cover.graph().vertex_count(),
        cover.graph().edge_count(),
        p.r(),
        side_path.display()
    );
    Ok(())
}

fn verify(common: &Common, report: Option<PathBuf>, seed: u64, skip_full_aut: bool) -> Result<u8, Failure> {
    params(common)?;
    let options = CertifyOptions {
        root: common.root,
        vertex_cap: common.cap,
        skip_full_aut,
        seed,
        record_timings: common.verbose,
    };
    let cert = certify_non_cayley(common.n, &options, |stage, secs| eprintln!("[{stage}] {secs:.2}s"))?;
    let text = serde_json::to_string_pretty(&cert).expect("certificate serializes");
    write_or_print(report.as_deref(), &format!("{text}\n"))?;
    for c in &cert.contradictions {
        eprintln!("contradiction: {c}");
    }
    let code = if !cert.contradictions.is_empty() {
        EXIT_CONTRADICTION
    } else if !cert.complete {
        eprintln!("certificate incomplete: full automorphism group not computed");
        EXIT_INCOMPLETE
    } else if cert.non_cayley {
        0
    } else {
        EXIT_CONTRADICTION
    };
    eprintln!(
        "n = {}, r = {}: order {}, |F| = {}, type {}, non_cayley = {}",
        cert.params.n(),
        cert.params.r(),
        cert.graph.order,
        cert.lifted_group_order,
        cert.type_tag,
        cert.non_cayley
    );
    Ok(code)
}

fn quotient(common: &Common, by: QuotientBy, out: Option<PathBuf>) -> Result<u8, Failure> {
    let p = params(common)?;
    if by == QuotientBy::SylowP && !is_prime(p.n()) {
        return Err(SymmetryError::NotApplicable(format!("{} is not prime", p.n())).into());
    }
    let cover = timed("cover", || ncg_cover(&p))?;
    let (elements, target, name) = match by {
        QuotientBy::VoltageGroup => (vec![p.a(), p.b(), p.c(), p.h()], k33(), "K3,3"),
        QuotientBy::SylowP => (vec![p.a(), p.b(), p.c()], pappus(), "the Pappus graph"),
    };
    let group = cover.translation_group(&elements);
    let (q, _) = timed("quotient", || cover.graph().quotient_by(&group))?;
    write_or_print(out.as_deref(), &format!("{}\n", encode_graph6(&q)?))?;
    let iso = isomorphic_small(&q, &target)?.is_some();
    eprintln!(
        "quotient has {} vertices and {} edges; isomorphic to {name}: {}",
        q.vertex_count(),
        q.edge_count(),
        if iso { "yes" } else { "no" }
    );
    Ok(if iso { 0 } else { EXIT_CONTRADICTION })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate { common, out, assignment } => generate(&common, out, assignment).map(|_| 0),
        Command::Verify {
            common,
            report,
            seed,
            skip_full_aut,
        } => verify(&common, report, seed, skip_full_aut),
        Command::Quotient { common, by, out } => quotient(&common, by, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
