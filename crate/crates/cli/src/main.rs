//! `sigmafold`: generate, check, fold and export Σ-complexes.

use std::fmt::Write as _;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sigmafold_core::complex::{vertex_type_by_name, EulerReport, VertexCensus};
use sigmafold_core::generators::{self, GeneratorSpec, GENERATOR_NAMES};
use sigmafold_core::geometry::{self, CollisionReport, SweepOptions};
use sigmafold_core::io::{self, FrameRecord};
use sigmafold_core::star::t_of_alpha;
use sigmafold_core::{SigmaComplex, StarParams};

/// Version tag carried by every `--json` report.
const REPORT_SCHEMA: &str = "sigmafold-report/1";

#[derive(Parser)]
#[command(name = "sigmafold", version, about = "Bifoldable polyhedral complexes on a four-vector star")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named example complex and write its document.
    Generate(GenerateArgs),
    /// Check that a document describes a Σ-polyhedron.
    Validate { file: PathBuf },
    /// Count vertex types.
    Classify { file: PathBuf },
    /// Realize at one fold parameter and write an OBJ mesh.
    Fold {
        file: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        obj: PathBuf,
        /// Copies along each period of a periodic complex.
        #[arg(long, default_value_t = 2)]
        extent: usize,
    },
    /// Sample the fold and report intersecting facets.
    Sweep {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        #[arg(long, default_value_t = 2)]
        extent: usize,
    },
    /// Euler characteristic, genus and total curvature.
    Genus { file: PathBuf },
    /// Write one OBJ per frame plus a manifest.
    Animate {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        frames: usize,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        /// Explicit fold angles in degrees instead of uniform frames.
        #[arg(long, value_delimiter = ',')]
        alpha_deg: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        extent: usize,
    },
    /// Run the HTTP design service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// One of the generator names; see `--help`.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(GENERATOR_NAMES))]
    name: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Fractal generation.
    #[arg(long = "gen")]
    generation: Option<usize>,
    /// Gluing word of L and R for a Dos Equis stack.
    #[arg(long)]
    word: Option<String>,
    /// Hollowped index.
    #[arg(long)]
    index: Option<usize>,
    /// Emit the periodic complex instead of a finite patch.
    #[arg(long)]
    periodic: bool,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    lambda: f64,
    #[arg(long, num_args = 4, value_names = ["R1", "R2", "R3", "R4"])]
    r: Option<Vec<f64>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A failed run: exit status 1 with a message. Usage errors never get here;
/// clap exits with status 2 on its own.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

enum Outcome {
    Pass,
    Fail,
}

struct Ctx {
    json: bool,
}

impl Ctx {
    /// Prints the text report or, with `--json`, the value tagged with the
    /// report schema.
    fn emit<T: Serialize>(&self, kind: &str, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            let mut v = serde_json::to_value(value).expect("reports serialize");
            if let serde_json::Value::Object(map) = &mut v {
                map.insert("schema".into(), json!(REPORT_SCHEMA));
                map.insert("report".into(), json!(kind));
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
        } else {
            print!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let ctx = Ctx { json: cli.json };
    match run(&ctx, cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(Failure(msg)) => {
            if ctx.json {
                println!("{}", json!({ "schema": REPORT_SCHEMA, "report": "error", "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SIGMAFOLD_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if a pool already exists, which cannot happen this early.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn load(path: &Path) -> Result<(SigmaComplex, StarParams), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn run(ctx: &Ctx, cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Generate(a) => generate(ctx, a),
        Command::Validate { file } => validate(ctx, &file),
        Command::Classify { file } => classify(ctx, &file),
        Command::Fold { file, t, obj, extent } => fold(ctx, &file, t, &obj, extent),
        Command::Sweep { file, steps, margin, extent } => sweep(ctx, &file, steps, margin, extent),
        Command::Genus { file } => genus(ctx, &file),
        Command::Animate { file, frames, dir, margin, alpha_deg, extent } => animate(ctx, &file, frames, &dir, margin, &alpha_deg, extent),
        Command::Serve { port, host } => serve(&host, port),
    }
}

fn generate(ctx: &Ctx, a: GenerateArgs) -> Result<Outcome, Failure> {
    let r = match a.r.as_deref() {
        Some([r1, r2, r3, r4]) => [*r1, *r2, *r3, *r4],
        _ => [1.0; 4],
    };
    let params = StarParams::new(r, a.lambda)?;
    let spec = GeneratorSpec {
        name: a.name,
        m: a.m,
        n: a.n,
        generation: a.generation,
        word: a.word,
        index: a.index,
        periodic: a.periodic,
    };
    let complex = generators::generate(&spec)?;
    let unmet: Vec<String> = complex.requirements().iter().filter(|q| !q.holds(params.r())).map(|q| q.to_string()).collect();
    if !unmet.is_empty() {
        eprintln!("warning: mirrored copies are congruent only when {}", unmet.join(" and "));
    }
    let text = io::serialize(&complex, &params, Some(&spec));
    match &a.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let summary = json!({ "file": path, "facets": complex.len(), "periods": complex.periods().len() });
            ctx.emit("generate", &summary, || format!("wrote {} facets to {}\n", complex.len(), path.display()));
        }
        None => print!("{text}"),
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct ValidateReport {
    ok: bool,
    facets: usize,
    periods: usize,
    closed: bool,
    bad_edges: Vec<sigmafold_core::Edge>,
    bad_vertices: Vec<sigmafold_core::Coord4>,
    unrecognized_vertices: Vec<sigmafold_core::Coord4>,
}

fn validate(ctx: &Ctx, file: &Path) -> Result<Outcome, Failure> {
    let (c, _) = load(file)?;
    let poly = c.is_polyhedron();
    let census = c.vertex_census();
    let ok = poly.ok && census.unrecognized.is_empty();
    let report = ValidateReport {
        ok,
        facets: c.len(),
        periods: c.periods().len(),
        closed: c.is_closed(),
        bad_edges: poly.bad_edges,
        bad_vertices: poly.bad_vertices,
        unrecognized_vertices: census.unrecognized,
    };
    ctx.emit("validate", &report, || {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", file.display(), if ok { "valid Σ-polyhedron" } else { "INVALID" });
        let _ = writeln!(s, "  facets {}, periods {}, {}", report.facets, report.periods, if report.closed { "closed" } else { "with boundary" });
        for e in &report.bad_edges {
            let _ = writeln!(s, "  edge {} dir {} has more than two facets", e.tail, e.dir);
        }
        for v in &report.bad_vertices {
            let _ = writeln!(s, "  vertex {v} is not a manifold point");
        }
        for v in &report.unrecognized_vertices {
            let _ = writeln!(s, "  vertex {v} is not in the catalog");
        }
        s
    });
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct ClassifyReport {
    facets: usize,
    census: VertexCensus,
    curvature_sum: f64,
}

fn classify(ctx: &Ctx, file: &Path) -> Result<Outcome, Failure> {
    let (c, params) = load(file)?;
    let census = c.vertex_census();
    let gamma = params.gamma();
    let curvature_sum = census.types.iter().map(|(n, k)| vertex_type_by_name(*n).curvature(gamma) * *k as f64).sum();
    let report = ClassifyReport { facets: c.len(), census, curvature_sum };
    ctx.emit("classify", &report, || {
        let mut s = String::new();
        for (name, n) in &report.census.types {
            let _ = writeln!(s, "{:<14}{n}", name.as_str());
        }
        let _ = writeln!(s, "{:<14}{}", "boundary", report.census.boundary);
        if !report.census.unrecognized.is_empty() {
            let _ = writeln!(s, "{:<14}{}", "unrecognized", report.census.unrecognized.len());
        }
        let _ = writeln!(s, "interior curvature sum {:.12}", report.curvature_sum);
        s
    });
    Ok(if report.census.unrecognized.is_empty() { Outcome::Pass } else { Outcome::Fail })
}

fn fold(ctx: &Ctx, file: &Path, t: f64, obj: &Path, extent: usize) -> Result<Outcome, Failure> {
    let (c, params) = load(file)?;
    let mesh = geometry::realize(&c, &params, t, extent)?;
    fs::write(obj, io::export_obj(&mesh)).map_err(|e| Failure(format!("{}: {e}", obj.display())))?;
    let summary = json!({
        "file": obj,
        "t": t,
        "alpha_radians": mesh.state.alpha(),
        "vertices": mesh.vertices.len(),
        "quads": mesh.quads.len(),
    });
    ctx.emit("fold", &summary, || {
        format!("wrote {} vertices and {} quads at t={t} (α={:.6} rad) to {}\n", mesh.vertices.len(), mesh.quads.len(), mesh.state.alpha(), obj.display())
    });
    Ok(Outcome::Pass)
}

fn sweep(ctx: &Ctx, file: &Path, steps: usize, margin: f64, extent: usize) -> Result<Outcome, Failure> {
    let (c, params) = load(file)?;
    let opts = SweepOptions { steps, extent, ..SweepOptions::with_margin(margin) };
    let report: CollisionReport = geometry::collision_sweep(&c, &params, &opts)?;
    ctx.emit("sweep", &report, || {
        let mut s = String::new();
        if report.is_empty() {
            let _ = writeln!(s, "no collisions over t in [{margin}, {}] ({steps} samples)", 1.0 - margin);
        }
        for h in &report.hits {
            let _ = writeln!(s, "{} meets {} for t in [{:.4}, {:.4}]", h.facet_a, h.facet_b, h.t_lo, h.t_hi);
        }
        s
    });
    Ok(if report.is_empty() { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct GenusReport {
    closed: bool,
    periodic: bool,
    vertices: usize,
    edges: usize,
    faces: usize,
    chi: i64,
    boundary_components: usize,
    genus: Option<i64>,
    curvature_sum: Option<f64>,
    /// Periods of the orientation-preserving sublattice used for the quotient.
    quotient_periods: Vec<sigmafold_core::Coord4>,
}

fn genus(ctx: &Ctx, file: &Path) -> Result<Outcome, Failure> {
    let (c, params) = load(file)?;
    let report = if c.is_periodic() && c.is_closed() {
        let sub = c.orientation_preserving_periods()?;
        let e: EulerReport = c.oriented_quotient_euler(params.gamma())?;
        GenusReport {
            closed: true,
            periodic: true,
            vertices: e.vertices,
            edges: e.edges,
            faces: e.faces,
            chi: e.chi,
            boundary_components: 0,
            genus: e.genus,
            curvature_sum: Some(e.curvature_sum),
            quotient_periods: sub,
        }
    } else {
        let (v, e, f) = (c.vertices().len(), c.edges().len(), c.len());
        let chi = v as i64 - e as i64 + f as i64;
        let b = c.boundary_loops().len();
        let twice = 2 - chi - b as i64;
        GenusReport {
            closed: b == 0,
            periodic: c.is_periodic(),
            vertices: v,
            edges: e,
            faces: f,
            chi,
            boundary_components: b,
            genus: (!c.is_periodic() && twice >= 0 && twice % 2 == 0).then_some(twice / 2),
            curvature_sum: None,
            quotient_periods: c.periods().to_vec(),
        }
    };
    ctx.emit("genus", &report, || {
        let mut s = format!("V={} E={} F={} chi={}", report.vertices, report.edges, report.faces, report.chi);
        if report.boundary_components > 0 {
            let _ = write!(s, " boundary components={}", report.boundary_components);
        }
        match report.genus {
            Some(g) => {
                let _ = write!(s, " genus={g}");
            }
            None => s.push_str(" genus undefined"),
        }
        if let Some(k) = report.curvature_sum {
            let _ = write!(s, " curvature sum={k:.12} ({:.6}π)", k / std::f64::consts::PI);
        }
        s.push('\n');
        s
    });
    Ok(Outcome::Pass)
}

fn animate(ctx: &Ctx, file: &Path, frames: usize, dir: &Path, margin: f64, alpha_deg: &[f64], extent: usize) -> Result<Outcome, Failure> {
    let (c, params) = load(file)?;
    let records: Vec<FrameRecord> = if alpha_deg.is_empty() {
        io::export_animation(&c, &params, frames, dir, margin, extent)?
    } else {
        let times: Vec<f64> = alpha_deg.iter().map(|a| t_of_alpha(params.lambda(), a.to_radians())).collect::<Result<_, _>>()?;
        io::export_animation_at(&c, &params, &times, dir, extent)?
    };
    let summary = json!({ "dir": dir, "frames": records });
    ctx.emit("animate", &summary, || {
        let mut s = String::new();
        for r in &records {
            let _ = writeln!(s, "{} t={:.6} α={:.4}°", r.file, r.t, r.alpha_radians.to_degrees());
        }
        s
    });
    Ok(Outcome::Pass)
}

fn serve(host: &str, port: u16) -> Result<Outcome, Failure> {
    let addr: SocketAddr = format!("{host}:{port}").parse()?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(sigmafold_service::serve(addr))?;
    Ok(Outcome::Pass)
}
