use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexilab::error::{AnalysisError, PolyError, RigidityError};
use flexilab::generators::{generate, GENERATORS};
use flexilab::io::{load_polyhedron, to_json, to_off, FileFormat};
use flexilab::numeric::{format_rational, parse_rational};
use flexilab::poly::multiplicity::{multiplicity_exact, multiplicity_in_v};
use flexilab::poly::volpoly::{classify, specialize, volume_polynomial, SpecializeOptions};
use flexilab::verify::{analyze, default_eps, render_text, AnalysisOptions, Mode, Verdict};
use flexilab::volume::oriented_volume;
use flexilab::{AnyEmbedding, CombinatorialSurface, Rational};
use serde::Serialize;

const EXIT_VALIDATION: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_THEOREM_FAIL: u8 = 5;

#[derive(Parser)]
#[command(name = "flexilab", version, about = "Infinitesimal flexibility and volume polynomials of closed polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report of one instance.
    Analyze(CommonArgs),
    /// Volume polynomial of the instance's class, symbolic or specialized.
    Volpoly {
        #[command(flatten)]
        common: CommonArgs,
        /// Emit only the symbolic polynomial in V and the squared edge lengths.
        #[arg(long)]
        symbolic: bool,
    },
    /// Check that the volume is a multiple root; exit 5 on failure.
    Verify(CommonArgs),
    /// Write a generated instance as JSON or OFF.
    Generate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List the built-in generators.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Floating,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
    Off,
}

#[derive(Args)]
struct CommonArgs {
    /// Input polyhedron (.json or .off).
    #[arg(value_name = "PATH", conflicts_with_all = ["gen", "input"])]
    path: Option<PathBuf>,
    /// Built-in generator name (see `flexilab list`).
    #[arg(long = "gen", value_name = "NAME", conflicts_with = "input")]
    gen: Option<String>,
    /// Input polyhedron (.json or .off).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Relative singular-value threshold for floating mode.
    #[arg(long, default_value_t = flexilab::rigidity::DEFAULT_TOLERANCE)]
    tol: f64,
    /// Comma-separated nonzero rationals, e.g. `1/10,-1/10`.
    #[arg(long, value_name = "LIST")]
    eps: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for polynomial evaluation.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Skip composing the volume polynomial with the ε-family.
    #[arg(long)]
    no_family: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        let code = match e {
            PolyError::UnsupportedClass | PolyError::SymbolicUnavailable(_) | PolyError::ClassMismatch(_) => {
                EXIT_UNSUPPORTED
            }
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Rigidity(r @ RigidityError::ToleranceAmbiguous { .. }) => {
                Failure::new(EXIT_TOLERANCE, r.to_string())
            }
            AnalysisError::Poly(p) => p.into(),
            other => Failure::new(EXIT_VALIDATION, other.to_string()),
        }
    }
}

struct Loaded {
    name: String,
    params: Vec<(String, String)>,
    surface: CombinatorialSurface,
    embedding: AnyEmbedding,
}

fn load(a: &CommonArgs) -> Result<Loaded, Failure> {
    if let Some(g) = &a.gen {
        let inst = generate(g, a.seed).map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
        return Ok(Loaded { name: inst.name, params: inst.params, surface: inst.surface, embedding: inst.embedding });
    }
    let path = a
        .input
        .as_ref()
        .or(a.path.as_ref())
        .ok_or_else(|| Failure::new(EXIT_VALIDATION, "give --gen NAME or an input path"))?;
    let (surface, embedding) =
        load_polyhedron(path).map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Loaded { name, params: Vec::new(), surface, embedding })
}

fn options(a: &CommonArgs) -> Result<AnalysisOptions, Failure> {
    if !(a.tol > 0.0) {
        return Err(Failure::new(EXIT_VALIDATION, "--tol must be positive"));
    }
    let eps_samples = match &a.eps {
        None => default_eps(),
        Some(list) => list
            .split(',')
            .map(|s| match parse_rational(s.trim()) {
                Some(r) if r != Rational::from_integer(0.into()) => Ok(r),
                _ => Err(Failure::new(EXIT_VALIDATION, format!("bad ε sample `{s}`"))),
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(AnalysisOptions {
        mode: match a.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Floating => Mode::Floating,
        },
        tolerance: a.tol,
        eps_samples,
        seed: a.seed,
        jobs: a.jobs.max(1),
        family_identity: !a.no_family,
    })
}

/// Writes through a temporary sibling and a rename.
fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new(1, format!("write failed: {e}"));
    match output {
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let file = path.file_name().ok_or_else(|| Failure::new(EXIT_VALIDATION, "output is not a file"))?;
            let tmp = dir.join(format!(".{}.tmp", file.to_string_lossy()));
            std::fs::write(&tmp, text).map_err(io)?;
            std::fs::rename(&tmp, path).map_err(io)
        }
    }
}

fn cmd_analyze(a: &CommonArgs, is_verify: bool) -> Result<u8, Failure> {
    let inst = load(a)?;
    let opts = options(a)?;
    let report = analyze(&inst.name, &inst.params, &inst.surface, &inst.embedding, &opts)?;
    let render = |f: OutFormat| match f {
        OutFormat::Json => Ok(report.to_json()),
        OutFormat::Text => Ok(render_text(&report)),
        OutFormat::Off => Err(Failure::new(EXIT_VALIDATION, "OFF output only applies to `generate`")),
    };
    if is_verify {
        // the report goes to --output (JSON unless asked otherwise); stdout gets the summary
        if a.output.is_some() {
            emit(&a.output, &render(a.format.unwrap_or(OutFormat::Json))?)?;
        }
        let paths: Vec<String> = report.flexes.iter().map(|f| format!("{:?}", f.proof_path)).collect();
        println!("verdict: {:?}", report.theorem_verdict);
        println!("reason: {}", report.verdict_reason);
        if !paths.is_empty() {
            println!("proof path: {}", paths.join(", "));
        }
        if let Some(m) = &report.multiplicity {
            println!("multiplicity: {} (square-free part: {})", m.raw, m.squarefree);
        }
        return Ok(if report.theorem_verdict == Verdict::Fail { EXIT_THEOREM_FAIL } else { 0 });
    }
    let text = render(a.format.unwrap_or(OutFormat::Json))?;
    emit(&a.output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VolpolyOutput {
    schema: &'static str,
    class: String,
    degree_v: usize,
    /// 1-based endpoints of the edge behind each `l_k`.
    edges: Vec<[usize; 2]>,
    symbolic: Option<flexilab::poly::multipoly::PolyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    specialized: Option<Specialized>,
}

#[derive(Serialize)]
struct Specialized {
    volume: String,
    raw: flexilab::poly::unipoly::UniPolyJson,
    squarefree: flexilab::poly::unipoly::UniPolyJson,
    multiplicity: usize,
    multiplicity_squarefree: usize,
}

fn cmd_volpoly(a: &CommonArgs, symbolic_only: bool) -> Result<u8, Failure> {
    let inst = load(a)?;
    let opts = options(a)?;
    let class = classify(&inst.surface)?.class();
    let symbolic = match volume_polynomial(&inst.surface) {
        Ok(q) => Some(q),
        Err(e @ PolyError::SymbolicUnavailable(_)) if symbolic_only => return Err(e.into()),
        Err(PolyError::SymbolicUnavailable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let specialized = if symbolic_only {
        None
    } else {
        let e = inst.embedding.to_exact().ok_or_else(|| Failure::new(EXIT_VALIDATION, "non-finite coordinate"))?;
        let v0 = oriented_volume(&inst.surface, &e);
        let q = specialize(
            &inst.surface,
            &e.squared_edge_lengths(&inst.surface),
            &SpecializeOptions { seed: SpecializeOptions::default().seed ^ opts.seed, jobs: opts.jobs },
        )?;
        let m = multiplicity_exact(&q.raw, &v0);
        debug_assert_eq!(m, multiplicity_in_v(&q.raw_in_v(), &v0));
        Some(Specialized {
            volume: format_rational(&v0),
            raw: q.raw.to_json("W"),
            squarefree: q.squarefree.to_json("W"),
            multiplicity: m,
            multiplicity_squarefree: multiplicity_exact(&q.squarefree, &v0),
        })
    };
    let out = VolpolyOutput {
        schema: "flexilab/volpoly/v1",
        class: class.name().into(),
        degree_v: 2 * class.w_degree(),
        edges: inst.surface.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        symbolic: symbolic.as_ref().map(|q| q.poly().to_json()),
        specialized,
    };
    let text = match a.format.unwrap_or(OutFormat::Json) {
        OutFormat::Json => serde_json::to_string_pretty(&out).expect("serializable") + "\n",
        OutFormat::Text => {
            let mut s = format!("class {}\ndegree {} in V\n", out.class, out.degree_v);
            for (k, e) in out.edges.iter().enumerate() {
                s += &format!("l_{} = |x{} - x{}|^2\n", k + 1, e[0], e[1]);
            }
            if let Some(q) = &symbolic {
                s += &format!("Q = {}\n", q.poly());
            }
            if let Some(sp) = &out.specialized {
                s += &format!("volume {}\n", sp.volume);
                s += &format!("Q(W) coefficients (ascending) {}\n", sp.raw.coeffs.join(" "));
                s += &format!("multiplicity {} (square-free part: {})\n", sp.multiplicity, sp.multiplicity_squarefree);
            }
            s
        }
        OutFormat::Off => return Err(Failure::new(EXIT_VALIDATION, "OFF output only applies to `generate`")),
    };
    emit(&a.output, &text)?;
    Ok(0)
}

fn cmd_generate(a: &CommonArgs) -> Result<u8, Failure> {
    let inst = load(a)?;
    let format = a.format.unwrap_or_else(|| match a.output.as_deref().map(FileFormat::from_path) {
        Some(FileFormat::Off) => OutFormat::Off,
        _ => OutFormat::Json,
    });
    let text = match format {
        OutFormat::Off => to_off(&inst.surface, &inst.embedding),
        _ => to_json(&inst.surface, &inst.embedding),
    };
    emit(&a.output, &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, false),
        Command::Verify(a) => cmd_analyze(a, true),
        Command::Volpoly { common, symbolic } => cmd_volpoly(common, *symbolic),
        Command::Generate { common } => cmd_generate(common),
        Command::List => {
            for g in GENERATORS {
                println!("{:<20} {}", g.name, g.description);
            }
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
